"""
Tests for configuration management
"""

import pytest
import tempfile
import yaml
from pathlib import Path

from wristauth.core.config import PRESETS, Config, preset_names


class TestConfig:
    """Test configuration management"""

    def test_config_loading(self):
        """Test configuration loading from file"""
        config_data = {
            'app': {
                'name': 'TestApp',
                'version': '1.0.0'
            },
            'filter': {
                'window': 11,
                'degree': 3
            }
        }

        with tempfile.NamedTemporaryFile(mode='w', suffix='.yaml', delete=False) as f:
            yaml.dump(config_data, f)
            config_path = f.name

        try:
            config = Config(config_path)

            assert config.get('app.name') == 'TestApp'
            assert config.get('app.version') == '1.0.0'
            assert config.get_filter_params() == {'window': 11, 'degree': 3}

        finally:
            Path(config_path).unlink()

    def test_config_defaults(self):
        """Test that a partial file is merged over the built-in defaults"""
        config_data = {'auth': {'threshold': 0.6}}

        with tempfile.NamedTemporaryFile(mode='w', suffix='.yaml', delete=False) as f:
            yaml.dump(config_data, f)
            config_path = f.name

        try:
            config = Config(config_path)

            assert config.get('auth.threshold') == 0.6
            assert config.get('auth.weights') is None
            assert config.get('filter.window') == 9
            assert config.get('synth.attack.rotation_fidelity') == 0.6
            assert config.get('nonexistent.key', 'default') == 'default'

        finally:
            Path(config_path).unlink()

    def test_defaults_without_file(self):
        """Test that no path gives the built-in defaults"""
        config = Config()

        assert config.get('seed') == 7
        assert config.get_auth_params() == {'threshold': 0.55, 'weights': None, 'auc_floor': 0.85}
        assert config.get_dtw_params() == {'band': None, 'workers': 1}
        assert config.validate()

    def test_config_setting(self):
        """Test setting configuration values"""
        config = Config()

        config.set('dtw.band', 12)
        config.set('new.section.key', 'value')

        assert config.get_dtw_params()['band'] == 12
        assert config.get('new.section.key') == 'value'

    def test_config_saving(self, tmp_path):
        """Test saving configuration to file"""
        config = Config()
        config.set('auth.threshold', 0.62)

        path = tmp_path / "saved.yaml"
        config.save(str(path))

        reloaded = Config(str(path))
        assert reloaded.get('auth.threshold') == 0.62
        assert reloaded.fingerprint() == config.fingerprint()

    def test_presets(self):
        """Test named threshold presets"""
        config = Config()

        config.apply_preset('hardened')
        assert config.get_auth_params()['threshold'] == 0.65
        config.apply_preset('balanced')
        assert config.get_auth_params()['threshold'] == 0.62
        config.apply_preset('paper-default')
        assert config.get_auth_params()['threshold'] == 0.55
        assert config.get('auth.preset') == 'paper-default'
        assert PRESETS == {'paper-default': 0.55, 'hardened': 0.65, 'balanced': 0.62}

        with pytest.raises(ValueError):
            config.apply_preset('lenient')

    def test_preset_alias(self):
        """Test that standard names the paper-default operating point"""
        config = Config()
        config.apply_preset('hardened')
        config.apply_preset('standard')

        assert config.get_auth_params()['threshold'] == 0.55
        assert config.get('auth.preset') == 'paper-default'
        assert preset_names() == ['balanced', 'hardened', 'paper-default', 'standard']

    def test_preset_from_file(self, tmp_path):
        """Test that a preset named in the file sets the threshold"""
        path = tmp_path / 'config.yaml'
        path.write_text(yaml.safe_dump({'auth': {'preset': 'balanced'}}))
        assert Config(str(path)).get_auth_params()['threshold'] == 0.62

        path.write_text(yaml.safe_dump({'auth': {'preset': 'lenient'}}))
        with pytest.raises(ValueError):
            Config(str(path))

    def test_fingerprint_tracks_changes(self):
        """Test that the fingerprint changes with any resolved value"""
        first, second = Config(), Config()
        assert first.fingerprint() == second.fingerprint()

        second.set('seed', 8)
        assert first.fingerprint() != second.fingerprint()

    def test_validation(self):
        """Test rejection of invalid values"""
        config = Config()
        config.set('filter.window', 8)
        with pytest.raises(ValueError, match="window"):
            config.validate()

        config = Config()
        config.set('filter.degree', 9)
        with pytest.raises(ValueError, match="degree"):
            config.validate()

        config = Config()
        config.set('auth.weights', [0.5, 0.5, 0.5, 0, 0, 0])
        with pytest.raises(ValueError, match="weights"):
            config.validate()

        config = Config()
        config.set('auth.threshold', 1.5)
        with pytest.raises(ValueError, match="threshold"):
            config.validate()

    def test_section_accessors_carry_seed(self):
        """Test that seeded sections report the master seed"""
        config = Config()
        config.set('seed', 99)

        assert config.get_synth_params()['seed'] == 99
        assert config.get_eval_params()['seed'] == 99
        assert config.get_baseline_params()['seed'] == 99
        assert config.get_synth_params()['attack']['strengths']['script'] == 0.5

    def test_repository_config_matches_defaults(self):
        """Test that the shipped config.yaml resolves to the defaults"""
        shipped = Path(__file__).parent.parent / "config.yaml"
        assert Config(str(shipped)).fingerprint() == Config().fingerprint()

    def test_missing_config_file(self):
        """Test handling of missing config file"""
        with pytest.raises(FileNotFoundError):
            Config('nonexistent_config.yaml')

    def test_unparsable_config_file(self, tmp_path):
        """Test handling of a file that is not a mapping"""
        path = tmp_path / "broken.yaml"
        path.write_text("- just\n- a list\n")
        with pytest.raises(RuntimeError):
            Config(str(path))
