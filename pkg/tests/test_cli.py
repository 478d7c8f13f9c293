"""
Tests for the command line interface
"""

import logging

import numpy as np
import pytest
import yaml

from wristauth.auth.scoring import weights_from_auc
from wristauth.core.app import WristAuthApp
from wristauth.core.exceptions import DomainError
from wristauth.storage.manager import ProfileStore
from wristauth.utils.cli import EXIT_DENY, EXIT_ERROR, EXIT_OK, build_parser, main

from .conftest import SMALL_SYNTH

# Per-dimension AUCs of a calibrated writer, ax..gz
REFERENCE_AUC = (0.8556, 0.9130, 0.9985, 0.9839, 0.9851, 0.8682)


@pytest.fixture(autouse=True)
def restore_logging():
    """setup_logging replaces the root handlers; put them back after each command"""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture(scope="module")
def workspace(tmp_path_factory):
    """A config file for the tiny dataset and the dataset generated from it"""
    root = tmp_path_factory.mktemp("cli")
    document = {
        'seed': SMALL_SYNTH['seed'],
        'synth': {k: v for k, v in SMALL_SYNTH.items() if k != 'seed'},
        'evaluation': {'fractions': [0.0, 0.5], 'progress': False, 'roc_csv': True},
        'baseline': {'pairs': 200, 'bins': 10, 'folds': 2, 'max_iter': 200},
    }
    config = root / "config.yaml"
    config.write_text(yaml.safe_dump(document), encoding='utf-8')

    root_logger = logging.getLogger()
    handlers, level = root_logger.handlers[:], root_logger.level
    assert main(["--config", str(config), "synth", str(root / "data")]) == EXIT_OK
    root_logger.handlers[:] = handlers
    root_logger.setLevel(level)
    return root, config


def _run(config, *argv):
    return main(["--config", str(config), "--log-level", "ERROR", *argv])


def _trials(root, *parts):
    return sorted(str(p) for p in root.joinpath("data", *parts).glob("*.csv"))


def _scores_with_aucs(aucs, n=100):
    """
    Genuine and impostor score columns whose per-dimension AUCs are exactly `aucs`

    Impostor scores are n distinct levels; each genuine score is placed just
    above the number of impostor scores it must beat.
    """
    step = 1.0 / (n + 2)
    impostor = np.tile(((np.arange(n) + 1) * step)[:, None], (1, len(aucs)))
    genuine = np.empty((n, len(aucs)))
    for k, a in enumerate(aucs):
        q, r = divmod(int(round(a * n * n)), n)
        beaten = np.full(n, q)
        beaten[:r] += 1
        genuine[:, k] = (beaten + 0.5) * step
    return genuine, impostor


def _write_scores(directory, rows):
    directory.mkdir()
    lines = ["ax,ay,az,gx,gy,gz"] + [",".join(repr(float(v)) for v in row) for row in rows]
    (directory / f"{directory.name}.scores.csv").write_text("\n".join(lines) + "\n")


@pytest.fixture(scope="module")
def profile_path(workspace):
    root, config = workspace
    path = root / "u01.profile.yaml"
    assert _run(config, "enroll", *_trials(root, "users", "u01", "enroll"), "-o", str(path)) == EXIT_OK
    return path


class TestCommands:
    """Test each subcommand end to end"""

    def test_synth_layout(self, workspace):
        root, _ = workspace
        assert (root / "data" / "manifest.yaml").is_file()
        assert len(_trials(root, "users", "u01", "enroll")) == 3

    def test_synth_refuses_non_empty(self, workspace, tmp_path):
        _, config = workspace
        (tmp_path / "keep.txt").write_text("x")
        assert _run(config, "synth", str(tmp_path)) == EXIT_ERROR
        assert _run(config, "synth", str(tmp_path), "--force") == EXIT_OK

    def test_enroll_output(self, workspace, tmp_path, capsys):
        root, config = workspace
        out = tmp_path / "p.yaml"
        assert _run(config, "--no-color", "enroll", *_trials(root, "users", "u02", "enroll"), "-o", str(out)) == EXIT_OK

        printed = capsys.readouterr().out
        assert "Enrolled 3 trials" in printed
        assert "ideal distance e: ax=" in printed
        assert "threshold: 0.55" in printed
        assert "weights mu: ax=0.1667" in printed
        assert ProfileStore().load_profile(out).n == 3

    def test_enroll_needs_two_trials(self, workspace, tmp_path):
        root, config = workspace
        single = _trials(root, "users", "u01", "enroll")[:1]
        assert _run(config, "enroll", *single, "-o", str(tmp_path / "p.yaml")) == EXIT_ERROR

    def test_verify_accepts_own_trial(self, workspace, profile_path, capsys):
        root, config = workspace
        probe = _trials(root, "users", "u01", "enroll")[0]
        assert _run(config, "verify", probe, str(profile_path)) == EXIT_OK

        printed = capsys.readouterr().out
        assert "ACCEPT" in printed
        assert "tss:" in printed

    def test_verify_denies_other_user(self, workspace, profile_path, capsys):
        root, config = workspace
        probe = _trials(root, "users", "u02", "probes")[0]
        assert _run(config, "verify", probe, str(profile_path)) == EXIT_DENY
        assert "DENY" in capsys.readouterr().out

    def test_verify_preset(self, workspace, profile_path, capsys):
        """Test that --preset overrides the stored threshold"""
        root, config = workspace
        probe = _trials(root, "users", "u01", "enroll")[0]
        _run(config, "--preset", "hardened", "verify", probe, str(profile_path))

        report = yaml.safe_load(capsys.readouterr().out.rsplit("\n", 2)[0])
        assert report['threshold'] == 0.65

    @pytest.mark.parametrize("preset", ["paper-default", "standard"])
    def test_verify_paper_default_preset(self, workspace, profile_path, capsys, preset):
        root, config = workspace
        probe = _trials(root, "users", "u01", "enroll")[0]
        assert _run(config, "--preset", preset, "verify", probe, str(profile_path)) == EXIT_OK

        report = yaml.safe_load(capsys.readouterr().out.rsplit("\n", 2)[0])
        assert report["threshold"] == 0.55

    def test_verify_missing_probe(self, workspace, profile_path, tmp_path):
        _, config = workspace
        assert _run(config, "verify", str(tmp_path / "absent.csv"), str(profile_path)) == EXIT_ERROR

    def test_calibrate_from_score_files(self, workspace, profile_path, tmp_path, capsys):
        """Test that score files yield the AUC-derived weights"""
        _, config = workspace
        target = tmp_path / "profile.yaml"
        target.write_bytes(profile_path.read_bytes())

        rng = np.random.default_rng(3)
        header = "ax,ay,az,gx,gy,gz"
        for name, low, high in (("genuine", 0.6, 1.0), ("impostor", 0.0, 0.7)):
            directory = tmp_path / name
            directory.mkdir()
            rows = rng.uniform(low, high, size=(12, 6))
            lines = [header] + [",".join(repr(float(v)) for v in row) for row in rows]
            (directory / f"{name}.scores.csv").write_text("\n".join(lines) + "\n")

        code = _run(config, "calibrate", str(tmp_path / "genuine"), str(tmp_path / "impostor"), str(target))
        assert code == EXIT_OK
        assert "weights" in capsys.readouterr().out

        weights = ProfileStore().load_profile(target).weights_mu
        assert sum(weights) == pytest.approx(1.0, abs=1e-9)
        assert weights != ProfileStore().load_profile(profile_path).weights_mu

    def test_calibrate_reference_aucs(self, workspace, profile_path, tmp_path):
        """Test that score files with known per-dimension AUCs yield weights_from_auc of them"""
        _, config = workspace
        target = tmp_path / "profile.yaml"
        target.write_bytes(profile_path.read_bytes())
        genuine, impostor = _scores_with_aucs(REFERENCE_AUC)
        _write_scores(tmp_path / "genuine", genuine)
        _write_scores(tmp_path / "impostor", impostor)

        code = _run(config, "calibrate", str(tmp_path / "genuine"), str(tmp_path / "impostor"), str(target))
        assert code == EXIT_OK

        weights = ProfileStore().load_profile(target).weights_mu
        assert weights == pytest.approx(weights_from_auc(REFERENCE_AUC), abs=1e-9)
        assert weights[2] > weights[0] > 0.0

    def test_calibrate_empty_directory(self, workspace, profile_path, tmp_path):
        _, config = workspace
        (tmp_path / "g").mkdir()
        (tmp_path / "i").mkdir()
        assert _run(config, "calibrate", str(tmp_path / "g"), str(tmp_path / "i"), str(profile_path)) == EXIT_ERROR

    def test_evaluate_is_reproducible(self, workspace, tmp_path):
        """Test that two runs write byte-identical reports"""
        root, config = workspace
        first, second = tmp_path / "a" / "report.yaml", tmp_path / "b" / "report.yaml"
        assert _run(config, "evaluate", str(root / "data"), "-o", str(first)) == EXIT_OK
        assert _run(config, "evaluate", str(root / "data"), "-o", str(second)) == EXIT_OK

        assert first.read_bytes() == second.read_bytes()
        assert (tmp_path / "a" / "report.roc.csv").is_file()
        report = yaml.safe_load(first.read_text())
        assert report['seed'] == SMALL_SYNTH['seed']
        assert set(report['calibration']['discrimination']) == {'hardened', 'balanced'}

    def test_baseline(self, workspace, tmp_path, capsys):
        root, config = workspace
        out = tmp_path / "baseline"
        assert _run(config, "baseline", str(root / "data"), "-o", str(out)) == EXIT_OK

        for name in ("features.csv", "correlation.csv", "classifier.yaml", "baseline.yaml"):
            assert (out / name).is_file()
        report = yaml.safe_load((out / "baseline.yaml").read_text())
        assert len(report['cross_validation']) == 4
        assert report['open_set']['labeled_fraction'] == 1.0
        assert "Closed-set baseline" in capsys.readouterr().out


class TestArguments:
    """Test argument handling and configuration errors"""

    def test_missing_config(self, tmp_path):
        assert main(["--config", str(tmp_path / "absent.yaml"), "synth", str(tmp_path / "d")]) == EXIT_ERROR

    def test_invalid_override(self, tmp_path):
        assert main(["--window", "8", "synth", str(tmp_path / "d")]) == EXIT_ERROR

    def test_command_required(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_version(self, capsys):
        with pytest.raises(SystemExit) as excinfo:
            build_parser().parse_args(["--version"])
        assert excinfo.value.code == 0
        assert "WristAuth v" in capsys.readouterr().out

    def test_unknown_preset(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["--preset", "lenient", "synth", "d"])


class TestErrorHandling:
    """Test that failures inside a command map to the error exit status"""

    def test_domain_error(self, workspace, mocker, tmp_path):
        _, config = workspace
        enroll = mocker.patch.object(WristAuthApp, "enroll", side_effect=DomainError("boom"))
        assert _run(config, "enroll", "a.csv", "b.csv", "-o", str(tmp_path / "p.yaml")) == EXIT_ERROR
        enroll.assert_called_once()

    def test_interrupt(self, workspace, mocker, tmp_path):
        _, config = workspace
        mocker.patch.object(WristAuthApp, "evaluate", side_effect=KeyboardInterrupt)
        assert _run(config, "evaluate", str(tmp_path), "-o", str(tmp_path / "r.yaml")) == EXIT_ERROR
