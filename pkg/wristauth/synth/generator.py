"""
Seeded synthetic writing signals

Each writer (or word) has a style: per-channel mixtures of sinusoids
evaluated in normalized time. Trials render a style at the sample rate with
a jittered duration, a smooth monotone time warp, amplitude jitter and
additive noise.
"""

import math
import zlib
from dataclasses import dataclass, field, fields
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from ..core.exceptions import DomainError
from ..core.logger import get_logger
from ..motion.dataset import AttackSet, Dataset, FaultSet, UserGroup, WordSet
from ..motion.models import MIN_TRIAL_LENGTH, N_CHANNELS, NOMINAL_RATE, Trial

logger = get_logger(__name__)

# Motion RMS per channel: accelerometer in g, gyroscope in deg/s
CHANNEL_SCALE = np.array([0.3, 0.3, 0.3, 40.0, 40.0, 40.0])
GRAVITY = 1.0
ACCEL = slice(0, 3)
GYRO = slice(3, 6)

BURST_GAIN = 3.0
BURST_FRACTION = 0.2

VOCABULARY = (
    "love", "book", "time", "hand", "door", "tree", "moon", "rain", "fire", "gold",
    "wind", "star", "ship", "road", "bird", "lamp", "rock", "milk", "salt", "snow",
    "cake", "king", "blue", "seed", "wave", "leaf", "iron", "bell", "glass", "river",
)


@dataclass(frozen=True)
class GeneratorParams:
    """Signal-shape parameters shared by every generated trial"""
    sample_rate: float = NOMINAL_RATE
    components: int = 8
    freq_range: Tuple[float, float] = (0.5, 6.0)
    tempo_range: Tuple[float, float] = (1.5, 2.5)
    size_range: Tuple[float, float] = (0.8, 1.2)
    tempo_jitter: float = 0.1
    amplitude_jitter: float = 0.05
    warp_deviation: float = 0.1
    noise_ratio: float = 0.05

    @classmethod
    def from_dict(cls, params: Mapping[str, Any]) -> "GeneratorParams":
        """Build from a config section, ignoring keys that are not signal parameters"""
        known = {f.name for f in fields(cls)}
        values = {}
        for key, value in params.items():
            if key in known:
                values[key] = tuple(value) if isinstance(value, list) else value
        return cls(**values)


DEFAULT_PARAMS = GeneratorParams()


def _key(part) -> int:
    if isinstance(part, str):
        return zlib.crc32(part.encode('utf-8'))
    return int(part) % (1 << 32)


def derive_seed(master: int, *keys) -> int:
    """Child seed for a named stream under a master seed"""
    sequence = np.random.SeedSequence(int(master) % (1 << 64), spawn_key=tuple(_key(k) for k in keys))
    return int(sequence.generate_state(1, dtype=np.uint32)[0])


def _rng(namespace: str, *seeds: int) -> np.random.Generator:
    return np.random.default_rng([_key(namespace)] + [int(s) % (1 << 64) for s in seeds])


@dataclass(frozen=True, eq=False)
class UserStyle:
    """
    A writer's stroke template

    Attributes:
        seed: Seed the style was drawn from
        amplitudes: (6, K) component amplitudes before channel normalization
        frequencies: (6, K) component frequencies in Hz at the nominal tempo
        phases: (6, K) component phases in radians
        tempo: Nominal writing duration in seconds
        size_scale: Amplitude multiplier
        offset: Static per-channel offset (gravity on the accelerometer)
    """
    seed: int
    amplitudes: np.ndarray
    frequencies: np.ndarray
    phases: np.ndarray
    tempo: float
    size_scale: float
    offset: np.ndarray

    def motion(self, u: np.ndarray) -> np.ndarray:
        """Template motion (without offset) at normalized times u in [0, 1]"""
        u = np.asarray(u, dtype=np.float64)
        cycles = self.frequencies * self.tempo
        # (n, 6, K) sinusoid grid summed over components
        angles = 2.0 * np.pi * u[:, None, None] * cycles[None] + self.phases[None]
        raw = np.sum(self.amplitudes[None] * np.sin(angles), axis=2)
        norm = np.sqrt(np.sum(self.amplitudes ** 2, axis=1) / 2.0)
        return raw * (self.size_scale * CHANNEL_SCALE / norm)[None, :]

    def template(self, u: np.ndarray) -> np.ndarray:
        return self.offset[None, :] + self.motion(u)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UserStyle):
            return NotImplemented
        return (
            self.seed == other.seed
            and self.tempo == other.tempo
            and self.size_scale == other.size_scale
            and all(np.array_equal(getattr(self, name), getattr(other, name))
                    for name in ('amplitudes', 'frequencies', 'phases', 'offset'))
        )

    __hash__ = None


@dataclass(frozen=True)
class MimicSpec:
    """
    An attacker imitating a target at strength m

    The accelerometer template blends at m. The gyroscope template blends at
    m * (f + (1 - f) * m) for rotation fidelity f: rotation lags the
    imitated trace at partial strength, and at m = 1 every channel is the
    target's.
    """
    attacker: UserStyle
    target: UserStyle
    strength: float
    rotation_fidelity: float = 0.6

    def __post_init__(self):
        if not 0.0 <= self.strength <= 1.0:
            raise DomainError(f"mimic strength must lie in [0, 1], got {self.strength}")
        if not 0.0 <= self.rotation_fidelity <= 1.0:
            raise DomainError(f"rotation fidelity must lie in [0, 1], got {self.rotation_fidelity}")

    def channel_strengths(self) -> np.ndarray:
        s = float(self.strength)
        f = float(self.rotation_fidelity)
        m = np.full(N_CHANNELS, s)
        m[GYRO] = s * (f + (1.0 - f) * s)
        return m


def gen_user(seed: int, params: GeneratorParams = DEFAULT_PARAMS) -> UserStyle:
    """Draw a writing style from a seed"""
    rng = _rng('style', seed)
    shape = (N_CHANNELS, params.components)
    amplitudes = rng.uniform(0.2, 1.0, size=shape)
    frequencies = rng.uniform(*params.freq_range, size=shape)
    phases = rng.uniform(0.0, 2.0 * np.pi, size=shape)
    tempo = float(rng.uniform(*params.tempo_range))
    size_scale = float(rng.uniform(*params.size_range))

    # Wrist orientation sets the gravity direction on the accelerometer
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    offset = np.zeros(N_CHANNELS)
    offset[ACCEL] = GRAVITY * direction

    for array in (amplitudes, frequencies, phases, offset):
        array.setflags(write=False)
    return UserStyle(int(seed), amplitudes, frequencies, phases, tempo, size_scale, offset)


def _time_warp(u: np.ndarray, rng: np.random.Generator, deviation: float) -> np.ndarray:
    # w(u) = u + a sin(2 pi k u) / (2 pi k) keeps both endpoints and w' = 1 + a cos(.)
    a = rng.uniform(-deviation, deviation)
    k = int(rng.integers(1, 4))
    warped = u + a * np.sin(2.0 * np.pi * k * u) / (2.0 * np.pi * k)
    if not np.all(np.diff(warped) > 0):
        raise DomainError("time warp is not strictly monotone")
    return warped


def _render(
    motion: Callable[[np.ndarray], np.ndarray],
    offset: np.ndarray,
    tempo: float,
    rng: np.random.Generator,
    params: GeneratorParams,
    word: Optional[str],
    user: Optional[str],
) -> Trial:
    rate = params.sample_rate
    duration = tempo * rng.uniform(1.0 - params.tempo_jitter, 1.0 + params.tempo_jitter)
    lo = math.ceil((1.0 - params.tempo_jitter) * rate * tempo)
    hi = math.floor((1.0 + params.tempo_jitter) * rate * tempo)
    n = max(int(np.clip(round(duration * rate), lo, hi)), MIN_TRIAL_LENGTH)

    u = np.linspace(0.0, 1.0, n)
    warped = _time_warp(u, rng, params.warp_deviation)
    jitter = rng.uniform(1.0 - params.amplitude_jitter, 1.0 + params.amplitude_jitter, size=N_CHANNELS)
    signal = motion(warped) * jitter[None, :]

    centered = signal - signal.mean(axis=0)
    sigma = params.noise_ratio * np.sqrt(np.mean(centered ** 2, axis=0))
    noise = rng.normal(size=(n, N_CHANNELS)) * sigma[None, :]

    times = np.arange(n) / rate
    return Trial(times, offset[None, :] + signal + noise, word, user, rate)


def gen_trial(style: UserStyle, trial_seed: int, params: GeneratorParams = DEFAULT_PARAMS,
              word: Optional[str] = None, user: Optional[str] = None) -> Trial:
    """Render one trial of a style"""
    rng = _rng('trial', style.seed, trial_seed)
    return _render(style.motion, style.offset, style.tempo, rng, params, word, user)


def gen_mimic(spec: MimicSpec, trial_seed: int, params: GeneratorParams = DEFAULT_PARAMS,
              word: Optional[str] = None, user: Optional[str] = None) -> Trial:
    """
    Render an attacker's imitation of a target

    Templates are blended before jitter and noise, which are drawn from the
    attacker's trial stream; at strength 0 the result equals the attacker's
    own trial for the same seed.
    """
    m = spec.channel_strengths()
    attacker, target = spec.attacker, spec.target

    def motion(u: np.ndarray) -> np.ndarray:
        return (1.0 - m)[None, :] * attacker.motion(u) + m[None, :] * target.motion(u)

    s = float(spec.strength)
    offset = (1.0 - m) * attacker.offset + m * target.offset
    tempo = (1.0 - s) * attacker.tempo + s * target.tempo
    rng = _rng('trial', attacker.seed, trial_seed)
    return _render(motion, offset, tempo, rng, params, word, user)


def gen_bad_trial(style: UserStyle, trial_seed: int, params: GeneratorParams = DEFAULT_PARAMS,
                  word: Optional[str] = None, user: Optional[str] = None) -> Trial:
    """A genuine trial written abnormally: one segment reversed and a 3x amplitude burst"""
    trial = gen_trial(style, trial_seed, params, word, user)
    rng = _rng('bad', style.seed, trial_seed)
    values = np.array(trial.values)
    n = values.shape[0]

    length = int(rng.integers(n // 4, n // 2 + 1))
    start = int(rng.integers(0, n - length + 1))
    values[start:start + length] = values[start:start + length][::-1]

    width = max(1, int(round(BURST_FRACTION * n)))
    begin = int(rng.integers(0, n - width + 1))
    mean = values.mean(axis=0)
    values[begin:begin + width] = mean + BURST_GAIN * (values[begin:begin + width] - mean)
    return trial.with_values(values)


# Datasets

@dataclass
class DatasetPlan:
    """Set sizes of a synthetic dataset, read from the synth config section"""
    seed: int = 7
    users: int = 15
    enroll: int = 5
    genuine: int = 10
    word: str = "love"
    attack: Dict[str, Any] = field(default_factory=dict)
    fault: Dict[str, Any] = field(default_factory=dict)
    words: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, params: Mapping[str, Any]) -> "DatasetPlan":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in params.items() if k in known})


def _word_names(password: str, known: int, unseen: int) -> Tuple[List[str], List[str]]:
    others = [w for w in VOCABULARY if w != password]
    needed = known - 1 + unseen
    index = 0
    while len(others) < needed:
        others.append(f"word{index:02d}")
        index += 1
    return [password] + others[:known - 1], others[known - 1:needed]


def _user_groups(plan: DatasetPlan, params: GeneratorParams) -> Tuple[UserGroup, ...]:
    groups = []
    for i in range(1, plan.users + 1):
        uid = f"u{i:02d}"
        style = gen_user(derive_seed(plan.seed, 'user', i), params)
        trials = [
            gen_trial(style, derive_seed(plan.seed, 'user', i, 'trial', t), params, plan.word, uid)
            for t in range(plan.enroll + plan.genuine)
        ]
        groups.append(UserGroup(uid, tuple(trials[:plan.enroll]), tuple(trials[plan.enroll:])))
    return tuple(groups)


def _target_style(plan: DatasetPlan, params: GeneratorParams) -> UserStyle:
    return gen_user(derive_seed(plan.seed, 'attack', 'target'), params)


def _attack_set(plan: DatasetPlan, params: GeneratorParams) -> AttackSet:
    spec = plan.attack
    target = _target_style(plan, params)
    n_enroll, n_genuine = int(spec.get('enroll', 25)), int(spec.get('genuine', 20))
    trials = [
        gen_trial(target, derive_seed(plan.seed, 'attack', 'target', t), params, plan.word, "target")
        for t in range(n_enroll + n_genuine)
    ]
    strengths = {name: float(m) for name, m in spec.get('strengths', {}).items()}
    fidelity = float(spec.get('rotation_fidelity', 0.6))
    attackers = [
        gen_user(derive_seed(plan.seed, 'attack', 'attacker', j), params)
        for j in range(1, int(spec.get('attackers', 15)) + 1)
    ]

    scenarios = {}
    for name, m in strengths.items():
        scenario = []
        for j, attacker in enumerate(attackers, start=1):
            mimic = MimicSpec(attacker, target, m, fidelity)
            for t in range(int(spec.get('trials', 10))):
                seed = derive_seed(plan.seed, 'attack', name, j, t)
                scenario.append(gen_mimic(mimic, seed, params, plan.word, f"a{j:02d}"))
        scenarios[name] = tuple(scenario)
    return AttackSet("target", tuple(trials[:n_enroll]), tuple(trials[n_enroll:]), scenarios, strengths)


def _fault_set(plan: DatasetPlan, params: GeneratorParams) -> FaultSet:
    spec = plan.fault
    style = gen_user(derive_seed(plan.seed, 'fault', 'user'), params)

    def clean(section: str, count: int) -> Tuple[Trial, ...]:
        return tuple(gen_trial(style, derive_seed(plan.seed, 'fault', section, t), params, plan.word, "fault")
                     for t in range(count))

    def bad(section: str, count: int) -> Tuple[Trial, ...]:
        return tuple(gen_bad_trial(style, derive_seed(plan.seed, 'fault', section, t), params, plan.word, "fault")
                     for t in range(count))

    return FaultSet(
        clean=clean('clean', int(spec.get('clean', 10))),
        bad=bad('bad', int(spec.get('bad', 10))),
        test_genuine=clean('test_genuine', int(spec.get('test_genuine', 50))),
        test_bad=bad('test_bad', int(spec.get('test_bad', 50))),
    )


def _word_set(plan: DatasetPlan, params: GeneratorParams) -> WordSet:
    spec = plan.words
    per_class = int(spec.get('trials', 20))
    per_unseen = int(spec.get('unseen_trials', 10))
    known_words, unseen_words = _word_names(plan.word, int(spec.get('classes', 10)),
                                            int(spec.get('unseen_classes', 10)))
    # The password is written by the attack target; other words have their own styles
    target = _target_style(plan, params)

    def style_for(word: str) -> UserStyle:
        if word == plan.word:
            return target
        return gen_user(derive_seed(plan.seed, 'word', word), params)

    def render(word: str, count: int) -> Tuple[Trial, ...]:
        style = style_for(word)
        return tuple(gen_trial(style, derive_seed(plan.seed, 'word', word, t), params, word, "target")
                     for t in range(count))

    return WordSet(
        password=plan.word,
        known={word: render(word, per_class) for word in known_words},
        unseen={word: render(word, per_unseen) for word in unseen_words},
    )


def build_dataset(synth_params: Mapping[str, Any]) -> Dataset:
    """
    Generate every trial set described by a synth config section

    Args:
        synth_params: Synth section with 'seed' (see Config.get_synth_params)

    Returns:
        Dataset with users, attack, fault and word sections
    """
    params = GeneratorParams.from_dict(synth_params)
    plan = DatasetPlan.from_dict(synth_params)
    if plan.users < 2 or plan.enroll < 2 or plan.genuine < 1:
        raise DomainError("synthetic dataset needs at least 2 users, 2 enrollment trials and 1 probe per user")

    logger.info(f"Generating synthetic dataset with seed {plan.seed}")
    return Dataset(
        seed=plan.seed,
        users=_user_groups(plan, params),
        attack=_attack_set(plan, params),
        fault=_fault_set(plan, params),
        words=_word_set(plan, params),
        config=dict(synth_params),
    )


def gen_dataset(synth_params: Mapping[str, Any], out_dir, force: bool = False):
    """
    Generate a dataset and write it as trial CSVs plus manifest.yaml

    Returns:
        Path of the written manifest
    """
    from ..storage.manifest import save_dataset

    return save_dataset(build_dataset(synth_params), out_dir, force=force)
