"""
Trial data model for wrist motion recordings
"""

from dataclasses import dataclass, field
from typing import Iterable, List, NamedTuple, Optional

import numpy as np

from ..core.exceptions import DomainError, TrialTooShortError, TrialValidationError

# Channel order of every six-component vector in the package
CHANNELS = ("ax", "ay", "az", "gx", "gy", "gz")
N_CHANNELS = len(CHANNELS)

NOMINAL_RATE = 62.0

# Shortest trial the default 9-point smoothing window fits into
MIN_TRIAL_LENGTH = 9


class MotionSample(NamedTuple):
    """One sample: time in seconds, acceleration in g, angular velocity in deg/s"""
    t: float
    ax: float
    ay: float
    az: float
    gx: float
    gy: float
    gz: float


@dataclass(frozen=True, eq=False)
class Trial:
    """
    One recording of one handwritten word

    Attributes:
        times: Sample timestamps in seconds, strictly increasing
        values: (n, 6) array in CHANNELS order
        word_label: Word written, if known
        user_label: Writer id, if known
        nominal_rate: Nominal sample rate in Hz
    """
    times: np.ndarray
    values: np.ndarray
    word_label: Optional[str] = None
    user_label: Optional[str] = None
    nominal_rate: float = field(default=NOMINAL_RATE)

    def __post_init__(self):
        times = np.array(self.times, dtype=np.float64)
        values = np.array(self.values, dtype=np.float64)

        if times.ndim != 1:
            raise TrialValidationError("timestamps must form a one-dimensional sequence")
        if values.ndim != 2 or values.shape[1] != N_CHANNELS:
            raise TrialValidationError(f"values must have shape (n, {N_CHANNELS}), got {values.shape}")
        if values.shape[0] != times.shape[0]:
            raise TrialValidationError(
                f"{times.shape[0]} timestamps but {values.shape[0]} motion samples"
            )
        if times.shape[0] < MIN_TRIAL_LENGTH:
            raise TrialTooShortError(
                f"trial has {times.shape[0]} samples, at least {MIN_TRIAL_LENGTH} are required"
            )
        if not np.all(np.isfinite(times)):
            raise TrialValidationError("timestamps must be finite")
        if np.any(times < 0):
            raise TrialValidationError("timestamps must be non-negative")
        if not np.all(np.isfinite(values)):
            bad = int(np.argwhere(~np.isfinite(values))[0][0])
            raise TrialValidationError(f"non-finite motion value at sample {bad}")
        steps = np.diff(times)
        if np.any(steps <= 0):
            bad = int(np.argmax(steps <= 0)) + 1
            raise TrialValidationError(
                f"timestamps must be strictly increasing (sample {bad}: {times[bad]!r} after {times[bad - 1]!r})"
            )
        if not (np.isfinite(self.nominal_rate) and self.nominal_rate > 0):
            raise TrialValidationError(f"nominal rate must be positive, got {self.nominal_rate}")

        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, 'times', times)
        object.__setattr__(self, 'values', values)
        object.__setattr__(self, 'nominal_rate', float(self.nominal_rate))

    @classmethod
    def from_samples(
        cls,
        samples: Iterable[MotionSample],
        word_label: Optional[str] = None,
        user_label: Optional[str] = None,
        nominal_rate: float = NOMINAL_RATE,
    ) -> "Trial":
        """Build a trial from an ordered sequence of samples"""
        rows = [tuple(sample) for sample in samples]
        if not rows:
            raise TrialTooShortError(f"trial has 0 samples, at least {MIN_TRIAL_LENGTH} are required")
        table = np.asarray(rows, dtype=np.float64)
        return cls(table[:, 0], table[:, 1:], word_label, user_label, nominal_rate)

    @property
    def samples(self) -> List[MotionSample]:
        """Samples in file order"""
        return [MotionSample(float(t), *map(float, row)) for t, row in zip(self.times, self.values)]

    def __len__(self) -> int:
        return int(self.times.shape[0])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trial):
            return NotImplemented
        return (
            self.word_label == other.word_label
            and self.user_label == other.user_label
            and self.nominal_rate == other.nominal_rate
            and np.array_equal(self.times, other.times)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None

    def with_values(self, values: np.ndarray) -> "Trial":
        """Copy of this trial carrying new channel values and the same timestamps and labels"""
        return Trial(self.times, values, self.word_label, self.user_label, self.nominal_rate)

    def with_labels(self, word_label: Optional[str] = None, user_label: Optional[str] = None) -> "Trial":
        """Copy of this trial with replaced labels"""
        return Trial(self.times, self.values, word_label, user_label, self.nominal_rate)


def channel(trial: Trial, k: int) -> np.ndarray:
    """
    Get one motion dimension of a trial

    Args:
        trial: Source trial
        k: Dimension index 1..6 in CHANNELS order

    Returns:
        Read-only array of the k-th channel, same length as the trial
    """
    if isinstance(k, bool) or not isinstance(k, (int, np.integer)) or not 1 <= k <= N_CHANNELS:
        raise DomainError(f"channel index must be an integer in 1..{N_CHANNELS}, got {k!r}")
    return trial.values[:, int(k) - 1]
