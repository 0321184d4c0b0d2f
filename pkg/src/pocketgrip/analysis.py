"""Post-processing of measured (or simulated) experiment data."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import DegenerateNormal, DomainError, EmptyWindow
from .harness import Outcome

NORMAL_EPS = 1e-3
AUTO_FRACTION = 0.05

RATES_HEADER = ("n_newton", "p_pascal", "trials", "success_rate")
ROUNDNESS_HEADER = ("mass_kg", "n_newton", "p_pascal", "trials", "success_rate", "roundness")


@dataclass(frozen=True)
class SlideTrace:
    """Force samples recorded while a finger slides along a sensor plate."""

    t: np.ndarray
    fy: np.ndarray
    fz: np.ndarray

    def __post_init__(self):
        t, fy, fz = (np.asarray(x, dtype=float) for x in (self.t, self.fy, self.fz))
        if not (t.ndim == fy.ndim == fz.ndim == 1) or not (len(t) == len(fy) == len(fz)):
            raise DomainError("t, fy and fz must be 1-D arrays of equal length")
        if len(t) == 0:
            raise EmptyWindow("trace has no samples")
        if np.any(np.diff(t) <= 0):
            raise DomainError("trace timestamps must be strictly increasing")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "fy", fy)
        object.__setattr__(self, "fz", fz)


@dataclass(frozen=True)
class TrialRecord:
    n: float
    p: float
    outcome: Outcome


@dataclass(frozen=True)
class RateRow:
    n: float
    p: float
    trials: int
    success_rate: float

    def row(self):
        return (self.n, self.p, self.trials, self.success_rate)


@dataclass(frozen=True)
class RoundnessSample:
    mass: float
    n: float
    p: float
    d_min: float
    d_max: float
    outcome: Outcome


@dataclass(frozen=True)
class RoundnessRow:
    mass: float
    n: float
    p: float
    trials: int
    success_rate: float
    roundness: float | None

    def row(self):
        return (self.mass, self.n, self.p, self.trials, self.success_rate, self.roundness)


def auto_window(fy, fraction=AUTO_FRACTION):
    """Index range [start, stop) of the longest run where |fy| exceeds
    ``fraction`` of its peak.  Ties go to the earliest run."""
    mag = np.abs(np.asarray(fy, dtype=float))
    if mag.size == 0 or mag.max() == 0.0:
        raise EmptyWindow("tangential force never leaves zero")
    active = mag > fraction * mag.max()
    best = (0, 0)
    start = None
    for i, on in enumerate(np.append(active, False)):
        if on and start is None:
            start = i
        elif not on and start is not None:
            if i - start > best[1] - best[0]:
                best = (start, i)
            start = None
    return best


def friction_from_trace(trace, window="auto"):
    """Mean of |fy| / |fz| over the sliding window of a trace.

    Parameters
    ----------
    trace : SlideTrace
    window : "auto" or (start, end)
        Either detect the sliding phase from the tangential force, or average
        over samples with ``start <= t <= end``.

    Returns
    -------
    float
        Static friction coefficient estimate.
    """
    if isinstance(window, str):
        if window != "auto":
            raise DomainError(f"window must be 'auto' or (start, end), got {window!r}")
        lo, hi = auto_window(trace.fy)
        idx = slice(lo, hi)
    else:
        start, end = window
        if end < start:
            raise DomainError(f"window end {end!r} precedes start {start!r}")
        idx = (trace.t >= start) & (trace.t <= end)
        if not idx.any():
            raise EmptyWindow(f"no samples in window [{start!r}, {end!r}]")
    fy = np.abs(trace.fy[idx])
    fz = np.abs(trace.fz[idx])
    if fz.size == 0:
        raise EmptyWindow("analysis window is empty")
    if np.any(fz <= NORMAL_EPS):
        raise DegenerateNormal(f"|fz| <= {NORMAL_EPS} N inside the analysis window")
    return float(np.mean(fy / fz))


def roundness_ratio(d_min, d_max):
    """Ratio of the shortest to the longest rim diameter, in (0, 1].

    The quotient is taken between the decimal values the diameters print as
    and then rounded once, so ``roundness_ratio(0.039, 0.05)`` is exactly
    ``0.78`` rather than the binary ``0.7799999999999999``.
    """
    if not d_min > 0 or not d_max > 0:
        raise DomainError(f"diameters must be positive, got {d_min!r}, {d_max!r}")
    if d_min > d_max:
        raise DomainError(f"d_min {d_min!r} exceeds d_max {d_max!r}")
    return float(Fraction(repr(float(d_min))) / Fraction(repr(float(d_max))))


def _mean(values):
    # exact rational mean, rounded once
    return float(sum(map(Fraction, values)) / len(values))


def _outcome(value):
    return value if isinstance(value, Outcome) else Outcome(str(value).lower())


def success_table(records):
    """Per-(n, p) trial count and success fraction, sorted by (n, p)."""
    counts = defaultdict(lambda: [0, 0])
    for rec in records:
        n, p, outcome = (rec.n, rec.p, rec.outcome) if isinstance(rec, TrialRecord) else rec
        cell = counts[(float(n), float(p))]
        cell[0] += 1
        cell[1] += _outcome(outcome) is Outcome.SUCCESS
    return [RateRow(n, p, total, wins / total) for (n, p), (total, wins) in sorted(counts.items())]


def roundness_table(samples):
    """Group roundness samples by (mass, n, p).

    The roundness column averages only successful grasps, since a dropped
    cup has no meaningful post-grasp rim; it is ``None`` for cells without
    a success.
    """
    groups = defaultdict(list)
    for s in samples:
        groups[(s.mass, s.n, s.p)].append(s)
    rows = []
    for key in sorted(groups):
        cell = groups[key]
        ok = [s for s in cell if s.outcome is Outcome.SUCCESS]
        ratios = [roundness_ratio(s.d_min, s.d_max) for s in ok]
        rows.append(RoundnessRow(
            *key,
            trials=len(cell),
            success_rate=len(ok) / len(cell),
            roundness=_mean(ratios) if ratios else None,
        ))
    return rows
