"""Memoryless wave-theory predictions for the interferometer and for
two-photon bunching at a single beamsplitter."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

from .errors import InvalidParameter

if TYPE_CHECKING:
    from .schedule import Schedule


@dataclass(frozen=True)
class OracleResult:
    p0: float
    p1: float


@dataclass(frozen=True)
class HomResult:
    p20: float
    p02: float
    p11: float


@dataclass(frozen=True)
class CountPrediction:
    mean: float
    stddev: float


@dataclass(frozen=True)
class AggregatePrediction:
    total_data_events: int
    d0: CountPrediction
    d1: CountPrediction


def mzi_probabilities(phi0: float, phi1: float) -> OracleResult:
    """Detector probabilities; D0 is the port that is dark for equal arms."""
    half = 0.5 * (phi0 - phi1)
    s = math.sin(half)
    c = math.cos(half)
    p0 = s * s
    p1 = c * c
    # keep p0 + p1 == 1 to rounding regardless of the trig values
    total = p0 + p1
    return OracleResult(p0 / total, p1 / total)


def expected_counts(n: int, p: float) -> tuple[float, float]:
    """Binomial mean and standard deviation of the count in one detector."""
    if n < 0:
        raise InvalidParameter(f"n must be nonnegative, got {n!r}")
    if not (0.0 <= p <= 1.0):
        raise InvalidParameter(f"p must lie in [0, 1], got {p!r}")
    return n * p, math.sqrt(n * p * (1.0 - p))


def hom_probabilities() -> HomResult:
    """Output statistics for |1,1> on a 50/50 beamsplitter.

    Amplitudes follow from a^+ b^+ -> (a^+ + i b^+)(i a^+ + b^+)/2
    = i/2 (a^+^2 + b^+^2): the coincidence term cancels.
    """
    amp20 = 0.5 * math.sqrt(2.0)
    amp02 = 0.5 * math.sqrt(2.0)
    amp11 = 0.0
    return HomResult(amp20**2, amp02**2, amp11**2)


def aggregate_prediction(schedule: Schedule, phi0: float, phi1: float) -> AggregatePrediction:
    """Wave-theory statistics for the registered clicks of a schedule.

    Reset and hardware-reset blocks leave no trace in a memoryless device,
    so only the total number of data photons matters.
    """
    total = schedule.total_data
    probs = mzi_probabilities(phi0, phi1)
    m0, s0 = expected_counts(total, probs.p0)
    m1, s1 = expected_counts(total, probs.p1)
    return AggregatePrediction(total, CountPrediction(m0, s0), CountPrediction(m1, s1))
