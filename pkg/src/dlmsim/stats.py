"""Counting statistics: z-scores against the binomial expectation, the
sqrt(N) fluctuation bound, transient length of a click stream and a 2x2
chi-square homogeneity test."""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .errors import EmptyStream, InvalidInput, WindowTooLarge, ZeroTotal
from .oracle import OracleResult

DEFAULT_THRESHOLD = 5.0


class Verdict(str, enum.Enum):
    CONSISTENT = "consistent"
    VIOLATION = "violation"


def z_score(count: int, n: int, p: float) -> float | Verdict:
    """Standardised deviation of ``count`` from ``n*p``.

    For p in {0, 1} the Gaussian z is undefined; any click where none is
    allowed (or a missing click where every event must land) is returned as
    ``Verdict.VIOLATION``, otherwise ``Verdict.CONSISTENT``.
    """
    if n <= 0:
        raise InvalidInput(f"n must be positive, got {n!r}")
    if count < 0 or count > n:
        raise InvalidInput(f"count must lie in [0, n], got count={count!r}, n={n!r}")
    if not (0.0 <= p <= 1.0):
        raise InvalidInput(f"p must lie in [0, 1], got {p!r}")
    if p == 0.0:
        return Verdict.VIOLATION if count > 0 else Verdict.CONSISTENT
    if p == 1.0:
        return Verdict.VIOLATION if count < n else Verdict.CONSISTENT
    return (count - n * p) / math.sqrt(n * p * (1.0 - p))


@dataclass(frozen=True)
class SqrtNCheck:
    verdict: Verdict
    z0: float | Verdict
    z1: float | Verdict

    @property
    def violation(self) -> bool:
        return self.verdict is Verdict.VIOLATION

    @property
    def z(self) -> float | None:
        """Largest finite |z| over the two detectors, if any."""
        zs = [abs(z) for z in (self.z0, self.z1) if not isinstance(z, Verdict)]
        return max(zs) if zs else None


def sqrt_n_check(
    counts: Sequence[int], n: int, oracle: OracleResult, threshold: float = DEFAULT_THRESHOLD
) -> SqrtNCheck:
    d0, d1 = counts
    if d0 + d1 != n:
        raise InvalidInput(f"counts {d0}+{d1} do not sum to n={n}")
    z0 = z_score(d0, n, oracle.p0)
    z1 = z_score(d1, n, oracle.p1)
    bad = False
    for z in (z0, z1):
        if isinstance(z, Verdict):
            bad = bad or z is Verdict.VIOLATION
        else:
            bad = bad or abs(z) > threshold
    return SqrtNCheck(Verdict.VIOLATION if bad else Verdict.CONSISTENT, z0, z1)


@dataclass(frozen=True)
class StatsSummary:
    n: int
    d0: int
    freq_d0: float
    expected_mean: float
    expected_stddev: float
    z: float | Verdict


def summarize(d0: int, n: int, p0: float) -> StatsSummary:
    z = z_score(d0, n, p0)
    return StatsSummary(
        n=n,
        d0=d0,
        freq_d0=d0 / n,
        expected_mean=n * p0,
        expected_stddev=math.sqrt(n * p0 * (1.0 - p0)),
        z=z,
    )


def transient_length(
    clicks: Sequence[int], p0_expected: float, window: int = 100, eps: float = 0.05
) -> int | None:
    """First index after which every length-``window`` sliding window has a
    D0 frequency within ``eps`` of ``p0_expected``.

    ``clicks`` holds detector indices (0 for D0). Returns None when even the
    final window is out of band.
    """
    if isinstance(clicks, (bytes, bytearray)):
        arr = np.frombuffer(clicks, dtype=np.uint8)
    else:
        arr = np.asarray(clicks, dtype=np.int64)
    if arr.size == 0:
        raise EmptyStream("click stream is empty")
    if window <= 0:
        raise InvalidInput(f"window must be positive, got {window!r}")
    if window > arr.size:
        raise WindowTooLarge(f"window {window} exceeds stream length {arr.size}")
    is_d0 = (arr == 0).astype(np.int64)
    csum = np.concatenate(([0], np.cumsum(is_d0)))
    counts = csum[window:] - csum[:-window]
    freq = counts / window
    bad = np.flatnonzero(np.abs(freq - p0_expected) > eps)
    if bad.size == 0:
        return 0
    last = int(bad[-1])
    if last == counts.size - 1:
        return None
    return last + 1


@dataclass(frozen=True)
class ChiSquareResult:
    chi2: float
    p_value: float


def chi2_sf_1dof(x: float) -> float:
    """Survival function of the chi-square distribution with one degree of freedom."""
    if x <= 0.0:
        return 1.0
    return math.erfc(math.sqrt(0.5 * x))


def compare_runs(a: Sequence[int], b: Sequence[int]) -> ChiSquareResult:
    """Chi-square homogeneity test of two (d0, d1) count pairs.

    No continuity correction. A detector column with zero pooled count has
    zero expectation and is dropped; if that leaves a single column the two
    runs are indistinguishable and chi2 is 0.
    """
    a0, a1 = (int(v) for v in a)
    b0, b1 = (int(v) for v in b)
    if min(a0, a1, b0, b1) < 0:
        raise InvalidInput("counts must be nonnegative")
    na = a0 + a1
    nb = b0 + b1
    if na == 0 or nb == 0:
        raise ZeroTotal("both runs need at least one event")
    total = na + nb
    chi2 = 0.0
    for col_a, col_b in ((a0, b0), (a1, b1)):
        col = col_a + col_b
        if col == 0:
            continue
        ea = na * col / total
        eb = nb * col / total
        chi2 += (col_a - ea) ** 2 / ea + (col_b - eb) ** 2 / eb
    if a0 + b0 == 0 or a1 + b1 == 0:
        chi2 = 0.0
    return ChiSquareResult(chi2, chi2_sf_1dof(chi2))
