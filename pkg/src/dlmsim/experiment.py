"""Run schedules of data and reset photons through a learning-machine MZI.

Random-number discipline: one PCG64 generator per run seeded with ``seed``.
Each data or reset photon consumes two uniforms (bs1 then bs2); a reset
photon with a random phase draws its phase first. Every hardware reset at
block index ``i`` reseeds the generator with ``seed ^ i``, so a fresh machine
after a hardware reset behaves exactly like a fresh run with that seed.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace

from . import MODEL_VERSION
from .core import (
    TWO_PI,
    DlmState,
    MziState,
    dlm_reset_hard,
    make_rng,
    mzi_init,
    propagate,
)
from .errors import EmptySchedule, InvalidParameter, MismatchedTotals
from .oracle import AggregatePrediction, aggregate_prediction, mzi_probabilities
from .schedule import DataBlock, HwResetBlock, ResetBlock, Schedule
from .stats import ChiSquareResult, Verdict, compare_runs, z_score


@dataclass(frozen=True)
class BlockResult:
    block_index: int
    kind: str
    n_events: int
    d0_count: int
    d1_count: int
    registered: bool

    @property
    def freq_d0(self) -> float | None:
        return self.d0_count / self.n_events if self.n_events else None


@dataclass(frozen=True)
class Aggregates:
    """Statistics over registered (data) clicks only.

    ``block_mean_d0`` and ``block_std_d0`` are the mean and population
    standard deviation of the per-data-block D0 counts.
    """

    n: int
    d0: int
    d1: int
    mean_freq_d0: float
    block_mean_d0: float
    block_std_d0: float
    oracle_p0: float
    expected_stddev_d0: float
    z_d0: float | None
    verdict: Verdict

    @classmethod
    def from_blocks(cls, blocks: Sequence[BlockResult], phase0: float, phase1: float) -> Aggregates:
        data = [b for b in blocks if b.registered]
        n = sum(b.n_events for b in data)
        d0 = sum(b.d0_count for b in data)
        d1 = sum(b.d1_count for b in data)
        per_block = [b.d0_count for b in data]
        mean_b = sum(per_block) / len(per_block)
        std_b = math.sqrt(sum((c - mean_b) ** 2 for c in per_block) / len(per_block))
        p0 = mzi_probabilities(phase0, phase1).p0
        z = z_score(d0, n, p0)
        if isinstance(z, Verdict):
            z_val, verdict = None, z
        else:
            z_val = z
            verdict = Verdict.VIOLATION if abs(z) > 5.0 else Verdict.CONSISTENT
        return cls(
            n=n,
            d0=d0,
            d1=d1,
            mean_freq_d0=d0 / n,
            block_mean_d0=mean_b,
            block_std_d0=std_b,
            oracle_p0=p0,
            expected_stddev_d0=math.sqrt(n * p0 * (1.0 - p0)),
            z_d0=z_val,
            verdict=verdict,
        )


@dataclass(frozen=True)
class RunConfig:
    gamma: float
    phase0: float
    phase1: float
    seed: int
    model_version: str = MODEL_VERSION


@dataclass(frozen=True)
class RunRecord:
    config: RunConfig
    blocks: tuple[BlockResult, ...]
    aggregates: Aggregates
    # per data block, the detector index of every click; None unless requested
    clicks: tuple[bytes, ...] | None = None

    def data_clicks(self) -> bytes:
        if self.clicks is None:
            raise ValueError("run was executed without keep_clicks")
        return b"".join(self.clicks)


def _validate(schedule: Schedule, gamma: float) -> None:
    if not (0.0 <= gamma < 1.0):
        raise InvalidParameter(f"gamma must lie in [0, 1), got {gamma!r}")
    if not any(isinstance(b, DataBlock) for b in schedule.blocks):
        raise EmptySchedule("schedule contains no data block")


def _push(mzi: MziState, port: int, count: int, phase: float | None) -> tuple[MziState, bytearray]:
    if phase is None:
        draws = mzi.rng.random(3 * count)
        psi = (draws[0::3] * TWO_PI).tolist()
        pairs = draws.reshape(count, 3)[:, 1:].ravel().tolist()
    else:
        psi = phase
        pairs = mzi.rng.random(2 * count).tolist()
    bs1, bs2, out = propagate(mzi.bs1, mzi.bs2, mzi.phase0, mzi.phase1, port, psi, pairs)
    return replace(mzi, bs1=bs1, bs2=bs2, events=mzi.events + count), out


def software_reset(
    mzi: MziState, count: int, port: int = 1, phase: float | None = 0.0
) -> MziState:
    """Push ``count`` undetected reset photons through the whole interferometer."""
    ResetBlock(count, port, phase)
    mzi, _ = _push(mzi, port, count, phase)
    return mzi


def hardware_reset(mzi: MziState, scope: str = "all", reseed: int | None = None) -> MziState:
    HwResetBlock(scope)
    bs1: DlmState = dlm_reset_hard(mzi.bs1) if scope in ("all", "bs1") else mzi.bs1
    bs2: DlmState = dlm_reset_hard(mzi.bs2) if scope in ("all", "bs2") else mzi.bs2
    new = replace(mzi, bs1=bs1, bs2=bs2)
    if reseed is not None:
        new.rng = make_rng(reseed)
    return new


def run_schedule(
    schedule: Schedule,
    gamma: float,
    phi0: float,
    phi1: float,
    seed: int,
    keep_clicks: bool = False,
) -> RunRecord:
    _validate(schedule, gamma)
    mzi = mzi_init(gamma, phi0, phi1, seed)
    results: list[BlockResult] = []
    clicks: list[bytes] = []
    for i, block in enumerate(schedule.blocks):
        if isinstance(block, HwResetBlock):
            mzi = hardware_reset(mzi, block.scope, reseed=seed ^ i)
            results.append(BlockResult(i, block.kind, 0, 0, 0, False))
            continue
        phase = block.phase if isinstance(block, ResetBlock) else 0.0
        mzi, out = _push(mzi, block.port, block.count, phase)
        d1 = sum(out)
        registered = isinstance(block, DataBlock)
        results.append(BlockResult(i, block.kind, block.count, block.count - d1, d1, registered))
        if registered and keep_clicks:
            clicks.append(bytes(out))
    config = RunConfig(float(gamma), float(phi0), float(phi1), int(seed))
    aggregates = Aggregates.from_blocks(results, phi0, phi1)
    return RunRecord(config, tuple(results), aggregates, tuple(clicks) if keep_clicks else None)


@dataclass(frozen=True)
class PairwiseTest:
    a: int
    b: int
    result: ChiSquareResult


@dataclass(frozen=True)
class ComparisonReport:
    records: tuple[RunRecord, ...]
    prediction: AggregatePrediction
    z_scores: tuple[float | Verdict, ...]
    pairwise: tuple[PairwiseTest, ...] = field(default=())

    def differ(self, alpha: float = 0.01) -> bool:
        return any(t.result.p_value < alpha for t in self.pairwise)


def run_comparison_suite(
    variants: Sequence[Schedule],
    gamma: float,
    phi0: float,
    phi1: float,
    seeds: int | Sequence[int],
) -> ComparisonReport:
    """Run schedule variants carrying the same number of data photons and
    test them against the wave prediction and against each other."""
    variants = list(variants)
    if not variants:
        raise EmptySchedule("no variants supplied")
    totals = {v.total_data for v in variants}
    if len(totals) != 1:
        raise MismatchedTotals(f"variants carry different data totals: {sorted(totals)}")
    if isinstance(seeds, int):
        seeds = [seeds] * len(variants)
    if len(seeds) != len(variants):
        raise InvalidParameter("need one seed per variant")
    records = tuple(run_schedule(v, gamma, phi0, phi1, s) for v, s in zip(variants, seeds))
    prediction = aggregate_prediction(variants[0], phi0, phi1)
    p0 = mzi_probabilities(phi0, phi1).p0
    zs = tuple(z_score(r.aggregates.d0, r.aggregates.n, p0) for r in records)
    pairwise = tuple(
        PairwiseTest(
            i,
            j,
            compare_runs(
                (records[i].aggregates.d0, records[i].aggregates.d1),
                (records[j].aggregates.d0, records[j].aggregates.d1),
            ),
        )
        for i, j in itertools.combinations(range(len(records)), 2)
    )
    return ComparisonReport(records, prediction, zs, pairwise)
