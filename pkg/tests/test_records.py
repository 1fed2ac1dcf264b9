import json
import math

import pytest

from dlmsim import MODEL_VERSION
from dlmsim.experiment import Aggregates, BlockResult, RunConfig, RunRecord, run_schedule
from dlmsim.records import CSV_HEADER, emit_run_record, record_from_csv, record_from_json
from dlmsim.schedule import DataBlock, HwResetBlock, ResetBlock, sched
from dlmsim.stats import Verdict


@pytest.fixture
def dark_record():
    block = BlockResult(0, "data", 100, 0, 100, True)
    agg = Aggregates.from_blocks([block], 0.0, 0.0)
    return RunRecord(RunConfig(0.99, 0.0, 0.0, 42), (block,), agg)


@pytest.fixture
def mixed_record():
    s = sched(DataBlock(120), ResetBlock(300, phase=None), HwResetBlock(), DataBlock(80))
    return run_schedule(s, 0.99, 0.7, 0.1, 2**64 - 1, keep_clicks=True)


def test_csv_single_row(dark_record):
    lines = emit_run_record(dark_record, "csv").decode().splitlines()
    assert lines[0] == CSV_HEADER
    assert lines[1] == "0,data,100,0,100,true,0"
    footer = [line for line in lines if line.startswith("# ")]
    for key in ("# N=100", "# mean_freq_d0=0", "# z_d0=degenerate", "# seed=42"):
        assert key in footer


def test_json_structure(dark_record):
    obj = json.loads(emit_run_record(dark_record, "json"))
    assert len(obj["blocks"]) == 1
    assert list(obj) == ["config", "blocks", "aggregates"]
    assert obj["config"]["model_version"] == MODEL_VERSION
    assert obj["aggregates"]["verdict"] == Verdict.CONSISTENT.value
    assert obj["aggregates"]["z_d0"] is None


def test_byte_identical(mixed_record):
    for fmt in ("csv", "json"):
        assert emit_run_record(mixed_record, fmt) == emit_run_record(mixed_record, fmt)


def test_seventeen_digits():
    block = BlockResult(0, "data", 3, 1, 2, True)
    rec = RunRecord(RunConfig(0.1, 0.0, 0.0, 0), (block,), Aggregates.from_blocks([block], 0.0, 0.0))
    text = emit_run_record(rec, "json").decode()
    assert '"gamma":0.10000000000000001' in text
    assert '"freq_d0":0.33333333333333331' in text


def test_json_round_trip(mixed_record):
    back = record_from_json(emit_run_record(mixed_record, "json"))
    assert back == mixed_record


def test_csv_round_trip(mixed_record):
    back = record_from_csv(emit_run_record(mixed_record, "csv"))
    assert back == mixed_record


def test_csv_and_json_agree(mixed_record):
    a = record_from_csv(emit_run_record(mixed_record, "csv")).aggregates
    b = record_from_json(emit_run_record(mixed_record, "json")).aggregates
    for name in ("mean_freq_d0", "block_mean_d0", "block_std_d0", "oracle_p0", "expected_stddev_d0", "z_d0"):
        assert abs(getattr(a, name) - getattr(b, name)) <= 1e-15
    assert (a.n, a.d0, a.d1, a.verdict) == (b.n, b.d0, b.d1, b.verdict)


def test_clicks_only_when_requested():
    rec = run_schedule(sched(DataBlock(10)), 0.9, 0.0, 0.0, 1)
    assert "clicks" not in json.loads(emit_run_record(rec, "json"))
    assert "clicks[" not in emit_run_record(rec, "csv").decode()


def test_hwreset_row_has_empty_frequency(mixed_record):
    lines = emit_run_record(mixed_record, "csv").decode().splitlines()
    assert lines[3] == "2,hwreset,0,0,0,false,"
    assert math.isclose(float(lines[1].split(",")[-1]), mixed_record.blocks[0].freq_d0)
