"""CSV and JSON encodings of :class:`~dlmsim.experiment.RunRecord`.

Both encoders are deterministic: floats are written with 17 significant
digits and keys appear in a fixed order, so one record always maps to the
same bytes.
"""

from __future__ import annotations

import enum
import json
from typing import Any

from .experiment import Aggregates, BlockResult, RunConfig, RunRecord
from .stats import Verdict

CSV_HEADER = "block_index,kind,n_events,d0,d1,registered,freq_d0"

_AGG_FIELDS = (
    "n",
    "d0",
    "d1",
    "mean_freq_d0",
    "block_mean_d0",
    "block_std_d0",
    "oracle_p0",
    "expected_stddev_d0",
    "z_d0",
    "verdict",
)


class Format(str, enum.Enum):
    CSV = "csv"
    JSON = "json"


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def _json_value(v: Any) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, dict):
        return "{" + ",".join(f"{json.dumps(k)}:{_json_value(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ",".join(_json_value(x) for x in v) + "]"
    raise TypeError(f"cannot encode {type(v).__name__}")


def record_to_dict(record: RunRecord) -> dict[str, Any]:
    c = record.config
    a = record.aggregates
    out: dict[str, Any] = {
        "config": {
            "gamma": c.gamma,
            "phase0": c.phase0,
            "phase1": c.phase1,
            "seed": c.seed,
            "model_version": c.model_version,
        },
        "blocks": [
            {
                "block_index": b.block_index,
                "kind": b.kind,
                "n_events": b.n_events,
                "d0": b.d0_count,
                "d1": b.d1_count,
                "registered": b.registered,
                "freq_d0": b.freq_d0,
            }
            for b in record.blocks
        ],
        "aggregates": {
            name: (getattr(a, name).value if name == "verdict" else getattr(a, name))
            for name in _AGG_FIELDS
        },
    }
    if record.clicks is not None:
        out["clicks"] = ["".join("01"[v] for v in blk) for blk in record.clicks]
    return out


def _csv(record: RunRecord) -> str:
    lines = [CSV_HEADER]
    for b in record.blocks:
        freq = "" if b.freq_d0 is None else fmt_float(b.freq_d0)
        reg = "true" if b.registered else "false"
        lines.append(f"{b.block_index},{b.kind},{b.n_events},{b.d0_count},{b.d1_count},{reg},{freq}")
    a = record.aggregates
    c = record.config
    z = "degenerate" if a.z_d0 is None else fmt_float(a.z_d0)
    footer = [
        ("N", str(a.n)),
        ("d0", str(a.d0)),
        ("d1", str(a.d1)),
        ("mean_freq_d0", fmt_float(a.mean_freq_d0)),
        ("block_mean_d0", fmt_float(a.block_mean_d0)),
        ("block_std_d0", fmt_float(a.block_std_d0)),
        ("oracle_p0", fmt_float(a.oracle_p0)),
        ("expected_stddev_d0", fmt_float(a.expected_stddev_d0)),
        ("z_d0", z),
        ("verdict", a.verdict.value),
        ("seed", str(c.seed)),
        ("gamma", fmt_float(c.gamma)),
        ("phase0", fmt_float(c.phase0)),
        ("phase1", fmt_float(c.phase1)),
        ("model_version", c.model_version),
    ]
    lines.extend(f"# {k}={v}" for k, v in footer)
    if record.clicks is not None:
        data_indices = [b.block_index for b in record.blocks if b.registered]
        for idx, blk in zip(data_indices, record.clicks):
            lines.append(f"# clicks[{idx}]=" + "".join("01"[v] for v in blk))
    return "\n".join(lines) + "\n"


def emit_run_record(record: RunRecord, format: Format | str = Format.JSON) -> bytes:
    fmt = Format(format)
    if fmt is Format.CSV:
        return _csv(record).encode("utf-8")
    return (_json_value(record_to_dict(record)) + "\n").encode("utf-8")


def _aggregates(values: dict[str, Any]) -> Aggregates:
    return Aggregates(
        n=int(values["n"]),
        d0=int(values["d0"]),
        d1=int(values["d1"]),
        mean_freq_d0=float(values["mean_freq_d0"]),
        block_mean_d0=float(values["block_mean_d0"]),
        block_std_d0=float(values["block_std_d0"]),
        oracle_p0=float(values["oracle_p0"]),
        expected_stddev_d0=float(values["expected_stddev_d0"]),
        z_d0=None if values["z_d0"] is None else float(values["z_d0"]),
        verdict=Verdict(values["verdict"]),
    )


def record_from_json(data: bytes | str) -> RunRecord:
    obj = json.loads(data)
    c = obj["config"]
    config = RunConfig(
        float(c["gamma"]), float(c["phase0"]), float(c["phase1"]), int(c["seed"]), c["model_version"]
    )
    blocks = tuple(
        BlockResult(b["block_index"], b["kind"], b["n_events"], b["d0"], b["d1"], b["registered"])
        for b in obj["blocks"]
    )
    clicks = None
    if "clicks" in obj:
        clicks = tuple(bytes(int(ch) for ch in s) for s in obj["clicks"])
    return RunRecord(config, blocks, _aggregates(obj["aggregates"]), clicks)


def record_from_csv(data: bytes | str) -> RunRecord:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = text.splitlines()
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("not a run-record CSV")
    blocks = []
    footer: dict[str, str] = {}
    clicks: list[bytes] = []
    for line in lines[1:]:
        if line.startswith("# "):
            key, _, value = line[2:].partition("=")
            if key.startswith("clicks["):
                clicks.append(bytes(int(ch) for ch in value))
            else:
                footer[key] = value
            continue
        idx, kind, n, d0, d1, reg, _ = line.split(",")
        blocks.append(BlockResult(int(idx), kind, int(n), int(d0), int(d1), reg == "true"))
    config = RunConfig(
        float(footer["gamma"]),
        float(footer["phase0"]),
        float(footer["phase1"]),
        int(footer["seed"]),
        footer["model_version"],
    )
    agg = dict(footer)
    agg["n"] = footer["N"]
    agg["z_d0"] = None if footer["z_d0"] == "degenerate" else footer["z_d0"]
    return RunRecord(config, tuple(blocks), _aggregates(agg), tuple(clicks) if clicks else None)
