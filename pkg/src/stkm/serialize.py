"""Dataset CSV and ranking JSON/CSV serialization.

Dataset files look like::

    # extent: dsize=1000,tsize=1200,dims=2
    id,type,x,y,t
    a1,A,19.0,4.5,1.0

An optional ``# types: A,B,...`` line fixes the type table (ids follow its
order); otherwise ids are assigned in order of first appearance.

The extent line is optional; without it the bounding box of the data is used
and an :class:`ExtentFallbackWarning` is issued, since every density ratio
depends on the volume of the space.
"""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import dataclass, field

from .miner import Ranking
from .model import Dataset, SpaceExtent

EXTENT_PREFIX = "# extent:"
TYPES_PREFIX = "# types:"


class DatasetParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class ExtentFallbackWarning(UserWarning):
    pass


def _fmt(v: float) -> str:
    return repr(float(v))


def _num_list(raw: str) -> tuple[float, ...]:
    return tuple(float(p) for p in raw.split("x"))


def _parse_extent_line(line: str, lineno: int) -> dict:
    body = line[len(EXTENT_PREFIX):].strip()
    out = {}
    try:
        for part in filter(None, (p.strip() for p in body.split(","))):
            key, _, val = part.partition("=")
            key = key.strip().lower()
            val = val.strip()
            if key == "dsize":
                out["dsize"] = _num_list(val)
            elif key == "origin":
                out["origin"] = _num_list(val)
            elif key == "tsize":
                out["tsize"] = float(val)
            elif key == "t0":
                out["t0"] = float(val)
            elif key == "dims":
                out["dims"] = int(val)
            else:
                raise DatasetParseError(f"unknown extent key {key!r}", lineno)
    except ValueError as exc:
        if isinstance(exc, DatasetParseError):
            raise
        raise DatasetParseError(f"bad extent line: {exc}", lineno) from None
    if "dsize" not in out or "tsize" not in out:
        raise DatasetParseError("extent line needs dsize and tsize", lineno)
    return out


def _bounding_extent(rows, dims: int) -> SpaceExtent:
    if not rows:
        return SpaceExtent((1.0,) * dims, 1.0)
    lo = [min(r[2][d] for r in rows) for d in range(dims)]
    hi = [max(r[2][d] for r in rows) for d in range(dims)]
    t_lo = min(r[3] for r in rows)
    t_hi = max(r[3] for r in rows)
    # a degenerate side still needs positive size
    sizes = tuple((h - l) or 1.0 for l, h in zip(lo, hi))
    return SpaceExtent(sizes, (t_hi - t_lo) or 1.0, tuple(lo), t_lo)


def parse_dataset(text: str) -> Dataset:
    meta = None
    labels: list[str] = []
    header = None
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            if stripped.lower().startswith(EXTENT_PREFIX):
                meta = _parse_extent_line(stripped, lineno)
            elif stripped.lower().startswith(TYPES_PREFIX):
                labels = [lab.strip() for lab in stripped[len(TYPES_PREFIX):].split(",") if lab.strip()]
            continue
        fields = [f.strip() for f in next(csv.reader([stripped]))]
        if header is None:
            if fields not in (["id", "type", "x", "t"], ["id", "type", "x", "y", "t"]):
                raise DatasetParseError("header must be id,type,x[,y],t", lineno)
            header = fields
            continue
        if len(fields) != len(header):
            raise DatasetParseError(
                f"expected {len(header)} columns, got {len(fields)}", lineno)
        try:
            nums = [float(v) for v in fields[2:]]
        except ValueError:
            raise DatasetParseError(f"non-numeric coordinate in {fields[2:]}", lineno) from None
        if not all(math.isfinite(v) for v in nums):
            raise DatasetParseError("coordinates must be finite", lineno)
        rows.append((fields[0], fields[1], tuple(nums[:-1]), nums[-1]))
    if header is None:
        raise DatasetParseError("missing header line")
    dims = len(header) - 3

    if meta is not None:
        if meta.get("dims", dims) != dims:
            raise DatasetParseError(f"extent declares dims={meta['dims']} but rows are {dims}-D")
        dsize = meta["dsize"]
        if len(dsize) == 1:
            dsize = dsize * dims
        extent = SpaceExtent(dsize, meta["tsize"], meta.get("origin"), meta.get("t0", 0.0))
    else:
        warnings.warn(
            "no extent metadata; using the bounding box of the data as the space V",
            ExtentFallbackWarning, stacklevel=2)
        extent = _bounding_extent(rows, dims)
    return Dataset.from_records(rows, extent, labels=labels)


def write_dataset(dataset: Dataset) -> str:
    ext = dataset.extent
    sizes = ext.spatial_size
    parts = ["dsize=" + ("x".join(_fmt(s) for s in sizes) if len(set(sizes)) > 1 else _fmt(sizes[0])),
             f"tsize={_fmt(ext.temporal_size)}",
             f"dims={ext.dims}"]
    if any(ext.spatial_origin):
        parts.append("origin=" + "x".join(_fmt(o) for o in ext.spatial_origin))
    if ext.temporal_origin:
        parts.append(f"t0={_fmt(ext.temporal_origin)}")
    buf = io.StringIO()
    buf.write(f"{EXTENT_PREFIX} {','.join(parts)}\n")
    buf.write(f"{TYPES_PREFIX} {','.join(t.label for t in dataset.types)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["id", "type", "x", "t"] if ext.dims == 1 else ["id", "type", "x", "y", "t"])
    for inst in dataset.instances:
        w.writerow([inst.instance_id, dataset.label(inst.type),
                    *(_fmt(c) for c in inst.location), _fmt(inst.time)])
    return buf.getvalue()


@dataclass
class ReportEntry:
    rank: int
    pattern: list[str]
    seq_index: float
    length: int


@dataclass
class RankingReport:
    config: dict
    patterns: list[ReportEntry]
    stats: dict = field(default_factory=dict)

    def to_ranking(self, dataset: Dataset) -> Ranking:
        ranking = Ranking(self.config["k"], self.config["min_len"])
        for e in self.patterns:
            ranking.offer(tuple(dataset.type_id(lab) for lab in e.pattern), e.seq_index)
        return ranking


def make_report(entries, dataset: Dataset, config: dict, stats=None,
                include_timing: bool = False) -> RankingReport:
    stats_out = {}
    if stats is not None:
        stats_out = stats.counts()
        if include_timing:
            stats_out["wall_seconds"] = stats.wall_seconds
    pats = [ReportEntry(i, dataset.labels(e.types), e.seq_index, len(e.types))
            for i, e in enumerate(entries, start=1)]
    return RankingReport(dict(config), pats, stats_out)


def write_report(report: RankingReport, fmt: str = "json") -> str:
    if fmt == "json":
        doc = {
            "config": report.config,
            "patterns": [
                {"rank": e.rank, "pattern": e.pattern, "seq_index": e.seq_index, "length": e.length}
                for e in report.patterns
            ],
            "stats": report.stats,
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["rank", "pattern", "seq_index", "length"])
        for e in report.patterns:
            w.writerow([e.rank, "->".join(e.pattern), _fmt(e.seq_index), e.length])
        return buf.getvalue()
    raise ValueError(f"unknown output format {fmt!r}")


def write_ranking(ranking: Ranking, stats, dataset: Dataset, config: dict,
                  fmt: str = "json", include_timing: bool = False) -> str:
    """Serialize a ranking; wall time is left out unless asked for so output stays reproducible."""
    return write_report(make_report(ranking, dataset, config, stats, include_timing), fmt)


def parse_ranking(text: str) -> RankingReport:
    doc = json.loads(text)
    pats = [ReportEntry(int(p["rank"]), list(p["pattern"]), float(p["seq_index"]), int(p["length"]))
            for p in doc["patterns"]]
    return RankingReport(doc["config"], pats, doc.get("stats", {}))
