"""Seeded experiment orchestration with reproducible reports.

A report is a pure function of its configuration: per-seed records are
computed independently (seeds may run concurrently; assembly is a
deterministic reduction ordered by seed value) and serialized as canonical
JSON, so replaying a stored report reproduces it byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import json
import math
import os
import statistics

import numpy as np

from . import collisions as _col
from . import verify as _ver
from .counting import repr_multiset, repr_strict, repr_weighted
from .sampling import ModelParams, expected_count, sample_set

SCHEMA_VERSION = 1

_DTYPE_LIMITS = ((np.uint32, (1 << 32) - 1), (np.uint64, (1 << 64) - 1))


def _auto_dtype(bound: int):
    """Narrowest checked count dtype admitting the a-priori entry bound."""
    for dtype, limit in _DTYPE_LIMITS:
        if bound <= limit:
            return dtype
    raise OverflowError(f"count bound {bound} exceeds 64-bit range")


def _jsonify(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items() if not str(k).startswith("_")}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return f if math.isfinite(f) else None
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    raise TypeError(f"cannot serialize {type(obj)!r}")


def canonical_json(obj) -> str:
    """Sorted-keys JSON with a trailing newline; the byte-compare format."""
    return json.dumps(_jsonify(obj), sort_keys=True, indent=2) + "\n"


def default_window(n: int) -> tuple[int, int]:
    """Basis-check window: burn-in at max(1000, sqrt(N)) up to N."""
    return (min(n, max(1000, math.isqrt(n))), n)


def spec_key(f) -> str:
    return ",".join(str(int(w)) for w in f)


def pair_key(spec: _col.WeightSpec) -> str:
    return spec_key(spec.d) + "|" + spec_key(spec.e)


def default_one_sided(h: int, max_arity: int = 3) -> tuple[tuple[int, ...], ...]:
    """Tracked single-equation weight vectors; arity capped for tractability."""
    return tuple(f for f in _col.one_sided_weights(h) if len(f) <= max_arity)


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of a seeded construction experiment."""

    h: int
    n: int
    seeds: tuple[int, ...]
    window: tuple[int, int] | None = None
    audit_hi: int | None = 50_000
    floor: bool = True
    one_sided: tuple[tuple[int, ...], ...] = ()
    out_dir: str | None = None

    def __post_init__(self) -> None:
        if self.h < 2:
            raise ValueError("h must be >= 2")
        if self.n < 10:
            raise ValueError("N must be >= 10")
        if not self.seeds or len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seeds must be a nonempty list of distinct integers")
        for f in self.one_sided:
            _col.validate_one_sided(f, self.h)

    def resolved_window(self) -> tuple[int, int]:
        return self.window if self.window is not None else default_window(self.n)

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "n": self.n,
            "seeds": list(self.seeds),
            "window": list(self.resolved_window()),
            "audit_hi": self.audit_hi,
            "floor": self.floor,
            "one_sided": [list(f) for f in self.one_sided],
            "out_dir": self.out_dir,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        return cls(
            h=int(d["h"]),
            n=int(d["n"]),
            seeds=tuple(int(s) for s in d["seeds"]),
            window=tuple(d["window"]) if d.get("window") is not None else None,
            audit_hi=d.get("audit_hi"),
            floor=bool(d.get("floor", True)),
            one_sided=tuple(tuple(f) for f in d.get("one_sided", [])),
            out_dir=d.get("out_dir"),
        )


def floor_exponent(h: int) -> float:
    """Normalization exponent of the strict-count floor: 1/(4h-1)."""
    return float(Fraction(1, 4 * h - 1))


def weighted_max_count(values, f, h: int) -> int:
    """Largest number of ordered distinct-element solutions of
    f_1 x_1 + ... + f_t x_t = m over all targets m."""
    f = _col.validate_one_sided(f, h)
    vals = list(values)
    if len(vals) < len(f):
        return 0
    max_m = sum(f) * max(vals)
    table = repr_weighted(vals, f, max_m)
    return int(table.counts.max())


def solution_total(values, spec: _col.WeightSpec, h: int) -> int:
    """Total ordered distinct-element solutions of the two-sided equation
    given by `spec` inside `values`."""
    if not spec.is_reduced_form(h):
        raise ValueError(f"not a reduced two-sided spec for h={h}: {spec}")
    vals = list(values)
    d_buckets: dict[int, list[tuple[int, ...]]] = {}
    for s, elems in _col._side_assignments(vals, spec.d):
        d_buckets.setdefault(s, []).append(elems)
    mult = _col._orderings_multiplier(spec.d) * _col._orderings_multiplier(spec.e)
    canonical = 0
    for s, ee in _col._side_assignments(vals, spec.e):
        for de in d_buckets.get(s, ()):
            if not set(de) & set(ee):
                canonical += 1
    return canonical * mult


def run_construction(
    h: int,
    n: int,
    seed: int,
    *,
    window: tuple[int, int] | None = None,
    audit_hi: int | None = 50_000,
    floor: bool = True,
    one_sided: tuple[tuple[int, ...], ...] = (),
    keep_tables: bool = False,
) -> dict:
    """Sample, clean, and verify one seed; returns a JSON-ready record.

    Any invariant failure (a cleaned set that is not B_h[1], or a violated
    decomposition bound) raises rather than reporting quietly.
    """
    params = ModelParams(h, n, seed)
    sampled = sample_set(params)
    b_vals = list(sampled.elements)
    records = _col.enumerate_collisions(b_vals, h)
    c_set = _col.deletion_set(b_vals, h, records=records)
    a_vals = _col.construct_a(b_vals, h, records=records)

    verdict = _ver.is_bhg(a_vals, h, 1)
    if not verdict.ok:
        raise AssertionError(
            f"pipeline violation: cleaned set not B_{h}[1] at seed {seed}, witness {verdict.witness}"
        )

    n_lo, n_hi = window if window is not None else default_window(n)
    if not 1 <= n_lo <= n_hi <= n:
        raise ValueError("window must satisfy 1 <= lo <= hi <= N")
    k = 2 * h
    dtype = _auto_dtype(math.comb(len(b_vals) + k - 1, k)) if b_vals else np.uint64
    table_b = repr_multiset(b_vals, k, n_hi, counts_dtype=dtype)
    table_a = repr_multiset(a_vals, k, n_hi, counts_dtype=dtype)
    basis_b = _ver.basis_window(b_vals, k, n_lo, n_hi, table=table_b)
    basis_a = _ver.basis_window(a_vals, k, n_lo, n_hi, table=table_a)

    rec = {
        "h": h,
        "n": n,
        "seed": seed,
        "b_size": len(b_vals),
        "c_size": len(c_set),
        "a_size": len(a_vals),
        "expected_b": expected_count(params, 1, n),
        "bh1": verdict.to_json_dict(),
        "collisions": {
            "total": len(records),
            "distinct_2h": sum(1 for r in records if r.kind == _col.DISTINCT_2H),
            "weighted": sum(1 for r in records if r.kind == _col.WEIGHTED),
        },
        "basis_b": basis_b.to_json_dict(),
        "basis_a": basis_a.to_json_dict(),
    }

    if floor:
        sdtype = _auto_dtype(math.comb(max(len(b_vals), k), k))
        strict_b = repr_strict(b_vals, k, n_hi, counts_dtype=sdtype)
        ns = np.arange(n_lo, n_hi + 1, dtype=np.float64)
        norm = strict_b.counts[n_lo : n_hi + 1].astype(np.float64) / ns ** floor_exponent(h)
        rec["floor_min_norm"] = float(norm.min()) if norm.size else None
    else:
        rec["floor_min_norm"] = None

    rec["weighted_max"] = {spec_key(f): weighted_max_count(b_vals, f, h) for f in one_sided}

    if audit_hi is not None:
        hi = min(audit_hi, n)
        rec["decomposition"] = _ver.decomposition_summary(
            b_vals, c_set, h, 1, hi, records=records
        )
        if rec["decomposition"]["violations"]:
            raise AssertionError(f"decomposition bound violated at seed {seed}")
    else:
        rec["decomposition"] = None

    if keep_tables:
        rec["_tables"] = {"basis_b": table_b, "basis_a": table_a}
    return rec


def run_experiment(config: ExperimentConfig) -> dict:
    """All seeds of a configuration, plus aggregate medians."""
    records = [
        run_construction(
            config.h,
            config.n,
            seed,
            window=config.resolved_window(),
            audit_hi=config.audit_hi,
            floor=config.floor,
            one_sided=config.one_sided,
        )
        for seed in sorted(config.seeds)
    ]
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": config.to_dict(),
        "records": records,
        "aggregate": _aggregate(records),
    }
    return report


def _aggregate(records: list[dict]) -> dict:
    def med(key_fn):
        vals = [key_fn(r) for r in records]
        vals = [v for v in vals if v is not None and not (isinstance(v, float) and math.isnan(v))]
        return statistics.median(vals) if vals else None

    return {
        "seeds": len(records),
        "all_bh1_ok": all(r["bh1"]["ok"] for r in records),
        "median_b_size": med(lambda r: r["b_size"]),
        "median_c_size": med(lambda r: r["c_size"]),
        "median_a_size": med(lambda r: r["a_size"]),
        "median_coverage_a": med(lambda r: r["basis_a"]["coverage"]),
        "median_coverage_b": med(lambda r: r["basis_b"]["coverage"]),
        "median_fit_exp_b": med(lambda r: r["basis_b"]["fit_exp"]),
        "median_floor_min_norm": med(lambda r: r["floor_min_norm"]),
    }


def basis_floor_check(h: int, n: int, seeds, n_lo: int) -> dict:
    """Distribution over seeds of min_n (strict 2h-count / n^(1/(4h-1))).

    The median over seeds being positive means at least half the windows
    contain no gap; the median is also the reported empirical floor
    constant.
    """
    if n_lo < 1 or n_lo > n:
        raise ValueError("need 1 <= n_lo <= N")
    k = 2 * h
    expo = floor_exponent(h)
    per_seed = {}
    for seed in sorted(set(int(s) for s in seeds)):
        sampled = sample_set(ModelParams(h, n, seed))
        vals = list(sampled.elements)
        dtype = _auto_dtype(math.comb(max(len(vals), k), k))
        table = repr_strict(vals, k, n, counts_dtype=dtype)
        ns = np.arange(n_lo, n + 1, dtype=np.float64)
        norm = table.counts[n_lo:].astype(np.float64) / ns**expo
        per_seed[str(seed)] = float(norm.min())
    vals = list(per_seed.values())
    return {
        "h": h,
        "n": n,
        "n_lo": n_lo,
        "per_seed": per_seed,
        "median": statistics.median(vals),
        "empirical_c": statistics.median(vals),
    }


def boundedness_check(h: int, n_list, seeds, one_sided=None, two_sided=None) -> dict:
    """Weighted-solution statistics across nested windows.

    For each window bound N, each tracked one-sided weight vector reports
    the max-over-targets solution count, and each two-sided spec the total
    solution count; sets are nested because the sampler is prefix
    consistent, so growth across N is meaningful per seed.
    """
    n_values = sorted(set(int(x) for x in n_list))
    if one_sided is None:
        one_sided = default_one_sided(h)
    else:
        one_sided = tuple(_col.validate_one_sided(f, h) for f in one_sided)
    if two_sided is None:
        two_sided = tuple(_col.reduced_weight_pairs(h))
    else:
        for spec in two_sided:
            if not spec.is_reduced_form(h):
                raise ValueError(f"invalid two-sided spec for h={h}: {spec}")
    n_max = n_values[-1]
    l6 = {spec_key(f): {str(nv): [] for nv in n_values} for f in one_sided}
    l8 = {pair_key(s): {str(nv): [] for nv in n_values} for s in two_sided}
    for seed in sorted(set(int(s) for s in seeds)):
        sampled = sample_set(ModelParams(h, n_max, seed))
        for nv in n_values:
            vals = [x for x in sampled.elements if x <= nv]
            for f in one_sided:
                l6[spec_key(f)][str(nv)].append(weighted_max_count(vals, f, h))
            for spec in two_sided:
                l8[pair_key(spec)][str(nv)].append(solution_total(vals, spec, h))
    out = {
        "h": h,
        "n_values": n_values,
        "seeds": sorted(set(int(s) for s in seeds)),
        "one_sided": {
            key: {"max": rows, "median": {nv: statistics.median(v) for nv, v in rows.items()}}
            for key, rows in l6.items()
        },
        "two_sided": {
            key: {"total": rows, "median": {nv: statistics.median(v) for nv, v in rows.items()}}
            for key, rows in l8.items()
        },
    }
    return out


# ------------------------------------------------------------ reporting


def emit_report(report: dict, out_dir: str, formats=("json", "csv")) -> list[str]:
    """Write the canonical JSON report and a flat per-seed CSV summary."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    if "json" in formats:
        path = os.path.join(out_dir, "report.json")
        with open(path, "w") as fh:
            fh.write(canonical_json(report))
        paths.append(path)
    if "csv" in formats and "records" in report:
        path = os.path.join(out_dir, "records.csv")
        cols = [
            "seed",
            "b_size",
            "c_size",
            "a_size",
            "bh1_ok",
            "coverage_b",
            "coverage_a",
            "fit_exp_b",
            "floor_min_norm",
        ]
        with open(path, "w") as fh:
            fh.write(",".join(cols) + "\n")
            for r in report["records"]:
                row = [
                    r["seed"],
                    r["b_size"],
                    r["c_size"],
                    r["a_size"],
                    int(r["bh1"]["ok"]),
                    r["basis_b"]["coverage"],
                    r["basis_a"]["coverage"],
                    r["basis_b"]["fit_exp"],
                    r["floor_min_norm"],
                ]
                fh.write(",".join("" if v is None else str(v) for v in row) + "\n")
        paths.append(path)
    return paths


def replay_report(report: dict) -> tuple[bool, str]:
    """Re-run a report's configuration and byte-compare the canonical dumps."""
    config = ExperimentConfig.from_dict(report["config"])
    fresh = run_experiment(config)
    a = canonical_json(report)
    b = canonical_json(fresh)
    if a == b:
        return True, ""
    for i, (la, lb) in enumerate(zip(a.splitlines(), b.splitlines())):
        if la != lb:
            return False, f"first difference at line {i + 1}: {la!r} != {lb!r}"
    return False, "reports differ in length"


def validate_report(report: dict) -> None:
    """Structural check of the documented report schema; raises on problems."""

    def need(cond, msg):
        if not cond:
            raise ValueError(f"schema violation: {msg}")

    need(isinstance(report, dict), "report must be an object")
    need(report.get("schema_version") == SCHEMA_VERSION, "bad schema_version")
    cfg = report.get("config")
    need(isinstance(cfg, dict), "missing config")
    for key, typ in (("h", int), ("n", int), ("seeds", list), ("window", list)):
        need(isinstance(cfg.get(key), typ), f"config.{key} must be {typ.__name__}")
    recs = report.get("records")
    need(isinstance(recs, list) and recs, "records must be a nonempty list")
    for r in recs:
        for key in ("h", "n", "seed", "b_size", "c_size", "a_size", "bh1", "basis_b", "basis_a"):
            need(key in r, f"record missing {key}")
        need(isinstance(r["bh1"], dict) and "ok" in r["bh1"], "record.bh1 malformed")
        for basis in ("basis_b", "basis_a"):
            for key in ("k", "n_lo", "n_hi", "coverage"):
                need(key in r[basis], f"record.{basis} missing {key}")
    need(isinstance(report.get("aggregate"), dict), "missing aggregate")
    need("all_bh1_ok" in report["aggregate"], "aggregate missing all_bh1_ok")
