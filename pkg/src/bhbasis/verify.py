"""Finite-scale certification of the two construction claims.

* the B_h[1] half: every target has at most one h-fold representation in
  the cleaned set (``is_bhg``);
* the basis half: 2h-fold counts are eventually positive and grow like a
  power of n (``basis_window``);
* plus an audit of the deleted-representation decomposition, which bounds
  how many 2h-fold representations the deletion step can destroy.

Window truncation is exact: every part of a representation of n is <= n,
so counts computed from A intersected with [1, N] agree with counts for the
full A at all targets n <= N.
"""

from __future__ import annotations

from dataclasses import dataclass, asdict
import math

import numpy as np

from . import collisions as _col
from .counting import ReprTable, multiset_sums, repr_multiset, repr_strict, validate_elements
from .fits import dyadic_fit

_ENUM_LIMIT = 4_000_000


@dataclass(frozen=True)
class BhgVerdict:
    """Outcome of a B_h[g] check: ok, smallest violating target if any,
    and whether the scan window covered every representable target."""

    ok: bool
    witness: int | None
    window_limited: bool
    max_n: int

    def to_json_dict(self) -> dict:
        return asdict(self)


def is_bhg(a, h: int, g: int, max_n: int | None = None) -> BhgVerdict:
    """True iff every target n <= max_n has at most g nondecreasing h-fold
    representations in a.

    max_n defaults to h * max(a), which makes the scan exhaustive; passing a
    smaller window flags the verdict window_limited instead of raising.
    """
    if g < 1:
        raise ValueError("g must be >= 1")
    arr = validate_elements(a)
    if arr.size == 0:
        return BhgVerdict(True, None, False, 0 if max_n is None else max_n)
    full = h * int(arr[-1])
    if max_n is None:
        max_n = full
    window_limited = max_n < full
    if math.comb(int(arr.size) + h - 1, h) <= _ENUM_LIMIT:
        sums = multiset_sums(arr, h)
        sums = sums[sums <= max_n]
        if sums.size == 0:
            return BhgVerdict(True, None, window_limited, max_n)
        uniq, cnt = np.unique(sums, return_counts=True)
        bad = uniq[cnt > g]
    else:
        table = repr_multiset(arr, h, max_n)
        bad = np.nonzero(table.counts > g)[0]
    if bad.size:
        return BhgVerdict(False, int(bad.min()), window_limited, max_n)
    return BhgVerdict(True, None, window_limited, max_n)


@dataclass(frozen=True)
class BasisReport:
    """Coverage and growth of k-fold representation counts over a window."""

    k: int
    n_lo: int
    n_hi: int
    last_zero: int | None
    coverage: float
    fit_c: float
    fit_exp: float
    fit_bins: int
    fit_resid: float

    def to_json_dict(self) -> dict:
        return asdict(self)


def basis_window(a, k: int, n_lo: int, n_hi: int, *, table: ReprTable | None = None) -> BasisReport:
    """Report last zero, coverage, and dyadic power-law fit of k-fold counts
    over [n_lo, n_hi].

    A precomputed multiset table may be passed to avoid recomputation; its
    semantics and length are checked.  n_hi must not exceed the provenance
    window of a, so that truncation is exact.
    """
    if n_lo < 1 or n_hi < n_lo:
        raise ValueError("window must satisfy 1 <= n_lo <= n_hi")
    if table is None:
        table = repr_multiset(a, k, n_hi)
    else:
        if table.semantics != ("multiset", k):
            raise ValueError(f"table semantics {table.semantics} != ('multiset', {k})")
        if table.max_n < n_hi:
            raise ValueError("table too short for requested window")
    window = table.counts[n_lo : n_hi + 1]
    zeros = np.nonzero(window == 0)[0]
    last_zero = int(zeros.max()) + n_lo if zeros.size else None
    coverage = float(np.count_nonzero(window) / window.size)
    fit_c, fit_exp, bins, resid = dyadic_fit(n_lo, window)
    return BasisReport(k, n_lo, n_hi, last_zero, coverage, fit_c, fit_exp, bins, resid)


@dataclass(frozen=True)
class DecompositionAudit:
    """Per-target audit of lost 2h-fold representations after deletion.

    lhs counts 2h-multisets over B that use a deleted element; r1 bounds
    those with a repeated term, r2/r3 the strictly increasing ones touching
    a distinct-branch / weighted-branch deletion.  The construction only
    guarantees lhs <= r1 + r2 + r3 (the classes may overlap).
    """

    n: int
    lhs: int
    r1: int
    r2: int
    r3: int

    @property
    def ok(self) -> bool:
        return self.lhs <= self.r1 + self.r2 + self.r3

    def to_json_dict(self) -> dict:
        d = asdict(self)
        d["ok"] = self.ok
        return d


def _decomposition_tables(b, c_set, h: int, n_hi: int, records=None):
    """Shared count tables for the deletion decomposition over [0, n_hi]."""
    arr = validate_elements(b)
    if records is None:
        records = _col.enumerate_collisions(arr, h)
    expected_c = frozenset(r.largest for r in records)
    if frozenset(int(x) for x in c_set) != expected_c:
        raise ValueError("c_set does not match the deletion set of b")
    c1 = {r.largest for r in records if r.kind == _col.DISTINCT_2H}
    c2 = {r.largest for r in records if r.kind == _col.WEIGHTED}
    vals = arr.tolist()
    k = 2 * h
    full = repr_multiset(vals, k, n_hi).counts.astype(np.int64)
    kept = repr_multiset([x for x in vals if x not in expected_c], k, n_hi).counts.astype(np.int64)
    strict_all = repr_strict(vals, k, n_hi).counts.astype(np.int64)
    strict_no1 = repr_strict([x for x in vals if x not in c1], k, n_hi).counts.astype(np.int64)
    strict_no2 = repr_strict([x for x in vals if x not in c2], k, n_hi).counts.astype(np.int64)
    return full, kept, strict_all, strict_no1, strict_no2


def decomposition_audit_range(
    b, c_set, h: int, n_lo: int, n_hi: int, *, records=None
) -> list[DecompositionAudit]:
    """Audit every target in [n_lo, n_hi] with five shared count tables.

    r1 is (all 2h-multisets) - (strictly increasing ones); r2 and r3 count
    strict tuples meeting the case conditions by complement against the
    tuples avoiding the respective deletion branch.
    """
    full, kept, strict_all, strict_no1, strict_no2 = _decomposition_tables(
        b, c_set, h, n_hi, records
    )
    out = []
    for n in range(n_lo, n_hi + 1):
        audit = DecompositionAudit(
            n,
            int(full[n]) - int(kept[n]),
            int(full[n]) - int(strict_all[n]),
            int(strict_all[n]) - int(strict_no1[n]),
            int(strict_all[n]) - int(strict_no2[n]),
        )
        if not audit.ok:
            raise AssertionError(f"decomposition bound violated at n={n}: {audit}")
        out.append(audit)
    return out


def decomposition_summary(b, c_set, h: int, n_lo: int, n_hi: int, *, records=None) -> dict:
    """Vectorized sweep of the decomposition bound; reports violations (none
    expected) and the largest slack r1 + r2 + r3 - lhs seen."""
    full, kept, strict_all, strict_no1, strict_no2 = _decomposition_tables(
        b, c_set, h, n_hi, records
    )
    sl = slice(n_lo, n_hi + 1)
    lhs = full[sl] - kept[sl]
    r1 = full[sl] - strict_all[sl]
    r2 = strict_all[sl] - strict_no1[sl]
    r3 = strict_all[sl] - strict_no2[sl]
    slack = r1 + r2 + r3 - lhs
    return {
        "n_lo": n_lo,
        "n_hi": n_hi,
        "checked": int(lhs.size),
        "violations": int(np.count_nonzero(slack < 0)),
        "max_slack": int(slack.max()) if slack.size else 0,
        "lhs_total": int(lhs.sum()),
    }


def decomposition_audit(b, c_set, h: int, n: int, *, records=None) -> DecompositionAudit:
    """Single-target audit; see decomposition_audit_range."""
    return decomposition_audit_range(b, c_set, h, n, n, records=records)[0]


def counts_csv(path, n_lo: int, n_hi: int, series: dict[str, np.ndarray]) -> None:
    """Plot-ready CSV of count tables over a window; columns keyed by name."""
    names = list(series)
    with open(path, "w") as fh:
        fh.write("n," + ",".join(names) + "\n")
        for n in range(n_lo, n_hi + 1):
            row = ",".join(str(int(series[name][n])) for name in names)
            fh.write(f"{n},{row}\n")
