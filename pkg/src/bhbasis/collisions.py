"""Collision detection and the deletion set for the B_h[1] property.

Two distinct h-multisets over a set B with equal sums reduce, by cancelling
common terms and grouping repeats, to a canonical weighted equality

    d_1 b'_1 + ... + d_k b'_k = e_1 b'_{k+1} + ... + e_l b'_{k+l}

over pairwise-distinct elements.  Either all 2h entries were already
distinct (the "distinct_2h" form, k = l = h with unit weights) or the
reduced form satisfies sum(d) = sum(e) <= h and k + l <= 2h - 1.  The
deletion set C collects the largest participant of every such equality
present in B; removing C restores R_{h, B \\ C}(n) <= 1 for every n.

Canonical ordering: within a side, (weight, element) slots are sorted by
descending weight then descending element; the side containing the overall
largest element is placed on the d side (swapping sides if necessary, which
is sound because the two sides have equal weight sums) with the largest
element's slot first.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass
from itertools import combinations, product
import json
import logging

from .counting import validate_elements

log = logging.getLogger("bhbasis.collisions")

DISTINCT_2H = "distinct_2h"
WEIGHTED = "weighted"


@dataclass(frozen=True)
class WeightSpec:
    """Two-sided positive weight vectors (d | e) of a canonical equality."""

    d: tuple[int, ...]
    e: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(w < 1 for w in self.d) or any(w < 1 for w in self.e):
            raise ValueError("weights must be positive integers")

    @property
    def arity(self) -> int:
        return len(self.d) + len(self.e)

    def weight_sum(self) -> int:
        return sum(self.d)

    def is_balanced(self) -> bool:
        return sum(self.d) == sum(self.e)

    def is_distinct_form(self, h: int) -> bool:
        return self.d == (1,) * h and self.e == (1,) * h

    def is_reduced_form(self, h: int) -> bool:
        """Valid reduced (weighted-branch) spec: sum(d) = sum(e) <= h, arity <= 2h-1."""
        return (
            bool(self.d)
            and bool(self.e)
            and self.is_balanced()
            and self.weight_sum() <= h
            and self.arity <= 2 * h - 1
        )

    @classmethod
    def distinct_2h(cls, h: int) -> "WeightSpec":
        return cls((1,) * h, (1,) * h)

    def sort_key(self) -> tuple:
        return (self.d, self.e)


def one_sided_weights(h: int) -> list[tuple[int, ...]]:
    """Canonical single-equation weight vectors f: sum(f) <= 2h, t <= 2h - 1.

    Vectors are descending tuples, deduplicated up to permutation (ordered
    distinct-tuple counts are permutation invariant).
    """
    out = []
    for s in range(1, 2 * h + 1):
        for part in _descending_partitions(s):
            if len(part) <= 2 * h - 1:
                out.append(part)
    return sorted(set(out), key=lambda p: (len(p), p))


def validate_one_sided(f, h: int) -> tuple[int, ...]:
    weights = tuple(int(w) for w in f)
    if not weights or any(w < 1 for w in weights):
        raise ValueError("weights must be positive integers")
    if sum(weights) > 2 * h:
        raise ValueError(f"weight sum {sum(weights)} exceeds 2h = {2 * h}")
    if len(weights) > 2 * h - 1:
        raise ValueError(f"arity {len(weights)} exceeds 2h - 1 = {2 * h - 1}")
    return weights


def _descending_partitions(s: int, cap: int | None = None) -> list[tuple[int, ...]]:
    cap = s if cap is None else cap
    if s == 0:
        return [()]
    out = []
    for first in range(min(s, cap), 0, -1):
        for rest in _descending_partitions(s - first, first):
            out.append((first,) + rest)
    return out


def reduced_weight_pairs(h: int) -> list[WeightSpec]:
    """All canonical weighted-branch specs for order h, mirrors deduplicated.

    Pairs of descending partitions (P, Q) with equal sum s <= h and
    |P| + |Q| <= 2h - 1; the lexicographically larger side is put first.
    Singleton-vs-singleton pairs are dropped (s*x = s*y has no
    distinct-element solution).
    """
    specs = []
    for s in range(1, h + 1):
        parts = _descending_partitions(s)
        for p, q in product(parts, parts):
            if p < q:
                continue
            if len(p) + len(q) > 2 * h - 1:
                continue
            if len(p) == 1 and len(q) == 1:
                continue
            specs.append(WeightSpec(p, q))
    return sorted(set(specs), key=WeightSpec.sort_key)


@dataclass(frozen=True)
class CanonicalEquation:
    """A reduced equality with its element assignment.

    d_elements[i] carries weight spec.d[i]; likewise for the e side.
    """

    spec: WeightSpec
    d_elements: tuple[int, ...]
    e_elements: tuple[int, ...]
    swapped: bool = False

    def participants(self) -> tuple[int, ...]:
        return self.d_elements + self.e_elements

    def largest(self) -> int:
        return max(self.participants())

    def holds(self) -> bool:
        lhs = sum(w * x for w, x in zip(self.spec.d, self.d_elements))
        rhs = sum(w * x for w, x in zip(self.spec.e, self.e_elements))
        parts = self.participants()
        return lhs == rhs and len(set(parts)) == len(parts)


def canonicalize(ms1, ms2) -> CanonicalEquation | None:
    """Reduce two equal-sum h-multisets by cancelling common terms and
    grouping repeats.

    Returns None when the multisets are equal (no violation); raises on
    unequal sums.  The d side keeps ms1's residue; within each side slots
    are ordered by descending weight, then descending element.
    """
    m1, m2 = Counter(ms1), Counter(ms2)
    if sum(ms1) != sum(ms2):
        raise ValueError("multisets must have equal sums")
    if len(ms1) != len(ms2):
        raise ValueError("multisets must have equal size")
    left: list[tuple[int, int]] = []
    right: list[tuple[int, int]] = []
    for v in sorted(set(m1) | set(m2)):
        net = m1[v] - m2[v]
        if net > 0:
            left.append((net, v))
        elif net < 0:
            right.append((-net, v))
    if not left:
        return None
    left.sort(key=lambda wx: (-wx[0], -wx[1]))
    right.sort(key=lambda wx: (-wx[0], -wx[1]))
    spec = WeightSpec(tuple(w for w, _ in left), tuple(w for w, _ in right))
    return CanonicalEquation(
        spec,
        tuple(x for _, x in left),
        tuple(x for _, x in right),
    )


def normalize_largest(eq: CanonicalEquation) -> CanonicalEquation:
    """Move the side holding the overall largest element to d, largest first.

    Swapping sides is harmless since the weighted sums are equal; the
    `swapped` flag records that the input had the largest element on e.
    """
    big = eq.largest()
    swapped = eq.swapped
    d_pairs = list(zip(eq.spec.d, eq.d_elements))
    e_pairs = list(zip(eq.spec.e, eq.e_elements))
    if big in eq.e_elements:
        d_pairs, e_pairs = e_pairs, d_pairs
        swapped = not swapped
    head = next(p for p in d_pairs if p[1] == big)
    rest = sorted((p for p in d_pairs if p[1] != big), key=lambda wx: (-wx[0], -wx[1]))
    d_pairs = [head] + rest
    e_pairs = sorted(e_pairs, key=lambda wx: (-wx[0], -wx[1]))
    return CanonicalEquation(
        WeightSpec(tuple(w for w, _ in d_pairs), tuple(w for w, _ in e_pairs)),
        tuple(x for _, x in d_pairs),
        tuple(x for _, x in e_pairs),
        swapped,
    )


@dataclass(frozen=True)
class CollisionRecord:
    """One witnessed equality: its kind, weights, element assignment, and
    the largest participant (the element the deletion set removes)."""

    kind: str
    spec: WeightSpec
    elements: tuple[int, ...]
    largest: int

    def d_elements(self) -> tuple[int, ...]:
        return self.elements[: len(self.spec.d)]

    def e_elements(self) -> tuple[int, ...]:
        return self.elements[len(self.spec.d) :]

    def holds(self) -> bool:
        eq = CanonicalEquation(self.spec, self.d_elements(), self.e_elements())
        return eq.holds() and self.largest == max(self.elements)

    def sort_key(self) -> tuple:
        return (self.largest, self.kind, self.spec.d, self.spec.e, self.elements)

    def to_json_dict(self) -> dict:
        return {
            "kind": self.kind,
            "d": list(self.spec.d),
            "e": list(self.spec.e),
            "elements": list(self.elements),
            "largest": self.largest,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "CollisionRecord":
        return cls(
            d["kind"],
            WeightSpec(tuple(d["d"]), tuple(d["e"])),
            tuple(d["elements"]),
            d["largest"],
        )


def records_to_jsonl(records) -> str:
    return "".join(json.dumps(r.to_json_dict(), sort_keys=True) + "\n" for r in records)


def records_from_jsonl(text: str) -> list[CollisionRecord]:
    return [CollisionRecord.from_json_dict(json.loads(line)) for line in text.splitlines() if line.strip()]


def _side_assignments(values: list[int], weights: tuple[int, ...]):
    """Canonical element assignments for one side of an equation.

    Weights are grouped into runs of equal value; elements within a run are
    chosen as increasing combinations (one canonical order per multiset of
    slots), and cross-run clashes are filtered so the side is pairwise
    distinct.  Yields (weighted_sum, elements_in_slot_order).
    """
    runs: list[tuple[int, int]] = []
    for w in weights:
        if runs and runs[-1][0] == w:
            runs[-1] = (w, runs[-1][1] + 1)
        else:
            runs.append((w, 1))

    def rec(run_idx: int, used: set[int], acc_sum: int, acc_elems: tuple[int, ...]):
        if run_idx == len(runs):
            yield acc_sum, acc_elems
            return
        w, cnt = runs[run_idx]
        for combo in combinations(values, cnt):
            if used & set(combo):
                continue
            yield from rec(
                run_idx + 1,
                used | set(combo),
                acc_sum + w * sum(combo),
                acc_elems + combo,
            )

    yield from rec(0, set(), 0, ())


def _orderings_multiplier(weights: tuple[int, ...]) -> int:
    """Number of ordered tuples per canonical assignment (equal-weight runs permute)."""
    import math as _m

    mult = 1
    run = 1
    for i in range(1, len(weights) + 1):
        if i < len(weights) and weights[i] == weights[i - 1]:
            run += 1
        else:
            mult *= _m.factorial(run)
            run = 1
    return mult


def enumerate_collisions(b, h: int) -> list[CollisionRecord]:
    """Every (largest element, canonical equality) pair witnessed inside b.

    Covers the distinct-2h branch (two disjoint h-subsets with equal sums)
    and every reduced weighted branch; records are deduplicated by
    (largest, kind, weights, element set) and returned in canonical order.
    """
    arr = validate_elements(b)
    values = [int(x) for x in arr]
    seen: dict[tuple, CollisionRecord] = {}

    def add(eq: CanonicalEquation, kind: str) -> None:
        norm = normalize_largest(eq)
        key = (
            norm.largest(),
            kind,
            norm.spec.d,
            norm.spec.e,
            tuple(sorted(norm.participants())),
        )
        if key not in seen:
            rec = CollisionRecord(kind, norm.spec, norm.participants(), norm.largest())
            if not rec.holds():
                raise AssertionError(f"unsound collision record: {rec}")
            seen[key] = rec

    # distinct-2h branch: hash-join of h-subset sums, disjoint pairs only
    if len(values) >= 2 * h:
        buckets: dict[int, list[tuple[int, ...]]] = defaultdict(list)
        for combo in combinations(values, h):
            buckets[sum(combo)].append(combo)
        spec = WeightSpec.distinct_2h(h)
        for total, combos in buckets.items():
            if len(combos) < 2:
                continue
            for c1, c2 in combinations(combos, 2):
                if set(c1) & set(c2):
                    continue
                add(CanonicalEquation(spec, tuple(reversed(c1)), tuple(reversed(c2))), DISTINCT_2H)
        log.debug("distinct-2h join done: %d records so far", len(seen))

    # weighted branches: meet-in-the-middle on weighted partial sums
    for spec in reduced_weight_pairs(h):
        if len(values) < max(len(spec.d), len(spec.e)):
            continue
        d_buckets: dict[int, list[tuple[int, ...]]] = defaultdict(list)
        for s, elems in _side_assignments(values, spec.d):
            d_buckets[s].append(elems)
        if spec.d == spec.e:
            for s, d_list in d_buckets.items():
                for de, ee in combinations(d_list, 2):
                    if set(de) & set(ee):
                        continue
                    add(CanonicalEquation(spec, de, ee), WEIGHTED)
        else:
            for s, ee in _side_assignments(values, spec.e):
                for de in d_buckets.get(s, ()):
                    if set(de) & set(ee):
                        continue
                    add(CanonicalEquation(spec, de, ee), WEIGHTED)
        log.debug("spec %s|%s done: %d records so far", spec.d, spec.e, len(seen))

    return sorted(seen.values(), key=CollisionRecord.sort_key)


def deletion_set(b, h: int, *, records=None) -> frozenset[int]:
    """Largest participants of every collision equality inside b."""
    if records is None:
        records = enumerate_collisions(b, h)
    return frozenset(r.largest for r in records)


def construct_a(b, h: int, *, records=None) -> tuple[int, ...]:
    """Remove the deletion set: the surviving subset is B_h[1] by construction."""
    arr = validate_elements(b)
    bad = deletion_set(arr, h, records=records)
    return tuple(int(x) for x in arr if int(x) not in bad)
