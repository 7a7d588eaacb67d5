import numpy as np
import pytest

from bhbasis.collisions import (
    DISTINCT_2H,
    WEIGHTED,
    CollisionRecord,
    WeightSpec,
    canonicalize,
    construct_a,
    deletion_set,
    enumerate_collisions,
    normalize_largest,
    one_sided_weights,
    records_from_jsonl,
    records_to_jsonl,
    reduced_weight_pairs,
    validate_one_sided,
)
from bhbasis.verify import is_bhg

from tests.oracles import oracle_collision_signatures, oracle_deletion_set


def _pairs(eq):
    return {
        "d": sorted(zip(eq.spec.d, eq.d_elements)),
        "e": sorted(zip(eq.spec.e, eq.e_elements)),
    }


def test_canonicalize_weighted_reduction():
    eq = canonicalize((1, 5, 5), (2, 2, 7))
    assert eq is not None
    assert _pairs(eq) == {"d": [(1, 1), (2, 5)], "e": [(1, 7), (2, 2)]}
    assert eq.holds()


def test_canonicalize_cancels_common_terms():
    eq = canonicalize((1, 2, 9), (2, 3, 7))
    assert _pairs(eq) == {"d": [(1, 1), (1, 9)], "e": [(1, 3), (1, 7)]}
    assert eq.spec.d == (1, 1) and eq.spec.e == (1, 1)


def test_canonicalize_identical_is_no_violation():
    assert canonicalize((3, 4), (3, 4)) is None
    assert canonicalize((2, 2, 5), (2, 5, 2)) is None


def test_canonicalize_contract_errors():
    with pytest.raises(ValueError):
        canonicalize((1, 2), (1, 3))
    with pytest.raises(ValueError):
        canonicalize((1, 2, 3), (6,))


def test_normalize_largest_swaps_sides():
    eq = canonicalize((1, 5, 5), (2, 2, 7))
    norm = normalize_largest(eq)
    assert norm.d_elements[0] == 7
    assert norm.swapped is True
    assert norm.holds()
    # already-largest-side input is not swapped
    eq2 = canonicalize((2, 9, 9), (5, 7, 8))
    norm2 = normalize_largest(eq2)
    assert norm2.d_elements[0] == 9 and norm2.swapped is False


def test_canonicalize_random_pairs_properties():
    # random equal-sum multiset pairs: the reduction must be a true
    # equality over pairwise-distinct elements, obey the reduced-form
    # bounds, and agree with the independent Counter-based reducer
    from tests.oracles import reduce_multiset_pair

    rng = np.random.default_rng(42)
    tried = 0
    while tried < 300:
        h = int(rng.integers(2, 5))
        ms1 = tuple(sorted(rng.integers(1, 40, size=h).tolist()))
        ms2 = tuple(sorted(rng.integers(1, 40, size=h).tolist()))
        if sum(ms1) != sum(ms2):
            continue
        tried += 1
        eq = canonicalize(ms1, ms2)
        want = reduce_multiset_pair(ms1, ms2)
        if eq is None:
            assert want is None
            continue
        assert eq.holds()
        assert sum(eq.spec.d) == sum(eq.spec.e) <= h
        parts = eq.participants()
        assert len(set(parts)) == len(parts)
        if eq.spec.is_distinct_form(h):
            assert len(parts) == 2 * h
        else:
            assert eq.spec.arity <= 2 * h - 1
        # same (weight, element) content as the oracle reducer
        got_sides = {
            frozenset(zip(eq.spec.d, eq.d_elements)),
            frozenset(zip(eq.spec.e, eq.e_elements)),
        }
        want_sides = {frozenset(want[0]), frozenset(want[1])}
        assert got_sides == want_sides
        # largest-normalization is idempotent and keeps the equality true
        norm = normalize_largest(eq)
        assert norm.holds() and norm.d_elements[0] == max(parts)
        assert normalize_largest(norm) == norm


def test_enumerate_collisions_small_example():
    recs = enumerate_collisions([1, 2, 3, 4], 2)
    as_dicts = [r.to_json_dict() for r in recs]
    assert as_dicts == [
        {"kind": WEIGHTED, "d": [1, 1], "e": [2], "elements": [3, 1, 2], "largest": 3},
        {"kind": DISTINCT_2H, "d": [1, 1], "e": [1, 1], "elements": [4, 1, 3, 2], "largest": 4},
        {"kind": WEIGHTED, "d": [1, 1], "e": [2], "elements": [4, 2, 3], "largest": 4},
    ]
    assert all(r.holds() for r in recs)
    assert deletion_set([1, 2, 3, 4], 2) == {3, 4}
    assert construct_a([1, 2, 3, 4], 2) == (1, 2)


def test_enumerate_collisions_clean_and_tiny_sets():
    assert enumerate_collisions([1, 2, 5, 11], 2) == []
    assert enumerate_collisions([1, 2], 2) == []
    assert construct_a([], 2) == ()


def test_records_sorted_and_sound():
    rng = np.random.default_rng(11)
    for _ in range(40):
        b = sorted(rng.choice(np.arange(1, 60), size=rng.integers(4, 16), replace=False).tolist())
        for h in (2, 3):
            recs = enumerate_collisions(b, h)
            assert recs == sorted(recs, key=CollisionRecord.sort_key)
            for r in recs:
                assert r.holds()
                assert r.largest == max(r.elements)
                others = [x for x in r.elements if x != r.largest]
                assert all(x < r.largest for x in others)
                if r.kind == DISTINCT_2H:
                    assert len(r.elements) == 2 * h
                    assert sum(r.d_elements()) == sum(r.e_elements())
                else:
                    assert r.spec.is_reduced_form(h)


def test_matches_multiset_pair_oracle():
    # Records are deduplicated by (largest, weights, element set); the same
    # element set can satisfy two different assignments of one spec, so the
    # comparison is at the dedup-key level, plus deletion-set equality.
    rng = np.random.default_rng(21)
    for trial in range(60):
        h = 2 if trial % 2 == 0 else 3
        top = 50 if h == 2 else 40
        size = rng.integers(3, 20 if h == 2 else 14)
        b = sorted(rng.choice(np.arange(1, top), size=size, replace=False).tolist())
        assert deletion_set(b, h) == oracle_deletion_set(b, h), (b, h)
        got_keys = set()
        for r in enumerate_collisions(b, h):
            got_keys.add(
                (r.largest, tuple(sorted(r.spec.d)), tuple(sorted(r.spec.e)), tuple(sorted(r.elements)))
            )
        want_keys = set()
        for big, left, right in oracle_collision_signatures(b, h):
            elems = tuple(sorted([x for _, x in left] + [x for _, x in right]))
            want_keys.add(
                (big, tuple(sorted(w for w, _ in left)), tuple(sorted(w for w, _ in right)), elems)
            )
        assert got_keys == want_keys, (b, h)


def test_deletion_windowing_consistency():
    rng = np.random.default_rng(3)
    for _ in range(20):
        b = sorted(rng.choice(np.arange(1, 120), size=18, replace=False).tolist())
        h = 2
        full = enumerate_collisions(b, h)
        cut = 60
        windowed = deletion_set([x for x in b if x <= cut], h)
        filtered = {r.largest for r in full if r.largest <= cut}
        assert windowed == filtered


def test_cleaned_set_is_always_collision_free():
    """Finite-scale headline property: removing the deletion set restores
    the at-most-one-representation property, with no exceptions."""
    rng = np.random.default_rng(314)
    for trial in range(300):
        h = (2, 3, 2, 3, 4)[trial % 5]
        top = rng.integers(10, 80)
        size = rng.integers(0, min(16 if h < 4 else 11, top - 1))
        b = sorted(rng.choice(np.arange(1, top), size=size, replace=False).tolist())
        a = construct_a(b, h)
        verdict = is_bhg(a, h, 1)
        assert verdict.ok, (b, h, a, verdict)


def test_matches_oracle_order_four():
    rng = np.random.default_rng(8888)
    for _ in range(10):
        b = sorted(rng.choice(np.arange(1, 30), size=10, replace=False).tolist())
        assert deletion_set(b, 4) == oracle_deletion_set(b, 4)


def test_spec_generators():
    assert reduced_weight_pairs(2) == [WeightSpec((2,), (1, 1))]
    pairs3 = reduced_weight_pairs(3)
    assert WeightSpec((2,), (1, 1)) in pairs3
    assert WeightSpec((1, 1), (1, 1)) in pairs3
    assert WeightSpec((2, 1), (2, 1)) in pairs3
    assert WeightSpec((2, 1), (1, 1, 1)) in pairs3
    assert all(s.is_reduced_form(3) for s in pairs3)
    # the all-distinct form is not part of the reduced family
    assert WeightSpec((1, 1, 1), (1, 1, 1)) not in pairs3

    fs = one_sided_weights(2)
    assert (1, 1, 1) in fs and (2, 1, 1) in fs
    assert all(sum(f) <= 4 and len(f) <= 3 for f in fs)
    assert (1, 1, 1, 1) not in fs


def test_one_sided_validation():
    assert validate_one_sided((2, 1), 2) == (2, 1)
    with pytest.raises(ValueError):
        validate_one_sided((1, 1, 1, 1), 2)
    with pytest.raises(ValueError):
        validate_one_sided((5,), 2)
    with pytest.raises(ValueError):
        validate_one_sided((), 2)


def test_jsonl_round_trip():
    recs = enumerate_collisions([1, 2, 3, 4, 7, 9], 2)
    text = records_to_jsonl(recs)
    assert records_from_jsonl(text) == recs
