import io
import math

import numpy as np
import pytest

from bhbasis.counting import (
    ReprTable,
    multiset_sums,
    pairsum_histogram,
    repr_multiset,
    repr_strict,
    repr_weighted,
)
from bhbasis.sampling import ModelParams, inclusion_probability, sample_set

from tests.oracles import (
    oracle_multiset,
    oracle_strict,
    oracle_strict_tuple_expectation,
    oracle_weighted,
)


def test_multiset_examples():
    t = repr_multiset([1, 2, 3], 2, 6)
    assert t.counts.tolist() == [0, 0, 1, 1, 2, 1, 1]
    assert repr_multiset([], 3, 10).counts.tolist() == [0] * 11
    assert t.semantics == ("multiset", 2)


def test_multiset_random_vs_naive():
    rng = np.random.default_rng(2024)
    for _ in range(60):
        size = rng.integers(0, 30)
        a = rng.choice(np.arange(1, 201), size=size, replace=False)
        h = int(rng.integers(1, 4))
        max_n = int(rng.integers(10, 620))
        dp = repr_multiset(a, h, max_n).counts
        naive = repr_multiset(a, h, max_n, backend="naive").counts
        assert np.array_equal(dp, naive)
        assert np.array_equal(dp, oracle_multiset(a, h, max_n))


def test_strict_examples():
    t = repr_strict([1, 2, 3, 4], 2, 7)
    assert t.counts[5] == 2
    assert t.counts[7] == 1
    assert repr_strict([1, 2], 2, 3).counts[3] == 1
    # k = 1 forces largest part < target, so every count vanishes
    assert repr_strict([4, 9, 11], 1, 30).counts.tolist() == [0] * 31


def test_strict_random_vs_naive():
    rng = np.random.default_rng(7)
    for _ in range(60):
        size = rng.integers(0, 28)
        a = rng.choice(np.arange(1, 151), size=size, replace=False)
        k = int(rng.integers(1, 5))
        max_n = int(rng.integers(10, 450))
        dp = repr_strict(a, k, max_n).counts
        assert np.array_equal(dp, repr_strict(a, k, max_n, backend="naive").counts)
        assert np.array_equal(dp, oracle_strict(a, k, max_n))


def test_weighted_examples():
    t = repr_weighted([1, 2, 3], (1, 2), 8)
    assert t.counts[5] == 2
    assert t.counts.sum() == 6
    single = repr_weighted([5], (3,), 20)
    assert single.counts[15] == 1 and single.counts.sum() == 1


def test_weighted_random_vs_naive_all_backends():
    rng = np.random.default_rng(99)
    for _ in range(40):
        size = rng.integers(0, 20)
        d = rng.choice(np.arange(1, 101), size=size, replace=False)
        f = tuple(int(x) for x in rng.integers(1, 4, size=rng.integers(1, 4)))
        max_n = int(rng.integers(10, 700))
        want = oracle_weighted(d, f, max_n)
        for backend in ("naive", "enum", "partition"):
            got = repr_weighted(d, f, max_n, backend=backend).counts
            assert np.array_equal(got, want), (d.tolist(), f, backend)


def test_weighted_wide_tuple_partition_backend():
    d = [1, 3, 4, 9, 11]
    f = (1, 1, 2, 1)
    got = repr_weighted(d, f, 60).counts
    assert np.array_equal(got, oracle_weighted(d, f, 60))


def test_pairsum_histogram():
    t = pairsum_histogram([1, 2], 1)
    assert t.counts.tolist() == [0, 1, 1]
    t = pairsum_histogram([1, 2, 3], 2)
    assert {n: int(c) for n, c in enumerate(t.counts) if c} == {2: 1, 3: 1, 4: 2, 5: 1, 6: 1}
    assert int(t.counts.sum()) == math.comb(3 + 2 - 1, 2)


def test_mass_conservation_and_monotonicity():
    rng = np.random.default_rng(5)
    for _ in range(25):
        a = sorted(rng.choice(np.arange(1, 80), size=rng.integers(2, 14), replace=False).tolist())
        h = int(rng.integers(1, 4))
        t = repr_multiset(a, h, h * max(a))
        assert int(t.counts.sum()) == math.comb(len(a) + h - 1, h)
        extra = int(rng.integers(80, 120))
        wider = repr_multiset(a + [extra], h, h * max(a))
        assert np.all(wider.counts >= t.counts)


def test_overflow_is_loud():
    with pytest.raises(OverflowError):
        repr_multiset(range(1, 40), 3, 200, counts_dtype=np.uint8)
    # uint32 is fine when the combinatorial bound fits
    t = repr_multiset(range(1, 40), 3, 200, counts_dtype=np.uint32)
    assert t.counts.dtype == np.uint32


def test_validation_errors():
    with pytest.raises(ValueError):
        repr_multiset([0, 1], 2, 10)
    with pytest.raises(ValueError):
        repr_multiset([1, 2], 0, 10)
    with pytest.raises(ValueError):
        repr_weighted([1, 2], (), 10)
    with pytest.raises(ValueError):
        repr_weighted([1, 2], (1, 0), 10)


def test_binary_and_csv_round_trip(tmp_path):
    t = repr_weighted([1, 2, 9], (1, 1, 2), 50)
    path = tmp_path / "table.bin"
    t.to_binary(str(path))
    back = ReprTable.from_binary(str(path))
    assert back.semantics == t.semantics
    assert back.source_size == t.source_size
    assert np.array_equal(back.counts, t.counts)

    buf = io.StringIO()
    t.to_csv(buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "n,count"
    assert len(lines) == t.max_n + 2


def test_multiset_sums_enumeration():
    a = [2, 3, 10]
    sums = sorted(multiset_sums(a, 2).tolist())
    assert sums == [4, 5, 6, 12, 13, 20]
    with pytest.raises(ValueError):
        multiset_sums(range(1, 2000), 4, limit=1000)


def test_tables_are_immutable():
    t = repr_multiset([1, 2], 2, 4)
    with pytest.raises(ValueError):
        t.counts[0] = 5


def test_strict_mean_matches_model():
    """Ties counting to the random model: the empirical mean of the strict
    k-count equals the sum over increasing k-tuples of the product of
    inclusion probabilities, within four standard errors."""
    h, n_win, m = 2, 200, 400
    params0 = ModelParams(h, n_win, 0)
    incl = lambda x: inclusion_probability(x, params0)
    targets = [(2, 60), (2, 200), (3, 120)]
    samples = {t: [] for t in targets}
    for seed in range(m):
        s = sample_set(ModelParams(h, n_win, seed))
        for k, n in targets:
            table = repr_strict(s.elements, k, n)
            samples[(k, n)].append(int(table.counts[n]))
    for (k, n), vals in samples.items():
        want = oracle_strict_tuple_expectation(n, k, incl)
        mean = float(np.mean(vals))
        se = float(np.std(vals, ddof=1)) / m**0.5
        assert abs(mean - want) <= 4 * max(se, 1e-9), (k, n, mean, want, se)
