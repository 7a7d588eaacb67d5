"""Exact representation-count tables over finite integer sets.

Three counting semantics, all exact:

* multiset(h)  -- number of nondecreasing h-tuples from A summing to n.
* strict(k)    -- number of strictly increasing k-tuples from A summing to n
                  with largest part < n.  For k = 1 the largest-part
                  constraint empties every count (n < n is false), so the
                  table is identically zero; this edge is deliberate.
* weighted(f)  -- number of ordered tuples of pairwise-distinct elements
                  (x_1, ..., x_t) of D with f_1 x_1 + ... + f_t x_t = n.

Every operation has two independent backends: a dense dynamic program (the
production path) and a naive enumeration (the oracle path), cross-validated
in the test suite.  Counts use checked unsigned arithmetic: an a-priori
combinatorial bound on every possible entry is compared against the dtype
maximum before computing, so wraparound is impossible rather than detected.
"""

from __future__ import annotations

from dataclasses import dataclass
import math
import struct

import numpy as np

_MAGIC = b"BHREPR01"
_KIND_CODES = {"multiset": 1, "strict": 2, "weighted": 3}
_KIND_NAMES = {v: k for k, v in _KIND_CODES.items()}

# |D|^t threshold below which the weighted table is built by direct
# vectorized enumeration instead of the partition dynamic program.
_ENUM_LIMIT = 20_000_000


def validate_elements(a) -> np.ndarray:
    """Canonicalize a set of positive integers to a sorted distinct array."""
    arr = np.asarray(sorted(set(int(x) for x in a)), dtype=np.int64)
    if arr.size and arr[0] < 1:
        raise ValueError("elements must be positive integers")
    return arr


@dataclass(frozen=True)
class ReprTable:
    """Dense table of exact representation counts indexed by target value.

    counts[n] is the exact count of representations of n under the tagged
    semantics; the array is frozen after construction.
    """

    counts: np.ndarray
    semantics: tuple
    source_size: int

    def __post_init__(self) -> None:
        self.counts.flags.writeable = False

    @property
    def max_n(self) -> int:
        return len(self.counts) - 1

    def to_csv(self, path) -> None:
        with _open_write(path, "w") as fh:
            fh.write("n,count\n")
            for n, c in enumerate(self.counts):
                fh.write(f"{n},{int(c)}\n")

    def to_binary(self, path) -> None:
        """Compact dump: magic, semantics tag, max_n, little-endian u64 counts."""
        kind = self.semantics[0]
        with _open_write(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<B", _KIND_CODES[kind]))
            if kind == "weighted":
                weights = self.semantics[1]
                fh.write(struct.pack("<I", len(weights)))
                fh.write(struct.pack(f"<{len(weights)}I", *weights))
            else:
                fh.write(struct.pack("<I", self.semantics[1]))
            fh.write(struct.pack("<QQ", self.max_n, self.source_size))
            fh.write(self.counts.astype("<u8").tobytes())

    @classmethod
    def from_binary(cls, path) -> "ReprTable":
        with _open_read(path) as fh:
            if fh.read(8) != _MAGIC:
                raise ValueError("bad magic in table dump")
            code = struct.unpack("<B", fh.read(1))[0]
            kind = _KIND_NAMES[code]
            if kind == "weighted":
                t = struct.unpack("<I", fh.read(4))[0]
                weights = struct.unpack(f"<{t}I", fh.read(4 * t))
                semantics = ("weighted", tuple(int(w) for w in weights))
            else:
                semantics = (kind, struct.unpack("<I", fh.read(4))[0])
            max_n, source_size = struct.unpack("<QQ", fh.read(16))
            counts = np.frombuffer(fh.read(8 * (max_n + 1)), dtype="<u8").astype(np.uint64)
            return cls(counts, semantics, source_size)


def _open_write(path, mode):
    if hasattr(path, "write"):
        return _NullCtx(path)
    return open(path, mode)


def _open_read(path):
    if hasattr(path, "read"):
        return _NullCtx(path)
    return open(path, "rb")


class _NullCtx:
    def __init__(self, obj):
        self.obj = obj

    def __enter__(self):
        return self.obj

    def __exit__(self, *exc):
        return False


def _check_bound(bound: int, dtype) -> None:
    """Refuse before computing if any entry could exceed the dtype.

    Every entry of every DP row is at most the total representation count,
    so a bound on the total rules out wraparound entirely.
    """
    limit = int(np.iinfo(dtype).max)
    if bound > limit:
        raise OverflowError(
            f"count bound {bound} exceeds dtype {np.dtype(dtype).name} "
            f"maximum {limit}; use a wider count dtype"
        )


def repr_multiset(a, h: int, max_n: int, *, counts_dtype=np.uint64, backend: str = "dp") -> ReprTable:
    """Table of nondecreasing h-tuple sums: counts[n] = #{a_1 <= ... <= a_h, sum = n}."""
    if h < 1:
        raise ValueError("h must be >= 1")
    if max_n < 0:
        raise ValueError("max_n must be >= 0")
    arr = validate_elements(a)
    arr = arr[arr <= max_n]
    if backend == "naive":
        counts = _naive_multiset(arr, h, max_n, counts_dtype)
    elif backend == "dp":
        counts = _dp_multiset(arr, h, max_n, counts_dtype)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return ReprTable(counts, ("multiset", h), int(arr.size))


def _dp_multiset(arr: np.ndarray, h: int, max_n: int, dtype) -> np.ndarray:
    # Unbounded-multiplicity DP: processing one element at a time, row j
    # reads the already-updated row j-1, which realizes "any number of
    # copies" with nondecreasing (multiset) semantics in O(h |A| max_n).
    if arr.size:
        _check_bound(math.comb(int(arr.size) + h - 1, h), dtype)
    rows = np.zeros((h + 1, max_n + 1), dtype=dtype)
    rows[0, 0] = 1
    width = max_n + 1
    for x in arr.tolist():
        for j in range(1, h + 1):
            rows[j, x:] += rows[j - 1, : width - x]
    return rows[h]


def _naive_multiset(arr: np.ndarray, h: int, max_n: int, dtype) -> np.ndarray:
    counts = np.zeros(max_n + 1, dtype=dtype)
    vals = arr.tolist()

    def rec(start: int, depth: int, total: int) -> None:
        if depth == 0:
            counts[total] += 1
            return
        for i in range(start, len(vals)):
            t = total + vals[i]
            if t > max_n:
                break
            rec(i, depth - 1, t)

    if vals:
        rec(0, h, 0)
    return counts


def repr_strict(a, k: int, max_n: int, *, counts_dtype=np.uint64, backend: str = "dp") -> ReprTable:
    """Table of strictly increasing k-tuple sums with largest part < n.

    For k >= 2 the largest-part constraint is automatic (the other parts are
    positive); for k = 1 it forces every count to zero.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if max_n < 0:
        raise ValueError("max_n must be >= 0")
    arr = validate_elements(a)
    arr = arr[arr <= max_n]
    if k == 1:
        counts = np.zeros(max_n + 1, dtype=counts_dtype)
    elif backend == "naive":
        counts = _naive_strict(arr, k, max_n, counts_dtype)
    elif backend == "dp":
        counts = _dp_strict(arr, k, max_n, counts_dtype)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return ReprTable(counts, ("strict", k), int(arr.size))


def _dp_strict(arr: np.ndarray, k: int, max_n: int, dtype) -> np.ndarray:
    # 0/1 subset-sum DP with exactly k parts; descending row order keeps
    # each element to a single use.
    if arr.size:
        _check_bound(math.comb(int(arr.size), k), dtype)
    rows = np.zeros((k + 1, max_n + 1), dtype=dtype)
    rows[0, 0] = 1
    width = max_n + 1
    for x in arr.tolist():
        for j in range(k, 0, -1):
            rows[j, x:] += rows[j - 1, : width - x]
    return rows[k]


def _naive_strict(arr: np.ndarray, k: int, max_n: int, dtype) -> np.ndarray:
    from itertools import combinations

    counts = np.zeros(max_n + 1, dtype=dtype)
    for combo in combinations(arr.tolist(), k):
        s = sum(combo)
        if s <= max_n:
            counts[s] += 1
    return counts


def repr_weighted(d, f, max_n: int, *, counts_dtype=np.uint64, backend: str = "auto") -> ReprTable:
    """Table of weighted sums over ordered tuples of pairwise-distinct elements.

    counts[n] = #{(x_1, ..., x_t) : x_i in D pairwise distinct,
                  f_1 x_1 + ... + f_t x_t = n}.
    Distinctness applies to the chosen elements, not the weights.
    """
    weights = tuple(int(w) for w in f)
    if not weights or any(w < 1 for w in weights):
        raise ValueError("weights must be a nonempty tuple of positive integers")
    if max_n < 0:
        raise ValueError("max_n must be >= 0")
    arr = validate_elements(d)
    t = len(weights)
    if arr.size:
        _check_bound(math.perm(int(arr.size), t), counts_dtype)
    if backend == "auto":
        backend = "enum" if (arr.size**t <= _ENUM_LIMIT and t <= 3) else "partition"
    if backend == "naive":
        counts = _naive_weighted(arr, weights, max_n, counts_dtype)
    elif backend == "enum":
        counts = _enum_weighted(arr, weights, max_n, counts_dtype)
    elif backend == "partition":
        counts = _partition_weighted(arr, weights, max_n, counts_dtype)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    return ReprTable(counts, ("weighted", weights), int(arr.size))


def _naive_weighted(arr: np.ndarray, weights, max_n: int, dtype) -> np.ndarray:
    from itertools import permutations

    counts = np.zeros(max_n + 1, dtype=dtype)
    for tup in permutations(arr.tolist(), len(weights)):
        s = sum(w * x for w, x in zip(weights, tup))
        if s <= max_n:
            counts[s] += 1
    return counts


def _enum_weighted(arr: np.ndarray, weights, max_n: int, dtype) -> np.ndarray:
    """Direct vectorized enumeration with distinctness masks (t <= 3)."""
    t = len(weights)
    if arr.size < t:
        return np.zeros(max_n + 1, dtype=dtype)
    vals = arr.astype(np.int64)
    if t == 1:
        sums = weights[0] * vals
        mask = sums <= max_n
        acc = np.bincount(sums[mask], minlength=max_n + 1)
    elif t == 2:
        s = weights[0] * vals[:, None] + weights[1] * vals[None, :]
        mask = ~np.eye(len(vals), dtype=bool) & (s <= max_n)
        acc = np.bincount(s[mask], minlength=max_n + 1)
    else:
        acc = np.zeros(max_n + 1, dtype=np.int64)
        pair = weights[0] * vals[:, None] + weights[1] * vals[None, :]
        pair_ok = ~np.eye(len(vals), dtype=bool)
        for kk, z in enumerate(vals.tolist()):
            s = pair + weights[2] * z
            mask = pair_ok & (s <= max_n)
            mask[kk, :] = False
            mask[:, kk] = False
            acc += np.bincount(s[mask], minlength=max_n + 1)
    return acc.astype(dtype)


def _set_partitions(items: list[int]):
    """All set partitions of a small list, as lists of blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def _partition_weighted(arr: np.ndarray, weights, max_n: int, dtype) -> np.ndarray:
    """Moebius inversion over set partitions of the positions.

    Tuples that are merely equal-on-blocks are convolutions of collapsed
    weight tables; alternating block factorials invert to the pairwise-
    distinct count.
    """
    t = len(weights)
    width = max_n + 1
    total = np.zeros(width, dtype=np.int64)
    vals = arr.tolist()
    for part in _set_partitions(list(range(t))):
        mu = 1
        for block in part:
            mu *= (-1) ** (len(block) - 1) * math.factorial(len(block) - 1)
        cur = np.zeros(width, dtype=np.int64)
        cur[0] = 1
        for block in part:
            g = sum(weights[i] for i in block)
            nxt = np.zeros(width, dtype=np.int64)
            for x in vals:
                shift = g * x
                if shift <= max_n:
                    nxt[shift:] += cur[: width - shift]
            cur = nxt
        total += mu * cur
    if total.min() < 0:
        raise AssertionError("partition inversion produced a negative count")
    return total.astype(dtype)


def pairsum_histogram(a, h: int, *, counts_dtype=np.uint64) -> ReprTable:
    """Dense histogram of all h-fold nondecreasing sums of a finite set."""
    arr = validate_elements(a)
    top = int(arr[-1]) * h if arr.size else 0
    return repr_multiset(arr, h, top, counts_dtype=counts_dtype)


def multiset_sums(a, h: int, *, limit: int = 8_000_000) -> np.ndarray:
    """All h-fold nondecreasing sums as a flat array (one entry per multiset).

    Used as a fast exhaustive path when C(|A|+h-1, h) is small; refuses
    beyond `limit` outputs.
    """
    arr = validate_elements(a)
    if arr.size == 0:
        return np.zeros(0, dtype=np.int64)
    total = math.comb(int(arr.size) + h - 1, h)
    if total > limit:
        raise ValueError(f"{total} multisets exceeds enumeration limit {limit}")
    vals = arr.astype(np.int64)
    # level holds (min index allowed next, accumulated sum) pairs
    idx = np.zeros(1, dtype=np.int64)
    sums = np.zeros(1, dtype=np.int64)
    for _ in range(h):
        parts_i = []
        parts_s = []
        for j in range(len(vals)):
            sel = idx <= j
            parts_i.append(np.full(int(sel.sum()), j, dtype=np.int64))
            parts_s.append(sums[sel] + vals[j])
        idx = np.concatenate(parts_i)
        sums = np.concatenate(parts_s)
    return sums
