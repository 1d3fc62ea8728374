"""Vectorized enumeration and orbit counting over rank tables of S_d.

Permutations of degree d <= 6 are replaced by their rank in the
lexicographic list of S_d, so a system becomes a row of small integers and a
whole batch of systems is a 2-D array.  Products, inverses and conjugates are
table lookups, and the generic move formulas of :mod:`hurwitz.braid` run on
columns unchanged.  A row's code packs its ranks in base d!, most significant
column first, which makes integer order agree with the byte order of the
serialized system.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .braid import BraidGenerator, move_state
from .errors import GuardExceeded
from .permutation import Partition, Permutation

ENGINE_MAX_DEGREE = 6
CHUNK_ROWS = 1 << 18


class PermTable:
    """Multiplication, inversion and conjugation tables for S_d."""

    def __init__(self, d: int):
        if not 1 <= d <= ENGINE_MAX_DEGREE:
            raise ValueError(f"rank tables support 1 <= d <= {ENGINE_MAX_DEGREE}")
        self.d = d
        perms = np.array(list(itertools.permutations(range(d))), dtype=np.int64).reshape(-1, d)
        self.size = len(perms)
        self.images = perms
        self._enc = d ** np.arange(d - 1, -1, -1, dtype=np.int64)
        self._keys = perms @ self._enc  # ascending, since the list is lexicographic
        mul = np.empty((self.size, self.size), dtype=np.int32)
        for a in range(self.size):
            # (a*b)(x) = b(a(x))
            mul[a] = self.rank(perms[:, perms[a]])
        self.MUL = mul
        inv = np.empty_like(perms)
        inv[np.arange(self.size)[:, None], perms] = np.arange(d)
        self.INV = self.rank(inv).astype(np.int32)
        # CONJ[x, s] = s^-1 x s
        self.CONJ = mul[mul[self.INV[None, :], np.arange(self.size)[:, None]], np.arange(self.size)[None, :]]
        cycles = np.array([len(Permutation(p).cycles(include_fixed=True)) for p in perms])
        self.weight = d - cycles
        self.is_transposition = self.weight == 1
        self._types = {}
        tid = np.empty(self.size, dtype=np.int32)
        for r, p in enumerate(perms):
            ct = Permutation(p).cycle_type().parts
            tid[r] = self._types.setdefault(ct, len(self._types))
        self.type_id = tid
        self.one = 0

    def rank(self, images: np.ndarray) -> np.ndarray:
        return np.searchsorted(self._keys, images @ self._enc)

    def rank_of(self, p: Permutation) -> int:
        return int(self.rank(np.array(p.images, dtype=np.int64)))

    def perm(self, r: int) -> Permutation:
        return Permutation(self.images[int(r)].tolist())

    def cycle_type_id(self, parts: Partition | Sequence[int]) -> int:
        parts = tuple(parts.parts if isinstance(parts, Partition) else parts)
        return self._types.get(parts, -1)

    # GroupOps over rank arrays
    def mul(self, a, b):
        return self.MUL[a, b]

    def inv(self, a):
        return self.INV[a]

    def eq(self, a, b):
        return np.equal(a, b)

    def system_from_row(self, row, n: int, g: int):
        from .system import HurwitzSystem

        perms = [self.perm(r) for r in row]
        return HurwitzSystem(self.d, tuple(perms[:n]), tuple(perms[n::2]), tuple(perms[n + 1::2]))

    def row_from_system(self, sys) -> np.ndarray:
        return np.array([self.rank_of(p) for p in sys.entries()], dtype=np.int32)


@lru_cache(maxsize=None)
def get_table(d: int) -> PermTable:
    return PermTable(d)


@dataclass(frozen=True)
class Layout:
    """Column layout and integer coding of systems with fixed (d, n, g)."""

    table: PermTable
    n: int
    g: int

    @property
    def width(self) -> int:
        return self.n + 2 * self.g

    @property
    def weights(self) -> np.ndarray:
        base, k = self.table.size, self.width
        if base ** k >= 2**63:
            raise OverflowError(f"{k} entries of S_{self.table.d} do not fit a 64-bit code")
        return np.array([base ** (k - 1 - c) for c in range(k)], dtype=np.int64)

    def encode(self, rows: np.ndarray) -> np.ndarray:
        return rows.astype(np.int64) @ self.weights

    def decode(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        out = np.empty((len(codes), self.width), dtype=np.int32)
        rest = codes.copy()
        for c in range(self.width - 1, -1, -1):
            rest, out[:, c] = np.divmod(rest, self.table.size)
        return out

    def canonical(self, rows: np.ndarray) -> np.ndarray:
        """Least code over simultaneous conjugation of each row."""
        w = self.weights
        conj = self.table.CONJ
        best = np.full(len(rows), np.iinfo(np.int64).max, dtype=np.int64)
        for s in range(self.table.size):
            np.minimum(best, conj[rows, s].astype(np.int64) @ w, out=best)
        return best

    def apply(self, rows: np.ndarray, word: Sequence[BraidGenerator]) -> np.ndarray:
        """Apply a braid word to every row."""
        n, g = self.n, self.g
        cols = [rows[:, c] for c in range(self.width)]
        t, lam, mu = cols[:n], cols[n::2], cols[n + 1::2]
        for gen in word:
            gen.check(n, g)
            t, lam, mu = move_state(self.table, t, lam, mu, gen)
        out = np.empty_like(rows)
        for c, col in enumerate(_interleave(t, lam, mu)):
            out[:, c] = col
        return out


def _interleave(t, lam, mu):
    out = list(t)
    for a, b in zip(lam, mu):
        out.extend((a, b))
    return out


def _free_space(layout: Layout, flt) -> tuple[list[np.ndarray], int]:
    """Value lists for the free columns t_1..t_{n-1}, lam, mu, and their product size."""
    tab = layout.table
    nonid = np.arange(1, tab.size, dtype=np.int32)
    simple = np.flatnonzero(tab.is_transposition).astype(np.int32) if flt.require_transpositions else nonid
    full = np.arange(tab.size, dtype=np.int32)
    radices = [simple] * (layout.n - 1) + [full] * (2 * layout.g)
    total = 1
    for r in radices:
        total *= len(r)
    return radices, total


def _valid_chunk(layout: Layout, flt, radices, start: int, stop: int) -> np.ndarray:
    tab = layout.table
    idx = np.arange(start, stop, dtype=np.int64)
    free = np.empty((len(idx), len(radices)), dtype=np.int32)
    for c in range(len(radices) - 1, -1, -1):
        idx, digit = np.divmod(idx, len(radices[c]))
        free[:, c] = radices[c][digit]
    n = layout.n
    prefix = np.zeros(len(free), dtype=np.int32)
    for c in range(n - 1):
        prefix = tab.MUL[prefix, free[:, c]]
    u = np.zeros(len(free), dtype=np.int32)
    for k in range(layout.g):
        a, b = free[:, n - 1 + 2 * k], free[:, n + 2 * k]
        u = tab.MUL[u, tab.MUL[tab.MUL[tab.MUL[a, b], tab.INV[a]], tab.INV[b]]]
    last = tab.MUL[tab.INV[prefix], u]
    if flt.special_tail is not None:
        keep = tab.type_id[last] == tab.cycle_type_id(flt.special_tail)
    elif flt.require_transpositions:
        keep = tab.is_transposition[last]
    else:
        keep = last != 0
    rows = np.empty((int(keep.sum()), layout.width), dtype=np.int32)
    rows[:, : n - 1] = free[keep, : n - 1]
    rows[:, n - 1] = last[keep]
    rows[:, n:] = free[keep, n - 1:]
    return rows


def iter_valid_chunks(layout: Layout, flt, jobs: int = 1, chunk: int = CHUNK_ROWS) -> Iterator[np.ndarray]:
    """Valid rows passing the shape part of ``flt``, in enumeration order."""
    radices, total = _free_space(layout, flt)
    if layout.n < 1:
        return
    bounds = [(s, min(s + chunk, total)) for s in range(0, total, chunk)]
    if jobs <= 1:
        for s, e in bounds:
            yield _valid_chunk(layout, flt, radices, s, e)
        return
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(lambda b: _valid_chunk(layout, flt, radices, *b), bounds)


def enumerate_ranks(table: PermTable, n: int, g: int, flt) -> Iterator[np.ndarray]:
    layout = Layout(table, n, g)
    for rows in iter_valid_chunks(layout, flt):
        yield from rows


@dataclass
class ComponentTable:
    """Orbit partition of a state set: one entry per state, labels dense from 0."""

    layout: Layout
    mode: str
    codes: np.ndarray  # sorted state codes (classes: canonical codes)
    weights: np.ndarray  # systems per state
    labels: np.ndarray

    @property
    def count(self) -> int:
        return int(self.labels.max()) + 1 if len(self.labels) else 0

    def component_of(self, code: int) -> int:
        pos = int(np.searchsorted(self.codes, code))
        if pos >= len(self.codes) or self.codes[pos] != code:
            return -1
        return int(self.labels[pos])

    def summary(self) -> list[tuple[int, int, int]]:
        """(min code, number of states, number of systems) per component label."""
        k = self.count
        sizes = np.bincount(self.labels, minlength=k)
        systems = np.bincount(self.labels, weights=self.weights, minlength=k).astype(np.int64)
        first = np.full(k, -1, dtype=np.int64)
        # codes are sorted, so the first occurrence of a label is its minimum
        order = np.unique(self.labels, return_index=True)[1]
        first[self.labels[order]] = self.codes[order]
        return [(int(first[c]), int(sizes[c]), int(systems[c])) for c in range(k)]


def collect_states(layout: Layout, flt, mode: str, jobs: int = 1, guard: int | None = None):
    """Sorted state codes and multiplicities for the filtered set."""
    parts, counts = [], []
    total = 0
    for rows in iter_valid_chunks(layout, flt, jobs=jobs):
        if not len(rows):
            continue
        codes = layout.canonical(rows) if mode == "classes" else layout.encode(rows)
        u, c = np.unique(codes, return_counts=True)
        parts.append(u)
        counts.append(c)
        total += len(u)
        if guard is not None and total > guard * 4:
            raise GuardExceeded(f"state guard {guard} exceeded")
    if not parts:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    allc = np.concatenate(parts)
    allw = np.concatenate(counts)
    codes, inv = np.unique(allc, return_inverse=True)
    weights = np.bincount(inv, weights=allw, minlength=len(codes)).astype(np.int64)
    if guard is not None and len(codes) > guard:
        raise GuardExceeded(f"{len(codes)} states exceed the guard {guard}")
    return codes, weights


def orbit_partition(layout: Layout, flt, words: Sequence[Sequence[BraidGenerator]], mode: str,
                    jobs: int = 1, guard: int | None = None, chunk: int = CHUNK_ROWS) -> ComponentTable:
    """Partition the filtered set into orbits of the group generated by ``words``.

    Each word and its inverse give the same undirected edges, so only the
    listed words are applied.  In classes mode a word is applied to one
    representative per class, which is enough because moves commute with
    simultaneous conjugation.
    """
    codes, weights = collect_states(layout, flt, mode, jobs=jobs, guard=guard)
    m = len(codes)
    if m == 0:
        return ComponentTable(layout, mode, codes, weights, np.empty(0, dtype=np.int64))
    src, dst = [], []

    def edges(start: int) -> tuple[np.ndarray, np.ndarray]:
        sl = np.arange(start, min(start + chunk, m))
        rows = layout.decode(codes[sl])
        s_out, d_out = [], []
        for word in words:
            moved = layout.apply(rows, word)
            mc = layout.canonical(moved) if mode == "classes" else layout.encode(moved)
            pos = np.searchsorted(codes, mc)
            pos[pos >= m] = 0
            if not np.array_equal(codes[pos], mc):
                raise AssertionError("a braid move left the filtered state set")
            s_out.append(sl)
            d_out.append(pos)
        return np.concatenate(s_out), np.concatenate(d_out)

    starts = range(0, m, chunk)
    if jobs <= 1:
        results = map(edges, starts)
    else:
        pool = ThreadPoolExecutor(max_workers=jobs)
        results = pool.map(edges, starts)
    for s, d in results:
        src.append(s)
        dst.append(d)
    if jobs > 1:
        pool.shutdown()
    if src:
        s = np.concatenate(src)
        d = np.concatenate(dst)
    else:
        s = d = np.empty(0, dtype=np.int64)
    graph = coo_matrix((np.ones(len(s), dtype=np.int8), (s, d)), shape=(m, m)).tocsr()
    _, raw = connected_components(graph, directed=True, connection="weak")
    # relabel by first appearance in code order, for determinism
    _, first = np.unique(raw, return_index=True)
    order = np.argsort(first)
    remap = np.empty_like(order)
    remap[order] = np.arange(len(order))
    labels = remap[raw]
    return ComponentTable(layout, mode, codes, weights, labels)
