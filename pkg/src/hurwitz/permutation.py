"""Permutations of {1..d} under the right action.

Points are 1-based in every external form (cycle notation, JSON) and 0-based
in the internal image tuple.  Products are read left to right: ``p * q`` first
applies ``p`` and then ``q``, so ``x^(pq) = (x^p)^q`` and

>>> Permutation.parse("(1 2)", 3) * Permutation.parse("(1 3)", 3)
Permutation.parse('(1 2 3)', 3)

Conjugation follows the same convention, ``x^g = g^-1 x g``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

__all__ = [
    "Permutation",
    "Partition",
    "SubgroupAnalysis",
    "compose",
    "inverse",
    "conjugate",
    "cycle_type",
    "weight",
    "analyze_subgroup",
    "imprimitive_blocks",
    "epsilon_of_partition",
    "group_closure",
    "transpositions",
    "symmetric_group",
    "CLOSURE_MAX_DEGREE",
]

CLOSURE_MAX_DEGREE = 8

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """An immutable bijection of {1..d} stored as a 0-based image tuple."""

    __slots__ = ("_img", "_hash")

    def __init__(self, images: Iterable[int]):
        img = tuple(images)
        if not img:
            raise ValueError("degree must be at least 1")
        if sorted(img) != list(range(len(img))):
            raise ValueError(f"not a permutation of 0..{len(img) - 1}: {img}")
        self._img = img
        self._hash = hash(img)

    @classmethod
    def _trusted(cls, img: tuple[int, ...]) -> "Permutation":
        p = object.__new__(cls)
        p._img = img
        p._hash = hash(img)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise ValueError("degree must be at least 1")
        return cls._trusted(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        """Build from 1-based cycles; the cycles must be disjoint."""
        img = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            pts = [int(x) for x in cyc]
            for x in pts:
                if not 1 <= x <= degree:
                    raise ValueError(f"point {x} outside 1..{degree}")
                if x in seen:
                    raise ValueError(f"point {x} repeated in cycles")
                seen.add(x)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                img[a - 1] = b - 1
        return cls._trusted(tuple(img))

    @classmethod
    def transposition(cls, a: int, b: int, degree: int) -> "Permutation":
        if a == b:
            raise ValueError("a transposition needs two distinct points")
        return cls.from_cycles([(a, b)], degree)

    @classmethod
    def parse(cls, text: str, degree: int) -> "Permutation":
        """Parse cycle notation such as ``(1 2)(3 4 5)``; ``()`` is the identity.

        For degree at most 9 the compact form ``(12)(345)`` is also accepted.
        """
        stripped = text.strip()
        if _CYCLE_RE.sub("", stripped).strip():
            raise ValueError(f"malformed cycle notation: {text!r}")
        cycles = []
        for body in _CYCLE_RE.findall(stripped):
            parts = body.replace(",", " ").split()
            if len(parts) == 1 and degree <= 9 and len(parts[0]) > 1:
                parts = list(parts[0])
            if parts:
                cycles.append([int(x) for x in parts])
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return len(self._img)

    @property
    def images(self) -> tuple[int, ...]:
        return self._img

    def __call__(self, x: int) -> int:
        """Image of the 1-based point ``x``."""
        return self._img[x - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        if not isinstance(other, Permutation):
            return NotImplemented
        if len(other._img) != len(self._img):
            raise ValueError("degree mismatch")
        q = other._img
        return Permutation._trusted(tuple([q[x] for x in self._img]))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self._img)
        for i, x in enumerate(self._img):
            inv[x] = i
        return Permutation._trusted(tuple(inv))

    def conjugate(self, g: "Permutation") -> "Permutation":
        """``g^-1 * self * g``, i.e. relabel every point x as x^g."""
        if len(g._img) != len(self._img):
            raise ValueError("degree mismatch")
        s = g._img
        out = [0] * len(s)
        for i, x in enumerate(self._img):
            out[s[i]] = s[x]
        return Permutation._trusted(tuple(out))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self._img))

    def support(self) -> list[int]:
        return [i + 1 for i, x in enumerate(self._img) if i != x]

    def is_transposition(self) -> bool:
        return len(self.support()) == 2

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        """Disjoint cycles, each starting at its smallest point, sorted by it."""
        seen = [False] * len(self._img)
        out = []
        for start in range(len(self._img)):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                cyc.append(x + 1)
                x = self._img[x]
            if len(cyc) > 1 or include_fixed:
                out.append(tuple(cyc))
        return out

    def cycle_type(self) -> "Partition":
        return Partition(sorted((len(c) for c in self.cycles(include_fixed=True)), reverse=True))

    def weight(self) -> int:
        return len(self._img) - len(self.cycles(include_fixed=True))

    def order(self) -> int:
        from math import lcm

        return lcm(*(len(c) for c in self.cycles(include_fixed=True)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Permutation):
            return NotImplemented
        return self._img == other._img

    def __lt__(self, other: "Permutation") -> bool:
        return self._img < other._img

    def __hash__(self) -> int:
        return self._hash

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation.parse({str(self)!r}, {self.degree})"


@dataclass(frozen=True)
class Partition:
    """A non-increasing sequence of positive parts."""

    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int], degree: int | None = None):
        p = tuple(int(x) for x in parts)
        if not p or any(x < 1 for x in p):
            raise ValueError(f"parts must be positive: {p}")
        if any(a < b for a, b in zip(p, p[1:])):
            raise ValueError(f"parts must be non-increasing: {p}")
        if degree is not None and sum(p) != degree:
            raise ValueError(f"parts {p} do not sum to {degree}")
        object.__setattr__(self, "parts", p)

    @property
    def degree(self) -> int:
        return sum(self.parts)

    def is_trivial(self) -> bool:
        return all(x == 1 for x in self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.parts)


@dataclass(frozen=True)
class SubgroupAnalysis:
    orbits: tuple[tuple[int, ...], ...]
    transitive: bool
    group_order: int | None
    primitive: bool | None
    block_system: tuple[tuple[int, ...], ...] | None
    has_transposition: bool | None = None

    @property
    def full_symmetric(self) -> bool:
        d = sum(len(o) for o in self.orbits)
        if self.group_order is not None:
            return self.group_order == factorial(d)
        return bool(self.transitive and self.primitive and self.has_transposition)


def compose(p: Permutation, q: Permutation) -> Permutation:
    return p * q


def inverse(p: Permutation) -> Permutation:
    return p.inverse()


def conjugate(x: Permutation, g: Permutation) -> Permutation:
    return x.conjugate(g)


def cycle_type(p: Permutation) -> Partition:
    return p.cycle_type()


def weight(p: Permutation) -> int:
    return p.weight()


@lru_cache(maxsize=None)
def symmetric_group(degree: int) -> tuple[Permutation, ...]:
    """All of S_d in lexicographic order of image tuples (identity first)."""
    if degree > CLOSURE_MAX_DEGREE:
        raise ValueError(f"S_{degree} is beyond the closure cap of degree {CLOSURE_MAX_DEGREE}")
    return tuple(Permutation._trusted(p) for p in itertools.permutations(range(degree)))


@lru_cache(maxsize=None)
def transpositions(degree: int) -> tuple[Permutation, ...]:
    return tuple(
        Permutation.transposition(a, b, degree) for a in range(1, degree + 1) for b in range(a + 1, degree + 1)
    )


def _check_gens(gens: Sequence[Permutation]) -> int:
    if not gens:
        raise ValueError("empty generator list")
    d = gens[0].degree
    if any(g.degree != d for g in gens):
        raise ValueError("generators of mixed degree")
    return d


def _orbits(gens: Sequence[Permutation], d: int) -> list[tuple[int, ...]]:
    parent = list(range(d))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for g in gens:
        for i, x in enumerate(g.images):
            ri, rx = find(i), find(x)
            if ri != rx:
                parent[max(ri, rx)] = min(ri, rx)
    groups: dict[int, list[int]] = {}
    for i in range(d):
        groups.setdefault(find(i), []).append(i + 1)
    return sorted((tuple(v) for v in groups.values()), key=lambda o: (-len(o), o[0]))


def orbits(gens: Sequence[Permutation]) -> list[tuple[int, ...]]:
    """Domains of transitivity, by decreasing size then smallest point."""
    return _orbits(gens, _check_gens(gens))


def group_closure(gens: Sequence[Permutation]) -> frozenset[Permutation]:
    d = _check_gens(gens)
    if d > CLOSURE_MAX_DEGREE:
        raise ValueError(f"closure capped at degree {CLOSURE_MAX_DEGREE}")
    ident = Permutation.identity(d)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def _minimal_block(gens: Sequence[Permutation], d: int, a: int, b: int) -> list[int]:
    """Smallest block containing the 0-based points a and b (Atkinson's method)."""
    parent = list(range(d))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x: int, y: int) -> bool:
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        parent[max(rx, ry)] = min(rx, ry)
        return True

    union(a, b)
    queue = [(a, b)]
    while queue:
        x, y = queue.pop()
        for g in gens:
            gx, gy = g.images[x], g.images[y]
            if find(gx) != find(gy):
                union(gx, gy)
                queue.append((gx, gy))
    root = find(a)
    return [i for i in range(d) if find(i) == root]


def _block_system(gens: Sequence[Permutation], d: int) -> tuple[tuple[int, ...], ...] | None:
    for b in range(1, d):
        block = _minimal_block(gens, d, 0, b)
        if len(block) < d:
            blocks = {frozenset(block)}
            frontier = [frozenset(block)]
            while frontier:
                nxt = []
                for blk in frontier:
                    for g in gens:
                        img = frozenset(g.images[x] for x in blk)
                        if img not in blocks:
                            blocks.add(img)
                            nxt.append(img)
                frontier = nxt
            return tuple(sorted(tuple(sorted(x + 1 for x in blk)) for blk in blocks))
    return None


def analyze_subgroup(gens: Sequence[Permutation]) -> SubgroupAnalysis:
    d = _check_gens(gens)
    orbs = tuple(_orbits(gens, d))
    transitive = len(orbs) == 1
    order = None
    has_transposition = None
    if d <= CLOSURE_MAX_DEGREE:
        elems = group_closure(gens)
        order = len(elems)
        has_transposition = any(e.is_transposition() for e in elems)
    primitive = None
    blocks = None
    if transitive:
        blocks = _block_system(gens, d) if d > 1 else None
        primitive = blocks is None
    return SubgroupAnalysis(orbs, transitive, order, primitive, blocks, has_transposition)


def imprimitive_blocks(gens: Sequence[Permutation]) -> tuple[tuple[int, ...], ...]:
    """Orbits of the subgroup generated by all transpositions of <gens>.

    For a transitive group containing a transposition these blocks are the
    unique system on which the group restricts to the full symmetric group of
    each block; a single block means the group is S_d.
    """
    d = _check_gens(gens)
    if len(_orbits(gens, d)) != 1:
        raise ValueError("generators are not transitive")
    elems = group_closure(gens)
    trans = [e for e in elems if e.is_transposition()]
    if not trans:
        raise ValueError("group contains no transposition")
    blocks = tuple(sorted(_orbits(trans, d)))
    sizes = {len(b) for b in blocks}
    if len(sizes) != 1:
        raise AssertionError(f"transposition orbits of unequal size: {blocks}")
    have = set(trans)
    for blk in blocks:
        for a, b in itertools.combinations(blk, 2):
            if Permutation.transposition(a, b, d) not in have:
                raise AssertionError(f"S({blk}) is not contained in the group")
    return blocks


def epsilon_of_partition(e: Partition | Sequence[int]) -> Permutation:
    """Consecutive blocks of sizes e_1, e_2, ... each cycled: (1..e_1)(e_1+1..)..."""
    part = e if isinstance(e, Partition) else Partition(e)
    cycles = []
    start = 1
    for size in part.parts:
        cycles.append(range(start, start + size))
        start += size
    return Permutation.from_cycles(cycles, part.degree)
