"""Hurwitz systems (t_1..t_n; lam_1, mu_1, .., lam_g, mu_g) in S_d."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial
from typing import Iterator, Sequence

from .errors import GuardExceeded
from .groups import SymmetricGroup, commutator, partial_commutators, product
from .permutation import (
    Partition,
    Permutation,
    SubgroupAnalysis,
    analyze_subgroup,
    symmetric_group,
)

__all__ = [
    "HurwitzSystem",
    "SystemFilter",
    "ClassKey",
    "MonodromyReport",
    "MONODROMY_CHOICES",
    "validate",
    "partial_commutator",
    "conjugate_system",
    "class_key",
    "enumerate_systems",
    "monodromy_report",
    "monodromy_label",
    "system_to_json",
    "system_from_json",
    "ENUMERATION_GUARD",
    "CLASS_KEY_MAX_DEGREE",
]

ENUMERATION_GUARD = 2 * 10**9
ENUMERATION_MAX_DEGREE = 6
CLASS_KEY_MAX_DEGREE = 8
MONODROMY_CHOICES = ("any", "transitive", "full_symmetric", "imprimitive_transitive")


@dataclass(frozen=True)
class HurwitzSystem:
    d: int
    t: tuple[Permutation, ...]
    lam: tuple[Permutation, ...] = ()
    mu: tuple[Permutation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(self.t))
        object.__setattr__(self, "lam", tuple(self.lam))
        object.__setattr__(self, "mu", tuple(self.mu))
        if len(self.lam) != len(self.mu):
            raise ValueError("lambda and mu must have the same length g")

    @classmethod
    def of(cls, d: int, t: Sequence[str], lam: Sequence[str] = (), mu: Sequence[str] = ()) -> "HurwitzSystem":
        """Build from cycle-notation strings, e.g. ``of(3, ["(1 2)", "(1 2)"], ["()"], ["(1 3)"])``."""
        parse = lambda s: s if isinstance(s, Permutation) else Permutation.parse(s, d)  # noqa: E731
        return cls(d, tuple(map(parse, t)), tuple(map(parse, lam)), tuple(map(parse, mu)))

    @property
    def n(self) -> int:
        return len(self.t)

    @property
    def g(self) -> int:
        return len(self.lam)

    def entries(self) -> tuple[Permutation, ...]:
        """t_1..t_n, lam_1, mu_1, .., lam_g, mu_g (the serialization order)."""
        out = list(self.t)
        for a, b in zip(self.lam, self.mu):
            out.extend((a, b))
        return tuple(out)

    def serialize(self) -> bytes:
        buf = bytearray((self.d, self.n, self.g))
        for p in self.entries():
            buf.extend(p.images)
        return bytes(buf)

    @classmethod
    def deserialize(cls, data: bytes) -> "HurwitzSystem":
        d, n, g = data[0], data[1], data[2]
        perms = [Permutation(data[3 + i * d: 3 + (i + 1) * d]) for i in range(n + 2 * g)]
        return cls(d, tuple(perms[:n]), tuple(perms[n::2]), tuple(perms[n + 1::2]))

    def with_entries(self, t=None, lam=None, mu=None) -> "HurwitzSystem":
        return HurwitzSystem(
            self.d,
            self.t if t is None else tuple(t),
            self.lam if lam is None else tuple(lam),
            self.mu if mu is None else tuple(mu),
        )

    def __str__(self) -> str:
        left = ",".join(str(p) for p in self.t)
        right = ",".join(f"{a},{b}" for a, b in zip(self.lam, self.mu))
        return f"({left};{right})"


@dataclass(frozen=True)
class SystemFilter:
    require_transpositions: bool = True
    special_tail: Partition | None = None
    monodromy: str = "any"

    def __post_init__(self):
        if self.monodromy not in MONODROMY_CHOICES:
            raise ValueError(f"monodromy must be one of {MONODROMY_CHOICES}")
        if self.special_tail is not None:
            tail = self.special_tail
            if not isinstance(tail, Partition):
                tail = Partition(tail)
                object.__setattr__(self, "special_tail", tail)
            if tail.is_trivial():
                raise ValueError("special_tail must not be the trivial partition")

    def accepts_shape(self, sys: HurwitzSystem) -> bool:
        simple = sys.t[:-1] if self.special_tail is not None else sys.t
        if self.require_transpositions and not all(p.is_transposition() for p in simple):
            return False
        if self.special_tail is not None and sys.t[-1].cycle_type() != self.special_tail:
            return False
        return all(not p.is_identity() for p in sys.t)


@dataclass(frozen=True, order=True)
class ClassKey:
    bytes: bytes

    def hex(self) -> str:
        return self.bytes.hex()

    def representative(self) -> HurwitzSystem:
        return HurwitzSystem.deserialize(self.bytes)


@dataclass(frozen=True)
class MonodromyReport:
    analysis: SubgroupAnalysis
    t_only_analysis: SubgroupAnalysis
    partition_l_sigma: Partition
    product_cycle_type: Partition
    label: str = field(default="")


def validate(sys: HurwitzSystem) -> list[str]:
    """Every violated invariant, as human-readable strings; empty when valid."""
    problems = []
    if sys.n < 1:
        problems.append("n must be at least 1")
    for name, seq in (("t", sys.t), ("lambda", sys.lam), ("mu", sys.mu)):
        for i, p in enumerate(seq, 1):
            if p.degree != sys.d:
                problems.append(f"{name}_{i} has degree {p.degree}, expected {sys.d}")
    if problems:
        return problems
    for i, p in enumerate(sys.t, 1):
        if p.is_identity():
            problems.append(f"t_{i} = identity")
    G = SymmetricGroup(sys.d)
    left = product(G, sys.t)
    right = partial_commutators(G, sys.lam, sys.mu)[-1]
    if left != right:
        problems.append(f"product {left} != commutator product {right}")
    return problems


def partial_commutator(sys: HurwitzSystem, k: int) -> Permutation:
    if not 0 <= k <= sys.g:
        raise ValueError(f"k={k} outside 0..{sys.g}")
    G = SymmetricGroup(sys.d)
    acc = G.one
    for a, b in zip(sys.lam[:k], sys.mu[:k]):
        acc = acc * commutator(G, a, b)
    return acc


def conjugate_system(sys: HurwitzSystem, s: Permutation) -> HurwitzSystem:
    if s.degree != sys.d:
        raise ValueError("degree mismatch")
    return HurwitzSystem(
        sys.d,
        tuple(p.conjugate(s) for p in sys.t),
        tuple(p.conjugate(s) for p in sys.lam),
        tuple(p.conjugate(s) for p in sys.mu),
    )


def _conj_images(x: tuple[int, ...], s: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(s)
    for i, xi in enumerate(x):
        out[s[i]] = s[xi]
    return tuple(out)


def class_key(sys: HurwitzSystem) -> ClassKey:
    """Lexicographically least serialization over all simultaneous conjugates."""
    d = sys.d
    if d > CLASS_KEY_MAX_DEGREE:
        raise ValueError(f"class_key is capped at degree {CLASS_KEY_MAX_DEGREE}")
    entries = [p.images for p in sys.entries()]
    candidates = [s.images for s in symmetric_group(d)]
    for e in entries:
        if len(candidates) == 1:
            break
        best = None
        keep = []
        for s in candidates:
            img = _conj_images(e, s)
            if best is None or img < best:
                best = img
                keep = [s]
            elif img == best:
                keep.append(s)
        candidates = keep
    s = candidates[0]
    buf = bytearray((d, sys.n, sys.g))
    for e in entries:
        buf.extend(_conj_images(e, s))
    return ClassKey(bytes(buf))


def monodromy_label(analysis: SubgroupAnalysis) -> str:
    if not analysis.transitive:
        return "intransitive"
    if analysis.full_symmetric:
        return "full_symmetric"
    if not analysis.primitive:
        return "imprimitive_transitive"
    return "primitive_transitive"


def monodromy_matches(label: str, wanted: str) -> bool:
    if wanted == "any":
        return True
    if wanted == "transitive":
        return label != "intransitive"
    return label == wanted


@lru_cache(maxsize=1 << 16)
def _analyze_cached(gens: tuple[Permutation, ...]) -> SubgroupAnalysis:
    return analyze_subgroup(list(gens))


def monodromy_report(sys: HurwitzSystem) -> MonodromyReport:
    full = _analyze_cached(tuple(sorted(set(sys.entries()))))
    t_only = _analyze_cached(tuple(sorted(set(sys.t))))
    ell = Partition(sorted((len(o) for o in t_only.orbits), reverse=True))
    prod = product(SymmetricGroup(sys.d), sys.t).cycle_type()
    return MonodromyReport(full, t_only, ell, prod, monodromy_label(full))


def check_enumeration_guard(d: int, n: int, g: int, flt: SystemFilter) -> int:
    """Number of candidate tuples the enumeration will scan; raises past the guard."""
    if d > ENUMERATION_MAX_DEGREE:
        raise ValueError(f"enumeration is limited to d <= {ENUMERATION_MAX_DEGREE}")
    if n < 1 or g < 0 or d < 1:
        raise ValueError("need n >= 1, g >= 0, d >= 1")
    simple_free = n - 1
    per_entry = d * (d - 1) // 2 if flt.require_transpositions else factorial(d) - 1
    count = per_entry ** simple_free * factorial(d) ** (2 * g)
    if count > ENUMERATION_GUARD:
        raise GuardExceeded(f"{count} candidates exceed the enumeration guard {ENUMERATION_GUARD}")
    return count


def enumerate_systems(d: int, n: int, g: int, flt: SystemFilter | None = None) -> Iterator[HurwitzSystem]:
    """Every valid system passing ``flt``, each once, in a fixed order.

    t_1..t_{n-1} and lam, mu range over their allowed values and t_n is solved
    from the defining relation.  With ``special_tail`` the entry t_n carries that
    cycle type and t_1..t_{n-1} are the simple entries.
    """
    from .engine import enumerate_ranks, get_table

    flt = flt or SystemFilter()
    check_enumeration_guard(d, n, g, flt)
    table = get_table(d)
    rows = enumerate_ranks(table, n, g, flt)
    for row in rows:
        sys = table.system_from_row(row, n, g)
        if flt.monodromy != "any":
            if not monodromy_matches(monodromy_report(sys).label, flt.monodromy):
                continue
        yield sys


def _perm_to_json(p: Permutation) -> list[list[int]]:
    return [list(c) for c in p.cycles()]


def system_to_dict(sys: HurwitzSystem) -> dict:
    return {
        "d": sys.d,
        "n": sys.n,
        "g": sys.g,
        "t": [_perm_to_json(p) for p in sys.t],
        "lambda": [_perm_to_json(p) for p in sys.lam],
        "mu": [_perm_to_json(p) for p in sys.mu],
    }


def system_from_dict(obj: dict) -> HurwitzSystem:
    d = int(obj["d"])
    mk = lambda cycles: Permutation.from_cycles(cycles, d)  # noqa: E731
    sys = HurwitzSystem(d, tuple(map(mk, obj["t"])), tuple(map(mk, obj.get("lambda", []))),
                        tuple(map(mk, obj.get("mu", []))))
    if "n" in obj and int(obj["n"]) != sys.n:
        raise ValueError(f"declared n={obj['n']} but {sys.n} t entries given")
    if "g" in obj and int(obj["g"]) != sys.g:
        raise ValueError(f"declared g={obj['g']} but {sys.g} lambda entries given")
    return sys


def system_to_json(sys: HurwitzSystem) -> str:
    return json.dumps(system_to_dict(sys), separators=(",", ":"))


def system_from_json(text: str) -> HurwitzSystem:
    return system_from_dict(json.loads(text))
