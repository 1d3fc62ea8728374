"""Braid moves on Hurwitz systems, braid words, and replay.

The move formulas are written once against :class:`~hurwitz.groups.GroupOps`
so they run unchanged on permutations, on a cyclic group, and on the
vectorized rank tables of the orbit engine.
"""
from __future__ import annotations

import json
from contextlib import contextmanager
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Iterable, Iterator, Sequence

from .groups import GroupOps, SymmetricGroup, conj, partial_commutators, product

__all__ = [
    "BraidGenerator",
    "BraidWord",
    "MoveIndexError",
    "sigma",
    "rho",
    "tau",
    "word_inverse",
    "a_ij_word",
    "move_state",
    "apply_sigma",
    "apply_rho",
    "apply_tau",
    "apply_move",
    "apply_word",
    "apply_sigma_seq",
    "apply_word_seq",
    "all_generators",
    "word_to_json",
    "word_from_json",
    "MUTATIONS",
    "mutation",
]

FAMILIES = ("sigma", "rho", "tau")
DIRECTIONS = ("prime", "second")
_SYMBOL = {"sigma": "σ", "rho": "ρ", "tau": "τ"}


class MoveIndexError(IndexError):
    """A braid generator does not fit the system it is applied to."""


@dataclass(frozen=True, order=True)
class BraidGenerator:
    family: str
    direction: str
    j: int = 0
    i: int = 0
    k: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.direction not in DIRECTIONS:
            raise ValueError(f"unknown direction {self.direction!r}")
        if self.family == "sigma":
            if self.j < 1 or self.i or self.k:
                raise ValueError("sigma takes a single index j >= 1")
        elif self.i < 1 or self.k < 1 or self.j:
            raise ValueError(f"{self.family} takes indices i >= 1, k >= 1")

    def inverse(self) -> "BraidGenerator":
        other = "second" if self.direction == "prime" else "prime"
        return BraidGenerator(self.family, other, self.j, self.i, self.k)

    def check(self, n: int, g: int) -> None:
        if self.family == "sigma":
            if not 1 <= self.j <= n - 1:
                raise MoveIndexError(f"{self}: j must lie in 1..{n - 1}")
        elif not (1 <= self.i <= n and 1 <= self.k <= g):
            raise MoveIndexError(f"{self}: need 1 <= i <= {n} and 1 <= k <= {g}")

    def to_dict(self) -> dict:
        if self.family == "sigma":
            return {"gen": self.family, "dir": self.direction, "j": self.j}
        return {"gen": self.family, "dir": self.direction, "i": self.i, "k": self.k}

    @classmethod
    def from_dict(cls, obj: dict) -> "BraidGenerator":
        if obj.get("gen") == "sigma":
            return cls("sigma", obj["dir"], j=int(obj["j"]))
        return cls(obj["gen"], obj["dir"], i=int(obj["i"]), k=int(obj["k"]))

    def __str__(self) -> str:
        mark = "'" if self.direction == "prime" else "''"
        idx = str(self.j) if self.family == "sigma" else f"{self.i},{self.k}"
        return f"{_SYMBOL[self.family]}{mark}_{idx}"


BraidWord = tuple  # tuple[BraidGenerator, ...]


def sigma(j: int, direction: str = "prime") -> BraidGenerator:
    return BraidGenerator("sigma", direction, j=j)


def rho(i: int, k: int, direction: str = "prime") -> BraidGenerator:
    return BraidGenerator("rho", direction, i=i, k=k)


def tau(i: int, k: int, direction: str = "prime") -> BraidGenerator:
    return BraidGenerator("tau", direction, i=i, k=k)


def word_inverse(word: Sequence[BraidGenerator]) -> tuple[BraidGenerator, ...]:
    return tuple(gen.inverse() for gen in reversed(word))


def a_ij_word(i: int, j: int, n: int) -> tuple[BraidGenerator, ...]:
    """sigma_i^-1 .. sigma_{j-2}^-1 sigma_{j-1}^2 sigma_{j-2} .. sigma_i."""
    if not 1 <= i < j <= n:
        raise ValueError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={n}")
    left = [sigma(m, "second") for m in range(i, j - 1)]
    right = [sigma(m, "prime") for m in range(j - 2, i - 1, -1)]
    return tuple(left + [sigma(j - 1), sigma(j - 1)] + right)


def all_generators(n: int, g: int, directions: Iterable[str] = DIRECTIONS) -> list[BraidGenerator]:
    directions = tuple(directions)
    gens = [sigma(j, dr) for j in range(1, n) for dr in directions]
    for fam in ("rho", "tau"):
        gens += [BraidGenerator(fam, dr, i=i, k=k) for i in range(1, n + 1) for k in range(1, g + 1)
                 for dr in directions]
    return gens


# Fault injection for mutation testing of the verification suites.
MUTATIONS = ("rho-prime-a1", "rho-second-b2", "tau-prime-c1", "tau-second-d2", "sigma-prime")
_active_mutation: str | None = None


@contextmanager
def mutation(name: str | None) -> Iterator[None]:
    """Temporarily corrupt one move formula (``None`` is a no-op)."""
    global _active_mutation
    if name is not None and name not in MUTATIONS:
        raise ValueError(f"unknown mutation {name!r}; choose from {MUTATIONS}")
    prev, _active_mutation = _active_mutation, name
    try:
        yield
    finally:
        _active_mutation = prev


def move_state(group: GroupOps, t: Sequence[Any], lam: Sequence[Any], mu: Sequence[Any],
               gen: BraidGenerator) -> tuple[list, list, list]:
    """Apply one generator to (t; lam, mu) over an arbitrary group.

    Conjugators are evaluated from the input before anything is replaced.
    """
    t, lam, mu = list(t), list(lam), list(mu)
    mul, inv = group.mul, group.inv
    bad = _active_mutation
    if gen.family == "sigma":
        j = gen.j - 1
        a, b = t[j], t[j + 1]
        if gen.direction == "prime":
            first = mul(mul(a, b), inv(a)) if bad != "sigma-prime" else mul(a, b)
            t[j], t[j + 1] = first, a
        else:
            t[j], t[j + 1] = b, conj(group, a, b)
        return t, lam, mu

    i, k = gen.i - 1, gen.k - 1
    us = partial_commutators(group, lam, mu)
    P = product(group, t[:i])
    S = product(group, t[i + 1:])
    w = mul(inv(us[k + 1]), us[-1])
    u_prev = us[k]
    ti = t[i]
    if gen.family == "rho":
        if gen.direction == "prime":
            b1 = mul(mul(inv(P), u_prev), lam[k])
            a1 = mul(mul(b1, w), inv(S)) if bad != "rho-prime-a1" else mul(b1, w)
            t[i] = conj(group, ti, a1)
            mu[k] = mul(conj(group, inv(ti), b1), mu[k])
        else:
            b2 = mul(S, inv(w)) if bad != "rho-second-b2" else S
            a2 = mul(mul(mul(b2, inv(lam[k])), inv(u_prev)), P)
            t[i] = conj(group, ti, a2)
            mu[k] = mul(conj(group, ti, b2), mu[k])
    else:
        if gen.direction == "prime":
            d1 = mul(mul(S, inv(w)), mu[k])
            c1 = mul(mul(d1, inv(u_prev)), P) if bad != "tau-prime-c1" else mul(d1, P)
            t[i] = conj(group, ti, c1)
            lam[k] = mul(conj(group, ti, d1), lam[k])
        else:
            d2 = mul(inv(P), u_prev) if bad != "tau-second-d2" else inv(P)
            c2 = mul(mul(mul(d2, inv(mu[k])), w), inv(S))
            t[i] = conj(group, ti, c2)
            lam[k] = mul(conj(group, inv(ti), d2), lam[k])
    return t, lam, mu


@lru_cache(maxsize=None)
def _symmetric(d: int) -> SymmetricGroup:
    return SymmetricGroup(d)


def apply_move(sys, gen: BraidGenerator):
    """Apply one generator to a :class:`~hurwitz.system.HurwitzSystem`."""
    gen.check(sys.n, sys.g)
    if gen.family == "sigma" and _active_mutation is None:
        return sys.with_entries(t=apply_sigma_seq(sys.t, gen))
    t, lam, mu = move_state(_symmetric(sys.d), sys.t, sys.lam, sys.mu, gen)
    return sys.with_entries(t, lam, mu)


def apply_sigma(sys, j: int, direction: str = "prime"):
    return apply_move(sys, sigma(j, direction))


def apply_rho(sys, i: int, k: int, direction: str = "prime"):
    return apply_move(sys, rho(i, k, direction))


def apply_tau(sys, i: int, k: int, direction: str = "prime"):
    return apply_move(sys, tau(i, k, direction))


def apply_word(sys, word: Sequence[BraidGenerator], check: bool = False):
    """Replay ``word`` left to right; ``check`` validates every intermediate system."""
    from .system import validate

    for pos, gen in enumerate(word):
        try:
            gen.check(sys.n, sys.g)
        except MoveIndexError as exc:
            raise MoveIndexError(f"token {pos}: {exc}") from None
        sys = apply_move(sys, gen)
        if check:
            problems = validate(sys)
            if problems:
                raise AssertionError(f"token {pos} ({gen}) broke validity: {problems}")
    return sys


def apply_sigma_seq(seq: Sequence[Any], gen: BraidGenerator) -> tuple:
    """Apply a sigma move to a bare sequence of permutations (genus 0)."""
    if gen.family != "sigma":
        raise MoveIndexError(f"{gen}: only sigma moves act on bare sequences")
    if not 1 <= gen.j <= len(seq) - 1:
        raise MoveIndexError(f"{gen}: j must lie in 1..{len(seq) - 1}")
    out = list(seq)
    j = gen.j - 1
    a, b = out[j], out[j + 1]
    if gen.direction == "prime":
        out[j], out[j + 1] = a * b * a.inverse(), a
    else:
        out[j], out[j + 1] = b, b.inverse() * a * b
    return tuple(out)


def apply_word_seq(seq: Sequence[Any], word: Sequence[BraidGenerator]) -> tuple:
    out = tuple(seq)
    for pos, gen in enumerate(word):
        try:
            out = apply_sigma_seq(out, gen)
        except MoveIndexError as exc:
            raise MoveIndexError(f"token {pos}: {exc}") from None
    return out


def word_to_json(word: Sequence[BraidGenerator]) -> str:
    return json.dumps([gen.to_dict() for gen in word], separators=(",", ":"))


def word_from_json(text: str | list) -> tuple[BraidGenerator, ...]:
    data = json.loads(text) if isinstance(text, str) else text
    return tuple(BraidGenerator.from_dict(obj) for obj in data)
