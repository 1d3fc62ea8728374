"""Minimal group interfaces the braid-move formulas are written against."""
from __future__ import annotations

from typing import Any, Protocol

from .permutation import Permutation


class GroupOps(Protocol):
    one: Any

    def mul(self, a: Any, b: Any) -> Any: ...

    def inv(self, a: Any) -> Any: ...

    def eq(self, a: Any, b: Any) -> bool: ...


class SymmetricGroup:
    """S_d acting on the right; ``mul(a, b)`` applies ``a`` first."""

    def __init__(self, degree: int):
        self.degree = degree
        self.one = Permutation.identity(degree)

    def mul(self, a: Permutation, b: Permutation) -> Permutation:
        return a * b

    def inv(self, a: Permutation) -> Permutation:
        return a.inverse()

    def eq(self, a: Permutation, b: Permutation) -> bool:
        return a == b

    def __repr__(self) -> str:
        return f"SymmetricGroup({self.degree})"


class CyclicGroup:
    """Z_m written additively as integers mod m."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("m must be positive")
        self.m = m
        self.one = 0

    def mul(self, a: int, b: int) -> int:
        return (a + b) % self.m

    def inv(self, a: int) -> int:
        return (-a) % self.m

    def eq(self, a: int, b: int) -> bool:
        return a % self.m == b % self.m

    def __repr__(self) -> str:
        return f"CyclicGroup({self.m})"


def product(group: GroupOps, items) -> Any:
    acc = group.one
    for x in items:
        acc = group.mul(acc, x)
    return acc


def conj(group: GroupOps, x: Any, g: Any) -> Any:
    """x^g = g^-1 x g."""
    return group.mul(group.mul(group.inv(g), x), g)


def commutator(group: GroupOps, a: Any, b: Any) -> Any:
    """[a, b] = a b a^-1 b^-1."""
    return group.mul(group.mul(group.mul(a, b), group.inv(a)), group.inv(b))


def partial_commutators(group: GroupOps, lam, mu) -> list:
    """u_0 = 1, u_k = u_{k-1} [lam_k, mu_k]."""
    us = [group.one]
    for a, b in zip(lam, mu):
        us.append(group.mul(us[-1], commutator(group, a, b)))
    return us
