"""Target normal forms of the irreducibility theorems, built as concrete systems."""
from __future__ import annotations

from typing import Callable, Iterable, Sequence

from .permutation import Partition, Permutation, epsilon_of_partition
from .system import HurwitzSystem

__all__ = [
    "z_sequence",
    "genus0_pattern",
    "NORMAL_FORMS",
    "normal_form",
    "regime_target",
]


def _tr(a: int, b: int, d: int) -> Permutation:
    return Permutation.transposition(a, b, d)


def _cycles_in(s: Permutation, domain: Iterable[int]) -> list[tuple[int, ...]]:
    """Cycles of s on ``domain`` (fixed points included), each starting at its minimum,
    ordered by that minimum."""
    domain = sorted(domain)
    seen, out = set(), []
    for x in domain:
        if x in seen:
            continue
        cyc = [x]
        y = s(x)
        while y != x:
            cyc.append(y)
            y = s(y)
        seen.update(cyc)
        out.append(tuple(cyc))
    return out


def z_sequence(s: Permutation, domain: Iterable[int] | None = None) -> list[Permutation]:
    """((1_i 2_i), (1_i 3_i), .., (1_i (e_i)_i)) concatenated over the cycles of s."""
    d = s.degree
    out = []
    for cyc in _cycles_in(s, range(1, d + 1) if domain is None else domain):
        out.extend(_tr(cyc[0], x, d) for x in cyc[1:])
    return out


def genus0_pattern(s: Permutation, n: int, domain: Iterable[int] | None = None) -> tuple[Permutation, ...] | None:
    """The normalized transposition sequence of length n with product s, or None
    when n has the wrong parity or is too short for a transitive sequence."""
    d = s.degree
    domain = list(range(1, d + 1)) if domain is None else sorted(domain)
    cyc = _cycles_in(s, domain)
    z = z_sequence(s, domain)
    rest = n - len(z)
    q = len(cyc)
    if rest < 0 or rest % 2 or rest < 2 * (q - 1) or len(domain) < 2:
        return None
    if q == 1:
        tail = [_tr(cyc[0][0], cyc[0][1], d)] * rest
    else:
        a = cyc[0][0]
        tail = []
        for c in cyc[1:-1]:
            tail += [_tr(a, c[0], d)] * 2
        tail += [_tr(a, cyc[-1][0], d)] * (rest - len(tail))
    return tuple(z + tail)


def _ones(d: int, g: int) -> list[Permutation]:
    return [Permutation.identity(d)] * g


def _pairs(d: int, last: int) -> list[Permutation]:
    out = []
    for i in range(2, last + 1):
        out += [_tr(1, i, d)] * 2
    return out


def eq_4_45a(d: int, n: int, g: int, tail=None) -> HurwitzSystem | None:
    if tail is not None or n < 2 * d - 2 or n % 2 or d < 2:
        return None
    t = _pairs(d, d - 1) + [_tr(1, d, d)] * (n - 2 * d + 4)
    return HurwitzSystem(d, t, _ones(d, g), _ones(d, g))


def eq_5_65bis(d: int, n: int, g: int, tail=None) -> HurwitzSystem | None:
    if tail is not None or g < 1 or d < 3 or n != 2 * d - 4:
        return None
    mu = _ones(d, g)
    mu[-1] = _tr(1, d, d)
    return HurwitzSystem(d, _pairs(d, d - 1), _ones(d, g), mu)


def eq_6_81(d: int, n: int, g: int, tail=None) -> HurwitzSystem | None:
    if tail is not None or g != 1 or d < 4 or n != 2 * d - 6:
        return None
    mu = Permutation.from_cycles([(1, d - 1, d)], d)
    return HurwitzSystem(d, _pairs(d, d - 2), _ones(d, 1), [mu])


def _half(d: int, n: int, g: int, tail) -> int | None:
    if tail is not None or g != 1 or n % 2 or not (d - 1 <= n < 2 * d - 2) or n < 2:
        return None
    return n // 2 + 1


def eq_6_72(d: int, n: int, g: int, tail=None) -> HurwitzSystem | None:
    e = _half(d, n, g, tail)
    if e is None:
        return None
    mu = Permutation.from_cycles([(1, *range(e + 1, d + 1))], d)
    return HurwitzSystem(d, _pairs(d, e), _ones(d, 1), [mu])


def eq_6_76(d: int, n: int, g: int, tail=None) -> HurwitzSystem | None:
    e = _half(d, n, g, tail)
    if e is None:
        return None
    lam = Permutation.from_cycles([(1, *range(e + 1, d + 1))], d)
    return HurwitzSystem(d, _pairs(d, e), [lam], _ones(d, 1))


def eq_4_49(d: int, n: int, g: int, tail=None) -> HurwitzSystem | None:
    """(Z, t'_{N+1}, .., t'_{n-1}, eps^-1; 1, .., 1); ``n`` counts every t entry."""
    if tail is None:
        return None
    tail = tail if isinstance(tail, Partition) else Partition(tail)
    if tail.is_trivial() or n - 1 < 2 * d - 2:
        return None
    eps = epsilon_of_partition(tail)
    simple = genus0_pattern(eps, n - 1)
    if simple is None:
        return None
    return HurwitzSystem(d, list(simple) + [eps.inverse()], _ones(d, g), _ones(d, g))


NORMAL_FORMS: dict[str, Callable[..., HurwitzSystem | None]] = {
    "eq4.45a": eq_4_45a,
    "eq4.49": eq_4_49,
    "eq5.65bis": eq_5_65bis,
    "eq6.81": eq_6_81,
    "eq6.72": eq_6_72,
    "eq6.76": eq_6_76,
}


def normal_form(name: str, d: int, n: int, g: int, tail: Partition | Sequence[int] | None = None) -> HurwitzSystem:
    if name not in NORMAL_FORMS:
        raise ValueError(f"unknown normal form {name!r}")
    sys = NORMAL_FORMS[name](d, n, g, tail)
    if sys is None:
        raise ValueError(f"{name} is not defined for d={d}, n={n}, g={g}, tail={tail}")
    return sys


def regime_target(d: int, n: int, g: int, tail=None) -> str | None:
    """Which normal form governs S_d-monodromy systems of this shape, if any."""
    if tail is not None:
        return "eq4.49" if n - 1 >= 2 * d - 2 else None
    if n >= 2 * d - 2:
        return "eq4.45a"
    if g >= 1 and n == 2 * d - 4 and d >= 3:
        return "eq5.65bis"
    if g == 1 and n == 2 * d - 6 and d >= 4:
        return "eq6.81"
    return None
