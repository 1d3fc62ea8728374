"""Seeded property suites for moves, orbits and reducers.

Each suite returns one :class:`PropertyResult` per property.  The suites are
used by ``hurwitz verify`` and by the test-suite; the mutation hook in
:mod:`hurwitz.braid` lets them demonstrate that they catch broken formulas.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable

from .braid import (
    BraidGenerator,
    all_generators,
    apply_move,
    move_state,
    mutation,
    rho,
    tau,
)
from .groups import CyclicGroup, SymmetricGroup, commutator, conj, partial_commutators, product
from .normal_forms import normal_form, regime_target
from .permutation import Permutation, group_closure, orbits
from .system import HurwitzSystem, class_key, conjugate_system, monodromy_report, validate

__all__ = ["PropertyResult", "SUITES", "run_suite", "random_system", "random_reducible_system", "specializations"]


@dataclass
class PropertyResult:
    name: str
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, detail: Callable[[], str]) -> None:
        self.checked += 1
        if not ok and len(self.failures) < 5:
            self.failures.append(detail())
        elif not ok:
            self.failures.append("")

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" ({len(self.failures)} failures; first: {self.failures[0]})" if self.failures else ""
        return f"{status} {self.name}: {self.checked} checks{extra}"


def _random_perm(rng: random.Random, d: int) -> Permutation:
    img = list(range(d))
    rng.shuffle(img)
    return Permutation(img)


def random_system(rng: random.Random, d: int, n: int, g: int) -> HurwitzSystem:
    """A uniformly drawn valid system with arbitrary (non-identity) t entries."""
    G = SymmetricGroup(d)
    for _ in range(10_000):
        lam = [_random_perm(rng, d) for _ in range(g)]
        mu = [_random_perm(rng, d) for _ in range(g)]
        u = partial_commutators(G, lam, mu)[-1]
        t = []
        while len(t) < n - 1:
            p = _random_perm(rng, d)
            if not p.is_identity():
                t.append(p)
        last = product(G, t).inverse() * u
        if n >= 1 and not last.is_identity():
            return HurwitzSystem(d, tuple(t + [last]), tuple(lam), tuple(mu))
    raise ValueError(f"no valid system found for d={d}, n={n}, g={g}")


def random_reducible_system(rng: random.Random, d: int, n: int, g: int, steps: int = 40) -> HurwitzSystem:
    """A simple system with S_d monodromy in a normal-form regime: a random walk from the normal form."""
    target = regime_target(d, n, g)
    if target is None:
        raise ValueError(f"no regime for d={d}, n={n}, g={g}")
    sys = normal_form(target, d, n, g)
    gens = all_generators(n, g)
    for _ in range(steps):
        sys = apply_move(sys, rng.choice(gens))
    return conjugate_system(sys, _random_perm(rng, d))


def _random_shape(rng: random.Random) -> tuple[int, int, int]:
    d = rng.randint(2, 6)
    g = rng.randint(0, 2)
    if d == 2:
        return d, 2 * rng.randint(1, 3), g  # every entry is (12)
    n = rng.randint(1 if g else 2, 6)
    return d, n, g


def specializations(group, t, lam, mu, k: int) -> list[tuple[BraidGenerator, str, int, object]]:
    """The twelve closed forms for moves at i = 1 or i = n: (gen, field, index, expected value).

    ``field`` is "t", "lam" or "mu"; indices are 0-based.
    """
    mul, inv = group.mul, group.inv
    n = len(t)
    us = partial_commutators(group, lam, mu)
    u_prev, u_k, u_g = us[k - 1], us[k], us[-1]
    lk, mk = lam[k - 1], mu[k - 1]
    w = mul(inv(u_k), u_g)  # u_k^-1 u_g
    ml = commutator(group, mk, lk)
    lm = commutator(group, lk, mk)

    def prod(*xs):
        return product(group, xs)

    a1 = prod(inv(w), ml, lk, w)
    b1_first = prod(u_prev, lk)
    b1_last = prod(inv(w), ml, lk)
    c1 = prod(u_prev, lm, mk, inv(u_prev))
    d1_first = prod(u_prev, lm, mk)
    d1_last = prod(inv(w), mk)
    a2 = prod(u_prev, lm, inv(lk), inv(u_prev))
    c2 = prod(inv(w), ml, inv(mk), w)
    d2 = prod(inv(w), ml)
    t1, tn = t[0], t[-1]
    return [
        (rho(n, k), "t", n - 1, conj(group, tn, a1)),
        (rho(1, k), "mu", k - 1, mul(conj(group, inv(t1), b1_first), mk)),
        (rho(n, k), "mu", k - 1, mul(conj(group, inv(tn), b1_last), mk)),
        (tau(1, k), "t", 0, conj(group, t1, c1)),
        (tau(1, k), "lam", k - 1, mul(conj(group, t1, d1_first), lk)),
        (tau(n, k), "lam", k - 1, mul(conj(group, tn, d1_last), lk)),
        (rho(1, k, "second"), "t", 0, conj(group, t1, a2)),
        (rho(1, k, "second"), "mu", k - 1, mul(conj(group, t1, u_k), mk)),
        (rho(n, k, "second"), "mu", k - 1, mul(conj(group, tn, inv(w)), mk)),
        (tau(n, k, "second"), "t", n - 1, conj(group, tn, c2)),
        (tau(1, k, "second"), "lam", k - 1, mul(conj(group, inv(t1), u_prev), lk)),
        (tau(n, k, "second"), "lam", k - 1, mul(conj(group, inv(tn), d2), lk)),
    ]


def _relation_holds(group, t, lam, mu) -> bool:
    return group.eq(product(group, t), partial_commutators(group, lam, mu)[-1])


def _random_cyclic_state(rng: random.Random, m: int, n: int, g: int):
    while True:
        t = [rng.randrange(1, m) for _ in range(n - 1)]
        lam = [rng.randrange(m) for _ in range(g)]
        mu = [rng.randrange(m) for _ in range(g)]
        last = (-sum(t)) % m  # commutators vanish in an abelian group
        if last:
            return t + [last], lam, mu


def _moves_suite(rng: random.Random, samples: int) -> list[PropertyResult]:
    relation = PropertyResult("relation preserved by every move")
    inverses = PropertyResult("prime and second moves are mutually inverse")
    equivariance = PropertyResult("moves commute with simultaneous conjugation")
    frame = PropertyResult("entries not named by a move are unchanged")
    special = PropertyResult("closed forms at i = 1 and i = n match the general formulas")
    cyclic = PropertyResult("relation and inverse pairs over Z_12")
    Z = CyclicGroup(12)
    for _ in range(samples):
        d, n, g = _random_shape(rng)
        sys = random_system(rng, d, n, g)
        s = _random_perm(rng, d)
        G = SymmetricGroup(d)
        for gen in all_generators(n, g):
            out = apply_move(sys, gen)
            relation.check(not validate(out), lambda: f"{gen} on {sys}: {validate(out)}")
            back = apply_move(out, gen.inverse())
            inverses.check(back == sys, lambda: f"{gen} then {gen.inverse()} on {sys}")
            lhs = apply_move(conjugate_system(sys, s), gen)
            equivariance.check(lhs == conjugate_system(out, s), lambda: f"{gen} on {sys} with s={s}")
            same_t = [i for i in range(n) if out.t[i] != sys.t[i]]
            if gen.family == "sigma":
                ok = set(same_t) <= {gen.j - 1, gen.j} and out.lam == sys.lam and out.mu == sys.mu
            else:
                moved = "mu" if gen.family == "rho" else "lam"
                still = "lam" if moved == "mu" else "mu"
                ok = (set(same_t) <= {gen.i - 1} and getattr(out, still) == getattr(sys, still)
                      and all(a == b for j, (a, b) in enumerate(zip(getattr(out, moved), getattr(sys, moved)))
                              if j != gen.k - 1))
            frame.check(ok, lambda: f"{gen} on {sys} touched other entries")
        for k in range(1, g + 1):
            for gen, fld, idx, want in specializations(G, sys.t, sys.lam, sys.mu, k):
                got = getattr(apply_move(sys, gen), fld)[idx]
                special.check(got == want, lambda: f"{gen} {fld}[{idx}] on {sys}: {got} != {want}")
        cn = max(n, 2)  # over an abelian group a single t entry would be trivial
        ct, cl, cm = _random_cyclic_state(rng, 12, cn, g)
        for gen in all_generators(cn, g):
            t2, l2, m2 = move_state(Z, ct, cl, cm, gen)
            cyclic.check(_relation_holds(Z, t2, l2, m2), lambda: f"{gen} on Z_12 state {ct};{cl};{cm}")
            back = move_state(Z, t2, l2, m2, gen.inverse())
            cyclic.check(back == (ct, cl, cm), lambda: f"{gen} inverse on Z_12 state {ct};{cl};{cm}")
    return [relation, inverses, equivariance, frame, special, cyclic]


def _orbits_suite(rng: random.Random, samples: int) -> list[PropertyResult]:
    from .orbits import components, orbit

    conj_size = PropertyResult("systems-mode orbit size is invariant under conjugation")
    engine = PropertyResult("engine component sizes agree with single-orbit search")
    reload = PropertyResult("table representatives re-validate and re-classify")
    shapes = [(2, 2, 1), (3, 2, 1), (3, 4, 0), (2, 4, 1)]
    for _ in range(samples):
        d, n, g = rng.choice(shapes)
        sys = random_system(rng, d, n, g)
        a = orbit(sys, mode="systems")
        b = orbit(conjugate_system(sys, _random_perm(rng, d)), mode="systems")
        conj_size.check(a.orbit_size == b.orbit_size, lambda: f"{sys}: {a.orbit_size} vs {b.orbit_size}")
    for d, n, g in shapes[:3]:
        for rep in components(d, n, g, mode="classes"):
            single = orbit(rep.representative, mode="classes")
            engine.check(single.orbit_size == rep.orbit_size,
                         lambda: f"({d},{n},{g}) {rep.representative}: {single.orbit_size} vs {rep.orbit_size}")
            again = HurwitzSystem.deserialize(rep.representative.serialize())
            reload.check(not validate(again) and monodromy_report(again).label == rep.monodromy.label,
                         lambda: f"({d},{n},{g}) {rep.representative} did not reload")
    return [conj_size, engine, reload]


def _reducers_suite(rng: random.Random, samples: int) -> list[PropertyResult]:
    from .reduce import full_reduce, genus0_normal_form, main_lemma_witness, mochizuki_move
    from .normal_forms import z_sequence

    full = PropertyResult("full_reduce reaches the normal-form class with a replayed certificate")
    lemma = PropertyResult("main lemma witness conjugates only the canceling pair")
    moch = PropertyResult("mochizuki_move keeps the product and the generated group")
    genus0 = PropertyResult("genus-0 normal form keeps the product and starts with Z")
    for _ in range(samples):
        d = rng.randint(2, 5)
        g = rng.randint(0, 2)
        n = 2 * d - 2 + 2 * rng.randint(0, 1)
        sys = random_reducible_system(rng, d, n, g)
        res = full_reduce(sys)
        target = regime_target(d, n, g)
        full.check(res.verified and class_key(res.result) == class_key(normal_form(target, d, n, g)),
                   lambda: f"{sys}")

        # main lemma on a system with an inserted canceling pair
        d = rng.randint(2, 5)
        g = rng.randint(0, 2)
        n = 2 * rng.randint(1, 2) if d == 2 else rng.randint(1 if g else 2, 4)
        base = random_system(rng, d, n, g)
        p = _random_perm(rng, d)
        while p.is_identity():
            p = _random_perm(rng, d)
        i = rng.randint(1, n + 1)
        t = list(base.t)
        t[i - 1:i - 1] = [p, p.inverse()]
        sys = HurwitzSystem(d, tuple(t), base.lam, base.mu)
        others = [x for j, x in enumerate(t, 1) if j not in (i, i + 1)] + list(base.lam) + list(base.mu)
        H = sorted(group_closure(others))
        h = rng.choice(H)
        res = main_lemma_witness(sys, i, h)
        want = list(t)
        want[i - 1], want[i] = p.conjugate(h), p.inverse().conjugate(h)
        lemma.check(list(res.result.t) == want and res.result.lam == sys.lam and res.result.mu == sys.mu,
                    lambda: f"{sys}, i={i}, h={h}")

        d = rng.randint(2, 5)
        seq = [Permutation.transposition(*rng.sample(range(1, d + 1), 2), d) for _ in range(rng.randint(1, 6))]
        orb = [o for o in orbits(seq) if len(o) > 1]
        a, b = sorted(rng.sample(orb[0], 2))
        res = mochizuki_move(seq, a, b, rng.choice(["front", "back"]))
        G = SymmetricGroup(d)
        moch.check(product(G, res.result) == product(G, seq)
                   and group_closure(list(res.result)) == group_closure(seq), lambda: f"{seq} {a} {b}")
        if len(orb) == 1:
            res = genus0_normal_form(seq)
            s = product(G, seq)
            z = z_sequence(s, orb[0])
            genus0.check(product(G, res.result) == s and list(res.result[:len(z)]) == z, lambda: f"{seq}")
    return [full, lemma, moch, genus0]


SUITES = {"moves": _moves_suite, "orbits": _orbits_suite, "reducers": _reducers_suite}


def run_suite(suite: str, samples: int = 100, seed: int = 0, mutate: str | None = None) -> list[PropertyResult]:
    names = list(SUITES) if suite == "all" else [suite]
    for name in names:
        if name not in SUITES:
            raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    out: list[PropertyResult] = []
    with mutation(mutate):
        for name in names:
            out += SUITES[name](random.Random(f"{name}:{seed}"), samples)
    return out
