"""Certificate-emitting reductions of Hurwitz systems and transposition sequences.

Every public function returns a :class:`ReductionResult` whose braid word is
replayed against the input before returning; a mismatch raises
:class:`~hurwitz.errors.VerificationError`.

Notation used in comments: a *pair* is two adjacent entries (p, p^-1); for
transpositions that is two equal entries.  A pair can slide past any entry x
without changing either, or slide past it while being conjugated by x.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .braid import (
    BraidGenerator,
    apply_move,
    apply_word,
    apply_word_seq,
    rho,
    sigma,
    tau,
    word_from_json,
    word_inverse,
    word_to_json,
)
from .errors import GuardExceeded, RegimeError, VerificationError
from .groups import SymmetricGroup, partial_commutators, product
from .normal_forms import genus0_pattern, normal_form, regime_target, z_sequence
from .permutation import Permutation, epsilon_of_partition, group_closure, orbits
from .system import HurwitzSystem, class_key, monodromy_report, system_from_dict, system_to_dict, validate

__all__ = [
    "ReductionResult",
    "mochizuki_move",
    "genus0_normal_form",
    "tail_double_pair",
    "split_equal_pair",
    "main_lemma_witness",
    "maximize_transitivity",
    "full_reduce",
    "FALLBACK_GUARD",
]

FALLBACK_GUARD = 10**7


@dataclass(frozen=True)
class ReductionResult:
    input: HurwitzSystem | tuple
    result: HurwitzSystem | tuple
    certificate: tuple[BraidGenerator, ...]
    verified: bool

    def to_dict(self) -> dict:
        return {
            "input": _state_to_dict(self.input),
            "result": _state_to_dict(self.result),
            "certificate": json.loads(word_to_json(self.certificate)),
            "verified": self.verified,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "ReductionResult":
        obj = json.loads(text)
        return cls(system_from_dict(obj["input"]), system_from_dict(obj["result"]),
                   word_from_json(obj["certificate"]), bool(obj["verified"]))


def _state_to_dict(state) -> dict:
    if isinstance(state, HurwitzSystem):
        return system_to_dict(state)
    d = state[0].degree if state else 1
    return system_to_dict(HurwitzSystem(d, tuple(state)))


class _Walk:
    """A system being rewritten, with the moves applied so far."""

    def __init__(self, sys: HurwitzSystem):
        self.sys = sys
        self.word: list[BraidGenerator] = []

    @property
    def t(self) -> tuple[Permutation, ...]:
        return self.sys.t

    def do(self, *gens: BraidGenerator) -> None:
        for gen in gens:
            self.sys = apply_move(self.sys, gen)
            self.word.append(gen)

    def run(self, word: Sequence[BraidGenerator]) -> None:
        self.do(*word)


def _seq_walk(seq: Sequence[Permutation]) -> _Walk:
    seq = tuple(seq)
    if not seq:
        raise ValueError("empty sequence")
    return _Walk(HurwitzSystem(seq[0].degree, seq))


def _finish_seq(seq: tuple, walk: _Walk) -> ReductionResult:
    word = tuple(walk.word)
    replay = apply_word_seq(seq, word)
    if replay != walk.t:
        raise VerificationError("sequence certificate does not replay")
    return ReductionResult(seq, replay, word, True)


def _finish_sys(sys: HurwitzSystem, walk: _Walk) -> ReductionResult:
    word = tuple(walk.word)
    replay = apply_word(sys, word)
    if replay != walk.sys:
        raise VerificationError("certificate does not replay")
    if validate(replay):
        raise VerificationError(f"result is not a valid system: {validate(replay)}")
    return ReductionResult(sys, replay, word, True)


def _ends(p: Permutation) -> tuple[int, int]:
    a, b = p.support()
    return a, b


# pair slides; the pair occupies j, j+1 (1-based)

def _pair_right(walk: _Walk, j: int, conj: bool) -> None:
    """(p, p^-1, x) -> (x, p, p^-1), or (x, p^x, (p^-1)^x) when ``conj``."""
    if conj:
        walk.do(sigma(j + 1, "second"), sigma(j, "second"))
    else:
        walk.do(sigma(j + 1), sigma(j))


def _pair_left(walk: _Walk, j: int, conj: bool) -> None:
    """x at j: (x, p, p^-1) -> (p, p^-1, x), or with conjugation by x^-1."""
    if conj:
        walk.do(sigma(j), sigma(j + 1))
    else:
        walk.do(sigma(j, "second"), sigma(j + 1, "second"))


def _move_entry(walk: _Walk, p: int, q: int) -> None:
    """Carry the entry at p unchanged to position q."""
    while p < q:
        walk.do(sigma(p))
        p += 1
    while p > q:
        walk.do(sigma(p - 1, "second"))
        p -= 1


# shortest chains of transpositions

def _chain(t: Sequence[Permutation], a: int, b: int, lo: int, hi: int) -> list[int] | None:
    """Positions of a shortest chain of entries linking a to b, lexicographically least."""
    adj: dict[int, list[tuple[int, int]]] = {}
    for p in range(lo, hi + 1):
        x, y = _ends(t[p - 1])
        adj.setdefault(x, []).append((p, y))
        adj.setdefault(y, []).append((p, x))
    dist = {b: 0}
    queue = deque([b])
    while queue:
        x = queue.popleft()
        for _, y in adj.get(x, ()):
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    if a not in dist:
        return None
    path, x = [], a
    while x != b:
        p, y = min((p, y) for p, y in adj[x] if dist.get(y) == dist[x] - 1)
        path.append(p)
        x = y
    return path


def _bring(walk: _Walk, a: int, b: int, lo: int, hi: int, front: bool) -> None:
    """Make (ab) the first (or last) entry of the window lo..hi by sigma moves."""
    while True:
        for p in range(lo, hi + 1):
            if not walk.t[p - 1].is_transposition():
                raise ValueError(f"entry {p} is not a transposition")
        path = _chain(walk.t, a, b, lo, hi)
        if path is None:
            raise ValueError(f"{a} and {b} lie in different orbits of the window")
        if len(path) == 1:
            _move_entry(walk, path[0], lo if front else hi)
            return
        p, q = path[0], path[1]
        if p < q:
            _move_entry(walk, p, q - 1)
            walk.do(sigma(q - 1, "second"))  # ((a x2),(x2 x3)) -> ((x2 x3),(a x3))
        else:
            _move_entry(walk, p, q + 1)
            walk.do(sigma(q))  # ((x2 x3),(a x2)) -> ((a x3),(x2 x3))


def mochizuki_move(seq: Sequence[Permutation], a: int, b: int, position: str = "front") -> ReductionResult:
    """Braid-equivalent sequence whose first (or last) entry is (ab)."""
    if position not in ("front", "back"):
        raise ValueError("position must be 'front' or 'back'")
    if a == b:
        raise ValueError("a and b must differ")
    seq = tuple(seq)
    walk = _seq_walk(seq)
    _bring(walk, a, b, 1, len(seq), position == "front")
    return _finish_seq(seq, walk)


# genus-0 normal form

def _cycle_edge(t: Sequence[Permutation], lo: int, hi: int) -> int | None:
    """Largest position whose edge lies on a cycle of the window's multigraph."""
    for p in range(hi, lo - 1, -1):
        parent: dict[int, int] = {}

        def find(x: int) -> int:
            while parent.get(x, x) != x:
                x = parent[x]
            return x

        for r in range(lo, hi + 1):
            if r != p:
                x, y = map(find, _ends(t[r - 1]))
                if x != y:
                    parent[x] = y
        u, v = _ends(t[p - 1])
        if find(u) == find(v):
            return p
    return None


def _point_orbits(perms: Sequence[Permutation], d: int) -> dict[int, int]:
    parent = list(range(d + 1))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for p in perms:
        for cyc in p.cycles():
            for y in cyc[1:]:
                parent[find(y)] = find(cyc[0])
    return {x: find(x) for x in range(1, d + 1)}


class _Labels:
    """Position labels for step III: ('z', k) for fixed entries, ('p', k) for pairs."""

    def __init__(self, walk: _Walk, lo: int, hi: int, n_fixed: int):
        self.walk, self.lo, self.hi = walk, lo, hi
        self.lab = {}
        for p in range(lo, lo + n_fixed):
            self.lab[p] = ("z", p)
        for k, p in enumerate(range(lo + n_fixed, hi + 1, 2)):
            self.lab[p] = self.lab[p + 1] = ("p", k)

    def pairs(self) -> list[tuple]:
        return sorted({v for v in self.lab.values() if v[0] == "p"})

    def where(self, label) -> int:
        return min(p for p, v in self.lab.items() if v == label)

    def value(self, label) -> Permutation:
        return self.walk.t[self.where(label) - 1]

    def step(self, pid, right: bool, conj: bool) -> None:
        j = self.where(pid)
        if right:
            x = self.lab[j + 2]
            _pair_right(self.walk, j, conj)
            self.lab[j], self.lab[j + 1], self.lab[j + 2] = x, pid, pid
        else:
            x = self.lab[j - 1]
            _pair_left(self.walk, j - 1, conj)
            self.lab[j - 1], self.lab[j], self.lab[j + 1] = pid, pid, x

    def _split_around(self, pid) -> bool:
        j = self.where(pid)
        left, right = self.lab.get(j - 1), self.lab.get(j + 2)
        return left is not None and left == right and left[0] == "p"

    def conjugate(self, pid, by_label) -> None:
        """Conjugate the pair by the value of the entry labelled ``by_label``."""
        target = self.where(by_label)
        j = self.where(pid)
        if target > j:
            while self.where(pid) + 2 < self.where(by_label):
                self.step(pid, True, False)
            self.step(pid, True, True)
            while self._split_around(pid):
                self.step(pid, True, False)
        else:
            by_pos = max(p for p, v in self.lab.items() if v == by_label)
            while self.where(pid) - 1 > by_pos:
                self.step(pid, False, False)
                by_pos = max(p for p, v in self.lab.items() if v == by_label)
            self.step(pid, False, True)
            while self._split_around(pid):
                self.step(pid, False, False)

    def to_end(self, pid) -> None:
        while self.where(pid) + 1 < self.hi:
            self.step(pid, True, False)


def _conj_path(start: frozenset, goal: frozenset, gens: list[tuple]) -> list | None:
    """Shortest list of generator labels whose successive conjugation maps start to goal."""
    prev = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            path = []
            while prev[cur] is not None:
                cur, lab = prev[cur]
                path.append(lab)
            return path[::-1]
        for lab, perm in gens:
            nxt = frozenset(perm(x) for x in cur)
            if nxt not in prev:
                prev[nxt] = (cur, lab)
                queue.append(nxt)
    return None


def _genus0(walk: _Walk, lo: int, hi: int, domain: Sequence[int]) -> None:
    d = walk.sys.d
    domain = sorted(domain)
    s_all = product(SymmetricGroup(d), walk.t[lo - 1:hi])
    if walk.t[lo - 1:hi] == genus0_pattern(s_all, hi - lo + 1, domain):
        return
    # I: split off equal pairs until the prefix is a minimal factorization
    m = hi
    while True:
        s_y = product(SymmetricGroup(d), walk.t[lo - 1:m])
        if m - lo + 1 == s_y.weight():
            break
        p = _cycle_edge(walk.t, lo, m)
        if p is None:
            raise AssertionError("non-minimal prefix without a cycle")
        a, b = _ends(walk.t[p - 1])
        _move_entry(walk, p, m)
        _bring(walk, a, b, lo, m - 1, front=False)
        m -= 2
    s = product(SymmetricGroup(d), walk.t[lo - 1:m])
    # II: peel the Z-sequence off the minimal prefix
    pos = lo
    for z in z_sequence(s, domain):
        a, b = _ends(z)
        _bring(walk, a, b, pos, m, front=True)
        pos += 1
    if pos != m + 1:
        raise AssertionError("minimal prefix longer than the Z-sequence")
    # III: normalize the pairs
    labels = _Labels(walk, lo, hi, m - lo + 1)
    cycles = []
    seen: set[int] = set()
    for x in domain:
        if x not in seen:
            cyc = [x]
            y = s(x)
            while y != x:
                cyc.append(y)
                y = s(y)
            seen.update(cyc)
            cycles.append(cyc)
    heads = [c[0] for c in cycles]
    q = len(cycles)
    if q == 1:
        targets = []
        rest_target = frozenset((cycles[0][0], cycles[0][1]))
    else:
        targets = [frozenset((heads[0], h)) for h in heads[1:-1]]
        rest_target = frozenset((heads[0], heads[-1]))
    unfixed = labels.pairs()
    fixed: list = []

    def generators(pid) -> list[tuple]:
        return [(lab, labels.value(lab)) for lab in sorted(set(labels.lab.values())) if lab != pid]

    def reachable(pid, goal: frozenset) -> bool:
        orb = _point_orbits([v for _, v in generators(pid)], d)
        u, v = _ends(labels.value(pid))
        x, y = sorted(goal)
        if orb[u] == orb[v]:
            return orb[x] == orb[y] == orb[u]
        return {orb[u], orb[v]} == {orb[x], orb[y]}

    def drive(pid, goal: frozenset) -> None:
        path = _conj_path(frozenset(_ends(labels.value(pid))), goal, generators(pid))
        if path is None:
            raise AssertionError("conjugation path not found")
        for lab in path:
            labels.conjugate(pid, lab)

    for goal in targets:
        pid = next((p for p in unfixed if reachable(p, goal)), None)
        if pid is None:
            raise AssertionError(f"no pair can reach {sorted(goal)}")
        drive(pid, goal)
        unfixed.remove(pid)
        fixed.append(pid)
    for pid in list(unfixed):
        drive(pid, rest_target)
    for pid in fixed + unfixed:
        labels.to_end(pid)
    want = genus0_pattern(s, hi - lo + 1, domain)
    if want is None or walk.t[lo - 1:hi] != want:
        raise VerificationError("normalized sequence deviates from the expected pattern")


def _support_orbit(seq: Sequence[Permutation]) -> list[int]:
    orbs = [o for o in orbits(list(seq)) if len(o) > 1]
    if len(orbs) != 1:
        raise ValueError("the sequence must be transitive on its support")
    return list(orbs[0])


def genus0_normal_form(seq: Sequence[Permutation]) -> ReductionResult:
    """(Z, pairs) normal form of a transposition sequence transitive on its support."""
    seq = tuple(seq)
    if not all(p.is_transposition() for p in seq):
        raise ValueError("all entries must be transpositions")
    domain = _support_orbit(seq)
    walk = _seq_walk(seq)
    _genus0(walk, 1, len(seq), domain)
    return _finish_seq(seq, walk)


def tail_double_pair(seq: Sequence[Permutation], a: int, b: int) -> ReductionResult:
    """Braid-equivalent sequence ending with (ab), (ab); a and b in different cycles of the product."""
    seq = tuple(seq)
    if not all(p.is_transposition() for p in seq):
        raise ValueError("all entries must be transpositions")
    domain = _support_orbit(seq)
    d = seq[0].degree
    s = product(SymmetricGroup(d), seq)
    if a not in domain or b not in domain:
        raise ValueError("a and b must lie in the support")
    cyc_of = {}
    heads = []
    for x in sorted(domain):
        if x not in cyc_of:
            heads.append(x)
            y = x
            while y not in cyc_of:
                cyc_of[y] = x
                y = s(y)
    if len(heads) < 2:
        raise ValueError("the product has a single cycle on the support (q = 1)")
    if cyc_of[a] == cyc_of[b]:
        raise ValueError("a and b lie in the same cycle of the product")
    ab = Permutation.transposition(a, b, d)
    model = list(z_sequence(s, domain)) + [ab, ab]
    for h in heads:
        if h not in (cyc_of[a], cyc_of[b]):
            model += [Permutation.transposition(a, h, d)] * 2
    extra = len(seq) - len(model)
    if extra < 0 or extra % 2:
        raise ValueError("sequence too short for the requested pair")
    model += [ab] * extra
    to_nf = genus0_normal_form(seq)
    from_model = genus0_normal_form(model)
    if to_nf.result != from_model.result:
        raise AssertionError("model and input normalize differently")
    walk = _seq_walk(seq)
    walk.run(to_nf.certificate)
    walk.run(word_inverse(from_model.certificate))
    n_z = len(z_sequence(s, domain))
    j = n_z + 1
    while j + 1 < len(seq):
        _pair_right(walk, j, False)
        j += 1
    return _finish_seq(seq, walk)


def _weight_sum(seq: Sequence[Permutation], d: int) -> tuple[list[tuple[int, ...]], int]:
    orbs = [o for o in orbits(list(seq)) if len(o) > 1] if seq else []
    return orbs, sum(len(o) - 1 for o in orbs)


def _split(walk: _Walk, lo: int, hi: int) -> None:
    """Make entries hi-1, hi equal while the rest keeps the window's orbits."""
    d = walk.sys.d
    window = walk.t[lo - 1:hi]
    orbs, _ = _weight_sum(window, d)
    chosen = None
    for orb in orbs:
        members = [p for p in window if p.support()[0] in orb]
        s_o = product(SymmetricGroup(d), members)
        if len(members) + s_o.weight() > 2 * (len(orb) - 1):
            chosen = orb
            break
    if chosen is None:
        raise ValueError("n + |s| = 2|Sigma|: no braid-equivalent sequence ends with an equal pair")
    inside = set(chosen)
    # move the chosen block to the end; disjoint transpositions just swap
    done = False
    while not done:
        done = True
        for p in range(hi - 1, lo - 1, -1):
            x, y = walk.t[p - 1], walk.t[p]
            if x.support()[0] in inside and y.support()[0] not in inside:
                walk.do(sigma(p))
                done = False
    count = sum(1 for p in walk.t[lo - 1:hi] if p.support()[0] in inside)
    _genus0(walk, hi - count + 1, hi, sorted(inside))
    if walk.t[hi - 2] != walk.t[hi - 1]:
        raise AssertionError("normal form did not end with an equal pair")


def split_equal_pair(seq: Sequence[Permutation]) -> ReductionResult:
    """Braid-equivalent sequence with t'_{n-1} = t'_n and t'_1..t'_{n-2} generating the same group."""
    seq = tuple(seq)
    if not all(p.is_transposition() for p in seq):
        raise ValueError("all entries must be transpositions")
    d = seq[0].degree
    s = product(SymmetricGroup(d), seq)
    _, sig = _weight_sum(seq, d)
    if len(seq) + s.weight() <= 2 * sig:
        raise ValueError(f"n + |s| = {len(seq) + s.weight()} is not larger than 2|Sigma| = {2 * sig}")
    walk = _seq_walk(seq)
    _split(walk, 1, len(seq))
    res = _finish_seq(seq, walk)
    if orbits(list(res.result[:-2])) != orbits(list(seq)):
        raise VerificationError("the shortened sequence generates a different group")
    return res


# main lemma

def _pair_to(walk: _Walk, j: int, target: int) -> None:
    while j < target:
        _pair_right(walk, j, False)
        j += 1
    while j > target:
        _pair_left(walk, j - 1, False)
        j -= 1


def _conjugate_pair(walk: _Walk, i: int, prim: tuple) -> None:
    """Conjugate the pair at i, i+1 by one primitive, leaving everything else as it was."""
    kind = prim[0]
    if kind == "t":
        _, ell, inverse = prim  # ell indexes the entries with the pair removed
        if not inverse:
            # pair just left of t_ell, then slide right through it
            slot = ell if ell < i else ell - 2
            _pair_to(walk, i, slot)
            _pair_right(walk, slot, True)
            _pair_to(walk, slot + 1, i)
        else:
            slot = ell + 1 if ell < i else ell - 1
            _pair_to(walk, i, slot)
            _pair_left(walk, slot - 1, True)
            _pair_to(walk, slot - 1, i)
        return
    _, k, inverse = prim
    gen = rho(1, k) if kind == "A" else tau(1, k, "second")
    sandwich = (gen, sigma(1, "second"), gen, sigma(1, "second"))
    _pair_to(walk, i, 1)
    walk.run(word_inverse(sandwich) if inverse else sandwich)
    _pair_to(walk, 1, i)


def _primitives(sys: HurwitzSystem, i: int) -> list[tuple[tuple, Permutation]]:
    """Conjugators available to the pair at i, i+1, each with the element it conjugates by."""
    G = SymmetricGroup(sys.d)
    out = []
    for ell in range(1, sys.n + 1):
        if ell in (i, i + 1):
            continue
        x = sys.t[ell - 1]
        out.append((("t", ell, False), x))
        out.append((("t", ell, True), x.inverse()))
    us = partial_commutators(G, sys.lam, sys.mu)
    for k in range(1, sys.g + 1):
        a = us[k - 1] * sys.lam[k - 1] * us[k].inverse()
        b = us[k - 1] * sys.mu[k - 1].inverse() * us[k].inverse()
        out += [(("A", k, False), a), (("A", k, True), a.inverse()),
                (("B", k, False), b), (("B", k, True), b.inverse())]
    return out


def _conj_word(start: Permutation, goal: Permutation, prims) -> list[tuple] | None:
    prev = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        if cur == goal:
            path = []
            while prev[cur] is not None:
                cur, lab = prev[cur]
                path.append(lab)
            return path[::-1]
        for lab, h in prims:
            nxt = cur.conjugate(h)
            if nxt not in prev:
                prev[nxt] = (cur, lab)
                queue.append(nxt)
    return None


def _witness(walk: _Walk, i: int, h: Permutation) -> None:
    sys = walk.sys
    tau_i = sys.t[i - 1]
    goal = tau_i.conjugate(h)
    if goal == tau_i:
        return
    path = _conj_word(tau_i, goal, _primitives(sys, i))
    if path is None:
        raise ValueError("h does not lie in the subgroup generated by the other entries")
    for prim in path:
        _conjugate_pair(walk, i, prim)


def main_lemma_witness(sys: HurwitzSystem, i: int, h: Permutation, check_membership: bool = True) -> ReductionResult:
    """Conjugate the canceling pair (t_i, t_{i+1}) by h in H, fixing every other entry."""
    if not 1 <= i < sys.n:
        raise ValueError(f"i must lie in 1..{sys.n - 1}")
    if not (sys.t[i - 1] * sys.t[i]).is_identity():
        raise ValueError("t_i t_{i+1} must be the identity")
    others = [p for ell, p in enumerate(sys.t, 1) if ell not in (i, i + 1)] + list(sys.lam) + list(sys.mu)
    if check_membership and not h.is_identity():
        gens = [p for p in others if not p.is_identity()]
        if not gens or h not in group_closure(gens):
            raise ValueError("h does not lie in the subgroup generated by the other entries")
    walk = _Walk(sys)
    _witness(walk, i, h)
    res = _finish_sys(sys, walk)
    out = res.result
    want_t = list(sys.t)
    want_t[i - 1] = sys.t[i - 1].conjugate(h)
    want_t[i] = sys.t[i].conjugate(h)
    if list(out.t) != want_t or out.lam != sys.lam or out.mu != sys.mu:
        raise VerificationError("main lemma witness changed entries outside the pair")
    return res


# full reduction

def _transitivity_loop(walk: _Walk, hi: int) -> None:
    """Merge orbits of <t_1..t_hi> while the count allows, using a split pair and the main lemma."""
    d = walk.sys.d
    while True:
        window = walk.t[:hi]
        orbs = orbits(list(window))
        if len(orbs) == 1:
            return
        s = product(SymmetricGroup(d), window)
        sig = sum(len(o) - 1 for o in orbs)
        if hi + s.weight() <= 2 * sig:
            return
        _split(walk, 1, hi)
        pair = walk.t[hi - 1]
        a0, b0 = _ends(pair)
        home = next(o for o in orbs if a0 in o)
        other = next(o for o in orbs if o != home)  # orbits are listed largest first
        a, c = home[0], other[0]
        # any h with {a0, b0}^h = {a, c}; the other entries generate all of S_d here
        img = {a0: a, b0: c}
        rest_src = [x for x in range(1, d + 1) if x not in img]
        rest_dst = [x for x in range(1, d + 1) if x not in img.values()]
        img.update(zip(rest_src, rest_dst))
        h = Permutation([img[x] - 1 for x in range(1, d + 1)])
        _witness(walk, hi - 1, h)


def maximize_transitivity(sys: HurwitzSystem) -> ReductionResult:
    """Enlarge the orbits of <t_1..t_n> until n + |s| = 2|Sigma| or the t's are transitive."""
    if not all(p.is_transposition() for p in sys.t):
        raise ValueError("all t entries must be transpositions")
    if monodromy_report(sys).label != "full_symmetric":
        raise RegimeError("monodromy not S_d")
    walk = _Walk(sys)
    _transitivity_loop(walk, sys.n)
    return _finish_sys(sys, walk)


def _kill_handles(walk: _Walk, hi: int) -> None:
    """Reduce every lam_k, mu_k to the identity, in order, keeping <t_1..t_hi> transitive."""
    for k in range(1, walk.sys.g + 1):
        for which in ("lam", "mu"):
            while True:
                _transitivity_loop(walk, hi)
                val = (walk.sys.lam if which == "lam" else walk.sys.mu)[k - 1]
                if val.is_identity():
                    break
                cyc = next(c for c in val.cycles() if len(c) > 1)
                _bring(walk, cyc[0], cyc[1], 1, hi, front=True)
                # with u_{k-1} = 1 (and lam_k = 1 for mu): lam_k -> t_1 lam_k, mu_k -> t_1 mu_k
                walk.do(tau(1, k, "second") if which == "lam" else rho(1, k))
                new = (walk.sys.lam if which == "lam" else walk.sys.mu)[k - 1]
                if new.weight() >= val.weight():
                    raise AssertionError("handle entry did not shrink")


def _conjugation_to(src: Permutation, dst: Permutation) -> Permutation:
    """Some a with src^a = dst (equal cycle types)."""
    d = src.degree
    cs = sorted(src.cycles(include_fixed=True), key=len)
    cd = sorted(dst.cycles(include_fixed=True), key=len)
    img = [0] * d
    for x, y in zip(cs, cd):
        for u, v in zip(x, y):
            img[u - 1] = v - 1
    a = Permutation(img)
    if src.conjugate(a) != dst:
        raise AssertionError("cycle matching failed")
    return a


def _as_transpositions(a: Permutation) -> list[Permutation]:
    """a = (c1 c2)(c1 c3)..(c1 ck) per cycle, in left-to-right product order."""
    d = a.degree
    out = []
    for cyc in a.cycles():
        out += [Permutation.transposition(cyc[0], x, d) for x in cyc[1:]]
    return out


def _special_position(sys: HurwitzSystem) -> int | None:
    odd = [i for i, p in enumerate(sys.t, 1) if not p.is_transposition()]
    if not odd:
        return None
    if len(odd) > 1:
        raise RegimeError("more than one entry is not a transposition")
    return odd[0]


def _reduce_constructive(sys: HurwitzSystem, special: int | None) -> _Walk:
    walk = _Walk(sys)
    n = sys.n
    if special is not None:
        _move_entry(walk, special, n)
        hi = n - 1
    else:
        hi = n
    _transitivity_loop(walk, hi)
    if len(orbits(list(walk.t[:hi]))) != 1:
        raise AssertionError("simple entries did not become transitive")
    _kill_handles(walk, hi)
    if special is not None:
        last = walk.t[n - 1]
        eps_inv = epsilon_of_partition(last.cycle_type()).inverse()
        for x in _as_transpositions(_conjugation_to(last, eps_inv)):
            _transitivity_loop(walk, hi)
            a, b = _ends(x)
            _bring(walk, a, b, 1, hi, front=False)
            walk.do(sigma(hi), sigma(hi))  # (x, t) -> (x', t^x)
        _transitivity_loop(walk, hi)
        if walk.t[n - 1] != eps_inv:
            raise AssertionError("special entry did not reach its normal form")
    _genus0(walk, 1, hi, range(1, sys.d + 1))
    return walk


@lru_cache(maxsize=16)
def _bfs_tree(d: int, n: int, g: int, target: str, tail: tuple | None):
    """Pointers from every class in the target's orbit one move closer to the target."""
    from .engine import Layout, get_table
    from .orbits import GeneratorSet

    layout = Layout(get_table(d), n, g)
    nf = normal_form(target, d, n, g, tail)
    gens = GeneratorSet("tail_fixed") if tail is not None else GeneratorSet("full")
    words = gens.all_words(n, g)
    inverse_id = {w: words.index(word_inverse(w)) for w in words}
    start = int(layout.canonical(layout.table.row_from_system(nf)[None, :])[0])
    nxt: dict[int, tuple[int, int]] = {start: (start, -1)}
    frontier = np.array([start], dtype=np.int64)
    while len(frontier):
        rows = layout.decode(frontier)
        new_codes = []
        for wid, w in enumerate(words):
            codes = layout.canonical(layout.apply(rows, w))
            back = inverse_id[w]
            for src, dst in zip(frontier.tolist(), codes.tolist()):
                if dst not in nxt:
                    nxt[dst] = (src, back)
                    new_codes.append(dst)
        if len(nxt) > FALLBACK_GUARD:
            raise GuardExceeded(f"fallback search exceeded {FALLBACK_GUARD} classes")
        frontier = np.array(sorted(set(new_codes)), dtype=np.int64)
    return layout, start, nxt, words


def _reduce_by_search(sys: HurwitzSystem, target: str, tail) -> _Walk:
    if sys.d > 6:
        raise RegimeError("the search fallback is limited to d <= 6")
    tail_key = tuple(tail.parts) if tail is not None else None
    layout, start, nxt, words = _bfs_tree(sys.d, sys.n, sys.g, target, tail_key)
    code = int(layout.canonical(layout.table.row_from_system(sys)[None, :])[0])
    if code not in nxt:
        raise RegimeError(f"the input is not braid-equivalent to {target}")
    walk = _Walk(sys)
    while code != start:
        code, wid = nxt[code]
        walk.run(words[wid])
    return walk


def full_reduce(sys: HurwitzSystem, target: str = "auto") -> ReductionResult:
    """Certificate from ``sys`` to the class of its regime's normal form."""
    problems = validate(sys)
    if problems:
        raise ValueError(f"invalid system: {problems}")
    if sys.d > 8:
        raise RegimeError("full_reduce is limited to d <= 8")
    special = _special_position(sys)
    tail = sys.t[special - 1].cycle_type() if special is not None else None
    if monodromy_report(sys).label != "full_symmetric":
        raise RegimeError("monodromy not S_d")
    auto = regime_target(sys.d, sys.n, sys.g, tail)
    if target == "auto":
        if auto is None:
            raise RegimeError(f"no normal form is known for d={sys.d}, n={sys.n}, g={sys.g}")
        target = auto
    nf = normal_form(target, sys.d, sys.n, sys.g, tail)
    if target == auto and target in ("eq4.45a", "eq4.49"):
        walk = _reduce_constructive(sys, special)
    else:
        walk = _reduce_by_search(sys, target, tail)
    res = _finish_sys(sys, walk)
    if class_key(res.result) != class_key(nf):
        raise VerificationError(f"reduction ended outside the class of {target}")
    return res
