import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from hurwitz.braid import apply_word, apply_word_seq
from hurwitz.errors import RegimeError
from hurwitz.groups import SymmetricGroup, product
from hurwitz.normal_forms import genus0_pattern, normal_form, z_sequence
from hurwitz.orbits import orbit_members
from hurwitz.permutation import Permutation, group_closure, orbits
from hurwitz.reduce import (
    ReductionResult,
    full_reduce,
    genus0_normal_form,
    main_lemma_witness,
    maximize_transitivity,
    mochizuki_move,
    split_equal_pair,
    tail_double_pair,
)
from hurwitz.system import HurwitzSystem, class_key, enumerate_systems, monodromy_report
from hurwitz.verify import random_reducible_system

import oracles
from samplers import main_lemma_instance


def P(text, d):
    return Permutation.parse(text, d)


def T(d, *texts):
    return tuple(P(x, d) for x in texts)


def S(d, t, lam=(), mu=()):
    return HurwitzSystem.of(d, t, lam, mu)


def _replays(res):
    if isinstance(res.input, HurwitzSystem):
        assert apply_word(res.input, res.certificate) == res.result
    else:
        assert tuple(apply_word_seq(res.input, res.certificate)) == tuple(res.result)
    assert res.verified


def _prod(seq):
    return product(SymmetricGroup(seq[0].degree), seq)


def _random_transitive_seq(rng, d, n):
    """Transposition sequence whose group is transitive on 1..d (rejection sampling)."""
    while True:
        seq = tuple(Permutation.transposition(*rng.sample(range(1, d + 1), 2), d) for _ in range(n))
        if len(orbits(list(seq))) == 1:
            return seq


# mochizuki_move

def test_mochizuki_examples():
    seq = T(3, "(12)", "(23)")
    res = mochizuki_move(seq, 1, 2)
    assert res.certificate == () and res.result == seq
    res = mochizuki_move(seq, 1, 3)
    assert res.result[0] == P("(13)", 3) and 2 <= len(res.certificate) <= 3
    _replays(res)
    res = mochizuki_move(T(4, "(12)", "(23)", "(34)"), 1, 4)
    assert res.result[0] == P("(14)", 4)
    _replays(res)
    back = mochizuki_move(T(4, "(12)", "(23)", "(34)"), 1, 4, position="back")
    assert back.result[-1] == P("(14)", 4)


def test_mochizuki_errors():
    with pytest.raises(ValueError):
        mochizuki_move(T(4, "(12)", "(34)"), 1, 3)
    with pytest.raises(ValueError):
        mochizuki_move(T(3, "(12)"), 1, 1)
    with pytest.raises(ValueError):
        mochizuki_move(T(3, "(12)"), 1, 2, position="middle")


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_mochizuki_keeps_product_and_group(seed):
    rng = random.Random(seed)
    d = rng.randint(2, 6)
    seq = tuple(Permutation.transposition(*rng.sample(range(1, d + 1), 2), d) for _ in range(rng.randint(1, 6)))
    orb = next(o for o in orbits(list(seq)) if len(o) > 1)
    a, b = rng.sample(sorted(orb), 2)
    res = mochizuki_move(seq, a, b, rng.choice(["front", "back"]))
    _replays(res)
    assert _prod(res.result) == _prod(seq)
    assert group_closure(list(res.result)) == group_closure(list(seq))


# genus0_normal_form

def test_genus0_examples():
    seq = T(3, "(12)", "(12)", "(13)", "(13)")
    res = genus0_normal_form(seq)
    assert res.result == seq and res.certificate == ()
    res = genus0_normal_form(T(3, "(13)", "(23)"))
    assert _prod(res.result) == P("(123)", 3)
    assert res.result == T(3, "(12)", "(13)")
    _replays(res)
    assert genus0_normal_form(T(2, "(12)")).result == T(2, "(12)")


def test_genus0_rejects_non_transpositions():
    with pytest.raises(ValueError):
        genus0_normal_form(T(3, "(123)", "(132)"))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_genus0_output_pattern(seed):
    rng = random.Random(seed)
    d = rng.randint(2, 5)
    n = rng.randint(d - 1, 2 * d + 2)
    seq = _random_transitive_seq(rng, d, n)
    res = genus0_normal_form(seq)
    _replays(res)
    s = _prod(seq)
    assert _prod(res.result) == s
    z = z_sequence(s)
    assert list(res.result[:len(z)]) == z
    assert res.result == genus0_pattern(s, n)


def test_genus0_on_partial_support():
    # transitive on {1,2,3} inside S_5
    seq = T(5, "(23)", "(13)", "(12)", "(12)")
    res = genus0_normal_form(seq)
    _replays(res)
    assert _prod(res.result) == _prod(seq)
    assert orbits(list(res.result)) == orbits(list(seq))


# tail_double_pair

def test_tail_double_pair_examples():
    res = tail_double_pair(T(3, "(12)", "(12)", "(13)", "(13)"), 1, 3)
    assert res.result[-2:] == T(3, "(13)", "(13)")
    _replays(res)
    # five entries: an even count of transpositions cannot multiply to (12)
    seq = T(4, "(13)", "(14)", "(12)", "(34)", "(34)")
    assert _prod(seq).cycle_type().parts == (4,)
    seq = T(4, "(12)", "(13)", "(14)", "(14)", "(13)")
    assert _prod(seq) == P("(12)", 4)
    res = tail_double_pair(seq, 3, 4)
    assert res.result[-2:] == T(4, "(34)", "(34)")
    assert _prod(res.result) == P("(12)", 4)
    _replays(res)


def test_tail_double_pair_errors():
    with pytest.raises(ValueError):
        tail_double_pair(T(2, "(12)", "(12)", "(12)"), 1, 2)
    with pytest.raises(ValueError):
        tail_double_pair(T(3, "(12)", "(23)"), 1, 3)
    with pytest.raises(ValueError):
        tail_double_pair(T(4, "(12)", "(12)", "(13)", "(13)"), 1, 4)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_tail_double_pair_random(seed):
    rng = random.Random(seed)
    d = rng.randint(3, 5)
    seq = _random_transitive_seq(rng, d, rng.randint(d, 2 * d + 2))
    s = _prod(seq)
    cycles = [c for c in s.cycles()] + [(x,) for x in range(1, d + 1) if s(x) == x]
    cycles = [tuple(c) for c in cycles]
    if len({frozenset(c) for c in cycles}) < 2:
        return
    c1, c2 = rng.sample(list({frozenset(c) for c in cycles}), 2)
    a, b = rng.choice(sorted(c1)), rng.choice(sorted(c2))
    res = tail_double_pair(seq, a, b)
    _replays(res)
    ab = Permutation.transposition(a, b, d)
    assert res.result[-2:] == (ab, ab)


# split_equal_pair

def test_split_examples():
    res = split_equal_pair(T(2, "(12)", "(12)", "(12)", "(12)"))
    assert res.result[-1] == res.result[-2]
    assert group_closure(list(res.result[:-2])) == group_closure([P("(12)", 2)])
    _replays(res)
    with pytest.raises(ValueError, match="not larger than"):
        split_equal_pair(T(3, "(12)", "(13)"))
    seq = T(3, "(12)", "(12)", "(13)", "(13)", "(12)", "(12)")
    res = split_equal_pair(seq)
    assert res.result[-1] == res.result[-2]
    assert len(orbits(list(res.result[:-2]))) == 1
    _replays(res)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_split_keeps_group(seed):
    rng = random.Random(seed)
    d = rng.randint(2, 5)
    seq = tuple(Permutation.transposition(*rng.sample(range(1, d + 1), 2), d) for _ in range(rng.randint(2, 8)))
    sig = sum(len(o) - 1 for o in orbits(list(seq)))
    if len(seq) + _prod(seq).weight() <= 2 * sig:
        with pytest.raises(ValueError):
            split_equal_pair(seq)
        return
    res = split_equal_pair(seq)
    _replays(res)
    assert res.result[-1] == res.result[-2]
    assert group_closure(list(res.result[:-2])) == group_closure(list(seq))


# main lemma

def test_main_lemma_examples():
    sys = S(3, ["(12)", "(12)"], ["(123)"], ["()"])
    assert main_lemma_witness(sys, 1, Permutation.identity(3)).certificate == ()
    res = main_lemma_witness(sys, 1, P("(123)", 3))
    assert res.result == S(3, ["(23)", "(23)"], ["(123)"], ["()"])
    _replays(res)
    sys = S(3, ["(12)", "(12)", "(13)", "(13)"], ["()"], ["()"])
    res = main_lemma_witness(sys, 1, P("(13)", 3))
    assert res.result == S(3, ["(23)", "(23)", "(13)", "(13)"], ["()"], ["()"])
    _replays(res)


def test_main_lemma_errors():
    sys = S(3, ["(12)", "(13)", "(13)", "(12)"], ["()"], ["()"])
    with pytest.raises(ValueError):
        main_lemma_witness(sys, 1, P("(13)", 3))
    sys = S(4, ["(12)", "(12)", "(13)", "(13)"], ["()"], ["()"])
    with pytest.raises(ValueError, match="subgroup"):
        main_lemma_witness(sys, 1, P("(14)", 4))
    with pytest.raises(ValueError):
        main_lemma_witness(sys, 4, P("(13)", 4))


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**9))
def test_main_lemma_frame(seed):
    sys, i, h = main_lemma_instance(random.Random(seed))
    res = main_lemma_witness(sys, i, h)
    _replays(res)
    for j in range(sys.n):
        if j not in (i - 1, i):
            assert res.result.t[j] == sys.t[j]
    assert res.result.t[i - 1] == sys.t[i - 1].conjugate(h)
    assert res.result.lam == sys.lam and res.result.mu == sys.mu


# maximize_transitivity

@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_maximize_transitivity_stopping_rule(seed):
    rng = random.Random(seed)
    d = rng.randint(3, 5)
    n = 2 * rng.randint(1, d - 1)
    sys = random_reducible_system(rng, d, n, 1) if n >= 2 * d - 6 and (d, n) != (5, 2) else None
    if sys is None:
        return
    res = maximize_transitivity(sys)
    _replays(res)
    out = res.result
    orb = orbits(list(out.t))
    sig = sum(len(o) - 1 for o in orb)
    s = _prod(out.t)
    assert len(orb) == 1 or out.n + s.weight() == 2 * sig == 2 * (d - len(orb))
    assert sig >= sum(len(o) - 1 for o in orbits(list(sys.t)))


def test_maximize_transitivity_rejects_small_monodromy():
    with pytest.raises(RegimeError):
        maximize_transitivity(S(4, ["(34)", "(34)"], ["()"], ["(13)(24)"]))


# full_reduce

def test_full_reduce_examples():
    nf = S(3, ["(12)", "(12)", "(13)", "(13)"], ["()"], ["()"])
    for sys in itertools.islice((s for s in enumerate_systems(3, 4, 1)
                                  if monodromy_report(s).label == "full_symmetric"), 0, 400, 37):
        res = full_reduce(sys)
        assert class_key(res.result) == class_key(nf)
        _replays(res)
    res = full_reduce(S(3, ["(13)", "(13)"], ["()"], ["(12)"]))
    assert class_key(res.result) == class_key(S(3, ["(12)", "(12)"], ["()"], ["(13)"]))
    res = full_reduce(S(4, ["(12)", "(12)"], ["()"], ["(134)"]))
    assert res.certificate == ()


def test_full_reduce_errors():
    with pytest.raises(RegimeError, match="monodromy not S_d"):
        full_reduce(S(4, ["(34)", "(34)"], ["()"], ["(13)(24)"]))
    with pytest.raises(ValueError):
        full_reduce(S(3, ["(12)", "(13)"], ["()"], ["()"]))
    with pytest.raises(RegimeError):
        full_reduce(S(6, ["(12)", "(12)"], ["()"], ["(13456)"]))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_full_reduce_lands_in_engine_orbit(seed):
    rng = random.Random(seed)
    d, n, g = rng.choice([(3, 4, 1), (3, 2, 1), (4, 2, 1), (4, 4, 1), (3, 4, 0), (4, 6, 0)])
    sys = random_reducible_system(rng, d, n, g)
    res = full_reduce(sys)
    _replays(res)
    members = {class_key(HurwitzSystem.deserialize(m)).bytes for m in orbit_members(sys)} if (d, n) != (4, 6) else None
    if members is not None:
        assert class_key(res.result).bytes in members


def test_full_reduce_explicit_target_uses_search():
    sys = S(3, ["(13)", "(13)", "(12)", "(12)"], ["()"], ["()"])
    res = full_reduce(sys, target="eq4.45a")
    _replays(res)
    assert class_key(res.result) == class_key(normal_form("eq4.45a", 3, 4, 1))


# JSON

def test_reduction_result_json_round_trip():
    res = full_reduce(S(3, ["(23)", "(23)"], ["()"], ["(12)"]))
    text = res.to_json()
    again = ReductionResult.from_json(text)
    assert again == res
    assert again.to_json() == text
    assert set(res.to_dict()) == {"input", "result", "certificate", "verified"}
    seq_res = mochizuki_move(T(3, "(12)", "(23)"), 1, 3)
    assert set(seq_res.to_dict()) == {"input", "result", "certificate", "verified"}


def test_oracle_agrees_on_conjugation_in_main_lemma():
    sys = S(4, ["(12)", "(12)", "(13)", "(14)", "(14)", "(13)"], ["()"], ["()"])
    h = P("(134)", 4)
    res = main_lemma_witness(sys, 1, h)
    assert res.result.t[0].images == oracles.conjugate(sys.t[0].images, h.images)
