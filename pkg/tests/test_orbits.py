import random

import numpy as np
import pytest

from hurwitz.braid import all_generators, apply_move
from hurwitz.engine import Layout, get_table
from hurwitz.errors import GuardExceeded
from hurwitz.normal_forms import (
    NORMAL_FORMS,
    genus0_pattern,
    normal_form,
    regime_target,
    z_sequence,
)
from hurwitz.orbits import (
    CSV_COLUMNS,
    GeneratorSet,
    component_table,
    components,
    expected_imprimitive_components,
    orbit,
    orbit_members,
    reduced_equals_full,
    reports_to_csv,
    reports_to_json,
)
from hurwitz.permutation import Partition, Permutation
from hurwitz.system import HurwitzSystem, SystemFilter, class_key, conjugate_system, monodromy_report, validate

import oracles


def S(d, t, lam=(), mu=()):
    return HurwitzSystem.of(d, t, lam, mu)


def _oracle_moves(gens):
    def moves(state):
        ts, lam, mu = state
        d = len(ts[0])
        sys = HurwitzSystem(d, tuple(map(Permutation, ts)), tuple(map(Permutation, lam)), tuple(map(Permutation, mu)))
        out = []
        for word in gens.words(sys.n, sys.g):
            nxt = sys
            for gen in word:
                nxt = apply_move(nxt, gen)
            out.append((tuple(p.images for p in nxt.t), tuple(p.images for p in nxt.lam),
                        tuple(p.images for p in nxt.mu)))
        return out
    return moves


# permutation table and layout

def test_rank_order_is_lexicographic():
    table = get_table(4)
    perms = [table.perm(r) for r in range(table.size)]
    assert [p.images for p in perms] == sorted(p.images for p in perms)
    assert table.rank_of(Permutation.identity(4)) == 0


def test_table_products_match_permutations():
    table = get_table(4)
    rng = random.Random(0)
    for _ in range(200):
        a, b = rng.randrange(24), rng.randrange(24)
        assert table.perm(int(table.MUL[a, b])) == table.perm(a) * table.perm(b)
        assert table.perm(int(table.INV[a])) == table.perm(a).inverse()


def test_layout_round_trip_and_canonical():
    layout = Layout(get_table(3), 4, 1)
    sys = S(3, ["(12)", "(23)", "(13)", "(12)"], ["(123)"], ["(12)"])
    sys = HurwitzSystem(3, sys.t, sys.lam, sys.mu)
    row = layout.table.row_from_system(sys)[None, :]
    code = layout.encode(row)
    assert layout.table.system_from_row(layout.decode(code)[0], 4, 1) == sys
    canon = layout.canonical(row)[0]
    assert layout.table.system_from_row(layout.decode(np.array([canon]))[0], 4, 1) == class_key(sys).representative()


# orbit and components examples

def test_orbit_examples():
    assert orbit(S(2, ["(12)", "(12)"], ["()"], ["()"]), mode="systems").orbit_size == 4
    assert orbit(S(2, ["(12)", "(12)"]), mode="systems").orbit_size == 1
    rep = orbit(S(3, ["(12)", "(12)"], ["()"], ["(13)"]), mode="classes")
    full = [r for r in components(3, 2, 1, SystemFilter(monodromy="full_symmetric"))]
    assert len(full) == 1 and rep.orbit_size == full[0].orbit_size == 16
    assert rep.normal_form_matched == "eq5.65bis"


def test_orbit_guard():
    with pytest.raises(GuardExceeded):
        orbit_members(S(3, ["(12)", "(12)", "(13)", "(13)"], ["()"], ["()"]), guard=5)


@pytest.mark.parametrize("d,n,g,wanted", [
    (2, 2, 1, "any"), (2, 4, 1, "any"), (3, 2, 1, "any"), (3, 4, 0, "transitive"),
    (3, 2, 1, "full_symmetric"), (2, 2, 2, "any"), (4, 2, 1, "transitive"),
])
def test_component_counts_match_union_find_oracle(d, n, g, wanted):
    want = oracles.component_count(d, n, g, _oracle_moves(GeneratorSet()), wanted)
    got = components(d, n, g, SystemFilter(monodromy=wanted))
    assert len(got) == want


def test_special_tail_matches_oracle():
    tail = Partition([3])
    want = oracles.component_count(3, 3, 1, _oracle_moves(GeneratorSet("tail_fixed")), "full_symmetric", tail=(3,))
    got = components(3, 3, 1, SystemFilter(special_tail=tail, monodromy="full_symmetric"))
    assert len(got) == want


def test_component_examples():
    for n in (2, 4):
        assert len(components(2, n, 1)) == 1
    assert len(components(4, 2, 1, SystemFilter(monodromy="full_symmetric"))) == 1
    assert len(components(4, 2, 1, SystemFilter(monodromy="imprimitive_transitive"))) == 3


def test_sizes_sum_to_total_and_systems_mode():
    total = len(oracles.systems(3, 2, 1))
    table = component_table(3, 2, 1, mode="systems")
    assert sum(s for _, s, _ in table.summary()) == len(table.codes) == total
    cls = components(3, 2, 1, mode="classes")
    sysm = components(3, 2, 1, mode="systems")
    assert len(cls) <= len(sysm)
    assert sum(r.orbit_size for r in sysm) == total


def test_systems_orbit_size_is_conjugation_invariant():
    rng = random.Random(5)
    for sys in [S(3, ["(12)", "(12)"], ["()"], ["(13)"]), S(3, ["(12)", "(13)", "(13)", "(12)"])]:
        s = Permutation(rng.sample(range(3), 3))
        assert orbit(sys, mode="systems").orbit_size == orbit(conjugate_system(sys, s), mode="systems").orbit_size


def test_monodromy_constant_on_orbits():
    rng = random.Random(1)
    for rep in components(4, 2, 1):
        sys = rep.representative
        gens = all_generators(sys.n, sys.g)
        for _ in range(100):
            sys = apply_move(sys, rng.choice(gens))
            assert monodromy_report(sys).label == rep.monodromy.label


def test_determinism_and_jobs():
    a = reports_to_csv(components(3, 4, 1, jobs=1))
    b = reports_to_csv(components(3, 4, 1, jobs=3))
    assert a == b == reports_to_csv(components(3, 4, 1))


def test_engine_agrees_with_single_orbit_search():
    for rep in components(3, 4, 0, SystemFilter(monodromy="transitive")):
        assert orbit(rep.representative).orbit_size == rep.orbit_size


def test_reduced_generators():
    assert reduced_equals_full(3, 2, 1, a=1, b=1)
    assert reduced_equals_full(2, 2, 1, a=2, b=1)
    assert reduced_equals_full(3, 4, 1, a=1, b=4)


def test_generator_set_parsing():
    assert GeneratorSet.parse("full") == GeneratorSet()
    assert GeneratorSet.parse("reduced:1,2") == GeneratorSet("reduced", 1, 2)
    assert str(GeneratorSet.parse("tail-fixed")) == "tail-fixed"
    with pytest.raises(ValueError):
        GeneratorSet.parse("half")
    with pytest.raises(ValueError):
        GeneratorSet("reduced", 0, 1)
    with pytest.raises(ValueError):
        GeneratorSet("reduced", 3, 1).words(2, 1)
    with pytest.raises(ValueError):
        component_table(3, 3, 1, SystemFilter(special_tail=Partition([3])), GeneratorSet())


def _hnf_count(m):
    return sum(1 for a in range(1, m + 1) for b in range(1, m + 1) if a * b == m for _ in range(b))


def test_expected_imprimitive_components():
    assert expected_imprimitive_components(4) == 3
    assert expected_imprimitive_components(6) == 7
    for p in (2, 3, 5, 7, 11):
        assert expected_imprimitive_components(p) == 0
    for d in range(2, 30):
        assert expected_imprimitive_components(d) == sum(_hnf_count(m) for m in range(2, d) if d % m == 0)
    with pytest.raises(ValueError):
        expected_imprimitive_components(4, g=2)


def test_csv_and_json_outputs():
    reps = components(4, 2, 1, SystemFilter(monodromy="transitive"))
    text = reports_to_csv(reps)
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert len(lines) == 1 + 4
    assert lines[1].split(",")[3] == "full_symmetric"
    assert "eq6.81" in lines[1]
    assert reports_to_json(reps) == reports_to_json(components(4, 2, 1, SystemFilter(monodromy="transitive")))
    for rep in reps:
        again = HurwitzSystem.deserialize(bytes.fromhex(rep.key_hex))
        assert validate(again) == [] and monodromy_report(again).label == rep.monodromy.label


# normal forms

def P(text, d):
    return Permutation.parse(text, d)


def test_z_sequence_examples():
    assert z_sequence(P("(123)", 3)) == [P("(12)", 3), P("(13)", 3)]
    assert z_sequence(Permutation.identity(3)) == []
    assert z_sequence(P("(12)", 2)) == [P("(12)", 2)]


def test_genus0_pattern():
    ident = Permutation.identity(3)
    assert genus0_pattern(ident, 4) == (P("(12)", 3), P("(12)", 3), P("(13)", 3), P("(13)", 3))
    assert genus0_pattern(ident, 3) is None
    assert genus0_pattern(P("(123)", 3), 4) == (P("(12)", 3), P("(13)", 3), P("(12)", 3), P("(12)", 3))


def test_normal_form_instances():
    assert normal_form("eq4.45a", 3, 4, 1) == S(3, ["(12)", "(12)", "(13)", "(13)"], ["()"], ["()"])
    assert normal_form("eq5.65bis", 3, 2, 1) == S(3, ["(12)", "(12)"], ["()"], ["(13)"])
    assert normal_form("eq6.81", 4, 2, 1) == S(4, ["(12)", "(12)"], ["()"], ["(134)"])
    nf = normal_form("eq4.49", 3, 5, 1, Partition([3]))
    assert nf.t[-1] == P("(132)", 3) and validate(nf) == []
    for name, build in NORMAL_FORMS.items():
        for d in range(2, 6):
            for n in range(1, 2 * d + 2):
                for g in range(0, 3):
                    nf = build(d, n, g, Partition([d]) if name == "eq4.49" else None)
                    if nf is not None:
                        assert validate(nf) == [], (name, d, n, g)
                        assert monodromy_report(nf).label == "full_symmetric", (name, d, n, g)
    with pytest.raises(ValueError):
        normal_form("eq6.81", 4, 4, 1)
    with pytest.raises(ValueError):
        normal_form("eq9.99", 4, 4, 1)


def test_regime_target():
    assert regime_target(3, 4, 1) == "eq4.45a"
    assert regime_target(4, 4, 1) == "eq5.65bis"
    assert regime_target(4, 2, 1) == "eq6.81"
    assert regime_target(5, 4, 1) == "eq6.81"
    assert regime_target(6, 2, 1) is None
    assert regime_target(4, 7, 1, Partition([2, 2])) == "eq4.49"
    assert regime_target(4, 6, 1, Partition([2, 2])) is None
