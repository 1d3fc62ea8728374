"""Acceptance criteria: exact integer counts on desk-scale instances.

Each test records one PASS/FAIL line through the ``report`` fixture; the lines
are repeated in an "acceptance criteria" section at the end of the run.
"""
import itertools
import random
import time

import numpy as np
import pytest

from hurwitz.braid import apply_word, apply_word_seq
from hurwitz.normal_forms import normal_form, regime_target
from hurwitz.orbits import (
    component_table,
    components,
    expected_imprimitive_components,
    reduced_equals_full,
)
from hurwitz.permutation import Partition, Permutation, group_closure, orbits
from hurwitz.reduce import full_reduce, main_lemma_witness, mochizuki_move
from hurwitz.system import SystemFilter, class_key, monodromy_report
from hurwitz.verify import run_suite

from samplers import main_lemma_instance


def _count(d, n, g, monodromy, tail=None):
    flt = SystemFilter(special_tail=Partition(tail) if tail else None, monodromy=monodromy)
    return len(components(d, n, g, flt))


def _check_counts(report, name, cases):
    """cases: (label, got, want); every count must match exactly."""
    bad = [f"{label}: {got} != {want}" for label, got, want in cases if got != want]
    detail = "; ".join(f"{label}={got}" for label, got, _ in cases)
    assert report(name, not bad, detail if not bad else "; ".join(bad)), bad


def test_criterion_01_move_consistency(report):
    results = run_suite("moves", samples=10_000, seed=1)
    failed = [r.line() for r in results if not r.passed]
    checks = sum(r.checked for r in results)
    assert report("criterion 1 move consistency (10^4 systems)", not failed,
                  f"{len(results)} properties, {checks} checks" if not failed else "; ".join(failed)), failed


def test_criterion_02_degree_two(report):
    cases = [(f"(2,{n},{g})", _count(2, n, g, "any"), 1) for n in (2, 4, 6) for g in (1, 2)]
    _check_counts(report, "criterion 2 d=2 single component", cases)


def test_criterion_03_genus_zero(report):
    cases = [("(3,4,0)", _count(3, 4, 0, "transitive"), 1), ("(4,6,0)", _count(4, 6, 0, "transitive"), 1)]
    _check_counts(report, "criterion 3 genus 0, sigma moves", cases)


def test_criterion_04_large_n(report):
    cases = [(f"({d},{n},{g})", _count(d, n, g, "full_symmetric"), 1)
             for d, n, g in [(3, 4, 1), (3, 6, 1), (4, 6, 1), (3, 4, 2)]]
    _check_counts(report, "criterion 4 n >= 2d-2", cases)


def test_criterion_05_special_tail(report):
    # n counts the simple branch points; the special point is one more entry
    cases = [("(3,4+1,1,[3])", _count(3, 5, 1, "full_symmetric", [3]), 1),
             ("(4,6+1,1,[2,2])", _count(4, 7, 1, "full_symmetric", [2, 2]), 1)]
    _check_counts(report, "criterion 5 special tail", cases)


def test_criterion_06_n_equals_2d_minus_4(report):
    cases = [("(3,2,1)", _count(3, 2, 1, "full_symmetric"), 1), ("(4,4,1)", _count(4, 4, 1, "full_symmetric"), 1)]
    _check_counts(report, "criterion 6 n = 2d-4", cases)


def test_criterion_07_n_equals_2d_minus_6(report):
    cases = [("(4,2,1)", _count(4, 2, 1, "full_symmetric"), 1), ("(5,4,1)", _count(5, 4, 1, "full_symmetric"), 1)]
    _check_counts(report, "criterion 7 n = 2d-6", cases)


def test_criterion_08_imprimitive(report):
    cases = [
        ("(4,2,1) imprimitive", _count(4, 2, 1, "imprimitive_transitive"), expected_imprimitive_components(4)),
        ("(4,4,1) imprimitive", _count(4, 4, 1, "imprimitive_transitive"), expected_imprimitive_components(4)),
        ("(6,2,1) imprimitive", _count(6, 2, 1, "imprimitive_transitive"), expected_imprimitive_components(6)),
        ("(4,2,1) transitive", _count(4, 2, 1, "transitive"), 4),
    ]
    assert [want for *_, want in cases] == [3, 3, 7, 4]
    _check_counts(report, "criterion 8 imprimitive components", cases)


def _mochizuki_exhaustive():
    calls = 0
    for d in range(2, 6):
        trans = [Permutation.transposition(a, b, d) for a in range(1, d + 1) for b in range(a + 1, d + 1)]
        for n in range(1, 5):
            for seq in itertools.product(trans, repeat=n):
                for orb in orbits(list(seq)):
                    for a, b in itertools.permutations(sorted(orb), 2):
                        for pos in ("front", "back"):
                            res = mochizuki_move(seq, a, b, pos)
                            end = res.result[0] if pos == "front" else res.result[-1]
                            if end != Permutation.transposition(a, b, d) or not res.verified:
                                raise AssertionError((seq, a, b, pos))
                            calls += 1
    return calls


def _mochizuki_sampled(rng, samples):
    for _ in range(samples):
        d = rng.randint(2, 5)
        n = rng.randint(5, 6)
        seq = tuple(Permutation.transposition(*rng.sample(range(1, d + 1), 2), d) for _ in range(n))
        orb = next(o for o in orbits(list(seq)) if len(o) > 1)
        a, b = rng.sample(sorted(orb), 2)
        res = mochizuki_move(seq, a, b, rng.choice(["front", "back"]))
        assert tuple(apply_word_seq(seq, res.certificate)) == res.result
        assert group_closure(list(res.result)) == group_closure(list(seq))


def test_criterion_09_certificates(report):
    suite = run_suite("reducers", samples=300, seed=9)
    failed = [r.line() for r in suite if not r.passed]
    rng = random.Random(909)
    frame_ok = 0
    for _ in range(1000):
        sys, i, h = main_lemma_instance(rng)
        res = main_lemma_witness(sys, i, h)
        out = res.result
        ok = (apply_word(sys, res.certificate) == out and out.lam == sys.lam and out.mu == sys.mu
              and all(out.t[j] == sys.t[j] for j in range(sys.n) if j not in (i - 1, i))
              and out.t[i - 1] == sys.t[i - 1].conjugate(h) and out.t[i] == sys.t[i].conjugate(h))
        frame_ok += ok
    calls = _mochizuki_exhaustive()
    _mochizuki_sampled(random.Random(99), 2000)
    ok = not failed and frame_ok == 1000
    assert report("criterion 9 certificates", ok,
                  f"reducer suite {len(suite)} properties; main lemma frame {frame_ok}/1000; "
                  f"mochizuki {calls} exhaustive calls (n <= 4) + 2000 sampled (n = 5, 6)"), failed


def _full_symmetric_classes(d, n, g):
    table = component_table(d, n, g)
    layout = table.layout
    keep = []
    for comp, (code, _, _) in enumerate(table.summary()):
        rep = layout.table.system_from_row(layout.decode(np.array([code]))[0], n, g)
        if monodromy_report(rep).label == "full_symmetric":
            keep.append(comp)
    rows = layout.decode(table.codes[np.isin(table.labels, keep)])
    return [layout.table.system_from_row(r, n, g) for r in rows]


@pytest.mark.parametrize("d,n,g", [(3, 4, 1), (3, 6, 1), (4, 6, 1), (3, 4, 2), (3, 2, 1), (4, 4, 1),
                                   (4, 2, 1), (5, 4, 1)])
def test_criterion_10_full_reduce(report, d, n, g):
    target = regime_target(d, n, g)
    nf_key = class_key(normal_form(target, d, n, g))
    start = time.perf_counter()
    classes = _full_symmetric_classes(d, n, g)
    failures = 0
    for sys in classes:
        res = full_reduce(sys)
        if not (res.verified and class_key(res.result) == nf_key and apply_word(sys, res.certificate) == res.result):
            failures += 1
    assert report(f"criterion 10 full_reduce ({d},{n},{g}) -> {target}", failures == 0 and len(classes) > 0,
                  f"{len(classes) - failures}/{len(classes)} classes reduced and replayed "
                  f"in {time.perf_counter() - start:.0f}s"), failures


def test_criterion_11_reduced_generators(report):
    cases = []
    for d, n, g in [(3, 2, 1), (3, 4, 1), (2, 4, 2)]:
        for a in range(1, n + 1):
            for b in range(1, n + 1):
                cases.append((f"({d},{n},{g}) a={a} b={b}", reduced_equals_full(d, n, g, a=a, b=b)))
    bad = [label for label, same in cases if not same]
    assert report("criterion 11 reduced generators equal full", not bad,
                  f"{len(cases)} (a,b) choices agree" if not bad else "differs at " + ", ".join(bad)), bad
