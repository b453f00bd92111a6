from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import alternating_form_mod2
from strategies import random_manifold, random_z2_extended
from swmod2.classcalc import QuadForm
from swmod2.errors import (
    DimensionMismatch,
    HypothesisNotMet,
    UnsupportedPrecision,
    ValidationFailed,
    WrongBPlus,
)
from swmod2.f2ring import Ring
from swmod2.swspin import (
    ManifoldData,
    Verdict,
    any_nonzero_sw,
    compute_report,
    equivariant_segre,
    genus_bound,
    hyperelliptic,
    k3,
    kodaira_thurston,
    pin2_degree,
    q2_eval,
    q3_eval,
    smoothability_obstruction,
    sw_basic,
    sw_pin2,
    torus4,
    twist_b2,
    twist_defect_b1,
    validate,
)

seeds = st.integers(0, 2 ** 32 - 1)


def test_golden_sw1():
    assert str(sw_basic(k3(), 0)) == "1"
    assert str(sw_basic(torus4(), 0)) == "x1^x2^x3^x4"
    assert str(sw_basic(kodaira_thurston(), 0)) == "x1^x2^x3"
    assert str(sw_basic(hyperelliptic(), 0)) == "x1^x2"


@pytest.mark.parametrize("md, fragment", [
    (ManifoldData("X", 0, 3, -8), "multiple of 16"),
    (ManifoldData("X", 0, 3, -32), "signature 0 or -16"),
    (ManifoldData("X", 0, 2, -16, q2=(), q3=()), "signature 0"),
    (ManifoldData("X", 4, 2, 0, {(1, 2, 3, 4): 1}, q2=(), q3=()), "even"),
    (ManifoldData("X", 4, 3, -16, {(1, 2, 3, 4): 1}), "even"),
    (ManifoldData("X", 3, 1, 0, q2=[(1, 2)], q3=[(1, 2, 3)]), "q3 table must vanish"),
    (ManifoldData("X", 2, 1, 0), "needs the q2 table"),
    (ManifoldData("X", 3, 2, 0, q2=()), "needs both"),
    (ManifoldData("X", 8, 3, 0, {(1, 2, 3, 4): 1, (5, 6, 7, 8): 1}), "s_4(D) = 0"),
    (ManifoldData("X", 0, 0, 0), "positive"),
])
def test_validate_rejects(md, fragment):
    problems = validate(md)
    assert any(fragment in p for p in problems), problems
    with pytest.raises(ValidationFailed):
        sw_basic(md, 0)


def test_validate_does_not_cite_numbers():
    md = ManifoldData("X", 4, 3, -16, {(1, 2, 3, 4): 1})
    assert not any("Theorem" in p or "Lemma" in p for p in validate(md))


def test_small_b1_tables_default_to_empty():
    md = ManifoldData("X", 1, 1, 0)
    assert md.q2 == frozenset() and md.q3 == frozenset()
    assert not validate(md)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_vanishing_properties(seed):
    md = random_manifold(random.Random(seed), b1_max=6)
    for m in range(1, 5):
        assert not sw_basic(md, m)
    if md.b_plus > 3:
        assert not sw_basic(md, 0)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_pin2_degrees_and_precision(seed):
    md = random_manifold(random.Random(seed), b1_max=6)
    for j in range(3):
        for a in range(3):
            try:
                pv = sw_pin2(md, a, j)
            except UnsupportedPrecision:
                assert md.b_plus <= 2
                continue
            assert 0 <= pv.exact_below <= md.b_plus
            assert not pv.value or pv.value.degrees() == {pin2_degree(md, a, j)}
            assert pv.value.max_u() is None or pv.value.max_u() < pv.exact_below


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_pin2_u_shift(seed):
    # raising a by one multiplies by u wherever both sides are known
    md = random_manifold(random.Random(seed), b1_max=5, b_plus_max=8)
    for j in range(2):
        try:
            p0, p1 = sw_pin2(md, 0, j), sw_pin2(md, 1, j)
        except UnsupportedPrecision:
            continue
        mod = min(p0.exact_below + 1, p1.exact_below)
        assert (p0.value * md.pin2_ring().u()).truncate_u(mod) == p1.value.truncate_u(mod)


def test_k3_pin2():
    for a in range(3):
        pv = sw_pin2(k3(), a, 0)
        assert pv.exact and pv.value == Ring(u_trunc=3).u(a)
        assert not sw_pin2(k3(), a, 1).value


def test_torus_pin2_precision():
    pv = sw_pin2(torus4(), 0, 0)
    assert pv.exact_below == 1
    assert str(pv) == "x1^x2^x3^x4 (mod u^1)"
    full = sw_pin2(torus4(q2=[(1, 2)], q3=[(1, 2, 3)]), 0, 0)
    assert full.exact and str(full) == "x1^x2^x3^x4 + u.x1^x2^x3 + u^2.x1^x2"


def test_unsupported_precision_for_small_b_plus():
    md = ManifoldData("X", 8, 2, 0, q2=(), q3=())
    with pytest.raises(UnsupportedPrecision):
        sw_pin2(md, 0, 1)


def test_equivariant_segre_knowledge():
    es = equivariant_segre(torus4(), 1)
    assert es.t_part is None and es.r_part is None
    assert equivariant_segre(torus4(), 2).exact_below == 3
    assert equivariant_segre(hyperelliptic(), 1).t_part is not None


def test_q_evaluations():
    he = hyperelliptic()
    assert q2_eval(he, [1, 0], [0, 1]) == 1
    assert q2_eval(he, [1, 1], [1, 1]) == 0
    kt = kodaira_thurston()
    assert q3_eval(kt, [1, 0, 0], [0, 1, 0], [0, 0, 1]) == 1
    assert q3_eval(kt, [1, 0, 0], [1, 0, 0], [0, 0, 1]) == 0
    with pytest.raises(DimensionMismatch):
        q2_eval(he, [1], [0, 1])


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_twist_b2_flips_predicted_entries(seed):
    rng = random.Random(seed)
    md = random_z2_extended(rng, rng.randint(3, 5), rng.randint(1, 3))
    A = [rng.randint(0, 1) for _ in range(md.z2_rank)]
    twisted = twist_b2(md, A)
    entries = dict(md.z2_quad.entries)
    flipped = twisted.q3 ^ md.q3
    for idx in __import__("itertools").combinations(range(1, md.b1 + 1), 3):
        units = [[1 if t == i else 0 for t in range(1, md.z2_rank + 1)] for i in idx]
        assert (idx in flipped) == bool(alternating_form_mod2(entries, [A, *units]))
    assert twist_b2(twisted, A) == md
    assert not validate(twisted)


@settings(max_examples=100, deadline=None)
@given(seeds)
def test_twist_defect_b1_matches_expansion(seed):
    rng = random.Random(seed)
    md = random_z2_extended(rng, rng.randint(2, 4), rng.randint(1, 3), b_plus=1)
    vec = lambda n: [rng.randint(0, 1) for _ in range(n)]
    A, B = vec(md.z2_rank), vec(md.z2_rank)
    a, b = vec(md.b1), vec(md.b1)
    pad = [0] * (md.z2_rank - md.b1)
    want = alternating_form_mod2(dict(md.z2_quad.entries), [A, B, a + pad, b + pad])
    assert twist_defect_b1(md, A, B, a, b) == want


def test_twist_wrong_b_plus():
    with pytest.raises(WrongBPlus):
        twist_b2(k3(), [])
    with pytest.raises(WrongBPlus):
        twist_defect_b1(k3(), [], [], [], [])


def test_nonvanishing_and_genus():
    assert any_nonzero_sw(k3())[0]
    assert any_nonzero_sw(torus4())[0]
    ok, why = any_nonzero_sw(ManifoldData("S", 0, 4, -16))
    assert not ok and "b_plus = 4" in why
    assert genus_bound(k3(), 4) == 3
    with pytest.raises(HypothesisNotMet):
        genus_bound(ManifoldData("S", 0, 5, 0), 2)
    z2 = ManifoldData("Z", 2, 1, 0, q2=(), z2_rank=4, z2_quad=QuadForm(4, {(1, 2, 3, 4): 1}))
    ok, why = any_nonzero_sw(z2)
    assert ok and "A = e3" in why


def test_obstruction():
    quad = QuadForm(4, {(1, 2, 3, 4): 1})
    assert smoothability_obstruction(4, 3, -16, quad) is Verdict.OBSTRUCTED
    assert smoothability_obstruction(4, 3, 0, quad) is Verdict.NO_OBSTRUCTION
    assert smoothability_obstruction(0, 3, -16, QuadForm(0)) is Verdict.NO_OBSTRUCTION


def test_compute_report_ranges():
    rep = compute_report(torus4())
    assert list(rep.basic) == [0]
    # degree 4j + 4 + a exceeds b1 + b_plus - 1 = 6 once j >= 1
    assert set(rep.pin2) == {(a, 0) for a in range(3)}
    bad = compute_report(ManifoldData("X", 0, 3, -8))
    assert bad.diagnostics and not bad.basic
