from __future__ import annotations

import random

import pytest
from hypothesis import given, settings, strategies as st

from swmod2.classcalc import EquivariantSegre
from swmod2.errors import MissingSegre, NoChamber, NotDivisibleByU3
from swmod2.f2ring import BaseAlgebra
from swmod2.families import (
    FamilyData,
    constraint_check,
    equivariant_euler_hplus,
    families_sw,
    families_sw_pin2,
    family_ring,
    point_family,
)
from swmod2.swspin import ManifoldData, sw_basic, sw_pin2, torus4

W5 = BaseAlgebra.truncated_polynomial("w", 5)


def w5_family(w_top: str | None = None, base: BaseAlgebra = W5) -> FamilyData:
    ring = family_ring(base)
    w = [ring.one(), ring.basis_element("w"), ring.zero(), ring.zero(),
         ring.basis_element(w_top) if w_top else ring.zero()]
    return FamilyData("W5", base, 4, -16, 0, w)


def u_powers(el) -> set[int]:
    return {m[2] for m in el.terms}


@pytest.mark.parametrize("b_plus, sigma", [(b, s) for b in range(1, 9) for s in (0, -16, -32)
                                           if not (b <= 2 and s) and not (b == 3 and s == -32)])
def test_point_family_matches_swspin(b_plus, sigma):
    fd = point_family(b_plus, sigma)
    md = ManifoldData("P", 0, b_plus, sigma)
    assert constraint_check(fd) == []
    for j in range(4):
        assert u_powers(families_sw_pin2(fd, j)) == u_powers(sw_pin2(md, 0, j).value)
        assert u_powers(families_sw(fd, 2 * j)) == u_powers(sw_basic(md, 0) if j == 0 else sw_basic(md, 2 * j))


def test_w5_example():
    fd = w5_family()
    assert constraint_check(fd) == []
    assert str(equivariant_euler_hplus(fd)) == "u^3.w + u^4"
    assert str(families_sw_pin2(fd, 0)) == "w + u"
    assert str(families_sw(fd, 0)) == "w"


def test_w4_violation_flagged():
    problems = constraint_check(w5_family("w^4"))
    assert any("w_4" in p for p in problems)
    assert any("not 0 mod u^3" in p for p in problems)


def test_no_chamber():
    fd = w5_family("w^4")
    with pytest.raises(NoChamber):
        families_sw(fd, 0)


def test_not_divisible():
    ring = family_ring(W5)
    w = [ring.one(), ring.basis_element("w"), ring.basis_element("w^2")]
    # s_0 = 1 times e = u^2 + u.w + w^2 has a u^0 term
    fd = FamilyData("D", W5, 2, -16, 0, w)
    with pytest.raises(NotDivisibleByU3):
        families_sw_pin2(fd, 0)


def test_missing_segre():
    fd = w5_family()
    with pytest.raises(MissingSegre):
        families_sw_pin2(fd, 1)


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(1, 5)))
def test_rigidity_under_relabeling(perm):
    full = [0] + list(perm)
    base = W5.relabel(full)
    ring = family_ring(base)
    fd = FamilyData("W5'", base, 4, -16, 0,
                    [ring.one(), ring.basis_element("w"), ring.zero(), ring.zero(), ring.zero()])
    original = w5_family()

    def named(el):
        return {(m[2], el.ring.base.basis[m[4]][0]) for m in el.terms}

    assert constraint_check(fd) == constraint_check(original) == []
    assert named(families_sw_pin2(fd, 0)) == named(families_sw_pin2(original, 0))
    assert named(families_sw(fd, 0)) == named(families_sw(original, 0))
    assert named(equivariant_euler_hplus(fd)) == named(equivariant_euler_hplus(original))


def test_exterior_base_matches_torus():
    base = BaseAlgebra.exterior(4)
    ring = family_ring(base)
    el = lambda *names: sum((ring.basis_element(n) for n in names), ring.zero())
    seg = {1: EquivariantSegre(1, el("x1^x2^x3^x4"), el("x1^x2^x3"), el("x1^x2"))}
    w = [ring.one(), ring.zero(), ring.zero(), ring.zero()]
    fd = FamilyData("T4 over Pic", base, 3, 0, 4, w, seg)
    assert constraint_check(fd) == []
    md = torus4(q2=[(1, 2)], q3=[(1, 2, 3)])
    got = families_sw_pin2(fd, 0)
    want = sw_pin2(md, 0, 0).value
    assert {(m[2], base.basis[m[4]][0]) for m in got.terms} == \
        {(m[2], str(md.basic_ring().monomial(mask=m[3]))) for m in want.terms}
    assert str(families_sw(fd, 0)) == "x1^x2^x3^x4"


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_random_point_families_consistent(seed):
    rng = random.Random(seed)
    b_plus = rng.randint(3, 8)
    sigma = rng.choice([0, -16] if b_plus == 3 else [0, -16, -32, -48])
    fd = point_family(b_plus, sigma)
    for j in range(4):
        pv = families_sw_pin2(fd, j)
        assert not pv or pv.degrees() == {4 * j + sigma // 4 + b_plus + 1}
