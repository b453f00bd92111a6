"""Mod 2 Seiberg-Witten invariants of a single spin 4-manifold.

Input is finite topological data (ManifoldData).  The ordinary invariant
SW(x^m) lives in H*(Pic) = Lambda[x_1..x_b1]; the Pin(2) refinement
SW(u^a q^j) lives in Lambda[x_1..x_b1][u]/(u^b_plus).

Indices of x_i, of the quadruple form and of the q2/q3 tables are 1-based.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .classcalc import EquivariantSegre, QuadForm, segre_s2j
from .errors import (
    DegreeViolation,
    DimensionMismatch,
    HypothesisNotMet,
    UnsupportedPrecision,
    ValidationFailed,
    WrongBPlus,
)
from .f2ring import F2Element, Ring

__all__ = [
    "ManifoldData",
    "Pin2Value",
    "SWReport",
    "Verdict",
    "validate",
    "require_valid",
    "sw_basic",
    "sw_pin2",
    "equivariant_segre",
    "q2_eval",
    "q3_eval",
    "twist_b2",
    "twist_defect_b1",
    "any_nonzero_sw",
    "genus_bound",
    "smoothability_obstruction",
    "compute_report",
    "k3",
    "torus4",
    "kodaira_thurston",
    "hyperelliptic",
]


def _table(raw, arity: int, label: str) -> frozenset | None:
    """Normalise a q2/q3 table to the set of index tuples carrying a 1."""
    if raw is None:
        return None
    if isinstance(raw, dict):
        items = [tuple(k) + (v,) for k, v in raw.items()]
    else:
        items = [tuple(t) if len(tuple(t)) == arity + 1 else tuple(t) + (1,) for t in raw]
    out = set()
    for item in items:
        if len(item) != arity + 1:
            raise ValueError(f"{label} entry {item} should have {arity} indices")
        idx, bit = tuple(sorted(int(i) for i in item[:arity])), int(item[arity])
        if len(set(idx)) != arity:
            raise ValueError(f"{label} entry {item} repeats an index")
        if bit % 2:
            out ^= {idx}
    return frozenset(out)


@dataclass(frozen=True)
class ManifoldData:
    """Topological input for one spin structure.

    q2 / q3 hold the index pairs / triples where the table is 1; None means
    the table was not supplied.  The first b1 of the z2_rank mod 2 classes are
    the reductions of the integral basis.
    """

    name: str
    b1: int
    b_plus: int
    sigma: int
    quad: QuadForm | None = None
    q2: frozenset | None = None
    q3: frozenset | None = None
    z2_rank: int | None = None
    z2_quad: QuadForm | None = None

    def __post_init__(self):
        quad = self.quad
        if quad is None:
            quad = QuadForm(self.b1)
        elif not isinstance(quad, QuadForm):
            quad = QuadForm(self.b1, dict(quad))
        q2 = _table(self.q2, 2, "q2")
        q3 = _table(self.q3, 3, "q3")
        # with too few generators the tables are empty whether or not supplied
        if q2 is None and self.b1 < 2:
            q2 = frozenset()
        if q3 is None and self.b1 < 3:
            q3 = frozenset()
        z2_rank = self.b1 if self.z2_rank is None else self.z2_rank
        z2_quad = self.z2_quad
        if z2_quad is None:
            z2_quad = QuadForm(max(z2_rank, quad.n), dict(quad.mod2().entries))
        elif not isinstance(z2_quad, QuadForm):
            z2_quad = QuadForm(z2_rank, dict(z2_quad))
        for label, tab in (("q2", q2), ("q3", q3)):
            for idx in tab or ():
                if idx[0] < 1 or idx[-1] > self.b1:
                    raise ValueError(f"{label} index {idx} out of range 1..{self.b1}")
        object.__setattr__(self, "quad", quad)
        object.__setattr__(self, "q2", q2)
        object.__setattr__(self, "q3", q3)
        object.__setattr__(self, "z2_rank", z2_rank)
        object.__setattr__(self, "z2_quad", z2_quad)

    @property
    def d(self) -> int:
        """Virtual complex rank of the index bundle, -sigma/8."""
        return -self.sigma // 8

    def basic_ring(self) -> Ring:
        return Ring(n=self.b1, u_trunc=1)

    def pin2_ring(self) -> Ring:
        return Ring(n=self.b1, u_trunc=self.b_plus)

    def q2_class(self, ring: Ring | None = None) -> F2Element:
        ring = ring or self.basic_ring()
        return sum((ring.x(*idx) for idx in sorted(self.q2 or ())), ring.zero())

    def q3_class(self, ring: Ring | None = None) -> F2Element:
        ring = ring or self.basic_ring()
        return sum((ring.x(*idx) for idx in sorted(self.q3 or ())), ring.zero())


class Pin2Value(NamedTuple):
    """A Pin(2) class together with the u-power below which it is exact."""

    value: F2Element
    exact_below: int

    @property
    def exact(self) -> bool:
        return self.exact_below >= self.value.ring.u_trunc

    def known_part(self) -> F2Element:
        return self.value.truncate_u(self.exact_below)

    def __str__(self):
        if self.exact:
            return str(self.value)
        return f"{self.value} (mod u^{self.exact_below})"


class Verdict(str, enum.Enum):
    OBSTRUCTED = "OBSTRUCTED"
    NO_OBSTRUCTION = "NO_OBSTRUCTION"


def validate(md: ManifoldData) -> list[str]:
    """Diagnostics for every violated constraint; empty when md is usable."""
    out = []
    if md.b1 < 0:
        out.append(f"b1 must be nonnegative (got {md.b1})")
    if md.b_plus < 1:
        out.append(f"b_plus must be positive (got {md.b_plus})")
    if md.sigma % 16:
        out.append(f"Rokhlin: the signature of a spin 4-manifold is a multiple of 16 (got {md.sigma})")
    if out:
        return out
    if md.quad.n != md.b1:
        out.append(f"quadruple form has {md.quad.n} generators, expected b1 = {md.b1}")
    if md.z2_rank < md.b1:
        out.append(f"z2_rank {md.z2_rank} is smaller than b1 = {md.b1}")
    elif md.z2_quad.n != md.z2_rank:
        out.append(f"mod 2 quadruple form has {md.z2_quad.n} generators, expected z2_rank = {md.z2_rank}")
    elif md.z2_quad.restrict(md.b1) != md.quad.mod2():
        out.append("mod 2 quadruple form does not restrict to the integral form mod 2")
    if md.b_plus <= 2 and md.sigma != 0:
        out.append(f"a spin manifold with b_plus <= 2 has signature 0 (got {md.sigma})")
    if md.b_plus == 3 and md.sigma not in (0, -16):
        out.append(f"10/8 inequality: b_plus = 3 allows signature 0 or -16 only (got {md.sigma})")
    odd = md.quad.odd_keys()
    if md.b_plus <= 2 and odd:
        out.append(f"Pin(2) divisibility by u^(3-b_plus) forces every quadruple cup product to be even; "
                   f"odd at {_fmt_keys(odd)}")
    if md.b_plus == 3 and md.sigma == -16 and odd:
        out.append(f"b_plus = 3 and sigma = -16 force every quadruple cup product to be even; "
                   f"odd at {_fmt_keys(odd)}")
    if md.b_plus == 3 and md.sigma == 0 and not out:
        for j in range(2, md.b1 // 4 + 1):
            if segre_s2j(md.quad, j):
                out.append(f"b_plus = 3 forces s_{2 * j}(D) = 0 mod 2, but the quadruple form gives "
                           f"{segre_s2j(md.quad, j)}")
                break
    if md.b_plus == 1 and md.q3:
        out.append(f"b_plus = 1 makes s_2,Z2(D) divisible by u^2, so the q3 table must vanish; "
                   f"nonzero at {_fmt_keys(sorted(md.q3))}")
    if md.b_plus == 1 and md.q2 is None:
        out.append("b_plus = 1 needs the q2 table")
    if md.b_plus == 2 and (md.q2 is None or md.q3 is None):
        out.append("b_plus = 2 needs both the q2 and q3 tables")
    return out


def _fmt_keys(keys) -> str:
    return ", ".join("{" + ",".join(map(str, k)) + "}" for k in keys)


def require_valid(md: ManifoldData) -> None:
    problems = validate(md)
    if problems:
        raise ValidationFailed(problems)


def basic_degree(md: ManifoldData, m: int) -> int:
    return 2 * m + md.sigma // 4 + md.b_plus + 1


def pin2_degree(md: ManifoldData, a: int, j: int) -> int:
    return a + 4 * j + md.sigma // 4 + md.b_plus + 1


def check_degree(value: F2Element, declared: int, label: str) -> F2Element:
    if value and value.degrees() != {declared}:
        raise DegreeViolation(f"{label} = {value} is not homogeneous of degree {declared}")
    return value


def sw_basic(md: ManifoldData, m: int) -> F2Element:
    """SW(x^m) in Lambda[x_1..x_b1]."""
    require_valid(md)
    if m < 0:
        raise ValueError("m must be nonnegative")
    ring = md.basic_ring()
    if m > 0:
        value = ring.zero()
    elif md.b_plus == 1:
        value = md.q2_class(ring)
    elif md.b_plus == 2:
        value = md.q3_class(ring)
    elif md.b_plus == 3:
        value = segre_s2j(md.quad, 1 + md.sigma // 16, ring)
    else:
        value = ring.zero()
    return check_degree(value, basic_degree(md, m), f"SW(x^{m})")


def equivariant_segre(md: ManifoldData, k: int) -> EquivariantSegre:
    """s_{2k,Z2}(D) with whatever parts the data determines.

    The s-part comes from the quadruple form.  The u-parts are known when
    k = 0, when their degree exceeds b1, or for k = 1 from the q3/q2 tables;
    the t-part also vanishes when b_plus = 1.
    """
    ring = md.basic_ring()
    if k < 0:
        return EquivariantSegre.plain(k, ring.zero())
    s = segre_s2j(md.quad, k, ring)
    if k == 0 or 4 * k - 1 > md.b1 or md.b_plus == 1:
        # b_plus = 1: s_2k,Z2 is divisible by u^2 for k > 0
        t = ring.zero()
    elif k == 1 and md.q3 is not None:
        t = md.q3_class(ring)
    else:
        t = None
    if k == 0 or 4 * k - 2 > md.b1:
        r = ring.zero()
    elif k == 1 and md.q2 is not None:
        r = md.q2_class(ring)
    else:
        r = None
    return EquivariantSegre(k, s, t, r)


def sw_pin2(md: ManifoldData, a: int, j: int) -> Pin2Value:
    """SW^{Pin(2)}(u^a q^j) = u^(a+b_plus-3) s_{2(j+1+sigma/16),Z2}(D).

    Parts landing at negative u-powers vanish by the divisibility the formula
    asserts and are dropped.  Unknown parts lower the precision; for
    b_plus <= 2 an undetermined class is refused instead.
    """
    require_valid(md)
    if a not in (0, 1, 2):
        raise ValueError("a must be 0, 1 or 2")
    if j < 0:
        raise ValueError("j must be nonnegative")
    ring = md.pin2_ring()
    top = md.b_plus
    k = j + 1 + md.sigma // 16
    value = ring.zero()
    exact_below = top
    if k >= 0:
        es = equivariant_segre(md, k)
        shift = a + top - 3
        for power, part in enumerate((es.s_part, es.t_part, es.r_part)):
            e = shift + power
            if e < 0 or e >= top:
                continue
            if part is None:
                exact_below = min(exact_below, e)
            else:
                value = value + part.to_ring(ring).shift_u(e)
    if exact_below < top and top <= 2:
        raise UnsupportedPrecision(
            f"{md.name}: SW(u^{a} q^{j}) with b_plus = {top} is not determined by the supplied data")
    value = value.truncate_u(exact_below)
    check_degree(value, pin2_degree(md, a, j), f"SW(u^{a} q^{j})")
    return Pin2Value(value, exact_below)


def _vector(v: Sequence[int], n: int, label: str) -> list[int]:
    v = [int(t) for t in v]
    if len(v) != n:
        raise DimensionMismatch(f"{label} has length {len(v)}, expected {n}")
    return v


def q2_eval(md: ManifoldData, av: Sequence[int], bv: Sequence[int]) -> int:
    """<SW(1), a.b> for b_plus = 1: the bilinear extension of the q2 table mod 2."""
    a = _vector(av, md.b1, "a")
    b = _vector(bv, md.b1, "b")
    if md.q2 is None:
        raise ValidationFailed(["q2 table not supplied"])
    total = 0
    for i, j in md.q2:
        total += a[i - 1] * b[j - 1] + a[j - 1] * b[i - 1]
    return total % 2


def q3_eval(md: ManifoldData, av: Sequence[int], bv: Sequence[int], cv: Sequence[int]) -> int:
    """Alternating trilinear extension of the q3 table mod 2."""
    rows = [_vector(v, md.b1, label) for v, label in ((av, "a"), (bv, "b"), (cv, "c"))]
    if md.q3 is None:
        raise ValidationFailed(["q3 table not supplied"])
    total = 0
    for idx in md.q3:
        cols = [i - 1 for i in idx]
        # 3x3 determinant mod 2 equals the permanent
        total += sum(rows[0][cols[p[0]]] * rows[1][cols[p[1]]] * rows[2][cols[p[2]]]
                     for p in ((0, 1, 2), (0, 2, 1), (1, 0, 2), (1, 2, 0), (2, 0, 1), (2, 1, 0)))
    return total % 2


def _unit(n: int, i: int) -> list[int]:
    v = [0] * n
    v[i - 1] = 1
    return v


def _z2_lift(md: ManifoldData, v: Sequence[int]) -> list[int]:
    return [t % 2 for t in v] + [0] * (md.z2_rank - md.b1)


def twist_b2(md: ManifoldData, A: Sequence[int]) -> ManifoldData:
    """Data of the spin structure twisted by A in H^1(X; Z2), for b_plus = 2."""
    if md.b_plus != 2:
        raise WrongBPlus(f"twisting the q3 table needs b_plus = 2 (got {md.b_plus})")
    A = [t % 2 for t in _vector(A, md.z2_rank, "A")]
    if md.q3 is None:
        raise ValidationFailed(["q3 table not supplied"])
    flips = set()
    for idx in combinations(range(1, md.b1 + 1), 3):
        es = [_z2_lift(md, _unit(md.b1, i)) for i in idx]
        if md.z2_quad.evaluate_mod2(A, *es):
            flips.add(idx)
    return replace(md, q3=md.q3 ^ frozenset(flips))


def twist_defect_b1(md: ManifoldData, A: Sequence[int], B: Sequence[int],
                    av: Sequence[int], bv: Sequence[int]) -> int:
    """<[X], A.B.a.b>: the second difference of q2 under twisting by A and B (b_plus = 1)."""
    if md.b_plus != 1:
        raise WrongBPlus(f"the q2 twisting rule needs b_plus = 1 (got {md.b_plus})")
    A = _vector(A, md.z2_rank, "A")
    B = _vector(B, md.z2_rank, "B")
    a = _z2_lift(md, _vector(av, md.b1, "a"))
    b = _z2_lift(md, _vector(bv, md.b1, "b"))
    return md.z2_quad.evaluate_mod2(A, B, a, b)


def any_nonzero_sw(md: ManifoldData) -> tuple[bool, str]:
    """Whether some spin structure reachable by the supplied Z2 twists has SW(1) != 0."""
    require_valid(md)
    if md.b_plus == 1:
        if md.q2:
            return True, f"q2 table is nonzero, SW(1) = {md.q2_class()}"
        for key in md.z2_quad.odd_keys():
            integral = [i for i in key if i <= md.b1]
            if len(integral) >= 2:
                rest = [i for i in key if i not in integral[:2]]
                return True, (f"<A.B.a.b> = 1 for A = e{rest[0]}, B = e{rest[1]}, "
                              f"a = e{integral[0]}, b = e{integral[1]}")
        return False, "q2 vanishes and no mod 2 quadruple pairs two integral classes"
    if md.b_plus == 2:
        if md.q3:
            return True, f"q3 table is nonzero, SW(1) = {md.q3_class()}"
        for key in md.z2_quad.odd_keys():
            integral = [i for i in key if i <= md.b1]
            if len(integral) >= 3:
                rest = [i for i in key if i not in integral[:3]]
                return True, (f"<A.a.b.c> = 1 for A = e{rest[0]}, "
                              f"a, b, c = e{integral[0]}, e{integral[1]}, e{integral[2]}")
        return False, "q3 vanishes and no mod 2 quadruple pairs three integral classes"
    if md.b_plus == 3:
        if md.sigma == -16:
            return True, "b_plus = 3, sigma = -16: SW(1) = s_0(D) = 1"
        odd = md.quad.odd_keys()
        if odd:
            return True, f"b_plus = 3, sigma = 0: c_I odd at {_fmt_keys(odd[:1])}, SW(1) = s_2(D) != 0"
        return False, "b_plus = 3, sigma = 0 and every quadruple cup product is even"
    return False, f"b_plus = {md.b_plus} > 3: every mod 2 invariant vanishes"


def genus_bound(md: ManifoldData, a_squared: int) -> int:
    """Least genus allowed by 2g - 2 >= |a^2| for an embedded surface of self-intersection a^2."""
    ok, why = any_nonzero_sw(md)
    if not ok:
        raise HypothesisNotMet(f"{md.name}: no nonzero mod 2 invariant ({why})")
    return (abs(a_squared) + 3) // 2


def smoothability_obstruction(b1: int, b_plus: int, sigma: int, quad) -> Verdict:
    """OBSTRUCTED when b_plus = 3, sigma = -16 and some quadruple cup product is odd."""
    if not isinstance(quad, QuadForm):
        quad = QuadForm(b1, dict(quad or {}))
    if b_plus == 3 and sigma == -16 and quad.odd_keys():
        return Verdict.OBSTRUCTED
    return Verdict.NO_OBSTRUCTION


@dataclass
class SWReport:
    name: str
    b1: int
    b_plus: int
    sigma: int
    diagnostics: list[str] = field(default_factory=list)
    basic: dict[int, F2Element] = field(default_factory=dict)
    pin2: dict[tuple[int, int], Pin2Value | None] = field(default_factory=dict)
    nonvanishing: tuple[bool, str] | None = None
    obstruction: Verdict | None = None


def default_m_max(md: ManifoldData) -> int:
    # SW(x^m) sits in degree 2m + sigma/4 + b_plus + 1 <= b1
    return max(0, (md.b1 - md.sigma // 4 - md.b_plus - 1) // 2)


def default_j_max(md: ManifoldData) -> int:
    # SW(u^a q^j) sits in degree a + 4j + sigma/4 + b_plus + 1 <= b1 + b_plus - 1
    return max(0, (md.b1 - md.sigma // 4 - 2) // 4)


def compute_report(md: ManifoldData, m_max: int | None = None, j_max: int | None = None) -> SWReport:
    rep = SWReport(md.name, md.b1, md.b_plus, md.sigma)
    rep.obstruction = smoothability_obstruction(md.b1, md.b_plus, md.sigma, md.quad)
    rep.diagnostics = validate(md)
    if rep.diagnostics:
        return rep
    m_max = default_m_max(md) if m_max is None else m_max
    j_max = default_j_max(md) if j_max is None else j_max
    for m in range(m_max + 1):
        rep.basic[m] = sw_basic(md, m)
    for j in range(j_max + 1):
        for a in range(3):
            try:
                rep.pin2[a, j] = sw_pin2(md, a, j)
            except UnsupportedPrecision:
                rep.pin2[a, j] = None
    rep.nonvanishing = any_nonzero_sw(md)
    return rep


def k3() -> ManifoldData:
    return ManifoldData("K3", 0, 3, -16)


def torus4(q2: Iterable | None = None, q3: Iterable | None = None) -> ManifoldData:
    return ManifoldData("T4", 4, 3, 0, QuadForm(4, {(1, 2, 3, 4): 1}), q2=q2, q3=q3)


def kodaira_thurston() -> ManifoldData:
    return ManifoldData("Kodaira-Thurston", 3, 2, 0, q2=(), q3=[(1, 2, 3)])


def hyperelliptic() -> ManifoldData:
    return ManifoldData("hyperelliptic", 2, 1, 0, q2=[(1, 2)])
