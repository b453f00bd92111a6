"""Connected sums and the Pin(2) product formula.

For theta = u^a q1^j the invariant of X # Y is

    u^{b+(X)} (id x SW_Y)(psi_2(e_G(D_X)^-1 theta))
  + u^{b+(Y)} (id x SW_X)(psi_1(e_G(D_Y)^-1 theta))

evaluated in Lambda[x_X, x_Y][u]/(u^B)[mu, mu^-1] with B = b+(X) + b+(Y).
Restricting to Pin(2) keeps the mu^0 coefficient; every negative mu power must
cancel, which is checked.  Generators of X come first in the combined basis.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

from .classcalc import euler_inverse_psi
from .errors import NegativeMuResidue, UnsupportedPrecision
from .f2ring import F2Element, Ring, mu_coefficient
from .swspin import (
    ManifoldData,
    Pin2Value,
    check_degree,
    equivariant_segre,
    require_valid,
    sw_pin2,
)

__all__ = [
    "PsiTag",
    "connect",
    "connect_many",
    "psi_substitute",
    "product_cutoff",
    "sw_product_formula",
    "mk3_table",
    "multiple_k3",
    "ConsistencyRow",
    "ConsistencyReport",
    "verify_consistency",
]


class PsiTag(enum.Enum):
    PSI1 = 1
    PSI2 = 2


def connect(x: ManifoldData, y: ManifoldData) -> ManifoldData:
    """Data of X # Y: invariants add, forms and tables are block sums."""
    require_valid(x)
    require_valid(y)
    n = x.b1 + y.b1
    shift_y = {i: i + x.b1 for i in range(1, y.b1 + 1)}
    quad = dict(x.quad.entries)
    quad.update(y.quad.embed(shift_y, n).entries)

    def block(tx, ty):
        if tx is None or ty is None:
            return None
        return tx | {tuple(i + x.b1 for i in idx) for idx in ty}

    # mod 2 basis: integral classes of X, of Y, then the extra classes of X, of Y
    rank = x.z2_rank + y.z2_rank
    extra_x = x.z2_rank - x.b1
    map_x = {i: (i if i <= x.b1 else n + i - x.b1) for i in range(1, x.z2_rank + 1)}
    map_y = {i: (x.b1 + i if i <= y.b1 else n + extra_x + i - y.b1) for i in range(1, y.z2_rank + 1)}
    z2 = {}
    for form, mapping in ((x.z2_quad, map_x), (y.z2_quad, map_y)):
        for key, c in form.entries:
            z2[tuple(sorted(mapping[i] for i in key))] = c
    return ManifoldData(
        name=f"{x.name}#{y.name}",
        b1=n,
        b_plus=x.b_plus + y.b_plus,
        sigma=x.sigma + y.sigma,
        quad=quad,
        q2=block(x.q2, y.q2),
        q3=block(x.q3, y.q3),
        z2_rank=rank,
        z2_quad=z2,
    )


def connect_many(parts) -> ManifoldData:
    parts = list(parts)
    out = parts[0]
    for p in parts[1:]:
        out = connect(out, p)
    return out


def psi_substitute(e: Mapping[tuple[int, int], F2Element], tag: PsiTag) -> F2Element:
    """Substitute psi_i into a polynomial sum c_(e1,e2) q1^e1 q2^e2.

    psi_i(q_i) = q and psi_i(q_other) = q + mu.  Coefficients must share a
    ring that allows mu.
    """
    items = sorted(e.items())
    if not items:
        raise ValueError("empty polynomial has no ring to live in")
    ring = items[0][1].ring
    q = ring.q()
    q_mu = q + ring.mu()
    images = (q, q_mu) if tag is PsiTag.PSI1 else (q_mu, q)
    out = ring.zero()
    for (e1, e2), coeff in items:
        out = out + coeff * images[0] ** e1 * images[1] ** e2
    return out


def product_cutoff(x: ManifoldData, y: ManifoldData, j: int) -> int:
    """Least K with 4K > b1(X) + b1(Y) + |sigma(X)|/4 + |sigma(Y)|/4 + 4j + 8."""
    bound = x.b1 + y.b1 + abs(x.sigma) // 4 + abs(y.sigma) // 4 + 4 * j + 8
    return bound // 4 + 1


@dataclass
class _Summand:
    value: F2Element
    exact_below: int


def _low_power(pv: Pin2Value | None) -> int:
    """Lowest u-power the true class can involve."""
    if pv is None:
        return 0
    low = pv.value.min_u()
    return pv.exact_below if low is None else min(low, pv.exact_below)


def _summand(owner: ManifoldData, other: ManifoldData, owner_offset: int, other_offset: int,
             tag: PsiTag, a: int, j: int, cutoff: int, ambient: Ring) -> _Summand:
    """u^{b+(owner)} (id x SW_other)(psi(e_G(D_owner)^-1 u^a q1^j))."""
    n = ambient.n
    domain = Ring(n=n, u_trunc=3, laurent=True)
    segs = [equivariant_segre(owner, i) for i in range(cutoff + 1)]
    p_owner = min(es.exact_below for es in segs)
    local = Ring(n=n, u_trunc=1)
    embedded = []
    for es in segs:
        parts = [None if p is None else p.to_ring(local, owner_offset) for p in (es.s_part, es.t_part, es.r_part)]
        embedded.append(type(es)(es.j, *parts))
    inv = euler_inverse_psi(owner.d, embedded, cutoff, ring=domain, precision=p_owner)
    theta = psi_substitute({(j, 0): domain.u(a)}, tag)
    expansion = inv * theta

    cache: dict[int, Pin2Value | None] = {}

    def sw_other(l: int) -> Pin2Value | None:
        if l not in cache:
            try:
                cache[l] = sw_pin2(other, 0, l)
            except UnsupportedPrecision:
                cache[l] = None
        return cache[l]

    shift = owner.b_plus
    out = ambient.zero()
    exact_below = ambient.u_trunc
    for l, coeff in sorted(expansion.q_parts().items()):
        pv = sw_other(l)
        if pv is None:
            sw_pin2(other, 0, l)  # re-raise: this value is really needed
        if not pv.value and pv.exact:
            continue
        out = out + coeff.to_ring(ambient) * pv.value.to_ring(ambient, other_offset).shift_u(shift)
        if not pv.exact:
            low = coeff.min_u()
            if low is not None:
                exact_below = min(exact_below, shift + low + pv.exact_below)
    if p_owner < 3:
        # unknown u-parts of the owner's Segre classes enter at u^(a + p_owner)
        # and then meet SW_other(q^l) for some l <= cutoff + j
        low_other = min(_low_power(sw_other(l)) for l in range(cutoff + j + 1))
        exact_below = min(exact_below, shift + a + p_owner + low_other)
    return _Summand(out, exact_below)


def sw_product_formula(x: ManifoldData, y: ManifoldData, a: int, j: int,
                       cutoff: int | None = None) -> Pin2Value:
    """SW^{Pin(2)}_{X#Y}(u^a q^j) computed from the two factors."""
    require_valid(x)
    require_valid(y)
    if a not in (0, 1, 2):
        raise ValueError("a must be 0, 1 or 2")
    if cutoff is None:
        cutoff = product_cutoff(x, y, j)
    top = x.b_plus + y.b_plus
    ambient = Ring(n=x.b1 + y.b1, u_trunc=top, laurent=True)
    first = _summand(x, y, 0, x.b1, PsiTag.PSI2, a, j, cutoff, ambient)
    second = _summand(y, x, x.b1, 0, PsiTag.PSI1, a, j, cutoff, ambient)
    total = first.value + second.value
    exact_below = min(first.exact_below, second.exact_below, top)
    known = total.truncate_u(exact_below)
    residue = sorted({m[0] for m in known.terms if m[0] < 0})
    if residue:
        k = residue[0]
        raise NegativeMuResidue(
            f"{x.name} # {y.name}, u^{a} q^{j}: coefficient of mu^{k} is {mu_coefficient(known, k)}")
    value = mu_coefficient(known, 0).to_ring(Ring(n=x.b1 + y.b1, u_trunc=top))
    declared = a + 4 * j + (x.sigma + y.sigma) // 4 + top + 1
    check_degree(value, declared, f"SW_{x.name}#{y.name}(u^{a} q^{j})")
    return Pin2Value(value, exact_below)


def multiple_k3(m: int) -> ManifoldData:
    """Data of the connected sum of m copies of K3."""
    if m < 1:
        raise ValueError("m must be positive")
    return ManifoldData("K3" if m == 1 else f"{m}K3", 0, 3 * m, -16 * m)


def mk3_table(m: int, j_max: int | None = None) -> dict[int, F2Element]:
    """SW^{Pin(2)}_{mK3}(q^j): u^(3m-3) at j = m-1 and 0 otherwise."""
    if m < 1:
        raise ValueError("m must be positive")
    ring = Ring(n=0, u_trunc=3 * m)
    j_max = m if j_max is None else j_max
    return {j: ring.u(3 * m - 3) if j == m - 1 else ring.zero() for j in range(j_max + 1)}


@dataclass
class ConsistencyRow:
    a: int
    j: int
    passed: bool
    modulus: int
    product: Pin2Value | None = None
    direct: Pin2Value | None = None
    detail: str = ""


@dataclass
class ConsistencyReport:
    x: str
    y: str
    b_plus: int
    rows: list[ConsistencyRow] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def summary(self) -> str:
        js = sorted({r.j for r in self.rows})
        span = f"j={js[0]}..{js[-1]}" if js else "j=none"
        return f"{'PASS' if self.all_passed else 'FAIL'} {span}"


def _or_unknown(compute, total: ManifoldData) -> Pin2Value:
    """A refused value counts as known modulo u^0."""
    try:
        return compute()
    except UnsupportedPrecision:
        return Pin2Value(total.pin2_ring().zero(), 0)


def verify_consistency(x: ManifoldData, y: ManifoldData, j_max: int) -> ConsistencyReport:
    """Compare the product formula with the direct formula on connect(x, y).

    Exact when both factors have b1 = 0, otherwise modulo u^(B-2) with
    B = b_plus(X) + b_plus(Y).
    """
    total = connect(x, y)
    top = total.b_plus
    required = top if x.b1 == 0 and y.b1 == 0 else top - 2
    rep = ConsistencyReport(x.name, y.name, top)
    for j in range(j_max + 1):
        for a in range(3):
            prod = _or_unknown(lambda: sw_product_formula(x, y, a, j), total)
            direct = _or_unknown(lambda: sw_pin2(total, a, j), total)
            modulus = min(prod.exact_below, direct.exact_below, required)
            row = ConsistencyRow(a, j, False, modulus, prod, direct)
            if modulus < required:
                row.detail = f"precision u^{modulus} below the required u^{required}"
            elif prod.value.truncate_u(modulus) != direct.value.truncate_u(modulus):
                row.detail = f"product {prod.value} != direct {direct.value} mod u^{modulus}"
            else:
                row.passed = True
            rep.rows.append(row)
    return rep
