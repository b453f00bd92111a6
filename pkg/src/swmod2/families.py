"""Families Seiberg-Witten invariants for spin families over a base B.

The user supplies H*(B; Z2) as a BaseAlgebra, the Stiefel-Whitney classes
w_0..w_b+ of the bundle H+ and the equivariant Segre classes of the index
bundle.  Everything below is polynomial arithmetic in H*(B)[u].
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .classcalc import EquivariantSegre
from .errors import MissingSegre, NoChamber, NotDivisibleByU3
from .f2ring import BaseAlgebra, F2Element, Ring, reduce_by_monic_u
from .swspin import check_degree

__all__ = [
    "FamilyData",
    "family_ring",
    "equivariant_euler_hplus",
    "structural_problems",
    "constraint_check",
    "families_sw_pin2",
    "families_sw",
    "point_family",
]


def family_ring(base: BaseAlgebra) -> Ring:
    return Ring(n=0, u_trunc=None, base=base)


@dataclass(frozen=True)
class FamilyData:
    """w[l] is w_l(H+) for l = 0..b_plus; segre maps k to s_{2k,Z2}(D).

    When b1 = 0 the u-parts of every Segre class vanish and missing ones are
    filled in as zero.
    """

    name: str
    base: BaseAlgebra
    b_plus: int
    sigma: int
    b1: int
    w: tuple
    segre: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "w", tuple(self.w))
        segre = dict(self.segre)
        if self.b1 == 0:
            for k, es in segre.items():
                zero = es.s_part.ring.zero()
                segre[k] = EquivariantSegre(es.j, es.s_part,
                                            zero if es.t_part is None else es.t_part,
                                            zero if es.r_part is None else es.r_part)
        object.__setattr__(self, "segre", segre)

    @property
    def ring(self) -> Ring:
        return family_ring(self.base)

    def w_class(self, l: int) -> F2Element:
        if 0 <= l < len(self.w):
            return self.w[l]
        return self.ring.zero()

    def top_degree(self) -> int:
        return max(d for _, d in self.base.basis)

    def shift_k(self, j: int) -> int:
        return j + 1 + self.sigma // 16


def point_family(b_plus: int, sigma: int, name: str = "point") -> FamilyData:
    """A family over a point with trivial H+ (b1 = 0)."""
    base = BaseAlgebra.point()
    ring = family_ring(base)
    w = [ring.one()] + [ring.zero()] * b_plus
    return FamilyData(name, base, b_plus, sigma, 0, w)


def equivariant_euler_hplus(fd: FamilyData) -> F2Element:
    """e_Z2(H+) = sum_j u^j w_{b+ - j}."""
    ring = fd.ring
    return sum((fd.w_class(fd.b_plus - j) * ring.u(j) for j in range(fd.b_plus + 1)), ring.zero())


def structural_problems(fd: FamilyData) -> list[str]:
    out = []
    if fd.b_plus < 1:
        out.append(f"b_plus must be positive (got {fd.b_plus})")
    if fd.sigma % 16:
        out.append(f"Rokhlin: the signature must be a multiple of 16 (got {fd.sigma})")
    if fd.b1 < 0:
        out.append(f"b1 must be nonnegative (got {fd.b1})")
    if len(fd.w) != fd.b_plus + 1:
        out.append(f"expected w_0..w_{fd.b_plus}, got {len(fd.w)} classes")
    ring = fd.ring
    for l, w in enumerate(fd.w):
        if not isinstance(w, F2Element) or w.ring != ring:
            out.append(f"w_{l} is not an element of the base algebra")
            continue
        if w.max_u():
            out.append(f"w_{l} involves u")
        elif w and w.degrees() != {l}:
            out.append(f"w_{l} is not homogeneous of degree {l}")
    if fd.w and fd.w[0] != ring.one():
        out.append("w_0 must be the unit")
    for k, es in sorted(fd.segre.items()):
        if es.j != k:
            out.append(f"Segre entry {k} is labelled s_{2 * es.j}")
        if es.s_part.ring != ring:
            out.append(f"s_{2 * k} does not live in the base algebra")
            continue
        out.extend(es.degree_problems())
        if fd.b1 == 0 and (es.t_part or es.r_part):
            out.append(f"b1 = 0 but s_{2 * k},Z2 has nonzero u-parts")
    return out


def _segre(fd: FamilyData, k: int) -> EquivariantSegre | None:
    """s_{2k,Z2}: supplied, canonical for k <= 0, or zero by degree; None if unknown."""
    ring = fd.ring
    if k < 0:
        return EquivariantSegre.plain(k, ring.zero())
    if k in fd.segre:
        return fd.segre[k]
    if k == 0:
        return EquivariantSegre.plain(0, ring.one())
    lowest = 4 * k if fd.b1 == 0 else 4 * k - 2
    if lowest > fd.top_degree():
        return EquivariantSegre.plain(k, ring.zero())
    return None


def _assembled(fd: FamilyData, k: int) -> F2Element:
    es = _segre(fd, k)
    if es is None or es.t_part is None or es.r_part is None:
        raise MissingSegre(f"{fd.name}: s_{2 * k},Z2 is not fully supplied")
    ring = fd.ring
    return es.s_part + es.t_part * ring.u() + es.r_part * ring.u(2)


def constraint_check(fd: FamilyData) -> list[str]:
    """Necessary conditions for the data to come from a spin family.

    Passing does not prove realizability.
    """
    out = structural_problems(fd)
    if out:
        return out
    ring = fd.ring
    head = fd.w_class(fd.b_plus) + fd.w_class(fd.b_plus - 1) * ring.u() + fd.w_class(fd.b_plus - 2) * ring.u(2)
    ks = sorted(set(fd.segre) | ({0} if fd.sigma < 0 else set()))
    for k in ks:
        if k < fd.shift_k(0):
            continue
        es = _segre(fd, k)
        p = es.exact_below
        s = es.s_part + (es.t_part or ring.zero()) * ring.u() + (es.r_part or ring.zero()) * ring.u(2)
        prod = (head * s).truncate_u(min(3, p))
        if prod:
            out.append(f"(w_b+ + u w_b+-1 + u^2 w_b+-2) s_{2 * k},Z2 = {prod} is not 0 mod u^3")
    if fd.sigma < 0:
        for l in range(max(fd.b_plus - 2, 0), fd.b_plus + 1):
            if fd.w_class(l):
                out.append(f"negative signature forces w_{l}(H+) = 0 (got {fd.w_class(l)})")
    return out


def families_sw_pin2(fd: FamilyData, j: int) -> F2Element:
    """SW^{Pin(2)}(q^j) = sum_l u^(l-3) w_{b+-l} s_{2(j+1+sigma/16),Z2}, reduced mod e_Z2(H+)."""
    ring = fd.ring
    k = fd.shift_k(j)
    if k < 0:
        return ring.zero()
    e = equivariant_euler_hplus(fd)
    lifted = e * _assembled(fd, k)
    low = lifted.min_u()
    if low is not None and low < 3:
        raise NotDivisibleByU3(f"{fd.name}: e_Z2(H+) s_{2 * k},Z2 = {lifted} is not divisible by u^3")
    value = reduce_by_monic_u(lifted.shift_u(-3), e, fd.b_plus)
    return check_degree(value, 4 * j + fd.sigma // 4 + fd.b_plus + 1, f"{fd.name}: SW(q^{j})")


def families_sw(fd: FamilyData, m: int) -> F2Element:
    """SW(x^m) for even m: the u^0 part of the Pin(2) invariant at q^(m/2)."""
    if m < 0 or m % 2:
        raise ValueError("m must be even and nonnegative")
    if fd.w_class(fd.b_plus):
        raise NoChamber(f"{fd.name}: w_{fd.b_plus}(H+) != 0, so H+ has no nonvanishing section")
    ring = fd.ring
    k = fd.shift_k(m // 2)
    if k < 0:
        return ring.zero()
    es = _segre(fd, k)
    if es is None:
        raise MissingSegre(f"{fd.name}: s_{2 * k},Z2 is not supplied")
    out = fd.w_class(fd.b_plus - 3) * es.s_part
    for l, part, label in ((2, es.t_part, "t"), (1, es.r_part, "r")):
        w = fd.w_class(fd.b_plus - l)
        if not w:
            continue
        if part is None:
            raise MissingSegre(f"{fd.name}: the {label}-part of s_{2 * k},Z2 is needed")
        out = out + w * part
    return check_degree(out, 2 * m + fd.sigma // 4 + fd.b_plus + 1, f"{fd.name}: SW(x^{m})")
