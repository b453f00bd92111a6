"""Characteristic-class calculus mod 2.

Covers binomial coefficients with negative upper index, Segre classes of the
index bundle of a spin structure (read off from the quadruple cup products),
equivariant Segre triples s + u.t + u^2.r, and the Laurent expansion of the
inverse equivariant Euler class that feeds the connected-sum formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations
from typing import Mapping, Sequence

from .errors import CutoffTooSmall, UnknownPart
from .f2ring import F2Element, Ring

__all__ = [
    "binom_mod2",
    "QuadForm",
    "segre_s2",
    "segre_s2j",
    "twisted_segre",
    "EquivariantSegre",
    "assemble",
    "euler_inverse_psi",
]


def binom_mod2(n: int, k: int) -> int:
    """binom(n, k) mod 2 for any integer n, via Lucas and binom(-m, k) = +-binom(m+k-1, k)."""
    if k < 0:
        return 0
    if n < 0:
        n = -n + k - 1
    return 1 if k & ~n == 0 else 0


def _mask(indices) -> int:
    m = 0
    for i in indices:
        m |= 1 << (i - 1)
    return m


def _perm_sign_free_det_mod2(rows: Sequence[Sequence[int]], cols: Sequence[int]) -> int:
    # mod 2 the determinant equals the permanent
    total = 0
    size = len(rows)
    for perm in permutations(range(size)):
        p = 1
        for r, c in zip(range(size), perm):
            p &= rows[r][cols[c]] & 1
            if not p:
                break
        total ^= p
    return total


@dataclass(frozen=True)
class QuadForm:
    """Quadruple cup products c_I on a basis of n degree-one classes.

    ``entries`` maps strictly increasing 1-based 4-tuples to integers; missing
    keys mean 0.  Zero entries are dropped on construction.
    """

    n: int
    entries: Mapping[tuple, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        clean = {}
        for key, c in dict(self.entries).items():
            key = tuple(int(i) for i in key)
            if len(key) != 4 or list(key) != sorted(set(key)):
                raise ValueError(f"quad key {key} is not a strictly increasing 4-tuple")
            if key[0] < 1 or key[-1] > self.n:
                raise ValueError(f"quad key {key} out of range 1..{self.n}")
            if int(c):
                clean[key] = int(c)
        object.__setattr__(self, "entries", tuple(sorted(clean.items())))

    def __getitem__(self, key) -> int:
        return dict(self.entries).get(tuple(key), 0)

    def items(self):
        return list(self.entries)

    def odd_keys(self) -> list[tuple]:
        return [k for k, c in self.entries if c % 2]

    def all_even(self) -> bool:
        return not self.odd_keys()

    def mod2(self) -> "QuadForm":
        return QuadForm(self.n, {k: c % 2 for k, c in self.entries})

    def restrict(self, m: int) -> "QuadForm":
        """Entries supported on the first m indices."""
        return QuadForm(m, {k: c for k, c in self.entries if k[-1] <= m})

    def embed(self, mapping: Mapping[int, int], n: int) -> "QuadForm":
        """Carry the entries along an order-preserving index map into a form on n indices."""
        return QuadForm(n, {tuple(mapping[i] for i in k): c for k, c in self.entries})

    def evaluate_mod2(self, v1, v2, v3, v4) -> int:
        """Alternating multilinear extension mod 2: sum_I c_I det(v restricted to I)."""
        rows = [list(v) for v in (v1, v2, v3, v4)]
        if any(len(r) != self.n for r in rows):
            raise ValueError("vector length does not match the form")
        total = 0
        for key, c in self.entries:
            if c % 2:
                total ^= _perm_sign_free_det_mod2(rows, [i - 1 for i in key])
        return total


def _exterior_ring(f: QuadForm, ring: Ring | None) -> Ring:
    if ring is None:
        return Ring(n=f.n)
    if ring.n < f.n:
        raise ValueError(f"ring has {ring.n} exterior generators, form needs {f.n}")
    return ring


def segre_s2(f: QuadForm, ring: Ring | None = None) -> F2Element:
    """s_2(D) mod 2 = sum of x_I over the odd c_I."""
    ring = _exterior_ring(f, ring)
    return F2Element(ring, [(0, 0, 0, _mask(k), ring.unit_idx) for k in f.odd_keys()])


def segre_s2j(f: QuadForm, j: int, ring: Ring | None = None) -> F2Element:
    """s_{2j}(D) mod 2: x_U for every union U of j disjoint odd 4-sets, counted mod 2."""
    ring = _exterior_ring(f, ring)
    if j < 0:
        return ring.zero()
    if j == 0:
        return ring.one()
    blocks = [_mask(k) for k in f.odd_keys()]
    if not blocks:
        return ring.zero()
    by_low: dict[int, list[int]] = {}
    for b in blocks:
        by_low.setdefault(b & -b, []).append(b)

    memo: dict[int, int] = {0: 1}

    def partitions_mod2(mask: int) -> int:
        # number of ways to split mask into odd blocks, mod 2; the block holding
        # the lowest element is chosen first so each partition is counted once
        if mask in memo:
            return memo[mask]
        low = mask & -mask
        total = 0
        for b in by_low.get(low, ()):
            if b & mask == b:
                total ^= partitions_mod2(mask ^ b)
        memo[mask] = total
        return total

    layer = {0}
    for _ in range(j):
        layer = {m | b for m in layer for b in blocks if not m & b}
        if not layer:
            return ring.zero()
    return F2Element(ring, [(0, 0, 0, m, ring.unit_idx) for m in layer if partitions_mod2(m)])


def twisted_segre(s_list: Sequence[F2Element], d: int, c1: F2Element, j: int) -> F2Element:
    """s_j(E (x) L) = sum_l s_l(E) c1(L)^(j-l) binom(-d-l, j-l) for E of virtual rank d."""
    out = c1.ring.zero()
    for l in range(j + 1):
        if l >= len(s_list) or not binom_mod2(-d - l, j - l):
            continue
        out = out + s_list[l] * c1 ** (j - l)
    return out


@dataclass(frozen=True)
class EquivariantSegre:
    """s_{2j,Z2} = s + u.t + u^2.r; a part set to None is unknown.

    The parts are u-free elements of one ring.
    """

    j: int
    s_part: F2Element
    t_part: F2Element | None
    r_part: F2Element | None

    @classmethod
    def plain(cls, j: int, s_part: F2Element) -> "EquivariantSegre":
        """A class whose u-parts vanish (no odd cohomology to carry them)."""
        zero = s_part.ring.zero()
        return cls(j, s_part, zero, zero)

    @property
    def known_flags(self) -> tuple[bool, bool, bool]:
        return (True, self.t_part is not None, self.r_part is not None)

    @property
    def exact_below(self) -> int:
        """Assembled class is known modulo u^exact_below."""
        if self.t_part is None:
            return 1
        if self.r_part is None:
            return 2
        return 3

    @property
    def ring(self) -> Ring:
        return self.s_part.ring

    def degree_problems(self) -> list[str]:
        out = []
        for label, part, want in (("s", self.s_part, 4 * self.j),
                                  ("t", self.t_part, 4 * self.j - 1),
                                  ("r", self.r_part, 4 * self.j - 2)):
            if part is None or not part:
                continue
            if part.max_u():
                out.append(f"{label}-part of s_{2 * self.j} involves u")
            elif part.degrees() != {want}:
                out.append(f"{label}-part of s_{2 * self.j} is not homogeneous of degree {want}")
        return out


def assemble(es: EquivariantSegre, precision: int = 3, ring: Ring | None = None) -> F2Element:
    """s + u.t + u^2.r modulo u^precision.

    Unknown parts are allowed only when they sit at or above u^precision.
    """
    if ring is None:
        ring = es.ring.replace(u_trunc=3)
    out = ring.zero()
    for power, part in enumerate((es.s_part, es.t_part, es.r_part)):
        if power >= precision:
            break
        if part is None:
            label = "str"[power]
            raise UnknownPart(f"{label}-part of s_{2 * es.j},Z2 is unknown but needed mod u^{precision}")
        out = out + part.to_ring(ring).shift_u(power)
    return out


def euler_inverse_psi(d: int, seg: Sequence[EquivariantSegre], cutoff: int,
                      ring: Ring | None = None, precision: int = 3,
                      required_cutoff: int | None = None) -> F2Element:
    """psi(e_G(D)^-1) = sum_k mu^(-d/2-k) sum_i q^(k-i) s_{2i,Z2}(D) binom(-d/2-i, k-i).

    ``seg[i]`` holds s_{2i,Z2}; entries past the end of ``seg`` are zero, and a
    missing ``seg[0]`` defaults to 1.  The sum stops at k = cutoff.
    """
    if d % 2:
        raise ValueError("virtual rank must be even")
    if cutoff < 0:
        raise ValueError("cutoff must be nonnegative")
    if required_cutoff is not None and cutoff < required_cutoff:
        raise CutoffTooSmall(f"cutoff {cutoff} < required {required_cutoff}")
    if ring is None:
        n = seg[0].ring.n if seg else 0
        ring = Ring(n=n, u_trunc=3, laurent=True)
    half = d // 2
    classes = []
    for i in range(cutoff + 1):
        if i < len(seg):
            classes.append(assemble(seg[i], precision, ring))
        elif i == 0:
            classes.append(ring.one())
        else:
            break
    out = ring.zero()
    for k in range(cutoff + 1):
        mu_k = ring.mu(-half - k)
        for i, s in enumerate(classes[:k + 1]):
            if s and binom_mod2(-half - i, k - i):
                out = out + mu_k * ring.q(k - i) * s
    return out

