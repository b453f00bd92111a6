"""Exact arithmetic in graded-commutative algebras over F2.

The ambient algebra is

    Lambda[x_1..x_n] (x) F2[u]/(u^r) (x) F2[q] (x) F2[mu, mu^-1] (x) H

where H is an optional finite graded base algebra (used for families).  Over F2
graded commutativity is plain commutativity, so the only relations beyond
commutativity are x_i^2 = 0, u^r = 0 and those of H.

A monomial is the tuple ``(mu_exp, q_exp, u_exp, ext_mask, base_idx)``.  Tuple
order is the canonical term order, which makes rendering deterministic.
Generator indices are 1-based in the public API (``x1`` is bit 0 of the mask).
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Mapping, Sequence

from .errors import NotMonic, RingMismatch

__all__ = [
    "BaseAlgebra",
    "Ring",
    "F2Element",
    "add",
    "mul",
    "mu_coefficient",
    "reduce_by_monic_u",
    "render",
]

Monomial = tuple  # (mu_exp, q_exp, u_exp, ext_mask, base_idx)

MU, Q, U, EXT, BASE = range(5)


def _xor_sets(parts):
    acc = set()
    for part in parts:
        acc.symmetric_difference_update(part)
    return frozenset(acc)


@dataclass(frozen=True)
class BaseAlgebra:
    """A finite commutative graded F2 algebra given by a multiplication table.

    ``mult_table[i][j]`` is the set of basis indices whose sum is ``b_i * b_j``.
    The constructor checks commutativity, the unit, grading and associativity,
    so an instance that exists is safe to use.
    """

    basis: tuple
    unit_index: int
    mult_table: tuple

    def __post_init__(self):
        basis = tuple((str(name), int(deg)) for name, deg in self.basis)
        table = tuple(tuple(frozenset(cell) for cell in row) for row in self.mult_table)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "mult_table", table)
        problems = self.problems()
        if problems:
            raise ValueError("invalid base algebra: " + "; ".join(problems))

    @classmethod
    def from_products(cls, basis: Sequence[tuple[str, int]], unit_index: int,
                      products: Mapping[tuple[int, int], Iterable[int]]) -> "BaseAlgebra":
        """Build the full table from the listed products.

        Products with the unit and the mirror image of each listed pair are
        filled in; unlisted pairs multiply to zero.
        """
        size = len(basis)
        table = [[set() for _ in range(size)] for _ in range(size)]
        for i in range(size):
            table[unit_index][i] = {i}
            table[i][unit_index] = {i}
        for (i, j), cell in products.items():
            if i == unit_index or j == unit_index:
                continue
            table[i][j] = set(cell)
            table[j][i] = set(cell)
        return cls(tuple(basis), unit_index, tuple(tuple(row) for row in table))

    @classmethod
    def point(cls) -> "BaseAlgebra":
        return cls((("1", 0),), 0, ((frozenset({0}),),))

    @classmethod
    def truncated_polynomial(cls, name: str, height: int, degree: int = 1) -> "BaseAlgebra":
        """F2[w]/(w^height) with deg w = degree."""
        basis = [("1", 0)] + [(name if k == 1 else f"{name}^{k}", k * degree) for k in range(1, height)]
        products = {(i, j): [i + j] for i in range(1, height) for j in range(1, height) if i + j < height}
        return cls.from_products(basis, 0, products)

    @classmethod
    def exterior(cls, n: int, prefix: str = "x") -> "BaseAlgebra":
        """Lambda[x_1..x_n] with a basis of 2^n masks."""
        masks = sorted(range(1 << n), key=lambda m: (bin(m).count("1"), m))
        index = {m: k for k, m in enumerate(masks)}

        def name(m):
            if m == 0:
                return "1"
            return "^".join(f"{prefix}{i + 1}" for i in range(n) if m >> i & 1)

        basis = [(name(m), bin(m).count("1")) for m in masks]
        products = {}
        for a, b in product(masks, masks):
            if a and b and not a & b:
                products[index[a], index[b]] = [index[a | b]]
        return cls.from_products(basis, index[0], products)

    def size(self) -> int:
        return len(self.basis)

    def degree(self, idx: int) -> int:
        return self.basis[idx][1]

    def index(self, name: str) -> int:
        for k, (nm, _) in enumerate(self.basis):
            if nm == name:
                return k
        raise KeyError(name)

    def product_of_sets(self, left: Iterable[int], right: Iterable[int]) -> frozenset:
        return _xor_sets(self.mult_table[i][j] for i in left for j in right)

    def problems(self) -> list[str]:
        size = len(self.basis)
        out = []
        if not 0 <= self.unit_index < size:
            return [f"unit index {self.unit_index} out of range"]
        if len(self.mult_table) != size or any(len(row) != size for row in self.mult_table):
            return [f"multiplication table is not {size}x{size}"]
        for row in self.mult_table:
            for cell in row:
                if any(not 0 <= k < size for k in cell):
                    return ["multiplication table refers to a missing basis index"]
        if self.degree(self.unit_index) != 0:
            out.append("unit must have degree 0")
        for i in range(size):
            if self.mult_table[self.unit_index][i] != {i}:
                out.append(f"unit does not act as identity on {self.basis[i][0]}")
            for j in range(size):
                cell = self.mult_table[i][j]
                if cell != self.mult_table[j][i]:
                    out.append(f"not commutative at ({i}, {j})")
                want = self.degree(i) + self.degree(j)
                if any(self.degree(k) != want for k in cell):
                    out.append(f"product ({i}, {j}) is not homogeneous of degree {want}")
        if out:
            return out
        for i, j, k in product(range(size), repeat=3):
            left = self.product_of_sets(self.mult_table[i][j], (k,))
            right = self.product_of_sets((i,), self.mult_table[j][k])
            if left != right:
                out.append(f"not associative at ({i}, {j}, {k})")
                break
        return out

    def relabel(self, perm: Sequence[int]) -> "BaseAlgebra":
        """The same algebra with basis element i moved to position perm[i]."""
        size = len(self.basis)
        inv = [0] * size
        for old, new in enumerate(perm):
            inv[new] = old
        basis = tuple(self.basis[inv[k]] for k in range(size))
        table = tuple(
            tuple(frozenset(perm[c] for c in self.mult_table[inv[a]][inv[b]]) for b in range(size))
            for a in range(size)
        )
        return BaseAlgebra(basis, perm[self.unit_index], table)


@dataclass(frozen=True)
class Ring:
    """Descriptor of an ambient algebra; elements only combine within one ring.

    ``u_trunc`` of None means no truncation in u.  ``u_trunc=1`` gives a u-free
    ring.
    """

    n: int = 0
    u_trunc: int | None = None
    laurent: bool = False
    base: BaseAlgebra | None = None

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be nonnegative")
        if self.u_trunc is not None and self.u_trunc < 0:
            raise ValueError("u truncation must be nonnegative")

    def replace(self, **changes) -> "Ring":
        return dataclasses.replace(self, **changes)

    @property
    def unit_idx(self):
        return None if self.base is None else self.base.unit_index

    def zero(self) -> "F2Element":
        return F2Element._raw(self, frozenset())

    def one(self) -> "F2Element":
        return self.monomial()

    def monomial(self, mu: int = 0, q: int = 0, u: int = 0, mask: int = 0, base=None) -> "F2Element":
        if base is None:
            base = self.unit_idx
        elif isinstance(base, str):
            base = self.base.index(base)
        return F2Element(self, [(mu, q, u, mask, base)])

    def x(self, *indices: int) -> "F2Element":
        """The exterior monomial x_i1 ^ x_i2 ^ ... (1-based; repeated index gives 0)."""
        mask = 0
        for i in indices:
            bit = 1 << (i - 1)
            if mask & bit:
                return self.zero()
            mask |= bit
        return self.monomial(mask=mask)

    def u(self, k: int = 1) -> "F2Element":
        return self.monomial(u=k)

    def q(self, k: int = 1) -> "F2Element":
        return self.monomial(q=k)

    def mu(self, k: int = 1) -> "F2Element":
        return self.monomial(mu=k)

    def basis_element(self, idx) -> "F2Element":
        return self.monomial(base=idx)

    def from_basis_indices(self, indices: Iterable[int]) -> "F2Element":
        return F2Element(self, [(0, 0, 0, 0, k) for k in indices])

    def check_monomial(self, mono: Monomial) -> None:
        mu, q, u, mask, b = mono
        if q < 0 or u < 0 or mask < 0:
            raise ValueError(f"negative exponent in {mono}")
        if mu != 0 and not self.laurent:
            raise RingMismatch(f"mu power in a ring without mu: {mono}")
        if mask >> self.n:
            raise RingMismatch(f"exterior generator beyond x{self.n}: {mono}")
        if self.base is None:
            if b is not None:
                raise RingMismatch("base index in a ring without base algebra")
        elif b is None or not 0 <= b < self.base.size():
            raise RingMismatch(f"bad base index {b}")


def monomial_degree(ring: Ring, mono: Monomial) -> int:
    mu, q, u, mask, b = mono
    deg = bin(mask).count("1") + u + 4 * q + 4 * mu
    if ring.base is not None:
        deg += ring.base.degree(b)
    return deg


class F2Element:
    """An immutable element: a finite set of monomials with coefficient 1."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: Ring, terms: Iterable[Monomial] = ()):
        acc = set()
        trunc = ring.u_trunc
        for mono in terms:
            mono = tuple(mono)
            ring.check_monomial(mono)
            if trunc is not None and mono[U] >= trunc:
                continue
            if mono in acc:
                acc.remove(mono)
            else:
                acc.add(mono)
        self.ring = ring
        self.terms = frozenset(acc)

    @classmethod
    def _raw(cls, ring: Ring, terms: frozenset) -> "F2Element":
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.terms = terms
        return obj

    # arithmetic

    def _check(self, other: "F2Element") -> None:
        if not isinstance(other, F2Element):
            raise TypeError(f"expected F2Element, got {type(other).__name__}")
        if other.ring != self.ring:
            raise RingMismatch(f"{self.ring} vs {other.ring}")

    def __add__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            other = self.ring.one() if other % 2 else self.ring.zero()
        self._check(other)
        return F2Element._raw(self.ring, self.terms ^ other.terms)

    __radd__ = __add__
    __sub__ = __add__

    def __neg__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return self if other % 2 else self.ring.zero()
        self._check(other)
        return F2Element._raw(self.ring, _mul_terms(self.ring, self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not supported")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, int) and not isinstance(other, bool):
            return self == (self.ring.one() if other % 2 else self.ring.zero())
        if not isinstance(other, F2Element):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash((self.ring, self.terms))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.monomials())

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"F2Element({render(self)!r})"

    # inspection

    def monomials(self) -> list:
        return sorted(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set[int]:
        return {monomial_degree(self.ring, m) for m in self.terms}

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def degree(self) -> int | None:
        """The common degree of all terms, None for zero."""
        degs = self.degrees()
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element {self}")
        return next(iter(degs))

    def min_u(self) -> int | None:
        return min((m[U] for m in self.terms), default=None)

    def max_u(self) -> int | None:
        return max((m[U] for m in self.terms), default=None)

    # coefficient extraction and ring changes

    def u_coefficient(self, k: int) -> "F2Element":
        return F2Element._raw(self.ring, frozenset(m[:U] + (0,) + m[U + 1:] for m in self.terms if m[U] == k))

    def q_coefficient(self, k: int) -> "F2Element":
        return F2Element._raw(self.ring, frozenset(m[:Q] + (0,) + m[Q + 1:] for m in self.terms if m[Q] == k))

    def truncate_u(self, p: int) -> "F2Element":
        """Reduce modulo u^p."""
        return F2Element._raw(self.ring, frozenset(m for m in self.terms if m[U] < p))

    def shift_u(self, k: int) -> "F2Element":
        """Multiply by u^k (k may be negative if every term is divisible by u^-k)."""
        if k < 0 and any(m[U] < -k for m in self.terms):
            raise ValueError(f"{self} is not divisible by u^{-k}")
        return F2Element(self.ring, [(m[MU], m[Q], m[U] + k, m[EXT], m[BASE]) for m in self.terms])

    def to_ring(self, ring: Ring, offset: int = 0) -> "F2Element":
        """Embed into another ring, moving x_i to x_{i+offset}.

        Terms killed by the target's u-truncation disappear.
        """
        if ring.base != self.ring.base:
            raise RingMismatch("base algebras differ")
        return F2Element(ring, [(m[MU], m[Q], m[U], m[EXT] << offset, m[BASE]) for m in self.terms])

    def q_parts(self) -> dict[int, "F2Element"]:
        out: dict[int, set] = {}
        for m in self.terms:
            out.setdefault(m[Q], set()).add(m[:Q] + (0,) + m[Q + 1:])
        return {k: F2Element._raw(self.ring, frozenset(v)) for k, v in out.items()}


def _mul_terms(ring: Ring, left: frozenset, right: frozenset) -> frozenset:
    acc: set = set()
    trunc = ring.u_trunc
    base = ring.base
    for m1 in left:
        mu1, q1, u1, x1, b1 = m1
        for m2 in right:
            x2 = m2[EXT]
            if x1 & x2:
                continue
            uu = u1 + m2[U]
            if trunc is not None and uu >= trunc:
                continue
            head = (mu1 + m2[MU], q1 + m2[Q], uu, x1 | x2)
            if base is None:
                outs = (head + (None,),)
            else:
                outs = [head + (b,) for b in base.mult_table[b1][m2[BASE]]]
            for t in outs:
                if t in acc:
                    acc.remove(t)
                else:
                    acc.add(t)
    return frozenset(acc)


def add(a: F2Element, b: F2Element) -> F2Element:
    return a + b


def mul(a: F2Element, b: F2Element) -> F2Element:
    return a * b


def mu_coefficient(a: F2Element, k: int) -> F2Element:
    """Terms of a carrying mu^k, with the mu power removed."""
    return F2Element._raw(a.ring, frozenset((0,) + m[1:] for m in a.terms if m[MU] == k))


def reduce_by_monic_u(a: F2Element, e: F2Element, deg_u: int) -> F2Element:
    """Remainder of a on division by e, viewed as polynomials in u."""
    a._check(e)
    lead = {m for m in e.terms if m[U] >= deg_u}
    unit = (0, 0, deg_u, 0, e.ring.unit_idx)
    if lead != {unit}:
        raise NotMonic(f"u^{deg_u} coefficient of {e} is not the unit")
    tail = e.terms - {unit}
    terms = set(a.terms)
    while True:
        high = [m for m in terms if m[U] >= deg_u]
        if not high:
            break
        top = max(high, key=lambda m: m[U])
        shifted = frozenset({(top[MU], top[Q], top[U] - deg_u, top[EXT], top[BASE])})
        terms.remove(top)
        terms.symmetric_difference_update(_mul_terms(a.ring, shifted, tail))
    return F2Element._raw(a.ring, frozenset(terms))


def _render_power(name: str, k: int) -> str:
    return name if k == 1 else f"{name}^{k}"


def render_monomial(ring: Ring, mono: Monomial) -> str:
    mu, q, u, mask, b = mono
    parts = []
    if mu:
        parts.append(_render_power("mu", mu))
    if q:
        parts.append(_render_power("q", q))
    if u:
        parts.append(_render_power("u", u))
    if mask:
        parts.append("^".join(f"x{i + 1}" for i in range(mask.bit_length()) if mask >> i & 1))
    if ring.base is not None and b != ring.base.unit_index:
        parts.append(ring.base.basis[b][0])
    return ".".join(parts) if parts else "1"


def render(a: F2Element) -> str:
    if not a.terms:
        return "0"
    return " + ".join(render_monomial(a.ring, m) for m in a.monomials())
