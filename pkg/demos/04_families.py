"""Families invariants over a base with cohomology F2[w]/(w^5)."""

from __future__ import annotations

from swmod2 import BaseAlgebra, FamilyData, constraint_check, families_sw, families_sw_pin2
from swmod2.families import equivariant_euler_hplus, family_ring

base = BaseAlgebra.truncated_polynomial("w", 5)
ring = family_ring(base)
w = ring.basis_element("w")

# b_plus = 4, sigma = -16 (the K3 fibre with one extra positive class), w_1(H+) = w
family = FamilyData("K3-like", base, 4, -16, 0, [ring.one(), w, ring.zero(), ring.zero(), ring.zero()])
print("constraints:", constraint_check(family) or "ok")
print("e(H+) =", equivariant_euler_hplus(family))
print("SW_Pin2(1) =", families_sw_pin2(family, 0))
print("SW(1) =", families_sw(family, 0))

# setting w_4 = w^4 is incompatible with negative signature
bad = FamilyData("bad", base, 4, -16, 0, [ring.one(), w, ring.zero(), ring.zero(), w ** 4])
for problem in constraint_check(bad):
    print("violation:", problem)
