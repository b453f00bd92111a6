"""A smoothability obstruction and the effect of twisting the spin structure."""

from __future__ import annotations

from swmod2 import ManifoldData, QuadForm, smoothability_obstruction, sw_basic, twist_b2, twist_defect_b1

# T4 # 2(-E8) has the cohomology of a spin manifold with b_plus = 3 and
# sigma = -16, but it keeps the odd quadruple product of T4.
quad = QuadForm(4, {(1, 2, 3, 4): 1})
print("T4 # 2E8:", smoothability_obstruction(4, 3, -16, quad).value)
print("T4:      ", smoothability_obstruction(4, 3, 0, quad).value)

# b_plus = 2 with one extra mod 2 class e4: twisting by e4 flips q3 on {1,2,3}.
md = ManifoldData("Z", 3, 2, 0, q2=(), q3=(), z2_rank=4, z2_quad=QuadForm(4, {(1, 2, 3, 4): 1}))
twisted = twist_b2(md, [0, 0, 0, 1])
print("SW(1) before:", sw_basic(md, 0), " after:", sw_basic(twisted, 0))

# b_plus = 1: the second difference of q2 under two twists
md1 = ManifoldData("Y", 2, 1, 0, q2=(), z2_rank=4, z2_quad=QuadForm(4, {(1, 2, 3, 4): 1}))
print("<A.B.a.b> =", twist_defect_b1(md1, [0, 0, 1, 0], [0, 0, 0, 1], [1, 0], [0, 1]))
