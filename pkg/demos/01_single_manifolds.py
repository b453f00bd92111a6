"""Mod 2 invariants of a few standard spin 4-manifolds."""

from __future__ import annotations

from swmod2 import compute_report, hyperelliptic, k3, kodaira_thurston, sw_pin2, torus4

for md in (k3(), torus4(), kodaira_thurston(), hyperelliptic()):
    rep = compute_report(md)
    print(f"{md.name}: b1={md.b1} b_plus={md.b_plus} sigma={md.sigma}")
    print(f"  SW(1) = {rep.basic[0]}")
    print(f"  nonvanishing: {rep.nonvanishing[1]}")

# With only the quadruple cup product known, the Pin(2) class of T4 is pinned
# down modulo u; the q2 and q3 tables supply the remaining u-parts.
print(sw_pin2(torus4(), 0, 0))
print(sw_pin2(torus4(q2=[(1, 2)], q3=[(1, 2, 3)]), 0, 0))
