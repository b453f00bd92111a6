"""The Pin(2) invariants of mK3, computed directly and through the product formula."""

from __future__ import annotations

from swmod2 import connect, k3, mk3_table, multiple_k3, sw_pin2, sw_product_formula, torus4, verify_consistency

for m in range(1, 5):
    row = ", ".join(f"q^{j}: {v}" for j, v in mk3_table(m).items())
    print(f"{m}K3  {row}")

# fold the product formula: (m-1)K3 # K3
acc = k3()
for m in range(2, 5):
    print(f"{m}K3 from the product formula, q^{m - 1}:", sw_product_formula(acc, k3(), 0, m - 1))
    acc = connect(acc, k3())

print(sw_pin2(multiple_k3(3), 0, 2))
print(verify_consistency(k3(), k3(), 3).summary())
# b1 > 0: the comparison runs modulo u^(B-2)
print(verify_consistency(torus4(), k3(), 1).summary())
