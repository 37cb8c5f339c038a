"""Counting path families five different ways.

The same number comes out of three LGV determinants and two product
formulas; for equally spaced starting points it collapses to a power of p.
"""
from arcticpaths import exactcomb
from arcticpaths.boundary import StartSequence, complement_of, tilde_of

seq = StartSequence((0, 2, 3, 6, 10, 12, 15))
print("starting points      ", seq)
print("reflected sequence   ", tilde_of(seq))
print("complementary points ", complement_of(seq).b)
print()
for label, value in [
    ("det A", exactcomb.det_exact(exactcomb.lgv_A(seq))),
    ("det A~", exactcomb.det_exact(exactcomb.lgv_Atilde(seq))),
    ("det A^", exactcomb.det_exact(exactcomb.lgv_Ahat(seq))),
    ("Vandermonde ratio", exactcomb.partition_product(seq)),
    ("complement form", exactcomb.partition_bform(seq)),
]:
    print(f"{label:<18} {value}")

print("\nequally spaced points a_i = p i:")
for p in (2, 3, 5):
    row = [exactcomb.partition_product(StartSequence(tuple(p * i for i in range(n + 1))))
           for n in range(1, 6)]
    print(f"  p={p}: {row}  (p^(n(n+1)/2))")

small = StartSequence((0, 2, 4))
print(f"\nbrute force on {small}: {exactcomb.brute_force_count(small)} configurations")
for cfg in exactcomb.brute_force_enumerate(small):
    print("  ", cfg.to_text())
