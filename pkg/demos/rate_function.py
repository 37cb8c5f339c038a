"""How (1/n) log H approaches the saddle-point rate for alpha(u) = 3u.

Below xi = 2 the exit probability tends to one; above it decays
exponentially with the rate S0(xi).
"""
from arcticpaths import asymptotics
from arcticpaths.boundary import BoundaryShape, realize
from arcticpaths.onepoint import H

shape = BoundaryShape.linear(3)
rate = asymptotics.rate_function(shape, 100)

print(" xi    S0(xi)   " + "  ".join(f"n={n:<5}" for n in (20, 50, 100)))
seqs = {n: realize(shape, n) for n in (20, 50, 100)}
for xi in (1.8, 2.0, 2.2, 2.4, 2.6, 2.8):
    vals = []
    for n, seq in seqs.items():
        h = H(seq, round(xi * n))
        vals.append(asymptotics.log_fraction(h) / n)
    print(f"{xi:4.1f}  {rate(xi):8.4f}  " + "  ".join(f"{v:8.4f}" for v in vals))

tab = asymptotics.convergence_study(shape, [20, 50, 100], xi_min=2.2, xi_max=2.8)
print("\nmax deviation on [2.2, 2.8]:",
      {n: round(d, 4) for n, d in tab.max_deviation.items()})

for n in (20, 50, 100, 200):
    seq = realize(shape, n)
    mid = next(ell / n for ell in range(seq.an + 1) if H(seq, ell) < 0.5)
    print(f"n={n:<4} H drops below 1/2 at xi = {mid}")
