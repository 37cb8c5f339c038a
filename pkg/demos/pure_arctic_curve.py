"""The arctic curve for alpha(u) = 3u and its algebraic equation.

Writes pure3.svg and pure3.csv into the output directory (default: .).
"""
import sys
from pathlib import Path

from arcticpaths import algebraic, arctic, svg
from arcticpaths.boundary import BoundaryShape

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
out.mkdir(parents=True, exist_ok=True)

shape = BoundaryShape.linear(3)
parts = arctic.portions(shape, 400)
sp = arctic.special_points(shape)
print("apex          ", (sp.X1Y1.X, sp.X1Y1.Y))
print("right end     ", (sp.X0Y0.X, sp.X0Y0.Y))
print("left end      ", (sp.XinfYinf.X, sp.XinfYinf.Y))
print("quartic residual over all samples: "
      f"{algebraic.max_residual(algebraic.pure3, parts):.2e}")
for p in parts:
    print(f"{p.kind:<11} tangency {p.tangency_residual():.1e}  "
          f"Legendre {arctic.legendre_check(p):.1e}")

res = arctic.resolvent(shape)
fan = [3.2, 4.0, 6.0, -0.5, -2.0]
figure = svg.render(parts, 3.0, fans=fan,
                    tangents=lambda t: (arctic.tangent_at(res, t).slope, t))
(out / "pure3.svg").write_text(figure)
(out / "pure3.csv").write_text(arctic.portions_to_csv(parts))
print(f"wrote {out / 'pure3.svg'} and {out / 'pure3.csv'}")
