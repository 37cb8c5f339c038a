"""Extra curve portions created by unit-spaced stretches and gaps.

Writes one SVG per shape into the output directory (default: .).
"""
import sys
from pathlib import Path

from arcticpaths import algebraic, arctic, svg
from arcticpaths.shapefile import load_shape

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
out.mkdir(parents=True, exist_ok=True)
shapes = Path(__file__).resolve().parent.parent / "shapes"

for name in ("reentrance", "gap", "hexagon", "mixed", "symmetric5"):
    shape = load_shape(shapes / f"{name}.shape")
    parts = arctic.portions(shape, 300)
    print(f"\n{name}: alpha(1) = {shape.alpha1}")
    for p in parts:
        lo, hi = p.t_domain
        extra = ""
        if p.cusps:
            extra += f" cusps at t={[round(c, 4) for c in p.cusps]}"
        touch = arctic.axis_tangencies(p) if p.kind == "gap" else []
        if touch:
            extra += f" touches Y=0 at X={[round(t, 4) for t, _ in touch]}"
        flag = "conjectured" if p.conjectured else "proven"
        print(f"  {p.kind:<18} t in ({lo:.3g}, {hi:.3g})  {flag}{extra}")
    if name == "hexagon":
        rel = algebraic.hexagon_ellipse(1 / 3, 1, 2 / 3)
        print(f"  ellipse residual {algebraic.max_residual(rel, parts):.1e}")
    (out / f"{name}.svg").write_text(svg.render(parts, float(shape.alpha1),
                                                triangular=name == "symmetric5"))
print(f"\nfigures written to {out}")
