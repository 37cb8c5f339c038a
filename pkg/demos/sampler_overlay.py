"""Random configurations against the predicted curve for alpha(u) = 3u.

The chain starts from the lowest configuration; with a long burn-in the top
path climbs up to the arctic curve.  Writes overlay.svg and overlay.csv.
"""
import sys
from pathlib import Path

import numpy as np

from arcticpaths import arctic, sampler
from arcticpaths.boundary import BoundaryShape, realize

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
out.mkdir(parents=True, exist_ok=True)
n = int(sys.argv[2]) if len(sys.argv) > 2 else 40

shape = BoundaryShape.linear(3)
seq = realize(shape, n)
parts = arctic.portions(shape, 400)
X, Y = sampler.upper_envelope(parts, 2.0)

for burn in (10 ** 5, 10 ** 6, 10 ** 7, 5 * 10 ** 7):
    samples = sampler.sample_ensemble(seq, 20, burn_in=burn, thin=10 ** 5, seed=1)
    pts = np.concatenate([sampler.outer_shell(s) for s in samples])
    far = pts[pts[:, 0] > 2.05]
    near = np.mean(sampler._dist_to_polyline(far, X, Y) <= 0.1)
    print(f"burn-in {burn:>9}: inside {sampler.overlay_fraction(pts, parts, 2.0):.3f}, "
          f"within 0.1 of the curve {near:.3f}")

sampler.overlay_export(samples, parts, 3.0, svg_path=out / "overlay.svg",
                       csv_path=out / "overlay.csv")
print(f"wrote {out / 'overlay.svg'}")
