#!/usr/bin/env python3
"""Hardy-type ratios int |fhat| / w^d against ||f||_1.

The tent on a box makes both sides closed-form; half-line products probe the
sharp constant pi; the corner family shows the t^(1-d) blow-up that separates
d <= 1 from d > 1 for polytopes.
"""

import math

import numpy as np

from pwlab.geometry import Ball, unit_box
from pwlab.hardy import (
    adjusted_integrability_report,
    corner_family_sweep,
    extremal_halfline_pair,
    halfline_ratio,
    random_halfline_pair,
    tent_ratio,
)

print("=== tent anchors: the d = 1 integrand is exactly 1 on the support ===")
print(f"  interval: ratio {tent_ratio(1):.5f}   (exact value 2)")
print(f"  square:   ratio {tent_ratio(2):.5f}   (exact value 4)")

print()
print("=== half-line products and the constant pi ===")
rng = np.random.default_rng(0)
vals = []
for _ in range(200):
    g, h = random_halfline_pair(rng)
    vals.append(halfline_ratio(g, h, freq_points=g.size))
print(f"  200 random products: max ratio {max(vals):.4f}, mean {np.mean(vals):.4f}")
g, h = extremal_halfline_pair()
extremal = halfline_ratio(g, h, freq_points=g.size, box_halfwidth=64.0, max_doublings=7)
print(f"  log-spread extremal pair: {extremal:.4f}  (pi = {math.pi:.4f})")

print()
print("=== corner family on the unit square: ratio ~ t^(1-d) ===")
for d in (0.5, 1.0, 1.5):
    res = corner_family_sweep(d)
    print(f"  d = {d}: slope {res.slope:+.4f}  max/min over two decades "
          f"{res.max_over_min:.4f}")

print()
print("=== integrability verdicts ===")
for body, name, ds in ((unit_box(2), "square", [0.5, 1.0, 1.5]),
                       (Ball(np.zeros(2), 1.0), "disc", [0.5, 0.8, 1.5])):
    rows = adjusted_integrability_report(body, ds)
    for row in rows:
        print(f"  {name:<7} d = {row.d}: {row.verdict}")
