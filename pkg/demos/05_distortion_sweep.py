"""How far the iterated slopes stray from constant, per depth.

For each depth-k interval, the distortion is the ratio of the largest to
the smallest slope of F^k over it. The block-product ceiling built from
the certified curvature constant caps it uniformly in k. The interesting
structure: maxima live on the alternating addresses 0101..., and the
per-depth increments shrink geometrically with the first-return
multiplier of the alternating orbit (about a factor 9.6 per two depths).
"""

import time

from flowcutter import CookieMap, bd_sweep, distortion

cmap = CookieMap.certified()

t0 = time.time()
reports = bd_sweep(cmap, 10, grid=257, refine_iters=24, threads=2)
print(f"exhaustive sweep to depth 10 ({time.time() - t0:.1f}s)\n")
print("depth   C_k            argmax word    ceiling")
for r in reports:
    print(f"  {r.depth:3d}   {r.c_k:.10f}  {str(r.argmax_word):>12s}"
          f"   {r.c_theory:.2f}")

c = {r.depth: r.c_k for r in reports}
print("\nincrement ratios (C_(k+2) - C_k shrink by ~ the return multiplier):")
for k in (3, 5, 7):
    num = c[k + 2] - c[k]
    den = c[k] - c[k - 2]
    print(f"  (C_{k + 2}-C_{k}) / (C_{k}-C_{k - 2}) = {num / den:.4f}")

print("\nsingle-word drilldowns:")
for bits in ("1111", "0001", "010101"):
    print(f"  distortion over I_{bits} = {distortion(cmap, bits):.10f}")
