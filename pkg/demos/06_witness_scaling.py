"""The scale-cancelling witness: distortion that refuses to fade.

Under F^(2^k), the window J_(2^(k+1)-1) maps onto J_(2^k-1) and every
affine factor of 3 cancels, leaving exactly the distortion of the time-T
flow. The image window shrinks like 3^(-2^k); the distortion does not
budge. So the distortion bound cannot improve to 1 as image sizes shrink,
even though a single uniform bound holds at every depth.
"""

import math

from flowcutter import CookieMap, sbd_profile, sbd_witness

cmap = CookieMap.certified()

print("witness records (even orders; odd orders flow by -T instead):")
for k in (2, 4, 6):
    w = sbd_witness(cmap, k)
    print(f"  k={k}: F^{2 ** k:2d} maps J_{2 ** (k + 1) - 1:3d} onto "
          f"J_{2 ** k - 1:3d}, image size 3^{-2 ** k:d} "
          f"= {math.exp(w.image_log_size):.3e}")
    print(f"        measured ratio {w.measured_ratio:.12f}  "
          f"limit {w.limit_ratio:.12f}")

w = sbd_witness(cmap, 2)
print(f"\nthe ratio is pinned by the flow multiplier extremes at "
      f"alpha={w.alpha:.6f}, beta={w.beta:.6f}")
print(f"margin over 1: delta = {2 * w.margin:.6f} "
      f"(assertions use delta/2 = {w.margin:.6f})")

print("\nempirical distortion sup at image scale <= 1/r, depth <= 10:")
for entry in sbd_profile(cmap, 10, grid=257, threads=2):
    print(f"  r = {entry.r:4.0f}:  beta_hat = {entry.beta_hat:.9f}")
print("beta_hat stays near the witness ratio instead of decaying to 1:")
print("uniform boundedness and vanishing-scale improvement are different things.")
