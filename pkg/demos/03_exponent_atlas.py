"""The sharp-exponent atlas.

Prints gamma-profiles of the convergence threshold s(alpha, gamma, m) with
their theorem labels, the regime breakpoints, and a continuity audit.
"""

from fractions import Fraction as F

import numpy as np

from ctschro import breakpoints, continuity_check, exponent

print("== profile in gamma at alpha = 1/3, quadratic dispersion ==")
for g in (0.5, 0.7, 1.0, 1.2, 1.6, 2.0, 3.0):
    res = exponent(alpha=1 / 3, gamma=g, m=2.0)
    print(f"gamma={g:4.2f}: s = {float(res.s):.6f}  {res.theorem}  {res.regime}")

print("\n== exact rational queries ==")
for a, g, m in [(F(1, 2), F(3), F(2)), (F(3, 5), F(11, 10), F(3, 2)),
                (F(1), F(5), F(1))]:
    res = exponent(alpha=a, gamma=g, m=m)
    print(f"(alpha={a}, gamma={g}, m={m}) -> s = {res.s}  [{res.theorem}]")

print("\n== regime breakpoints ==")
for a, m in [(F(1, 3), F(2)), (F(3, 5), F(3, 2)), (F(2, 5), F(3))]:
    bps = breakpoints(a, m)
    marks = ", ".join(f"{bp.gamma} (s={bp.left})" for bp in bps)
    print(f"alpha={a}, m={m}: {marks}")

print("\n== continuity audit on a 30 x 30 grid ==")
worst = 0.0
for a in np.geomspace(0.02, 1.0, 30):
    for m in np.geomspace(0.05, 4.0, 30):
        for gap in continuity_check(float(a), float(m)):
            worst = max(worst, gap.gap)
print(f"largest gap across interior breakpoints: {worst:.2e}")
