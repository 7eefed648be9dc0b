"""Accuracy of the two evaluation routes.

Compares the transform-path slices against direct quadrature and against the
closed-form damped Gaussian, and checks the Plancherel identity per slice.
"""

import numpy as np

from ctschro import (
    EvolutionParams,
    amplitude_bound,
    evaluate_along_curve,
    field_value,
    from_profile,
    holder_curve,
    make_plan,
    propagate_slice,
    random_band_limited,
    slice_l2_norm,
    spectral_l2_norm,
)

print("== damped Gaussian against the closed form ==")
gamma = 1.5
f = from_profile(lambda xi: np.exp(-xi ** 2 / 2), -12.0, 12.0, 4801)
params = EvolutionParams(m=2.0, gamma=gamma, damping=True)
plan = make_plan(f, params)
ys = np.linspace(-2.0, 2.0, 9)
for t in (0.0, 0.1, 1.0):
    a = 0.5 + t ** gamma - 1j * t
    closed = np.sqrt(np.pi / a) * np.exp(-ys ** 2 / (4 * a)) / (2 * np.pi)
    got = field_value(propagate_slice(plan, t), ys)
    print(f"t={t:4.2f}: worst relative error "
          f"{np.max(np.abs(got - closed) / np.abs(closed)):.2e}")

print("\n== transform vs direct quadrature, band level 2^6 ==")
lam = 64.0
fb = random_band_limited(lam, seed=5)
pb = EvolutionParams(m=2.0, gamma=1.0, damping=False)
curve = holder_curve(0.5)
plan_b = make_plan(fb, pb, curve)
rng = np.random.default_rng(0)
floor = 1e-2 * amplitude_bound(fb)
worst = 0.0
for _ in range(20):
    x, t = rng.uniform(-1, 1), rng.uniform(0, 1)
    a = evaluate_along_curve(plan_b, curve, x, t, path="transform")
    b = evaluate_along_curve(plan_b, curve, x, t, path="quadrature")
    worst = max(worst, abs(a - b) / max(abs(b), floor))
print(f"worst relative disagreement over 20 random (x, t): {worst:.2e}")

print("\n== Plancherel identity per slice ==")
pd = EvolutionParams(m=2.0, gamma=0.8, damping=True)
plan_d = make_plan(fb, pd)
for t in (0.0, 1e-4, 1e-3):
    a = slice_l2_norm(propagate_slice(plan_d, t))
    b = spectral_l2_norm(fb, pd, t)
    print(f"t={t:7.1e}: slice norm {a:.10f}  spectral norm {b:.10f}")
