"""Weighted-norm inequalities as measurable reports: norm equivalence,
Poincare constants, interpolation, Sobolev embedding, and the dual pairing."""

import numpy as np

from rieszgrad import GridSpec, make_grid, sample
from rieszgrad import inequalities as iq
from rieszgrad import weights as wt

grid = make_grid(GridSpec(n=1, N=256, L=1.0))
family = iq.standard_family(grid, seed=0)

# --- the gradient-sum norm and the Bessel norm are two views of one space ----
w = wt.power_weight(grid, [0.5], 0.5, 2.0)
rep = iq.equivalence_report(family, 0.5, 2.0, w)
print(f"norm equivalence (weighted): max ratio {rep.max_ratio:.3f}, "
      f"median {rep.median_ratio:.3f}, verdict {rep.verdict}")

# --- Poincare constants by eigensolve ----------------------------------------
g2 = make_grid(GridSpec(n=1, N=256, L=2.0))
x = g2.axes[0]
mask = (x >= 0.75) & (x <= 1.25)
print("\nPoincare constant on an interval of length 1/2 (box edge 2):")
for s in (0.1, 0.3, 0.5, 0.7, 0.9):
    est = iq.poincare_constant(g2, mask, s, 2.0)
    print(f"  s={s}: C = {est.constant:.4f}, "
          f"C (1 - 2^-s) = {est.constant * (1 - 2**-s):.4f}, "
          f"eigenvalue {est.eigenvalue:.4f}")

# --- interpolation between gradient orders ------------------------------------
u = sample(lambda x: np.sin(2 * np.pi * 7 * x), grid)
rep = iq.gn_report([u], 0.2, 0.5, 0.8, 2.0)
print(f"\nsingle-mode interpolation ratio (sharp): {rep.max_ratio:.15f}")
rep = iq.gn_report(family, 0.2, 0.5, 0.8, 2.0, w)
print(f"family interpolation ratio (weighted):    {rep.max_ratio:.3f} "
      f"({rep.verdict})")

# --- Sobolev embedding with the substituted weight ----------------------------
g3 = make_grid(GridSpec(n=2, N=64, L=1.0))
fam3 = iq.standard_family(g3, seed=1, bumps=4, modes=2)
w3 = wt.power_weight(g3, [0.5, 0.5], 0.5, 2.0)
rep = iq.sobolev_report(fam3, 0.5, 2.0, w3)
print(f"\nSobolev embedding n=2, s=1/2, p=2: target exponent p* = "
      f"{rep.params['p_star']}, max ratio {rep.max_ratio:.3f} ({rep.verdict})")

# --- the dual pairing obeys Hoelder with the dual weight ----------------------
from rieszgrad import fracops as fo
gv = fo.riesz_gradient(family[0], 0.5)
rep = iq.dual_representation_check(gv, family, 0.5, 2.0, w)
print(f"\ndual pairing vs Hoelder bound: max ratio {rep.max_ratio:.6f} "
      f"({rep.verdict})")
