#!/usr/bin/env python3
# Singular-kernel quadrature and the Riesz potential, with the exact
# dilation covariance used as a built-in oracle.

import numpy as np

import morreylab as ml
from morreylab.quadrature import QuadratureSpec, lattice_integrate, shell_integrate_singular

g1 = ml.euclidean_group(1)

# the midpoint lattice engine with its Richardson error bar
spec = QuadratureSpec(R_max=8.0, lattice_h=0.05)
res = lattice_integrate(g1, lambda p: np.exp(-p[..., 0] ** 2), spec)
print("integral of exp(-x^2):", res.value, "+/-", res.error_estimate,
      " (sqrt(pi) =", np.sqrt(np.pi), ")")

# the shell engine integrates u(y) |y|^(a) with exact per-shell kernel mass;
# closed form: integral_{-1}^{1} |y|^{-1/2} dy = 4
ind = ml.custom(lambda p: (np.abs(p[..., 0]) <= 1.0).astype(float), decay_radius=1.0)
res = shell_integrate_singular(g1, -0.5, ind, np.array([0.0]),
                               QuadratureSpec(R_max=2.5, lattice_h=0.05))
print("singular integral of |y|^(-1/2) over [-1,1]:", res.value)

# Riesz potential and its covariance: I(u o dilate_t)(x) = t^(-gamma) I(u)(tx)
u = ml.gaussian(g1, 1.0)
spec = QuadratureSpec(R_max=12.0, lattice_h=0.04)
gamma, t = 0.5, 2.0
for x in (0.0, 0.7, 1.4):
    x = np.array([x])
    lhs = ml.riesz_potential(g1, gamma, ml.dilated(g1, u, t), x, spec)
    rhs = t ** -gamma * ml.riesz_potential(g1, gamma, u, ml.dilate(g1, t, x), spec)
    print(f"  x={x[0]:+.1f}: I(u_t)(x) = {lhs:.6f},  t^-g I(u)(tx) = {rhs:.6f}")

# the same potential evaluated on a whole grid of points in one call
pts = np.linspace(-3, 3, 7)[:, None]
from morreylab.operators import riesz_values

print("riesz on a grid:", np.round(riesz_values(g1, gamma, u, pts, spec), 4))
