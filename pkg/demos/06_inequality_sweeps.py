#!/usr/bin/env python3
# Theorem-level verification: admissibility of exponent tuples, ratio
# sweeps over dilations, and the negative control with a known slope.

import numpy as np

import morreylab as ml
from morreylab.harness import (
    admissible,
    dilation_sweep,
    perturb_q,
    predicted_mismatch,
    sweep_grids,
)
from morreylab.quadrature import QuadratureSpec

g1 = ml.euclidean_group(1)

# admissibility completes q from the exponent relation or names the
# violated hypothesis
print(admissible("stein_weiss_adams", Q=4, p=2, gamma=1, lam=1))
print(admissible("stein_weiss_adams", Q=4, p=2, gamma=1, lam=2.5))

# an accepted tuple makes both sides of the inequality scale identically
# under u -> u o dilate_t: the ratio sweep is flat
spec = QuadratureSpec(R_max=14.0, lattice_h=0.03)
u = ml.gaussian(g1, 0.5)
t_values = (0.25, 0.5, 1.0, 2.0, 4.0)
grids = sweep_grids(g1, spec, u, min(t_values), max(t_values))

cfg = admissible("adams_hls", Q=1, p=1.5, gamma=0.4, lam=0.2)
rec = dilation_sweep(g1, cfg, u, t_values, grids, spec)
print("accepted tuple q =", cfg.q)
print("  ratios:", np.round(rec.ratios, 4))
print("  fitted slope:", round(rec.fitted_slope, 4),
      " predicted:", rec.predicted_mismatch)
print("  estimated constant:", round(rec.estimated_constant, 4))

# shifting 1/q breaks the relation by a computable amount: the sweep's
# log-log slope must reproduce it
pert = perturb_q(cfg, 0.3)
rec = dilation_sweep(g1, pert, u, t_values, grids, spec)
print("negative control: slope", round(rec.fitted_slope, 4),
      " predicted", round(float(predicted_mismatch(pert)), 4))

# a consequence inequality (weighted Hardy) on R^2
g2 = ml.euclidean_group(2)
u2 = ml.gaussian(g2, 0.5)
spec2 = QuadratureSpec(R_max=16.0, lattice_h=0.1)
from morreylab.harness import adapted_spec_factory

fac = adapted_spec_factory(g2, spec2, u2, min(t_values), max(t_values))
grids2 = sweep_grids(g2, spec2, u2, min(t_values), max(t_values), n_per_axis=5)
cfg = admissible("hardy", Q=2, p=1.5, alpha=0, beta=1, lam=0.25)
rec = dilation_sweep(g2, cfg, u2, t_values, grids2, fac)
print("hardy on R^2: ratios", np.round(rec.ratios, 4))
