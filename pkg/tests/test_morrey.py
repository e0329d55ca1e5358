import math

import numpy as np
import pytest

from morreylab import custom, dilated, gaussian
from morreylab.errors import DomainError
from morreylab.morrey import (
    MorreyEstimate,
    MorreyParams,
    default_centers,
    default_radii,
    embedding_check,
    local_morrey_norm,
    morrey_norm,
)
from morreylab.quadrature import QuadratureSpec

SPEC = QuadratureSpec(R_max=12.0, lattice_h=0.04)


def norm_of(g, u, p, lam, centers=None, radii=None, spec=SPEC):
    centers = default_centers(g, spec) if centers is None else centers
    radii = default_radii(g, u, spec) if radii is None else radii
    return morrey_norm(g, MorreyParams(p=p, lam=lam, centers=centers, radii=radii), u, spec)


def test_params_invariants(g1):
    with pytest.raises(DomainError):
        MorreyParams(p=1.0, lam=0.0, centers=np.zeros((1, 1)), radii=np.array([1.0]))
    with pytest.raises(DomainError):
        MorreyParams(p=2.0, lam=-0.5, centers=np.zeros((1, 1)), radii=np.array([1.0]))
    u = gaussian(g1, 1.0)
    with pytest.raises(DomainError):
        norm_of(g1, u, p=2.0, lam=1.5)  # lambda > Q


def test_zero_function(g1):
    z = custom(lambda p: np.zeros(p.shape[:-1]), decay_radius=1.0)
    est = norm_of(g1, z, p=2.0, lam=0.0)
    assert est.value == 0.0


def test_gaussian_l2_identification(g1):
    # lambda = 0 recovers the L^p norm: ||e^{-x^2}||_2 = (pi/2)^(1/4)
    u = gaussian(g1, 1.0)
    est = norm_of(g1, u, p=2.0, lam=0.0)
    want = (math.pi / 2.0) ** 0.25
    assert abs(est.value - want) / want <= 0.01
    assert not est.truncation_note


def test_lambda0_matches_lattice_lp(g1):
    from morreylab.quadrature import lattice_nodes

    u = gaussian(g1, 0.7)
    est = norm_of(g1, u, p=2.0, lam=0.0)
    nodes, _, cell = lattice_nodes(g1, SPEC, u.decay_radius)
    lp = float(np.sum(np.abs(u(nodes)) ** 2 * cell) ** 0.5)
    assert abs(est.value - lp) / lp <= 0.01


def test_scaling_instance(g1):
    # ||u o dilate_t|| = t^((lam - Q)/p) ||u||, checked at t = 2, lam = Q/2
    u = gaussian(g1, 1.0)
    lam, p = 0.5, 2.0
    base = norm_of(g1, u, p=p, lam=lam).value
    got = norm_of(g1, dilated(g1, u, 2.0), p=p, lam=lam).value
    pred = 2.0 ** ((lam - g1.Q) / p)
    assert abs(got / base - pred) / pred <= 0.02


def test_local_le_global_exact(g1):
    u = gaussian(g1, 1.0)
    radii = default_radii(g1, u, SPEC)
    loc = local_morrey_norm(g1, 2.0, 0.25, u, radii, SPEC)
    glob = norm_of(g1, u, p=2.0, lam=0.25, radii=radii)
    assert loc.value <= glob.value + 1e-12


def test_offcenter_gap(g1):
    # Gaussian centred at distance 3 with truncated radii: the identity
    # centre misses mass that a global centre captures
    u_off = custom(
        lambda p: np.exp(-np.sum((p - 3.0) ** 2, axis=-1)), decay_radius=9.0,
        smooth=True,
    )
    radii = default_radii(g1, u_off, SPEC)
    radii = radii[radii <= 4.0]
    loc = local_morrey_norm(g1, 2.0, 0.0, u_off, radii, SPEC).value
    glob = norm_of(g1, u_off, p=2.0, lam=0.0, radii=radii).value
    assert (glob - loc) / glob >= 0.05


def test_embedding_check(g1):
    u = gaussian(g1, 1.0)
    radii = default_radii(g1, u, SPEC)
    loc, glob, ok = embedding_check(g1, 2.0, 0.25, u, radii, SPEC)
    assert ok and loc <= glob + 1e-12
    z = custom(lambda p: np.zeros(p.shape[:-1]), decay_radius=1.0)
    loc, glob, ok = embedding_check(g1, 2.0, 0.25, z, radii, SPEC)
    assert (loc, glob, ok) == (0.0, 0.0, True)


def test_grid_monotonicity(g1):
    u = gaussian(g1, 1.0)
    radii = default_radii(g1, u, SPEC)
    centers_small = np.array([[0.0], [1.0]])
    centers_big = np.array([[0.0], [1.0], [2.0], [-1.0]])
    small = norm_of(g1, u, 2.0, 0.25, centers=centers_small, radii=radii).value
    big = norm_of(g1, u, 2.0, 0.25, centers=centers_big, radii=radii).value
    assert big >= small
    fewer = norm_of(g1, u, 2.0, 0.25, centers=centers_big, radii=radii[::2]).value
    assert fewer <= big


@pytest.mark.parametrize("lam_frac", [0.0, 0.25, 0.5])
@pytest.mark.parametrize("t", [0.5, 2.0])
def test_dilation_law_n1(g1, lam_frac, t):
    u = gaussian(g1, 1.0)
    p = 2.0
    lam = lam_frac * g1.Q
    base = norm_of(g1, u, p=p, lam=lam).value
    got = norm_of(g1, dilated(g1, u, t), p=p, lam=lam).value
    pred = t ** ((lam - g1.Q) / p)
    assert abs(got / base - pred) / pred <= 0.02


def test_truncation_flag_for_constant(g1):
    # constants are not in any Morrey space with lam < Q: the estimator
    # must reveal the radius-capped divergence
    c = custom(lambda p: np.ones(p.shape[:-1]), decay_radius=1e6)
    radii = np.geomspace(0.1, 20.0, 30)
    est = norm_of(g1, c, p=2.0, lam=0.5, radii=radii)
    assert est.truncation_note
    # the supremum sits at the truncation scale, not at a converged radius
    assert est.argmax_radius >= 0.9 * SPEC.R_max
    # a decaying input peaks at an interior radius instead
    u = gaussian(g1, 1.0)
    est2 = norm_of(g1, u, p=2.0, lam=0.5, radii=default_radii(g1, u, SPEC))
    assert not est2.truncation_note


def test_estimate_fields(g1):
    u = gaussian(g1, 1.0)
    est = norm_of(g1, u, p=2.0, lam=0.25)
    assert isinstance(est, MorreyEstimate)
    assert est.value > 0 and est.argmax_radius > 0
    assert np.allclose(est.argmax_center, 0.0, atol=0.6)
