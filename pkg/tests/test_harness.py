from fractions import Fraction as F

import numpy as np
import pytest

from morreylab import custom, gaussian
from morreylab.errors import DegenerateInputError, DomainError
from morreylab.harness import (
    ExponentConfig,
    MorreyGrids,
    Rejection,
    admissible,
    adapted_spec_factory,
    dilation_sweep,
    hedberg_pointwise_check,
    inequality_sides,
    maximal_bound_check,
    perturb_q,
    predicted_mismatch,
    sweep_grids,
)
from morreylab.quadrature import QuadratureSpec

T5 = (0.25, 0.5, 1.0, 2.0, 4.0)
SPEC1 = QuadratureSpec(R_max=14.0, lattice_h=0.03)


class TestAdmissible:
    def test_swa_golden_exact(self):
        cfg = admissible("stein_weiss_adams", Q=F(4), p=F(2), gamma=F(1), lam=F(1))
        assert cfg.q == 6 and isinstance(cfg.q, F)
        assert cfg.admissible_flag
        assert cfg.p_prime == 2

    def test_swa_lambda_rejection(self):
        r = admissible("stein_weiss_adams", Q=4, p=2, gamma=1, lam=2.5)
        assert isinstance(r, Rejection)
        assert r.condition == "0<λ<Q−(γ−α−β)p"

    def test_hardy_sum_rejection(self):
        r = admissible("hardy", Q=4, p=2, alpha=0.7, beta=0.8, lam=1)
        assert r.condition == "α+β=1"

    def test_equality_tolerant_for_floats(self):
        cfg = admissible("hardy", Q=4, p=2, alpha=0.3, beta=0.7, lam=1)
        assert isinstance(cfg, ExponentConfig)

    def test_gn_relation_rational(self):
        cfg = admissible("gagliardo_nirenberg", Q=F(4), p=F(3, 2), lam=F(1),
                         a=F(1, 2), r_exp=F(2))
        want = F(1, 2) * (F(2, 3) - F(1, 3)) + F(1, 2) / F(2)
        assert F(1, 1) / cfg.q == want

    def test_nan_rejected(self):
        with pytest.raises(DomainError):
            admissible("hardy", Q=4, p=float("nan"), alpha=0, beta=1, lam=1)

    def test_unknown_theorem(self):
        with pytest.raises(DomainError):
            admissible("nope", Q=4, p=2, lam=1)

    def test_first_violated_condition_wins(self):
        # both p and lambda are bad; the condition listed first is named
        r = admissible("maximal_bound", Q=4, p=0.5, lam=7)
        assert r.condition == "p>1"

    REJECTIONS = [
        ("stein_weiss_adams", dict(Q=4, p=2, gamma=1, alpha=-0.6, beta=0.1, lam=1),
         "0≤α+β≤γ<Q"),
        ("stein_weiss_adams", dict(Q=4, p=4.5, gamma=1, lam=1), "1<p<Q/(γ−α−β)"),
        ("stein_weiss_adams", dict(Q=4, p=2, gamma=1, alpha=2, beta=-1, lam=1),
         "α<Q/p′"),
        ("stein_weiss_adams", dict(Q=4, p=2, gamma=1, alpha=-1, beta=1.9, lam=1),
         "β<(Q−λ)/q"),
        ("stein_weiss_adams", dict(Q=4, p=2, gamma=1, lam=2.5), "0<λ<Q−(γ−α−β)p"),
        ("adams_hls", dict(Q=4, p=2, gamma=5, lam=1), "0<γ<Q"),
        ("adams_hls", dict(Q=4, p=2, gamma=2, lam=0.5), "1<p<Q/γ"),
        ("adams_hls", dict(Q=4, p=2, gamma=1, lam=5), "1<p<q<∞"),
        ("adams_hls", dict(Q=4, p=2, gamma=1, alpha=0.1, lam=1), "α=β=0"),
        ("maximal_bound", dict(Q=4, p=1, lam=1), "p>1"),
        ("maximal_bound", dict(Q=4, p=2, lam=4), "0<λ<Q"),
        ("hardy", dict(Q=4, p=2, alpha=0, beta=1, lam=-1), "0<λ<min{Q,Q−βp}"),
        ("hardy", dict(Q=4, p=2, alpha=2.5, beta=-1.5, lam=1), "α<Q/p′"),
        ("hardy_sobolev", dict(Q=4, p=2, alpha=0.5, beta=0.7, lam=1), "0≤α+β≤1<Q"),
        ("rellich", dict(Q=4, p=2, alpha=1, beta=0.5, lam=1), "α+β=2"),
        ("gagliardo_nirenberg", dict(Q=4, p=1.5, lam=1, a=0, r_exp=1), "q>1"),
        ("gagliardo_nirenberg", dict(Q=4, p=1.5, lam=1, a=0.5, r_exp=0.8), "r≥1"),
        ("gagliardo_nirenberg", dict(Q=4, p=1.5, lam=1, a=1.2, r_exp=2), "a∈[0,1]"),
        ("uncertainty", dict(Q=3, p=2, lam=1.5), "0<λ<Q−2"),
        ("uncertainty", dict(Q=4, p=3, lam=1), "p=2"),
        ("frac_hardy", dict(Q=2, p=1.5, alpha=0.5, beta=0.7, gamma=1.2, lam=0.3),
         "α+β=γ∈(0,1)"),
        ("frac_hardy_sobolev", dict(Q=2, p=1.5, alpha=0, beta=0, gamma=1.2, lam=0.3),
         "γ∈(0,1)"),
        ("frac_rellich", dict(Q=2, p=1.2, alpha=0.3, beta=1.5, gamma=1.8, lam=0.1),
         "Q>γp"),
        ("frac_gn", dict(Q=1, p=2, gamma=0.6, lam=0.1, a=0.5, r_exp=2), "1<p<Q/γ"),
    ]

    @pytest.mark.parametrize("theorem,kw,condition", REJECTIONS)
    def test_rejection_goldens(self, theorem, kw, condition):
        r = admissible(theorem, **kw)
        assert isinstance(r, Rejection), (theorem, kw)
        assert r.condition == condition


class TestPerturb:
    def test_zero_delta_identity(self):
        cfg = admissible("stein_weiss_adams", Q=F(4), p=F(2), gamma=F(1), lam=F(1))
        assert perturb_q(cfg, 0) is cfg

    def test_shift_arithmetic(self):
        cfg = admissible("stein_weiss_adams", Q=F(4), p=F(2), gamma=F(1), lam=F(1))
        pert = perturb_q(cfg, F(1, 6))
        assert pert.q == 3 and not pert.admissible_flag

    def test_infinite_q_rejected(self):
        cfg = admissible("stein_weiss_adams", Q=F(4), p=F(2), gamma=F(1), lam=F(1))
        with pytest.raises(DomainError):
            perturb_q(cfg, -F(1, 6))


class TestMismatch:
    def test_swa_closed_form_matches_general(self):
        cfg = admissible("stein_weiss_adams", Q=F(4), p=F(2), gamma=F(1),
                         alpha=F(1, 4), beta=F(1, 8), lam=F(1))
        closed = (cfg.alpha + cfg.beta - cfg.gamma) + (cfg.Q - cfg.lam) * (
            1 / cfg.p - 1 / cfg.q
        )
        assert predicted_mismatch(cfg) == closed == 0

    @pytest.mark.parametrize("theorem,kw", [
        ("adams_hls", dict(Q=F(4), p=F(2), gamma=F(1), lam=F(1))),
        ("stein_weiss_adams", dict(Q=F(4), p=F(2), gamma=F(1), alpha=F(1, 4),
                                   beta=F(1, 8), lam=F(1))),
        ("maximal_bound", dict(Q=F(4), p=F(2), lam=F(1))),
        ("hardy", dict(Q=F(4), p=F(2), alpha=F(1, 2), beta=F(1, 2), lam=F(1))),
        ("hardy_sobolev", dict(Q=F(4), p=F(2), alpha=F(1, 4), beta=F(1, 4), lam=F(1))),
        ("rellich", dict(Q=F(8), p=F(2), alpha=F(1), beta=F(1), lam=F(1))),
        ("gagliardo_nirenberg", dict(Q=F(4), p=F(3, 2), lam=F(1), a=F(1, 2),
                                     r_exp=F(2))),
        ("uncertainty", dict(Q=F(4), p=F(2), lam=F(1))),
        ("frac_hardy", dict(Q=F(2), p=F(3, 2), alpha=F(1, 4), beta=F(1, 4),
                            gamma=F(1, 2), lam=F(1, 4))),
        ("frac_hardy_sobolev", dict(Q=F(2), p=F(3, 2), alpha=0, beta=0,
                                    gamma=F(1, 2), lam=F(1, 4))),
        ("frac_rellich", dict(Q=F(4), p=F(2), alpha=F(1, 2), beta=F(1),
                              gamma=F(3, 2), lam=F(1, 4))),
        ("frac_gn", dict(Q=F(2), p=F(3, 2), gamma=F(1, 2), lam=F(1, 4), a=F(1, 2),
                         r_exp=F(2))),
    ])
    def test_zero_mismatch_for_all_admissible(self, theorem, kw):
        cfg = admissible(theorem, **kw)
        assert isinstance(cfg, ExponentConfig), (theorem, cfg)
        assert predicted_mismatch(cfg) == 0

    def test_perturbed_mismatch_exact(self):
        cfg = admissible("stein_weiss_adams", Q=F(4), p=F(2), gamma=F(1), lam=F(1))
        pert = perturb_q(cfg, F(1, 10))
        assert predicted_mismatch(pert) == -F(3, 10)


class TestSides:
    def test_zero_function(self, g1):
        z = custom(lambda p: np.zeros(p.shape[:-1]), decay_radius=1.0)
        cfg = admissible("adams_hls", Q=1, p=1.5, gamma=0.4, lam=0.2)
        u = gaussian(g1, 0.5)
        grids = sweep_grids(g1, SPEC1, u, 0.25, 4.0)
        assert inequality_sides(g1, cfg, z, grids, SPEC1) == (0.0, 0.0)

    def test_degenerate_raises_in_sweep(self, g1):
        z = custom(lambda p: np.zeros(p.shape[:-1]), decay_radius=1.0)
        cfg = admissible("adams_hls", Q=1, p=1.5, gamma=0.4, lam=0.2)
        grids = sweep_grids(g1, SPEC1, z, 0.25, 4.0)
        with pytest.raises(DegenerateInputError):
            dilation_sweep(g1, cfg, z, T5, grids, SPEC1)

    def test_scalar_homogeneity(self, g1):
        u = gaussian(g1, 0.5)
        cu = custom(lambda p: -3.0 * u(p), decay_radius=u.decay_radius, smooth=True,
                    analytic_gradient=lambda p: -3.0 * u.analytic_gradient(p))
        grids = sweep_grids(g1, SPEC1, u, 0.25, 4.0)
        for theorem, kw, degree in [
            ("adams_hls", dict(Q=1, p=1.5, gamma=0.4, lam=0.2), 1),
            ("frac_hardy", dict(Q=1, p=1.5, alpha=0, beta=0.5, gamma=0.5, lam=0.12), 1),
            ("uncertainty", dict(Q=4, p=2, lam=1), 2),
        ]:
            if theorem == "uncertainty":
                continue  # needs Q > 2; separate degree check below
            cfg = admissible(theorem, **kw)
            l1, r1 = inequality_sides(g1, cfg, u, grids, SPEC1)
            l3, r3 = inequality_sides(g1, cfg, cu, grids, SPEC1)
            assert l3 == pytest.approx(3.0 ** degree * l1, rel=1e-9)
            assert r3 == pytest.approx(3.0 ** degree * r1, rel=1e-9)

    def test_uncertainty_degree_two(self, g3):
        # both sides of the squared-form uncertainty scale like c^2
        spec = QuadratureSpec(R_max=8.0, lattice_h=0.2)
        u = gaussian(g3, 0.5)
        cu = custom(lambda p: 2.0 * u(p), decay_radius=u.decay_radius, smooth=True,
                    analytic_gradient=lambda p: 2.0 * u.analytic_gradient(p))
        cfg = admissible("uncertainty", Q=3, p=2, lam=0.5)
        grids = sweep_grids(g3, spec, u, 1.0, 1.0, n_per_axis=3)
        l1, r1 = inequality_sides(g3, cfg, u, grids, spec)
        l2, r2 = inequality_sides(g3, cfg, cu, grids, spec)
        assert l2 == pytest.approx(4.0 * l1, rel=1e-9)
        assert r2 == pytest.approx(4.0 * r1, rel=1e-9)


class TestSweep:
    def test_single_t_degenerate(self, g1):
        u = gaussian(g1, 0.5)
        cfg = admissible("adams_hls", Q=1, p=1.5, gamma=0.4, lam=0.2)
        grids = sweep_grids(g1, SPEC1, u, 1.0, 1.0)
        rec = dilation_sweep(g1, cfg, u, (1.0,), grids, SPEC1)
        assert rec.degenerate and rec.fitted_slope == 0.0

    def test_span_precondition(self, g1):
        u = gaussian(g1, 0.5)
        cfg = admissible("adams_hls", Q=1, p=1.5, gamma=0.4, lam=0.2)
        grids = sweep_grids(g1, SPEC1, u, 0.5, 2.0)
        with pytest.raises(DomainError):
            dilation_sweep(g1, cfg, u, (0.5, 1.0, 2.0), grids, SPEC1)

    def test_admissible_flat_ratio(self, g1):
        u = gaussian(g1, 0.5)
        cfg = admissible("adams_hls", Q=1, p=1.5, gamma=0.4, lam=0.2)
        grids = sweep_grids(g1, SPEC1, u, min(T5), max(T5))
        rec = dilation_sweep(g1, cfg, u, T5, grids, SPEC1)
        assert rec.predicted_mismatch == 0.0
        assert max(rec.ratios) / min(rec.ratios) <= 1.10
        assert abs(rec.fitted_slope) <= 0.05
        assert rec.estimated_constant == max(rec.ratios)

    def test_negative_control_slope(self, g1):
        u = gaussian(g1, 0.5)
        cfg = admissible("adams_hls", Q=1, p=1.5, gamma=0.4, lam=0.2)
        pert = perturb_q(cfg, 0.3)
        pm = float(predicted_mismatch(pert))
        assert abs(pm) >= 0.2
        grids = sweep_grids(g1, SPEC1, u, min(T5), max(T5))
        rec = dilation_sweep(g1, pert, u, T5, grids, SPEC1)
        assert abs(rec.fitted_slope - pm) <= 0.10 * abs(pm)


class TestChecks:
    def test_maximal_bound_report(self, g1):
        spec = QuadratureSpec(R_max=12.0, lattice_h=0.04)
        u = gaussian(g1, 0.5)
        grids = sweep_grids(g1, spec, u, 0.25, 4.0)
        rep = maximal_bound_check(g1, 2.0, 0.5, [u], grids, spec)
        assert rep.max_spread <= 2.0
        assert rep.max_ratio > 0.9

    def test_maximal_bound_indicator_ge_one(self, g1):
        spec = QuadratureSpec(R_max=12.0, lattice_h=0.04)
        ui = custom(lambda p: (np.abs(p[..., 0]) <= 1.0).astype(float), decay_radius=1.0)
        cfg = admissible("maximal_bound", Q=1, p=2.0, lam=0.5)
        grids = sweep_grids(g1, spec, ui, 0.25, 4.0)
        lhs, rhs = inequality_sides(g1, cfg, ui, grids, spec)
        assert lhs / rhs >= 1.0 - 1e-6

    def test_maximal_bound_zero_input(self, g1):
        spec = QuadratureSpec(R_max=12.0, lattice_h=0.04)
        z = custom(lambda p: np.zeros(p.shape[:-1]), decay_radius=1.0)
        grids = sweep_grids(g1, spec, z, 0.25, 4.0)
        with pytest.raises(DegenerateInputError):
            maximal_bound_check(g1, 2.0, 0.5, [z], grids, spec)

    def test_hedberg_exponent_sanity(self, g1):
        cfg = admissible("adams_hls", Q=1, p=2.0, gamma=0.3, lam=0.2)
        p, ga, Q, lam = (float(cfg.p), float(cfg.gamma), float(cfg.Q), float(cfg.lam))
        assert 0 < p * ga / (Q - lam) < 1

    def test_hedberg_zero_input_all_skipped(self, g1):
        spec = QuadratureSpec(R_max=12.0, lattice_h=0.04)
        z = custom(lambda p: np.zeros(p.shape[:-1]), decay_radius=1.0)
        cfg = admissible("adams_hls", Q=1, p=2.0, gamma=0.3, lam=0.2)
        pts = np.linspace(-1, 1, 10)[:, None]
        rep = hedberg_pointwise_check(g1, cfg, z, pts, None, spec)
        assert rep.n_used == 0 and rep.n_skipped == 10 and rep.max_ratio == 0.0

    def test_hedberg_requires_accepted_hls(self, g1):
        spec = QuadratureSpec(R_max=12.0, lattice_h=0.04)
        cfg = admissible("hardy", Q=4, p=2, alpha=0, beta=1, lam=1)
        with pytest.raises(DomainError):
            hedberg_pointwise_check(g1, cfg, gaussian(g1, 1.0), np.zeros((2, 1)),
                                    None, spec)


class TestHeisenbergConsistency:
    def test_hardy_ratio_stable_on_heisenberg(self, h1):
        # short (non-decade) scale consistency on H^1: no uniform lattice
        # can hold a honest decade at Q = 4 within the node budget
        u = gaussian(h1, 0.45)
        spec = QuadratureSpec(R_max=8.0, lattice_h=0.45)
        fac = adapted_spec_factory(h1, spec, u, 0.5, 2.0, fix_wide=False)
        grids = sweep_grids(h1, spec, u, 0.5, 2.0, n_per_axis=3)
        cfg = admissible("hardy", Q=4, p=2, alpha=0, beta=1, lam=1)
        ratios = []
        for t in (0.5, 1.0, 2.0):
            from morreylab.testfunctions import dilated

            lhs, rhs = inequality_sides(h1, cfg, dilated(h1, u, t), grids, fac(t))
            ratios.append(lhs / rhs)
        assert max(ratios) / min(ratios) <= 1.15

    def test_uncertainty_on_heisenberg(self, h1):
        u = gaussian(h1, 0.45)
        spec = QuadratureSpec(R_max=8.0, lattice_h=0.45)
        grids = sweep_grids(h1, spec, u, 1.0, 1.0, n_per_axis=3)
        cfg = admissible("uncertainty", Q=4, p=2, lam=1.5)
        lhs, rhs = inequality_sides(h1, cfg, u, grids, spec)
        assert lhs > 0 and rhs > 0
