"""Theorem-level verification harness.

Exponent tuples are checked against each inequality's hypothesis set
(in the order the hypotheses are stated, with q derived from the
exponent relation, never user-supplied).  Accepted configurations feed
ratio computations and dilation sweeps whose oracle is exact scale
covariance: for an admissible tuple the two sides of the inequality
scale identically under u -> u o dilate_t, so the ratio is t-invariant
and the predicted log-log slope is zero.  Deliberately perturbing the
derived exponent produces a known nonzero slope (the negative control).

Admissibility arithmetic is plain Python, so ``fractions.Fraction``
inputs flow through exactly.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field, replace
from fractions import Fraction

import numpy as np

from . import groups, morrey, operators
from .errors import DegenerateInputError, DomainError
from .quadrature import QuadratureSpec, lattice_nodes, radius_grid
from .testfunctions import TestFunction, dilated

THEOREMS = (
    "adams_hls",
    "stein_weiss_adams",
    "maximal_bound",
    "hardy",
    "hardy_sobolev",
    "rellich",
    "gagliardo_nirenberg",
    "uncertainty",
    "frac_hardy",
    "frac_hardy_sobolev",
    "frac_rellich",
    "frac_gn",
)


@dataclass(frozen=True)
class ExponentConfig:
    theorem: str
    Q: object
    p: object
    gamma: object = None
    alpha: object = 0
    beta: object = 0
    lam: object = None
    a: object = None
    r_exp: object = None
    q: object = None
    admissible_flag: bool = False

    @property
    def p_prime(self):
        return self.p / (self.p - 1)

    @property
    def q_prime(self):
        return self.q / (self.q - 1)

    def as_floats(self) -> dict:
        out = {}
        for name in ("Q", "p", "gamma", "alpha", "beta", "lam", "a", "r_exp", "q"):
            v = getattr(self, name)
            out[name] = None if v is None else float(v)
        out["theorem"] = self.theorem
        out["admissible"] = self.admissible_flag
        return out


@dataclass(frozen=True)
class Rejection:
    theorem: str
    condition: str
    detail: str = ""


@dataclass(frozen=True)
class MorreyGrids:
    centers: np.ndarray
    radii: np.ndarray


@dataclass(frozen=True)
class RatioSweepRecord:
    config: ExponentConfig
    t_values: tuple
    ratios: tuple
    fitted_slope: float
    predicted_mismatch: float
    estimated_constant: float
    degenerate: bool = False
    function_label: str = ""
    grid_meta: dict = field(default_factory=dict)


def _is_exact(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _eq(x, y) -> bool:
    if _is_exact(x) and _is_exact(y):
        return x == y
    fx, fy = float(x), float(y)
    return abs(fx - fy) <= 1e-12 * max(1.0, abs(fx), abs(fy))


def _le(x, y) -> bool:
    if _is_exact(x) and _is_exact(y):
        return x <= y
    return float(x) <= float(y) + 1e-12 * max(1.0, abs(float(x)), abs(float(y)))


def _check_finite(kwargs):
    for name, v in kwargs.items():
        if v is None:
            continue
        if isinstance(v, float) and not math.isfinite(v):
            raise DomainError(f"{name} must be finite, got {v}")
        if not isinstance(v, numbers.Real):
            raise DomainError(f"{name} must be a real number")


def _theorem_items(theorem):
    """Ordered hypothesis list; 'q' marks the point where q is derived."""
    T = theorem
    if T == "adams_hls":
        return [
            ("α=β=0", lambda c: _eq(c["alpha"], 0) and _eq(c["beta"], 0)),
            ("0<γ<Q", lambda c: 0 < c["gamma"] < c["Q"]),
            ("1<p<Q/γ", lambda c: 1 < c["p"] < c["Q"] / c["gamma"]),
            ("q", ("gamma", 1)),
            ("1<p<q<∞", lambda c: c["q"] is not None and 1 < c["p"] < c["q"]),
            ("0<λ<Q−γp", lambda c: 0 < c["lam"] < c["Q"] - c["gamma"] * c["p"]),
        ]
    if T == "stein_weiss_adams":
        return [
            (
                "0≤α+β≤γ<Q",
                lambda c: _le(0, c["alpha"] + c["beta"])
                and _le(c["alpha"] + c["beta"], c["gamma"])
                and c["gamma"] < c["Q"],
            ),
            (
                "1<p<Q/(γ−α−β)",
                lambda c: 1 < c["p"]
                and (
                    _eq(c["gamma"] - c["alpha"] - c["beta"], 0)
                    or c["p"] < c["Q"] / (c["gamma"] - c["alpha"] - c["beta"])
                ),
            ),
            ("q", ("gamma_eff", 1)),
            ("α<Q/p′", lambda c: c["alpha"] < c["Q"] * (c["p"] - 1) / c["p"]),
            (
                # vacuous when the relation failed: the lambda condition
                # below is then necessarily the violated one
                "β<(Q−λ)/q",
                lambda c: c["q"] is None or c["beta"] < (c["Q"] - c["lam"]) / c["q"],
            ),
            (
                "0<λ<Q−(γ−α−β)p",
                lambda c: 0 < c["lam"]
                and c["lam"] < c["Q"] - (c["gamma"] - c["alpha"] - c["beta"]) * c["p"],
            ),
        ]
    if T == "maximal_bound":
        return [
            ("p>1", lambda c: c["p"] > 1),
            ("0<λ<Q", lambda c: 0 < c["lam"] < c["Q"]),
        ]
    if T == "hardy":
        return [
            ("1<p<∞", lambda c: 1 < c["p"]),
            ("α<Q/p′", lambda c: c["alpha"] < c["Q"] * (c["p"] - 1) / c["p"]),
            ("β<(Q−λ)/p", lambda c: c["beta"] < (c["Q"] - c["lam"]) / c["p"]),
            ("α+β=1", lambda c: _eq(c["alpha"] + c["beta"], 1)),
            (
                "0<λ<min{Q,Q−βp}",
                lambda c: 0 < c["lam"]
                and c["lam"] < min(c["Q"], c["Q"] - c["beta"] * c["p"]),
            ),
        ]
    if T == "hardy_sobolev":
        return [
            (
                "0≤α+β≤1<Q",
                lambda c: _le(0, c["alpha"] + c["beta"])
                and _le(c["alpha"] + c["beta"], 1)
                and 1 < c["Q"],
            ),
            (
                "1<p<Q/(1−α−β)",
                lambda c: 1 < c["p"]
                and (
                    _eq(1 - c["alpha"] - c["beta"], 0)
                    or c["p"] < c["Q"] / (1 - c["alpha"] - c["beta"])
                ),
            ),
            ("q", ("gamma_eff", 1)),
            ("α<Q/p′", lambda c: c["alpha"] < c["Q"] * (c["p"] - 1) / c["p"]),
            (
                # vacuous when the relation failed: the lambda condition
                # below is then necessarily the violated one
                "β<(Q−λ)/q",
                lambda c: c["q"] is None or c["beta"] < (c["Q"] - c["lam"]) / c["q"],
            ),
            (
                "0<λ<min{Q−βp,Q−(1−α−β)p}",
                lambda c: 0 < c["lam"]
                and c["lam"]
                < min(
                    c["Q"] - c["beta"] * c["p"],
                    c["Q"] - (1 - c["alpha"] - c["beta"]) * c["p"],
                ),
            ),
        ]
    if T == "rellich":
        return [
            ("α+β=2", lambda c: _eq(c["alpha"] + c["beta"], 2)),
            ("1<p<∞", lambda c: 1 < c["p"]),
            ("α<Q/p′", lambda c: c["alpha"] < c["Q"] * (c["p"] - 1) / c["p"]),
            ("β<(Q−λ)/p", lambda c: c["beta"] < (c["Q"] - c["lam"]) / c["p"]),
            (
                "0<λ<min{Q,Q−βp}",
                lambda c: 0 < c["lam"]
                and c["lam"] < min(c["Q"], c["Q"] - c["beta"] * c["p"]),
            ),
        ]
    if T == "gagliardo_nirenberg":
        return [
            ("1<p<Q", lambda c: 1 < c["p"] < c["Q"]),
            ("0<λ<Q−p", lambda c: 0 < c["lam"] < c["Q"] - c["p"]),
            ("a∈[0,1]", lambda c: c["a"] is not None and _le(0, c["a"]) and _le(c["a"], 1)),
            ("r≥1", lambda c: c["r_exp"] is not None and _le(1, c["r_exp"])),
            ("q", ("gn", 1)),
            ("q>1", lambda c: c["q"] is not None and c["q"] > 1),
        ]
    if T == "uncertainty":
        return [
            ("p=2", lambda c: _eq(c["p"], 2)),
            ("0<λ<Q−2", lambda c: 0 < c["lam"] < c["Q"] - 2),
        ]
    if T == "frac_hardy":
        return [
            ("1<p<∞", lambda c: 1 < c["p"]),
            ("α<Q/p′", lambda c: c["alpha"] < c["Q"] * (c["p"] - 1) / c["p"]),
            ("β<(Q−λ)/p", lambda c: c["beta"] < (c["Q"] - c["lam"]) / c["p"]),
            (
                "α+β=γ∈(0,1)",
                lambda c: _eq(c["alpha"] + c["beta"], c["gamma"]) and 0 < c["gamma"] < 1,
            ),
            (
                "0<λ<min{Q,Q−βp}",
                lambda c: 0 < c["lam"]
                and c["lam"] < min(c["Q"], c["Q"] - c["beta"] * c["p"]),
            ),
        ]
    if T == "frac_hardy_sobolev":
        return [
            ("γ∈(0,1)", lambda c: 0 < c["gamma"] < 1),
            (
                "0≤α+β≤γ<Q",
                lambda c: _le(0, c["alpha"] + c["beta"])
                and _le(c["alpha"] + c["beta"], c["gamma"])
                and c["gamma"] < c["Q"],
            ),
            (
                "1<p<Q/(γ−α−β)",
                lambda c: 1 < c["p"]
                and (
                    _eq(c["gamma"] - c["alpha"] - c["beta"], 0)
                    or c["p"] < c["Q"] / (c["gamma"] - c["alpha"] - c["beta"])
                ),
            ),
            (
                "0<λ<min{Q−βp,Q−(γ−α−β)p}",
                lambda c: 0 < c["lam"]
                and c["lam"]
                < min(
                    c["Q"] - c["beta"] * c["p"],
                    c["Q"] - (c["gamma"] - c["alpha"] - c["beta"]) * c["p"],
                ),
            ),
            ("q", ("gamma_eff", 1)),
        ]
    if T == "frac_rellich":
        return [
            ("p>1", lambda c: c["p"] > 1),
            ("α<Q/p′", lambda c: c["alpha"] < c["Q"] * (c["p"] - 1) / c["p"]),
            ("β<(Q−λ)/p", lambda c: c["beta"] < (c["Q"] - c["lam"]) / c["p"]),
            (
                "α+β=γ∈(1,2)",
                lambda c: _eq(c["alpha"] + c["beta"], c["gamma"]) and 1 < c["gamma"] < 2,
            ),
            ("Q>γp", lambda c: c["Q"] > c["gamma"] * c["p"]),
            (
                "0<λ<min{Q,Q−γp}",
                lambda c: 0 < c["lam"]
                and c["lam"] < min(c["Q"], c["Q"] - c["gamma"] * c["p"]),
            ),
        ]
    if T == "frac_gn":
        return [
            ("γ∈(0,1)", lambda c: 0 < c["gamma"] < 1),
            ("1<p<Q/γ", lambda c: 1 < c["p"] < c["Q"] / c["gamma"]),
            ("0<λ<Q−γp", lambda c: 0 < c["lam"] < c["Q"] - c["gamma"] * c["p"]),
            ("a∈[0,1]", lambda c: c["a"] is not None and _le(0, c["a"]) and _le(c["a"], 1)),
            ("r≥1", lambda c: c["r_exp"] is not None and _le(1, c["r_exp"])),
            ("q", ("gn_gamma", 1)),
            ("q>1", lambda c: c["q"] is not None and c["q"] > 1),
        ]
    raise DomainError(f"unknown theorem {theorem!r}")


_FIXED_GAMMA = {"hardy": 1, "hardy_sobolev": 1, "rellich": 2,
                "gagliardo_nirenberg": 1, "uncertainty": 1, "maximal_bound": None}


def _derive_q(kind, c):
    Q, lam, p = c["Q"], c["lam"], c["p"]
    if kind in ("gamma", "gamma_eff"):
        s = c["gamma"] if kind == "gamma" else c["gamma"] - c["alpha"] - c["beta"]
        if Q - lam <= 0:
            return None
        inv = 1 / p - s / (Q - lam)
    elif kind == "gn":
        if Q - lam <= 0:
            return None
        inv = c["a"] * (1 / p - 1 / (Q - lam)) + (1 - c["a"]) / c["r_exp"]
    elif kind == "gn_gamma":
        if Q - lam <= 0:
            return None
        inv = c["a"] * (1 / p - c["gamma"] / (Q - lam)) + (1 - c["a"]) / c["r_exp"]
    else:
        raise DomainError(f"unknown relation {kind!r}")
    if inv <= 0:
        return None
    return 1 / inv


def admissible(
    theorem: str,
    Q,
    p,
    gamma=None,
    alpha=0,
    beta=0,
    lam=None,
    a=None,
    r_exp=None,
):
    """Complete an exponent tuple or reject it with the violated hypothesis.

    The hypotheses are evaluated in the order the inequality states them;
    the derived exponent q comes from the theorem's relation.  Rejection
    is a returned value, never an exception.  Exact (int / Fraction)
    inputs are processed exactly.
    """
    if theorem not in THEOREMS:
        raise DomainError(f"unknown theorem {theorem!r}")
    _check_finite(dict(Q=Q, p=p, gamma=gamma, alpha=alpha, beta=beta,
                       lam=lam, a=a, r_exp=r_exp))
    if lam is None:
        raise DomainError("lambda is required")
    supplied = [v for v in (Q, p, gamma, alpha, beta, lam, a, r_exp) if v is not None]
    if all(_is_exact(v) for v in supplied):
        # keep integer tuples exact end to end
        Q, p, lam = Fraction(Q), Fraction(p), Fraction(lam)
        alpha, beta = Fraction(alpha), Fraction(beta)
        gamma = None if gamma is None else Fraction(gamma)
        a = None if a is None else Fraction(a)
        r_exp = None if r_exp is None else Fraction(r_exp)
    if gamma is None:
        gamma = _FIXED_GAMMA.get(theorem)
        if gamma is None and theorem not in ("maximal_bound",):
            raise DomainError(f"{theorem} requires gamma")
    c = dict(theorem=theorem, Q=Q, p=p, gamma=gamma, alpha=alpha, beta=beta,
             lam=lam, a=a, r_exp=r_exp, q=None)
    for name, item in _theorem_items(theorem):
        if name == "q":
            c["q"] = _derive_q(item[0], c)
            continue
        if not item(c):
            return Rejection(theorem=theorem, condition=name)
    if c["q"] is None:
        c["q"] = c["p"] if theorem != "uncertainty" else 2
    if theorem == "uncertainty":
        c["r_exp"] = 2
    return ExponentConfig(
        theorem=theorem, Q=Q, p=c["p"], gamma=c["gamma"], alpha=alpha, beta=beta,
        lam=lam, a=a, r_exp=c["r_exp"], q=c["q"], admissible_flag=True,
    )


def perturb_q(cfg: ExponentConfig, delta_inv_q):
    """Shift 1/q by delta and clear the admissibility flag (negative control)."""
    if delta_inv_q == 0:
        return cfg
    inv = 1 / cfg.q + delta_inv_q
    if inv <= 0:
        raise DomainError("perturbed 1/q is non-positive (q would be infinite)")
    q_new = 1 / inv
    if q_new <= 1:
        raise DomainError(f"perturbed q = {q_new} must exceed 1")
    return replace(cfg, q=q_new, admissible_flag=False)


# ---------------------------------------------------------------------------
# scale algebra
# ---------------------------------------------------------------------------

def _factors(cfg: ExponentConfig):
    """(lhs_factor, rhs_factors): norm exponent, weight power, operator, power.

    Operator homogeneity degrees are exact change-of-variable facts:
    gradient 1, sub-Laplacian 2, (-Delta)^s with s = gamma/2 degree gamma,
    Riesz potential -gamma, maximal operator 0.
    """
    T = cfg.theorem
    al, be, ga = cfg.alpha, cfg.beta, cfg.gamma
    if T in ("adams_hls", "stein_weiss_adams"):
        return (
            dict(exp=cfg.q, theta=-be, op="riesz", degree=-ga, power=1),
            [dict(exp=cfg.p, theta=al, op="id", degree=0, power=1)],
        )
    if T == "maximal_bound":
        return (
            dict(exp=cfg.p, theta=0, op="maximal", degree=0, power=1),
            [dict(exp=cfg.p, theta=0, op="id", degree=0, power=1)],
        )
    if T == "hardy":
        return (
            dict(exp=cfg.p, theta=-be, op="id", degree=0, power=1),
            [dict(exp=cfg.p, theta=al, op="grad", degree=1, power=1)],
        )
    if T == "hardy_sobolev":
        return (
            dict(exp=cfg.q, theta=-be, op="id", degree=0, power=1),
            [dict(exp=cfg.p, theta=al, op="grad", degree=1, power=1)],
        )
    if T == "rellich":
        return (
            dict(exp=cfg.p, theta=-be, op="id", degree=0, power=1),
            [dict(exp=cfg.p, theta=al, op="sublap", degree=2, power=1)],
        )
    if T == "gagliardo_nirenberg":
        return (
            dict(exp=cfg.q, theta=0, op="id", degree=0, power=1),
            [
                dict(exp=cfg.p, theta=0, op="grad", degree=1, power=cfg.a),
                dict(exp=cfg.r_exp, theta=0, op="id", degree=0, power=1 - cfg.a),
            ],
        )
    if T == "uncertainty":
        return (
            dict(exp=2, theta=0, op="id", degree=0, power=2),
            [
                dict(exp=2, theta=1, op="id", degree=0, power=1),
                dict(exp=2, theta=0, op="grad", degree=1, power=1),
            ],
        )
    if T in ("frac_hardy", "frac_rellich"):
        return (
            dict(exp=cfg.p, theta=-be, op="id", degree=0, power=1),
            [dict(exp=cfg.p, theta=al, op="fraclap", degree=ga, power=1)],
        )
    if T == "frac_hardy_sobolev":
        return (
            dict(exp=cfg.q, theta=-be, op="id", degree=0, power=1),
            [dict(exp=cfg.p, theta=al, op="fraclap", degree=ga, power=1)],
        )
    if T == "frac_gn":
        return (
            dict(exp=cfg.q, theta=0, op="id", degree=0, power=1),
            [
                dict(exp=cfg.p, theta=0, op="fraclap", degree=ga, power=cfg.a),
                dict(exp=cfg.r_exp, theta=0, op="id", degree=0, power=1 - cfg.a),
            ],
        )
    raise DomainError(f"unknown theorem {T!r}")


def predicted_mismatch(cfg: ExponentConfig):
    """Log-log slope of the two-sided ratio under u -> u o dilate_t.

    Each Morrey factor of weight power theta, operator degree d and norm
    exponent m scales with exponent d - theta + (lam - Q)/m; the mismatch
    is the lhs total minus the rhs total and vanishes exactly on
    admissible tuples.
    """
    lhs, rhs = _factors(cfg)
    lamQ = cfg.lam - cfg.Q

    def e(f):
        deg = f["degree"]
        return f["power"] * (deg - f["theta"] + lamQ / f["exp"])

    return e(lhs) - sum(e(f) for f in rhs)


# ---------------------------------------------------------------------------
# inequality sides
# ---------------------------------------------------------------------------

def _op_values(g, op, cfg, u: TestFunction, nodes, spec):
    if op == "id":
        return np.abs(np.asarray(u(nodes), dtype=float))
    if op == "riesz":
        return np.abs(operators.riesz_values(g, float(cfg.gamma), u, nodes, spec))
    if op == "grad":
        grad = operators.horizontal_gradient_values(g, u, nodes)
        return np.sqrt(np.sum(grad * grad, axis=-1))
    if op == "sublap":
        return np.abs(operators.sub_laplacian_values(g, u, nodes))
    if op == "fraclap":
        s = float(cfg.gamma) / 2.0
        return np.abs(operators.frac_laplacian_values(g, s, u, nodes, spec))
    if op == "maximal":
        radii = radius_grid(spec, getattr(u, "decay_radius", spec.R_max))
        return operators.hl_maximal_values(g, u, nodes, radii, spec)
    raise DomainError(f"unknown operator tag {op!r}")


def _factor_norm(g, factor, cfg, u, grids: MorreyGrids, spec):
    from .quadrature import gauge_power_weights, resolve_R

    # integral-operator outputs have fat tails: keep the full lattice
    wide = factor["op"] in ("riesz", "fraclap", "maximal")
    decay = getattr(u, "decay_radius", math.inf)
    R_eff = resolve_R(spec, None if wide or not math.isfinite(decay) else decay)
    nodes, _, cell = lattice_nodes(g, spec, R_eff)
    vals = _op_values(g, factor["op"], cfg, u, nodes, spec)
    theta = float(factor["theta"])
    p_fac = float(factor["exp"])
    if theta != 0.0:
        # fold the gauge power into exact-mass node weights so singular
        # weights near the origin are integrated at full order
        cell = gauge_power_weights(
            g, theta * p_fac, R_eff, spec.effective_h,
            spec.shell_ratio, spec.inner_cutoff,
        )
    est = morrey.morrey_sup_from_samples(
        g, p_fac, float(cfg.lam), grids.centers, grids.radii,
        nodes, vals, cell, nodes_key=(R_eff, spec.effective_h),
    )
    return est.value


def inequality_sides(g, cfg: ExponentConfig, u: TestFunction, grids: MorreyGrids, spec):
    """(lhs, rhs) of the theorem's inequality for one test function.

    Weighted integrands are assembled pointwise on the lattice before
    Morrey estimation; products of norms (GN, uncertainty) multiply the
    factor norms raised to their powers.
    """
    lhs_f, rhs_f = _factors(cfg)
    lhs_norm = _factor_norm(g, lhs_f, cfg, u, grids, spec)
    lhs = lhs_norm ** float(lhs_f["power"])
    rhs = 1.0
    for f in rhs_f:
        rhs *= _factor_norm(g, f, cfg, u, grids, spec) ** float(f["power"])
    if rhs == 0.0 and lhs > 0.0:
        raise DegenerateInputError(
            "right-hand side vanished with nonzero left side"
        )
    return float(lhs), float(rhs)


def default_grids(g, spec: QuadratureSpec, decay_radius: float, ratio: float = 2.0 ** 0.25,
                  n_per_axis: int | None = None) -> MorreyGrids:
    return MorreyGrids(
        centers=morrey.default_centers(g, spec, n_per_axis=n_per_axis),
        radii=radius_grid(spec, decay_radius, ratio=ratio),
    )


def adapted_spec_factory(
    g, base: QuadratureSpec, u: TestFunction, t_min: float, t_max: float,
    fix_wide: bool = True,
):
    """Per-dilation quadrature specs for sweeps that outgrow one lattice.

    On groups of large homogeneous dimension a single lattice cannot
    resolve both ends of a decade sweep within the node budget.  The
    truncation radius follows the dilated decay radius; the spacing
    shrinks for contracted copies (t > 1).  With ``fix_wide`` the widened
    copies keep the base spacing, so the t <= 1 leg of the sweep runs on a
    genuinely fixed discretisation scale; without it the spacing scales
    like 1/t throughout (needed when the wide copies exhaust the node
    budget), and the sweep should then be anchored by a refinement check
    at t = 1.  Centre and radius grids stay fixed either way.
    """
    pad = 2.0 * base.lattice_h

    def factory(t):
        decay_t = u.decay_radius / t
        R_t = min(base.R_max, 1.35 * decay_t + pad)
        h_t = base.lattice_h * (min(1.0, 1.0 / t) if fix_wide else 1.0 / t)
        h_t = min(h_t, R_t / 8.0)
        return QuadratureSpec(
            R_max=R_t,
            lattice_h=h_t,
            shell_ratio=base.shell_ratio,
            inner_cutoff=base.inner_cutoff,
            refinement_level=base.refinement_level,
        )

    factory.base = base
    return factory


def sweep_grids(g, base: QuadratureSpec, u: TestFunction, t_min: float, t_max: float,
                ratio: float = 2.0 ** 0.25, n_per_axis: int | None = None) -> MorreyGrids:
    """Centre/radius grids shared by every dilation in a sweep."""
    r_min = 2.0 * base.effective_h * min(1.0, 1.0 / t_max)
    r_max = 2.0 * (base.R_max + u.decay_radius / t_min)
    n = int(math.ceil(math.log(r_max / r_min) / math.log(ratio)))
    return MorreyGrids(
        centers=morrey.default_centers(g, base, n_per_axis=n_per_axis),
        radii=r_min * ratio ** np.arange(n + 1),
    )


def dilation_sweep(
    g,
    cfg: ExponentConfig,
    u: TestFunction,
    t_values,
    grids: MorreyGrids,
    spec,
) -> RatioSweepRecord:
    """Ratios lhs/rhs for dilated copies of u, with the fitted slope.

    ``spec`` is a QuadratureSpec, or a callable t -> QuadratureSpec for
    scale-adapted sweeps.  The centre and radius grids stay fixed across
    the sweep, so both sides are matched lower-bound estimates at every
    scale.
    """
    t_values = tuple(float(t) for t in t_values)
    if any(t <= 0 for t in t_values):
        raise DomainError("t values must be positive")
    degenerate = len(t_values) == 1
    if not degenerate and max(t_values) / min(t_values) < 10.0 - 1e-9:
        raise DomainError("t values must span at least one decade")
    spec_of = spec if callable(spec) else (lambda t: spec)
    base = getattr(spec, "base", None) or spec_of(1.0)
    ratios = []
    for t in t_values:
        ut = dilated(g, u, t)
        lhs, rhs = inequality_sides(g, cfg, ut, grids, spec_of(t))
        if rhs == 0.0:
            raise DegenerateInputError(f"degenerate sides at t={t}")
        ratios.append(lhs / rhs)
    if degenerate:
        slope = 0.0
    else:
        slope = float(np.polyfit(np.log(t_values), np.log(ratios), 1)[0])
    return RatioSweepRecord(
        config=cfg,
        t_values=t_values,
        ratios=tuple(ratios),
        fitted_slope=slope,
        predicted_mismatch=float(predicted_mismatch(cfg)),
        estimated_constant=float(max(ratios)),
        degenerate=degenerate,
        function_label=u.label,
        grid_meta=dict(
            law=g.law,
            gauge=g.gauge_kind,
            dimension=g.dimension,
            R_max=base.R_max,
            lattice_h=base.lattice_h,
            refinement_level=base.refinement_level,
            adapted=callable(spec),
            n_centers=int(np.atleast_2d(grids.centers).shape[0]),
            n_radii=int(np.asarray(grids.radii).size),
            r_min=float(np.min(grids.radii)),
            r_max=float(np.max(grids.radii)),
        ),
    )


@dataclass(frozen=True)
class MaximalBoundReport:
    ratios: dict
    spreads: dict
    max_ratio: float
    max_spread: float


def maximal_bound_check(
    g, p, lam, u_family, grids: MorreyGrids, spec, t_values=(0.25, 0.5, 1.0, 2.0, 4.0)
) -> MaximalBoundReport:
    """Morrey-bound ratios for the maximal operator over dilated copies."""
    cfg = admissible("maximal_bound", Q=g.Q, p=p, lam=lam)
    if isinstance(cfg, Rejection):
        raise DomainError(f"maximal_bound rejected: {cfg.condition}")
    ratios, spreads = {}, {}
    for u in u_family:
        per_t = []
        for t in t_values:
            lhs, rhs = inequality_sides(g, cfg, dilated(g, u, t), grids, spec)
            if rhs == 0.0:
                raise DegenerateInputError("u vanishes on the lattice")
            per_t.append(lhs / rhs)
        ratios[u.label] = tuple(per_t)
        spreads[u.label] = max(per_t) / min(per_t)
    return MaximalBoundReport(
        ratios=ratios,
        spreads=spreads,
        max_ratio=max(max(v) for v in ratios.values()),
        max_spread=max(spreads.values()),
    )


@dataclass(frozen=True)
class HedbergPointwiseReport:
    max_ratio: float
    max_ratio_refined: float
    rel_change: float
    n_used: int
    n_skipped: int


def hedberg_pointwise_check(
    g, cfg: ExponentConfig, u: TestFunction, sample_points, grids, spec
) -> HedbergPointwiseReport:
    """Pointwise potential-vs-maximal ratio and its refinement stability.

    R(x) = |I_gamma u(x)| / [M_frac(x)^e * M_0(x)^(1-e)] with
    e = p*gamma/(Q - lam) and the fractional order (Q - lam)/(Q p).
    Points where a maximal value vanishes are skipped.
    """
    if cfg.theorem != "adams_hls" or not cfg.admissible_flag:
        raise DomainError("hedberg_pointwise_check needs an accepted adams_hls config")
    p, ga, Q, lam = float(cfg.p), float(cfg.gamma), float(cfg.Q), float(cfg.lam)
    expo = p * ga / (Q - lam)
    if not (0 < expo < 1):
        raise DomainError("exponent p*gamma/(Q-lambda) left (0,1)")
    alpha_frac = (Q - lam) / (Q * p)
    pts = np.atleast_2d(np.asarray(sample_points, dtype=float))

    def max_ratio(sp):
        radii = radius_grid(sp, u.decay_radius)
        pot = np.abs(operators.riesz_values(g, ga, u, pts, sp))
        m0 = operators.hl_maximal_values(g, u, pts, radii, sp)
        mf = operators.frac_maximal_values(g, alpha_frac, u, pts, radii, sp)
        ok = (m0 > 0) & (mf > 0)
        if not np.any(ok):
            return 0.0, 0, len(pts)
        r = pot[ok] / (mf[ok] ** expo * m0[ok] ** (1.0 - expo))
        return float(np.max(r)), int(np.sum(ok)), int(np.sum(~ok))

    base, n_used, n_skip = max_ratio(spec)
    fine, _, _ = max_ratio(spec.refined())
    rel = abs(fine - base) / max(base, fine) if max(base, fine) > 0 else 0.0
    return HedbergPointwiseReport(
        max_ratio=base,
        max_ratio_refined=fine,
        rel_change=rel,
        n_used=n_used,
        n_skipped=n_skip,
    )
