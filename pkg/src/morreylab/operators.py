"""Integral and differential operators on homogeneous groups.

Pointwise operators come in scalar form (with error estimates where the
engine provides them) and in batch form (``*_values``), which evaluates
the same integral at many points from one shared source lattice.  Batch
forms exist because norm estimation needs operator values on ~10^4
lattice nodes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import groups
from .errors import DomainError, UnsupportedGroupError
from .quadrature import (
    QuadratureSpec,
    kernel_band_values,
    lattice_nodes,
    shell_integrate_singular,
)

_EPS3 = np.finfo(float).eps ** (1.0 / 3.0)
_EPS4 = np.finfo(float).eps ** 0.25


def _pairwise_offsets(g, points, src):
    """src^{-1} * x for every (point, source) pair -> (m, K, N)."""
    if g.law == groups.EUCLIDEAN:
        return points[:, None, :] - src[None, :, :]
    return groups.mul(g, -src[None, :, :], points[:, None, :])


# ---------------------------------------------------------------------------
# Riesz potential
# ---------------------------------------------------------------------------

def riesz_potential(
    g: groups.GroupDescriptor,
    gamma: float,
    u,
    x,
    spec: QuadratureSpec,
) -> float:
    """Convolution of u with gauge^(gamma - Q) at the point x.

    Exact change of variables gives the covariance
    ``riesz(u o dilate_t)(x) = t^(-gamma) riesz(u)(dilate_t x)``, which the
    test suite uses as its oracle.
    """
    if not (0 < gamma < g.Q):
        raise DomainError(f"gamma must lie in (0, Q), got {gamma}")
    return shell_integrate_singular(g, gamma - g.Q, u, x, spec).value


def riesz_values(
    g: groups.GroupDescriptor,
    gamma: float,
    u,
    points,
    spec: QuadratureSpec,
) -> np.ndarray:
    if not (0 < gamma < g.Q):
        raise DomainError(f"gamma must lie in (0, Q), got {gamma}")
    return kernel_band_values(g, gamma - g.Q, u, points, spec)


# ---------------------------------------------------------------------------
# maximal operators
# ---------------------------------------------------------------------------

def _check_radii(radii):
    radii = np.asarray(radii, dtype=float)
    if radii.size == 0 or np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise DomainError("radius grid must be non-empty, positive, increasing")
    return radii


def frac_maximal_values(
    g: groups.GroupDescriptor,
    alpha: float,
    u,
    points,
    radii,
    spec: QuadratureSpec,
    chunk: int = 512,
) -> np.ndarray:
    """sup over the radius grid of |B(x,r)|^(alpha-1) * integral_B |u|.

    Ball masses and ball volumes use the same lattice nodes, so constants
    are reproduced exactly at radii whose ball stays inside the truncated
    domain; larger balls extend the volume by the exact r^Q scaling law.
    The result is a lower bound of the true supremum up to quadrature
    error.
    """
    if not (0 <= alpha < 1):
        raise DomainError(f"alpha must lie in [0, 1), got {alpha}")
    radii = _check_radii(radii)
    pts = groups.as_points(g, points)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)

    src, _, cell = lattice_nodes(g, spec)
    uv = np.abs(np.asarray(u(src), dtype=float))
    gauge_pts = groups.gauge(g, pts)
    h_eff = spec.effective_h
    out = np.zeros(pts.shape[0])

    for start in range(0, pts.shape[0], chunk):
        sl = slice(start, min(start + chunk, pts.shape[0]))
        x = pts[sl]
        d = groups.gauge(g, _pairwise_offsets(g, x, src))
        order = np.argsort(d, axis=1)
        ds = np.take_along_axis(d, order, axis=1)
        mass = np.concatenate(
            [np.zeros((x.shape[0], 1)), np.cumsum(uv[order], axis=1)], axis=1
        )
        for i in range(x.shape[0]):
            idx = np.searchsorted(ds[i], radii, side="left")
            cnt = idx.astype(float)
            m_r = mass[i, idx] * cell
            r_dom = max(spec.R_max - gauge_pts[sl][i], 4.0 * h_eff)
            vol = cnt * cell
            beyond = radii > r_dom
            if np.any(beyond):
                j = int(np.searchsorted(radii, r_dom, side="right")) - 1
                if j >= 0 and cnt[j] > 0:
                    base_v, base_r = cnt[j] * cell, radii[j]
                else:
                    base_v, base_r = cell, r_dom
                vol = np.where(beyond, base_v * (radii / base_r) ** g.Q, vol)
            ok = vol > 0
            with np.errstate(divide="ignore", invalid="ignore"):
                vals = np.where(ok, vol ** (alpha - 1.0) * m_r, 0.0)
            out[sl][i] = np.max(vals) if vals.size else 0.0
    return out[0] if single else out


def frac_maximal(g, alpha, u, x, radii, spec) -> float:
    return float(frac_maximal_values(g, alpha, u, np.asarray(x, dtype=float), radii, spec))


def hl_maximal(g, u, x, radii, spec) -> float:
    """Hardy-Littlewood maximal function: the alpha = 0 fractional case."""
    return frac_maximal(g, 0.0, u, x, radii, spec)


def hl_maximal_values(g, u, points, radii, spec, chunk: int = 512) -> np.ndarray:
    return frac_maximal_values(g, 0.0, u, points, radii, spec, chunk=chunk)


# ---------------------------------------------------------------------------
# fractional Laplacian (Euclidean only)
# ---------------------------------------------------------------------------

def frac_normalization(N: int, s: float) -> float:
    """Constant making the symmetric-difference integral have symbol |xi|^(2s)."""
    return (
        4.0 ** s
        * math.gamma(N / 2.0 + s)
        / (math.pi ** (N / 2.0) * abs(math.gamma(-s)))
    )


def _euclidean_sphere_area(N: int) -> float:
    return 2.0 * math.pi ** (N / 2.0) / math.gamma(N / 2.0)


def _hessian_trace(u, pts):
    if getattr(u, "analytic_sub_laplacian", None) is not None:
        return np.asarray(u.analytic_sub_laplacian(pts), dtype=float)
    N = pts.shape[-1]
    acc = np.zeros(pts.shape[:-1])
    u0 = np.asarray(u(pts), dtype=float)
    for i in range(N):
        h = _EPS4 * (1.0 + np.abs(pts[..., i]))
        e = np.zeros_like(pts)
        e[..., i] = h
        acc = acc + (np.asarray(u(pts + e)) - 2.0 * u0 + np.asarray(u(pts - e))) / (h * h)
    return acc


def frac_laplacian_values(
    g: groups.GroupDescriptor,
    s: float,
    u,
    points,
    spec: QuadratureSpec,
    chunk: int = 128,
) -> np.ndarray:
    """(-Delta)^s u by the symmetric-difference singular integral.

    The inner region {|y| < inner_cutoff * h} uses the second-order Taylor
    form of the difference, integrated in closed form.  For inputs that
    decay inside R_max the omitted far tail of the 2u(x) term is added in
    closed form; non-decaying inputs (e.g. oscillatory probes) instead
    need R_max large enough that the tail is below tolerance.
    """
    if g.law != groups.EUCLIDEAN or g.gauge_kind != groups.GAUGE_EUCLIDEAN:
        raise UnsupportedGroupError("fractional Laplacian requires Euclidean descriptors")
    if not (0 < s < 1):
        raise DomainError(f"s must lie in (0, 1), got {s}")
    pts = groups.as_points(g, points)
    single = pts.ndim == 1
    pts = np.atleast_2d(pts)

    N = g.dimension
    A = frac_normalization(N, s)
    area = _euclidean_sphere_area(N)
    src, dist, cell = lattice_nodes(g, spec)
    r_in = spec.inner_cutoff * spec.effective_h
    live = dist >= r_in
    Y = src[live]
    dY = dist[live]
    order = np.argsort(dY, kind="stable")
    Y = Y[order]
    dY = dY[order]
    kern = dY ** (-N - 2.0 * s) * cell

    u_x = np.asarray(u(pts), dtype=float)
    trH = _hessian_trace(u, pts)
    inner = -(trH / N) * area * r_in ** (2.0 - 2.0 * s) / (2.0 - 2.0 * s)
    decay = getattr(u, "decay_radius", math.inf)
    gauge_pts = groups.gauge(g, pts)

    out = np.zeros(pts.shape[0])
    tail = np.zeros(pts.shape[0])
    porder = np.argsort(gauge_pts, kind="stable")
    for start in range(0, pts.shape[0], chunk):
        rows = porder[start : start + chunk]
        x = pts[rows]
        if math.isfinite(decay) and decay <= spec.R_max:
            # beyond the cap u(x +/- y) < 1e-12, so the difference is 2u(x)
            # and the kernel tail out to infinity closes in radial form
            cap = min(float(np.max(gauge_pts[rows])) + decay + 2.0 * spec.effective_h,
                      spec.R_max)
            jmax = int(np.searchsorted(dY, cap, side="right"))
            tail[rows] = 2.0 * u_x[rows] * area * cap ** (-2.0 * s) / (2.0 * s)
        else:
            jmax = len(dY)
            tail[rows] = 0.0
        Yc = Y[:jmax]
        plus = np.asarray(u(x[:, None, :] + Yc[None, :, :]), dtype=float)
        minus = np.asarray(u(x[:, None, :] - Yc[None, :, :]), dtype=float)
        phi = 2.0 * u_x[rows, None] - plus - minus
        out[rows] = phi @ kern[:jmax]
    vals = 0.5 * A * (out + inner + tail)
    return vals[0] if single else vals


def frac_laplacian(g, s, u, x, spec) -> float:
    return float(frac_laplacian_values(g, s, u, np.asarray(x, dtype=float), spec))


# ---------------------------------------------------------------------------
# horizontal gradient and sub-Laplacian
# ---------------------------------------------------------------------------

def _coordinate_partials(u, pts, h_scale=_EPS3):
    N = pts.shape[-1]
    parts = []
    for i in range(N):
        h = h_scale * (1.0 + np.abs(pts[..., i]))
        e = np.zeros_like(pts)
        e[..., i] = h
        parts.append((np.asarray(u(pts + e)) - np.asarray(u(pts - e))) / (2.0 * h))
    return parts


def horizontal_gradient_values(g: groups.GroupDescriptor, u, points, h=None) -> np.ndarray:
    """Horizontal gradient: full gradient on R^N, (X u, Y u) on H^1.

    Analytic gradients are used when the test function carries one;
    otherwise central differences with step eps^(1/3) (1 + |coordinate|),
    overridable via ``h``.
    """
    pts = groups.as_points(g, points)
    step = _EPS3 if h is None else float(h)
    if getattr(u, "analytic_gradient", None) is not None:
        return np.asarray(u.analytic_gradient(pts), dtype=float)
    if g.law == groups.EUCLIDEAN:
        return np.stack(_coordinate_partials(u, pts, step), axis=-1)
    if g.law == groups.HEISENBERG1:
        px, py, pt = _coordinate_partials(u, pts, step)
        x, y = pts[..., 0], pts[..., 1]
        return np.stack([px - 0.5 * y * pt, py + 0.5 * x * pt], axis=-1)
    raise UnsupportedGroupError(f"no horizontal gradient for law {g.law!r}")


def horizontal_gradient(g, u, x, h=None) -> np.ndarray:
    return horizontal_gradient_values(g, u, np.asarray(x, dtype=float)[None, :], h=h)[0]


def _second_partial(u, pts, i, j, step=_EPS4):
    hi = step * (1.0 + np.abs(pts[..., i]))
    hj = step * (1.0 + np.abs(pts[..., j]))
    ei = np.zeros_like(pts)
    ei[..., i] = hi
    ej = np.zeros_like(pts)
    ej[..., j] = hj
    if i == j:
        return (
            np.asarray(u(pts + ei)) - 2.0 * np.asarray(u(pts)) + np.asarray(u(pts - ei))
        ) / (hi * hi)
    return (
        np.asarray(u(pts + ei + ej))
        - np.asarray(u(pts + ei - ej))
        - np.asarray(u(pts - ei + ej))
        + np.asarray(u(pts - ei - ej))
    ) / (4.0 * hi * hj)


def sub_laplacian_values(g: groups.GroupDescriptor, u, points, h=None) -> np.ndarray:
    """Sum of squared horizontal derivatives (ordinary Laplacian on R^N).

    Second and mixed partials use central differences at step
    eps^(1/4) (1 + |coordinate|) unless ``h`` overrides it.
    """
    pts = groups.as_points(g, points)
    step = _EPS4 if h is None else float(h)
    if getattr(u, "analytic_sub_laplacian", None) is not None:
        return np.asarray(u.analytic_sub_laplacian(pts), dtype=float)
    if g.law == groups.EUCLIDEAN:
        acc = np.zeros(pts.shape[:-1])
        for i in range(g.dimension):
            acc = acc + _second_partial(u, pts, i, i, step)
        return acc
    if g.law == groups.HEISENBERG1:
        x, y = pts[..., 0], pts[..., 1]
        return (
            _second_partial(u, pts, 0, 0, step)
            + _second_partial(u, pts, 1, 1, step)
            - y * _second_partial(u, pts, 0, 2, step)
            + x * _second_partial(u, pts, 1, 2, step)
            + 0.25 * (x * x + y * y) * _second_partial(u, pts, 2, 2, step)
        )
    raise UnsupportedGroupError(f"no sub-Laplacian for law {g.law!r}")


def sub_laplacian(g, u, x, h=None) -> float:
    return float(sub_laplacian_values(g, u, np.asarray(x, dtype=float)[None, :], h=h)[0])


# ---------------------------------------------------------------------------
# Hedberg split and three-zone decomposition
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HedbergSplit:
    j1: float
    j2: float
    rho: float


def _abs_u(u):
    def fn(pts):
        return np.abs(np.asarray(u(pts), dtype=float))

    fn.decay_radius = getattr(u, "decay_radius", math.inf)
    return fn


def hedberg_split(g, gamma, u, x, rho, spec) -> HedbergSplit:
    """Kernel integral of |u| split at distance rho from x.

    j1 covers {d <= rho}, j2 covers {rho < d <= R_max}; for u >= 0 the two
    parts sum to the full potential up to quadrature error.
    """
    if not (0 < gamma < g.Q):
        raise DomainError(f"gamma must lie in (0, Q), got {gamma}")
    if not (rho > 0):
        raise DomainError("rho must be positive")
    a = gamma - g.Q
    au = _abs_u(u)
    x = np.asarray(x, dtype=float)
    j1 = float(kernel_band_values(g, a, au, x, spec, r_lo=0.0, r_hi=rho))
    j2 = float(kernel_band_values(g, a, au, x, spec, r_lo=rho, r_hi=spec.R_max))
    return HedbergSplit(j1=j1, j2=j2, rho=float(rho))


def hedberg_optimal_rho(m_frac: float, m_0: float, p: float, Q: float, lam: float) -> float:
    """The split radius equalising the two Hedberg bounds."""
    if not (m_frac > 0 and m_0 > 0):
        raise DomainError("maximal values must be positive (u vanishes near x?)")
    if not (0 < lam < Q):
        raise DomainError("need 0 < lambda < Q")
    if not (p > 1):
        raise DomainError("need p > 1")
    return (m_frac / m_0) ** (p / (Q - lam))


def three_zone_split(g, gamma, u, x, spec):
    """Kernel integrals of |u| over the three gauge-annuli around the origin.

    Zones split the source by gauge(y): inside gauge(x)/2, the middle band,
    and outside 2 gauge(x).  Only the middle zone sees the kernel
    singularity.  The sum is an independent cross-check of the full
    potential.
    """
    if not (0 < gamma < g.Q):
        raise DomainError(f"gamma must lie in (0, Q), got {gamma}")
    x = np.asarray(np.atleast_1d(x), dtype=float)
    gx = float(groups.gauge(g, x))
    if gx == 0:
        raise DomainError("zones degenerate at x = 0")
    a = gamma - g.Q

    src, sdist, cell = lattice_nodes(g, spec)
    uv = np.abs(np.asarray(u(src), dtype=float))
    d = groups.gauge(g, _pairwise_offsets(g, x[None, :], src))[0]
    with np.errstate(divide="ignore"):
        kern = np.where(d > 0, d ** a, 0.0) * cell

    inner_mask = sdist < 0.5 * gx
    outer_mask = sdist > 2.0 * gx
    z1 = float(np.sum(uv[inner_mask] * kern[inner_mask]))
    z3 = float(np.sum(uv[outer_mask] * kern[outer_mask]))

    lo, hi = 0.5 * gx, 2.0 * gx

    def banded(pts):
        sd = groups.gauge(g, pts)
        vals = np.abs(np.asarray(u(pts), dtype=float))
        return np.where((sd >= lo) & (sd <= hi), vals, 0.0)

    banded.decay_radius = min(getattr(u, "decay_radius", math.inf), hi)
    z2 = float(kernel_band_values(g, a, banded, x, spec))
    return z1, z2, z3
