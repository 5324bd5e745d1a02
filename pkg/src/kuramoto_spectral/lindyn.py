"""Linearized order-parameter dynamics: residue expansion and direct oracle.

The linearized order parameter is a Laplace inversion of the resolvent
pairing.  Deforming the contour across the axis picks up one exponential
term per eigenvalue and per resonance pole,

    eta(t) = sum_n  K/(2 G'(lam_n)) Q[lam_n, phi] Q[lam_n, P0] e^{lam_n t} + remainder(t),

where ``Q[lam, phi]`` is the continued resolvent pairing.  For rational
densities the sum is finite and exact and the remainder vanishes; otherwise
the remainder is a line integral along Re lam = -a (``strip_depth``),
evaluated here by quadratic Filon panels with an analytically transformed
reference tail.  ``direct_integration`` integrates the same linear dynamics
on quadrature nodes and serves as the independent oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .density import QuadratureRule, SpectralDensity, make_quadrature, sampling_rule
from .errors import StepTooLarge, UnsupportedContinuation
from .resolvent import (
    _entire_F,
    boundary_value,
    closed_form_D,
    hilbert_transform_quadrature,
)
from .spectrum import SearchWindow, count_zeros, find_roots

__all__ = [
    "InitialFunction",
    "constant_one",
    "exp_profile",
    "rational_profile",
    "EtaTrajectory",
    "pairing_Q",
    "predict_eta",
    "direct_integration",
]


@dataclass(frozen=True)
class InitialFunction:
    """Initial perturbation profile, bounded on R, holomorphic for Im z >= 0."""

    kind: str
    params: tuple = ()

    def __call__(self, z):
        z = np.asarray(z)
        if self.kind == "constant_one":
            return np.ones_like(z, dtype=complex) if z.ndim else 1.0 + 0j
        if self.kind == "exp_profile":
            (beta,) = self.params
            out = np.exp(1j * beta * np.asarray(z, dtype=complex))
            return out if out.ndim else complex(out)
        # rational_profile: scale / prod (z - p_k), poles in the lower half plane
        scale, poles = self.params
        out = np.full_like(np.asarray(z, dtype=complex), scale)
        for p in poles:
            out = out / (np.asarray(z, dtype=complex) - p)
        return out if out.ndim else complex(out)


def constant_one() -> InitialFunction:
    """phi = 1: the uniform perturbation whose pairing is the order parameter."""
    return InitialFunction("constant_one")


def exp_profile(beta: float) -> InitialFunction:
    """phi(z) = exp(i beta z); bounded on the upper half plane for beta >= 0."""
    if beta < 0:
        raise ValueError("beta must be nonnegative for upper-half-plane boundedness")
    return InitialFunction("exp_profile", (float(beta),))


def rational_profile(poles, scale: float = 1.0) -> InitialFunction:
    """phi(z) = scale / prod (z - p_k) with every pole in the lower half plane."""
    poles = tuple(complex(p) for p in poles)
    if any(p.imag >= 0 for p in poles):
        raise ValueError("rational profile poles must lie in the open lower half plane")
    return InitialFunction("rational_profile", (complex(scale), poles))


@dataclass(frozen=True)
class EtaTrajectory:
    """Time samples of the complex order parameter with provenance."""

    times: np.ndarray
    values: np.ndarray
    source: str  # residue_prediction | direct_integration | finite_N | galerkin
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=complex)
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("trajectory values must be finite")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return len(self.times)


# -- the pairing ----------------------------------------------------------


def pairing_Q(g: SpectralDensity, lam, phi: InitialFunction, rule: QuadratureRule | None = None):
    """Continued pairing Q[lam, phi] (vectorized over lam).

    Right half plane: int phi g / (lam - i w) dw.  Left half plane and axis:
    the same integral continued, i.e. plus 2 pi g(-i lam) phi(-i lam); on the
    axis the integral is the principal-value boundary limit.
    """
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=complex))
    if phi.kind == "constant_one":
        if g.analyticity == "real_axis_only":
            if np.any(lam_arr.real < 0):
                raise UnsupportedContinuation("piecewise density: pairing restricted to Re lam >= 0")
            out = np.empty_like(lam_arr)
            on_axis = lam_arr.real == 0
            if np.any(~on_axis):
                out[~on_axis] = np.atleast_1d(closed_form_D(g, lam_arr[~on_axis]))
            for i in np.flatnonzero(on_axis):
                out[i] = boundary_value(g, float(lam_arr[i].imag))
        else:
            out = _entire_F(g, lam_arr)
        return out if np.ndim(lam) else complex(out[0])
    rule = rule or make_quadrature(g, 512)
    phi_nodes = phi(rule.nodes)
    out = np.empty_like(lam_arr)
    off_axis = lam_arr.real != 0
    if np.any(off_axis):
        lo = lam_arr[off_axis]
        kernel = 1.0 / (lo[:, None] - 1j * rule.nodes[None, :])
        out[off_axis] = kernel @ (rule.weights * phi_nodes)
    for i in np.flatnonzero(~off_axis):
        out[i] = _pv_pairing(g, phi, lam_arr[i].imag, rule)
    left = lam_arr.real < 0
    if np.any(left):
        z = -1j * lam_arr[left]
        out[left] += 2 * np.pi * np.atleast_1d(g.continuation(z)) * np.atleast_1d(phi(z))
    return out if np.ndim(lam) else complex(out[0])


def _pv_pairing(g: SpectralDensity, phi: InitialFunction, y: float, rule: QuadratureRule) -> complex:
    """Boundary limit pi q(y) - i pi V_q(y) with q = phi * g, by symmetrized PV."""
    qy = complex(phi(y)) * float(g(y))

    def q_re(t):
        return np.real(phi(t)) * g(t)

    def q_im(t):
        return np.imag(phi(t)) * g(t)

    v = hilbert_transform_quadrature(_CallableDensity(g, q_re), y, 40_000) + 1j * hilbert_transform_quadrature(
        _CallableDensity(g, q_im), y, 40_000
    )
    return math.pi * qy - 1j * math.pi * v


class _CallableDensity:
    """Adapter giving an arbitrary real function the density interface."""

    def __init__(self, g: SpectralDensity, fn):
        self._fn = fn
        self.breakpoints = g.breakpoints
        self._radius = g.support_radius()

    def __call__(self, w):
        return self._fn(np.asarray(w, dtype=float))

    def support_radius(self):
        return self._radius


# -- residue expansion ------------------------------------------------------


def _filon_quadratic(f_edges, f_mids, edges, t):
    """Exact integral of the panel-wise quadratic interpolant times e^{iyt}."""
    y0, y1 = edges[:-1], edges[1:]
    ym = (y0 + y1) / 2
    h = (y1 - y0) / 2
    a_ = f_mids
    b_ = (f_edges[1:] - f_edges[:-1]) / 2
    c_ = (f_edges[1:] + f_edges[:-1]) / 2 - f_mids
    th = t * h
    small = np.abs(th) < 1e-3
    with np.errstate(divide="ignore", invalid="ignore"):
        M0 = 2 * np.sin(th) / th
        M1 = 2j * (np.sin(th) - th * np.cos(th)) / th**2
        M2 = 2 * ((th**2 - 2) * np.sin(th) + 2 * th * np.cos(th)) / th**3
    th2 = th * th
    M0 = np.where(small, 2 - th2 / 3 + th2 * th2 / 60, M0)
    M1 = np.where(small, 2j * th / 3 * (1 - th2 / 10), M1)
    M2 = np.where(small, 2 / 3 - th2 / 5 + th2 * th2 / 42, M2)
    return np.sum(np.exp(1j * t * ym) * h * (a_ * M0 + b_ * M1 + c_ * M2))


def _strip_panels(a: float, Y: float, h0: float = 0.04, ratio: float = 1.05) -> np.ndarray:
    y_lin = max(20.0, 3 * a)
    pts = list(np.arange(0.0, y_lin, h0)) + [y_lin]
    h = h0 * ratio
    while pts[-1] < Y:
        pts.append(min(Y, pts[-1] + h))
        h *= ratio
    pos = np.array(pts)
    return np.concatenate([-pos[::-1][:-1], pos])


def _clean_strip_depth(g, K, a, im_r):
    """Shift a by 5% steps until no root sits within 2% of the line Re = -a."""
    from .errors import ContourThroughZero

    for _ in range(12):
        w = max(0.02 * a, 5e-3)
        strip = SearchWindow(-a - w, -a + w, -im_r, im_r)
        try:
            n = count_zeros(g, K, strip)
        except ContourThroughZero:
            n = 1
        if n == 0:
            return a
        a *= 1.05
    raise RuntimeError("could not find a pole-free strip boundary")


def predict_eta(
    g: SpectralDensity,
    K: float,
    phi: InitialFunction,
    times,
    strip_depth: float = 3.0,
    rule: QuadratureRule | None = None,
    tail_cutoff: float = 5e4,
) -> EtaTrajectory:
    """Order parameter from the residue expansion.

    Rational densities get the exact finite sum (no remainder).  Otherwise
    all roots with Re lam > -strip_depth contribute exponential terms and the
    rest is the strip line integral; the boundary is auto-shifted in 5% steps
    if a pole sits on it.
    """
    times = np.asarray(times, dtype=float)
    rule = rule or make_quadrature(g, 512)
    if g.analyticity == "real_axis_only":
        raise UnsupportedContinuation("residue prediction needs a continuable density")

    rational = g.analyticity == "rational"
    if rational:
        reach = max(1.0, K * g.mass / 2 + max(abs(p) for p in g.continuation_poles))
        a = reach + 1.0
        im_r = reach + 1.0
    else:
        im_r = strip_depth + 8.0
        a = _clean_strip_depth(g, K, strip_depth, im_r)
    re_hi = max(K * g.mass / 2 + 0.05, 0.05)
    window = SearchWindow(-a, re_hi, -im_r, im_r, grid_resolution=141)
    roots = find_roots(g, K, window)

    q_phi = np.array([pairing_Q(g, r.lam, phi, rule) for r in roots])
    q_one = np.array([pairing_Q(g, r.lam, constant_one(), rule) for r in roots])
    coeffs = np.array([K / (2 * r.residue_coeff) for r in roots]) * q_phi * q_one
    lams = np.array([r.lam for r in roots])
    values = (coeffs[None, :] * np.exp(np.outer(times, lams))).sum(axis=1) if len(roots) else np.zeros_like(times, dtype=complex)

    if not rational:
        edges = _strip_panels(a, tail_cutoff)
        mids = (edges[:-1] + edges[1:]) / 2
        A = complex(rule.integrate(phi(rule.nodes)))

        def line_f(y):
            lam = -a + 1j * y
            qp = pairing_Q(g, lam, phi, rule)
            qo = _entire_F(g, lam)
            G = 1.0 - (K / 2) * qo
            return qp * (1.0 + (K / 2) * qo / G) - A / (1j * (y - 1j * a))

        f_edges = np.asarray(line_f(edges))
        f_mids = np.asarray(line_f(mids))
        rem = np.array([_filon_quadratic(f_edges, f_mids, edges, t) for t in times])
        values = values + np.exp(-a * times) / (2 * np.pi) * rem + A * np.exp(-2 * a * times)

    return EtaTrajectory(
        times=times,
        values=values,
        source="residue_prediction",
        metadata={"K": K, "density": g.label, "strip_depth": a, "n_roots": len(roots)},
    )


# -- direct integration oracle ----------------------------------------------


def direct_integration(
    g: SpectralDensity,
    K: float,
    phi: InitialFunction,
    times,
    rule: QuadratureRule | None = None,
    dt: float | None = None,
) -> EtaTrajectory:
    """Integrate dZ1/dt = i w Z1 + (K/2) eta on the quadrature nodes.

    The stiff rotation is applied exactly through an integrating factor, so
    the Runge-Kutta step only resolves the coupling; the step bound uses the
    largest frequency that carries appreciable weight.
    """
    times = np.asarray(times, dtype=float)
    rule = rule or sampling_rule(g)
    w = rule.nodes
    wt = rule.weights
    heavy = np.abs(w)[wt > 1e-12 * np.max(np.abs(wt))]
    omega_eff = min(float(heavy.max()) if len(heavy) else 1.0, 40.0)
    dt_max = 0.5 / max(1.0, K, omega_eff)
    if dt is None:
        dt = dt_max
    elif dt > dt_max * (1 + 1e-12):
        raise StepTooLarge(f"dt = {dt} exceeds the bound 0.5/max(1, K, omega_eff) = {dt_max:.3e}")

    W = np.asarray(phi(w), dtype=complex).copy()  # transformed variable e^{-iwt} Z1
    out = np.empty(len(times), dtype=complex)
    t_cur = 0.0
    phase = np.ones_like(W)
    start = 0
    if times[0] == 0.0:
        out[0] = np.dot(wt, W)
        start = 1

    for k in range(start, len(times)):
        span = times[k] - t_cur
        n = max(1, int(math.ceil(span / dt)))
        h = span / n
        Eh = np.exp(1j * w * h / 2)
        for _ in range(n):
            def rhs(Wv, ph):
                eta = np.dot(wt, ph * Wv)
                return np.conj(ph) * (K / 2) * eta

            k1 = rhs(W, phase)
            ph_h = phase * Eh
            k2 = rhs(W + h / 2 * k1, ph_h)
            k3 = rhs(W + h / 2 * k2, ph_h)
            ph_f = ph_h * Eh
            k4 = rhs(W + h * k3, ph_f)
            W = W + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
            phase = ph_f
        t_cur = times[k]
        out[k] = np.dot(wt, phase * W)

    return EtaTrajectory(
        times=times,
        values=out,
        source="direct_integration",
        metadata={"K": K, "density": g.label, "resolution": rule.resolution, "dt": dt},
    )
