"""Resolvent integrals, Plemelj boundary values, and the characteristic function.

The central object is

    D(lam) = int g(w) / (lam - i w) dw,

holomorphic off the imaginary axis.  Its boundary value from the right is
``pi g(y) - i pi V(y)`` with V the Hilbert transform of g, and its
continuation across the axis (the second sheet) is ``D(lam) + 2 pi g(-i lam)``.
Zeros of ``G(lam) = 1 - (K/2) F(lam)`` in the right half plane are eigenvalues
of the linearized dynamics; zeros with Re lam <= 0 are resonance poles.

Closed forms are used whenever the density admits one (Faddeeva function for
Gaussian kinds, rational algebra for the Lorentzian, branch-safe segment
integrals for piecewise kinds); quadrature is kept as the universal fallback
and as the test oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import wofz

from .density import QuadratureRule, SpectralDensity, make_quadrature
from .errors import BreakpointHit, QuadratureDivergence, UnsupportedContinuation

__all__ = [
    "ResolventValue",
    "resolvent_D",
    "closed_form_D",
    "hilbert_transform",
    "hilbert_transform_quadrature",
    "boundary_value",
    "continued_resolvent_F",
    "characteristic_G",
    "characteristic_G_derivative",
]

_NEAR_AXIS = 1e-4  # |Re lam| below this delegates quadrature paths to the boundary value


@dataclass(frozen=True)
class ResolventValue:
    """A resolvent evaluation together with its provenance."""

    lam: complex
    value: complex
    sheet: str  # first | boundary | second
    method: str  # quadrature | closed_form | plemelj


def _sheet_of(lam: complex) -> str:
    if lam.real > 0:
        return "first"
    if lam.real < 0:
        return "second"
    return "boundary"


# -- closed forms ---------------------------------------------------------


def _faddeeva_F(mean, sigma, lam):
    """Entire continuation of D for a unit-mass normal component."""
    z = (np.asarray(lam, dtype=complex) - 1j * mean) / sigma
    return np.sqrt(np.pi / 2) / sigma * wofz(1j * z / math.sqrt(2))


def _entire_F(g: SpectralDensity, lam):
    """Maximal analytic continuation of D for smooth kinds (vectorized)."""
    lam = np.asarray(lam, dtype=complex)
    if g.kind == "gaussian":
        mean, sigma = g.params
        return _faddeeva_F(mean, sigma, lam)
    if g.kind == "gaussian_mixture":
        return sum(wt * _faddeeva_F(m, s, lam) for wt, m, s in g.params)
    if g.kind == "lorentzian":
        (scale,) = g.params
        with np.errstate(divide="ignore", invalid="ignore"):
            return 1.0 / (lam + scale)
    raise UnsupportedContinuation(f"{g.kind} has no single-valued continuation")


def _entire_F_derivative(g: SpectralDensity, lam):
    lam = np.asarray(lam, dtype=complex)
    if g.kind == "gaussian":
        mean, sigma = g.params
        z = (lam - 1j * mean) / sigma
        return (z * _faddeeva_F(mean, sigma, lam) * sigma - 1.0) / sigma**2
    if g.kind == "gaussian_mixture":
        out = np.zeros_like(lam)
        for wt, m, s in g.params:
            z = (lam - 1j * m) / s
            out = out + wt * (z * _faddeeva_F(m, s, lam) * s - 1.0) / s**2
        return out
    if g.kind == "lorentzian":
        (scale,) = g.params
        return -1.0 / (lam + scale) ** 2
    raise UnsupportedContinuation(f"{g.kind} has no single-valued continuation")


def _piecewise_D(g: SpectralDensity, lam):
    """First-sheet segment integral, branch-safe on both half planes."""
    lam = np.asarray(lam, dtype=complex)
    x, y = lam.real, lam.imag
    out = np.zeros_like(lam)
    with np.errstate(divide="ignore"):
        for a, b, va, vb in g.segments:
            alpha = (vb - va) / (b - a)
            beta = va - alpha * a
            re1 = np.arctan((b - y) / x) - np.arctan((a - y) / x)
            im1 = 0.5 * np.log((x**2 + (b - y) ** 2) / (x**2 + (a - y) ** 2))
            I1 = re1 + 1j * im1
            out = out + 1j * alpha * (b - a) + (beta - 1j * alpha * lam) * I1
    return out


def _piecewise_D_derivative(g: SpectralDensity, lam):
    lam = np.asarray(lam, dtype=complex)
    x, y = lam.real, lam.imag
    out = np.zeros_like(lam)
    for a, b, va, vb in g.segments:
        alpha = (vb - va) / (b - a)
        beta = va - alpha * a
        re1 = np.arctan((b - y) / x) - np.arctan((a - y) / x)
        im1 = 0.5 * np.log((x**2 + (b - y) ** 2) / (x**2 + (a - y) ** 2))
        I1 = re1 + 1j * im1
        I2 = -1j * (1.0 / (lam - 1j * b) - 1.0 / (lam - 1j * a))
        out = out - (1j * alpha * I1 + (beta - 1j * alpha * lam) * I2)
    return out


def closed_form_D(g: SpectralDensity, lam):
    """First-sheet D(lam) in closed form (every built-in kind has one)."""
    lam_arr = np.atleast_1d(np.asarray(lam, dtype=complex))
    if np.any(lam_arr.real == 0.0):
        raise ValueError("first-sheet D is defined off the imaginary axis")
    if g.analyticity == "real_axis_only":
        out = _piecewise_D(g, lam_arr)
    else:
        out = np.array(_entire_F(g, lam_arr), copy=True)
        left = lam_arr.real < 0
        if np.any(left):
            out[left] -= 2 * np.pi * np.atleast_1d(g.continuation(-1j * lam_arr[left]))
    return out if np.ndim(lam) else complex(out[0])


def resolvent_D(g: SpectralDensity, lam: complex, rule: QuadratureRule | None = None, check: bool = True) -> complex:
    """First-sheet resolvent integral int g/(lam - i w) dw, Re lam != 0.

    With a rule the integral is evaluated by quadrature and validated by a
    resolution doubling; the closed form is used otherwise.  Note that for
    Re lam < 0 this is the first-sheet value, discontinuous across the axis,
    not the continuation.
    """
    lam = complex(lam)
    if lam.real == 0.0:
        raise ValueError("resolvent_D requires Re lam != 0; use boundary_value on the axis")
    if rule is None:
        return complex(closed_form_D(g, lam))
    val = rule.integrate(1.0 / (lam - 1j * rule.nodes))
    if check:
        fine = make_quadrature(g, 2 * rule.resolution)
        ref = fine.integrate(1.0 / (lam - 1j * fine.nodes))
        if abs(ref - val) > 1e-8:
            raise QuadratureDivergence(
                f"doubling resolution moved D({lam}) by {abs(ref - val):.3e}; "
                "the point is too close to the axis for this rule"
            )
    return complex(val)


# -- Hilbert transform and boundary values --------------------------------


def _piecewise_hilbert(g: SpectralDensity, y: float) -> float:
    """Exact V(y) for piecewise kinds, log terms grouped by knot.

    Grouping makes the formula finite at knots where g is continuous: the
    log coefficient there is the jump of g, which vanishes.
    """
    slope_total = 0.0
    knots: dict[float, tuple[float, float]] = {}
    for a, b, va, vb in g.segments:
        alpha = (vb - va) / (b - a)
        beta = va - alpha * a
        slope_total += alpha * (b - a)
        ka = knots.get(a, (0.0, 0.0))
        knots[a] = (ka[0] + alpha, ka[1] + beta)
        kb = knots.get(b, (0.0, 0.0))
        knots[b] = (kb[0] - alpha, kb[1] - beta)
    total = -slope_total
    for k, (dalpha, dbeta) in knots.items():
        c = dalpha * y + dbeta
        d = y - k
        if d == 0.0:
            if abs(c) > 1e-12:
                raise BreakpointHit(f"Hilbert transform at discontinuity w = {k}")
            continue
        if abs(d) < 1e-12 and abs(dalpha * k + dbeta) > 1e-12:
            raise BreakpointHit(f"Hilbert transform at discontinuity w = {k}")
        total += c * math.log(abs(d))
    return total / math.pi


def hilbert_transform(g: SpectralDensity, y: float) -> float:
    """Hilbert transform V(y) = p.v. (1/pi) int g(y-t)/t dt.

    Piecewise kinds use the exact log formula; smooth kinds the closed-form
    boundary value of the continued resolvent.
    """
    y = float(y)
    if g.analyticity == "real_axis_only":
        return _piecewise_hilbert(g, y)
    return float(-np.imag(_entire_F(g, 1j * y)) / np.pi)


def hilbert_transform_quadrature(g: SpectralDensity, y: float, resolution: int = 100_000) -> float:
    """Brute-force symmetrized principal value (test oracle, all kinds).

    Integrates (g(y-t) - g(y+t))/t on a trapezoid grid; the integrand is
    smooth at t = 0 with limit -2 g'(y).
    """
    y = float(y)
    T = g.support_radius() + abs(y) + 1.0
    cuts = {0.0, T}
    for b in g.breakpoints:
        for s in (y - b, b - y):
            if 0.0 < s < T:
                cuts.add(float(s))
    edges = sorted(cuts)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        n = max(16, int(resolution * (hi - lo) / T))
        t = np.linspace(lo, hi, n)
        if lo == 0.0:
            t = t[1:]
            h = 1e-7 * max(1.0, abs(y))
            limit = -(g(y + h) - g(y - h)) / h  # -2 g'(y)
            t = np.concatenate([[1e-12], t])
            vals = (g(y - t) - g(y + t)) / t
            vals[0] = limit
        else:
            vals = (g(y - t) - g(y + t)) / t
        total += np.trapezoid(vals, t)
    return total / math.pi


def boundary_value(g: SpectralDensity, y: float) -> complex:
    """Right-hand limit of D on the axis: pi g(y) - i pi V(y)."""
    v = hilbert_transform(g, y)
    return complex(math.pi * float(g(y)) - 1j * math.pi * v)


# -- continuation and characteristic function -----------------------------


def continued_resolvent_F(g: SpectralDensity, lam: complex, rule: QuadratureRule | None = None) -> ResolventValue:
    """Maximal continuation F of the resolvent integral.

    F equals D on the right half plane, the Plemelj boundary value on the
    axis, and D + 2 pi g(-i lam) on the left half plane.  The three branches
    glue continuously.  Piecewise densities (no continuation) are refused on
    the left half plane.
    """
    lam = complex(lam)
    sheet = _sheet_of(lam)
    if g.analyticity != "real_axis_only":
        if rule is None:
            return ResolventValue(lam, complex(_entire_F(g, lam)), sheet, "closed_form")
        if abs(lam.real) < _NEAR_AXIS:
            return ResolventValue(lam, boundary_value(g, lam.imag), sheet, "plemelj")
        val = resolvent_D(g, lam, rule)
        if sheet == "second":
            val = val + 2 * np.pi * complex(g.continuation(-1j * lam))
        return ResolventValue(lam, val, sheet, "quadrature")
    # piecewise kinds: first sheet and boundary only
    if sheet == "second":
        raise UnsupportedContinuation(
            "second-sheet evaluation is not defined for piecewise densities "
            "(their continuation is multi-valued)"
        )
    if sheet == "boundary" or (abs(lam.real) < _NEAR_AXIS and rule is not None):
        return ResolventValue(lam, boundary_value(g, lam.imag), sheet, "plemelj")
    if rule is None:
        return ResolventValue(lam, complex(_piecewise_D(g, lam)), sheet, "closed_form")
    return ResolventValue(lam, resolvent_D(g, lam, rule), sheet, "quadrature")


def _F_values(g: SpectralDensity, lam_arr: np.ndarray) -> np.ndarray:
    """Vectorized F on arrays; piecewise kinds are valid for Re lam > 0 only."""
    if g.analyticity != "real_axis_only":
        return _entire_F(g, lam_arr)
    return _piecewise_D(g, lam_arr)


def characteristic_G(g: SpectralDensity, K: float, lam, rule: QuadratureRule | None = None):
    """G(lam) = 1 - (K/2) F(lam); its zeros are eigenvalues/resonance poles."""
    lam_arr = np.asarray(lam, dtype=complex)
    if lam_arr.ndim == 0:
        return 1.0 - (K / 2.0) * continued_resolvent_F(g, complex(lam), rule).value
    if g.analyticity == "real_axis_only" and np.any(lam_arr.real < 0):
        raise UnsupportedContinuation("piecewise densities restrict G to Re lam >= 0")
    with np.errstate(invalid="ignore"):
        return 1.0 - (K / 2.0) * _F_values(g, lam_arr)


def characteristic_G_derivative(g: SpectralDensity, K: float, lam):
    """dG/dlam in closed form, valid wherever G is."""
    lam_arr = np.asarray(lam, dtype=complex)
    if g.analyticity != "real_axis_only":
        out = -(K / 2.0) * _entire_F_derivative(g, lam_arr)
    else:
        if np.any(lam_arr.real < 0):
            raise UnsupportedContinuation("piecewise densities restrict G to Re lam >= 0")
        out = -(K / 2.0) * _piecewise_D_derivative(g, lam_arr)
    return out if out.ndim else complex(out)
