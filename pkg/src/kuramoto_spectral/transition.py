"""Critical ordinates, transition couplings, and instability windows.

An eigenvalue can only disappear into the continuous spectrum at an ordinate
y where the Hilbert transform of g vanishes; the coupling at which that
happens is K = 2 / (pi g(y)).  The smallest such coupling is the transition
point K_c.  For even unimodal densities the unique ordinate is y = 0 and
K_c = 2 / (pi g(0)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .density import SpectralDensity, is_unimodal
from .errors import BreakpointHit
from .resolvent import hilbert_transform
from .spectrum import SearchWindow, count_zeros

__all__ = ["TransitionReport", "critical_ordinates", "transition_point", "instability_windows"]

_SCAN_RESOLUTION = 4096


@dataclass(frozen=True)
class TransitionReport:
    """Critical ordinates, candidate couplings, and the transition point."""

    critical_ys: tuple
    candidate_Ks: tuple  # 2/(pi g(y_j)); +inf where g vanishes at the ordinate
    K_c: float
    kuramoto_point: float | None  # 2/(pi g(0)) for even unimodal densities
    windows: tuple = ()  # filled by instability_windows when requested


def _scan_interval(g: SpectralDensity) -> tuple[float, float]:
    r = g.support_radius()
    if len(g.breakpoints):
        lo, hi = float(g.breakpoints[0]), float(g.breakpoints[-1])
        width = hi - lo
        return lo - 3 * width, hi + 3 * width
    return -4 * r, 4 * r


def critical_ordinates(g: SpectralDensity, scan_resolution: int = _SCAN_RESOLUTION) -> list[float]:
    """Zeros of the Hilbert transform of g, refined by bisection to 1e-10.

    Ordinates at density discontinuities are excluded: an eigenvalue cannot
    approach the axis there (the resolvent integral diverges logarithmically).
    """
    lo, hi = _scan_interval(g)
    ys = np.linspace(lo, hi, scan_resolution)
    breakpts = g.breakpoints
    jumps = [b for b in breakpts if abs(g.jump(b)) > 1e-12]

    def V(y: float) -> float:
        return hilbert_transform(g, y)

    def near_jump(y: float) -> bool:
        return any(abs(y - b) < 1e-9 for b in jumps)

    vals = np.empty_like(ys)
    for i, y in enumerate(ys):
        try:
            vals[i] = V(y) if not near_jump(y) else np.nan
        except BreakpointHit:
            vals[i] = np.nan

    roots: list[float] = []
    for i in range(len(ys) - 1):
        v0, v1 = vals[i], vals[i + 1]
        if not (np.isfinite(v0) and np.isfinite(v1)):
            continue
        if v0 == 0.0:
            roots.append(float(ys[i]))
        elif v0 * v1 < 0:
            roots.append(float(brentq(V, ys[i], ys[i + 1], xtol=1e-10)))
    # exclude any root that landed on a discontinuity
    roots = [r for r in roots if not near_jump(r)]
    # dedupe (exact-zero grid hits may duplicate a bracketed root)
    out: list[float] = []
    for r in roots:
        if not out or abs(r - out[-1]) > 1e-9:
            out.append(r)
    return out


def transition_point(g: SpectralDensity) -> TransitionReport:
    """Candidate couplings K_j = 2/(pi g(y_j)) and their infimum K_c.

    With no ordinates the report carries K_c = +inf.  The classical
    2/(pi g(0)) value is attached whenever the density is even and unimodal.
    """
    ys = critical_ordinates(g)
    Ks = []
    for y in ys:
        gy = float(g(y))
        Ks.append(2.0 / (math.pi * gy) if gy > 0 else math.inf)
    K_c = min(Ks) if Ks else math.inf
    kuramoto = None
    if g.is_even and is_unimodal(g):
        kuramoto = 2.0 / (math.pi * float(g(0.0)))
    return TransitionReport(
        critical_ys=tuple(ys),
        candidate_Ks=tuple(Ks),
        K_c=K_c,
        kuramoto_point=kuramoto,
    )


def _eigenvalue_count(g: SpectralDensity, K: float) -> int:
    # any eigenvalue satisfies dist(lam, i*supp(g)) <= K*mass/2 since |D| <= mass/dist
    reach = K * g.mass / 2
    omega_r = g.support_radius() + reach + 1e-2
    window = SearchWindow(1e-3, reach + 1e-2, -omega_r, omega_r)
    return count_zeros(g, K, window)


def instability_windows(g: SpectralDensity, K_max: float, grid: int = 64) -> list[tuple[float, float]]:
    """Open K-intervals below K_max on which eigenvalues exist.

    The K-grid is seeded with the candidate couplings (the only points where
    the eigenvalue count can change); each window endpoint is then refined by
    bisection on the count to 1e-4.  A window still open at K_max is reported
    with an infinite upper edge.
    """
    report = transition_point(g)
    if not np.isfinite(report.K_c) or report.K_c >= K_max:
        return []
    candidates = sorted(k for k in report.candidate_Ks if np.isfinite(k) and k < K_max)
    ks = {K_max}
    for i, k in enumerate(candidates):
        ks.add(k + 1e-6)
        ks.add(max(k - 1e-6, 1e-6))
        nxt = candidates[i + 1] if i + 1 < len(candidates) else K_max
        ks.add((k + nxt) / 2)
    ks.update(np.linspace(report.K_c / 2, K_max, grid))
    ks = sorted(k for k in ks if k > 0)
    counts = {k: _eigenvalue_count(g, k) for k in ks}

    def refine(k_lo: float, k_hi: float) -> float:
        c_lo = counts.get(k_lo, _eigenvalue_count(g, k_lo))
        while k_hi - k_lo > 1e-4:
            mid = (k_lo + k_hi) / 2
            if (_eigenvalue_count(g, mid) > 0) == (c_lo > 0):
                k_lo = mid
            else:
                k_hi = mid
        return (k_lo + k_hi) / 2

    windows = []
    open_lo: float | None = None
    prev_k: float | None = None
    for k in ks:
        has = counts[k] > 0
        if has and open_lo is None:
            open_lo = refine(prev_k, k) if prev_k is not None else k
        elif not has and open_lo is not None:
            windows.append((open_lo, refine(prev_k, k)))
            open_lo = None
        prev_k = k
    if open_lo is not None:
        windows.append((open_lo, math.inf))
    return windows
