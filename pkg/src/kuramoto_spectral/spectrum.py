"""Eigenvalue and resonance-pole location for the linearized mean-field dynamics.

Roots of G(lam) = 1 - (K/2) F(lam) are located by a grid-seeded Newton
iteration and certified by the argument principle along the window boundary.
Eigenvalues live on the right half plane (first sheet), resonance poles on
the closed left half plane (second sheet); F glues the sheets continuously,
so a single G covers both.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .density import SpectralDensity
from .errors import (
    ContourThroughZero,
    CountMismatch,
    LostRoot,
    NewtonDivergence,
    NotARoot,
    UnsupportedContinuation,
)
from .resolvent import characteristic_G, characteristic_G_derivative

__all__ = [
    "SearchWindow",
    "SpectralRoot",
    "SimplicityReport",
    "RootPath",
    "count_zeros",
    "find_roots",
    "residue_coefficient",
    "check_simplicity",
    "continue_root_in_K",
]


@dataclass(frozen=True)
class SearchWindow:
    """Rectangle in the complex plane with scan and contour resolutions."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    grid_resolution: int = 101
    contour_resolution: int = 1024

    def __post_init__(self):
        if not (self.re_max > self.re_min and self.im_max > self.im_min):
            raise ValueError("window must have re_max > re_min and im_max > im_min")

    def contains(self, lam: complex, pad: float = 0.0) -> bool:
        return (
            self.re_min - pad <= lam.real <= self.re_max + pad
            and self.im_min - pad <= lam.imag <= self.im_max + pad
        )

    def shifted(self, dre: float, dim: float) -> "SearchWindow":
        return SearchWindow(
            self.re_min + dre,
            self.re_max + dre,
            self.im_min + dim,
            self.im_max + dim,
            self.grid_resolution,
            self.contour_resolution,
        )


@dataclass(frozen=True)
class SpectralRoot:
    """A located zero of G with classification and residue data."""

    lam: complex
    kind: str  # eigenvalue | resonance_pole
    multiplicity: int
    residue_coeff: complex  # dG/dlam at the root (E_n on the first sheet, D_n on the second)
    K: float
    newton_residual: float


@dataclass(frozen=True)
class SimplicityReport:
    all_simple: bool
    suspect: tuple


@dataclass(frozen=True)
class RootPath:
    """Continuation of a root in K with recorded axis crossings."""

    points: tuple  # ((K, lam), ...)
    crossings: tuple  # K values where Re lam changes sign


def _f_poles_in(g: SpectralDensity, window: SearchWindow):
    """Declared poles of the continued resolvent inside the window."""
    poles = []
    for z0 in g.continuation_poles:
        lam_p = 1j * z0
        if lam_p.real < 0 and window.contains(lam_p):
            poles.append(lam_p)
    return poles


def _check_axis_clearance(g: SpectralDensity, window: SearchWindow):
    # the axis is a branch boundary only without a continuation; smooth kinds
    # have G analytic across it and may place edges anywhere
    if g.analyticity == "real_axis_only":
        if window.re_min < 0:
            raise UnsupportedContinuation("piecewise densities restrict root search to Re lam > 0")
        if window.re_min < 1e-3:
            raise ValueError("window edges must keep 1e-3 clearance from the imaginary axis")


def _boundary_points(window: SearchWindow, n: int) -> np.ndarray:
    """Counterclockwise rectangle boundary, closed (last point = first)."""
    w = window.re_max - window.re_min
    h = window.im_max - window.im_min
    per = 2 * (w + h)
    n_w = max(8, int(round(n * w / per)))
    n_h = max(8, int(round(n * h / per)))
    bottom = window.re_min + w * np.arange(n_w) / n_w + 1j * window.im_min
    right = window.re_max + 1j * (window.im_min + h * np.arange(n_h) / n_h)
    top = window.re_max - w * np.arange(n_w) / n_w + 1j * window.im_max
    left = window.re_min + 1j * (window.im_max - h * np.arange(n_h) / n_h)
    pts = np.concatenate([bottom, right, top, left, [bottom[0]]])
    return pts


def _winding_adaptive(g: SpectralDensity, K: float, window: SearchWindow) -> tuple[int, float]:
    pts = _boundary_points(window, window.contour_resolution)
    vals = characteristic_G(g, K, pts)
    min_abs = float(np.min(np.abs(vals)))
    for _ in range(18):
        dphi = np.angle(vals[1:] / vals[:-1])
        bad = np.abs(dphi) >= 1.0
        if not np.any(bad):
            return int(round(float(np.sum(dphi)) / (2 * math.pi))), min_abs
        new_pts = []
        new_vals = []
        mids = (pts[:-1][bad] + pts[1:][bad]) / 2
        mvals = characteristic_G(g, K, mids)
        mi = 0
        for i in range(len(pts) - 1):
            new_pts.append(pts[i])
            new_vals.append(vals[i])
            if bad[i]:
                new_pts.append(mids[mi])
                new_vals.append(mvals[mi])
                mi += 1
        new_pts.append(pts[-1])
        new_vals.append(vals[-1])
        pts = np.array(new_pts)
        vals = np.array(new_vals)
        min_abs = min(min_abs, float(np.min(np.abs(vals))))
        if len(pts) > 300_000:
            break
    raise ContourThroughZero("phase could not be resolved along the contour")


def count_zeros(g: SpectralDensity, K: float, window: SearchWindow) -> int:
    """Number of zeros of G inside the window, by the argument principle.

    The boundary is nudged by up to 1e-2 (three attempts) when it passes too
    close to a zero or to a declared pole of the continued resolvent;
    declared poles inside are added back, since the winding counts
    zeros minus poles.
    """
    _check_axis_clearance(g, window)
    win = window
    for attempt in range(4):
        pole_dist = min(
            (
                min(
                    abs(p.real - win.re_min),
                    abs(p.real - win.re_max),
                    abs(p.imag - win.im_min),
                    abs(p.imag - win.im_max),
                )
                for z0 in g.continuation_poles
                for p in [1j * z0]
                if p.real < 0
            ),
            default=1.0,
        )
        if pole_dist > 1e-6:
            try:
                winding, min_abs = _winding_adaptive(g, K, win)
                if min_abs >= 1e-6:
                    return winding + len(_f_poles_in(g, win))
            except ContourThroughZero:
                pass
        if attempt == 3:
            break
        win = win.shifted(0.0031 * (attempt + 1), 0.0037 * (attempt + 1))
    raise ContourThroughZero("could not nudge the contour off a zero after 3 attempts")


def _newton_polish(g: SpectralDensity, K: float, seed: complex, window: SearchWindow, tol: float):
    lam = complex(seed)
    scale = max(1.0, abs(window.re_min), abs(window.re_max), abs(window.im_min), abs(window.im_max))
    for _ in range(80):
        gval = characteristic_G(g, K, np.array([lam]))[0]
        gp = characteristic_G_derivative(g, K, np.array([lam]))[0]
        if gp == 0 or not np.isfinite(gp):
            raise NewtonDivergence(f"vanishing derivative near {lam}")
        step = gval / gp
        lam = lam - step
        if not np.isfinite(lam) or abs(lam) > 50 * scale:
            raise NewtonDivergence(f"iteration left the search region from seed {seed}")
        if abs(step) < 1e-14 * (1 + abs(lam)):
            break
    resid = abs(characteristic_G(g, K, np.array([lam]))[0])
    if resid > tol:
        raise NewtonDivergence(f"residual {resid:.2e} above tolerance from seed {seed}")
    return lam, resid


def _multiplicity(g: SpectralDensity, K: float, lam: complex) -> int:
    """Simple if |G'| is clearly nonzero; otherwise count zeros in a small disc."""
    gp = abs(characteristic_G_derivative(g, K, np.array([lam]))[0])
    if gp > 1e-8:
        return 1
    r = 1e-4
    th = np.linspace(0, 2 * math.pi, 256, endpoint=False)
    circle = lam + r * np.exp(1j * th)
    vals = characteristic_G(g, K, np.append(circle, circle[0]))
    dphi = np.angle(vals[1:] / vals[:-1])
    return max(1, int(round(float(np.sum(dphi)) / (2 * math.pi))))


def find_roots(
    g: SpectralDensity,
    K: float,
    window: SearchWindow,
    newton_tol: float = 1e-10,
) -> list[SpectralRoot]:
    """All zeros of G in the window, certified by the argument principle.

    Seeds are local minima of |G| on the scan grid, polished by Newton with
    the closed-form derivative, deduplicated at 1e-8.  A count mismatch after
    three grid refinements raises.
    """
    _check_axis_clearance(g, window)
    target = count_zeros(g, K, window)
    res = window.grid_resolution
    for round_ in range(3):
        roots = _find_roots_once(g, K, window, res, newton_tol)
        if sum(r.multiplicity for r in roots) == target:
            return roots
        res = 2 * res + 1
    raise CountMismatch(
        f"argument principle counts {target} zeros but {len(roots)} were located"
    )


def _find_roots_once(g, K, window, res, newton_tol):
    re = np.linspace(window.re_min, window.re_max, res)
    im = np.linspace(window.im_min, window.im_max, res)
    lam_grid = re[None, :] + 1j * im[:, None]
    absG = np.abs(characteristic_G(g, K, lam_grid.ravel())).reshape(lam_grid.shape)
    pad = np.pad(absG, 1, constant_values=np.inf)
    interior = absG
    neighbors = np.minimum.reduce(
        [
            pad[ir : ir + absG.shape[0], ic : ic + absG.shape[1]]
            for ir in range(3)
            for ic in range(3)
            if not (ir == 1 and ic == 1)
        ]
    )
    is_min = interior <= neighbors
    seeds = lam_grid[is_min]
    order = np.argsort(absG[is_min])
    seeds = seeds[order][:200]

    found: list[complex] = []
    pole_set = [1j * z0 for z0 in g.continuation_poles if (1j * z0).real < 0]
    for seed in seeds:
        try:
            lam, resid = _newton_polish(g, K, complex(seed), window, newton_tol)
        except NewtonDivergence:
            continue
        if not window.contains(lam):
            continue
        if any(abs(lam - p) < 1e-6 for p in pole_set):
            continue
        if any(abs(lam - r) < 1e-8 for r in found):
            continue
        found.append(lam)
    roots = []
    for lam in sorted(found, key=lambda z: (-z.real, abs(z.imag), z.imag)):
        mult = _multiplicity(g, K, lam)
        roots.append(
            SpectralRoot(
                lam=lam,
                kind="eigenvalue" if lam.real > 0 else "resonance_pole",
                multiplicity=mult,
                residue_coeff=complex(characteristic_G_derivative(g, K, np.array([lam]))[0]),
                K=K,
                newton_residual=float(abs(characteristic_G(g, K, np.array([lam]))[0])),
            )
        )
    return roots


def residue_coefficient(g: SpectralDensity, K: float, lam_n: complex) -> complex:
    """dG/dlam at a root: the normalizing constant of its residue term.

    On the second sheet this is the resonance-pole coefficient, on the first
    sheet the eigenvalue coefficient.
    """
    resid = abs(characteristic_G(g, K, np.array([complex(lam_n)]))[0])
    if resid > 1e-8:
        raise NotARoot(f"|G({lam_n})| = {resid:.2e} exceeds 1e-8")
    return complex(characteristic_G_derivative(g, K, np.array([complex(lam_n)]))[0])


def check_simplicity(roots) -> SimplicityReport:
    """Flag roots whose residue coefficient is numerically zero."""
    suspect = tuple(r for r in roots if abs(r.residue_coeff) <= 1e-8 or r.multiplicity > 1)
    return SimplicityReport(all_simple=not suspect, suspect=suspect)


def continue_root_in_K(
    g: SpectralDensity,
    K_start: float,
    K_end: float,
    steps: int,
    lam_seed: complex,
    newton_tol: float = 1e-10,
) -> RootPath:
    """Predictor-corrector continuation of a root of G from K_start to K_end.

    Uses the implicit-function predictor dlam/dK = (1/K)/G'(lam) and a Newton
    corrector; the step is halved on corrector failure down to a relative
    1e-6, after which the root is declared lost.  Sign changes of Re(lam) are
    recorded as axis crossings.
    """
    lam = complex(lam_seed)
    resid = abs(characteristic_G(g, K_start, np.array([lam]))[0])
    if resid > 1e-6:
        raise NotARoot(f"seed is not a root at K_start: |G| = {resid:.2e}")
    big_window = SearchWindow(-1e9, 1e9, -1e9, 1e9)
    points = [(K_start, lam)]
    crossings = []
    if K_end == K_start:
        return RootPath(points=tuple(points), crossings=())
    K_cur = K_start
    dK_nominal = (K_end - K_start) / max(1, steps)
    dK = dK_nominal
    while (K_end - K_cur) * np.sign(dK_nominal) > 1e-12:
        dK = np.sign(dK_nominal) * min(abs(dK), abs(K_end - K_cur))
        gp = characteristic_G_derivative(g, K_cur, np.array([lam]))[0]
        pred = lam + dK * (1.0 / K_cur) / gp
        try:
            nxt, _ = _newton_polish(g, K_cur + dK, pred, big_window, newton_tol)
            jumped = abs(nxt - lam) > 10 * (abs(dK) / K_cur / max(abs(gp), 1e-12) + 1e-3)
            if jumped:
                raise NewtonDivergence("corrector jumped to a different branch")
        except NewtonDivergence:
            if abs(dK) < 1e-6 * abs(K_end - K_start):
                raise LostRoot(f"continuation stalled at K = {K_cur}")
            dK /= 2
            continue
        if np.sign(nxt.real) != np.sign(lam.real) and (nxt.real != 0 and lam.real != 0):
            # linear interpolation of the crossing coupling
            frac = abs(lam.real) / (abs(lam.real) + abs(nxt.real))
            crossings.append(K_cur + frac * dK)
        K_cur += dK
        lam = nxt
        points.append((K_cur, lam))
        dK = min(abs(dK) * 2, abs(dK_nominal)) * np.sign(dK_nominal)
    return RootPath(points=tuple(points), crossings=tuple(crossings))
