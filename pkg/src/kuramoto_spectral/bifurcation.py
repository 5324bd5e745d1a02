"""Center-manifold amplitude equation and theory-vs-simulation bifurcation curves.

Near the transition the critical mode amplitude obeys

    da/dt = a / (conj(D0) K_c) * (eps + c3 |a|^2),      c3 = pi g''(0) K_c^4 / 16,

with eps = K - K_c and D0 the derivative of the characteristic function at
the critical root.  For even unimodal densities D0 > 0 and g''(0) < 0, so a
stable synchronized branch emerges for K > K_c with amplitude

    r(K) = sqrt(-16 / (pi K_c^4 g''(0))) * sqrt(K - K_c) + O(K - K_c).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .density import SpectralDensity, is_unimodal, make_quadrature, uniform_quadrature
from .errors import NotEvenUnimodal, SubcriticalWarning, ZeroCurvature
from .simulate import make_ensemble, simulate_finite_N, simulate_galerkin
from .spectrum import residue_coefficient
from .transition import transition_point

__all__ = [
    "AmplitudeModel",
    "BifurcationCurve",
    "amplitude_model",
    "amplitude_rhs",
    "predicted_rc",
    "prediction_band",
    "bifurcation_diagram",
]


@dataclass(frozen=True)
class AmplitudeModel:
    """Coefficients of the one-dimensional amplitude equation at K_c."""

    K_c: float
    D0: complex  # derivative of the characteristic function at the critical root
    gpp0: float  # g''(0)
    cubic_coeff: float  # pi g''(0) K_c^4 / 16


@dataclass(frozen=True)
class BifurcationCurve:
    """Per-coupling theory and simulation amplitudes."""

    rows: tuple  # (K, r_theory, r_sim, sim_stderr, converged)

    def __post_init__(self):
        ks = [row[0] for row in self.rows]
        if any(b <= a for a, b in zip(ks, ks[1:])):
            raise ValueError("K values must be strictly increasing")


def amplitude_model(g: SpectralDensity) -> AmplitudeModel:
    """Assemble the amplitude-equation coefficients for an even unimodal density."""
    if not (g.is_even and is_unimodal(g)):
        raise NotEvenUnimodal("the amplitude equation requires an even unimodal density")
    gpp0 = float(np.real(g.derivative(0.0, order=2)))
    if abs(gpp0) < 1e-10:
        raise ZeroCurvature("g''(0) is numerically zero; the cubic coefficient is undefined")
    report = transition_point(g)
    K_c = report.K_c
    D0 = residue_coefficient(g, K_c, 0.0)
    if D0.real <= 0:
        raise RuntimeError(f"D0 = {D0} violates positivity for an even unimodal density")
    return AmplitudeModel(K_c=K_c, D0=D0, gpp0=gpp0, cubic_coeff=math.pi * gpp0 * K_c**4 / 16.0)


def amplitude_rhs(model: AmplitudeModel, alpha: complex, eps: float) -> complex:
    """Right-hand side of the reduced amplitude dynamics."""
    return alpha / (np.conj(model.D0) * model.K_c) * (eps + model.cubic_coeff * abs(alpha) ** 2)


def predicted_rc(model: AmplitudeModel, K: float) -> float:
    """Leading-order stationary amplitude at coupling K.

    Supercritical (g''(0) < 0): zero below K_c, sqrt growth above.
    Subcritical (g''(0) > 0): the fixed-point branch bends backward below
    K_c and is unstable; a warning is emitted and that amplitude returned.
    """
    eps = K - model.K_c
    if model.cubic_coeff > 0:
        warnings.warn(
            "positive center curvature: returning the backward (unstable) branch",
            SubcriticalWarning,
            stacklevel=2,
        )
        if eps >= 0:
            return 0.0
        return math.sqrt(-eps / model.cubic_coeff)
    if eps <= 0:
        return 0.0
    return math.sqrt(-16.0 / (math.pi * model.K_c**4 * model.gpp0)) * math.sqrt(eps)


def prediction_band(model: AmplitudeModel, K: float) -> tuple[float, float]:
    """Amplitude and the half-width of its O(K - K_c) uncertainty band."""
    eps = max(K - model.K_c, 0.0)
    return predicted_rc(model, K), eps


def _tail_statistics(traj_values: np.ndarray) -> tuple[float, float, bool]:
    """Mean, stderr, and a <1% drift flag over the final third of a run."""
    r = np.abs(traj_values)
    tail = r[2 * len(r) // 3 :]
    mean = float(tail.mean())
    half = len(tail) // 2
    drift = abs(float(tail[:half].mean()) - float(tail[half:].mean())) / max(mean, 1e-300)
    stderr = float(tail.std() / math.sqrt(max(len(tail), 1)))
    return mean, stderr, drift < 0.01


def bifurcation_diagram(g: SpectralDensity, K_grid, sim_params: dict | None = None) -> BifurcationCurve:
    """Theory amplitude and simulated tail amplitude over a coupling grid.

    ``sim_params`` keys (all optional): ``backend`` ('galerkin' or
    'finite-n'), ``N``, ``modes``, ``nodes``, ``T``, ``dt_out``, ``eps_h``,
    ``phase_blocks``, ``seed``.  Run length defaults to several relaxation
    times of the amplitude equation at each coupling.
    """
    p = dict(sim_params or {})
    backend = p.get("backend", "galerkin")
    model = amplitude_model(g)
    rows = []
    for K in K_grid:
        r_th = predicted_rc(model, K)
        eps = K - model.K_c
        rate = 2 * abs(eps) / (abs(model.D0) * model.K_c) if eps != 0 else 0.05
        T = p.get("T", min(600.0, max(120.0, 8.0 / max(rate, 1e-6))))
        eps_h = p.get("eps_h", max(0.9 * r_th, 1e-3) if eps > 0 else 1e-3)
        if backend == "galerkin":
            nodes = p.get("nodes", 721)
            # saturated runs need momentum coverage, not long-horizon linear fidelity:
            # the arctangent rule resolves the locking region for heavy tails
            rule = make_quadrature(g, 400) if g.kind == "lorentzian" else uniform_quadrature(g, nodes)
            traj = simulate_galerkin(
                g,
                K,
                J=p.get("modes", 16),
                rule=rule,
                phi_init=(eps_h,),
                T=T,
                dt_out=p.get("dt_out", 0.5),
                closure="geometric" if eps > 0 else "truncate",
            )
        elif backend == "finite-n":
            ens = make_ensemble(
                g,
                p.get("N", 10_000),
                K,
                seed=p.get("seed"),
                eps_h=eps_h,
                phase_blocks=p.get("phase_blocks", 8),
            )
            traj = simulate_finite_N(ens, T, dt_out=p.get("dt_out", 0.5))
        else:
            raise ValueError("backend must be 'galerkin' or 'finite-n'")
        r_sim, stderr, converged = _tail_statistics(traj.values)
        rows.append((float(K), r_th, r_sim, stderr, converged))
    return BifurcationCurve(rows=tuple(rows))
