"""Spectral analysis and bifurcation prediction for the mean-field Kuramoto model.

The package computes, for a user-supplied natural-frequency density:

* the resolvent integral, its Plemelj boundary values, and its continuation
  across the imaginary axis (:mod:`~kuramoto_spectral.resolvent`);
* eigenvalues and resonance poles of the linearized dynamics
  (:mod:`~kuramoto_spectral.spectrum`);
* critical couplings and instability windows
  (:mod:`~kuramoto_spectral.transition`);
* the linearized order parameter as a residue expansion, with a direct
  integration oracle (:mod:`~kuramoto_spectral.lindyn`);
* nonlinear finite-N and mode-hierarchy simulations
  (:mod:`~kuramoto_spectral.simulate`);
* the center-manifold amplitude equation and bifurcation curves
  (:mod:`~kuramoto_spectral.bifurcation`).

Every prediction is validated against independent brute-force oracles in the
test suite; ``python -m kuramoto_spectral verify`` runs the built-in check
suite from the command line.
"""

__version__ = "0.1.0"

from .density import (
    QuadratureRule,
    SpectralDensity,
    bimodal_linear_density,
    builtin_density,
    gaussian,
    gaussian_mixture,
    is_unimodal,
    lorentzian,
    make_quadrature,
    multiband_density,
    piecewise_constant,
    piecewise_linear,
    sampling_rule,
    two_step_density,
    uniform_quadrature,
)
from .resolvent import (
    ResolventValue,
    boundary_value,
    characteristic_G,
    characteristic_G_derivative,
    closed_form_D,
    continued_resolvent_F,
    hilbert_transform,
    hilbert_transform_quadrature,
    resolvent_D,
)
from .spectrum import (
    RootPath,
    SearchWindow,
    SimplicityReport,
    SpectralRoot,
    check_simplicity,
    continue_root_in_K,
    count_zeros,
    find_roots,
    residue_coefficient,
)
from .transition import TransitionReport, critical_ordinates, instability_windows, transition_point
from .lindyn import (
    EtaTrajectory,
    InitialFunction,
    constant_one,
    direct_integration,
    exp_profile,
    pairing_Q,
    predict_eta,
    rational_profile,
)
from .simulate import (
    OscillatorEnsemble,
    cosine_phase_quantiles,
    make_ensemble,
    order_parameter,
    simulate_finite_N,
    simulate_galerkin,
)
from .bifurcation import (
    AmplitudeModel,
    BifurcationCurve,
    amplitude_model,
    amplitude_rhs,
    bifurcation_diagram,
    predicted_rc,
    prediction_band,
)
