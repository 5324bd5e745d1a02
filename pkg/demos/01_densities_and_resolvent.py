"""Densities, quadrature, and the continued resolvent.

Walks through the built-in frequency densities, shows how quadrature rules
absorb the density into their weights, and traces the resolvent integral
across the imaginary axis where it picks up the continuation jump.
"""
import numpy as np

from kuramoto_spectral import (
    boundary_value,
    closed_form_D,
    continued_resolvent_F,
    gaussian,
    hilbert_transform,
    lorentzian,
    make_quadrature,
    two_step_density,
)

g = gaussian()
lor = lorentzian()
steps = two_step_density()

print("== densities ==")
for d in (g, lor, steps):
    print(f"{d.label:22s} g(0) = {d(0.0):.6f}  even = {d.is_even}  analyticity = {d.analyticity}")

print("\n== quadrature absorbs the density ==")
rule = make_quadrature(g, 64)
print("int 1 g dw      =", rule.integrate(np.ones_like(rule.nodes)))
print("int w^2 g dw    =", rule.integrate(rule.nodes**2), " (unit variance)")

print("\n== resolvent across the axis ==")
# On the right half plane F = D; crossing to the left adds 2 pi g(-i lam).
for lam in (1.0, 0.05 + 0.3j, -0.05 + 0.3j, -1.0):
    v = continued_resolvent_F(g, lam)
    print(f"F({lam!s:12s}) = {v.value:.6f}   sheet = {v.sheet}")

print("\nfirst-sheet D is discontinuous across the axis; F is not:")
y = 0.3
left = closed_form_D(g, -1e-6 + 1j * y)
right = closed_form_D(g, +1e-6 + 1j * y)
print(f"D(+0 + {y}i) - D(-0 + {y}i) = {right - left:.6f}")
print(f"2 pi g({y})                 = {2*np.pi*g(y):.6f}   (the Plemelj jump)")

print("\n== boundary values and the Hilbert transform ==")
print("boundary D at y=0 (gaussian):", boundary_value(g, 0.0), "= pi g(0) since V(0) = 0")
print("V(1.0) for the two-step density:", hilbert_transform(steps, 1.0))
print("the Lorentzian continuation is a rational function: F(-0.5) =",
      continued_resolvent_F(lor, -0.5).value, "= 1/(lam + 1)")
