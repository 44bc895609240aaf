#!/usr/bin/env python3
"""Tour of the dense-operator toolbox: spectral width, moments, inequalities.

The spectral width ||A|| = max eig - min eig controls everything downstream:
the variance of any measurement of A is at most ||A||^2/4, covariances obey
the Cauchy-Schwarz bound, and a sum of identical one-body terms over N sites
has width N ||h|| (which is where Heisenberg scaling comes from).
"""

import numpy as np

from nhsense.operators import (
    SIGMA_X, SIGMA_Y, SIGMA_Z, covariance, expm_hermitian, seminorm, tensor, variance,
)
from nhsense.verification import make_rng, random_hermitian, random_state, random_unitary

rng = make_rng(7)

print("== spectral widths")
print(f"  ||sigma_x||      = {seminorm(SIGMA_X):.1f}")
print(f"  ||1 - sigma_z||  = {seminorm(np.eye(2) - SIGMA_Z):.1f}   (the EP-sensor drive operator)")
print(f"  ||sigma_x (x) 1 + 1 (x) sigma_x|| = {seminorm(tensor(SIGMA_X, np.eye(2)) + tensor(np.eye(2), SIGMA_X)):.1f}"
      "   (two sites: twice the one-body width)")

print("\n== moments over a pure state")
plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
print(f"  Var[sigma_z] on |+>        = {variance(SIGMA_Z, plus):.3f} (maximal: ||sigma_z||^2/4 = 1)")
print(f"  Cov[sigma_x, sigma_y] |0>  = {covariance(SIGMA_X, SIGMA_Y, np.array([1, 0], dtype=complex)):.3f}")

print("\n== inequality spot checks on 2000 random instances")
worst_var, worst_cov, worst_tri, worst_uni = 0.0, 0.0, 0.0, 0.0
for _ in range(2000):
    dim = int(rng.integers(2, 7))
    a, b = random_hermitian(rng, dim), random_hermitian(rng, dim)
    psi = random_state(rng, dim)
    u = random_unitary(rng, dim)
    worst_var = max(worst_var, variance(a, psi) - seminorm(a) ** 2 / 4)
    worst_cov = max(worst_cov, abs(covariance(a, b, psi))
                    - np.sqrt(variance(a, psi) * variance(b, psi)))
    worst_tri = max(worst_tri, seminorm(a + b) - seminorm(a) - seminorm(b))
    worst_uni = max(worst_uni, abs(seminorm(u.conj().T @ a @ u) - seminorm(a)))
print(f"  Var <= ||A||^2/4      worst excess: {worst_var:+.2e}")
print(f"  |Cov| <= sqrt(VarVar) worst excess: {worst_cov:+.2e}")
print(f"  triangle inequality   worst excess: {worst_tri:+.2e}")
print(f"  unitary invariance    worst drift:  {worst_uni:+.2e}")

print("\n== matrix exponential")
u = expm_hermitian(SIGMA_Z, np.pi)
print(f"  exp(-i sigma_z pi) = -1:  max deviation {np.abs(u + np.eye(2)).max():.2e}")
