#!/usr/bin/env python3
# The Baker-Akhiezer function at a shifted point and its spectral module.

# %%
from fractions import Fraction

from qinv.arrangement import omega, preset
from qinv.bakhiezer import berest_psi, cm_hamiltonian, eigen_check, spectral_basis, spectral_space
from qinv.cmpic import graded_basis_P
from qinv.kernel import Poly

arr = preset("lambda2")
xi = (Fraction(1), Fraction(1))

# %% Psi = Theta(x, z) exp(x.z)
psi = berest_psi(arr, xi)
print("Psi =", psi)
H = cm_hamiltonian(arr, xi)
print("H =", H)
print("H Psi = omega Psi:", eigen_check(H, psi, omega()))

# %% derivatives at the origin span the spectral module W
for p in ((0, 0), (1, 0), (0, 1)):
    print(f"w_{p} =", spectral_basis(psi, *p).to_str())
W = spectral_space(arr, xi, 8)
print("Hilbert of W:", W.hilbert_table())

# %% W agrees with the projective module P(-xi.z)
u = Poly({(1, 0): -xi[0], (0, 1): -xi[1]})
print("W = P(-u):", W.same_as(graded_basis_P(u, arr, 8)))
