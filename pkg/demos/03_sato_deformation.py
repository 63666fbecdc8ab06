#!/usr/bin/env python3
# Sato operators, the Calogero-Moser Hamiltonian, and a one-parameter deformation.

# %%
from fractions import Fraction

from qinv import satoengine as se
from qinv.arrangement import omega, preset
from qinv.bakhiezer import berest_psi, cm_hamiltonian, spectral_basis_all, spectral_space

arr = preset("lambda2")
xi = (1, 1)

# %% two Sato operators of the same W differ by a unit
W = spectral_space(arr, xi, 9)
S = se.sato_operator(W, 7)
T = se.sato_from_basis(spectral_basis_all(berest_psi(arr, xi), 7), 2, 7)
U = se.sato_unit_between(S, T)
print("S_(0,0) =", S.slice((0, 0)).to_str(se.D_NAMES))
print("U * T = S through degree 5:", se.multiply(U, T).agrees(S, 5))

# %% conjugating omega recovers the Hamiltonian
H = se.conjugate(T, omega())
print("L(omega) = CM operator:", H.agrees(se.from_diffop(cm_hamiltonian(arr, xi), H.D)))

# %% the deformed pair
for beta in (Fraction(0), Fraction(1, 3), Fraction(2)):
    rep = se.deformed_example(beta)
    print(f"beta={beta}: ok {rep['ok']}, symbol {rep['symbol00'].to_str(se.D_NAMES)}")
    print("   derived w:", rep["derived_w"].to_str())
