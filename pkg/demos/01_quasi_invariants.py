#!/usr/bin/env python3
# Quasi-invariant polynomials of a few line arrangements.

# %%
from qinv.arrangement import delta_poly, is_baker_akhiezer, preset
from qinv.kernel import parse_poly
from qinv.quasiinv import conductor_check, graded_basis_A, is_quasi_invariant_der

# %% the coordinate cross with multiplicity one
arr = preset("lambda2")
A = graded_basis_A(arr, 6)
print("arrangement:", arr)
print("Hilbert:", A.hilbert_table())
for p in A.piece(4):
    print("  ", p.to_str())

# %% membership tests agree with the basis
for text in ("z1^2", "z1*z2", "z1^3*z2^3 + z1"):
    f = parse_poly(text)
    print(f"{text:>16}: quasi-invariant {is_quasi_invariant_der(f, arr)}, in span {A.contains(f)}")

# %% delta^2 generates an ideal contained in A
rep = conductor_check(arr, 6)
print("delta =", delta_poly(arr).to_str(), "conductor inclusion:", rep["inclusion"])

# %% which presets admit a Baker-Akhiezer function
for name in ("lambda1", "lambda2", "lambda4"):
    for m in (1, 2):
        print(name, m, is_baker_akhiezer(preset(name, m)))
print(preset("lambda4", [1, 1, 0, 0]), is_baker_akhiezer(preset("lambda4", [1, 1, 0, 0])))
