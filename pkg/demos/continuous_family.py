"""
A continuous family with one factor pattern
===========================================

x -> diag(e^{2 pi i x}, e^{-2 pi i x}) on a grid of 129 points, with the
homotopy that scales the phase by t.  The whole family is one matrix over
sampled functions, so every grid point gets the same (kind, i, j) sequence.
"""
import numpy as np

from symplectic_factor import NeighborhoodSpec, SampledFamily, factor_continuous_family, relative_frobenius


def H(t, x):
    z = np.exp(2j * np.pi * t * x)
    out = np.zeros((2, 2, len(x)), dtype=complex)
    out[0, 0], out[1, 1] = z, 1 / z
    return out


fam = SampledFamily.from_callable(H, n=1, t_samples=129, grid_size=129)
result = factor_continuous_family(fam, NeighborhoodSpec(0.1))

print("pieces of the homotopy:", result.split_count)
print("factors per point:", len(result.schema))
print("worst residual:", max(relative_frobenius(result.reconstruct_at(k), fam.at(k)) for k in range(129)))
print("continuity:", result.continuity)

# the factor whose parameter moves most with x, sampled at x = 0, 1/2, 1
params = result.parameters()
col = int(np.argmax(np.ptp(np.abs(params), axis=0)))
print(result.schema[col], params[[0, 64, 128], col])
