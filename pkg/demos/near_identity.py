"""
Gauss-Jordan near the identity
==============================

Inside a small ball around I every pivot is a unit, and the elimination
runs with no case analysis.  The word length is at most 6 n^2.
"""
from symplectic_factor import (
    ComplexApprox, NeighborhoodSpec, factor_count_bound, factor_near_identity,
    multiply_word, random_word, relative_frobenius,
)

C = ComplexApprox()
n = 3
M = multiply_word(random_word(n, 10, C, seed=1, radius=0.01), n, C)
print("distance from I:", M.distance_from_identity())

word, trace = factor_near_identity(M, NeighborhoodSpec(0.5), return_trace=True)
print("factors:", len(word), "of at most", factor_count_bound(n))
print("row operations:", len(trace.steps))
print("residual:", relative_frobenius(multiply_word(word, n, C), M))

# the first few factors
for f in list(word)[:5]:
    print(f.kind, f.i, f.j, f.a)
