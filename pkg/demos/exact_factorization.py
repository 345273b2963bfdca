"""
Exact factorization over Z/12
=============================

Z/12 has zero divisors, so pivots are often not units.  A stable-rank-one
witness fixes each pivot before elimination.
"""
from symplectic_factor import (
    IntegersMod, Rationals, expand_K, factor_stable_rank_one, multiply_word, random_word,
)

Z12 = IntegersMod(12)

# a random product of 30 generators in Sp_6(Z/12)
M = multiply_word(random_word(3, 30, Z12, seed=7, kinds=("E", "F", "K")), 3, Z12)
print("A block:\n", M.A)
print("a_11 =", M.A[0, 0], "unit:", Z12.is_unit(M.A[0, 0]))

word, trace = factor_stable_rank_one(M, return_trace=True)
print("elementary factors:", len(word))
print("pivots used (column, pivot, inverse):", trace.pivot_log)

# multiplying the word back gives M exactly
print("exact:", multiply_word(word, 3, Z12).equals(M))

# the diagonal K as four elementary factors, over Q
for f in expand_K(1, 1, 3, Rationals()):
    print(f.kind, f.i, f.j, f.a)
