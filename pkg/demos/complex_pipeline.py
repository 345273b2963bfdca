"""
Complex matrices two ways
=========================

Route one: symplectic Gram-Schmidt to a unitary U, a log-path from I to U,
then near-identity pieces of that path.  Route two: pivot repair with a
witness, as over any ring of stable rank one.  Both must give back M.
"""
import numpy as np

from symplectic_factor import (
    ComplexApprox, NeighborhoodSpec, SymplecticMatrix, factor_constant_complex, factor_stable_rank_one,
    multiply_word, random_word, reduce_to_compact, relative_frobenius, unitarity_defect,
)

C = ComplexApprox()
M = multiply_word(random_word(2, 12, C, seed=3, kinds=("E", "F", "K")), 2, C)

red = reduce_to_compact(M)
print("Gram-Schmidt factors:", len(red.word), "unitarity defect:", unitarity_defect(red.U))

homotopy = factor_constant_complex(M, NeighborhoodSpec(0.1))
algebraic = factor_stable_rank_one(M)
print("homotopy route:", len(homotopy), "factors, residual", relative_frobenius(multiply_word(homotopy, 2, C), M))
print("algebraic route:", len(algebraic), "factors, residual", relative_frobenius(multiply_word(algebraic, 2, C), M))

# -I sits on the branch cut of the log; a small random factor moves it off
minus_I = C.asarray(-np.eye(4))
word = factor_constant_complex(SymplecticMatrix(C, minus_I))
print("-I:", len(word), "factors")
