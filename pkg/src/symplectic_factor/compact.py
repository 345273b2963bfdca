"""Symplectic Gram-Schmidt: push a complex symplectic matrix into Sp(n).

Write the rows of ``M`` as ``v_1..v_n`` (top half) and ``w_1..w_n`` (bottom
half).  Left multiplication by ``K`` and ``F`` factors acts on these rows, so
a Gram-Schmidt pass can be run with symplectic row operations only:

1. ``K(i, j, -<v_i, v_j> / |v_j|^2)`` for ``j < i`` orthogonalizes the ``v``'s,
2. ``K(i, i, 1 / |v_i|)`` normalizes them,
3. ``F(i, j, -<w_i, v_j>)`` for ``j >= i`` makes ``w_i`` orthogonal to
   ``v_i, ..., v_n``.

The result ``U`` is unitary as well as symplectic: ``U U*`` is symplectic,
Hermitian, has ``A = I`` and a ``C`` block vanishing on and above the
diagonal, and symmetry of ``C`` forces ``C = 0``, hence ``B = 0`` and ``D = I``.

Works pointwise over :class:`~symplectic_factor.rings.SampledFunctions` too.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import F, FactorWord, K, SymplecticMatrix, apply_inplace, expand_word
from .errors import CapabilityMissing, DegenerateRow, DimensionMismatch
from .rings import ComplexApprox, SampledFunctions


def inner_product(u, v):
    """Hermitian product ``sum_k u_k conj(v_k)``, conjugate-linear in ``v``.

    Rows of a sampled-function matrix carry a trailing grid axis; the sum runs
    over the first axis only, so the result is a function on the grid.
    """
    u, v = np.asarray(u), np.asarray(v)
    if u.shape != v.shape:
        raise DimensionMismatch(f"cannot pair vectors of shapes {u.shape} and {v.shape}")
    return np.sum(u * np.conj(v), axis=0)


@dataclass
class CompactReduction:
    word: FactorWord
    elementary_word: FactorWord
    U: SymplecticMatrix
    L_bound: int
    phases: dict | None = None


def compact_word_bound(n: int) -> int:
    """Maximum number of ``K``/``F`` factors emitted before expansion."""
    return n * (n - 1) // 2 + n + n * (n + 1) // 2


def reduce_to_compact(M: SymplecticMatrix, *, prune: bool = True, return_phases: bool = False) -> CompactReduction:
    """Left-multiply ``M`` by ``K``/``F`` factors until it is unitary.

    ``multiply_word(result.word) @ M == result.U``.  Raises
    :class:`DegenerateRow` when a top row collapses numerically.
    """
    ctx = M.ctx
    if not isinstance(ctx, (ComplexApprox, SampledFunctions)):
        raise CapabilityMissing(f"Gram-Schmidt needs complex entries, got {ctx}")
    n = M.n
    X = np.array(M.data, copy=True)
    fro = np.sqrt(np.sum(np.abs(X) ** 2, axis=(0, 1)))
    floor = 1e-12 * np.max(fro)
    applied = []
    phases = {} if return_phases else None

    def step(f):
        if prune:
            if f.kind == "K" and f.i == f.j:
                if ctx.is_one(f.a):
                    return
            elif ctx.is_zero(f.a):
                return
        apply_inplace(ctx, X, f, n)
        applied.append(f)

    def row_norm(i):
        r = np.sqrt(np.real(inner_product(X[i], X[i])))
        if np.min(r) <= floor:
            raise DegenerateRow(f"row v_{i + 1} has norm {np.min(r):.3g} (floor {floor:.3g})")
        return r

    for j in range(n):
        nj2 = row_norm(j) ** 2
        for i in range(j + 1, n):
            step(K(i + 1, j + 1, ctx.coerce(-inner_product(X[i], X[j]) / nj2)))
    if phases is not None:
        phases["orthogonal"] = SymplecticMatrix(ctx, X)

    for i in range(n):
        step(K(i + 1, i + 1, ctx.coerce(1 / row_norm(i))))
    if phases is not None:
        phases["orthonormal"] = SymplecticMatrix(ctx, X)

    for i in range(n):
        for j in range(i, n):
            step(F(i + 1, j + 1, ctx.coerce(-inner_product(X[n + i], X[j]))))
    if phases is not None:
        phases["compact"] = SymplecticMatrix(ctx, X)

    word = FactorWord(reversed(applied))
    return CompactReduction(
        word=word,
        elementary_word=expand_word(word, ctx),
        U=SymplecticMatrix(ctx, X),
        L_bound=compact_word_bound(n),
        phases=phases,
    )


def unitarity_defect(U: SymplecticMatrix) -> float:
    """``||U U* - I||_F`` (sup over the grid for sampled functions)."""
    X = U.data
    if X.ndim == 2:
        return float(np.linalg.norm(X @ X.conj().T - np.eye(X.shape[0])))
    G = np.einsum("ikg,jkg->ijg", X, X.conj())
    G -= np.eye(X.shape[0])[:, :, None]
    return float(np.max(np.sqrt(np.sum(np.abs(G) ** 2, axis=(0, 1)))))
