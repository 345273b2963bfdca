"""Symplectic matrices, elementary generators and words of generators.

Block convention: a ``2n x 2n`` matrix is ``[[A, B], [C, D]]`` and it is
symplectic when

    A^T C = C^T A,    B^T D = D^T B,    A^T D - C^T B = I.

Generators (indices are 1-based on the public surface):

* ``E(i, j, a)`` -- upper elementary, ``B`` has ``a`` at ``(i, j)`` and
  ``(j, i)``; a single ``a`` on the diagonal when ``i == j``.
* ``F(i, j, a)`` -- same with the roles of ``B`` and ``C`` swapped.
* ``UpperB(B)`` / ``LowerC(C)`` -- general elementary blocks, ``B``/``C``
  symmetric.
* ``K(i, j, a)`` -- auxiliary, ``A = I + a e_ij`` (``A = diag`` with ``a`` at
  ``(i, i)`` when ``i == j``), ``D = A^{-T}``; not elementary but a product of
  four or five ``E``/``F`` factors, see :func:`expand_K`.

A word ``[f_0, ..., f_k]`` denotes the product ``f_0 f_1 ... f_k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, NonUnitParameter
from .rings import Ring

KINDS = ("E", "F", "K", "UpperB", "LowerC")


class SymplecticMatrix:
    """A ``2n x 2n`` matrix over a ring context, stored densely.

    Construction does not enforce the symplectic conditions; use
    :func:`check_symplectic`.  The data array is read-only.
    """

    __slots__ = ("ctx", "data")

    def __init__(self, ctx: Ring, data: np.ndarray):
        data = np.array(data, copy=True)
        if data.ndim < 2 or data.shape[0] != data.shape[1]:
            raise DimensionMismatch(f"matrix must be square, got shape {data.shape[:2]}")
        if data.shape[0] % 2:
            raise DimensionMismatch(f"matrix dimension {data.shape[0]} is odd")
        data.flags.writeable = False
        self.ctx = ctx
        self.data = data

    @classmethod
    def identity(cls, n: int, ctx: Ring) -> "SymplecticMatrix":
        return cls(ctx, ctx.eye(2 * n))

    @classmethod
    def from_blocks(cls, ctx: Ring, A, B, C, D) -> "SymplecticMatrix":
        blocks = [ctx.asarray(X) if not isinstance(X, np.ndarray) else X for X in (A, B, C, D)]
        top = np.concatenate(blocks[:2], axis=1)
        bottom = np.concatenate(blocks[2:], axis=1)
        return cls(ctx, np.concatenate([top, bottom], axis=0))

    @classmethod
    def from_rows(cls, ctx: Ring, rows) -> "SymplecticMatrix":
        return cls(ctx, ctx.asarray(rows))

    @property
    def n(self) -> int:
        return self.data.shape[0] // 2

    @property
    def A(self):
        return self.data[: self.n, : self.n]

    @property
    def B(self):
        return self.data[: self.n, self.n :]

    @property
    def C(self):
        return self.data[self.n :, : self.n]

    @property
    def D(self):
        return self.data[self.n :, self.n :]

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        return SymplecticMatrix(self.ctx, self.ctx.matmul(self.data, other.data))

    def inverse(self) -> "SymplecticMatrix":
        """Exact inverse ``[[D^T, -B^T], [-C^T, A^T]]`` (valid for symplectic input)."""
        ctx = self.ctx
        T = lambda X: np.swapaxes(X, 0, 1)  # noqa: E731
        return SymplecticMatrix.from_blocks(ctx, T(self.D), ctx.neg(T(self.B)), ctx.neg(T(self.C)), T(self.A))

    def equals(self, other: "SymplecticMatrix") -> bool:
        return self.ctx.equal(self.data, other.data)

    def deviation(self, other: "SymplecticMatrix") -> float:
        return self.ctx.deviation(self.data, other.data)

    def distance_from_identity(self) -> float:
        return self.ctx.deviation(self.data, self.ctx.eye(2 * self.n))

    def __repr__(self):
        return f"SymplecticMatrix(n={self.n}, ctx={self.ctx!r})"


@dataclass(frozen=True, eq=False)
class ElementaryFactor:
    kind: str
    i: int = 0
    j: int = 0
    a: object = None
    block: np.ndarray | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown factor kind {self.kind!r}")
        if self.kind in ("UpperB", "LowerC"):
            if self.block is None:
                raise ValueError(f"{self.kind} needs a block")
            if not np.array_equal(self.block, np.swapaxes(self.block, 0, 1)):
                raise ValueError(f"{self.kind} block must be symmetric")
        elif self.i < 1 or self.j < 1:
            raise ValueError("factor indices are 1-based")

    @property
    def is_elementary(self) -> bool:
        return self.kind != "K"

    @property
    def skeleton(self) -> tuple:
        """The parameter-free part ``(kind, i, j)`` of the factor."""
        return (self.kind, self.i, self.j)

    def __repr__(self):
        if self.kind in ("UpperB", "LowerC"):
            return f"{self.kind}({self.block.tolist()!r})"
        return f"{self.kind}({self.i},{self.j},{self.a!r})"


def E(i: int, j: int, a) -> ElementaryFactor:
    return ElementaryFactor("E", i, j, a)


def F(i: int, j: int, a) -> ElementaryFactor:
    return ElementaryFactor("F", i, j, a)


def K(i: int, j: int, a) -> ElementaryFactor:
    return ElementaryFactor("K", i, j, a)


def UpperB(B) -> ElementaryFactor:
    return ElementaryFactor("UpperB", block=np.asarray(B))


def LowerC(C) -> ElementaryFactor:
    return ElementaryFactor("LowerC", block=np.asarray(C))


@dataclass(frozen=True)
class FactorWord:
    """Ordered product ``factors[0] @ factors[1] @ ... @ factors[-1]``."""

    factors: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))

    @property
    def elementary_only(self) -> bool:
        return all(f.is_elementary for f in self.factors)

    @property
    def schema(self) -> list[tuple]:
        return [f.skeleton for f in self.factors]

    def __len__(self):
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __getitem__(self, k):
        return self.factors[k]

    def __add__(self, other: "FactorWord") -> "FactorWord":
        return FactorWord(self.factors + tuple(other.factors))


# ---------------------------------------------------------------------------
# Checks


@dataclass
class SymplecticReport:
    ok: bool
    residuals: dict

    def __bool__(self):
        return self.ok


def _t(X):
    return np.swapaxes(X, 0, 1)


def check_symplectic(M, ctx: Ring | None = None, tol: float | None = None) -> SymplecticReport:
    """Evaluate the three block identities.

    Residuals are max entrywise deviations.  Exact rings require exact
    equality; approximate rings accept residuals up to ``tol`` (default:
    ``1e3 * ctx.tolerance``).
    """
    if isinstance(M, SymplecticMatrix):
        ctx, data = M.ctx, M.data
    else:
        data = np.asarray(M)
    if data.ndim < 2 or data.shape[0] != data.shape[1] or data.shape[0] % 2:
        raise DimensionMismatch(f"expected square even-dimensional matrix, got {data.shape[:2]}")
    n = data.shape[0] // 2
    A, B, C, D = data[:n, :n], data[:n, n:], data[n:, :n], data[n:, n:]
    mm = ctx.matmul
    residuals = {
        "AtC-CtA": ctx.deviation(mm(_t(A), C), mm(_t(C), A)),
        "BtD-DtB": ctx.deviation(mm(_t(B), D), mm(_t(D), B)),
        "AtD-CtB-I": ctx.deviation(ctx.sub(mm(_t(A), D), mm(_t(C), B)), ctx.eye(n)),
    }
    if ctx.exact:
        ok = all(r == 0 for r in residuals.values())
    else:
        limit = 1e3 * ctx.tolerance if tol is None else tol
        ok = all(r <= limit for r in residuals.values())
    return SymplecticReport(ok, residuals)


def relative_frobenius(X: SymplecticMatrix, Y: SymplecticMatrix) -> float:
    """``||X - Y||_F / max(||Y||_F, 1)`` with function-ring entries taken in sup norm."""
    ctx = X.ctx
    diff = ctx.magnitude(ctx.sub(X.data, Y.data))
    ref = ctx.magnitude(Y.data)
    return float(np.linalg.norm(diff) / max(np.linalg.norm(ref), 1.0))


# ---------------------------------------------------------------------------
# Factor realization and row operations


def _check_indices(f: ElementaryFactor, n: int):
    if f.kind in ("UpperB", "LowerC"):
        if f.block.shape[:2] != (n, n):
            raise DimensionMismatch(f"block shape {f.block.shape[:2]} does not match n={n}")
    elif not (1 <= f.i <= n and 1 <= f.j <= n):
        raise DimensionMismatch(f"indices ({f.i},{f.j}) out of range for n={n}")


def factor_to_matrix(f: ElementaryFactor, n: int, ctx: Ring) -> SymplecticMatrix:
    """Dense ``2n x 2n`` realization of a single factor."""
    _check_indices(f, n)
    M = ctx.eye(2 * n)
    if f.kind in ("UpperB", "LowerC"):
        block = ctx.asarray(f.block) if f.block.dtype != M.dtype else f.block
        if f.kind == "UpperB":
            M[:n, n:] = block
        else:
            M[n:, :n] = block
        return SymplecticMatrix(ctx, M)
    i, j = f.i - 1, f.j - 1
    a = ctx.coerce(f.a)
    if f.kind == "E":
        M[i, n + j] = a
        M[j, n + i] = a
    elif f.kind == "F":
        M[n + i, j] = a
        M[n + j, i] = a
    elif i == j:
        inv = ctx.inverse(a)
        if inv is None:
            raise NonUnitParameter(f"K({f.i},{f.i},a) needs a unit, got {a!r}")
        M[i, i] = a
        M[n + i, n + i] = inv
    else:
        M[i, j] = a
        M[n + j, n + i] = ctx.neg(a)
    return SymplecticMatrix(ctx, M)


def apply_inplace(ctx: Ring, X: np.ndarray, f: ElementaryFactor, n: int) -> None:
    """Overwrite ``X`` with ``f @ X`` using row operations only."""
    if f.kind in ("UpperB", "LowerC"):
        block = ctx.asarray(f.block) if f.block.dtype != X.dtype else f.block
        if f.kind == "UpperB":
            X[:n] = ctx.add(X[:n], ctx.matmul(block, X[n:]))
        else:
            X[n:] = ctx.add(X[n:], ctx.matmul(block, X[:n]))
        return
    i, j = f.i - 1, f.j - 1
    a = ctx.coerce(f.a)
    if f.kind == "E":
        # row_i += a row_{n+j}; row_j += a row_{n+i}
        if i == j:
            X[i] = ctx.add(X[i], ctx.mul(a, X[n + i]))
        else:
            ri, rj = X[n + j].copy(), X[n + i].copy()
            X[i] = ctx.add(X[i], ctx.mul(a, ri))
            X[j] = ctx.add(X[j], ctx.mul(a, rj))
    elif f.kind == "F":
        # row_{n+i} += a row_j; row_{n+j} += a row_i
        if i == j:
            X[n + i] = ctx.add(X[n + i], ctx.mul(a, X[i]))
        else:
            ri, rj = X[j].copy(), X[i].copy()
            X[n + i] = ctx.add(X[n + i], ctx.mul(a, ri))
            X[n + j] = ctx.add(X[n + j], ctx.mul(a, rj))
    elif i == j:
        inv = ctx.inverse(a)
        if inv is None:
            raise NonUnitParameter(f"K({f.i},{f.i},a) needs a unit, got {a!r}")
        X[i] = ctx.mul(a, X[i])
        X[n + i] = ctx.mul(inv, X[n + i])
    else:
        # row_i += a row_j; row_{n+j} -= a row_{n+i}
        X[i] = ctx.add(X[i], ctx.mul(a, X[j]))
        X[n + j] = ctx.sub(X[n + j], ctx.mul(a, X[n + i]))


def apply_factor_left(f: ElementaryFactor, M: SymplecticMatrix) -> SymplecticMatrix:
    """``factor_to_matrix(f) @ M`` computed with O(n) row updates."""
    _check_indices(f, M.n)
    X = np.array(M.data, copy=True)
    apply_inplace(M.ctx, X, f, M.n)
    return SymplecticMatrix(M.ctx, X)


def multiply_word(word: Iterable[ElementaryFactor], n: int, ctx: Ring) -> SymplecticMatrix:
    """Evaluate ``f_0 f_1 ... f_k``; the empty word gives the identity."""
    factors = list(word)
    X = ctx.eye(2 * n)
    for f in reversed(factors):
        _check_indices(f, n)
        apply_inplace(ctx, X, f, n)
    return SymplecticMatrix(ctx, X)


def invert_factor(f: ElementaryFactor, ctx: Ring) -> ElementaryFactor:
    if f.kind == "UpperB":
        return UpperB(ctx.neg(f.block))
    if f.kind == "LowerC":
        return LowerC(ctx.neg(f.block))
    if f.kind == "K" and f.i == f.j:
        inv = ctx.inverse(ctx.coerce(f.a))
        if inv is None:
            raise NonUnitParameter(f"K({f.i},{f.i},a) needs a unit, got {f.a!r}")
        return K(f.i, f.i, inv)
    return ElementaryFactor(f.kind, f.i, f.j, ctx.neg(ctx.coerce(f.a)))


def invert_word(word: Iterable[ElementaryFactor], ctx: Ring) -> FactorWord:
    """Reverse the word and invert each factor."""
    return FactorWord(invert_factor(f, ctx) for f in reversed(list(word)))


def expand_K(i: int, j: int, a, ctx: Ring) -> FactorWord:
    """Rewrite ``K(i, j, a)`` as a word in ``E``/``F``.

    ``K_ii(a) = E_ii(a-1) F_ii(1) E_ii(a^-1 - 1) F_ii(-a)`` and, for ``i != j``,
    ``K_ij(a) = F_jj(-a) E_ij(1) F_jj(a) E_ii(a) E_ij(-1)``.
    """
    a = ctx.coerce(a)
    one = ctx.one()
    if i == j:
        inv = ctx.inverse(a)
        if inv is None:
            raise NonUnitParameter(f"K({i},{i},a) needs a unit, got {a!r}")
        return FactorWord([
            E(i, i, ctx.sub(a, one)),
            F(i, i, one),
            E(i, i, ctx.sub(inv, one)),
            F(i, i, ctx.neg(a)),
        ])
    return FactorWord([
        F(j, j, ctx.neg(a)),
        E(i, j, one),
        F(j, j, a),
        E(i, i, a),
        E(i, j, ctx.neg(one)),
    ])


def expand_word(word: Iterable[ElementaryFactor], ctx: Ring) -> FactorWord:
    """Replace every ``K`` factor by its ``E``/``F`` expansion."""
    out: list[ElementaryFactor] = []
    for f in word:
        if f.kind == "K":
            out.extend(expand_K(f.i, f.j, f.a, ctx))
        else:
            out.append(f)
    return FactorWord(out)


def scale_word(word: Iterable[ElementaryFactor], t, ctx: Ring) -> FactorWord:
    """Multiply every parameter of an elementary word by ``t``.

    For ``t`` in [0, 1] this is a path from the identity to the word's product.
    """
    out = []
    for f in word:
        if f.kind == "K":
            raise NonUnitParameter("scale_word needs an elementary word; expand K first")
        if f.kind in ("UpperB", "LowerC"):
            out.append(ElementaryFactor(f.kind, block=ctx.mul(ctx.coerce(t), f.block)))
        else:
            out.append(ElementaryFactor(f.kind, f.i, f.j, ctx.mul(ctx.coerce(t), ctx.coerce(f.a))))
    return FactorWord(out)


def random_word(
    n: int,
    length: int,
    ctx: Ring,
    seed=None,
    radius: float = 1.0,
    kinds: Sequence[str] = ("E", "F"),
) -> FactorWord:
    """Seeded random word; indices drawn with ``i <= j``.

    ``K(i, i, .)`` parameters are resampled until they are units.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(length):
        kind = kinds[int(rng.integers(len(kinds)))]
        i, j = sorted(int(v) for v in rng.integers(1, n + 1, size=2))
        if kind == "K":
            if rng.random() < 0.5:
                j = i
            a = ctx.random_element(rng, radius)
            while i == j and ctx.inverse(a) is None:
                a = ctx.random_element(rng, radius)
        else:
            a = ctx.random_element(rng, radius)
        out.append(ElementaryFactor(kind, i, j, a))
    return FactorWord(out)
