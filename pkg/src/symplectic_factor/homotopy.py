"""Factorization along null-homotopies.

A sampled path ``t -> M_t`` from ``I`` to ``M`` is cut into quotients
``M_{t_k} M_{t_{k-1}}^{-1}`` that all lie in the near-identity neighbourhood;
their product telescopes to ``M`` and each one is factored by
:func:`~symplectic_factor.elimination.factor_near_identity`.

For a single complex matrix the path is built here: Gram-Schmidt moves ``M``
into the compact group, where the principal logarithm gives a path to ``I``.
For a family ``x -> M(x)`` on a grid the caller supplies the homotopy; the
family is carried as one matrix over
:class:`~symplectic_factor.rings.SampledFunctions`, so every step, including
the choice of split points, is uniform in ``x``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .compact import reduce_to_compact
from .core import (
    ElementaryFactor,
    FactorWord,
    SymplecticMatrix,
    check_symplectic,
    invert_word,
    multiply_word,
    scale_word,
)
from .elimination import NeighborhoodSpec, factor_near_identity
from .errors import CapabilityMissing, LogBranchFailure, SplitFailure
from .rings import ComplexApprox, Ring, SampledFunctions

LOG_BRANCH_GAP = 1e-6
LIE_ALGEBRA_TOL = 1e-8
MAX_BRANCH_RETRIES = 8


@dataclass
class SampledPath:
    """Samples ``(t_k, M_k)`` of a path with ``t_0 = 0``, ``M_0 = I``, ``t_last = 1``."""

    t: np.ndarray
    matrices: list

    def __post_init__(self):
        self.t = np.asarray(self.t, dtype=float)
        if len(self.t) != len(self.matrices) or len(self.t) < 2:
            raise ValueError("a path needs at least two samples and one matrix per sample")
        if self.t[0] != 0.0 or self.t[-1] != 1.0:
            raise ValueError("path must start at t=0 and end at t=1")
        if np.any(np.diff(self.t) <= 0):
            raise ValueError("t grid must be strictly increasing")

    @property
    def ctx(self) -> Ring:
        return self.matrices[0].ctx

    @property
    def n(self) -> int:
        return self.matrices[0].n

    @property
    def endpoint(self) -> SymplecticMatrix:
        return self.matrices[-1]

    def validate(self, tol: float | None = None) -> None:
        start = self.matrices[0].distance_from_identity()
        limit = 0.0 if self.ctx.exact else (tol if tol is not None else 1e-9)
        if start > limit:
            raise ValueError(f"path does not start at the identity (distance {start:g})")
        for tk, Mk in zip(self.t, self.matrices):
            if not check_symplectic(Mk, tol=tol):
                raise ValueError(f"sample at t={tk} is not symplectic")

    @classmethod
    def from_function(cls, fn, samples: int) -> "SampledPath":
        ts = np.linspace(0.0, 1.0, samples)
        return cls(ts, [fn(float(t)) for t in ts])


@dataclass
class SampledFamily:
    """A homotopy ``H(t, x)`` of maps ``[0, 1] -> Sp_2n(C)`` with ``H(0, .) = I``.

    Stored as a path over ``SampledFunctions`` on the ``x`` grid.
    """

    path: SampledPath

    @property
    def ctx(self) -> SampledFunctions:
        return self.path.ctx

    @property
    def x(self) -> np.ndarray:
        return self.ctx.grid

    @property
    def t(self) -> np.ndarray:
        return self.path.t

    @property
    def values(self) -> SymplecticMatrix:
        return self.path.endpoint

    @classmethod
    def from_callable(cls, fn, n: int, t_samples: int, grid_size: int, tolerance: float = 1e-12) -> "SampledFamily":
        """``fn(t, x)`` returns a ``(2n, 2n, len(x))`` complex array for a vector ``x``."""
        ctx = SampledFunctions(grid_size, tolerance)
        ts = np.linspace(0.0, 1.0, t_samples)
        mats = []
        for t in ts:
            data = np.asarray(fn(float(t), ctx.grid), dtype=complex)
            if data.shape != (2 * n, 2 * n, grid_size):
                raise ValueError(f"family callable returned shape {data.shape}")
            mats.append(SymplecticMatrix(ctx, data))
        return cls(SampledPath(ts, mats))

    def at(self, k: int) -> SymplecticMatrix:
        """``M(x_k)`` as a matrix over ``ComplexApprox``."""
        return SymplecticMatrix(ComplexApprox(self.ctx.tolerance), self.values.data[:, :, k])


# ---------------------------------------------------------------------------
# Splitting


def _quotients(path: SampledPath, idx) -> list:
    mats = path.matrices
    return [mats[idx[m]] @ mats[idx[m - 1]].inverse() for m in range(1, len(idx))]


def _candidate_counts(intervals: int):
    k = 1
    while k < intervals:
        yield k
        k *= 2
    yield intervals


def _split_indices(path: SampledPath, V: NeighborhoodSpec):
    K = len(path.t) - 1
    worst = None
    for k in _candidate_counts(K):
        idx = np.unique(np.round(np.linspace(0, K, k + 1)).astype(int))
        quots = _quotients(path, idx)
        devs = [Q.distance_from_identity() for Q in quots]
        if max(devs) <= V.radius:
            return idx, quots
        m = int(np.argmax(devs))
        worst = (idx[m], idx[m + 1], devs[m], quots[m])
    a, b, dev, Q = worst
    where = f"t in [{path.t[a]:.6g}, {path.t[b]:.6g}]"
    if isinstance(Q.ctx, SampledFunctions):
        per_x = np.max(np.abs(Q.data - np.eye(2 * Q.n)[:, :, None]), axis=(0, 1))
        where += f", x = {Q.ctx.grid[int(np.argmax(per_x))]:.6g}"
    raise SplitFailure(f"quotient over {where} is at distance {dev:.3g} > {V.radius} even on the finest grid")


def split_path(path: SampledPath, V: NeighborhoodSpec | None = None) -> list:
    """Quotients ``Q_1, ..., Q_k`` with ``Q_1 Q_2 ... Q_k = M_1`` and ``||Q_j - I|| <= radius``.

    ``Q_1 = M_1 M_{t_{k-1}}^{-1}``, ..., ``Q_k = M_{t_1} M_0^{-1}``.  ``k`` is
    the smallest power of two (capped by the number of sample intervals) for
    which a near-uniform subgrid keeps every quotient inside ``V``.
    """
    V = V or NeighborhoodSpec()
    _, quots = _split_indices(path, V)
    quots = quots[::-1]
    for Q in quots:
        assert Q.distance_from_identity() <= V.radius
    return quots


def factor_null_homotopic(
    path: SampledPath,
    V: NeighborhoodSpec | None = None,
    *,
    prune: bool = True,
    return_split: bool = False,
):
    """Elementary word for the path's endpoint: concatenated near-identity words of the quotients."""
    V = V or NeighborhoodSpec()
    quots = split_path(path, V)
    word = FactorWord()
    for Q in quots:
        word = word + factor_near_identity(Q, V, prune=prune)
    return (word, quots) if return_split else word


# ---------------------------------------------------------------------------
# Paths for constant complex matrices


def symplectic_form(n: int) -> np.ndarray:
    J = np.zeros((2 * n, 2 * n))
    J[:n, n:] = np.eye(n)
    J[n:, :n] = -np.eye(n)
    return J


def compact_log(U: SymplecticMatrix) -> np.ndarray:
    """Principal logarithm of a unitary symplectic matrix, checked to be in the Lie algebra."""
    X = np.asarray(U.data, dtype=complex)
    eig = np.linalg.eigvals(X)
    gap = float(np.min(np.abs(eig + 1)))
    if gap <= LOG_BRANCH_GAP:
        raise LogBranchFailure(f"eigenvalue within {gap:.2g} of -1; principal log is unreliable")
    L = scipy.linalg.logm(X)
    L = 0.5 * (L - L.conj().T)
    J = symplectic_form(U.n)
    herm = np.max(np.abs(L + L.conj().T))
    ham = np.max(np.abs(L.T @ J + J @ L))
    if ham > LIE_ALGEBRA_TOL or herm > LIE_ALGEBRA_TOL:
        raise LogBranchFailure(f"log leaves the Lie algebra (hamiltonian defect {ham:.2g})")
    return L


def _compact_samples(L: np.ndarray, radius: float) -> int:
    # e^{|L|/k} - 1 bounds the entrywise distance of exp(L/k) from I
    k = math.ceil(np.linalg.norm(L, 2) / math.log1p(0.9 * radius)) if np.any(L) else 1
    return max(k, 1) + 1


def _require_complex(M: SymplecticMatrix):
    if not isinstance(M.ctx, ComplexApprox):
        raise CapabilityMissing(f"expected a ComplexApprox matrix, got {M.ctx}")


def _branch_safe_reduction(M: SymplecticMatrix, seed: int):
    """Gram-Schmidt + log, pre-composing small random factors when the log branch fails.

    Returns ``(pre, reduction, log)`` with ``pre @ M`` the reduced input.
    """
    ctx, n = M.ctx, M.n
    rng = np.random.default_rng(seed)
    pre = FactorWord()
    last = None
    for _ in range(MAX_BRANCH_RETRIES):
        target = multiply_word(pre, n, ctx) @ M if len(pre) else M
        red = reduce_to_compact(target)
        try:
            return pre, red, compact_log(red.U)
        except LogBranchFailure as exc:
            last = exc
            kind = "E" if rng.random() < 0.5 else "F"
            i, j = sorted(int(v) for v in rng.integers(1, n + 1, size=2))
            pre = FactorWord([ElementaryFactor(kind, i, j, ctx.random_element(rng, 0.05))]) + pre
    raise LogBranchFailure(f"no branch-safe perturbation after {MAX_BRANCH_RETRIES} attempts: {last}")


def build_path_constant_complex(M: SymplecticMatrix, samples: int = 129, *, seed: int = 0) -> SampledPath:
    """Sampled null-homotopy of a complex symplectic matrix.

    With ``W U = M`` (``W`` the inverted Gram-Schmidt word, ``U`` unitary)
    the path is ``P_t = W(t) exp(t log U)``, where ``W(t)`` scales every
    parameter of ``W`` by ``t``.
    """
    _require_complex(M)
    ctx, n = M.ctx, M.n
    pre, red, L = _branch_safe_reduction(M, seed)
    winv = invert_word(pre, ctx) + invert_word(red.elementary_word, ctx)
    ts = np.linspace(0.0, 1.0, samples)
    mats = []
    for t in ts:
        W = multiply_word(scale_word(winv, t, ctx), n, ctx)
        mats.append(W @ SymplecticMatrix(ctx, scipy.linalg.expm(t * L)))
    return SampledPath(ts, mats)


def factor_constant_complex(
    M: SymplecticMatrix,
    V: NeighborhoodSpec | None = None,
    *,
    seed: int = 0,
    prune: bool = True,
    samples: int = 129,
) -> FactorWord:
    """Inverted Gram-Schmidt word followed by the factored log-path of the compact part.

    The log-path gets at least ``samples`` points, more if ``|log U|`` needs them.
    """
    _require_complex(M)
    V = V or NeighborhoodSpec()
    ctx, n = M.ctx, M.n
    pre, red, L = _branch_safe_reduction(M, seed)
    samples = max(samples, _compact_samples(L, V.radius))
    ts = np.linspace(0.0, 1.0, samples)
    path = SampledPath(ts, [SymplecticMatrix(ctx, scipy.linalg.expm(t * L)) for t in ts])
    head = invert_word(pre, ctx) + invert_word(red.elementary_word, ctx)
    return head + factor_null_homotopic(path, V, prune=prune)


# ---------------------------------------------------------------------------
# Families


@dataclass
class FamilyFactorization:
    """Elementary word over ``SampledFunctions``: one skeleton, parameters per grid point."""

    word: FactorWord
    ctx: SampledFunctions
    n: int
    split_count: int
    continuity: dict = field(default_factory=dict)

    @property
    def schema(self) -> list:
        return self.word.schema

    def parameters(self) -> np.ndarray:
        """Array of shape ``(grid_size, len(word))``."""
        if not len(self.word):
            return np.zeros((self.ctx.grid_size, 0), dtype=complex)
        return np.stack([np.asarray(f.a) for f in self.word], axis=1)

    def word_at(self, k: int) -> FactorWord:
        """The factorization at grid point ``x_k`` as a ``ComplexApprox`` word."""
        return FactorWord(ElementaryFactor(f.kind, f.i, f.j, complex(f.a[k])) for f in self.word)

    def reconstruct_at(self, k: int) -> SymplecticMatrix:
        return multiply_word(self.word_at(k), self.n, ComplexApprox(self.ctx.tolerance))

    def to_json(self) -> dict:
        params = self.parameters()
        fmt = ComplexApprox().format
        return {
            "x": [float(v) for v in self.ctx.grid],
            "schema": [list(s) for s in self.schema],
            "parameters_per_x": [[fmt(complex(v)) for v in row] for row in params],
            "split_count": self.split_count,
            "continuity": self.continuity,
        }


def _continuity(word: FactorWord, values: SymplecticMatrix) -> dict:
    data = values.data
    input_modulus = float(np.max(np.abs(np.diff(data, axis=-1)))) if data.shape[-1] > 1 else 0.0
    if len(word) and data.shape[-1] > 1:
        params = np.stack([np.asarray(f.a) for f in word], axis=1)
        param_modulus = float(np.max(np.abs(np.diff(params, axis=0))))
    else:
        param_modulus = 0.0
    if param_modulus == 0.0:
        ratio = 0.0
    elif input_modulus == 0.0:
        ratio = math.inf
    else:
        ratio = param_modulus / input_modulus
    return {"input_modulus": input_modulus, "parameter_modulus": param_modulus, "C": ratio}


def factor_continuous_family(
    fam: SampledFamily,
    V: NeighborhoodSpec | None = None,
    *,
    prune: bool = True,
) -> FamilyFactorization:
    """Factor every ``M(x)`` of a null-homotopic family with one shared factor schema.

    The Gram-Schmidt word ``F(P_t)`` transports the supplied homotopy ``P_t``
    into the compact group (``V_t = F(P_t) P_t``); the transported path is
    split with a single set of ``t`` points valid for all ``x`` and each
    quotient is factored near the identity.  The result at ``x`` is
    ``F(M(x))^{-1}`` followed by those words.
    """
    V = V or NeighborhoodSpec()
    ctx = fam.ctx
    red = reduce_to_compact(fam.values, prune=prune)
    transported = SampledPath(fam.t, [reduce_to_compact(P, prune=prune).U for P in fam.path.matrices])
    word, quots = factor_null_homotopic(transported, V, prune=prune, return_split=True)
    word = invert_word(red.elementary_word, ctx) + word
    return FamilyFactorization(
        word=word,
        ctx=ctx,
        n=fam.path.n,
        split_count=len(quots),
        continuity=_continuity(word, fam.values),
    )
