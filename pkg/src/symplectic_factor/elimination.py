"""Gauss-Jordan elimination by elementary symplectic row operations.

Two drivers share one column-reduction routine:

* :func:`factor_near_identity` -- for matrices close to ``I`` over a normed
  ring (or any exact ring whose pivots happen to be units).  No row swaps;
  every pivot is inverted directly.
* :func:`factor_stable_rank_one` -- for arbitrary symplectic matrices over a
  ring with a stable-rank-one witness.  Before each column is reduced, a
  cofactor certificate and the witness ``alpha`` turn the pivot into a unit.

Both multiply the input on the left by generators ``G_1, G_2, ...`` until the
identity is reached and return ``M = G_1^{-1} G_2^{-1} ... G_N^{-1}``.

Structural invariants are asserted after every step when strict checking is
enabled (see :func:`strict_checks`); the test-suite turns it on globally.
"""
from __future__ import annotations

import contextlib
from dataclasses import dataclass, field

import numpy as np

from .core import (
    E,
    F,
    ElementaryFactor,
    FactorWord,
    K,
    SymplecticMatrix,
    apply_inplace,
    check_symplectic,
    expand_word,
    invert_factor,
)
from .errors import (
    CapabilityMissing,
    CertificateFailure,
    MilestoneViolation,
    OutsideNeighborhood,
    PivotNotUnit,
    WitnessFailure,
    NotUnimodular,
)
from .rings import Ring

_STRICT = False
STRICT_STATS = {"eliminations": 0, "milestone_checks": 0, "prefix_checks": 0}


def set_strict(enabled: bool) -> None:
    global _STRICT
    _STRICT = bool(enabled)


def is_strict() -> bool:
    return _STRICT


@contextlib.contextmanager
def strict_checks(enabled: bool = True):
    """Temporarily enable milestone and prefix-symplecticity assertions."""
    previous = _STRICT
    set_strict(enabled)
    try:
        yield
    finally:
        set_strict(previous)


@dataclass(frozen=True)
class NeighborhoodSpec:
    """Sup-norm ball ``||M - I|| <= radius`` on which no row swaps are needed."""

    radius: float = 0.1

    def __post_init__(self):
        if not 0 < self.radius < 1:
            raise ValueError(f"neighborhood radius must lie in (0, 1), got {self.radius}")


@dataclass
class EliminationTrace:
    steps: list = field(default_factory=list)
    pivot_log: list = field(default_factory=list)

    def to_json(self, ctx: Ring) -> list:
        from .jsonio import factor_to_json

        return [
            {"step": k, "factor": factor_to_json(f, ctx), "max_residual": r}
            for k, (f, r) in enumerate(self.steps)
        ]


def factor_count_bound(n: int) -> int:
    """Worst-case length of the elementary word from :func:`factor_near_identity`.

    Column ``j`` costs 4 (diagonal ``K``) + 5(n-1) (off-diagonal ``K``) +
    (n - j + 1) (``F``) factors, and the final ``B`` stage n(n+1)/2, which
    sums to ``6 n^2``.
    """
    if n < 1:
        raise ValueError("n must be positive")
    per_columns = sum(4 + 5 * (n - 1) + (n - j + 1) for j in range(1, n + 1))
    return per_columns + n * (n + 1) // 2


# ---------------------------------------------------------------------------
# Division-free determinant and adjugate


def charpoly(ctx: Ring, X: np.ndarray) -> list:
    """Coefficients ``[1, p_1, ..., p_m]`` of ``det(t I - X)`` (Berkowitz).

    Uses only ring additions and multiplications, so it is valid over rings
    with zero divisors.
    """
    m = X.shape[0]
    one, zero = ctx.one(), ctx.zero()
    vect = [one, ctx.neg(ctx.entry(X, 0, 0))]
    for r in range(1, m):
        Ar = X[:r, :r]
        R = X[r : r + 1, :r]
        P = X[:r, r : r + 1]
        q = [one, ctx.neg(ctx.entry(X, r, r))]
        for _ in range(r):
            q.append(ctx.neg(ctx.entry(ctx.matmul(R, P), 0, 0)))
            P = ctx.matmul(Ar, P)
        new = []
        for i in range(r + 2):
            s = zero
            for k in range(max(0, i - len(q) + 1), min(i, r) + 1):
                s = ctx.add(s, ctx.mul(q[i - k], vect[k]))
            new.append(s)
        vect = new
    return vect


def determinant(ctx: Ring, X: np.ndarray):
    p = charpoly(ctx, X)
    m = X.shape[0]
    return p[m] if m % 2 == 0 else ctx.neg(p[m])


def adjugate(ctx: Ring, X: np.ndarray) -> np.ndarray:
    """``adj(X)`` via Cayley-Hamilton: ``X adj(X) = det(X) I``."""
    m = X.shape[0]
    p = charpoly(ctx, X)
    eye = ctx.eye(m)
    Q = eye.copy()
    for k in range(1, m):
        Q = ctx.add(ctx.matmul(X, Q), ctx.mul(p[k], eye))
    return Q if m % 2 == 1 else ctx.neg(Q)


def column_certificate(M: SymplecticMatrix, col: int, X: np.ndarray | None = None):
    """Cofactor coefficients ``x, y`` with ``sum x_i a_i,col + sum y_i c_i,col = 1``.

    ``col`` is 1-based.  ``x_i`` (resp. ``y_i``) are the signed cofactors of
    rows ``i`` (resp. ``n + i``) in that column of the full matrix, so the
    identity is the Laplace expansion of ``det M = 1``.
    """
    ctx, n = M.ctx, M.n
    data = M.data if X is None else X
    adj = adjugate(ctx, data)
    c = col - 1
    x = [ctx.entry(adj, c, i) for i in range(n)]
    y = [ctx.entry(adj, c, n + i) for i in range(n)]
    total = ctx.zero()
    scale = 0.0
    for i in range(n):
        for coef, v in ((x[i], ctx.entry(data, i, c)), (y[i], ctx.entry(data, n + i, c))):
            term = ctx.mul(coef, v)
            total = ctx.add(total, term)
            if not ctx.exact:
                scale = max(scale, float(np.max(ctx.magnitude(np.asarray(term)))))
    if ctx.exact:
        ok = ctx.equal(total, ctx.one())
    else:
        ok = ctx.deviation(np.asarray(total), np.asarray(ctx.one())) <= 1e-6 * max(1.0, scale)
    if not ok:
        raise CertificateFailure(f"cofactor combination for column {col} is {total!r}, not 1")
    return x, y


# ---------------------------------------------------------------------------
# Shared elimination machinery


class _Eliminator:
    def __init__(self, M: SymplecticMatrix, prune: bool, record: bool):
        self.ctx = M.ctx
        self.n = M.n
        self.X = np.array(M.data, copy=True)
        self.applied: list[ElementaryFactor] = []
        self.prune = prune
        self.trace = EliminationTrace() if record else None
        self.strict = _STRICT
        if not self.ctx.exact:
            self.scale = max(1.0, float(np.max(self.ctx.magnitude(M.data))))
        if self.strict:
            STRICT_STATS["eliminations"] += 1

    def _tol(self, power: int = 1) -> float:
        return 0.0 if self.ctx.exact else 1e-8 * self.scale**power

    def step(self, f: ElementaryFactor) -> None:
        ctx = self.ctx
        if self.prune:
            if f.kind == "K" and f.i == f.j:
                if ctx.is_one(f.a):
                    return
            elif ctx.is_zero(f.a):
                return
        apply_inplace(ctx, self.X, f, self.n)
        self.applied.append(f)
        residual = None
        if self.strict or self.trace is not None:
            report = check_symplectic(self.X, ctx)
            residual = max(report.residuals.values())
            if self.strict:
                STRICT_STATS["prefix_checks"] += 1
                if residual > self._tol(2) * 1e-2:
                    raise MilestoneViolation(f"prefix lost symplecticity after {f!r}: residual {residual:g}")
        if self.trace is not None:
            self.trace.steps.append((f, residual))

    def _near_zero(self, block) -> bool:
        return self.ctx.deviation(block, self.ctx.zeros(np.shape(block)[:2])) <= self._tol()

    def reduce_column(self, j: int) -> None:
        """Gauss-Jordan on column ``j`` (0-based) with a unit pivot ``a_jj``."""
        ctx, n, X = self.ctx, self.n, self.X
        pivot = ctx.entry(X, j, j)
        inv = ctx.inverse(pivot)
        if inv is None:
            raise PivotNotUnit(f"pivot a_{j + 1}{j + 1} = {pivot!r} is not a unit")
        if self.trace is not None:
            self.trace.pivot_log.append((j + 1, pivot, inv))
        self.step(K(j + 1, j + 1, inv))
        for i in range(n):
            if i != j:
                self.step(K(i + 1, j + 1, ctx.neg(ctx.entry(X, i, j))))
        for i in range(j, n):
            self.step(F(i + 1, j + 1, ctx.neg(ctx.entry(X, n + i, j))))
        if self.strict:
            self.check_column_milestone(j)

    def check_column_milestone(self, j: int) -> None:
        ctx, n, X = self.ctx, self.n, self.X
        STRICT_STATS["milestone_checks"] += 1
        k = j + 1
        if ctx.deviation(X[:n, :k], ctx.eye(n)[:, :k]) > self._tol():
            raise MilestoneViolation(f"columns 1..{k} of A are not e_1..e_{k}")
        if not self._near_zero(X[n:, :k]):
            raise MilestoneViolation(f"columns 1..{k} of C do not vanish")
        if not self._near_zero(X[n : n + k, :n]):
            raise MilestoneViolation(f"rows 1..{k} of C do not vanish")

    def clear_B(self) -> None:
        ctx, n, X = self.ctx, self.n, self.X
        if self.strict:
            STRICT_STATS["milestone_checks"] += 1
            eye = ctx.eye(n)
            if ctx.deviation(X[:n, :n], eye) > self._tol() or not self._near_zero(X[n:, :n]):
                raise MilestoneViolation("A != I or C != 0 after the column phase")
            if ctx.deviation(X[n:, n:], eye) > self._tol(2):
                raise MilestoneViolation("D != I although A = I and C = 0")
            B = X[:n, n:]
            if ctx.deviation(B, np.swapaxes(B, 0, 1)) > self._tol(2):
                raise MilestoneViolation("B is not symmetric although A = I and C = 0")
        for i in range(n):
            for j in range(i + 1):
                self.step(E(i + 1, j + 1, ctx.neg(ctx.entry(X, i, n + j))))
        if self.strict:
            STRICT_STATS["milestone_checks"] += 1
            if ctx.deviation(X, ctx.eye(2 * n)) > self._tol(2):
                raise MilestoneViolation("elimination did not reach the identity")

    def word(self, elementary: bool) -> FactorWord:
        word = FactorWord(invert_factor(f, self.ctx) for f in self.applied)
        return expand_word(word, self.ctx) if elementary else word

    def result(self, elementary: bool, return_trace: bool):
        word = self.word(elementary)
        return (word, self.trace) if return_trace else word


# ---------------------------------------------------------------------------
# Drivers


def factor_near_identity(
    M: SymplecticMatrix,
    V: NeighborhoodSpec | None = None,
    *,
    elementary: bool = True,
    prune: bool = True,
    return_trace: bool = False,
):
    """Factor a matrix near the identity into elementary symplectic factors.

    For each column ``j``: scale the pivot to 1 with ``K(j, j, a_jj^-1)``,
    clear the rest of column ``j`` of ``A`` with ``K(i, j, -a_ij)``, then
    clear column ``j`` of ``C`` with ``F(i, j, -c_ij)`` for ``i >= j`` (the
    entries above already vanish).  Once ``A = I`` and ``C = 0`` the matrix is
    ``[[I, B], [0, I]]`` with ``B`` symmetric, which ``E(i, j, -b_ij)``
    removes.

    Over rings with a norm the input must lie in ``V``; over exact rings
    without one only the pivots are checked.  Zero-parameter steps are
    dropped when ``prune`` is set (so ``I`` maps to the empty word).
    """
    V = V or NeighborhoodSpec()
    ctx = M.ctx
    if ctx.has_norm:
        dist = M.distance_from_identity()
        if dist > V.radius:
            raise OutsideNeighborhood(f"distance {dist:.3g} from I exceeds radius {V.radius}")
    elim = _Eliminator(M, prune, return_trace)
    for j in range(M.n):
        elim.reduce_column(j)
    elim.clear_B()
    return elim.result(elementary, return_trace)


def factor_stable_rank_one(
    M: SymplecticMatrix,
    *,
    elementary: bool = True,
    prune: bool = True,
    return_trace: bool = False,
):
    """Factor any symplectic matrix over a ring of stable rank one.

    Before reducing column ``j`` the pivot is made a unit: with cofactors
    ``x, y`` of the current matrix (``sum x_i a_ij + sum y_i c_ij = 1``) and
    ``alpha`` a witness for ``(a_jj, b)``, ``b = sum_{i>j} x_i a_ij +
    sum_i y_i c_ij``, apply ``K(j, i, alpha x_i)`` for ``i > j``,
    ``E(j, i, alpha y_i)`` for ``i != j`` and finally
    ``E(j, j, alpha y_j + sum_{i>j} alpha^2 x_i y_i)``.  The pivot is then
    ``a_jj + alpha b``.
    """
    ctx = M.ctx
    if not ctx.has_bsr1_witness:
        raise CapabilityMissing(f"{ctx} has no stable-rank-one witness")
    n = M.n
    elim = _Eliminator(M, prune, return_trace)
    X = elim.X
    for j in range(n):
        a = ctx.entry(X, j, j)
        if ctx.inverse(a) is None:
            x, y = column_certificate(M, j + 1, X)
            b = ctx.zero()
            for i in range(n):
                if i > j:
                    b = ctx.add(b, ctx.mul(x[i], ctx.entry(X, i, j)))
                b = ctx.add(b, ctx.mul(y[i], ctx.entry(X, n + i, j)))
            try:
                alpha = ctx.bsr1_witness(a, b)
            except NotUnimodular as exc:
                raise WitnessFailure(str(exc)) from exc
            target = ctx.add(a, ctx.mul(alpha, b))
            corr = ctx.mul(alpha, y[j])
            for i in range(j + 1, n):
                ax = ctx.mul(alpha, x[i])
                elim.step(K(j + 1, i + 1, ax))
                corr = ctx.add(corr, ctx.mul(ax, ctx.mul(alpha, y[i])))
            for i in range(n):
                if i != j:
                    elim.step(E(j + 1, i + 1, ctx.mul(alpha, y[i])))
            elim.step(E(j + 1, j + 1, corr))
            if elim.strict:
                STRICT_STATS["milestone_checks"] += 1
                pivot = ctx.entry(X, j, j)
                if ctx.deviation(np.asarray(pivot), np.asarray(target)) > elim._tol(2):
                    raise MilestoneViolation(f"pivot {pivot!r} differs from a + alpha*b = {target!r}")
        elim.reduce_column(j)
    elim.clear_B()
    return elim.result(elementary, return_trace)
