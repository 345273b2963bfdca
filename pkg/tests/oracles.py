"""Reference computations that share no code path with the package internals."""
import math
from itertools import product


def dense(M):
    """Matrix data as nested Python lists."""
    return [[M.ctx.entry(M.data, i, j) for j in range(M.data.shape[1])] for i in range(M.data.shape[0])]


def matmul(ctx, X, Y):
    """Schoolbook product over a ring, entry by entry."""
    m, k, p = len(X), len(Y), len(Y[0])
    out = []
    for i in range(m):
        row = []
        for j in range(p):
            s = ctx.zero()
            for t in range(k):
                s = ctx.add(s, ctx.mul(X[i][t], Y[t][j]))
            row.append(s)
        out.append(row)
    return out


def laplace_det(ctx, X):
    m = len(X)
    if m == 1:
        return X[0][0]
    total = ctx.zero()
    for c in range(m):
        minor = [row[:c] + row[c + 1 :] for row in X[1:]]
        term = ctx.mul(X[0][c], laplace_det(ctx, minor))
        total = ctx.add(total, term) if c % 2 == 0 else ctx.sub(total, term)
    return total


def laplace_cofactor(ctx, X, r, c):
    minor = [row[:c] + row[c + 1 :] for k, row in enumerate(X) if k != r]
    d = laplace_det(ctx, minor) if minor else ctx.one()
    return d if (r + c) % 2 == 0 else ctx.neg(d)


def witness_set(m, a, b):
    """All alpha in Z/m with a + alpha*b a unit, by exhaustive scan."""
    return [alpha for alpha in range(m) if math.gcd((a + alpha * b) % m, m) == 1]


def upper_triangle(n):
    return [(i, j) for i, j in product(range(1, n + 1), repeat=2) if i <= j]
