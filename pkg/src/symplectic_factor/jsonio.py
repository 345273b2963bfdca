"""JSON wire formats for matrices, words, sampled paths and families.

Matrix::

    {"ring": {...}, "n": k, "A": [[...]], "B": [[...]], "C": [[...]], "D": [[...]]}

Word::

    {"elementary_only": bool,
     "factors": [{"kind": "E", "i": 1, "j": 2, "a": "3/4"},
                 {"kind": "UpperB", "B": [[...]]}, ...]}

Entries are ring-formatted strings ("p/q", residues, "re+imi", or a list of
complex strings for sampled functions).  Words written by the package also
carry ``ring`` and ``n`` so they can be evaluated without extra flags.
"""
from __future__ import annotations

import json

import numpy as np

from .core import ElementaryFactor, FactorWord, SymplecticMatrix
from .rings import Ring, ring_from_json


def _block_to_json(ctx: Ring, X) -> list:
    return [[ctx.format(X[i, j]) for j in range(X.shape[1])] for i in range(X.shape[0])]


def _block_from_json(ctx: Ring, rows) -> np.ndarray:
    return ctx.asarray(rows)


def matrix_to_json(M: SymplecticMatrix) -> dict:
    ctx = M.ctx
    return {
        "ring": ctx.to_json(),
        "n": M.n,
        "A": _block_to_json(ctx, M.A),
        "B": _block_to_json(ctx, M.B),
        "C": _block_to_json(ctx, M.C),
        "D": _block_to_json(ctx, M.D),
    }


def matrix_from_json(obj: dict, ctx: Ring | None = None) -> SymplecticMatrix:
    ctx = ctx or ring_from_json(obj["ring"])
    blocks = [_block_from_json(ctx, obj[k]) for k in "ABCD"]
    n = int(obj.get("n", blocks[0].shape[0]))
    for blk in blocks:
        if blk.shape[:2] != (n, n):
            raise ValueError(f"block shape {blk.shape[:2]} does not match n={n}")
    return SymplecticMatrix.from_blocks(ctx, *blocks)


def factor_to_json(f: ElementaryFactor, ctx: Ring) -> dict:
    if f.kind == "UpperB":
        return {"kind": "UpperB", "B": _block_to_json(ctx, f.block)}
    if f.kind == "LowerC":
        return {"kind": "LowerC", "C": _block_to_json(ctx, f.block)}
    return {"kind": f.kind, "i": f.i, "j": f.j, "a": ctx.format(ctx.coerce(f.a))}


def factor_from_json(obj: dict, ctx: Ring) -> ElementaryFactor:
    kind = obj["kind"]
    if kind == "UpperB":
        return ElementaryFactor("UpperB", block=_block_from_json(ctx, obj["B"]))
    if kind == "LowerC":
        return ElementaryFactor("LowerC", block=_block_from_json(ctx, obj["C"]))
    return ElementaryFactor(kind, int(obj["i"]), int(obj["j"]), ctx.parse(obj["a"]))


def word_to_json(word: FactorWord, ctx: Ring, n: int | None = None) -> dict:
    out = {}
    if n is not None:
        out["ring"] = ctx.to_json()
        out["n"] = n
    out["elementary_only"] = word.elementary_only
    out["factors"] = [factor_to_json(f, ctx) for f in word]
    return out


def word_from_json(obj: dict, ctx: Ring | None = None) -> tuple[FactorWord, Ring, int | None]:
    """Return ``(word, ring, n)``; ``n`` is ``None`` when the file omits it."""
    if ctx is None:
        if "ring" not in obj:
            raise ValueError("word JSON has no ring; pass one explicitly")
        ctx = ring_from_json(obj["ring"])
    word = FactorWord(factor_from_json(f, ctx) for f in obj["factors"])
    if obj.get("elementary_only") and not word.elementary_only:
        raise ValueError("word is marked elementary_only but contains K factors")
    return word, ctx, obj.get("n")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False)


def path_to_json(path) -> dict:
    return {"t": [float(t) for t in path.t], "matrices": [matrix_to_json(M) for M in path.matrices]}


def path_from_json(obj: dict):
    from .homotopy import SampledPath

    ctx = ring_from_json(obj["matrices"][0]["ring"])
    return SampledPath(obj["t"], [matrix_from_json(m, ctx) for m in obj["matrices"]])


def family_to_json(fam) -> dict:
    """Flatten a family into per-``(t, x)`` complex matrices, ``t``-major."""
    from .rings import ComplexApprox

    point_ctx = ComplexApprox(fam.ctx.tolerance)
    matrices = []
    for M in fam.path.matrices:
        for k in range(fam.ctx.grid_size):
            matrices.append(matrix_to_json(SymplecticMatrix(point_ctx, M.data[:, :, k])))
    return {"t": [float(t) for t in fam.t], "x": [float(x) for x in fam.x], "matrices": matrices}


def family_from_json(obj: dict):
    from .homotopy import SampledFamily, SampledPath
    from .rings import SampledFunctions

    t, x = obj["t"], obj["x"]
    G = len(x)
    if not np.allclose(x, np.linspace(0.0, 1.0, G), rtol=0, atol=1e-12):
        raise ValueError("family x grid must be uniform on [0, 1]")
    mats = obj["matrices"]
    if len(mats) != len(t) * G:
        raise ValueError(f"expected {len(t) * G} matrices (t-major, then x), got {len(mats)}")
    point_ctx = ring_from_json(mats[0]["ring"])
    ctx = SampledFunctions(G, getattr(point_ctx, "tolerance", 1e-12))
    path = []
    for a in range(len(t)):
        pts = [matrix_from_json(mats[a * G + k], point_ctx).data for k in range(G)]
        path.append(SymplecticMatrix(ctx, np.stack(pts, axis=-1).astype(complex)))
    return SampledFamily(SampledPath(t, path))
