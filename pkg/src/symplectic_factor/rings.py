"""Commutative rings with identity, as used by the factorization algorithms.

A ring context owns the arithmetic; elements are plain payloads so that
matrices can be stored as numpy arrays and row operations stay vectorized:

==================  ==========================  ===============================
ring                scalar payload              matrix storage
==================  ==========================  ===============================
``Rationals``       ``fractions.Fraction``      object array
``IntegersMod``     ``int`` in ``[0, m)``       int64 (object for huge ``m``)
``ComplexApprox``   ``complex``                 complex128
``SampledFunctions``complex vector, grid length complex128 with trailing axis
==================  ==========================  ===============================

Every context answers the same questions: unit test and inversion, a
stable-rank-one witness where one is computable, and a norm where the ring is
normed.  ``SampledFunctions`` models C([0, 1]) on a uniform grid with pointwise
arithmetic, so a matrix over it is a whole family ``x -> M(x)`` at once.
"""
from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import CapabilityMissing, NotUnimodular, WitnessFailure

DEFAULT_TOLERANCE = 1e-12
ZM_SCAN_CAP = 10**6


class Ring:
    """Interface shared by all ring contexts.

    Subclasses override the primitive hooks; the generic helpers below
    (``sub``, ``neg``, ``eye``, ...) are written in terms of them.
    """

    ring_id: str = ""
    exact: bool = True
    has_norm: bool = False
    has_bsr1_witness: bool = False
    tolerance: float = 0.0
    elem_shape: tuple[int, ...] = ()

    # -- construction ---------------------------------------------------
    def zeros(self, shape: tuple[int, ...]) -> np.ndarray:
        raise NotImplementedError

    def coerce(self, value: Any):
        raise NotImplementedError

    def zero(self):
        return self.coerce(0)

    def one(self):
        return self.coerce(1)

    def eye(self, k: int) -> np.ndarray:
        out = self.zeros((k, k))
        for i in range(k):
            out[i, i] = self.one()
        return out

    def asarray(self, rows) -> np.ndarray:
        """Build a matrix from nested rows of anything ``coerce`` accepts."""
        rows = list(rows)
        shape = (len(rows), len(rows[0]) if rows else 0)
        out = self.zeros(shape)
        for i, row in enumerate(rows):
            for j, v in enumerate(row):
                out[i, j] = self.coerce(v)
        return out

    def entry(self, X: np.ndarray, i: int, j: int):
        """Return ``X[i, j]`` as a detached scalar element."""
        return self.coerce(X[i, j])

    # -- arithmetic -----------------------------------------------------
    def reduce(self, x):
        return x

    def add(self, a, b):
        return self.reduce(a + b)

    def sub(self, a, b):
        return self.reduce(a - b)

    def neg(self, a):
        return self.reduce(-a)

    def mul(self, a, b):
        return self.reduce(a * b)

    def matmul(self, X: np.ndarray, Y: np.ndarray) -> np.ndarray:
        return self.reduce(X @ Y)

    def inverse(self, a):
        """Return ``a**-1`` if ``a`` is a unit, else ``None``."""
        raise NotImplementedError

    def is_unit(self, a) -> bool:
        return self.inverse(a) is not None

    def is_zero(self, a) -> bool:
        return bool(np.all(a == 0))

    def is_one(self, a) -> bool:
        return bool(np.all(a == 1))

    def equal(self, X, Y) -> bool:
        return bool(np.array_equal(np.asarray(X), np.asarray(Y)))

    def magnitude(self, X) -> np.ndarray:
        """Entrywise size as floats; for function rings the sup over the grid."""
        raise NotImplementedError

    def deviation(self, X, Y) -> float:
        """Max entrywise size of ``X - Y`` (0.0 means equal on exact rings)."""
        diff = self.sub(np.asarray(X), np.asarray(Y))
        mag = self.magnitude(diff)
        return float(np.max(mag)) if np.size(mag) else 0.0

    def to_complex(self, X) -> np.ndarray:
        raise CapabilityMissing(f"{self} has no complex embedding")

    # -- capabilities ---------------------------------------------------
    def norm(self, a) -> float:
        raise CapabilityMissing(f"{self} has no norm")

    def bsr1_witness(self, a, b):
        """Return ``alpha`` with ``a + alpha*b`` a unit; the result is self-checked."""
        if not self.has_bsr1_witness:
            raise CapabilityMissing(f"{self} has no stable-rank-one witness")
        alpha = self._witness(a, b)
        if self.inverse(self.add(a, self.mul(alpha, b))) is None:
            raise WitnessFailure(f"witness {alpha!r} failed for ({a!r}, {b!r}) in {self}")
        return alpha

    def _witness(self, a, b):
        raise NotImplementedError

    def random_element(self, rng: np.random.Generator, radius: float = 1.0):
        raise NotImplementedError

    # -- serialization --------------------------------------------------
    def format(self, a):
        raise NotImplementedError

    def parse(self, s):
        raise NotImplementedError

    def to_json(self) -> dict:
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self.to_json() == other.to_json()

    def __hash__(self):
        return hash(json.dumps(self.to_json(), sort_keys=True))

    def __repr__(self):
        return self.ring_id


class Rationals(Ring):
    """The field Q with exact ``Fraction`` arithmetic; ``|.|`` serves as norm."""

    ring_id = "Q"
    has_norm = True
    has_bsr1_witness = True

    def zeros(self, shape):
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def coerce(self, value):
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, float):
            return Fraction(value)
        return Fraction(value)

    def inverse(self, a):
        return None if a == 0 else 1 / Fraction(a)

    def magnitude(self, X):
        return np.vectorize(lambda v: float(abs(v)), otypes=[float])(np.asarray(X, dtype=object))

    def to_complex(self, X):
        return np.vectorize(lambda v: complex(float(v)), otypes=[complex])(np.asarray(X, dtype=object))

    def norm(self, a):
        return float(abs(a))

    def _witness(self, a, b):
        if a != 0:
            return Fraction(0)
        if b != 0:
            return Fraction(1)
        raise NotUnimodular(f"({a}, {b}) is not unimodular in Q")

    def random_element(self, rng, radius=1.0, height=6):
        q = int(rng.integers(1, height + 1))
        p = int(rng.integers(-q, q + 1))
        return Fraction(p, q) * Fraction(radius).limit_denominator(1000)

    def format(self, a):
        a = Fraction(a)
        return f"{a.numerator}/{a.denominator}"

    def parse(self, s):
        return Fraction(str(s).strip())

    def to_json(self):
        return {"id": "Q"}


class IntegersMod(Ring):
    """Z/mZ; residues are kept in ``[0, m)``.

    The stable-rank-one witness is an exhaustive scan over residues, which is
    why ``m`` is capped at ``ZM_SCAN_CAP``.
    """

    ring_id = "Zm"

    def __init__(self, m: int):
        m = int(m)
        if m < 2:
            raise ValueError("modulus must be at least 2")
        if m > ZM_SCAN_CAP:
            raise ValueError(f"modulus {m} exceeds the witness scan cap {ZM_SCAN_CAP}")
        self.m = m
        self.has_bsr1_witness = True

    def zeros(self, shape):
        return np.zeros(shape, dtype=np.int64)

    def coerce(self, value):
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, Fraction):
            if value.denominator != 1:
                inv = self.inverse(value.denominator % self.m)
                if inv is None:
                    raise ValueError(f"{value} has no image in Z/{self.m}")
                return value.numerator * inv % self.m
            value = value.numerator
        return int(value) % self.m

    def reduce(self, x):
        if isinstance(x, np.ndarray):
            return x % self.m
        return int(x) % self.m

    def inverse(self, a):
        a = int(a) % self.m
        if math.gcd(a, self.m) != 1:
            return None
        return pow(a, -1, self.m)

    def is_zero(self, a):
        return bool(np.all(np.asarray(a) % self.m == 0))

    def magnitude(self, X):
        r = np.asarray(X, dtype=np.int64) % self.m
        return np.minimum(r, self.m - r).astype(float)

    def _witness(self, a, b):
        for alpha in range(self.m):
            if math.gcd((a + alpha * b) % self.m, self.m) == 1:
                return alpha
        raise NotUnimodular(f"({a}, {b}) is not unimodular in Z/{self.m}")

    def random_element(self, rng, radius=1.0):
        return int(rng.integers(0, self.m))

    def format(self, a):
        return str(int(a) % self.m)

    def parse(self, s):
        return int(str(s).strip()) % self.m

    def to_json(self):
        return {"id": "Zm", "m": self.m}

    def __repr__(self):
        return f"Zm({self.m})"


class PrimeField(IntegersMod):
    ring_id = "Fp"

    def __init__(self, p: int):
        if not _is_prime(int(p)):
            raise ValueError(f"{p} is not prime")
        super().__init__(p)

    @property
    def p(self) -> int:
        return self.m

    def _witness(self, a, b):
        if a % self.m:
            return 0
        if b % self.m:
            return 1
        raise NotUnimodular(f"({a}, {b}) is not unimodular in F{self.m}")

    def to_json(self):
        return {"id": "Fp", "p": self.m}

    def __repr__(self):
        return f"Fp({self.m})"


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    return all(p % d for d in range(3, math.isqrt(p) + 1, 2))


class ComplexApprox(Ring):
    """Complex doubles; ``a`` is a unit iff ``|a| > tolerance``."""

    ring_id = "ComplexApprox"
    exact = False
    has_norm = True
    # C is a field, so the stable-rank-one route also runs here (cross-check).
    has_bsr1_witness = True

    def __init__(self, tolerance: float = DEFAULT_TOLERANCE):
        self.tolerance = float(tolerance)

    def zeros(self, shape):
        return np.zeros(shape, dtype=complex)

    def coerce(self, value):
        if isinstance(value, str):
            return self.parse(value)
        return complex(value)

    def inverse(self, a):
        if abs(a) <= self.tolerance:
            return None
        return 1 / complex(a)

    def magnitude(self, X):
        return np.abs(np.asarray(X))

    def to_complex(self, X):
        return np.asarray(X, dtype=complex)

    def norm(self, a):
        return float(abs(a))

    def _witness(self, a, b):
        if abs(a) > self.tolerance:
            return 0j
        if abs(b) > self.tolerance:
            return 1 / complex(b)
        raise NotUnimodular(f"({a}, {b}) is numerically not unimodular")

    def random_element(self, rng, radius=1.0):
        r = radius * math.sqrt(rng.random())
        return complex(r * np.exp(2j * np.pi * rng.random()))

    def format(self, a):
        return _format_complex(complex(a))

    def parse(self, s):
        return _parse_complex(s)

    def to_json(self):
        return {"id": "ComplexApprox", "tolerance": self.tolerance}

    def __repr__(self):
        return f"ComplexApprox({self.tolerance:g})"


class SampledFunctions(Ring):
    """Continuous functions on [0, 1], sampled on a uniform grid.

    Arithmetic is pointwise; ``a`` is a unit iff it stays away from zero on
    the whole grid, and the norm is the sup over the grid.
    """

    ring_id = "SampledFunctions"
    exact = False
    has_norm = True

    def __init__(self, grid_size: int, tolerance: float = DEFAULT_TOLERANCE):
        if grid_size < 1:
            raise ValueError("grid_size must be positive")
        self.grid_size = int(grid_size)
        self.tolerance = float(tolerance)
        self.elem_shape = (self.grid_size,)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.grid_size)

    def zeros(self, shape):
        return np.zeros(tuple(shape) + self.elem_shape, dtype=complex)

    def coerce(self, value):
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, (list, tuple)) and value and isinstance(value[0], str):
            return self.parse(value)
        arr = np.array(np.broadcast_to(np.asarray(value, dtype=complex), self.elem_shape))
        return arr

    def from_function(self, f) -> np.ndarray:
        return self.coerce(f(self.grid))

    def matmul(self, X, Y):
        return np.einsum("ikg,kjg->ijg", X, Y)

    def inverse(self, a):
        a = np.asarray(a)
        if np.min(np.abs(a)) <= self.tolerance:
            return None
        return 1 / a

    def magnitude(self, X):
        X = np.asarray(X)
        return np.max(np.abs(X), axis=-1)

    def to_complex(self, X):
        return np.asarray(X, dtype=complex)

    def norm(self, a):
        return float(np.max(np.abs(a)))

    def random_element(self, rng, radius=1.0):
        x = self.grid
        c = [radius / 3 * math.sqrt(rng.random()) * np.exp(2j * np.pi * rng.random()) for _ in range(3)]
        return c[0] + c[1] * x + c[2] * np.sin(np.pi * x)

    def format(self, a):
        return [_format_complex(complex(v)) for v in np.asarray(a)]

    def parse(self, s):
        if isinstance(s, str):
            s = json.loads(s)
        vals = [_parse_complex(v) for v in s]
        if len(vals) != self.grid_size:
            raise ValueError(f"expected {self.grid_size} samples, got {len(vals)}")
        return np.array(vals, dtype=complex)

    def to_json(self):
        return {"id": "SampledFunctions", "grid_size": self.grid_size, "tolerance": self.tolerance}

    def __repr__(self):
        return f"SampledFunctions({self.grid_size})"


def _format_complex(z: complex) -> str:
    sign = "+" if math.copysign(1.0, z.imag) > 0 else ""
    return f"{z.real!r}{sign}{z.imag!r}i"


def _parse_complex(s) -> complex:
    if not isinstance(s, str):
        return complex(s)
    s = s.strip().replace(" ", "")
    if s.endswith("i"):
        s = s[:-1] + "j"
    return complex(s)


_RING_PATTERN = re.compile(r"^\s*([A-Za-z]+)\s*(?:\(\s*([^)]*)\s*\)|([0-9.eE+-]+))?\s*$")


def parse_ring(tag: str) -> Ring:
    """Parse a short ring tag: ``Q``, ``F7``/``Fp(7)``, ``Z12``/``Zm(12)``,
    ``C``/``ComplexApprox(1e-12)``, ``S65``/``SampledFunctions(65)``."""
    match = _RING_PATTERN.match(tag)
    if not match:
        raise ValueError(f"unrecognized ring {tag!r}")
    name, arg = match.group(1), match.group(2) or match.group(3)
    key = name.lower()
    if key in ("q", "rationals"):
        return Rationals()
    if key in ("f", "fp", "gf"):
        return PrimeField(int(arg))
    if key in ("z", "zm"):
        return IntegersMod(int(arg))
    if key in ("c", "complex", "complexapprox"):
        return ComplexApprox(float(arg)) if arg else ComplexApprox()
    if key in ("s", "sampled", "sampledfunctions"):
        parts = [p.strip() for p in (arg or "").split(",") if p.strip()]
        if not parts:
            raise ValueError("SampledFunctions needs a grid size")
        tol = float(parts[1]) if len(parts) > 1 else DEFAULT_TOLERANCE
        return SampledFunctions(int(parts[0]), tol)
    raise ValueError(f"unrecognized ring {tag!r}")


def ring_from_json(obj: dict) -> Ring:
    kind = obj["id"]
    if kind == "Q":
        return Rationals()
    if kind == "Fp":
        return PrimeField(obj["p"])
    if kind == "Zm":
        return IntegersMod(obj["m"])
    if kind == "ComplexApprox":
        return ComplexApprox(obj.get("tolerance", DEFAULT_TOLERANCE))
    if kind == "SampledFunctions":
        return SampledFunctions(obj["grid_size"], obj.get("tolerance", DEFAULT_TOLERANCE))
    raise ValueError(f"unknown ring id {kind!r}")
