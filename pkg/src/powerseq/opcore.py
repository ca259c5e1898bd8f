"""Operator expressions on finite and countable orthonormal bases.

Array-based operators (finite matrices, weighted shifts, diagonals, direct
sums, similarity conjugates) act on finitely supported coordinate vectors
held as numpy arrays; applying a shift lengthens the support by one, taking
its adjoint shortens it.  Multiplication by z on L^2 of a circle measure is
the one non-array model: its vectors are trigonometric polynomials stored as
{power: coefficient} dicts, and inner products go through the measure's
Fourier coefficients (the monomial "basis" there is not orthonormal — the
Gram matrix is mu_hat(p - q)).

Exact arithmetic is available for real rational data only: matrices whose
entries are ints, Fractions, or floats keep a parallel Fraction copy, and a
complex entry under the exact precision mode raises PrecisionError rather
than silently degrading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import circlemeasure, shiftlab
from .errors import (ConstraintError, DimensionMismatchError, PrecisionError,
                     StructureError)

__all__ = [
    "Precision",
    "FLOAT64",
    "EXACT",
    "OperatorExpr",
    "FiniteMatrix",
    "WeightedShift",
    "DiagonalEntries",
    "Diagonal",
    "MeasureMultiplication",
    "DirectSum",
    "Conjugate",
    "apply",
    "adjoint_apply",
    "to_dense",
    "basis_vector",
    "inner_product",
    "matrix_element_power",
    "power_norm_log",
    "exact_inverse",
    "operator_to_json",
    "operator_from_json",
]

_MAX_CONDITION = 1e12


@dataclass(frozen=True)
class Precision:
    """Arithmetic contract for operator computations.

    mode "float64" does everything in complex128 with the given tolerance;
    mode "exact" demands rational real data end to end and refuses anything
    else.  ``bits`` is reserved for an extended-precision mode and is not
    interpreted by the float64/exact paths.
    """

    mode: str = "float64"
    tolerance: float = 1e-12
    bits: int | None = None

    def __post_init__(self):
        if self.mode not in ("float64", "exact", "extended"):
            raise ConstraintError(f"unknown precision mode {self.mode!r}")


FLOAT64 = Precision("float64", 1e-12)
EXACT = Precision("exact", 0.0)


def _to_exact(value) -> Fraction:
    if isinstance(value, complex):
        if value.imag != 0:
            raise PrecisionError(f"exact arithmetic covers rational reals only, got {value!r}")
        value = value.real
    if isinstance(value, float) and not math.isfinite(value):
        raise PrecisionError(f"non-finite entry {value!r}")
    return Fraction(value)


def _try_exact_rows(rows):
    try:
        return tuple(tuple(_to_exact(v) for v in row) for row in rows)
    except (PrecisionError, TypeError, ValueError):
        return None


class OperatorExpr:
    """Base class; ``dimension`` is None for operators on l^2 or L^2(mu)."""

    dimension: int | None = None

    def apply(self, vec):
        raise NotImplementedError

    def adjoint_apply(self, vec):
        raise NotImplementedError

    def to_dense(self) -> np.ndarray:
        raise StructureError(f"{type(self).__name__} has no dense form")

    def to_json(self) -> dict:
        raise ConstraintError(f"{type(self).__name__} is not serializable")


def _as_vector(vec) -> np.ndarray:
    arr = np.asarray(vec, dtype=complex)
    if arr.ndim != 1:
        raise DimensionMismatchError(f"expected a coordinate vector, got shape {arr.shape}")
    return arr


class FiniteMatrix(OperatorExpr):
    """A dense matrix on C^n, with a parallel exact copy when entries allow."""

    def __init__(self, entries):
        if isinstance(entries, FiniteMatrix):
            entries = entries.array
        if isinstance(entries, np.ndarray):
            self.array = np.asarray(entries, dtype=complex)
            self.exact_entries = None
        else:
            rows = [list(r) for r in entries]
            self.array = np.asarray([[complex(v) for v in row] for row in rows], dtype=complex)
            self.exact_entries = _try_exact_rows(rows)
        if self.array.ndim != 2 or self.array.shape[0] != self.array.shape[1]:
            raise DimensionMismatchError(f"matrix must be square, got shape {self.array.shape}")
        self.dimension = self.array.shape[0]

    @classmethod
    def identity(cls, n: int) -> "FiniteMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def is_exact(self) -> bool:
        return self.exact_entries is not None

    def require_exact(self):
        if self.exact_entries is None:
            raise PrecisionError("matrix has no exact rational-real representation")
        return self.exact_entries

    def apply(self, vec):
        v = _as_vector(vec)
        if v.shape[0] != self.dimension:
            raise DimensionMismatchError(
                f"vector length {v.shape[0]} != matrix dimension {self.dimension}")
        return self.array @ v

    def adjoint_apply(self, vec):
        v = _as_vector(vec)
        if v.shape[0] != self.dimension:
            raise DimensionMismatchError(
                f"vector length {v.shape[0]} != matrix dimension {self.dimension}")
        return self.array.conj().T @ v

    def to_dense(self):
        return self.array.copy()

    def exact_matmul(self, other: "FiniteMatrix"):
        a, b = self.require_exact(), other.require_exact()
        n = self.dimension
        return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                     for i in range(n))

    def exact_power(self, k: int):
        self.require_exact()
        result = FiniteMatrix.identity(self.dimension)
        base = self
        while k:
            if k & 1:
                result = FiniteMatrix(result.exact_matmul(base))
            k >>= 1
            if k:
                base = FiniteMatrix(base.exact_matmul(base))
        return result.exact_entries

    def to_json(self):
        if self.exact_entries is not None:
            rows = [[_num_json(v) for v in row] for row in self.exact_entries]
        else:
            rows = [[_complex_json(v) for v in row] for row in self.array.tolist()]
        return {"kind": "finite_matrix", "params": {"entries": rows}}


class WeightedShift(OperatorExpr):
    """T e_n = w(n) e_{n+1} for a weight rule; acts on finite support."""

    dimension = None

    def __init__(self, weights: shiftlab.WeightRule):
        if not isinstance(weights, shiftlab.WeightRule):
            raise ConstraintError(f"weights must be a weight rule, got {type(weights).__name__}")
        self.weights = weights

    def apply(self, vec):
        v = _as_vector(vec)
        out = np.zeros(v.shape[0] + 1, dtype=complex)
        if v.shape[0]:
            w = np.array([self.weights.weight(n) for n in range(v.shape[0])])
            out[1:] = w * v
        return out

    def adjoint_apply(self, vec):
        v = _as_vector(vec)
        if v.shape[0] <= 1:
            return np.zeros(0, dtype=complex)
        w = np.array([self.weights.weight(n) for n in range(v.shape[0] - 1)])
        return w * v[1:]

    def to_json(self):
        return {"kind": "weighted_shift", "params": {"weights": self.weights.to_json()}}


class DiagonalEntries:
    """Diagonal data: an explicit prefix with constant tail, or a callable
    with a declared absolute supremum."""

    def __init__(self, prefix=(), tail=0, fn: Callable[[int], complex] | None = None,
                 abs_sup: float | None = None):
        if fn is not None:
            if abs_sup is None:
                raise ConstraintError("a callable diagonal needs a declared abs_sup")
            self.fn, self._abs_sup = fn, float(abs_sup)
            self.prefix, self.tail = None, None
            for n in (0, 1, 2, 7, 31, 255):
                if abs(complex(fn(n))) > self._abs_sup + 1e-12:
                    raise ConstraintError(f"diagonal entry at {n} exceeds the declared supremum")
        else:
            self.fn = None
            self.prefix = tuple(complex(p) for p in prefix)
            self.tail = complex(tail)
            self._abs_sup = max([abs(self.tail), *map(abs, self.prefix)], default=abs(self.tail))

    def entry(self, n: int) -> complex:
        if self.fn is not None:
            return complex(self.fn(n))
        return self.prefix[n] if n < len(self.prefix) else self.tail

    def sup_abs(self) -> float:
        return self._abs_sup


class Diagonal(OperatorExpr):
    """D e_n = d(n) e_n on l^2."""

    dimension = None

    def __init__(self, entries: DiagonalEntries):
        self.entries = entries

    def apply(self, vec):
        v = _as_vector(vec)
        d = np.array([self.entries.entry(n) for n in range(v.shape[0])])
        return d * v

    def adjoint_apply(self, vec):
        v = _as_vector(vec)
        d = np.array([self.entries.entry(n) for n in range(v.shape[0])])
        return d.conj() * v

    def to_json(self):
        if self.entries.fn is not None:
            raise ConstraintError("a callable diagonal is not serializable")
        return {"kind": "diagonal", "params": {
            "prefix": [_complex_json(p) for p in self.entries.prefix],
            "tail": _complex_json(self.entries.tail)}}


class MeasureMultiplication(OperatorExpr):
    """Multiplication by z on L^2 of a circle measure; vectors are trig polys."""

    dimension = None

    def __init__(self, measure: circlemeasure.CircleMeasure):
        self.measure = measure

    @staticmethod
    def _as_poly(vec) -> dict[int, complex]:
        if not isinstance(vec, dict):
            raise DimensionMismatchError(
                "multiplication operators act on {power: coefficient} dicts")
        return {int(p): complex(c) for p, c in vec.items()}

    def apply(self, vec):
        return {p + 1: c for p, c in self._as_poly(vec).items()}

    def adjoint_apply(self, vec):
        # the adjoint of multiplication by z is multiplication by conj(z)
        return {p - 1: c for p, c in self._as_poly(vec).items()}

    def to_json(self):
        return {"kind": "measure_multiplication",
                "params": {"measure": circlemeasure.measure_to_json(self.measure)}}


class DirectSum(OperatorExpr):
    """Block-diagonal sum; the left block must be finite so coordinates split."""

    def __init__(self, left: OperatorExpr, right: OperatorExpr):
        if left.dimension is None:
            raise ConstraintError("the left summand must be finite-dimensional")
        if isinstance(right, MeasureMultiplication):
            raise ConstraintError(
                "multiplication blocks use polynomial vectors and cannot be summed "
                "with array blocks")
        self.left, self.right = left, right
        self.dimension = (left.dimension + right.dimension
                          if right.dimension is not None else None)

    def _split(self, vec):
        v = _as_vector(vec)
        k = self.left.dimension
        if v.shape[0] < k:
            raise DimensionMismatchError(
                f"vector length {v.shape[0]} shorter than the left block ({k})")
        if self.dimension is not None and v.shape[0] != self.dimension:
            raise DimensionMismatchError(
                f"vector length {v.shape[0]} != dimension {self.dimension}")
        return v[:k], v[k:]

    def apply(self, vec):
        a, b = self._split(vec)
        return np.concatenate([self.left.apply(a), self.right.apply(b)])

    def adjoint_apply(self, vec):
        a, b = self._split(vec)
        return np.concatenate([self.left.adjoint_apply(a), self.right.adjoint_apply(b)])

    def to_dense(self):
        if self.dimension is None:
            raise StructureError("direct sum with an infinite block has no dense form")
        out = np.zeros((self.dimension, self.dimension), dtype=complex)
        k = self.left.dimension
        out[:k, :k] = self.left.to_dense()
        out[k:, k:] = self.right.to_dense()
        return out

    def to_json(self):
        return {"kind": "direct_sum", "params": {
            "left": self.left.to_json(), "right": self.right.to_json()}}


class Conjugate(OperatorExpr):
    """S A S^{-1} for an invertible finite S (condition number capped)."""

    def __init__(self, s, inner: OperatorExpr):
        s_mat = s if isinstance(s, FiniteMatrix) else FiniteMatrix(s)
        if inner.dimension is None:
            raise ConstraintError("only finite operators can be conjugated")
        if s_mat.dimension != inner.dimension:
            raise DimensionMismatchError(
                f"similarity is {s_mat.dimension}-dimensional but the operator "
                f"is {inner.dimension}-dimensional")
        cond = float(np.linalg.cond(s_mat.array))
        if not cond < _MAX_CONDITION:
            raise ConstraintError(
                f"similarity condition number {cond:.3e} exceeds {_MAX_CONDITION:.0e}")
        self.s = s_mat
        self.inner = inner
        self.dimension = inner.dimension
        self._s_inv = np.linalg.inv(s_mat.array)

    def apply(self, vec):
        v = _as_vector(vec)
        return self.s.array @ self.inner.apply(self._s_inv @ v)

    def adjoint_apply(self, vec):
        v = _as_vector(vec)
        return self.to_dense().conj().T @ v

    def to_dense(self):
        inner = (self.inner.to_dense() if not isinstance(self.inner, FiniteMatrix)
                 else self.inner.array)
        return self.s.array @ inner @ self._s_inv

    def exact_dense(self):
        """S A S^{-1} in Fraction arithmetic (rational real data only)."""
        if not isinstance(self.inner, FiniteMatrix):
            raise PrecisionError("exact conjugation needs a matrix inner operator")
        s = self.s.require_exact()
        a = self.inner.require_exact()
        s_inv = exact_inverse(s)
        sa = FiniteMatrix(s).exact_matmul(FiniteMatrix(a))
        return FiniteMatrix(sa).exact_matmul(FiniteMatrix(s_inv))

    def to_json(self):
        return {"kind": "conjugate", "params": {
            "s": self.s.to_json()["params"]["entries"], "inner": self.inner.to_json()}}


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def apply(op: OperatorExpr, vec):
    return op.apply(vec)


def adjoint_apply(op: OperatorExpr, vec):
    return op.adjoint_apply(vec)


def to_dense(op: OperatorExpr) -> np.ndarray:
    return op.to_dense()


def basis_vector(index: int, length: int) -> np.ndarray:
    if not 0 <= index < length:
        raise DimensionMismatchError(f"basis index {index} outside [0, {length})")
    v = np.zeros(length, dtype=complex)
    v[index] = 1.0
    return v


def inner_product(f, g, measure: circlemeasure.CircleMeasure | None = None) -> complex:
    """<f, g>, conjugate-linear in g.  With a measure, f and g are trig polys."""
    if measure is not None:
        value, _ = circlemeasure.multiplication_matrix_elements(measure, 0, f, g)
        return value
    fa, ga = _as_vector(f), _as_vector(g)
    if fa.shape[0] != ga.shape[0]:
        raise DimensionMismatchError(f"lengths differ: {fa.shape[0]} vs {ga.shape[0]}")
    return complex(np.vdot(ga, fa))  # np.vdot conjugates its first argument


def matrix_element_power(op: OperatorExpr, n: int, j: int, i: int) -> complex:
    """<T^n e_j, e_i> without forming T^n densely when structure allows."""
    if n < 0 or j < 0 or i < 0:
        raise ConstraintError("power and basis indices must be nonnegative")
    if isinstance(op, WeightedShift):
        if i != j + n:
            return 0j
        if n == 0:
            return 1 + 0j
        return complex(math.exp(op.weights.log_window(j, n)))
    if isinstance(op, Diagonal):
        return op.entries.entry(j) ** n if i == j else 0j
    if isinstance(op, MeasureMultiplication):
        value, _ = circlemeasure.multiplication_matrix_elements(
            op.measure, n, {j: 1.0}, {i: 1.0})
        return value
    if isinstance(op, DirectSum):
        k = op.left.dimension
        if (i < k) != (j < k):
            return 0j
        if i < k:
            return matrix_element_power(op.left, n, j, i)
        return matrix_element_power(op.right, n, j - k, i - k)
    if op.dimension is not None:
        if i >= op.dimension or j >= op.dimension:
            raise DimensionMismatchError(f"basis index outside dimension {op.dimension}")
        power = np.linalg.matrix_power(op.to_dense(), n)
        return complex(power[i, j])
    raise StructureError(f"no matrix-element rule for {type(op).__name__}")


def power_norm_log(op: OperatorExpr, k: int) -> float:
    """log ||T^k||, exact for structured operators."""
    if k < 0:
        raise ConstraintError("power must be nonnegative")
    if k == 0:
        return 0.0
    if isinstance(op, WeightedShift):
        return shiftlab.shift_power_norm(op.weights, k).log_norm
    if isinstance(op, Diagonal):
        return k * math.log(op.entries.sup_abs()) if op.entries.sup_abs() > 0 else -math.inf
    if isinstance(op, MeasureMultiplication):
        return 0.0  # |z| = 1 on the support, so every power is an isometry
    if isinstance(op, DirectSum):
        return max(power_norm_log(op.left, k), power_norm_log(op.right, k))
    if op.dimension is not None:
        power = np.linalg.matrix_power(op.to_dense(), k)
        norm = float(np.linalg.norm(power, 2))
        return math.log(norm) if norm > 0 else -math.inf
    raise StructureError(f"no power-norm rule for {type(op).__name__}")


# ---------------------------------------------------------------------------
# exact linear algebra on Fraction rows
# ---------------------------------------------------------------------------

def exact_inverse(rows):
    """Invert a square matrix of Fractions by Gaussian elimination."""
    n = len(rows)
    aug = [list(row) + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(rows)]
    if any(len(r) != 2 * n for r in aug):
        raise DimensionMismatchError("matrix must be square")
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise ConstraintError("matrix is singular over the rationals")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = Fraction(1) / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                factor = aug[r][col]
                aug[r] = [a - factor * b for a, b in zip(aug[r], aug[col])]
    return tuple(tuple(row[n:]) for row in aug)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def _num_json(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    return v


def _complex_json(v):
    c = complex(v)
    return float(c.real) if c.imag == 0 else [float(c.real), float(c.imag)]


def _entry_from_json(v):
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, (list, tuple)):
        return complex(v[0], v[1])
    return v


def operator_to_json(op: OperatorExpr) -> dict:
    return op.to_json()


def operator_from_json(data: dict) -> OperatorExpr:
    kind = data.get("kind")
    params = data.get("params", {})
    if kind == "finite_matrix":
        return FiniteMatrix([[_entry_from_json(v) for v in row]
                             for row in params["entries"]])
    if kind == "weighted_shift":
        return WeightedShift(shiftlab.weight_rule_from_json(params["weights"]))
    if kind == "diagonal":
        return Diagonal(DiagonalEntries(
            prefix=[_entry_from_json(v) for v in params.get("prefix", ())],
            tail=_entry_from_json(params.get("tail", 0))))
    if kind == "measure_multiplication":
        return MeasureMultiplication(circlemeasure.measure_from_json(params["measure"]))
    if kind == "direct_sum":
        return DirectSum(operator_from_json(params["left"]),
                         operator_from_json(params["right"]))
    if kind == "conjugate":
        return Conjugate(FiniteMatrix([[_entry_from_json(v) for v in row]
                                       for row in params["s"]]),
                         operator_from_json(params["inner"]))
    raise ConstraintError(f"unknown operator kind {kind!r}")
