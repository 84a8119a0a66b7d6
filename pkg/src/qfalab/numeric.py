"""Scalar tower and dense linear algebra for the automata workbench.

Two scalar kinds are supported and never mixed silently:

* ``rational``  -- arbitrary-precision ``fractions.Fraction`` values; all
  arithmetic is exact and equality tests are true equalities.
* ``float``     -- machine floats paired with a global zero tolerance
  ``EPSILON``; a float ``x`` counts as zero iff ``abs(x) <= EPSILON``.

An operation that receives one rational and one float operand raises
``KindMismatchError`` instead of promoting.  Conversions are explicit
(``to_float`` on vectors and matrices).
"""

from __future__ import annotations

import math
import os
from fractions import Fraction
from typing import Iterable, Sequence, Union

RATIONAL = "rational"
FLOAT = "float"

#: Default zero tolerance for float scalars.  The environment variable
#: QFA_EPSILON overrides it at import time; callers may also pass an explicit
#: tolerance to any predicate that consults it.
EPSILON = float(os.environ.get("QFA_EPSILON", "1e-9"))

Scalar = Union[Fraction, float]


class KindMismatchError(TypeError):
    """Raised when rational and float values meet in one operation."""


def scalar_kind(x: Scalar) -> str:
    if isinstance(x, Fraction):
        return RATIONAL
    if isinstance(x, float):
        return FLOAT
    raise TypeError(f"not a workbench scalar: {x!r} of type {type(x).__name__}")


def same_kind(*kinds: str) -> str:
    first = kinds[0]
    for k in kinds[1:]:
        if k != first:
            raise KindMismatchError(f"mixed scalar kinds: {first} vs {k}")
    return first


def zero_tolerance(eps: float | None = None) -> float:
    return EPSILON if eps is None else eps


def is_zero(x: Scalar, eps: float | None = None) -> bool:
    """Exact zero test for rationals, tolerance test for floats."""
    if isinstance(x, Fraction):
        return x == 0
    return abs(x) <= zero_tolerance(eps)


def format_scalar(x: Scalar) -> str:
    """Rationals render as ``p/q`` (``q`` omitted when 1), floats as repr."""
    if isinstance(x, Fraction):
        if x.denominator == 1:
            return str(x.numerator)
        return f"{x.numerator}/{x.denominator}"
    return repr(x)


def parse_rational(text: Union[str, int]) -> Fraction:
    """Parse ``p/q`` or integer text into a Fraction in lowest terms."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational literal: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"not a rational literal: {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def coerce_scalar(value, kind: str) -> Scalar:
    """Convert an int/Fraction/float literal to the given kind; cross-kind
    values (a float into rational, a Fraction into float) are rejected."""
    return _coerce(value, kind)


def _coerce(value, kind: str):
    if kind == RATIONAL:
        if isinstance(value, float):
            raise KindMismatchError(
                f"float entry {value!r} in a rational container; convert explicitly"
            )
        if isinstance(value, (int, Fraction)):
            return Fraction(value)
        raise TypeError(f"cannot use {value!r} as a rational entry")
    if kind == FLOAT:
        if isinstance(value, Fraction):
            raise KindMismatchError(
                f"rational entry {value!r} in a float container; convert explicitly"
            )
        if isinstance(value, (int, float)):
            return float(value)
        raise TypeError(f"cannot use {value!r} as a float entry")
    raise ValueError(f"unknown scalar kind {kind!r}")


def _infer_kind(values) -> str:
    for v in values:
        if isinstance(v, Fraction):
            return RATIONAL
        if isinstance(v, float):
            return FLOAT
    # all plain ints: treat as rational by default
    return RATIONAL


class RowVec:
    """Immutable 1 x n vector of one scalar kind."""

    __slots__ = ("entries", "kind")

    def __init__(self, entries: Iterable, kind: str | None = None):
        raw = tuple(entries)
        if not raw:
            raise ValueError("vectors must be nonempty")
        k = kind if kind is not None else _infer_kind(raw)
        object.__setattr__(self, "entries", tuple(_coerce(v, k) for v in raw))
        object.__setattr__(self, "kind", k)

    def __setattr__(self, name, value):
        raise AttributeError("RowVec is immutable")

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, RowVec)
            and self.kind == other.kind
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.kind, self.entries))

    def __repr__(self):
        return f"RowVec([{', '.join(format_scalar(v) for v in self.entries)}])"

    def to_float(self) -> "RowVec":
        return RowVec([float(v) for v in self.entries], FLOAT)

    def transpose(self) -> "ColVec":
        return ColVec(self.entries, self.kind)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return row_times_mat(self, other)
        if isinstance(other, ColVec):
            return dot(self, other)
        return NotImplemented


class ColVec:
    """Immutable n x 1 vector of one scalar kind."""

    __slots__ = ("entries", "kind")

    def __init__(self, entries: Iterable, kind: str | None = None):
        raw = tuple(entries)
        if not raw:
            raise ValueError("vectors must be nonempty")
        k = kind if kind is not None else _infer_kind(raw)
        object.__setattr__(self, "entries", tuple(_coerce(v, k) for v in raw))
        object.__setattr__(self, "kind", k)

    def __setattr__(self, name, value):
        raise AttributeError("ColVec is immutable")

    def __len__(self):
        return len(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __iter__(self):
        return iter(self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, ColVec)
            and self.kind == other.kind
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.kind, self.entries))

    def __repr__(self):
        return f"ColVec([{', '.join(format_scalar(v) for v in self.entries)}])"

    def to_float(self) -> "ColVec":
        return ColVec([float(v) for v in self.entries], FLOAT)

    def transpose(self) -> "RowVec":
        return RowVec(self.entries, self.kind)

    def norm_sq(self) -> Scalar:
        return sum(v * v for v in self.entries)


class Matrix:
    """Immutable dense rows x cols matrix of one scalar kind."""

    __slots__ = ("entries", "rows", "cols", "kind")

    def __init__(self, entries: Iterable[Iterable], kind: str | None = None):
        grid = tuple(tuple(row) for row in entries)
        if not grid or not grid[0]:
            raise ValueError("matrix dimensions must be positive")
        width = len(grid[0])
        if any(len(row) != width for row in grid):
            raise ValueError("ragged matrix rows")
        k = kind if kind is not None else _infer_kind(v for row in grid for v in row)
        coerced = tuple(tuple(_coerce(v, k) for v in row) for row in grid)
        object.__setattr__(self, "entries", coerced)
        object.__setattr__(self, "rows", len(coerced))
        object.__setattr__(self, "cols", width)
        object.__setattr__(self, "kind", k)

    def __setattr__(self, name, value):
        raise AttributeError("Matrix is immutable")

    @classmethod
    def rational(cls, entries) -> "Matrix":
        return cls(entries, RATIONAL)

    @classmethod
    def floats(cls, entries) -> "Matrix":
        return cls(entries, FLOAT)

    @classmethod
    def identity(cls, n: int, kind: str = RATIONAL) -> "Matrix":
        one = Fraction(1) if kind == RATIONAL else 1.0
        zero = Fraction(0) if kind == RATIONAL else 0.0
        return cls(
            [[one if i == j else zero for j in range(n)] for i in range(n)], kind
        )

    @classmethod
    def zeros(cls, rows: int, cols: int, kind: str = RATIONAL) -> "Matrix":
        zero = Fraction(0) if kind == RATIONAL else 0.0
        return cls([[zero] * cols for _ in range(rows)], kind)

    def __eq__(self, other):
        return (
            isinstance(other, Matrix)
            and self.kind == other.kind
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.kind, self.entries))

    def __repr__(self):
        body = "; ".join(
            " ".join(format_scalar(v) for v in row) for row in self.entries
        )
        return f"Matrix({self.rows}x{self.cols} {self.kind}: {body})"

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def row(self, i: int) -> RowVec:
        return RowVec(self.entries[i], self.kind)

    def col(self, j: int) -> ColVec:
        return ColVec([row[j] for row in self.entries], self.kind)

    def transpose(self) -> "Matrix":
        return Matrix(zip(*self.entries), self.kind)

    def to_float(self) -> "Matrix":
        return Matrix([[float(v) for v in row] for row in self.entries], FLOAT)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            return mat_mul(self, other)
        if isinstance(other, ColVec):
            return mat_times_col(self, other)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, Matrix):
            return mat_add(self, other)
        return NotImplemented


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    """Standard matrix product; exact when both operands are rational."""
    if a.cols != b.rows:
        raise ValueError(f"dimension mismatch: {a.rows}x{a.cols} @ {b.rows}x{b.cols}")
    same_kind(a.kind, b.kind)
    bt = tuple(zip(*b.entries))
    out = [
        [sum(x * y for x, y in zip(row, col)) for col in bt] for row in a.entries
    ]
    return Matrix(out, a.kind)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise ValueError("dimension mismatch in matrix sum")
    same_kind(a.kind, b.kind)
    return Matrix(
        [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a.entries, b.entries)],
        a.kind,
    )


def mat_pow(m: Matrix, k: int) -> Matrix:
    if not m.is_square():
        raise ValueError("matrix power needs a square matrix")
    if k < 0:
        raise ValueError("negative matrix power")
    acc = Matrix.identity(m.rows, m.kind)
    for _ in range(k):
        acc = mat_mul(acc, m)
    return acc


def row_times_mat(v: RowVec, m: Matrix) -> RowVec:
    if len(v) != m.rows:
        raise ValueError(f"dimension mismatch: 1x{len(v)} @ {m.rows}x{m.cols}")
    same_kind(v.kind, m.kind)
    cols = tuple(zip(*m.entries))
    return RowVec(
        [sum(x * y for x, y in zip(v.entries, col)) for col in cols], v.kind
    )


def mat_times_col(m: Matrix, v: ColVec) -> ColVec:
    if m.cols != len(v):
        raise ValueError(f"dimension mismatch: {m.rows}x{m.cols} @ {len(v)}x1")
    same_kind(m.kind, v.kind)
    return ColVec(
        [sum(x * y for x, y in zip(row, v.entries)) for row in m.entries], m.kind
    )


def dot(row: RowVec, col: ColVec) -> Scalar:
    if len(row) != len(col):
        raise ValueError("dimension mismatch in dot product")
    same_kind(row.kind, col.kind)
    return sum(x * y for x, y in zip(row.entries, col.entries))


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; block (i,j) is a[i,j] * b."""
    same_kind(a.kind, b.kind)
    out = []
    for arow in a.entries:
        for brow in b.entries:
            out.append([x * y for x in arow for y in brow])
    return Matrix(out, a.kind)


def direct_sum(a: Matrix, b: Matrix) -> Matrix:
    same_kind(a.kind, b.kind)
    zero = Fraction(0) if a.kind == RATIONAL else 0.0
    out = [list(row) + [zero] * b.cols for row in a.entries]
    out += [[zero] * a.cols + list(row) for row in b.entries]
    return Matrix(out, a.kind)


def is_stochastic(m: Matrix) -> bool:
    """True iff ``m`` is square, rational, entrywise in [0,1], rows sum to 1.

    Stochasticity is an exact property, so float matrices are rejected.
    """
    if m.kind != RATIONAL:
        raise KindMismatchError("stochasticity is checked exactly; rational kind required")
    if not m.is_square():
        raise ValueError("stochasticity is defined for square matrices")
    for row in m.entries:
        if any(v < 0 or v > 1 for v in row):
            return False
        if sum(row) != 1:
            return False
    return True


def is_unitary_within(m: Matrix, tol: float) -> bool:
    """Real-orthogonality test: max-norm of (m @ m^T - I) <= tol.

    Works for both kinds; a rational matrix is tested with exact products
    against the given tolerance.
    """
    if not m.is_square():
        return False
    gram = mat_mul(m, m.transpose())
    for i, row in enumerate(gram.entries):
        for j, v in enumerate(row):
            target = 1 if i == j else 0
            if abs(v - target) > tol:
                return False
    return True


def max_abs_diff(a: Matrix, b: Matrix) -> float:
    """Largest entrywise |a - b| as a float; operands must share kind."""
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise ValueError("dimension mismatch")
    same_kind(a.kind, b.kind)
    return max(
        float(abs(x - y)) for ra, rb in zip(a.entries, b.entries) for x, y in zip(ra, rb)
    )


def float_norm(values: Sequence[float]) -> float:
    return math.sqrt(sum(v * v for v in values))
