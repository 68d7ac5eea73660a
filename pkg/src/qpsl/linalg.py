"""Exact rational matrices.

A small immutable matrix type over the rationals.  Entries are stored as
:class:`fractions.Fraction`; echelon forms, ranks and kernels are delegated to
sympy's ``DomainMatrix`` over ``QQ``, which handles empty shapes correctly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

Scalar = Fraction


def _frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    # gmpy2 mpq, sympy Rational, str
    numerator = getattr(value, "numerator", None)
    denominator = getattr(value, "denominator", None)
    if numerator is not None and denominator is not None and not isinstance(value, str):
        return Fraction(int(numerator), int(denominator))
    return Fraction(value)


@dataclass(frozen=True)
class Matrix:
    """Immutable ``nrows x ncols`` matrix with rational entries."""

    nrows: int
    ncols: int
    rows: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        if len(self.rows) != self.nrows or any(len(r) != self.ncols for r in self.rows):
            raise ValueError("row data does not match the declared shape")

    # construction -----------------------------------------------------
    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ncols: int | None = None) -> "Matrix":
        rows = [tuple(_frac(x) for x in r) for r in rows]
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(rows[0])
        return cls(len(rows), ncols, tuple(rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "Matrix":
        zero = Fraction(0)
        return cls(nrows, ncols, tuple((zero,) * ncols for _ in range(nrows)))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(
            n,
            n,
            tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)),
        )

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "Matrix":
        ncols = len(columns)
        return cls(
            nrows,
            ncols,
            tuple(tuple(_frac(columns[j][i]) for j in range(ncols)) for i in range(nrows)),
        )

    @classmethod
    def _from_domain(cls, dm: DomainMatrix) -> "Matrix":
        nrows, ncols = dm.shape
        return cls(nrows, ncols, tuple(tuple(_frac(x) for x in r) for r in dm.to_list()))

    def _domain(self) -> DomainMatrix:
        return DomainMatrix(
            [[QQ(x.numerator, x.denominator) for x in r] for r in self.rows],
            (self.nrows, self.ncols),
            QQ,
        )

    # basic access -------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self.rows[i][j]

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def to_lists(self) -> list[list[Fraction]]:
        return [list(r) for r in self.rows]

    # arithmetic --------------------------------------------------------
    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        other_cols = other.columns()
        rows = []
        for r in self.rows:
            nonzero = [(k, x) for k, x in enumerate(r) if x]
            rows.append(
                tuple(sum((x * col[k] for k, x in nonzero), Fraction(0)) for col in other_cols)
            )
        return Matrix(self.nrows, other.ncols, tuple(rows))

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch in addition")
        return Matrix(
            self.nrows,
            self.ncols,
            tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(self.rows, other.rows)),
        )

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def scale(self, factor) -> "Matrix":
        factor = _frac(factor)
        return Matrix(self.nrows, self.ncols, tuple(tuple(factor * x for x in r) for r in self.rows))

    def transpose(self) -> "Matrix":
        return Matrix(self.ncols, self.nrows, tuple(self.columns()))

    def apply(self, vector: Sequence) -> tuple[Fraction, ...]:
        vector = [_frac(v) for v in vector]
        return tuple(sum((x * v for x, v in zip(r, vector)), Fraction(0)) for r in self.rows)

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "Matrix":
        return Matrix(
            len(row_idx),
            len(col_idx),
            tuple(tuple(self.rows[i][j] for j in col_idx) for i in row_idx),
        )

    # linear algebra via DomainMatrix -------------------------------------------
    def rank(self) -> int:
        if self.nrows == 0 or self.ncols == 0:
            return 0
        return self._domain().rank()

    def rref(self) -> tuple["Matrix", tuple[int, ...]]:
        if self.nrows == 0 or self.ncols == 0:
            return self, ()
        reduced, pivots = self._domain().rref()
        return Matrix._from_domain(reduced), tuple(pivots)

    def nullspace(self) -> list[tuple[Fraction, ...]]:
        """Basis of ``{x : self @ x = 0}`` as a list of vectors."""
        if self.ncols == 0:
            return []
        if self.nrows == 0:
            return [tuple(Fraction(int(i == j)) for j in range(self.ncols)) for i in range(self.ncols)]
        basis = self._domain().nullspace()
        return [tuple(_frac(x) for x in r) for r in basis.to_list()]

    def solve(self, rhs: Sequence) -> tuple[Fraction, ...] | None:
        """One solution of ``self @ x = rhs`` or ``None`` when inconsistent."""
        rhs = [_frac(v) for v in rhs]
        augmented = Matrix(
            self.nrows,
            self.ncols + 1,
            tuple(r + (b,) for r, b in zip(self.rows, rhs)),
        )
        reduced, pivots = augmented.rref()
        if self.ncols in pivots:
            return None
        solution = [Fraction(0)] * self.ncols
        for row, col in enumerate(pivots):
            solution[col] = reduced.rows[row][self.ncols]
        return tuple(solution)

    def inverse(self) -> "Matrix":
        if self.nrows != self.ncols:
            raise ValueError("only square matrices are invertible")
        if self.nrows == 0:
            return self
        return Matrix._from_domain(self._domain().inv())

    def hstack(self, *others: "Matrix") -> "Matrix":
        rows = list(self.rows)
        ncols = self.ncols
        for other in others:
            if other.nrows != self.nrows:
                raise ValueError("row count mismatch in hstack")
            rows = [r + s for r, s in zip(rows, other.rows)]
            ncols += other.ncols
        return Matrix(self.nrows, ncols, tuple(rows))

    def vstack(self, *others: "Matrix") -> "Matrix":
        rows = list(self.rows)
        for other in others:
            if other.ncols != self.ncols:
                raise ValueError("column count mismatch in vstack")
            rows.extend(other.rows)
        return Matrix(len(rows), self.ncols, tuple(rows))


def block_matrix(blocks: Sequence[Sequence[Matrix]]) -> Matrix:
    """Assemble a matrix from a rectangular grid of blocks."""
    row_parts = [blocks_row[0].hstack(*blocks_row[1:]) for blocks_row in blocks]
    return row_parts[0].vstack(*row_parts[1:])


def span_basis(vectors: Iterable[Sequence], dim: int) -> list[tuple[Fraction, ...]]:
    """Row-reduced basis of the span of ``vectors`` inside ``QQ^dim``."""
    vectors = [tuple(_frac(x) for x in v) for v in vectors]
    if not vectors or dim == 0:
        return []
    reduced, pivots = Matrix(len(vectors), dim, tuple(vectors)).rref()
    return [reduced.rows[i] for i in range(len(pivots))]


__all__ = ["Matrix", "block_matrix", "span_basis"]
