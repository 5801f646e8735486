"""Dense matrices over F_2 with rows stored as integer bitsets.

Bit ``j`` of ``rows[i]`` is the entry in row i, column j.  Python integers
act as word-parallel bit vectors, so elimination is one XOR per row.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

__all__ = ["MatrixF2", "NonSquare", "rank_f2", "kernel_basis_f2", "transpose", "MAX_DIM"]

MAX_DIM = 64


class NonSquare(ValueError):
    pass


@dataclass(frozen=True)
class MatrixF2:
    nrows: int
    ncols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if not (0 <= self.nrows <= MAX_DIM and 0 <= self.ncols <= MAX_DIM):
            raise ValueError(f"dimensions limited to {MAX_DIM}, got {self.nrows}x{self.ncols}")
        if len(self.rows) != self.nrows:
            raise ValueError("row count mismatch")
        mask = (1 << self.ncols) - 1
        if any(r & ~mask for r in self.rows):
            raise ValueError("row has bits outside the column range")

    @classmethod
    def from_lists(cls, entries: Sequence[Sequence[int]]) -> "MatrixF2":
        nrows = len(entries)
        ncols = len(entries[0]) if nrows else 0
        rows = []
        for row in entries:
            if len(row) != ncols:
                raise ValueError("ragged matrix")
            rows.append(sum(1 << j for j, x in enumerate(row) if x % 2))
        return cls(nrows, ncols, tuple(rows))

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "MatrixF2":
        return cls(nrows, ncols, (0,) * nrows)

    @classmethod
    def identity(cls, n: int) -> "MatrixF2":
        return cls(n, n, tuple(1 << i for i in range(n)))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(ij)
        return self.rows[i] >> j & 1

    def to_lists(self) -> list[list[int]]:
        return [[r >> j & 1 for j in range(self.ncols)] for r in self.rows]

    def apply(self, x: int) -> int:
        """Matrix times column vector ``x`` (a bitset over columns), as a bitset."""
        out = 0
        for i, r in enumerate(self.rows):
            if (r & x).bit_count() & 1:
                out |= 1 << i
        return out

    def __add__(self, other: "MatrixF2") -> "MatrixF2":
        if (self.nrows, self.ncols) != (other.nrows, other.ncols):
            raise ValueError("shape mismatch")
        return MatrixF2(self.nrows, self.ncols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))


def _echelon(rows: Sequence[int]) -> list[tuple[int, int]]:
    """Reduced row echelon form as ``(pivot_column, row)`` pairs."""
    pivots: list[tuple[int, int]] = []
    for r in rows:
        for col, prow in pivots:
            if r >> col & 1:
                r ^= prow
        if r:
            col = (r & -r).bit_length() - 1
            pivots = [(c, pr ^ r if pr >> col & 1 else pr) for c, pr in pivots]
            pivots.append((col, r))
    return pivots


def rank_f2(m: MatrixF2) -> int:
    return len(_echelon(m.rows))


def kernel_basis_f2(m: MatrixF2) -> list[int]:
    """Basis of the right kernel ``{x : m x = 0}`` as column bitsets."""
    if m.nrows != m.ncols:
        raise NonSquare(f"kernel_basis_f2 expects a square matrix, got {m.nrows}x{m.ncols}")
    pivots = _echelon(m.rows)
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for free in range(m.ncols):
        if free in pivot_cols:
            continue
        x = 1 << free
        for col, row in pivots:
            if row >> free & 1:
                x |= 1 << col
        basis.append(x)
    return basis


def transpose(m: MatrixF2) -> MatrixF2:
    cols = []
    for j in range(m.ncols):
        cols.append(sum((r >> j & 1) << i for i, r in enumerate(m.rows)))
    return MatrixF2(m.ncols, m.nrows, tuple(cols))
