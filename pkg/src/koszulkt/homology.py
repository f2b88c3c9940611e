"""Exact integer linear algebra: Smith normal form and homology of free Z-complexes."""
from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Sequence

from .cartan import CapExceededError

DEFAULT_CAP_CELLS = 4_000_000
CAP_ENV = "KOSZULKT_CAP_CELLS"


def cap_cells() -> int:
    """Global limit on ``rows * cols`` of any assembled matrix."""
    raw = os.environ.get(CAP_ENV)
    return int(raw) if raw else DEFAULT_CAP_CELLS


def check_cells(rows: int, cols: int, what: str = "matrix") -> None:
    cap = cap_cells()
    if rows * cols > cap:
        raise CapExceededError(f"{what} of shape {rows}x{cols} exceeds the cap of {cap} cells ({CAP_ENV})")


class ComplexError(ValueError):
    """Matrices do not form a chain complex."""


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix with explicit shape (so that 0 x n matrices make sense)."""

    rows: int
    cols: int
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if len(self.entries) != self.rows or any(len(r) != self.cols for r in self.entries):
            raise ValueError(f"entries do not match shape {self.rows}x{self.cols}")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> IntMatrix:
        rows = [tuple(int(x) for x in r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        return cls(len(rows), cols, tuple(rows))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls(rows, cols, tuple((0,) * cols for _ in range(rows)))

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls(n, n, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.entries)) if other.rows else [()] * other.cols
        return IntMatrix(
            self.rows,
            other.cols,
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.entries),
        )

    def transpose(self) -> IntMatrix:
        return IntMatrix(self.cols, self.rows, tuple(zip(*self.entries)) if self.rows else tuple(() for _ in range(self.cols)))

    def is_zero(self) -> bool:
        return all(x == 0 for row in self.entries for x in row)

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def as_matrix(a: IntMatrix | Sequence[Sequence[int]]) -> IntMatrix:
    return a if isinstance(a, IntMatrix) else IntMatrix.from_rows(a)


@dataclass(frozen=True)
class FgAbGroup:
    """``Z^free_rank + Z/t_1 + ... + Z/t_m`` with ``t_1 | t_2 | ...``."""

    free_rank: int = 0
    torsion: tuple[int, ...] = ()

    def __post_init__(self):
        if self.free_rank < 0:
            raise ValueError("negative free rank")
        for t in self.torsion:
            if t < 2:
                raise ValueError(f"invalid invariant factor {t}")
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors {self.torsion} do not form a divisibility chain")

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def invariant_factors(self) -> list[int]:
        """Invariant factors with free summands written as 0."""
        return list(self.torsion) + [0] * self.free_rank

    def __str__(self) -> str:
        parts = [f"Z/{t}" for t in self.torsion]
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


@dataclass(frozen=True)
class SmithForm:
    U: IntMatrix
    S: IntMatrix
    V: IntMatrix

    @property
    def diagonal(self) -> list[int]:
        return [self.S[i, i] for i in range(min(self.S.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)

    def __iter__(self):
        return iter((self.U, self.S, self.V))


def _reduce(a: IntMatrix, side: list[list[int]] | None):
    """Diagonalise ``a`` in place of a copy; row operations are mirrored on ``side``.

    Returns the reduced matrix, the transformed ``side`` and the column transform ``V``.
    """
    m, n = a.shape
    A = [list(r) for r in a.entries]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if side is not None:
            side[i], side[j] = side[j], side[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, f):
        # row_dst += f * row_src
        A[dst] = [x + f * y for x, y in zip(A[dst], A[src])]
        if side is not None:
            side[dst] = [x + f * y for x, y in zip(side[dst], side[src])]

    def add_col(src, dst, f):
        for row in A:
            if row[src]:
                row[dst] += f * row[src]
        for row in V:
            if row[src]:
                row[dst] += f * row[src]

    for t in range(min(m, n)):
        while True:
            best = None
            for i in range(t, m):
                row = A[i]
                for j in range(t, n):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
                        if best[0] == 1:
                            break
                if best is not None and best[0] == 1:
                    break
            if best is None:
                break
            _, pi, pj = best
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(t, i, -(A[i][t] // p))
                    dirty |= A[i][t] != 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(t, j, -(A[t][j] // p))
                    dirty |= A[t][j] != 0
            if dirty:
                continue
            if abs(p) == 1:
                break
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            if side is not None:
                side[t] = [-x for x in side[t]]
    return A, side, V


def smith_normal_form(a: IntMatrix | Sequence[Sequence[int]]) -> SmithForm:
    """Return ``U, S, V`` with ``U @ A @ V == S`` and ``S`` in Smith normal form.

    ``U`` and ``V`` are unimodular.  The pivot at each stage is the entry of
    smallest absolute value in the remaining block, ties broken in row-major
    order, which keeps the output deterministic.
    """
    a = as_matrix(a)
    m, n = a.shape
    S, U, V = _reduce(a, [[int(i == j) for j in range(m)] for i in range(m)])
    return SmithForm(
        IntMatrix.from_rows(U, m),
        IntMatrix.from_rows(S, n),
        IntMatrix.from_rows(V, n),
    )


def invariant_factors(a: IntMatrix | Sequence[Sequence[int]]) -> list[int]:
    """Diagonal of the Smith form (zeros included), without tracking ``U``."""
    a = as_matrix(a)
    S, _, _ = _reduce(a, None)
    return [S[i][i] for i in range(min(a.shape))]


def rank(a: IntMatrix | Sequence[Sequence[int]]) -> int:
    return sum(1 for d in invariant_factors(a) if d)


def kernel_rank(a: IntMatrix | Sequence[Sequence[int]]) -> int:
    a = as_matrix(a)
    return a.cols - rank(a)


def kernel_basis(a: IntMatrix | Sequence[Sequence[int]]) -> list[list[int]]:
    """A Z-basis of the (saturated) kernel lattice, as a list of column vectors."""
    a = as_matrix(a)
    S, _, V = _reduce(a, None)
    r = sum(1 for i in range(min(a.shape)) if S[i][i])
    return [[V[i][j] for i in range(a.cols)] for j in range(r, a.cols)]


def solve_integer_many(a: IntMatrix | Sequence[Sequence[int]], bs: Sequence[Sequence[int]]) -> list[list[int] | None]:
    """Integer solutions of ``A x = b`` for each ``b`` (``None`` where none exists)."""
    a = as_matrix(a)
    m, n = a.shape
    for b in bs:
        if len(b) != m:
            raise ValueError("right-hand side has wrong length")
    side = [[b[i] for b in bs] for i in range(m)]
    S, ub, V = _reduce(a, side)
    out: list[list[int] | None] = []
    for col in range(len(bs)):
        y = [0] * n
        ok = True
        for i in range(m):
            d = S[i][i] if i < n else 0
            v = ub[i][col]
            if d == 0:
                if v:
                    ok = False
                    break
            elif v % d:
                ok = False
                break
            else:
                y[i] = v // d
        out.append([sum(V[i][j] * y[j] for j in range(n)) for i in range(n)] if ok else None)
    return out


def solve_integer(a: IntMatrix | Sequence[Sequence[int]], b: Sequence[int]) -> list[int] | None:
    """Some integer ``x`` with ``A x = b``, or ``None`` if no integer solution exists."""
    return solve_integer_many(a, [b])[0]


def hermite_normal_form(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Zero rows are dropped; pivots are positive and entries above each pivot
    are reduced into ``[0, pivot)``.  Two generating sets span the same
    lattice iff their Hermite forms agree.
    """
    pending = [list(r) for r in rows if any(r)]
    if not pending:
        return []
    n = len(pending[0])
    out: list[list[int]] = []
    for col in range(n):
        hits = [r for r in pending if r[col]]
        pending = [r for r in pending if not r[col]]
        while len(hits) > 1:
            hits.sort(key=lambda r: abs(r[col]))
            piv = hits[0]
            reduced = [[x - (r[col] // piv[col]) * y for x, y in zip(r, piv)] for r in hits[1:]]
            pending += [r for r in reduced if not r[col] and any(r)]
            hits = [piv] + [r for r in reduced if r[col]]
        if not hits:
            continue
        piv = hits[0] if hits[0][col] > 0 else [-x for x in hits[0]]
        for k, prev in enumerate(out):
            q = prev[col] // piv[col]
            out[k] = [x - q * y for x, y in zip(prev, piv)]
        out.append(piv)
    return out


def homology_at(d_in: IntMatrix | Sequence[Sequence[int]], d_out: IntMatrix | Sequence[Sequence[int]]) -> FgAbGroup:
    """``ker(d_out) / im(d_in)`` for ``C_{k+1} --d_in--> C_k --d_out--> C_{k-1}``."""
    d_in, d_out = as_matrix(d_in), as_matrix(d_out)
    if d_out.cols != d_in.rows:
        raise ComplexError(f"shapes {d_in.shape} and {d_out.shape} are not composable")
    if not (d_out @ d_in).is_zero():
        raise ComplexError("d_out @ d_in != 0")
    n = d_in.rows
    r_out = rank(d_out)
    factors = [d for d in invariant_factors(d_in) if d]
    torsion = tuple(d for d in factors if d > 1)
    return FgAbGroup(n - r_out - len(factors), torsion)
