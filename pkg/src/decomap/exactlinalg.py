"""Exact linear algebra over GF(2) and the rationals.

All algebra in this package is exact: GF(2) matrices are uint8 arrays run
through the packed elimination kernels in :mod:`decomap.gf2kernel`, and
rational matrices hold :class:`fractions.Fraction` entries (always in
lowest terms with positive denominator).  No floating point appears
anywhere, so matrix identities used by the test suites can be checked with
``==``.

The pivot rule is fixed (leftmost eligible column, topmost nonzero row),
which together with full reduction makes every result here — and every
homology basis built on top — reproducible bit for bit.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .gf2kernel import gf2_matmul, gf2_rref

GF2 = "gf2"
QQ = "q"

_FIELDS = (GF2, QQ)


class NotInSpan(Exception):
    """Target vector lies outside the span of the given generators."""


def _check_field(field):
    if field not in _FIELDS:
        raise ValueError(f"unknown field {field!r}; expected 'gf2' or 'q'")


def _coerce_entry(x, field):
    if field == GF2:
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise ValueError(f"{x} is not a GF(2) scalar")
            x = x.numerator
        return int(x) & 1
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction(x).limit_denominator(10**12)
    return Fraction(x)


class Matrix:
    """Immutable-by-convention dense matrix over GF(2) or Q.

    GF(2) data is a uint8 array of 0/1; rational data is an object array of
    Fractions.  Dimensions are fixed at construction.
    """

    __slots__ = ("field", "data")

    def __init__(self, data, field):
        _check_field(field)
        self.field = field
        a = np.asarray(data)
        if a.ndim != 2:
            raise ValueError("Matrix needs 2-dimensional data")
        if field == GF2:
            self.data = np.ascontiguousarray(a.astype(np.uint8) & 1)
        else:
            out = np.empty(a.shape, dtype=object)
            for i in range(a.shape[0]):
                for j in range(a.shape[1]):
                    out[i, j] = _coerce_entry(a[i, j], QQ)
            self.data = out

    @classmethod
    def _wrap(cls, raw, field):
        m = object.__new__(cls)
        m.field = field
        m.data = raw
        return m

    @classmethod
    def from_rows(cls, rows, field):
        rows = [list(r) for r in rows]
        ncols = len(rows[0]) if rows else 0
        if any(len(r) != ncols for r in rows):
            raise ValueError("ragged rows")
        if field == GF2:
            raw = np.array(
                [[_coerce_entry(x, GF2) for x in r] for r in rows], dtype=np.uint8
            ).reshape(len(rows), ncols)
            return cls._wrap(raw, GF2)
        raw = np.empty((len(rows), ncols), dtype=object)
        for i, r in enumerate(rows):
            for j, x in enumerate(r):
                raw[i, j] = _coerce_entry(x, QQ)
        return cls._wrap(raw, QQ)

    @classmethod
    def zeros(cls, rows, cols, field):
        _check_field(field)
        if field == GF2:
            return cls._wrap(np.zeros((rows, cols), dtype=np.uint8), GF2)
        raw = np.empty((rows, cols), dtype=object)
        raw[...] = Fraction(0)
        return cls._wrap(raw, QQ)

    @classmethod
    def identity(cls, n, field):
        m = cls.zeros(n, n, field)
        one = 1 if field == GF2 else Fraction(1)
        for i in range(n):
            m.data[i, i] = one
        return m

    @classmethod
    def column(cls, entries, field):
        return cls.from_rows([[x] for x in entries], field)

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    @property
    def shape(self):
        return self.data.shape

    def entry(self, i, j):
        x = self.data[i, j]
        return int(x) if self.field == GF2 else x

    def col(self, j):
        return Matrix._wrap(self.data[:, j : j + 1].copy(), self.field)

    def take_cols(self, idx):
        return Matrix._wrap(self.data[:, list(idx)].copy(), self.field)

    def copy(self):
        return Matrix._wrap(self.data.copy(), self.field)

    def transpose(self):
        return Matrix._wrap(self.data.T.copy(), self.field)

    def is_zero(self):
        if self.field == GF2:
            return not self.data.any()
        return all(x == 0 for x in self.data.flat)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        if self.field != other.field or self.shape != other.shape:
            return False
        if self.field == GF2:
            return bool(np.array_equal(self.data, other.data))
        return all(a == b for a, b in zip(self.data.flat, other.data.flat))

    def __hash__(self):  # pragma: no cover - Matrix is not meant for dict keys
        raise TypeError("Matrix is unhashable")

    def __matmul__(self, other):
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        if self.field == GF2:
            return Matrix._wrap(gf2_matmul(self.data, other.data), GF2)
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return Matrix.zeros(self.rows, other.cols, QQ)
        return Matrix._wrap(np.dot(self.data, other.data), QQ)

    def __add__(self, other):
        if self.field != other.field or self.shape != other.shape:
            raise ValueError("shape/field mismatch")
        if self.field == GF2:
            return Matrix._wrap(self.data ^ other.data, GF2)
        return Matrix._wrap(self.data + other.data, QQ)

    def __neg__(self):
        if self.field == GF2:
            return self.copy()
        return Matrix._wrap(-self.data, QQ)

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self):
        body = "; ".join(
            " ".join(str(self.entry(i, j)) for j in range(self.cols))
            for i in range(self.rows)
        )
        return f"Matrix[{self.field} {self.rows}x{self.cols}: {body}]"

    @staticmethod
    def hstack(mats):
        mats = list(mats)
        field = mats[0].field
        if any(m.field != field for m in mats):
            raise ValueError("field mismatch")
        raw = np.hstack([m.data for m in mats])
        return Matrix._wrap(raw, field)

    @staticmethod
    def vstack(mats):
        mats = list(mats)
        field = mats[0].field
        raw = np.vstack([m.data for m in mats])
        return Matrix._wrap(raw, field)


class RowReduction(NamedTuple):
    reduced: Matrix
    basis_change: Matrix
    pivot_columns: list


def _rref_q(data, n_pivot_cols):
    """Full RREF of a Fraction object array, in place; returns pivot cols."""
    m, n = data.shape
    pivots = []
    r = 0
    for c in range(n_pivot_cols):
        if r >= m:
            break
        p = -1
        for i in range(r, m):
            if data[i, c] != 0:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            data[[r, p]] = data[[p, r]]
        pv = data[r, c]
        if pv != 1:
            data[r, :] = data[r, :] / pv
        for i in range(m):
            if i != r and data[i, c] != 0:
                data[i, :] = data[i, :] - data[i, c] * data[r, :]
        pivots.append(c)
        r += 1
    return pivots


def row_reduce(m: Matrix) -> RowReduction:
    """Reduced row-echelon form with the accompanying change of basis.

    ``basis_change @ m == reduced`` and ``pivot_columns`` is strictly
    increasing.  RREF is unique, so the output is representation- and
    backend-independent.
    """
    n = m.cols
    aug = Matrix.hstack([m, Matrix.identity(m.rows, m.field)])
    if m.field == GF2:
        red, piv = gf2_rref(aug.data, n_pivot_cols=n)
        reduced = Matrix._wrap(np.ascontiguousarray(red[:, :n]), GF2)
        change = Matrix._wrap(np.ascontiguousarray(red[:, n:]), GF2)
        return RowReduction(reduced, change, piv)
    work = aug.data.copy()
    piv = _rref_q(work, n)
    reduced = Matrix._wrap(work[:, :n].copy(), QQ)
    change = Matrix._wrap(work[:, n:].copy(), QQ)
    return RowReduction(reduced, change, piv)


def rank(m: Matrix) -> int:
    if m.field == GF2:
        _, piv = gf2_rref(m.data.copy())
        return len(piv)
    work = m.data.copy()
    return len(_rref_q(work, m.cols))


def kernel_basis(m: Matrix) -> Matrix:
    """Columns spanning ker(m); column count is cols(m) - rank(m).

    Free columns are enumerated in increasing order, one kernel vector per
    free column, so the basis is deterministic.
    """
    red, _, piv = row_reduce(m)
    pivset = set(piv)
    free = [j for j in range(m.cols) if j not in pivset]
    out = Matrix.zeros(m.cols, len(free), m.field)
    one = 1 if m.field == GF2 else Fraction(1)
    for t, fc in enumerate(free):
        out.data[fc, t] = one
        for i, pc in enumerate(piv):
            v = red.data[i, fc]
            if m.field == GF2:
                out.data[pc, t] = v
            else:
                out.data[pc, t] = -v
    return out


class SpanSolver:
    """Factorized view of a generator matrix for repeated span solves.

    row_reduce is done once; each solve then costs a single matrix-vector
    product.  Solutions fix all free variables to zero, so they are unique
    functions of the target.
    """

    def __init__(self, generators: Matrix):
        self.generators = generators
        red, change, piv = row_reduce(generators)
        self.field = generators.field
        self.pivots = piv
        self.change = change
        self.n_rows = generators.rows

    def solve(self, target: Matrix) -> Matrix:
        """Solve generators @ X = target column-wise; raises NotInSpan."""
        if target.rows != self.n_rows:
            raise ValueError("target dimension mismatch")
        y = self.change @ target
        r = len(self.pivots)
        tail = y.data[r:, :]
        if self.field == GF2:
            bad = bool(tail.any())
        else:
            bad = any(x != 0 for x in tail.flat)
        if bad:
            raise NotInSpan("target outside the span of the generators")
        out = Matrix.zeros(self.generators.cols, target.cols, self.field)
        for i, pc in enumerate(self.pivots):
            out.data[pc, :] = y.data[i, :]
        return out


def solve_in_span(generators: Matrix, target: Matrix) -> Matrix:
    """Coefficients expressing *target* in the columns of *generators*.

    Raises :class:`NotInSpan` when no exact solution exists.
    """
    return SpanSolver(generators).solve(target)


def cokernel_basis(subspace: Matrix, ambient_dim: int):
    """Basis data for ambient / column-span(subspace).

    Returns ``(representatives, projection)``: representative columns are
    standard basis vectors at the non-pivot coordinates of the reduced
    subspace, and ``projection @ v`` gives the coordinates of ``[v]`` in
    that basis.  ``projection @ subspace == 0`` by construction.
    """
    if subspace.rows != ambient_dim:
        raise ValueError("subspace columns must live in the ambient dimension")
    red, _, piv = row_reduce(subspace.transpose())
    pivset = set(piv)
    nonpiv = [j for j in range(ambient_dim) if j not in pivset]
    q = len(nonpiv)
    field = subspace.field
    reps = Matrix.zeros(ambient_dim, q, field)
    proj = Matrix.zeros(q, ambient_dim, field)
    one = 1 if field == GF2 else Fraction(1)
    for t, j in enumerate(nonpiv):
        reps.data[j, t] = one
        proj.data[t, j] = one
        for i, p in enumerate(piv):
            v = red.data[i, j]
            if field == GF2:
                proj.data[t, p] = v
            else:
                proj.data[t, p] = -v
    return reps, proj


def invert(m: Matrix) -> Matrix:
    """Exact inverse of a square full-rank matrix."""
    if m.rows != m.cols:
        raise ValueError("only square matrices can be inverted")
    red, change, piv = row_reduce(m)
    if len(piv) != m.cols:
        raise NotInSpan("matrix is singular")
    return change
