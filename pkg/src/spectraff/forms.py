"""Nondegenerate bilinear and quadratic forms on F_q^d.

A quadratic form is given by a symmetric matrix M (odd characteristic makes
the correspondence exact): Q(x) = x^T M x, and the associated bilinear form
is B(x, y) = x^T M y with the same matrix, so Q(x - y) expands consistently.

Vectors are tuples of FqElement. Like field elements, a vector has an
integer encoding (base-q expansion of its coordinate encodings), which is
also its base-p digit string, so the vectorized helpers in
:mod:`spectraff.fields` apply to whole arrays of vector encodings.
"""

from __future__ import annotations

import itertools
from typing import Optional, Sequence

import numpy as np

from .config import MAX_FIELD_SIZE, CapExceeded
from .fields import FieldCtx, FqElement

ISOTROPIC = "isotropic"
SQUARE_TYPE = "square-type"
NONSQUARE_TYPE = "nonsquare-type"

Vector = tuple[FqElement, ...]


def encode_vector(ctx: FieldCtx, vec: Sequence[FqElement]) -> int:
    e = 0
    for c in reversed(vec):
        e = e * ctx.q + c.encoding
    return e


def decode_vector(ctx: FieldCtx, dim: int, enc: int) -> Vector:
    cs = []
    for _ in range(dim):
        cs.append(ctx.decode(enc % ctx.q))
        enc //= ctx.q
    return tuple(cs)


def vector_literal(vec: Vector) -> str:
    return ";".join(c.literal() for c in vec)


def _coerce_matrix(ctx: FieldCtx, matrix) -> tuple[tuple[FqElement, ...], ...]:
    rows = []
    for row in matrix:
        rows.append(tuple(c if isinstance(c, FqElement) else ctx.from_int(c) for c in row))
    dim = len(rows)
    if any(len(row) != dim for row in rows):
        raise ValueError("form matrix must be square")
    return tuple(rows)


def _determinant(ctx: FieldCtx, matrix: Sequence[Sequence[FqElement]]) -> FqElement:
    """Determinant by exact Gaussian elimination over F_q."""
    m = [list(row) for row in matrix]
    dim = len(m)
    det = ctx.one()
    for col in range(dim):
        pivot = next((r for r in range(col, dim) if not m[r][col].is_zero()), None)
        if pivot is None:
            return ctx.zero()
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det = det * m[col][col]
        inv = m[col][col].inverse()
        for r in range(col + 1, dim):
            factor = m[r][col] * inv
            if factor.is_zero():
                continue
            for c in range(col, dim):
                m[r][c] = m[r][c] - factor * m[col][c]
    return det


class BilinearForm:
    """Nondegenerate bilinear form B(x, y) = x^T M y on F_q^d."""

    kind = "bilinear"

    def __init__(self, ctx: FieldCtx, matrix):
        self.ctx = ctx
        self.matrix = _coerce_matrix(ctx, matrix)
        self.dim = len(self.matrix)
        if self.dim < 1:
            raise ValueError("dimension must be at least 1")
        self.det = _determinant(ctx, self.matrix)
        if self.det.is_zero():
            raise ValueError("form matrix is degenerate")

    def eval(self, x: Sequence[FqElement], y: Sequence[FqElement]) -> FqElement:
        if len(x) != self.dim or len(y) != self.dim:
            raise ValueError("vector length does not match form dimension")
        acc = self.ctx.zero()
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            row = self.matrix[i]
            for j, yj in enumerate(y):
                if yj.is_zero() or row[j].is_zero():
                    continue
                acc = acc + xi * row[j] * yj
        return acc

    def descriptor(self) -> dict:
        return {
            "kind": self.kind,
            "field": self.ctx.descriptor(),
            "dim": self.dim,
            "matrix": [[c.literal() for c in row] for row in self.matrix],
        }

    def __repr__(self) -> str:
        return f"{type(self).__name__}(q={self.ctx.q}, d={self.dim})"


class QuadraticForm(BilinearForm):
    """Nondegenerate quadratic form Q(x) = x^T M x, M symmetric."""

    kind = "quadratic"

    def __init__(self, ctx: FieldCtx, matrix):
        super().__init__(ctx, matrix)
        for i in range(self.dim):
            for j in range(i):
                if self.matrix[i][j] != self.matrix[j][i]:
                    raise ValueError("quadratic form matrix must be symmetric")
        self._value_enc: Optional[np.ndarray] = None

    def eval(self, x: Sequence[FqElement], y: Optional[Sequence[FqElement]] = None) -> FqElement:
        if y is None:
            y = x
        return super().eval(x, y)

    def value_table(self) -> np.ndarray:
        """Encoding of Q(x) for every vector x of F_q^d, indexed by encoding."""
        if self._value_enc is None:
            ctx = self.ctx
            npoints = ctx.q ** self.dim
            if npoints > MAX_FIELD_SIZE:
                raise CapExceeded(f"{npoints} points exceed the enumeration cap")
            tab = np.empty(npoints, dtype=np.int32)
            els = ctx.elements()
            for vec in itertools.product(els, repeat=self.dim):
                tab[encode_vector(ctx, vec)] = self.eval(vec).encoding
            self._value_enc = tab
        return self._value_enc


def make_form(ctx: FieldCtx, matrix, kind: str):
    """Factory for either form kind; rejects degenerate or asymmetric input."""
    if kind == "bilinear":
        return BilinearForm(ctx, matrix)
    if kind == "quadratic":
        return QuadraticForm(ctx, matrix)
    raise ValueError(f"unknown form kind {kind!r}")


def dot_form(ctx: FieldCtx, dim: int, kind: str = "quadratic"):
    """Identity matrix: the dot product / sum of squares."""
    matrix = [[1 if i == j else 0 for j in range(dim)] for i in range(dim)]
    return make_form(ctx, matrix, kind)


def offdiag_form(ctx: FieldCtx, dim: int, kind: str = "quadratic"):
    """A non-diagonal nondegenerate form: a hyperbolic 2x2 block, then ones.

    For dim >= 2 the leading block is [[0,1],[1,0]] (so Q starts 2*x1*x2);
    remaining coordinates contribute squares.
    """
    if dim < 2:
        raise ValueError("need dim >= 2 for a non-diagonal form")
    matrix = [[0] * dim for _ in range(dim)]
    matrix[0][1] = matrix[1][0] = 1
    for i in range(2, dim):
        matrix[i][i] = 1
    return make_form(ctx, matrix, kind)


class Sphere:
    """All x with Q(x) = radius, enumerated exhaustively."""

    def __init__(self, form: QuadraticForm, radius: FqElement):
        self.form = form
        self.radius = radius
        tab = form.value_table()
        self.encodings = np.nonzero(tab == radius.encoding)[0].astype(np.int64)
        self._members = frozenset(int(e) for e in self.encodings)

    @property
    def size(self) -> int:
        return int(self.encodings.size)

    def points(self) -> list:
        ctx = self.form.ctx
        return [decode_vector(ctx, self.form.dim, int(e)) for e in self.encodings]

    def __contains__(self, vec) -> bool:
        return encode_vector(self.form.ctx, vec) in self._members

    def csv_rows(self):
        """One row per point: the coordinate literals, low coordinate first."""
        for point in self.points():
            yield [c.literal() for c in point]

    def __repr__(self) -> str:
        return f"Sphere(q={self.form.ctx.q}, d={self.form.dim}, r={self.radius.literal()}, size={self.size})"


def sphere(form: QuadraticForm, radius: FqElement) -> Sphere:
    return Sphere(form, radius)


def classify_line(form: QuadraticForm, x: Sequence[FqElement]) -> str:
    """Three-way type of the line through x: isotropic, square- or
    nonsquare-type. Scaling x by c shifts Q(x) by the square c^2, so the
    answer only depends on the line."""
    if all(c.is_zero() for c in x):
        raise ValueError("zero vector spans no line")
    value = form.eval(x)
    if value.is_zero():
        return ISOTROPIC
    return SQUARE_TYPE if form.ctx.is_square(value) else NONSQUARE_TYPE


def line_representative(ctx: FieldCtx, x: Vector) -> Vector:
    """Canonical point on the punctured line {c x : c != 0}: the scalar
    multiple with the smallest vector encoding."""
    best = None
    best_enc = None
    for e in range(1, ctx.q):
        c = ctx.decode(e)
        cand = tuple(c * xi for xi in x)
        enc = encode_vector(ctx, cand)
        if best_enc is None or enc < best_enc:
            best, best_enc = cand, enc
    return best
