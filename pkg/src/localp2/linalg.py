"""Exact linear algebra over the rationals, with an optional prime-field rank backend.

Every homology dimension in this package is an exact rank; no floating point
anywhere.  Ranks are computed by fraction-free (Bareiss) elimination over the
integers after clearing row denominators.  The prime-field mode recomputes
ranks modulo a large prime (> 2**30) and is contractually required to agree
with the rational mode on the regression corpus.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping, Sequence, Union

from .errors import ScalarModeError, ShapeError

_F0 = Fraction(0)
_F1 = Fraction(1)


@dataclass(frozen=True)
class RationalScalars:
    name: str = "rational"


@dataclass(frozen=True)
class PrimeScalars:
    p: int
    name: str = "prime"

    def __post_init__(self):
        if self.p <= 2**30:
            raise ScalarModeError(f"prime modulus must exceed 2**30, got {self.p}")


Scalars = Union[RationalScalars, PrimeScalars]

RATIONAL = RationalScalars()


@dataclass(frozen=True)
class Mat:
    """Immutable dense matrix over Fraction; the zero-row/zero-column cases keep their shape."""

    rows: int
    cols: int
    data: tuple[tuple[Fraction, ...], ...]

    @staticmethod
    def zeros(rows: int, cols: int) -> "Mat":
        return Mat(rows, cols, tuple(tuple([_F0] * cols) for _ in range(rows)))

    @staticmethod
    def identity(n: int) -> "Mat":
        return Mat(n, n, tuple(tuple(_F1 if i == j else _F0 for j in range(n)) for i in range(n)))

    @staticmethod
    def from_rows(entries: Sequence[Sequence], cols: int | None = None) -> "Mat":
        rows = [tuple(Fraction(x) for x in row) for row in entries]
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise ShapeError("ragged rows in matrix literal")
            if cols is not None and cols != ncols:
                raise ShapeError(f"expected {cols} columns, got {ncols}")
        else:
            if cols is None:
                raise ShapeError("empty matrix literal needs an explicit column count")
            ncols = cols
        return Mat(len(rows), ncols, tuple(rows))

    def entry(self, i: int, j: int) -> Fraction:
        return self.data[i][j]

    def transpose(self) -> "Mat":
        return Mat(self.cols, self.rows,
                   tuple(tuple(self.data[i][j] for i in range(self.rows)) for j in range(self.cols)))

    def is_zero(self) -> bool:
        return all(not x for row in self.data for x in row)

    def scale(self, s) -> "Mat":
        s = Fraction(s)
        return Mat(self.rows, self.cols, tuple(tuple(s * x for x in row) for row in self.data))

    def column(self, j: int) -> tuple[Fraction, ...]:
        return tuple(row[j] for row in self.data)

    def __neg__(self) -> "Mat":
        return self.scale(-1)

    def __add__(self, other: "Mat") -> "Mat":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError(f"add: {self.rows}x{self.cols} vs {other.rows}x{other.cols}")
        return Mat(self.rows, self.cols,
                   tuple(tuple(a + b for a, b in zip(ra, rb)) for ra, rb in zip(self.data, other.data)))

    def __sub__(self, other: "Mat") -> "Mat":
        return self + (-other)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ShapeError(f"matmul: {self.rows}x{self.cols} @ {other.rows}x{other.cols}")
        out = [[_F0] * other.cols for _ in range(self.rows)]
        for i, row in enumerate(self.data):
            orow = out[i]
            for k, v in enumerate(row):
                if v:
                    brow = other.data[k]
                    for j, w in enumerate(brow):
                        if w:
                            orow[j] += v * w
        return Mat(self.rows, other.cols, tuple(tuple(r) for r in out))


def hstack(mats: Sequence[Mat]) -> Mat:
    rows = mats[0].rows
    if any(m.rows != rows for m in mats):
        raise ShapeError("hstack: row counts differ")
    data = tuple(tuple(x for m in mats for x in m.data[i]) for i in range(rows))
    return Mat(rows, sum(m.cols for m in mats), data)


def vstack(mats: Sequence[Mat]) -> Mat:
    cols = mats[0].cols
    if any(m.cols != cols for m in mats):
        raise ShapeError("vstack: column counts differ")
    return Mat(sum(m.rows for m in mats), cols, tuple(row for m in mats for row in m.data))


def block_diag(a: Mat, b: Mat) -> Mat:
    out = [[_F0] * (a.cols + b.cols) for _ in range(a.rows + b.rows)]
    for i in range(a.rows):
        out[i][: a.cols] = list(a.data[i])
    for i in range(b.rows):
        out[a.rows + i][a.cols:] = list(b.data[i])
    return Mat(a.rows + b.rows, a.cols + b.cols, tuple(tuple(r) for r in out))


def _integer_rows(m: Mat) -> list[list[int]]:
    # Row scaling by the denominator lcm does not change the rank.
    rows = []
    for row in m.data:
        if any(row):
            scale = lcm(*(x.denominator for x in row)) if len(row) else 1
            rows.append([int(x * scale) for x in row])
    return rows


def _rank_bareiss(rows: list[list[int]], ncols: int) -> int:
    m = len(rows)
    r = 0
    prev = 1
    for c in range(ncols):
        piv = None
        for i in range(r, m):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        prow = rows[r]
        for i in range(r + 1, m):
            irow = rows[i]
            f = irow[c]
            if f:
                for j in range(c + 1, ncols):
                    irow[j] = (p * irow[j] - f * prow[j]) // prev
                irow[c] = 0
            elif p != prev:
                # Bareiss exact division applies to untouched rows as well.
                for j in range(c + 1, ncols):
                    irow[j] = (p * irow[j]) // prev
        prev = p
        r += 1
        if r == m:
            break
    return r


def _rank_mod_p(m: Mat, p: int) -> int:
    rows = []
    for row in m.data:
        if any(row):
            rows.append([(x.numerator * pow(x.denominator, -1, p)) % p for x in row])
    nrows = len(rows)
    r = 0
    for c in range(m.cols):
        piv = None
        for i in range(r, nrows):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = pow(rows[r][c], -1, p)
        prow = rows[r]
        for i in range(r + 1, nrows):
            f = rows[i][c]
            if f:
                irow = rows[i]
                mult = (f * inv) % p
                for j in range(c, m.cols):
                    irow[j] = (irow[j] - mult * prow[j]) % p
        r += 1
        if r == nrows:
            break
    return r


def rank(m: Mat, scalars: Scalars = RATIONAL) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    if isinstance(scalars, PrimeScalars):
        return _rank_mod_p(m, scalars.p)
    return _rank_bareiss(_integer_rows(m), m.cols)


def rref(m: Mat) -> tuple[Mat, tuple[int, ...]]:
    """Reduced row echelon form over Fraction, with the pivot column indices."""
    a = [list(row) for row in m.data]
    pivots: list[int] = []
    r = 0
    for c in range(m.cols):
        piv = None
        for i in range(r, m.rows):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = _F1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        prow = a[r]
        for i in range(m.rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], prow)]
        pivots.append(c)
        r += 1
        if r == m.rows:
            break
    return Mat(m.rows, m.cols, tuple(tuple(row) for row in a)), tuple(pivots)


def nullspace(m: Mat) -> Mat:
    """Kernel basis as columns, ordered by free-column index (deterministic)."""
    red, pivots = rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    cols = []
    for f in free:
        v = [_F0] * m.cols
        v[f] = _F1
        for i, p in enumerate(pivots):
            v[p] = -red.data[i][f]
        cols.append(v)
    return Mat(m.cols, len(free), tuple(tuple(col[i] for col in cols) for i in range(m.cols)))


def coords_in_colspace(basis: Mat, vectors: Mat) -> Mat | None:
    """Solve basis @ X = vectors exactly; None when some column is outside the span."""
    if basis.rows != vectors.rows:
        raise ShapeError("coords_in_colspace: row counts differ")
    red, pivots = rref(hstack([basis, vectors]))
    if any(p >= basis.cols for p in pivots):
        return None
    out = [[_F0] * vectors.cols for _ in range(basis.cols)]
    for i, p in enumerate(pivots):
        for j in range(vectors.cols):
            out[p][j] = red.data[i][basis.cols + j]
    return Mat(basis.cols, vectors.cols, tuple(tuple(r) for r in out))


def quotient_projection(m: Mat) -> tuple[Mat, tuple[int, ...]]:
    """Projection of the target space onto the cokernel of ``m``.

    Basis of the quotient: the standard coordinates that are not pivot
    coordinates of the column space, in increasing order; those indices are
    returned so callers can lift quotient basis vectors to representatives.
    """
    red, pivots = rref(m.transpose())
    free = tuple(j for j in range(m.rows) if j not in pivots)
    out = [[_F0] * m.rows for _ in free]
    for fi, f in enumerate(free):
        out[fi][f] = _F1
        for i, p in enumerate(pivots):
            out[fi][p] = -red.data[i][f]
    return Mat(len(free), m.rows, tuple(tuple(r) for r in out)), free


class BlockMap:
    """Assembles a linear map between direct sums of Hom-spaces.

    Each block is a matrix space Hom(k^c, k^r) flattened row-major; the
    contributions are of the form phi -> sign * L @ phi (add_left) or
    phi -> sign * phi @ R (add_right).
    """

    def __init__(self, out_blocks: Sequence[tuple[str, int, int]],
                 in_blocks: Sequence[tuple[str, int, int]]):
        self._out = {}
        off = 0
        for label, r, c in out_blocks:
            self._out[label] = (off, r, c)
            off += r * c
        self.out_dim = off
        self._in = {}
        off = 0
        for label, r, c in in_blocks:
            self._in[label] = (off, r, c)
            off += r * c
        self.in_dim = off
        self._rows = [[_F0] * self.in_dim for _ in range(self.out_dim)]

    def add_left(self, out_label: str, in_label: str, left: Mat, sign: int = 1) -> None:
        ooff, orows, ocols = self._out[out_label]
        ioff, irows, icols = self._in[in_label]
        if ocols != icols or left.rows != orows or left.cols != irows:
            raise ShapeError(f"add_left shape mismatch at {out_label}<-{in_label}")
        for r in range(orows):
            for ri in range(irows):
                v = left.data[r][ri]
                if v:
                    sv = sign * v
                    base_o = ooff + r * ocols
                    base_i = ioff + ri * icols
                    row = self._rows
                    for c in range(ocols):
                        row[base_o + c][base_i + c] += sv

    def add_right(self, out_label: str, in_label: str, right: Mat, sign: int = 1) -> None:
        ooff, orows, ocols = self._out[out_label]
        ioff, irows, icols = self._in[in_label]
        if orows != irows or right.rows != icols or right.cols != ocols:
            raise ShapeError(f"add_right shape mismatch at {out_label}<-{in_label}")
        for ci in range(icols):
            for c in range(ocols):
                v = right.data[ci][c]
                if v:
                    sv = sign * v
                    for r in range(orows):
                        self._rows[ooff + r * ocols + c][ioff + r * icols + ci] += sv

    def matrix(self) -> Mat:
        return Mat(self.out_dim, self.in_dim, tuple(tuple(r) for r in self._rows))
