"""Exact rational linear algebra.

Entries are Python ints or ``fractions.Fraction``; integral values are kept
as plain ints so that word evaluation over integer matrices stays fast.
Matrices are immutable. Vectors are plain tuples.

Echelon forms use one pivot rule everywhere: leftmost nonzero column,
topmost available row, pivot normalised to 1. Kernel bases and
particular solutions are therefore deterministic.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Optional, Sequence

__all__ = [
    "Matrix",
    "as_scalar",
    "parse_scalar",
    "format_scalar",
    "rref",
    "rank",
    "nullspace",
    "solve_affine",
    "span_basis",
    "in_span",
    "span_equal",
    "span_contains",
    "span_intersection",
    "coordinates_in",
    "nilpotent_log",
    "nilpotent_exp",
    "bracket",
    "is_nilpotent",
]


def as_scalar(x):
    """Normalise a number to an int when integral, else a reduced Fraction."""
    if isinstance(x, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, str):
        return parse_scalar(x)
    if isinstance(x, float):
        raise TypeError("floating point entries are not accepted; use strings like '1/3'")
    f = Fraction(x)
    return f.numerator if f.denominator == 1 else f


def parse_scalar(s: str):
    s = s.strip()
    if not s:
        raise ValueError("empty rational literal")
    if "." in s or "e" in s.lower():
        raise ValueError(f"not a rational literal: {s!r}")
    return as_scalar(Fraction(s))


def format_scalar(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _div(a, b):
    if isinstance(a, int) and isinstance(b, int):
        q, r = divmod(a, b)
        if r == 0:
            return q
        return Fraction(a, b)
    return as_scalar(Fraction(a) / b)


class Matrix:
    """Immutable dense matrix over the rationals."""

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, data: Iterable[Iterable], cols: Optional[int] = None):
        rows = tuple(tuple(as_scalar(x) for x in row) for row in data)
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise ValueError("ragged matrix rows")
            if cols is not None and cols != ncols:
                raise ValueError("column count mismatch")
        else:
            ncols = cols or 0
        self.rows = len(rows)
        self.cols = ncols
        self._data = rows
        self._hash = None

    @classmethod
    def _raw(cls, rows: tuple, nrows: int, ncols: int) -> "Matrix":
        m = cls.__new__(cls)
        m.rows = nrows
        m.cols = ncols
        m._data = rows
        m._hash = None
        return m

    # construction -------------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls._raw(tuple((0,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls._raw(
            tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n)), n, n
        )

    @classmethod
    def elementary(cls, rows: int, cols: int, i: int, j: int, value=1) -> "Matrix":
        data = [[0] * cols for _ in range(rows)]
        data[i][j] = as_scalar(value)
        return cls._raw(tuple(map(tuple, data)), rows, cols)

    @classmethod
    def column(cls, v: Sequence) -> "Matrix":
        return cls([[x] for x in v], cols=1)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: Optional[int] = None) -> "Matrix":
        if not columns:
            return cls.zeros(nrows or 0, 0)
        n = len(columns[0])
        return cls([[c[i] for c in columns] for i in range(n)], cols=len(columns))

    @classmethod
    def from_vec(cls, v: Sequence, rows: int, cols: int) -> "Matrix":
        if len(v) != rows * cols:
            raise ValueError("vector length does not match shape")
        return cls([v[i * cols:(i + 1) * cols] for i in range(rows)], cols=cols)

    @classmethod
    def block(cls, blocks: Sequence[Sequence["Matrix"]]) -> "Matrix":
        """Assemble from a grid of blocks; every row of blocks must agree in height."""
        out = []
        ncols = None
        for brow in blocks:
            h = brow[0].rows
            if any(b.rows != h for b in brow):
                raise ValueError("block row heights differ")
            width = sum(b.cols for b in brow)
            if ncols is None:
                ncols = width
            elif width != ncols:
                raise ValueError("block row widths differ")
            for i in range(h):
                row = []
                for b in brow:
                    row.extend(b._data[i])
                out.append(tuple(row))
        return cls._raw(tuple(out), len(out), ncols or 0)

    @classmethod
    def block_diag(cls, *mats: "Matrix") -> "Matrix":
        n = sum(m.rows for m in mats)
        c = sum(m.cols for m in mats)
        data = [[0] * c for _ in range(n)]
        r0 = c0 = 0
        for m in mats:
            for i in range(m.rows):
                data[r0 + i][c0:c0 + m.cols] = m._data[i]
            r0 += m.rows
            c0 += m.cols
        return cls._raw(tuple(map(tuple, data)), n, c)

    # access -------------------------------------------------------------
    @property
    def shape(self) -> tuple:
        return (self.rows, self.cols)

    def __getitem__(self, key):
        if isinstance(key, tuple):
            i, j = key
            if not (isinstance(i, int) and isinstance(j, int)):
                rs = _index_list(i, self.rows)
                cs = _index_list(j, self.cols)
                return Matrix._raw(
                    tuple(tuple(self._data[r][c] for c in cs) for r in rs), len(rs), len(cs)
                )
            return self._data[i][j]
        return self._data[key]

    def tolist(self) -> list:
        return [list(r) for r in self._data]

    def vec(self) -> tuple:
        """Row-major flattening."""
        return tuple(x for row in self._data for x in row)

    def col(self, j: int) -> tuple:
        return tuple(row[j] for row in self._data)

    def columns(self) -> list:
        return [self.col(j) for j in range(self.cols)]

    # comparisons --------------------------------------------------------
    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self):
        body = "; ".join(" ".join(format_scalar(x) for x in r) for r in self._data)
        return f"Matrix({self.rows}x{self.cols}: [{body}])"

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._data for x in row)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # arithmetic ---------------------------------------------------------
    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        return Matrix._raw(
            tuple(tuple(as_scalar(a + b) for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
            self.rows, self.cols,
        )

    def __sub__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} - {other.shape}")
        return Matrix._raw(
            tuple(tuple(as_scalar(a - b) for a, b in zip(r, s)) for r, s in zip(self._data, other._data)),
            self.rows, self.cols,
        )

    def __neg__(self) -> "Matrix":
        return Matrix._raw(tuple(tuple(-a for a in r) for r in self._data), self.rows, self.cols)

    def scale(self, c) -> "Matrix":
        c = as_scalar(c)
        return Matrix._raw(
            tuple(tuple(as_scalar(c * a) for a in r) for r in self._data), self.rows, self.cols
        )

    def __rmul__(self, c):
        return self.scale(c)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self @ other
        return self.scale(other)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other._data)) if other.rows else [()] * other.cols
        data = tuple(
            tuple(as_scalar(sum(a * b for a, b in zip(row, c))) for c in cols)
            for row in self._data
        )
        return Matrix._raw(data, self.rows, other.cols)

    def apply(self, v: Sequence) -> tuple:
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        return tuple(as_scalar(sum(a * b for a, b in zip(row, v))) for row in self._data)

    @property
    def T(self) -> "Matrix":
        if self.rows == 0:
            return Matrix.zeros(self.cols, 0)
        return Matrix._raw(tuple(zip(*self._data)), self.cols, self.rows)

    def __pow__(self, k: int) -> "Matrix":
        if not self.is_square():
            raise ValueError("power of a non-square matrix")
        if k < 0:
            return self.inverse() ** (-k)
        result = Matrix.identity(self.rows)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def kron(self, other: "Matrix") -> "Matrix":
        data = []
        for r in self._data:
            for s in other._data:
                data.append(tuple(as_scalar(a * b) for a in r for b in s))
        return Matrix._raw(tuple(data), self.rows * other.rows, self.cols * other.cols)

    def trace(self):
        return as_scalar(sum(self._data[i][i] for i in range(min(self.rows, self.cols))))

    # elimination --------------------------------------------------------
    def rank(self) -> int:
        return rank(self)

    def det(self):
        if not self.is_square():
            raise ValueError("determinant of a non-square matrix")
        m = [list(r) for r in self._data]
        n = self.rows
        det = Fraction(1)
        for c in range(n):
            p = next((r for r in range(c, n) if m[r][c] != 0), None)
            if p is None:
                return 0
            if p != c:
                m[c], m[p] = m[p], m[c]
                det = -det
            pv = m[c][c]
            det *= pv
            for r in range(c + 1, n):
                if m[r][c] != 0:
                    f = Fraction(m[r][c]) / pv
                    m[r] = [a - f * b for a, b in zip(m[r], m[c])]
        return as_scalar(det)

    def inverse(self) -> "Matrix":
        if not self.is_square():
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(self._data)]
        red, pivots = _rref_rows(aug, n)
        if pivots != list(range(n)):
            raise ZeroDivisionError("matrix is singular")
        return Matrix([r[n:] for r in red], cols=n)

    def is_invertible(self) -> bool:
        return self.is_square() and rank(self) == self.rows


def _index_list(k, n: int) -> list:
    if isinstance(k, slice):
        return list(range(n)[k])
    if isinstance(k, int):
        return [k]
    return list(k)


def _rref_rows(rows: list, ncols: Optional[int] = None):
    """Reduced row echelon form on a list of lists; returns (rows, pivot columns).

    Only the first ``ncols`` columns are used for pivoting.
    """
    m = [[as_scalar(x) for x in r] for r in rows]
    if not m:
        return m, []
    width = len(m[0])
    ncols = width if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [_div(x, pv) for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [as_scalar(a - f * b) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rref(A: Matrix) -> tuple:
    """Return (R, pivots) with R the reduced row echelon form of A."""
    rows, pivots = _rref_rows(A.tolist(), A.cols)
    return Matrix(rows, cols=A.cols), pivots


def rank(A) -> int:
    if isinstance(A, Matrix):
        rows = A.tolist()
    else:
        rows = [list(v) for v in A]
    if not rows or not rows[0]:
        return 0
    return len(_rref_rows(rows)[1])


def nullspace(A: Matrix) -> list:
    """Basis of {v : A v = 0}, one vector per free column, free entry set to 1."""
    if A.rows == 0:
        return [tuple(1 if i == j else 0 for i in range(A.cols)) for j in range(A.cols)]
    red, pivots = _rref_rows(A.tolist(), A.cols)
    free = [c for c in range(A.cols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [0] * A.cols
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = as_scalar(-red[r][f])
        basis.append(tuple(v))
    return basis


def solve_affine(A: Matrix, b: Sequence):
    """Solve A x = b exactly.

    Returns ``None`` when the system is inconsistent, otherwise
    ``(particular, kernel_basis)``; the particular solution has every free
    variable set to zero.
    """
    if isinstance(b, Matrix):
        if b.cols != 1:
            raise ValueError("right-hand side must be a column")
        b = b.col(0)
    if len(b) != A.rows:
        raise ValueError(f"dimension mismatch: {A.rows} equations, {len(b)} right-hand sides")
    if A.rows == 0:
        return tuple([0] * A.cols), nullspace(A)
    aug = [list(r) + [as_scalar(bi)] for r, bi in zip(A.tolist(), b)]
    red, pivots = _rref_rows(aug, A.cols)
    for r in range(len(pivots), len(red)):
        if red[r][A.cols] != 0:
            return None
    x = [0] * A.cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][A.cols]
    pset = set(pivots)
    kernel = []
    for f in range(A.cols):
        if f in pset:
            continue
        v = [0] * A.cols
        v[f] = 1
        for r, pc in enumerate(pivots):
            v[pc] = as_scalar(-red[r][f])
        kernel.append(tuple(v))
    return tuple(x), kernel


# spans ------------------------------------------------------------------

def span_basis(vectors: Iterable[Sequence]) -> list:
    """Reduced echelon basis (as tuples) of the span of the given vectors."""
    vecs = [list(v) for v in vectors]
    if not vecs:
        return []
    red, pivots = _rref_rows(vecs)
    return [tuple(r) for r in red[:len(pivots)]]


def in_span(v: Sequence, basis: Sequence[Sequence]) -> bool:
    if all(x == 0 for x in v):
        return True
    if not basis:
        return False
    return rank(list(basis) + [v]) == rank(list(basis))


def span_contains(big: Sequence[Sequence], small: Sequence[Sequence]) -> bool:
    if not small:
        return True
    r = rank(list(big)) if big else 0
    return rank(list(big) + list(small)) == r


def span_equal(U: Sequence[Sequence], V: Sequence[Sequence]) -> bool:
    return span_contains(U, V) and span_contains(V, U)


def span_intersection(U: Sequence[Sequence], V: Sequence[Sequence]) -> list:
    """Basis of span(U) ∩ span(V)."""
    U = span_basis(U)
    V = span_basis(V)
    if not U or not V:
        return []
    n = len(U[0])
    # solve sum a_i u_i - sum b_j v_j = 0
    cols = list(U) + [tuple(-x for x in v) for v in V]
    K = nullspace(Matrix.from_columns(cols, n))
    out = []
    for k in K:
        w = [0] * n
        for a, u in zip(k[:len(U)], U):
            if a:
                w = [wi + a * ui for wi, ui in zip(w, u)]
        out.append(tuple(as_scalar(x) for x in w))
    return span_basis(out)


def coordinates_in(v: Sequence, basis: Sequence[Sequence]) -> Optional[tuple]:
    """Coefficients c with sum c_i basis_i = v, or None; basis must be independent."""
    if not basis:
        return () if all(x == 0 for x in v) else None
    sol = solve_affine(Matrix.from_columns(list(basis)), v)
    if sol is None:
        return None
    return sol[0]


# nilpotent calculus -------------------------------------------------------

def is_nilpotent(N: Matrix) -> bool:
    if not N.is_square():
        return False
    return (N ** N.rows).is_zero() if N.rows else True


def nilpotent_log(U: Matrix) -> Matrix:
    """Logarithm of a unipotent matrix as the finite series in U - I."""
    if not U.is_square():
        raise ValueError("logarithm of a non-square matrix")
    n = U.rows
    N = U - Matrix.identity(n)
    if not is_nilpotent(N):
        raise ValueError("matrix is not unipotent")
    result = Matrix.zeros(n, n)
    power = Matrix.identity(n)
    for k in range(1, n):
        power = power @ N
        if power.is_zero():
            break
        term = power.scale(Fraction((-1) ** (k + 1), k))
        result = result + term
    return result


def nilpotent_exp(N: Matrix) -> Matrix:
    """Exponential of a nilpotent matrix as a finite series."""
    if not N.is_square():
        raise ValueError("exponential of a non-square matrix")
    if not is_nilpotent(N):
        raise ValueError("matrix is not nilpotent")
    n = N.rows
    result = Matrix.identity(n)
    power = Matrix.identity(n)
    for k in range(1, n):
        power = power @ N
        if power.is_zero():
            break
        result = result + power.scale(Fraction(1, factorial(k)))
    return result


def bracket(X: Matrix, Y: Matrix) -> Matrix:
    if not (X.is_square() and X.shape == Y.shape):
        raise ValueError(f"bracket needs square matrices of equal size, got {X.shape} and {Y.shape}")
    return X @ Y - Y @ X
