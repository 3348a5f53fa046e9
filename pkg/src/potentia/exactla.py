"""Exact rational linear algebra.

Vectors are sparse ``dict[int, Fraction]`` internally; the public helpers also
accept dense sequences.  Elimination always produces the reduced row-echelon
form with the leftmost nonzero column as pivot, so results depend only on the
row space and the column order, never on the input row order.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rat = Fraction
SparseVec = dict  # dict[int, Fraction]
VecLike = Union[Mapping[int, Fraction], Sequence]


def parse_rat(text) -> Fraction:
    """Parse ``"3"``, ``"-1/2"``, ``"−1"`` (unicode minus) or an int/Fraction."""
    if isinstance(text, Fraction):
        return text
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, float):
        raise TypeError("floats are not accepted as exact rationals")
    s = str(text).strip().replace("−", "-")
    if not s:
        raise ValueError("empty rational")
    return Fraction(s)


def format_rat(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def sparse(v: VecLike) -> SparseVec:
    if isinstance(v, Mapping):
        return {int(k): Fraction(c) for k, c in v.items() if c != 0}
    return {i: Fraction(c) for i, c in enumerate(v) if c != 0}


def dense(v: Mapping[int, Fraction], n: int) -> list:
    out = [Fraction(0)] * n
    for i, c in v.items():
        out[i] = c
    return out


def axpy(y: SparseVec, a: Fraction, x: Mapping[int, Fraction]) -> None:
    """In place ``y += a*x``; drops cancelled entries."""
    if a == 0:
        return
    for k, c in x.items():
        s = y.get(k, 0) + a * c
        if s:
            y[k] = s
        else:
            y.pop(k, None)


class RatMatrix:
    """Sparse matrix over the rationals; absent entries are zero."""

    __slots__ = ("rows", "cols", "_rows")

    def __init__(self, rows: int, cols: int, entries: Mapping | None = None):
        if rows < 0 or cols < 0:
            raise ValueError("negative shape")
        self.rows = rows
        self.cols = cols
        self._rows = [dict() for _ in range(rows)]
        for (r, c), v in (entries or {}).items():
            self[r, c] = v

    @classmethod
    def from_dense(cls, data: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        data = [list(r) for r in data]
        if cols is None:
            cols = len(data[0]) if data else 0
        m = cls(len(data), cols)
        for i, row in enumerate(data):
            if len(row) != cols:
                raise ValueError("ragged matrix")
            for j, v in enumerate(row):
                v = parse_rat(v)
                if v:
                    m._rows[i][j] = v
        return m

    @classmethod
    def from_rows(cls, rows: Iterable[Mapping[int, Fraction]], cols: int) -> "RatMatrix":
        rows = list(rows)
        m = cls(len(rows), cols)
        for i, r in enumerate(rows):
            for j, v in r.items():
                if not 0 <= j < cols:
                    raise IndexError(f"column {j} out of range")
                if v:
                    m._rows[i][j] = Fraction(v)
        return m

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls.from_rows(({i: Fraction(1)} for i in range(n)), n)

    def __getitem__(self, rc) -> Fraction:
        r, c = rc
        self._check(r, c)
        return self._rows[r].get(c, Fraction(0))

    def __setitem__(self, rc, value) -> None:
        r, c = rc
        self._check(r, c)
        value = parse_rat(value)
        if value:
            self._rows[r][c] = value
        else:
            self._rows[r].pop(c, None)

    def _check(self, r, c):
        if not (0 <= r < self.rows and 0 <= c < self.cols):
            raise IndexError(f"({r}, {c}) outside {self.rows}x{self.cols}")

    @property
    def entries(self) -> dict:
        return {(i, j): v for i, row in enumerate(self._rows) for j, v in row.items()}

    def row(self, i: int) -> SparseVec:
        return dict(self._rows[i])

    def row_dicts(self) -> list:
        return [dict(r) for r in self._rows]

    def to_dense(self) -> list:
        return [dense(r, self.cols) for r in self._rows]

    def transpose(self) -> "RatMatrix":
        t = RatMatrix(self.cols, self.rows)
        for i, row in enumerate(self._rows):
            for j, v in row.items():
                t._rows[j][i] = v
        return t

    def apply(self, v: VecLike) -> SparseVec:
        """Matrix times column vector."""
        v = sparse(v)
        out = {}
        for i, row in enumerate(self._rows):
            s = sum((c * v[j] for j, c in row.items() if j in v), Fraction(0))
            if s:
                out[i] = s
        return out

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = RatMatrix(self.rows, other.cols)
        for i, row in enumerate(self._rows):
            acc: SparseVec = {}
            for k, a in row.items():
                axpy(acc, a, other._rows[k])
            out._rows[i] = acc
        return out

    def is_zero(self) -> bool:
        return not any(self._rows)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RatMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and self._rows == other._rows

    def __repr__(self) -> str:
        return f"RatMatrix({self.rows}x{self.cols}, nnz={sum(map(len, self._rows))})"


class Subspace:
    """Row space in reduced row-echelon form.

    ``basis[i]`` has a 1 in column ``pivot_cols[i]`` and zeros in every other
    pivot column.
    """

    __slots__ = ("ambient_dim", "_pivot_rows")

    def __init__(self, ambient_dim: int):
        self.ambient_dim = ambient_dim
        self._pivot_rows: dict = {}  # pivot col -> row

    @property
    def pivot_cols(self) -> list:
        return sorted(self._pivot_rows)

    @property
    def basis(self) -> list:
        return [dict(self._pivot_rows[p]) for p in self.pivot_cols]

    def dense_basis(self) -> list:
        return [dense(r, self.ambient_dim) for r in self.basis]

    @property
    def dim(self) -> int:
        return len(self._pivot_rows)

    def __len__(self) -> int:
        return self.dim

    def reduce(self, v: VecLike) -> SparseVec:
        """Remainder of ``v`` after clearing every pivot column."""
        r = sparse(v)
        for c in [c for c in r if c in self._pivot_rows]:
            a = r.get(c)
            if a:
                axpy(r, -a, self._pivot_rows[c])
        return r

    def add(self, v: VecLike) -> bool:
        """Insert ``v``; returns True if the dimension grew."""
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        if p >= self.ambient_dim:
            raise IndexError(f"column {p} outside ambient dimension {self.ambient_dim}")
        inv = 1 / r[p]
        r = {k: c * inv for k, c in r.items()}
        for q, row in self._pivot_rows.items():
            a = row.get(p)
            if a:
                axpy(row, -a, r)
        self._pivot_rows[p] = r
        return True

    def contains(self, v: VecLike) -> bool:
        return not self.reduce(v)

    def copy(self) -> "Subspace":
        s = Subspace(self.ambient_dim)
        s._pivot_rows = {p: dict(r) for p, r in self._pivot_rows.items()}
        return s

    def __add__(self, other: "Subspace") -> "Subspace":
        if other.ambient_dim != self.ambient_dim:
            raise ValueError("ambient dimensions differ")
        s = self.copy()
        for r in other.basis:
            s.add(r)
        return s

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self._pivot_rows == other._pivot_rows

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


def span(vectors: Iterable[VecLike], ambient_dim: int) -> Subspace:
    s = Subspace(ambient_dim)
    for v in vectors:
        s.add(v)
    return s


def _as_rows(m) -> tuple:
    if isinstance(m, RatMatrix):
        return m._rows, m.cols
    if isinstance(m, Subspace):
        return m.basis, m.ambient_dim
    raise TypeError(f"expected RatMatrix or Subspace, got {type(m).__name__}")


def echelon(m) -> tuple:
    """Row-reduce ``m``; returns ``(Subspace, rank)``."""
    rows, cols = _as_rows(m)
    s = span(rows, cols)
    return s, s.dim


def rank(m) -> int:
    return echelon(m)[1]


def kernel_basis(m) -> Subspace:
    """Right null space ``{v : m v = 0}``, as an echelonized subspace."""
    rows, cols = _as_rows(m)
    s = span(rows, cols)
    pivots = s._pivot_rows
    free = [c for c in range(cols) if c not in pivots]
    ker = Subspace(cols)
    for f in free:
        v = {f: Fraction(1)}
        for p, row in pivots.items():
            a = row.get(f)
            if a:
                v[p] = -a
        ker.add(v)
    return ker


def quotient_dim(ambient: int, span_: Subspace) -> int:
    if span_.ambient_dim != ambient:
        raise ValueError(
            f"ambient mismatch: span lives in dimension {span_.ambient_dim}, not {ambient}"
        )
    return ambient - span_.dim


def coset_coordinates(span_: Subspace, v: VecLike) -> list:
    """Dense coordinates of ``v + span`` on the non-pivot unit vectors."""
    if not isinstance(v, Mapping) and len(v) != span_.ambient_dim:
        raise ValueError("vector length does not match the ambient dimension")
    return dense(span_.reduce(v), span_.ambient_dim)


def solve(m: RatMatrix, b: VecLike):
    """One solution of ``m x = b`` or None when the system is inconsistent.

    Free variables are set to zero.
    """
    b = sparse(b)
    aug = Subspace(m.cols + 1)
    bc = m.cols
    for i, row in enumerate(m._rows):
        r = dict(row)
        if i in b:
            r[bc] = b[i]
        aug.add(r)
    for i in b:
        if i >= m.rows:
            raise IndexError("right-hand side longer than matrix")
    if bc in aug._pivot_rows:
        return None
    x = {}
    for p, row in aug._pivot_rows.items():
        c = row.get(bc)
        if c:
            x[p] = c
    return x


def inverse(m: RatMatrix) -> RatMatrix:
    if m.rows != m.cols:
        raise ValueError("inverse of a non-square matrix")
    n = m.rows
    aug = Subspace(2 * n)
    for i, row in enumerate(m._rows):
        r = dict(row)
        r[n + i] = Fraction(1)
        aug.add(r)
    if any(p not in aug._pivot_rows for p in range(n)):
        raise ZeroDivisionError("singular matrix")
    out = RatMatrix(n, n)
    for p in range(n):
        out._rows[p] = {k - n: c for k, c in aug._pivot_rows[p].items() if k >= n}
    return out
