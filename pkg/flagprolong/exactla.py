"""
Dokładna algebra liniowa nad liczbami wymiernymi.

Exact linear algebra over Q: dense matrices of ``Fraction`` entries, subspaces
kept in reduced row-echelon form, kernels, affine solves and the deterministic
pivot-rule complement used everywhere a "choice of complement" is needed.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import (
    Dict,
    Hashable,
    Iterable,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

from flagprolong.exceptions import NotContained

logger = logging.getLogger(__name__)

Rat = Fraction
Vector = Tuple[Fraction, ...]
RatLike = Union[int, str, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def to_rat(value: RatLike) -> Fraction:
    """Convert an int, a ``"p/q"`` string or a Fraction into a Fraction.

    Floats are rejected: every decision downstream depends on exact ranks.
    """
    if isinstance(value, bool):
        raise TypeError(f"Expected a rational value, got bool: {value}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"Expected int, str or Fraction, got {type(value).__name__}")


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def unit_vector(n: int, index: int) -> Vector:
    vec = [ZERO] * n
    vec[index] = ONE
    return tuple(vec)


def is_zero_vector(vec: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in vec)


def add_vectors(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def scale_vector(c: Fraction, v: Sequence[Fraction]) -> Vector:
    return tuple(c * x for x in v)


def combine(coefficients: Sequence[Fraction], vectors: Sequence[Vector], n: int) -> Vector:
    """Linear combination sum_k c_k v_k in Q^n."""
    out = [ZERO] * n
    for c, vec in zip(coefficients, vectors):
        if c == 0:
            continue
        for idx, x in enumerate(vec):
            if x != 0:
                out[idx] += c * x
    return tuple(out)


@dataclass(frozen=True)
class Mat:
    """Dense immutable matrix, entries stored row-major."""

    rows: int
    cols: int
    entries: Tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"Matrix {self.rows}x{self.cols} needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )
        if any(not isinstance(x, Fraction) for x in self.entries):
            object.__setattr__(self, "entries", tuple(to_rat(x) for x in self.entries))

    # --- constructors ---------------------------------------------------
    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Mat":
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Mat":
        return cls(n, n, tuple(ONE if r == c else ZERO for r in range(n) for c in range(n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RatLike]], cols: Optional[int] = None) -> "Mat":
        rows = [list(r) for r in rows]
        if cols is None:
            if not rows:
                raise ValueError("Column count is required for an empty row list")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise ValueError(f"All rows must have length {cols}")
        return cls(len(rows), cols, tuple(to_rat(x) for r in rows for x in r))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[RatLike]], rows: int) -> "Mat":
        cols = [list(c) for c in columns]
        if any(len(c) != rows for c in cols):
            raise ValueError(f"All columns must have length {rows}")
        return cls(
            rows,
            len(cols),
            tuple(to_rat(cols[c][r]) for r in range(rows) for c in range(len(cols))),
        )

    @classmethod
    def from_flat(cls, vec: Sequence[RatLike], rows: int, cols: int) -> "Mat":
        return cls(rows, cols, tuple(to_rat(x) for x in vec))

    @classmethod
    def block_diag(cls, blocks: Sequence["Mat"]) -> "Mat":
        rows = sum(b.rows for b in blocks)
        cols = sum(b.cols for b in blocks)
        grid = [[ZERO] * cols for _ in range(rows)]
        r0 = c0 = 0
        for block in blocks:
            for r in range(block.rows):
                for c in range(block.cols):
                    grid[r0 + r][c0 + c] = block[r, c]
            r0 += block.rows
            c0 += block.cols
        return cls.from_rows(grid, cols)

    # --- access -----------------------------------------------------------
    def __getitem__(self, rc: Tuple[int, int]) -> Fraction:
        r, c = rc
        return self.entries[r * self.cols + c]

    def row(self, r: int) -> Vector:
        return self.entries[r * self.cols : (r + 1) * self.cols]

    def col(self, c: int) -> Vector:
        return tuple(self.entries[r * self.cols + c] for r in range(self.rows))

    def to_rows(self) -> List[List[Fraction]]:
        return [list(self.row(r)) for r in range(self.rows)]

    def flatten(self) -> Vector:
        return self.entries

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def is_zero(self) -> bool:
        return is_zero_vector(self.entries)

    def is_identity(self) -> bool:
        if self.rows != self.cols:
            return False
        return all(
            self.entries[r * self.cols + c] == (ONE if r == c else ZERO)
            for r in range(self.rows)
            for c in range(self.cols)
        )

    # --- arithmetic -------------------------------------------------------
    def transpose(self) -> "Mat":
        return Mat(
            self.cols,
            self.rows,
            tuple(self.entries[r * self.cols + c] for c in range(self.cols) for r in range(self.rows)),
        )

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.cols != other.rows:
            raise ValueError(f"Shape mismatch: {self.shape} @ {other.shape}")
        out = [ZERO] * (self.rows * other.cols)
        oc = other.cols
        for r in range(self.rows):
            base = r * oc
            for k in range(self.cols):
                a = self.entries[r * self.cols + k]
                if a == 0:
                    continue
                orow = k * oc
                for c in range(oc):
                    b = other.entries[orow + c]
                    if b != 0:
                        out[base + c] += a * b
        return Mat(self.rows, oc, tuple(out))

    def apply(self, vec: Sequence[Fraction]) -> Vector:
        if len(vec) != self.cols:
            raise ValueError(f"Vector of length {len(vec)} does not fit {self.shape}")
        out = [ZERO] * self.rows
        nz = [(k, x) for k, x in enumerate(vec) if x != 0]
        for r in range(self.rows):
            base = r * self.cols
            acc = ZERO
            for k, x in nz:
                a = self.entries[base + k]
                if a != 0:
                    acc += a * x
            out[r] = acc
        return tuple(out)

    def __add__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError(f"Shape mismatch: {self.shape} + {other.shape}")
        return Mat(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Mat") -> "Mat":
        if self.shape != other.shape:
            raise ValueError(f"Shape mismatch: {self.shape} - {other.shape}")
        return Mat(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Mat":
        return Mat(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c: RatLike) -> "Mat":
        c = to_rat(c)
        return Mat(self.rows, self.cols, tuple(c * a for a in self.entries))

    def commutator(self, other: "Mat") -> "Mat":
        return self @ other - other @ self

    def rank(self) -> int:
        return len(rref(self.to_rows(), self.cols)[1])

    def hstack(self, other: "Mat") -> "Mat":
        if self.rows != other.rows:
            raise ValueError(f"Row mismatch: {self.shape} | {other.shape}")
        rows = [list(self.row(r)) + list(other.row(r)) for r in range(self.rows)]
        return Mat.from_rows(rows, self.cols + other.cols)

    def vstack(self, other: "Mat") -> "Mat":
        if self.cols != other.cols:
            raise ValueError(f"Column mismatch: {self.shape} / {other.shape}")
        return Mat(self.rows + other.rows, self.cols, self.entries + other.entries)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in self.row(r)) for r in range(self.rows))
        return f"Mat({self.rows}x{self.cols}: [{body}])"


def rref(rows: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row-echelon form of a list of rows; returns (nonzero rows, pivots).

    Pivots are searched column by column, left to right, taking the first row
    with a nonzero entry. This order is what makes every derived choice
    (complements, particular solutions) reproducible.
    """
    work = [[to_rat(x) for x in r] for r in rows]
    pivots: List[int] = []
    r = 0
    nrows = len(work)
    for c in range(ncols):
        if r == nrows:
            break
        pivot = next((i for i in range(r, nrows) if work[i][c] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        lead = work[r][c]
        if lead != 1:
            inv = ONE / lead
            work[r] = [x * inv for x in work[r]]
        prow = work[r]
        nz = [k for k in range(c, ncols) if prow[k] != 0]
        for i in range(nrows):
            if i == r:
                continue
            f = work[i][c]
            if f != 0:
                row_i = work[i]
                for k in nz:
                    row_i[k] -= f * prow[k]
        pivots.append(c)
        r += 1
    return work[:r], pivots


def rank(m: Mat) -> int:
    return m.rank()


def _leading_index(vec: Sequence[Fraction]) -> int:
    for idx, x in enumerate(vec):
        if x != 0:
            return idx
    return -1


@dataclass(frozen=True)
class Subspace:
    """Subspace of Q^n; ``basis`` rows are the canonical RREF basis."""

    ambient_dim: int
    basis: Mat

    @classmethod
    def span(cls, vectors: Iterable[Sequence[RatLike]], ambient_dim: int) -> "Subspace":
        rows = [list(v) for v in vectors]
        if any(len(r) != ambient_dim for r in rows):
            raise ValueError(f"All vectors must have length {ambient_dim}")
        reduced, _ = rref(rows, ambient_dim)
        if not reduced:
            return cls.zero(ambient_dim)
        return cls(ambient_dim, Mat.from_rows(reduced, ambient_dim))

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Mat.zeros(0, ambient_dim))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, Mat.identity(ambient_dim))

    @classmethod
    def coordinate(cls, indices: Iterable[int], ambient_dim: int) -> "Subspace":
        return cls.span((unit_vector(ambient_dim, i) for i in sorted(set(indices))), ambient_dim)

    @property
    def dim(self) -> int:
        return self.basis.rows

    def vectors(self) -> Tuple[Vector, ...]:
        return tuple(self.basis.row(r) for r in range(self.basis.rows))

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(_leading_index(v) for v in self.vectors())

    def reduce(self, vec: Sequence[RatLike]) -> Vector:
        """Remainder of ``vec`` after eliminating the pivot coordinates."""
        out = [to_rat(x) for x in vec]
        for row, p in zip(self.vectors(), self.pivots):
            f = out[p]
            if f != 0:
                for k, x in enumerate(row):
                    if x != 0:
                        out[k] -= f * x
        return tuple(out)

    def contains(self, vec: Sequence[RatLike]) -> bool:
        if len(vec) != self.ambient_dim:
            raise ValueError(f"Vector of length {len(vec)} in ambient {self.ambient_dim}")
        return is_zero_vector(self.reduce(vec))

    def coordinates(self, vec: Sequence[RatLike]) -> Vector:
        """Coordinates of ``vec`` in the canonical basis."""
        if not self.contains(vec):
            raise NotContained("Vector does not lie in the subspace")
        return tuple(to_rat(vec[p]) for p in self.pivots)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return self.ambient_dim == other.ambient_dim and all(other.contains(v) for v in self.vectors())

    def __add__(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("Ambient dimensions differ")
        return Subspace.span(self.vectors() + other.vectors(), self.ambient_dim)

    def intersection(self, other: "Subspace") -> "Subspace":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("Ambient dimensions differ")
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.ambient_dim)
        columns = list(self.vectors()) + [scale_vector(-ONE, v) for v in other.vectors()]
        relations = kernel(Mat.from_columns(columns, self.ambient_dim))
        mine = self.vectors()
        return Subspace.span(
            (combine(rel[: self.dim], mine, self.ambient_dim) for rel in relations.vectors()),
            self.ambient_dim,
        )

    def annihilator(self) -> "Subspace":
        """Vectors y with y.v = 0 for every v in the subspace."""
        if self.dim == 0:
            return Subspace.full(self.ambient_dim)
        return kernel(self.basis)


def kernel(m: Mat) -> Subspace:
    """Right null space of ``m``."""
    reduced, pivots = rref(m.to_rows(), m.cols)
    pivot_set = set(pivots)
    vectors = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        vec = [ZERO] * m.cols
        vec[free] = ONE
        for row, p in zip(reduced, pivots):
            vec[p] = -row[free]
        vectors.append(vec)
    return Subspace.span(vectors, m.cols)


def image(m: Mat) -> Subspace:
    """Column space of ``m``."""
    return Subspace.span((m.col(c) for c in range(m.cols)), m.rows)


def complement_in(sub: Subspace, ambient: Subspace) -> Subspace:
    """Deterministic complement W with sub (+) W = ambient.

    W is spanned by the basis vectors of ``ambient`` whose indices are the
    non-pivot columns of ``sub`` written in ambient coordinates.
    """
    if not sub.is_subspace_of(ambient):
        raise NotContained(
            f"Subspace of dim {sub.dim} is not contained in ambient of dim {ambient.dim}"
        )
    coords = [ambient.coordinates(v) for v in sub.vectors()]
    _, pivots = rref(coords, ambient.dim)
    taken = set(pivots)
    amb = ambient.vectors()
    return Subspace.span((amb[i] for i in range(ambient.dim) if i not in taken), ambient.ambient_dim)


class AffineSolution(NamedTuple):
    """Solution set of a.x = b; ``particular`` is None when there is no solution."""

    particular: Optional[Vector]
    kernel: Subspace

    @property
    def solvable(self) -> bool:
        return self.particular is not None


def solve_affine(a: Mat, b: Sequence[RatLike]) -> AffineSolution:
    if len(b) != a.rows:
        raise ValueError(f"Right-hand side of length {len(b)} for matrix {a.shape}")
    augmented = [list(a.row(r)) + [to_rat(b[r])] for r in range(a.rows)]
    reduced, pivots = rref(augmented, a.cols + 1)
    null = kernel(a)
    if pivots and pivots[-1] == a.cols:
        return AffineSolution(None, null)
    particular = [ZERO] * a.cols
    for row, p in zip(reduced, pivots):
        particular[p] = row[a.cols]
    return AffineSolution(tuple(particular), null)


def inverse(m: Mat) -> Mat:
    if m.rows != m.cols:
        raise ValueError(f"Only square matrices are invertible, got {m.shape}")
    n = m.rows
    if m.is_identity():
        return m
    augmented = [list(m.row(r)) + list(unit_vector(n, r)) for r in range(n)]
    reduced, pivots = rref(augmented, 2 * n)
    if pivots[:n] != list(range(n)) or len(reduced) < n:
        raise ValueError("Matrix is singular")
    return Mat.from_rows([row[n:] for row in reduced], n)


@dataclass(frozen=True)
class LeftInverse:
    """Left inverse of a full-column-rank matrix through a pivot set of rows."""

    rows: Tuple[int, ...]
    matrix: Mat

    def solve(self, target: Sequence[Fraction]) -> Vector:
        return self.matrix.apply([target[r] for r in self.rows])


def pivot_left_inverse(m: Mat) -> LeftInverse:
    """Pick the first independent rows of ``m`` and invert the square block they form."""
    _, pivots = rref(m.transpose().to_rows(), m.rows)
    if len(pivots) != m.cols:
        raise ValueError(f"Matrix {m.shape} does not have full column rank")
    block = Mat.from_rows([m.row(r) for r in pivots], m.cols) if pivots else Mat.zeros(0, 0)
    return LeftInverse(tuple(pivots), inverse(block) if pivots else block)


@dataclass(frozen=True)
class DirectSumLayout:
    """Index arithmetic for a direct sum of labelled summands."""

    summands: Tuple[Tuple[Hashable, int], ...]

    @property
    def total(self) -> int:
        return sum(dim for _, dim in self.summands)

    @property
    def keys(self) -> Tuple[Hashable, ...]:
        return tuple(key for key, _ in self.summands)

    def dim(self, key: Hashable) -> int:
        for k, dim in self.summands:
            if k == key:
                return dim
        raise KeyError(key)

    def offset(self, key: Hashable) -> int:
        acc = 0
        for k, dim in self.summands:
            if k == key:
                return acc
            acc += dim
        raise KeyError(key)

    def split(self, vec: Sequence[Fraction]) -> Dict[Hashable, Vector]:
        if len(vec) != self.total:
            raise ValueError(f"Vector of length {len(vec)} for layout of size {self.total}")
        out = {}
        acc = 0
        for key, dim in self.summands:
            out[key] = tuple(vec[acc : acc + dim])
            acc += dim
        return out

    def join(self, parts: Dict[Hashable, Sequence[Fraction]]) -> Vector:
        out: List[Fraction] = []
        for key, dim in self.summands:
            part = parts.get(key)
            out.extend(part if part is not None else (ZERO,) * dim)
        return tuple(out)


def hom_index(src_dim: int, row: int, col: int) -> int:
    """Position of entry (row, col) of a map in Hom(Q^src_dim, .), flattened row-major."""
    return row * src_dim + col


__all__ = [
    "Rat",
    "Vector",
    "to_rat",
    "zero_vector",
    "unit_vector",
    "is_zero_vector",
    "add_vectors",
    "scale_vector",
    "combine",
    "Mat",
    "rref",
    "rank",
    "Subspace",
    "kernel",
    "image",
    "complement_in",
    "AffineSolution",
    "solve_affine",
    "inverse",
    "LeftInverse",
    "pivot_left_inverse",
    "DirectSumLayout",
    "hom_index",
]
