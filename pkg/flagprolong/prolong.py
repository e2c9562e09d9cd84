"""
Przedłużenia Tanaki i operatory Spencera.

Degree-0 derivation algebras, the universal algebraic prolongation built degree
by degree, the assembled brackets of the prolonged algebra, and the graded
Spencer operators whose kernels reproduce the next prolongation.

An element of degree d >= 0 is stored as its action on m: a dict mapping every
negative degree i to the matrix of g^i -> g^(i+d). When i+d >= 0 the columns are
coordinates in the basis of the already computed component g^(i+d); degree-0
coordinates refer to the basis of the ``Subalgebra0``.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

from flagprolong import config
from flagprolong.exactla import (
    ONE,
    ZERO,
    DirectSumLayout,
    LeftInverse,
    Mat,
    Subspace,
    Vector,
    combine,
    complement_in,
    hom_index,
    image,
    kernel,
    pivot_left_inverse,
    scale_vector,
    solve_affine,
    unit_vector,
)
from flagprolong.exceptions import NotASubalgebra, NotContained, TruncatedBracket
from flagprolong.symbols import BasisKey, NilpotentSymbol, standard_symplectic_form

logger = logging.getLogger(__name__)

Action = Dict[int, Mat]

FAMILIES = ("full", "csp", "sp", "custom")


def _mix(coefficients: Sequence[Fraction], elements: Sequence[Action], degrees: Sequence[int]) -> Action:
    """Linear combination of block maps, degree by degree."""
    out: Action = {}
    for i in degrees:
        rows, cols = elements[0][i].shape
        flat = combine(coefficients, [e[i].flatten() for e in elements], rows * cols)
        out[i] = Mat(rows, cols, flat)
    return out


def _dense(rows: Sequence[Dict[int, Fraction]], ncols: int) -> Mat:
    grid = []
    for row in rows:
        dense = [ZERO] * ncols
        for col, value in row.items():
            dense[col] = value
        grid.append(dense)
    return Mat.from_rows(grid, ncols)


def _accumulate(row: Dict[int, Fraction], col: int, value: Fraction) -> None:
    if value == 0:
        return
    updated = row.get(col, ZERO) + value
    if updated == 0:
        row.pop(col, None)
    else:
        row[col] = updated


class _Tower:
    """m together with the nonnegative components computed so far."""

    def __init__(self, m: NilpotentSymbol, actions: List[List[Action]]):
        self.m = m
        self.actions = actions
        self._right: Dict[Tuple[int, BasisKey], Mat] = {}

    @property
    def top(self) -> int:
        return len(self.actions) - 1

    def dim(self, degree: int) -> int:
        if degree < 0:
            return self.m.dim(degree)
        if degree < len(self.actions):
            return len(self.actions[degree])
        return 0

    def right_matrix(self, degree: int, y: BasisKey) -> Mat:
        """Matrix of Y -> [Y, y] from ``degree`` to ``degree + deg y``."""
        cached = self._right.get((degree, y))
        if cached is not None:
            return cached
        if degree < 0:
            result = self.m.right_bracket_matrix(degree, y)
        else:
            elements = self.actions[degree] if degree < len(self.actions) else []
            rows = self.dim(degree + y[0])
            if rows == 0:
                result = Mat.zeros(0, len(elements))
            else:
                result = Mat.from_columns([e[y[0]].col(y[1]) for e in elements], rows)
        self._right[(degree, y)] = result
        return result


def _hom_layout(tower: _Tower, k: int) -> DirectSumLayout:
    m = tower.m
    return DirectSumLayout(
        tuple((i, tower.dim(i + k) * m.dim(i)) for i in range(-m.depth, 0))
    )


def _leibniz_system(tower: _Tower, k: int) -> Tuple[DirectSumLayout, Mat]:
    """f[x, y] = [f x, y] + [x, f y] over all basis pairs, unknown f of degree k."""
    m = tower.m
    layout = _hom_layout(tower, k)
    offsets = {i: layout.offset(i) for i in layout.keys}

    def var(i: int, r: int, c: int) -> int:
        return offsets[i] + hom_index(m.dim(i), r, c)

    rows: List[Dict[int, Fraction]] = []
    for x, y in itertools.combinations(m.basis_keys(), 2):
        (i, a), (j, b) = x, y
        size = tower.dim(i + j + k)
        if size == 0:
            continue
        block: List[Dict[int, Fraction]] = [{} for _ in range(size)]
        if m.dim(i + j):
            for s, cs in enumerate(m.bracket_basis(x, y)):
                if cs != 0:
                    for r in range(size):
                        _accumulate(block[r], var(i + j, r, s), cs)
        ry = tower.right_matrix(i + k, y)
        for r in range(size):
            for u in range(ry.cols):
                _accumulate(block[r], var(i, u, a), -ry[r, u])
        rx = tower.right_matrix(j + k, x)
        for r in range(size):
            for u in range(rx.cols):
                _accumulate(block[r], var(j, u, b), rx[r, u])
        rows.extend(row for row in block if row)
    logger.debug(
        "PROLONG: degree %d system with %d unknowns and %d equations", k, layout.total, len(rows)
    )
    return layout, _dense(rows, layout.total)


def _unflatten(tower: _Tower, layout: DirectSumLayout, k: int, vec: Vector) -> Action:
    parts = layout.split(vec)
    return {
        i: Mat.from_flat(parts[i], tower.dim(i + k), tower.m.dim(i)) for i in layout.keys
    }


# --- degree 0 ----------------------------------------------------------------


@dataclass(frozen=True)
class Subalgebra0:
    """Subalgebra of grading-preserving derivations of m.

    ``extended_action[e]`` holds the matrices of basis element e on every
    negative degree; ``basis_on_gminus1[e]`` is its degree -1 block.
    """

    parent: NilpotentSymbol
    basis_on_gminus1: Tuple[Mat, ...]
    extended_action: Tuple[Action, ...]
    name: str = "g0"

    @property
    def dim(self) -> int:
        return len(self.basis_on_gminus1)

    @cached_property
    def _projection(self) -> Mat:
        n = self.parent.dim(-1)
        return Mat.from_columns([a.flatten() for a in self.basis_on_gminus1], n * n)

    def coordinates(self, matrix: Mat) -> Vector:
        """Coordinates of a g^{-1} action in this basis."""
        solution = solve_affine(self._projection, matrix.flatten())
        if not solution.solvable:
            raise NotContained(f"Matrix is not in {self.name}")
        return solution.particular

    def contains(self, matrix: Mat) -> bool:
        return solve_affine(self._projection, matrix.flatten()).solvable

    def commutator(self, e1: int, e2: int) -> Vector:
        a, b = self.basis_on_gminus1[e1], self.basis_on_gminus1[e2]
        return self.coordinates(a.commutator(b))

    def is_closed(self) -> bool:
        for e1, e2 in itertools.combinations(range(self.dim), 2):
            a, b = self.basis_on_gminus1[e1], self.basis_on_gminus1[e2]
            if not self.contains(a.commutator(b)):
                return False
        return True

    def is_derivation_algebra(self) -> bool:
        m = self.parent
        keys = m.basis_keys()
        for action in self.extended_action:
            for x, y in itertools.combinations(keys, 2):
                t = x[0] + y[0]
                if m.dim(t) == 0:
                    continue
                lhs = action[t].apply(m.bracket_basis(x, y))
                dx = action[x[0]].col(x[1])
                dy = action[y[0]].col(y[1])
                rhs = [
                    p + q
                    for p, q in zip(
                        m.bracket(x[0], dx, y[0], unit_vector(m.dim(y[0]), y[1])),
                        m.bracket(x[0], unit_vector(m.dim(x[0]), x[1]), y[0], dy),
                    )
                ]
                if list(lhs) != rhs:
                    return False
        return True

    def verify(self) -> Dict[str, bool]:
        return {"derivation": self.is_derivation_algebra(), "closed": self.is_closed()}

    def matrices(self) -> List[List[List[str]]]:
        return [[[str(x) for x in row] for row in a.to_rows()] for a in self.basis_on_gminus1]


def _subalgebra_from(derivations: Subalgebra0, coefficient_vectors: Sequence[Vector], name: str) -> Subalgebra0:
    degrees = derivations.parent.degrees
    actions = tuple(
        _mix(c, derivations.extended_action, degrees) for c in coefficient_vectors
    )
    return Subalgebra0(
        parent=derivations.parent,
        basis_on_gminus1=tuple(a[-1] for a in actions),
        extended_action=actions,
        name=name,
    )


def derivations0(m: NilpotentSymbol) -> Subalgebra0:
    """All derivations of m preserving the grading."""
    tower = _Tower(m, [])
    layout, system = _leibniz_system(tower, 0)
    solution = kernel(system)
    actions = tuple(_unflatten(tower, layout, 0, v) for v in solution.vectors())
    logger.info("PROLONG: derivations of %s have dim %d", m.name, len(actions))
    return Subalgebra0(
        parent=m,
        basis_on_gminus1=tuple(a[-1] for a in actions),
        extended_action=actions,
        name=f"der0({m.name})",
    )


def _symplectic_restriction(derivations: Subalgebra0, omega: Mat, conformal: bool) -> List[Vector]:
    n = derivations.parent.dim(-1)
    if omega.shape != (n, n):
        raise ValueError(f"Form of shape {omega.shape} does not act on g^-1 of dim {n}")
    columns = [
        (a.transpose() @ omega + omega @ a).flatten() for a in derivations.basis_on_gminus1
    ]
    if conformal:
        columns.append((-omega).flatten())
    solution = kernel(Mat.from_columns(columns, n * n))
    return [v[: derivations.dim] for v in solution.vectors()]


def restrict_to(
    family: str,
    m: NilpotentSymbol,
    omega: Optional[Mat] = None,
    matrices: Optional[Sequence[Mat]] = None,
    derivations: Optional[Subalgebra0] = None,
) -> Subalgebra0:
    """Intersect derivations0(m) with a matrix subalgebra of gl(g^{-1}).

    ``sp``/``csp`` use ``omega`` (default: the form carried by m, else the
    standard one); ``custom`` takes the g^{-1} matrices of a spanning set.
    """
    if family not in FAMILIES:
        raise ValueError(f"Unknown family: {family}. Available: {', '.join(FAMILIES)}")
    derivations = derivations or derivations0(m)
    if family == "full":
        return derivations

    if family in ("sp", "csp"):
        form = omega if omega is not None else m.omega
        if form is None:
            form = standard_symplectic_form(m.dim(-1))
        vectors = _symplectic_restriction(derivations, form, conformal=family == "csp")
        result = _subalgebra_from(derivations, vectors, f"{family}({m.name})")
        logger.info("PROLONG: %s restricted to dim %d", result.name, result.dim)
        return result

    if not matrices:
        raise NotASubalgebra("Custom family needs at least one matrix")
    coefficients = []
    for idx, matrix in enumerate(matrices):
        solution = solve_affine(derivations._projection, matrix.flatten())
        if not solution.solvable:
            raise NotASubalgebra(f"Matrix {idx} is not the g^-1 part of a derivation of {m.name}")
        coefficients.append(solution.particular)
    span = Subspace.span(coefficients, derivations.dim)
    result = _subalgebra_from(derivations, span.vectors(), f"custom({m.name})")
    if not result.is_closed():
        raise NotASubalgebra(f"Span of {len(matrices)} matrices is not closed under commutator")
    logger.info("PROLONG: custom subalgebra of dim %d", result.dim)
    return result


# --- positive degrees ----------------------------------------------------------


@dataclass(frozen=True)
class ProlongComponent:
    """g^k: basis of block maps plus the solution space they came from."""

    degree: int
    basis: Tuple[Action, ...]
    layout: DirectSumLayout
    solution: Subspace

    @property
    def dim(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class ProlongStatus:
    terminated: bool
    degree: int

    def __str__(self) -> str:
        return f"{'Terminated' if self.terminated else 'Capped'} {self.degree}"

    def as_dict(self) -> Dict[str, Any]:
        return {"kind": "terminated" if self.terminated else "capped", "degree": self.degree}


class ProlongedAlgebra:
    """u(m, g0) = m + g0 + g^1 + ... with brackets assembled on demand.

    Brackets of two nonnegative elements are found from their action on g^{-1}
    and memoized per basis pair.
    """

    def __init__(
        self,
        m: NilpotentSymbol,
        g0: Subalgebra0,
        components: Sequence[ProlongComponent],
        status: ProlongStatus,
    ):
        self.m = m
        self.g0 = g0
        self.components = tuple(components)
        self.status = status
        self._tower = _Tower(m, [list(g0.extended_action)] + [list(c.basis) for c in components])
        self._memo: Dict[Tuple[BasisKey, BasisKey], Vector] = {}
        self._inverses: Dict[int, LeftInverse] = {}
        self.checks: Dict[str, Optional[bool]] = {}

    # --- dimensions -----------------------------------------------------------
    @property
    def top(self) -> int:
        return self._tower.top

    def dim(self, degree: int) -> int:
        return self._tower.dim(degree)

    def graded_dims(self) -> Dict[int, int]:
        return {d: self.dim(d) for d in range(-self.m.depth, self.top + 1)}

    @property
    def total_dim(self) -> int:
        return sum(self.graded_dims().values())

    def basis_keys(self) -> List[BasisKey]:
        return [(d, a) for d in range(-self.m.depth, self.top + 1) for a in range(self.dim(d))]

    def element(self, degree: int, index: int) -> Action:
        return self._tower.actions[degree][index]

    def right_matrix(self, degree: int, y: BasisKey) -> Mat:
        return self._tower.right_matrix(degree, y)

    # --- brackets ---------------------------------------------------------------
    def _check_range(self, degree: int) -> None:
        if degree > self.top and not self.status.terminated:
            raise TruncatedBracket(
                f"Degree {degree} lies beyond the computed range of a prolongation {self.status}"
            )

    def bracket_basis(self, x: BasisKey, y: BasisKey) -> Vector:
        (d1, a), (d2, b) = x, y
        self._check_range(d1 + d2)
        if self.dim(d1 + d2) == 0:
            return ()
        if d1 < 0 and d2 < 0:
            return self.m.bracket_basis(x, y)
        if d2 < 0:
            return self._tower.actions[d1][a][d2].col(b)
        if d1 < 0:
            return scale_vector(-ONE, self.bracket_basis(y, x))
        key = (x, y)
        if key not in self._memo:
            self._memo[key] = self._nonnegative_bracket(x, y)
        return self._memo[key]

    def bracket(self, d1: int, u: Sequence[Fraction], d2: int, v: Sequence[Fraction]) -> Vector:
        self._check_range(d1 + d2)
        n = self.dim(d1 + d2)
        out = [ZERO] * n
        if n == 0:
            return ()
        for a, ua in enumerate(u):
            if ua == 0:
                continue
            for b, vb in enumerate(v):
                if vb == 0:
                    continue
                for idx, value in enumerate(self.bracket_basis((d1, a), (d2, b))):
                    if value != 0:
                        out[idx] += ua * vb * value
        return tuple(out)

    def _restriction_inverse(self, degree: int) -> LeftInverse:
        if degree not in self._inverses:
            rows = self.dim(degree - 1) * self.m.dim(-1)
            columns = [e[-1].flatten() for e in self._tower.actions[degree]]
            self._inverses[degree] = pivot_left_inverse(Mat.from_columns(columns, rows))
        return self._inverses[degree]

    def _nonnegative_bracket(self, x: BasisKey, y: BasisKey) -> Vector:
        # [[X, Y], v] = [X, [Y, v]] - [Y, [X, v]] on g^{-1}
        (d1, a), (d2, b) = x, y
        n1 = self.m.dim(-1)
        ex = unit_vector(self.dim(d1), a)
        ey = unit_vector(self.dim(d2), b)
        columns = []
        for c in range(n1):
            yv = self.bracket_basis(y, (-1, c))
            xv = self.bracket_basis(x, (-1, c))
            first = self.bracket(d1, ex, d2 - 1, yv)
            second = self.bracket(d2, ey, d1 - 1, xv)
            columns.append(tuple(p - q for p, q in zip(first, second)))
        restricted = Mat.from_columns(columns, self.dim(d1 + d2 - 1))
        return self._restriction_inverse(d1 + d2).solve(restricted.flatten())

    def bracket_table(self) -> List[Dict[str, Any]]:
        """Nonzero structure constants for pairs x < y inside the computed range."""
        entries = []
        for x, y in itertools.combinations(self.basis_keys(), 2):
            if x[0] + y[0] > self.top:
                continue
            value = self.bracket_basis(x, y)
            terms = [[[x[0] + y[0], k], str(c)] for k, c in enumerate(value) if c != 0]
            if terms:
                entries.append({"x": list(x), "y": list(y), "value": terms})
        return entries

    def describe_basis(self) -> Dict[str, List[Dict[str, List[List[str]]]]]:
        out = {}
        for d in range(0, self.top + 1):
            out[str(d)] = [
                {str(i): [[str(q) for q in row] for row in block.to_rows()] for i, block in e.items()}
                for e in self._tower.actions[d]
            ]
        return out

    # --- checks -------------------------------------------------------------------
    def verify_jacobi(self) -> bool:
        """Jacobi on basis triples; a capped algebra only checks triples whose
        nested brackets all stay within the computed degrees."""
        low = -self.m.depth
        capped = not self.status.terminated
        for x, y, z in itertools.combinations(self.basis_keys(), 3):
            total = x[0] + y[0] + z[0]
            if total < low or total > self.top or self.dim(total) == 0:
                continue
            if capped and max(x[0] + y[0], y[0] + z[0], z[0] + x[0]) > self.top:
                continue
            acc = [ZERO] * self.dim(total)
            for p, q, r in ((x, y, z), (y, z, x), (z, x, y)):
                # past the last nonzero degree of a terminated algebra brackets vanish
                inner = self.bracket_basis(q, r) if q[0] + r[0] <= self.top else ()
                if not inner:
                    continue
                outer = self.bracket(p[0], unit_vector(self.dim(p[0]), p[1]), q[0] + r[0], inner)
                for idx, value in enumerate(outer):
                    acc[idx] += value
            if any(value != 0 for value in acc):
                logger.warning("PROLONG: Jacobi fails on %s, %s, %s", x, y, z)
                return False
        return True

    def check_univdef(self) -> bool:
        """No positive-degree basis element annihilates g^{-1}."""
        return all(
            not e[-1].is_zero() for d in range(1, self.top + 1) for e in self._tower.actions[d]
        )

    def check_determinacy(self) -> bool:
        """Restriction to g^{-1} is injective on every nonnegative component."""
        n1 = self.m.dim(-1)
        for d in range(0, self.top + 1):
            if self.dim(d) == 0:
                continue
            columns = [e[-1].flatten() for e in self._tower.actions[d]]
            if Mat.from_columns(columns, self.dim(d - 1) * n1).rank() != self.dim(d):
                return False
        return True

    def check_termination(self) -> Optional[bool]:
        """The graded Spencer operator at the last degree has no kernel."""
        if not self.status.terminated:
            return None
        return spencer_gr(self, self.top).kernel().dim == 0

    def run_checks(self) -> Dict[str, Optional[bool]]:
        checks: Dict[str, Optional[bool]] = {
            "jacobi": None,
            "univdef": None,
            "determinacy": None,
            "termination": self.check_termination(),
        }
        if self.total_dim <= config.JACOBI_MAX_DIM:
            checks["jacobi"] = self.verify_jacobi()
        else:
            logger.info(
                "PROLONG: Jacobi check skipped (total dim %d above %d)",
                self.total_dim,
                config.JACOBI_MAX_DIM,
            )
        if config.VERIFY_DETERMINACY:
            checks["univdef"] = self.check_univdef()
            checks["determinacy"] = self.check_determinacy()
        self.checks = checks
        return checks


def tanaka_prolong(
    m: NilpotentSymbol, g0: Subalgebra0, max_degree: int, run_checks: bool = True
) -> ProlongedAlgebra:
    """Compute g^1..g^max_degree, stopping at the first vanishing component."""
    if max_degree < 1:
        raise ValueError(f"max_degree must be >= 1, got {max_degree}")
    if g0.parent.dims != m.dims:
        raise ValueError(f"Subalgebra {g0.name} belongs to a different symbol")
    tower = _Tower(m, [list(g0.extended_action)])
    components: List[ProlongComponent] = []
    status = ProlongStatus(False, max_degree)
    for k in range(1, max_degree + 1):
        layout, system = _leibniz_system(tower, k)
        solution = kernel(system)
        logger.info("PROLONG: degree %d has dim %d (%d unknowns)", k, solution.dim, layout.total)
        if solution.dim == 0:
            status = ProlongStatus(True, k - 1)
            break
        basis = tuple(_unflatten(tower, layout, k, v) for v in solution.vectors())
        components.append(ProlongComponent(k, basis, layout, solution))
        tower.actions.append(list(basis))
    algebra = ProlongedAlgebra(m, g0, components, status)
    logger.info("PROLONG: %s with %s, graded dims %s", m.name, status, algebra.graded_dims())
    if run_checks:
        algebra.run_checks()
    return algebra


# --- Spencer operators ----------------------------------------------------------


@dataclass(frozen=True)
class SpencerMap:
    """Matrix of the graded Spencer operator of degree k.

    Domain keys are degrees i: Hom(g^i, g^(i+k+1)) for i < 0, then
    Hom(g^i, g^k) for 0 <= i < k. Target keys are ("tensor", i) for
    Hom(g^-1 (x) g^i, .) and ("wedge", -1) for Hom(g^-1 ^ g^-1, g^(k-1)).
    """

    degree: int
    domain: DirectSumLayout
    target: DirectSumLayout
    matrix: Mat

    def __post_init__(self):
        if self.matrix.shape != (self.target.total, self.domain.total):
            raise ValueError(
                f"Matrix {self.matrix.shape} does not match {self.target.total}x{self.domain.total}"
            )

    @property
    def domain_dims(self) -> Dict[Any, int]:
        return dict(self.domain.summands)

    @property
    def target_dims(self) -> Dict[Any, int]:
        return dict(self.target.summands)

    @property
    def negative_size(self) -> int:
        return sum(dim for key, dim in self.domain.summands if key < 0)

    def kernel(self) -> Subspace:
        return kernel(self.matrix)

    def image(self) -> Subspace:
        return image(self.matrix)

    def rank(self) -> int:
        return self.matrix.rank()

    def kernel_on_negative(self) -> Subspace:
        """Kernel vectors truncated to the negative summands."""
        n = self.negative_size
        return Subspace.span((v[:n] for v in self.kernel().vectors()), n)

    def kernel_vanishes_on_nonnegative(self) -> bool:
        n = self.negative_size
        return all(all(x == 0 for x in v[n:]) for v in self.kernel().vectors())


def spencer_gr(algebra: ProlongedAlgebra, k: int) -> SpencerMap:
    if k < 0:
        raise ValueError(f"Spencer degree must be >= 0, got {k}")
    algebra._check_range(k)
    m = algebra.m
    mu = m.depth
    n1 = m.dim(-1)

    def src(i: int) -> int:
        return m.dim(i) if i < 0 else algebra.dim(i)

    domain = DirectSumLayout(
        tuple((i, algebra.dim(i + k + 1) * m.dim(i)) for i in range(-mu, 0))
        + tuple((i, algebra.dim(k) * algebra.dim(i)) for i in range(0, k))
    )
    offsets = {i: domain.offset(i) for i in domain.keys}

    def var(i: int, r: int, c: int) -> int:
        return offsets[i] + hom_index(src(i), r, c)

    pairs = list(itertools.combinations(range(n1), 2))
    summands = [(("tensor", i), n1 * m.dim(i) * algebra.dim(i + k)) for i in range(-mu, -1)]
    summands.append((("wedge", -1), len(pairs) * algebra.dim(k - 1)))
    summands.extend((("tensor", i), n1 * algebra.dim(i) * algebra.dim(k - 1)) for i in range(0, k))
    target = DirectSumLayout(tuple(summands))
    rows: List[Dict[int, Fraction]] = [{} for _ in range(target.total)]

    def negative_entry(base: int, size: int, a: int, i: int, b: int) -> None:
        v1, v2 = (-1, a), (i, b)
        r2 = algebra.right_matrix(k, v2)
        r1 = algebra.right_matrix(i + k + 1, v1)
        c = m.bracket_basis(v1, v2) if m.dim(i - 1) else ()
        for t in range(size):
            row = rows[base + t]
            for r in range(r2.cols):
                _accumulate(row, var(-1, r, a), r2[t, r])
            for r in range(r1.cols):
                _accumulate(row, var(i, r, b), -r1[t, r])
            for s, cs in enumerate(c):
                _accumulate(row, var(i - 1, t, s), -cs)

    for i in range(-mu, -1):
        size = algebra.dim(i + k)
        start = target.offset(("tensor", i))
        for a in range(n1):
            for b in range(m.dim(i)):
                negative_entry(start + (a * m.dim(i) + b) * size, size, a, i, b)

    size = algebra.dim(k - 1)
    start = target.offset(("wedge", -1))
    for idx, (a, b) in enumerate(pairs):
        negative_entry(start + idx * size, size, a, -1, b)

    for i in range(0, k):
        start = target.offset(("tensor", i))
        for a in range(n1):
            r1 = algebra.right_matrix(k, (-1, a))
            for b in range(algebra.dim(i)):
                base = start + (a * algebra.dim(i) + b) * size
                for t in range(size):
                    for r in range(r1.cols):
                        _accumulate(rows[base + t], var(i, r, b), -r1[t, r])

    spencer = SpencerMap(k, domain, target, _dense(rows, domain.total))
    logger.info(
        "SPENCER: degree %d, %d -> %d, rank %d", k, domain.total, target.total, spencer.rank()
    )
    return spencer


def normalization_complement(s: SpencerMap) -> Subspace:
    """Pivot-rule complement of the image of s in its target."""
    return complement_in(s.image(), Subspace.full(s.matrix.rows))


__all__ = [
    "FAMILIES",
    "Subalgebra0",
    "ProlongComponent",
    "ProlongStatus",
    "ProlongedAlgebra",
    "SpencerMap",
    "derivations0",
    "restrict_to",
    "tanaka_prolong",
    "spencer_gr",
    "normalization_complement",
]
