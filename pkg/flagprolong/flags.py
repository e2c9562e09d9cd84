"""
Symbole flagowe i ich przedłużenia.

Degree -1 endomorphism data of graded spaces (the delta_rp and tau_m families
and their direct sums), flag symbols inside gr g0(m), the flag-symbol
prolongation, its parameterized variant and the symplectic-flag criterion.

Graded coordinates of gl(W) are the matrix units of gl(gr W): for coordinate
flags these are the standard coordinates, otherwise every matrix is first
conjugated by the adapted frame of the flag.
"""

import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from flagprolong.exactla import ONE, ZERO, Mat, Subspace, kernel
from flagprolong.exceptions import InvalidFlagSymbol, MixedStructure, NotASubalgebra
from flagprolong.graded import FiltrationSpec, GradedSubspace, gl_filtration, gr_subspace
from flagprolong.prolong import ProlongStatus, Subalgebra0, restrict_to
from flagprolong.symbols import NilpotentSymbol, build_commutative, heisenberg_from_form

logger = logging.getLogger(__name__)

AMBIENTS = ("full", "csp", "sp")


@dataclass(frozen=True)
class GradedEndomorphism:
    """Degree -1 endomorphism of a graded space given on a weighted basis."""

    weights: Tuple[int, ...]
    matrix: Mat
    omega: Optional[Mat] = None
    name: str = "delta"

    def __post_init__(self):
        n = len(self.weights)
        if self.matrix.shape != (n, n):
            raise InvalidFlagSymbol(f"Matrix {self.matrix.shape} does not act on {n} weights")
        for r in range(n):
            for c in range(n):
                if self.matrix[r, c] != 0 and self.weights[r] != self.weights[c] - 1:
                    raise InvalidFlagSymbol(
                        f"Entry ({r}, {c}) maps weight {self.weights[c]} to {self.weights[r]}"
                    )
        if self.omega is not None and self.omega.shape != (n, n):
            raise InvalidFlagSymbol(f"Form {self.omega.shape} does not act on {n} weights")

    @property
    def dim(self) -> int:
        return len(self.weights)

    def graded_dims(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for w in self.weights:
            out[w] = out.get(w, 0) + 1
        return dict(sorted(out.items(), reverse=True))

    def flag(self) -> FiltrationSpec:
        return FiltrationSpec.from_weights(self.weights)

    def negated(self) -> "GradedEndomorphism":
        return GradedEndomorphism(self.weights, -self.matrix, self.omega, f"-{self.name}")


def _shift(weights: Sequence[int], sign: int = 1) -> Mat:
    """E_w -> sign * E_(w-1) on a basis listed by descending weight."""
    n = len(weights)
    rows = [[ZERO] * n for _ in range(n)]
    index = {w: k for k, w in enumerate(weights)}
    for k, w in enumerate(weights):
        if w - 1 in index:
            rows[index[w - 1]][k] = ONE * sign
    return Mat.from_rows(rows, n)


def make_delta_rp(r: int, p: int) -> GradedEndomorphism:
    if not (r <= p < 0):
        raise InvalidFlagSymbol(f"delta_rp needs r <= p < 0, got r={r}, p={p}")
    weights = tuple(range(p, r - 1, -1))
    return GradedEndomorphism(weights, _shift(weights), name=f"delta({r},{p})")


def make_tau_m(m: int, sign: int = 1) -> GradedEndomorphism:
    """tau_m on L_m with omega(E_i, E_j) nonzero only for i + j = -3."""
    if m < 1:
        raise InvalidFlagSymbol(f"tau_m needs m >= 1, got {m}")
    if sign not in (1, -1):
        raise InvalidFlagSymbol(f"Sign must be +1 or -1, got {sign}")
    weights = tuple(range(m - 2, -m - 2, -1))
    n = len(weights)
    index = {w: k for k, w in enumerate(weights)}
    rows = [[ZERO] * n for _ in range(n)]
    for w in weights:
        rows[index[w]][index[-3 - w]] = ONE if (w + 1) % 2 == 0 else -ONE
    omega = Mat.from_rows(rows, n)
    name = f"tau({m})" if sign == 1 else f"-tau({m})"
    return GradedEndomorphism(weights, _shift(weights, sign), omega, name)


def direct_sum(parts: Sequence[GradedEndomorphism]) -> GradedEndomorphism:
    if not parts:
        raise InvalidFlagSymbol("Direct sum needs at least one part")
    if len(parts) == 1:
        return parts[0]
    with_form = [p.omega is not None for p in parts]
    if any(with_form) and not all(with_form):
        raise MixedStructure("Either every part carries a symplectic form or none does")
    weights = tuple(w for p in parts for w in p.weights)
    matrix = Mat.block_diag([p.matrix for p in parts])
    omega = Mat.block_diag([p.omega for p in parts]) if all(with_form) else None
    return GradedEndomorphism(weights, matrix, omega, " + ".join(p.name for p in parts))


def _as_square(vec: Sequence, n: int) -> Mat:
    return Mat.from_flat(vec, n, n)


def _graded_matrix(flag: FiltrationSpec, matrix: Mat) -> Mat:
    frame = flag.frame
    if frame.basis.is_identity():
        return matrix
    return frame.inverse @ matrix @ frame.basis


@dataclass(frozen=True)
class FlagSymbol:
    """Commutative delta inside the degree -1 part of gr(ambient)."""

    flag: FiltrationSpec
    ambient: Subalgebra0
    delta: Subspace
    parameterized: bool = False
    name: str = "delta"

    def __post_init__(self):
        n = self.flag.ambient_dim
        if n != self.ambient.parent.dim(-1):
            raise InvalidFlagSymbol(f"Flag of dim {n} on g^-1 of dim {self.ambient.parent.dim(-1)}")
        if self.delta.ambient_dim != n * n or self.delta.dim == 0:
            raise InvalidFlagSymbol("delta must be a nonzero subspace of gl(gr g^-1)")
        if not self.delta.is_subspace_of(self.graded_ambient.part(-1)):
            raise InvalidFlagSymbol(f"{self.name} is not in the degree -1 part of gr {self.ambient.name}")
        for x in self.delta_matrices():
            for y in self.delta_matrices():
                if not x.commutator(y).is_zero():
                    raise InvalidFlagSymbol(f"{self.name} is not commutative")

    @property
    def n(self) -> int:
        return self.flag.ambient_dim

    @cached_property
    def graded_ambient(self) -> GradedSubspace:
        weights = self.flag.weights
        coordinate_flag = FiltrationSpec.from_weights(weights)
        vectors = [_graded_matrix(self.flag, a).flatten() for a in self.ambient.basis_on_gminus1]
        return gr_subspace(gl_filtration(coordinate_flag), Subspace.span(vectors, self.n * self.n))

    def delta_matrices(self) -> List[Mat]:
        return [_as_square(v, self.n) for v in self.delta.vectors()]


def make_flag_symbol(
    datum: GradedEndomorphism, ambient: Optional[str] = None, parameterized: bool = False
) -> FlagSymbol:
    """Flag symbol of ``datum`` over commutative m, or Heisenberg m when it carries omega."""
    family = ambient or ("csp" if datum.omega is not None else "full")
    if family not in AMBIENTS:
        raise ValueError(f"Unknown ambient: {family}. Available: {', '.join(AMBIENTS)}")
    if datum.omega is not None:
        m: NilpotentSymbol = heisenberg_from_form(datum.omega, name=f"heisenberg({datum.dim + 1})")
    else:
        m = build_commutative(datum.dim)
    g0 = restrict_to(family, m, omega=datum.omega)
    flag = datum.flag()
    delta = Subspace.span([_graded_matrix(flag, datum.matrix).flatten()], datum.dim**2)
    logger.info("FLAG: %s over %s in gr %s", datum.name, m.name, g0.name)
    return FlagSymbol(flag, g0, delta, parameterized, datum.name)


@dataclass(frozen=True)
class FlagProlongation:
    """Components u_k (k >= -1) as subspaces of gl(gr g^-1) in graded coordinates."""

    symbol: FlagSymbol
    components: Dict[int, Subspace]
    status: ProlongStatus

    def dims(self) -> Dict[int, int]:
        return {k: s.dim for k, s in sorted(self.components.items())}

    @property
    def total_dim(self) -> int:
        return sum(s.dim for s in self.components.values())

    def matrices(self, degree: Optional[int] = None) -> List[Mat]:
        n = self.symbol.n
        degrees = [degree] if degree is not None else sorted(self.components)
        return [
            _as_square(v, n)
            for k in degrees
            for v in self.components.get(k, Subspace.zero(n * n)).vectors()
        ]

    def part(self, degree: int) -> Subspace:
        return self.components.get(degree, Subspace.zero(self.symbol.n**2))

    def is_subalgebra(self) -> bool:
        """[u_j, u_k] lies in u_(j+k) for all computed pairs."""
        top = max(self.components)
        for j in self.components:
            for k in self.components:
                if j + k > top and not self.status.terminated:
                    continue
                target = self.part(j + k)
                for x in self.matrices(j):
                    for y in self.matrices(k):
                        if not target.contains(x.commutator(y).flatten()):
                            return False
        return True

    def as_subalgebra0(
        self, m: Optional[NilpotentSymbol] = None, nonnegative: bool = False
    ) -> Subalgebra0:
        """u^F as a degree-0 algebra of derivations of m, ready for tanaka_prolong.

        ``nonnegative`` drops u_-1 and keeps the degrees k >= 0 only.
        """
        m = m or self.symbol.ambient.parent
        frame = self.symbol.flag.frame
        if nonnegative:
            matrices = [a for k in sorted(self.components) if k >= 0 for a in self.matrices(k)]
        else:
            matrices = self.matrices()
        if not frame.basis.is_identity():
            matrices = [frame.basis @ a @ frame.inverse for a in matrices]
        try:
            g0 = restrict_to("custom", m, matrices=matrices)
        except NotASubalgebra as exc:
            raise NotASubalgebra(f"Flag prolongation of {self.symbol.name} does not act on {m.name}: {exc}") from exc
        return g0


def _step(part: Subspace, deltas: List[Mat], previous: Subspace, n: int) -> Subspace:
    """{X in part : [X, Y] in previous for every Y}."""
    if part.dim == 0:
        return Subspace.zero(n * n)
    candidates = [_as_square(v, n) for v in part.vectors()]
    block = previous.dim
    ncols = part.dim + block * len(deltas)
    rows: List[List] = []
    for idx, y in enumerate(deltas):
        brackets = [x.commutator(y).flatten() for x in candidates]
        for entry in range(n * n):
            row = [ZERO] * ncols
            for s, vec in enumerate(brackets):
                row[s] = vec[entry]
            for r, u in enumerate(previous.vectors()):
                row[part.dim + idx * block + r] = -u[entry]
            if any(x != 0 for x in row):
                rows.append(row)
    if not rows:
        return part
    solution = kernel(Mat.from_rows(rows, ncols))
    combos = []
    for vec in solution.vectors():
        coefficients = vec[: part.dim]
        combo = [ZERO] * (n * n)
        for c, basis_vec in zip(coefficients, part.vectors()):
            if c != 0:
                for k, x in enumerate(basis_vec):
                    combo[k] += c * x
        combos.append(combo)
    return Subspace.span(combos, n * n)


def _prolong(sym: FlagSymbol, max_degree: int, centralizer_at_zero: bool) -> FlagProlongation:
    if max_degree < 0:
        raise ValueError(f"max_degree must be >= 0, got {max_degree}")
    n = sym.n
    graded = sym.graded_ambient
    top = max(graded.parts) if graded.parts else -1
    deltas = sym.delta_matrices()
    components: Dict[int, Subspace] = {-1: sym.delta}
    previous = sym.delta
    last = min(max_degree, top)
    for k in range(0, last + 1):
        if k == 0 and centralizer_at_zero:
            current = _step(graded.part(0), deltas, Subspace.zero(n * n), n)
        else:
            current = _step(graded.part(k), deltas, previous, n)
        components[k] = current
        logger.info("FLAG: %s degree %d has dim %d", sym.name, k, current.dim)
        previous = current
    if max_degree >= top:
        nonzero = [k for k, s in components.items() if s.dim]
        status = ProlongStatus(True, max(nonzero))
    else:
        status = ProlongStatus(False, max_degree)
    result = FlagProlongation(sym, components, status)
    logger.info("FLAG: %s prolongation %s, dims %s", sym.name, status, result.dims())
    return result


def flag_prolong(sym: FlagSymbol, max_degree: int) -> FlagProlongation:
    """u^F_k = {X in (gr g0)_k : [X, Y] in u^F_(k-1) for Y in delta}."""
    return _prolong(sym, max_degree, centralizer_at_zero=False)


def flag_prolong_param(sym: FlagSymbol, max_degree: int) -> FlagProlongation:
    """Same recursion with the centralizer of delta in degree 0."""
    if not sym.parameterized:
        raise InvalidFlagSymbol(f"{sym.name} is not a parameterized symbol")
    return _prolong(sym, max_degree, centralizer_at_zero=True)


# --- compatibility with the grading -------------------------------------------


def skew_complement(sub: Subspace, omega: Mat) -> Subspace:
    if sub.dim == 0:
        return Subspace.full(sub.ambient_dim)
    return kernel(sub.basis @ omega)


def symplectic_flag_check(flag: FiltrationSpec, omega: Mat) -> Tuple[bool, Optional[int]]:
    """Look for c with step(j)^perp = step(c - j) for every j; nu = -c mod 2."""
    n = flag.ambient_dim
    if omega.shape != (n, n) or omega.transpose() != -omega or omega.rank() != n:
        raise InvalidFlagSymbol("omega must be a nondegenerate antisymmetric form on the flag space")
    lo, hi = flag.lowest, flag.highest
    complements = {j: skew_complement(flag.step(j), omega) for j in range(lo - 1, hi + 2)}
    for c in range(2 * lo - 2, 2 * hi + 3):
        if all(complements[j] == flag.step(c - j) for j in complements):
            nu = (-c) % 2
            logger.debug("FLAG: symplectic flag with reflection c=%d, nu=%d", c, nu)
            return True, nu
    return False, None


def grading_compatibility(family: str, flag: FiltrationSpec, omega: Optional[Mat] = None) -> str:
    """'compatible', 'incompatible' or 'undecided'."""
    if family in ("full", "gl", "sl"):
        return "compatible"
    if family in ("sp", "csp"):
        if omega is None:
            raise InvalidFlagSymbol(f"{family} compatibility needs a symplectic form")
        ok, _ = symplectic_flag_check(flag, omega)
        return "compatible" if ok else "incompatible"
    return "undecided"


def parameterized_so_dimension(multiplicities: Mapping[int, Tuple[int, int]]) -> int:
    """Sum over m of N(N-1)/2, N = N+(m) + N-(m) copies of +-tau_m."""
    total = 0
    for plus, minus in multiplicities.values():
        count = plus + minus
        total += count * (count - 1) // 2
    return total


__all__ = [
    "AMBIENTS",
    "GradedEndomorphism",
    "make_delta_rp",
    "make_tau_m",
    "direct_sum",
    "FlagSymbol",
    "make_flag_symbol",
    "FlagProlongation",
    "flag_prolong",
    "flag_prolong_param",
    "skew_complement",
    "symplectic_flag_check",
    "grading_compatibility",
    "parameterized_so_dimension",
]
