"""
Przestrzenie filtrowane i gradowane.

Decreasing filtrations, the associated graded functor on subspaces and maps,
the induced filtration on endomorphisms, and the filtered data that a flag on
g^{-1} induces on a whole symbol.

Graded coordinates of a filtered space are coordinates in its adapted basis:
the basis built from the pivot-rule complements of consecutive steps, with
each vector carrying the index of the step it was taken from as its weight.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from flagprolong.exactla import (
    ZERO,
    Mat,
    Subspace,
    Vector,
    complement_in,
    image,
    inverse,
    kernel,
    rref,
    unit_vector,
)
from flagprolong.exceptions import InvalidFiltration, NotFiltered
from flagprolong.symbols import BracketTable, NilpotentSymbol

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class GradedSpace:
    components: Dict[int, int]
    labels: Dict[int, Tuple[str, ...]]

    @property
    def total_dim(self) -> int:
        return sum(self.components.values())


@dataclass(frozen=True)
class GradedFrame:
    """Adapted basis of a filtered space: columns of ``basis`` with weights."""

    basis: Mat
    inverse: Mat
    weights: Tuple[int, ...]

    def coordinates(self, vec: Sequence[Fraction]) -> Vector:
        return self.inverse.apply(vec)

    def indices_of_weight(self, weight: int) -> List[int]:
        return [k for k, w in enumerate(self.weights) if w == weight]


@dataclass(frozen=True)
class FiltrationSpec:
    """Decreasing filtration; full below the lowest index, zero above the highest."""

    ambient_dim: int
    steps: Tuple[Tuple[int, Subspace], ...]

    def __post_init__(self):
        steps = tuple(sorted(self.steps, key=lambda s: s[0]))
        object.__setattr__(self, "steps", steps)
        if not steps:
            raise InvalidFiltration("Filtration needs at least one step")
        indices = [j for j, _ in steps]
        if indices != list(range(indices[0], indices[0] + len(indices))):
            raise InvalidFiltration(f"Step indices must be contiguous, got {indices}")
        for j, sub in steps:
            if sub.ambient_dim != self.ambient_dim:
                raise InvalidFiltration(
                    f"Step {j} lives in ambient {sub.ambient_dim}, expected {self.ambient_dim}"
                )
        for (j0, outer), (j1, inner) in zip(steps, steps[1:]):
            if not inner.is_subspace_of(outer):
                raise InvalidFiltration(f"Step {j1} is not contained in step {j0}")

    @classmethod
    def from_adapted(cls, vectors: Sequence[Sequence[Fraction]], weights: Sequence[int]) -> "FiltrationSpec":
        """Filtration whose step j is spanned by the vectors of weight >= j."""
        if len(vectors) != len(weights) or not vectors:
            raise InvalidFiltration("Need one weight per vector and at least one vector")
        n = len(vectors[0])
        lo, hi = min(weights), max(weights)
        steps = tuple(
            (j, Subspace.span((v for v, w in zip(vectors, weights) if w >= j), n))
            for j in range(lo, hi + 2)
        )
        return cls(n, steps)

    @classmethod
    def from_weights(cls, weights: Sequence[int]) -> "FiltrationSpec":
        """Coordinate filtration: step j = span(e_a : weights[a] >= j)."""
        n = len(weights)
        return cls.from_adapted([unit_vector(n, a) for a in range(n)], weights)

    @classmethod
    def complete(cls, n: int, top: int = -1) -> "FiltrationSpec":
        """Complete coordinate flag with e_1 at weight ``top``, e_2 at top-1, ..."""
        return cls.from_weights([top - a for a in range(n)])

    @classmethod
    def trivial(cls, n: int) -> "FiltrationSpec":
        return cls(n, ((0, Subspace.full(n)), (1, Subspace.zero(n))))

    @property
    def lowest(self) -> int:
        return self.steps[0][0]

    @property
    def highest(self) -> int:
        return self.steps[-1][0]

    def step(self, j: int) -> Subspace:
        if j < self.lowest:
            return Subspace.full(self.ambient_dim)
        if j > self.highest:
            return Subspace.zero(self.ambient_dim)
        return self.steps[j - self.lowest][1]

    @cached_property
    def frame(self) -> GradedFrame:
        pairs: List[Tuple[int, Vector]] = []
        for j in range(self.highest, self.lowest - 2, -1):
            complement = complement_in(self.step(j + 1), self.step(j))
            pairs.extend((j, v) for v in complement.vectors())
        pairs.sort(key=lambda p: next(k for k, x in enumerate(p[1]) if x != 0))
        basis = Mat.from_columns([v for _, v in pairs], self.ambient_dim)
        return GradedFrame(basis, inverse(basis), tuple(w for w, _ in pairs))

    @property
    def weights(self) -> Tuple[int, ...]:
        return self.frame.weights

    def adapted_basis(self) -> List[Tuple[int, Vector]]:
        """(weight, vector) pairs of the adapted frame."""
        frame = self.frame
        return [(w, frame.basis.col(k)) for k, w in enumerate(frame.weights)]

    def graded_coordinates(self, vec: Sequence[Fraction]) -> Dict[int, Vector]:
        """Components of ``vec`` per weight in the adapted frame."""
        coords = self.frame.coordinates(vec)
        out: Dict[int, Vector] = {}
        for w in sorted(set(self.frame.weights)):
            out[w] = tuple(coords[k] for k in self.frame.indices_of_weight(w))
        return out

    def graded_dims(self) -> Dict[int, int]:
        out: Dict[int, int] = {}
        for w in self.weights:
            out[w] = out.get(w, 0) + 1
        return dict(sorted(out.items()))


@dataclass(frozen=True)
class GradedSubspace:
    """Per-degree pieces of gr(sub), realized in graded coordinates of the ambient."""

    ambient_dim: int
    parts: Dict[int, Subspace]

    @property
    def total_dim(self) -> int:
        return sum(p.dim for p in self.parts.values())

    def dims(self) -> Dict[int, int]:
        return {k: p.dim for k, p in sorted(self.parts.items()) if p.dim}

    def part(self, degree: int) -> Subspace:
        return self.parts.get(degree, Subspace.zero(self.ambient_dim))

    def union(self) -> Subspace:
        out = Subspace.zero(self.ambient_dim)
        for p in self.parts.values():
            out = out + p
        return out

    @property
    def space(self) -> GradedSpace:
        dims = self.dims()
        return GradedSpace(
            components=dims,
            labels={k: tuple(f"g{k}_{a + 1}" for a in range(n)) for k, n in dims.items()},
        )


@dataclass(frozen=True)
class FilteredMap:
    domain_filtration: FiltrationSpec
    codomain_filtration: FiltrationSpec
    matrix: Mat

    def __post_init__(self):
        expected = (self.codomain_filtration.ambient_dim, self.domain_filtration.ambient_dim)
        if self.matrix.shape != expected:
            raise ValueError(f"Matrix shape {self.matrix.shape} does not match {expected}")

    def is_filtered(self) -> bool:
        dom, cod = self.domain_filtration, self.codomain_filtration
        lo = min(dom.lowest, cod.lowest) - 1
        hi = max(dom.highest, cod.highest) + 1
        for j in range(lo, hi + 1):
            target = cod.step(j)
            for v in dom.step(j).vectors():
                if not target.contains(self.matrix.apply(v)):
                    return False
        return True

    def compose(self, inner: "FilteredMap") -> "FilteredMap":
        """self o inner."""
        return FilteredMap(inner.domain_filtration, self.codomain_filtration, self.matrix @ inner.matrix)


def gl_filtration(flag: FiltrationSpec) -> FiltrationSpec:
    """Induced filtration (gl W)_i = {A : A(step j) in step j+i}, vectorized row-major."""
    n = flag.ambient_dim
    frame = flag.frame
    w = frame.weights
    coordinate = frame.basis.is_identity()

    def unit_map(a: int, b: int) -> Vector:
        if coordinate:
            return unit_vector(n * n, a * n + b)
        p, q = frame.basis, frame.inverse
        return tuple(p[r, a] * q[b, c] for r in range(n) for c in range(n))

    shifts = [w[a] - w[b] for a in range(n) for b in range(n)]
    vectors = [unit_map(a, b) for a in range(n) for b in range(n)]
    return FiltrationSpec.from_adapted(vectors, shifts)


def gr_subspace(flag: FiltrationSpec, sub: Subspace) -> GradedSubspace:
    """gr(sub) per degree, inside graded coordinates of the filtered ambient."""
    if sub.ambient_dim != flag.ambient_dim:
        raise ValueError(f"Subspace in ambient {sub.ambient_dim}, filtration in {flag.ambient_dim}")
    frame = flag.frame
    n = flag.ambient_dim
    if sub.dim == 0:
        return GradedSubspace(n, {})
    rows = [frame.coordinates(v) for v in sub.vectors()]
    # columns by ascending weight: a row's pivot weight is its filtration degree
    order = sorted(range(n), key=lambda k: (frame.weights[k], k))
    permuted = [[row[k] for k in order] for row in rows]
    reduced, pivots = rref(permuted, n)
    collected: Dict[int, List[Vector]] = {}
    for row, p in zip(reduced, pivots):
        degree = frame.weights[order[p]]
        vec = [ZERO] * n
        for pos, k in enumerate(order):
            if frame.weights[k] == degree:
                vec[k] = row[pos]
        collected.setdefault(degree, []).append(tuple(vec))
    parts = {d: Subspace.span(vs, n) for d, vs in sorted(collected.items())}
    return GradedSubspace(n, parts)


def gr_map(f: FilteredMap) -> Mat:
    """Degree-preserving map induced on graded coordinates."""
    if not f.is_filtered():
        raise NotFiltered("Map does not preserve the filtration")
    dom = f.domain_filtration.frame
    cod = f.codomain_filtration.frame
    full = cod.inverse @ f.matrix @ dom.basis
    rows = [
        [full[r, c] if cod.weights[r] == dom.weights[c] else ZERO for c in range(full.cols)]
        for r in range(full.rows)
    ]
    return Mat.from_rows(rows, full.cols)


def lift_graded_complement(f: FilteredMap) -> Subspace:
    """C in B with gr C the pivot-rule complement of im gr f."""
    g = gr_map(f)
    frame = f.codomain_filtration.frame
    complement = complement_in(image(g), Subspace.full(g.rows))
    return Subspace.span((frame.basis.apply(v) for v in complement.vectors()), g.rows)


@dataclass(frozen=True)
class LemmaReport:
    """Statements about ker/im under gr; None marks not applicable."""

    ker_inclusion: bool
    surjectivity_transfer: Optional[bool]
    preimage_identity: Optional[bool]

    @property
    def all_hold(self) -> bool:
        return self.ker_inclusion and self.surjectivity_transfer is not False and self.preimage_identity is not False


def lemma_abc_check(f: FilteredMap, c: Subspace) -> LemmaReport:
    g = gr_map(f)
    n_b = f.matrix.rows
    ker_g = kernel(g)
    gr_ker = gr_subspace(f.domain_filtration, kernel(f.matrix)).union()
    ker_inclusion = gr_ker.is_subspace_of(ker_g)

    gr_c = gr_subspace(f.codomain_filtration, c).union()
    im_g = image(g)
    if gr_c.dim + im_g.dim != n_b or (gr_c + im_g).dim != n_b:
        return LemmaReport(ker_inclusion, None, None)

    surjectivity = (c + image(f.matrix)).dim == n_b
    annihilator = c.annihilator()
    if annihilator.dim == 0:
        preimage = Subspace.full(f.matrix.cols)
    else:
        preimage = kernel(annihilator.basis @ f.matrix)
    gr_preimage = gr_subspace(f.domain_filtration, preimage).union()
    return LemmaReport(ker_inclusion, surjectivity, gr_preimage == ker_g)


# --- filtrations induced on a symbol ------------------------------------------


def induced_symbol_filtration(m: NilpotentSymbol, flag: FiltrationSpec) -> Dict[int, FiltrationSpec]:
    """Filtration of each g^{-i} by weight sums of iterated brackets."""
    if flag.ambient_dim != m.dim(-1):
        raise InvalidFiltration(f"Flag lives in dim {flag.ambient_dim}, g^-1 has dim {m.dim(-1)}")
    frame = flag.frame
    generators = [(frame.weights[k], frame.basis.col(k)) for k in range(m.dim(-1))]
    out: Dict[int, FiltrationSpec] = {-1: flag}

    def grouped(pairs: List[Tuple[int, Vector]], n: int) -> Dict[int, Subspace]:
        groups: Dict[int, List[Vector]] = {}
        for w, v in pairs:
            groups.setdefault(w, []).append(v)
        return {w: Subspace.span(vs, n) for w, vs in groups.items()}

    previous = grouped(generators, m.dim(-1))
    for degree in m.degrees[1:]:
        n = m.dim(degree)
        pairs = []
        for w1, v in generators:
            for w2, group in previous.items():
                for u in group.vectors():
                    pairs.append((w1 + w2, m.bracket(-1, v, degree + 1, u)))
        current = {w: s for w, s in grouped(pairs, n).items() if s.dim}
        if not current:
            break
        lo, hi = min(current), max(current)
        steps = []
        for j in range(lo, hi + 2):
            acc = Subspace.zero(n)
            for w, s in current.items():
                if w >= j:
                    acc = acc + s
            steps.append((j, acc))
        out[degree] = FiltrationSpec(n, tuple(steps))
        previous = current
    return out


@dataclass(frozen=True)
class BigradedSymbol:
    """gr m flattened by degree, with the iso-witness extended from g^{-1}."""

    symbol: NilpotentSymbol
    bidegree_dims: Dict[Tuple[int, int], int]
    witness: Dict[int, Mat]
    witness_ok: bool


def bigraded_gr(m: NilpotentSymbol, flag: FiltrationSpec) -> BigradedSymbol:
    filtrations = induced_symbol_filtration(m, flag)
    frames = {d: f.frame for d, f in filtrations.items()}
    if set(frames) != set(m.dims):
        raise InvalidFiltration("Induced filtration does not reach every degree; symbol is not fundamental")

    brackets: BracketTable = {}
    for i, fi in frames.items():
        for j, fj in frames.items():
            target = i + j
            if target not in frames:
                continue
            ft = frames[target]
            for a in range(m.dim(i)):
                for b in range(m.dim(j)):
                    value = ft.coordinates(m.bracket(i, fi.basis.col(a), j, fj.basis.col(b)))
                    weight = fi.weights[a] + fj.weights[b]
                    entry = {
                        (target, k): x
                        for k, x in enumerate(value)
                        if x != 0 and ft.weights[k] == weight
                    }
                    if entry:
                        brackets[((i, a), (j, b))] = entry

    labels = {
        d: tuple(f"e{-d}_{a + 1}[{w}]" for a, w in enumerate(frames[d].weights)) for d in frames
    }
    gr_symbol = NilpotentSymbol(dims=dict(m.dims), brackets=brackets, labels=labels, name=f"gr({m.name})")
    bidegree: Dict[Tuple[int, int], int] = {}
    for d, fr in frames.items():
        for w in fr.weights:
            bidegree[(d, w)] = bidegree.get((d, w), 0) + 1

    witness, ok = _extend_witness(m, gr_symbol, frames[-1].inverse)
    logger.info("SYMBOL: bigraded gr of %s, witness %s", m.name, "verified" if ok else "fails")
    return BigradedSymbol(gr_symbol, dict(sorted(bidegree.items())), witness, ok)


def _extend_witness(m: NilpotentSymbol, gr_m: NilpotentSymbol, initial: Mat) -> Tuple[Dict[int, Mat], bool]:
    """Extend I on g^{-1} by I[v, x] = [I v, I x] and check it on all basis pairs."""
    witness: Dict[int, Mat] = {-1: initial}
    n1 = m.dim(-1)
    for degree in m.degrees[1:]:
        prev = degree + 1
        n = m.dim(degree)
        spanning = []
        images = []
        for a in range(n1):
            for b in range(m.dim(prev)):
                spanning.append(m.bracket_basis((-1, a), (prev, b)))
                images.append(
                    gr_m.bracket(-1, witness[-1].col(a), prev, witness[prev].col(b))
                )
        chosen: List[int] = []
        acc: List[List[Fraction]] = []
        for k, v in enumerate(spanning):
            trial = acc + [list(v)]
            if len(rref(trial, n)[1]) > len(acc):
                acc = trial
                chosen.append(k)
            if len(acc) == n:
                break
        if len(chosen) < n:
            return witness, False
        source = Mat.from_columns([spanning[k] for k in chosen], n)
        target = Mat.from_columns([images[k] for k in chosen], n)
        witness[degree] = target @ inverse(source)

    ok = all(witness[d].rank() == m.dim(d) for d in m.dims)
    keys = m.basis_keys()
    for x in keys:
        for y in keys:
            t = x[0] + y[0]
            if m.dim(t) == 0:
                continue
            lhs = witness[t].apply(m.bracket_basis(x, y))
            rhs = gr_m.bracket(x[0], witness[x[0]].col(x[1]), y[0], witness[y[0]].col(y[1]))
            if lhs != rhs:
                ok = False
    return witness, ok


__all__ = [
    "GradedSpace",
    "GradedFrame",
    "FiltrationSpec",
    "GradedSubspace",
    "FilteredMap",
    "gl_filtration",
    "gr_subspace",
    "gr_map",
    "lift_graded_complement",
    "LemmaReport",
    "lemma_abc_check",
    "induced_symbol_filtration",
    "BigradedSymbol",
    "bigraded_gr",
]
