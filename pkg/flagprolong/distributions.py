"""
Dystrybucje zadane polami wektorowymi.

Distributions spanned by polynomial vector fields over Q: Lie brackets, the
weak derived flag at a rational point and the Tanaka symbol at that point.
Polynomials are sympy ``Poly`` objects over QQ in the variables x1..xn.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import sympy
from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations

from flagprolong import config
from flagprolong.exactla import Mat, Subspace, Vector, complement_in, solve_affine, to_rat
from flagprolong.exceptions import DependentAtPoint, NonConstantRank
from flagprolong.symbols import BracketTable, NilpotentSymbol, require_valid

logger = logging.getLogger(__name__)

KEY_PATTERN = re.compile(r"^dx(\d+)$")
TRANSFORMATIONS = standard_transformations + (convert_xor,)


def variables(n: int) -> Tuple[sympy.Symbol, ...]:
    return tuple(sympy.Symbol(f"x{k + 1}") for k in range(n))


def _to_fraction(value: Any) -> Fraction:
    r = sympy.Rational(value)
    return Fraction(int(r.p), int(r.q))


def parse_polynomial(text: Any, n: int) -> sympy.Poly:
    """Parse ``"x1^2/2 + 3*x2"`` style input into a Poly over QQ."""
    gens = variables(n)
    if isinstance(text, (int, Fraction)):
        expr = sympy.Rational(str(text))
    else:
        local = {str(g): g for g in gens}
        try:
            expr = parse_expr(str(text), local_dict=local, transformations=TRANSFORMATIONS)
        except (SyntaxError, TypeError, sympy.SympifyError) as exc:
            raise ValueError(f"Cannot parse polynomial {text!r}: {exc}") from exc
    if expr.atoms(sympy.Float):
        raise ValueError(f"Polynomial {text!r} has floating point coefficients")
    unknown = expr.free_symbols - set(gens)
    if unknown:
        raise ValueError(f"Polynomial {text!r} uses unknown variables {sorted(map(str, unknown))}")
    try:
        return sympy.Poly(expr, *gens, domain=sympy.QQ)
    except sympy.PolynomialError as exc:
        raise ValueError(f"{text!r} is not a polynomial in x1..x{n}") from exc


@dataclass(frozen=True)
class PolyVectorField:
    """sum_k components[k] * d/dx_(k+1)."""

    n_coords: int
    components: Tuple[sympy.Poly, ...]

    def __post_init__(self):
        if len(self.components) != self.n_coords:
            raise ValueError(
                f"Vector field needs {self.n_coords} components, got {len(self.components)}"
            )

    @classmethod
    def zero(cls, n: int) -> "PolyVectorField":
        gens = variables(n)
        return cls(n, tuple(sympy.Poly(0, *gens, domain=sympy.QQ) for _ in range(n)))

    @classmethod
    def from_dict(cls, data: Mapping[str, Any], n: int) -> "PolyVectorField":
        gens = variables(n)
        components = [sympy.Poly(0, *gens, domain=sympy.QQ) for _ in range(n)]
        for key, value in data.items():
            match = KEY_PATTERN.match(key)
            if not match or not (1 <= int(match.group(1)) <= n):
                raise ValueError(f"Unknown component key: {key}. Expected dx1..dx{n}")
            components[int(match.group(1)) - 1] = parse_polynomial(value, n)
        return cls(n, tuple(components))

    def to_dict(self) -> Dict[str, str]:
        return {
            f"dx{k + 1}": str(p.as_expr()) for k, p in enumerate(self.components) if not p.is_zero
        }

    def is_zero(self) -> bool:
        return all(p.is_zero for p in self.components)

    def evaluate(self, point: Sequence[Fraction]) -> Vector:
        gens = variables(self.n_coords)
        mapping = {g: sympy.Rational(x.numerator, x.denominator) for g, x in zip(gens, point)}
        return tuple(_to_fraction(p.as_expr().xreplace(mapping)) for p in self.components)

    def __add__(self, other: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField(self.n_coords, tuple(p + q for p, q in zip(self.components, other.components)))

    def __sub__(self, other: "PolyVectorField") -> "PolyVectorField":
        return PolyVectorField(self.n_coords, tuple(p - q for p, q in zip(self.components, other.components)))

    def scale(self, c: Fraction) -> "PolyVectorField":
        factor = sympy.Rational(c.numerator, c.denominator)
        return PolyVectorField(self.n_coords, tuple(p * factor for p in self.components))


def bracket(x: PolyVectorField, y: PolyVectorField) -> PolyVectorField:
    """[x, y]_k = sum_j x_j d_j y_k - y_j d_j x_k."""
    if x.n_coords != y.n_coords:
        raise ValueError(f"Fields live in dimensions {x.n_coords} and {y.n_coords}")
    gens = variables(x.n_coords)
    out = []
    for k in range(x.n_coords):
        acc = sympy.Poly(0, *gens, domain=sympy.QQ)
        for j, g in enumerate(gens):
            acc += x.components[j] * y.components[k].diff(g) - y.components[j] * x.components[k].diff(g)
        out.append(acc)
    return PolyVectorField(x.n_coords, tuple(out))


@dataclass(frozen=True)
class DistributionSpec:
    fields: Tuple[PolyVectorField, ...]
    n_coords: int
    name: str = "distribution"

    def __post_init__(self):
        if not self.fields:
            raise ValueError("Distribution needs at least one vector field")
        if any(f.n_coords != self.n_coords for f in self.fields):
            raise ValueError(f"All fields must live in dimension {self.n_coords}")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DistributionSpec":
        try:
            n = int(data["n"])
            fields = tuple(PolyVectorField.from_dict(f, n) for f in data["fields"])
        except (KeyError, TypeError) as exc:
            raise ValueError(f"Distribution needs 'n' and 'fields': {exc}") from exc
        return cls(fields, n, data.get("name", "distribution"))

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n_coords, "fields": [f.to_dict() for f in self.fields], "name": self.name}


def _point(d: DistributionSpec, point: Optional[Sequence[Any]]) -> Tuple[Fraction, ...]:
    if point is None:
        return tuple(Fraction(0) for _ in range(d.n_coords))
    if len(point) != d.n_coords:
        raise ValueError(f"Point {list(point)} does not have {d.n_coords} coordinates")
    return tuple(to_rat(x) for x in point)


def _derived_flag(d: DistributionSpec, p: Tuple[Fraction, ...], depth_cap: int):
    n = d.n_coords
    first = [f.evaluate(p) for f in d.fields]
    span = Subspace.span(first, n)
    if span.dim != len(d.fields):
        raise DependentAtPoint(f"Fields of {d.name} are dependent at {[str(x) for x in p]}")
    flag = [span]
    levels = [list(d.fields)]
    while len(flag) < depth_cap and span.dim < n:
        current = []
        seen = set()
        for x in d.fields:
            for z in levels[-1]:
                field = bracket(x, z)
                key = tuple(q.as_expr() for q in field.components)
                if field.is_zero() or key in seen:
                    continue
                seen.add(key)
                current.append(field)
        grown = Subspace.span(list(span.vectors()) + [f.evaluate(p) for f in current], n)
        if grown.dim == span.dim:
            break
        levels.append(current)
        span = grown
        flag.append(span)
    return flag, levels


def weak_derived_flag(
    d: DistributionSpec, point: Optional[Sequence[Any]] = None, depth_cap: Optional[int] = None
) -> List[Subspace]:
    """D^{-1}(p) <= D^{-2}(p) <= ... up to stabilization, the full space or depth_cap."""
    p = _point(d, point)
    flag, _ = _derived_flag(d, p, depth_cap or d.n_coords)
    logger.info("DISTRIBUTION: %s at %s has flag dims %s", d.name, [str(x) for x in p], [s.dim for s in flag])
    return flag


def growth_vector(d: DistributionSpec, point: Optional[Sequence[Any]] = None) -> List[int]:
    return [s.dim for s in weak_derived_flag(d, point)]


def default_sample_points(d: DistributionSpec, point: Sequence[Fraction]) -> List[Tuple[Fraction, ...]]:
    step = Fraction(config.SAMPLE_STEP)
    return [
        tuple(x + (step if k == j else 0) for j, x in enumerate(point)) for k in range(d.n_coords)
    ]


def symbol_at(
    d: DistributionSpec,
    point: Optional[Sequence[Any]] = None,
    sample_points: Optional[Sequence[Sequence[Any]]] = None,
) -> NilpotentSymbol:
    """Tanaka symbol g^{-i} = D^{-i}(p) / D^{-i+1}(p) with brackets of sections."""
    p = _point(d, point)
    n = d.n_coords
    flag, levels = _derived_flag(d, p, n)
    dims = [s.dim for s in flag]
    samples = sample_points if sample_points is not None else default_sample_points(d, p)
    for q in samples:
        q = _point(d, q)
        try:
            other = [s.dim for s in _derived_flag(d, q, n)[0]]
        except DependentAtPoint as exc:
            raise NonConstantRank(f"Rank drops near {[str(x) for x in p]}: {exc}") from exc
        if other != dims:
            raise NonConstantRank(
                f"Flag dims {dims} at {[str(x) for x in p]} but {other} at {[str(x) for x in q]}"
            )

    quotient: Dict[int, List[Vector]] = {}
    previous = Subspace.zero(n)
    for i, step in enumerate(flag, start=1):
        quotient[-i] = list(complement_in(previous, step).vectors())
        previous = step

    # constant-coefficient sections of D^{-i} through the quotient vectors
    sections: Dict[int, List[List[Tuple[Fraction, PolyVectorField]]]] = {}
    for i in range(1, len(flag) + 1):
        candidates = [f for level in levels[:i] for f in level]
        values = [f.evaluate(p) for f in candidates]
        matrix = Mat.from_columns(values, n)
        sections[-i] = []
        for q in quotient[-i]:
            solution = solve_affine(matrix, q)
            sections[-i].append(
                [(c, f) for c, f in zip(solution.particular, candidates) if c != 0]
            )

    brackets: BracketTable = {}
    depth = len(flag)
    for i in range(1, depth + 1):
        for j in range(1, depth + 1):
            target = -(i + j)
            if i + j > depth:
                continue
            lower = flag[i + j - 2]
            basis = list(lower.vectors()) + quotient[target]
            reduce_matrix = Mat.from_columns(basis, n)
            for a, sa in enumerate(sections[-i]):
                for b, sb in enumerate(sections[-j]):
                    value = [Fraction(0)] * n
                    for c1, f1 in sa:
                        for c2, f2 in sb:
                            for k, x in enumerate(bracket(f1, f2).evaluate(p)):
                                value[k] += c1 * c2 * x
                    coords = solve_affine(reduce_matrix, value).particular
                    tail = coords[lower.dim:]
                    entry = {(target, k): x for k, x in enumerate(tail) if x != 0}
                    if entry:
                        brackets[((-i, a), (-j, b))] = entry

    symbol = NilpotentSymbol(
        dims={-i: len(quotient[-i]) for i in range(1, depth + 1)},
        brackets=brackets,
        name=f"symbol({d.name})",
    )
    logger.info("DISTRIBUTION: symbol of %s has dims %s", d.name, symbol.dims)
    return require_valid(symbol)


__all__ = [
    "variables",
    "parse_polynomial",
    "PolyVectorField",
    "DistributionSpec",
    "bracket",
    "weak_derived_flag",
    "growth_vector",
    "default_sample_points",
    "symbol_at",
]
