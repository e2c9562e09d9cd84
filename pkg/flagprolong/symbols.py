"""
Symbole Tanaki: gradowane nilpotentne algebry Liego.

A ``NilpotentSymbol`` is a graded nilpotent Lie algebra m = g^{-mu} + ... + g^{-1}
given by structure constants over Q. Basis elements are addressed by
``(degree, index)`` keys and degrees are the negative integers -mu..-1 with no
re-indexing.
"""

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from sympy.ntheory import divisors, mobius

from flagprolong.exactla import (
    ONE,
    ZERO,
    Mat,
    Subspace,
    Vector,
    is_zero_vector,
    to_rat,
    unit_vector,
)
from flagprolong.exceptions import EvenDim, InvalidSymbol

logger = logging.getLogger(__name__)

BasisKey = Tuple[int, int]
BracketTable = Dict[Tuple[BasisKey, BasisKey], Dict[BasisKey, Fraction]]

ALPHABET = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class NilpotentSymbol:
    """Graded nilpotent Lie algebra given by structure constants.

    ``brackets`` maps an ordered pair of basis keys to a sparse vector of the
    result. Both orders are stored, so antisymmetry is a checked property and
    not an assumption of the storage.
    """

    dims: Dict[int, int]
    brackets: BracketTable
    labels: Dict[int, Tuple[str, ...]] = field(default_factory=dict)
    omega: Optional[Mat] = None
    name: str = "custom"

    def __post_init__(self):
        if not self.dims:
            raise InvalidSymbol("Symbol needs at least the degree -1 component")
        depth = max(-d for d in self.dims)
        expected = set(range(-depth, 0))
        if set(self.dims) != expected:
            raise InvalidSymbol(
                f"Degrees must be exactly -{depth}..-1, got {sorted(self.dims)}"
            )
        if any(dim <= 0 for dim in self.dims.values()):
            raise InvalidSymbol(f"All components must be nonzero, got {self.dims}")
        labels = dict(self.labels)
        for degree, dim in self.dims.items():
            names = labels.get(degree)
            if names is None or len(names) != dim:
                labels[degree] = tuple(f"e{-degree}_{k + 1}" for k in range(dim))
        object.__setattr__(self, "labels", labels)

    # --- structure --------------------------------------------------------
    @property
    def depth(self) -> int:
        return max(-d for d in self.dims)

    @property
    def degrees(self) -> List[int]:
        """Degrees from -1 downward."""
        return list(range(-1, -self.depth - 1, -1))

    def dim(self, degree: int) -> int:
        return self.dims.get(degree, 0)

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def basis_keys(self) -> List[BasisKey]:
        """Basis keys in ascending degree, then index."""
        return [(d, a) for d in range(-self.depth, 0) for a in range(self.dims[d])]

    def label(self, key: BasisKey) -> str:
        return self.labels[key[0]][key[1]]

    # --- brackets ---------------------------------------------------------
    def bracket_basis(self, x: BasisKey, y: BasisKey) -> Vector:
        """[x, y] as a dense vector of degree x+y (empty below -mu)."""
        target = x[0] + y[0]
        n = self.dim(target)
        if n == 0:
            return ()
        raw = self.brackets.get((x, y))
        if not raw:
            return (ZERO,) * n
        out = [ZERO] * n
        for (degree, index), value in raw.items():
            if degree == target:
                out[index] += value
        return tuple(out)

    def bracket(self, i: int, u: Sequence[Fraction], j: int, v: Sequence[Fraction]) -> Vector:
        """Bilinear bracket of u in g^i and v in g^j."""
        n = self.dim(i + j)
        out = [ZERO] * n
        if n == 0:
            return ()
        for a, ua in enumerate(u):
            if ua == 0:
                continue
            for b, vb in enumerate(v):
                if vb == 0:
                    continue
                raw = self.brackets.get(((i, a), (j, b)))
                if not raw:
                    continue
                for (degree, index), value in raw.items():
                    if degree == i + j:
                        out[index] += ua * vb * value
        return tuple(out)

    def right_bracket_matrix(self, degree: int, y: BasisKey) -> Mat:
        """Matrix of Y -> [Y, y] from g^degree to g^(degree + deg y)."""
        target = degree + y[0]
        rows = self.dim(target)
        columns = [self.bracket_basis((degree, a), y) for a in range(self.dim(degree))]
        if rows == 0:
            return Mat.zeros(0, self.dim(degree))
        return Mat.from_columns(columns, rows)

    def same_structure(self, other: "NilpotentSymbol") -> bool:
        """Equal dims and structure constants, labels ignored."""
        if self.dims != other.dims:
            return False
        keys = self.basis_keys()
        return all(
            self.bracket_basis(x, y) == other.bracket_basis(x, y)
            for x in keys
            for y in keys
        )

    # --- serialization ------------------------------------------------------
    def to_dict(self) -> Dict[str, Any]:
        """Custom-symbol JSON form; only pairs x < y are emitted."""
        entries = []
        keys = self.basis_keys()
        for x, y in itertools.combinations(keys, 2):
            raw = self.brackets.get((x, y))
            if not raw:
                continue
            terms = [
                [[k, c], str(value)]
                for (k, c), value in sorted(raw.items())
                if value != 0
            ]
            if terms:
                entries.append({"x": list(x), "y": list(y), "value": terms})
        data: Dict[str, Any] = {
            "dims": {str(d): n for d, n in sorted(self.dims.items(), reverse=True)},
            "brackets": entries,
            "labels": {str(d): list(names) for d, names in sorted(self.labels.items(), reverse=True)},
        }
        if self.omega is not None:
            data["omega"] = [[str(x) for x in row] for row in self.omega.to_rows()]
        return data


@dataclass(frozen=True)
class SymbolReport:
    jacobi: bool
    graded: bool
    fundamental: bool
    antisymmetric: bool

    @property
    def ok(self) -> bool:
        return self.jacobi and self.graded and self.fundamental and self.antisymmetric

    def as_dict(self) -> Dict[str, bool]:
        return {
            "jacobi": self.jacobi,
            "graded": self.graded,
            "fundamental": self.fundamental,
            "antisymmetric": self.antisymmetric,
        }


def _check_graded(m: NilpotentSymbol) -> bool:
    for (x, y), raw in m.brackets.items():
        for key in (x, y):
            if not (0 <= key[1] < m.dim(key[0])):
                return False
        for (degree, index), value in raw.items():
            if value == 0:
                continue
            if degree != x[0] + y[0] or not (0 <= index < m.dim(degree)):
                return False
    return True


def _check_antisymmetric(m: NilpotentSymbol) -> bool:
    keys = m.basis_keys()
    for x in keys:
        if not is_zero_vector(m.bracket_basis(x, x)):
            return False
    for x, y in itertools.combinations(keys, 2):
        xy = m.bracket_basis(x, y)
        yx = m.bracket_basis(y, x)
        if any(a != -b for a, b in zip(xy, yx)):
            return False
    return True


def _check_jacobi(m: NilpotentSymbol) -> bool:
    keys = m.basis_keys()
    for x, y, z in itertools.combinations(keys, 3):
        target = x[0] + y[0] + z[0]
        if m.dim(target) == 0:
            continue
        total = [ZERO] * m.dim(target)
        for a, b, c in ((x, y, z), (y, z, x), (z, x, y)):
            inner = m.bracket_basis(b, c)
            if not inner:
                continue
            outer = m.bracket(a[0], unit_vector(m.dim(a[0]), a[1]), b[0] + c[0], inner)
            for k, value in enumerate(outer):
                total[k] += value
        if not is_zero_vector(total):
            logger.debug(
                "SYMBOL: Jacobi fails on (%s, %s, %s)", m.label(x), m.label(y), m.label(z)
            )
            return False
    return True


def _check_fundamental(m: NilpotentSymbol) -> bool:
    for degree in m.degrees[1:]:
        generated = Subspace.span(
            (
                m.bracket_basis((-1, a), (degree + 1, b))
                for a in range(m.dim(-1))
                for b in range(m.dim(degree + 1))
            ),
            m.dim(degree),
        )
        if generated.dim != m.dim(degree):
            return False
    return True


def validate(m: NilpotentSymbol) -> SymbolReport:
    """Exhaustive check of the Lie algebra invariants over basis tuples."""
    report = SymbolReport(
        jacobi=_check_jacobi(m),
        graded=_check_graded(m),
        fundamental=_check_fundamental(m),
        antisymmetric=_check_antisymmetric(m),
    )
    logger.debug("SYMBOL: validate %s -> %s", m.name, report.as_dict())
    return report


def require_valid(m: NilpotentSymbol) -> NilpotentSymbol:
    report = validate(m)
    if not report.ok:
        failed = [name for name, ok in report.as_dict().items() if not ok]
        raise InvalidSymbol(f"Symbol {m.name} fails validation: {', '.join(failed)}")
    return m


# --- builders ---------------------------------------------------------------


def build_commutative(n: int) -> NilpotentSymbol:
    if n < 1:
        raise InvalidSymbol(f"Commutative symbol needs n >= 1, got {n}")
    return NilpotentSymbol(
        dims={-1: n},
        brackets={},
        labels={-1: tuple(f"e{k + 1}" for k in range(n))},
        name=f"commutative({n})",
    )


def heisenberg_from_form(
    omega: Mat, labels: Optional[Sequence[str]] = None, name: Optional[str] = None
) -> NilpotentSymbol:
    """Heisenberg symbol with [v, w] = omega(v, w) z on the given form."""
    n = omega.rows
    if omega.cols != n or n == 0:
        raise InvalidSymbol(f"Form must be a nonzero square matrix, got {omega.shape}")
    if omega.transpose() != -omega:
        raise InvalidSymbol("Form must be antisymmetric")
    if omega.rank() != n:
        raise InvalidSymbol("Form must be nondegenerate")
    brackets: BracketTable = {}
    for a in range(n):
        for b in range(n):
            value = omega[a, b]
            if value != 0:
                brackets[((-1, a), (-1, b))] = {(-2, 0): value}
    names = tuple(labels) if labels is not None else tuple(f"v{k + 1}" for k in range(n))
    return NilpotentSymbol(
        dims={-1: n, -2: 1},
        brackets=brackets,
        labels={-1: names, -2: ("z",)},
        omega=omega,
        name=name or f"heisenberg({n + 1})",
    )


def standard_symplectic_form(n: int) -> Mat:
    """omega(x_a, y_a) = 1 on the basis x_1..x_k, y_1..y_k."""
    if n % 2:
        raise EvenDim(f"Symplectic form needs an even dimension, got {n}")
    k = n // 2
    rows = [[ZERO] * n for _ in range(n)]
    for a in range(k):
        rows[a][k + a] = ONE
        rows[k + a][a] = -ONE
    return Mat.from_rows(rows, n)


def build_heisenberg(total_dim: int) -> NilpotentSymbol:
    if total_dim % 2 == 0:
        raise EvenDim(f"Heisenberg algebra needs an odd dimension, got {total_dim}")
    if total_dim < 3:
        raise InvalidSymbol(f"Heisenberg algebra needs dimension >= 3, got {total_dim}")
    k = (total_dim - 1) // 2
    labels = [f"x{a + 1}" for a in range(k)] + [f"y{a + 1}" for a in range(k)]
    return heisenberg_from_form(
        standard_symplectic_form(2 * k), labels=labels, name=f"heisenberg({total_dim})"
    )


def lyndon_words(letters: int, max_length: int) -> List[Tuple[int, ...]]:
    """Lyndon words up to ``max_length`` in lexicographic order (Duval)."""
    words: List[Tuple[int, ...]] = []
    if letters < 1 or max_length < 1:
        return words
    w = [-1]
    while w:
        w[-1] += 1
        words.append(tuple(w))
        m = len(w)
        while len(w) < max_length:
            w.append(w[len(w) - m])
        while w and w[-1] == letters - 1:
            w.pop()
    return words


def _standard_factorization(word: Tuple[int, ...], lyndon: set) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    for cut in range(1, len(word)):
        suffix = word[cut:]
        if suffix in lyndon:
            return word[:cut], suffix
    raise ValueError(f"Word {word} has no proper Lyndon suffix")


TensorPoly = Dict[Tuple[int, ...], Fraction]


def _concat(p: TensorPoly, q: TensorPoly) -> TensorPoly:
    out: TensorPoly = {}
    for u, a in p.items():
        for v, b in q.items():
            w = u + v
            out[w] = out.get(w, ZERO) + a * b
    return out


def _commutator(p: TensorPoly, q: TensorPoly) -> TensorPoly:
    out = _concat(p, q)
    for w, c in _concat(q, p).items():
        out[w] = out.get(w, ZERO) - c
    return {w: c for w, c in out.items() if c != 0}


def witt_dimension(letters: int, length: int) -> int:
    """Dimension of the degree-``length`` part of the free Lie algebra."""
    total = sum(int(mobius(d)) * letters ** (length // d) for d in divisors(length))
    return total // length


def build_free_nilpotent(generators: int, step: int) -> NilpotentSymbol:
    """Free nilpotent Lie algebra on a Lyndon basis, graded by bracket length."""
    if generators < 2:
        raise InvalidSymbol(f"Free nilpotent symbol needs >= 2 generators, got {generators}")
    if step < 1:
        raise InvalidSymbol(f"Free nilpotent symbol needs step >= 1, got {step}")
    words = lyndon_words(generators, step)
    lyndon = set(words)
    by_length: Dict[int, List[Tuple[int, ...]]] = {}
    for w in words:
        by_length.setdefault(len(w), []).append(w)
    index = {w: (-len(w), by_length[len(w)].index(w)) for w in words}

    expansion: Dict[Tuple[int, ...], TensorPoly] = {}
    for w in sorted(words, key=len):
        if len(w) == 1:
            expansion[w] = {w: ONE}
        else:
            u, v = _standard_factorization(w, lyndon)
            expansion[w] = _commutator(expansion[u], expansion[v])

    def coordinates(poly: TensorPoly) -> Dict[BasisKey, Fraction]:
        # leading word of the standard bracketing of w is w itself
        rest = dict(poly)
        coords: Dict[BasisKey, Fraction] = {}
        while rest:
            lead = min(rest)
            if lead not in lyndon:
                raise ValueError(f"Lie polynomial has non-Lyndon leading word {lead}")
            c = rest[lead]
            coords[index[lead]] = c
            for word, value in expansion[lead].items():
                updated = rest.get(word, ZERO) - c * value
                if updated == 0:
                    rest.pop(word, None)
                else:
                    rest[word] = updated
        return coords

    brackets: BracketTable = {}
    for w1 in words:
        for w2 in words:
            if w1 == w2 or len(w1) + len(w2) > step:
                continue
            coords = coordinates(_commutator(expansion[w1], expansion[w2]))
            if coords:
                brackets[(index[w1], index[w2])] = coords

    def spell(word: Tuple[int, ...]) -> str:
        if generators <= len(ALPHABET):
            return "".join(ALPHABET[k] for k in word)
        return ".".join(f"x{k + 1}" for k in word)

    symbol = NilpotentSymbol(
        dims={-n: len(ws) for n, ws in by_length.items()},
        brackets=brackets,
        labels={-n: tuple(spell(w) for w in ws) for n, ws in by_length.items()},
        name=f"free({generators},{step})",
    )
    logger.info("SYMBOL: built %s with dims %s", symbol.name, symbol.dims)
    return symbol


def growth_vector(m: NilpotentSymbol) -> List[int]:
    out = []
    acc = 0
    for degree in m.degrees:
        acc += m.dim(degree)
        out.append(acc)
    return out


# --- JSON codec -------------------------------------------------------------


def _parse_terms(value: Any) -> List[Tuple[BasisKey, Fraction]]:
    if not isinstance(value, list) or not value:
        raise InvalidSymbol(f"Bracket value must be a non-empty list, got {value!r}")
    if isinstance(value[0], list) and value[0] and isinstance(value[0][0], list):
        terms = value
    else:
        terms = [value]
    parsed = []
    for term in terms:
        if not (isinstance(term, list) and len(term) == 2 and isinstance(term[0], list) and len(term[0]) == 2):
            raise InvalidSymbol(f"Bracket term must be [[degree, index], rational], got {term!r}")
        (k, c), q = term
        parsed.append(((int(k), int(c)), to_rat(q)))
    return parsed


def _check_key(key: BasisKey, dims: Mapping[int, int], entry: Any) -> None:
    degree, index = key
    if not 0 <= index < dims.get(degree, 0):
        raise InvalidSymbol(
            f"Basis element {list(key)} in bracket {entry!r} is outside dims {dict(dims)}"
        )


def load_symbol(data: Mapping[str, Any], check: bool = True) -> NilpotentSymbol:
    """Build a symbol from the custom JSON form.

    Pairs given in one order only get their antisymmetric partner filled in;
    pairs given in both orders are kept as given and validated.
    """
    try:
        dims = {int(d): int(n) for d, n in data["dims"].items()}
    except (KeyError, AttributeError, TypeError, ValueError) as exc:
        raise InvalidSymbol(f"Custom symbol needs a 'dims' mapping: {exc}") from exc
    brackets: BracketTable = {}
    for entry in data.get("brackets", []):
        try:
            x = (int(entry["x"][0]), int(entry["x"][1]))
            y = (int(entry["y"][0]), int(entry["y"][1]))
            terms = _parse_terms(entry["value"])
        except (KeyError, IndexError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InvalidSymbol(f"Malformed bracket entry {entry!r}: {exc}") from exc
        for key in (x, y, *(k for k, _ in terms)):
            _check_key(key, dims, entry)
        slot = brackets.setdefault((x, y), {})
        for key, value in terms:
            slot[key] = slot.get(key, ZERO) + value
    for (x, y), raw in list(brackets.items()):
        if (y, x) not in brackets:
            brackets[(y, x)] = {key: -value for key, value in raw.items()}
    labels = {int(d): tuple(names) for d, names in data.get("labels", {}).items()}
    omega = None
    if data.get("omega") is not None:
        try:
            omega = Mat.from_rows(data["omega"])
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InvalidSymbol(f"Malformed omega: {exc}") from exc
    symbol = NilpotentSymbol(
        dims=dims,
        brackets=brackets,
        labels=labels,
        omega=omega,
        name=data.get("name", "custom"),
    )
    if check:
        require_valid(symbol)
    return symbol


__all__ = [
    "BasisKey",
    "NilpotentSymbol",
    "SymbolReport",
    "validate",
    "require_valid",
    "build_commutative",
    "build_heisenberg",
    "heisenberg_from_form",
    "standard_symplectic_form",
    "build_free_nilpotent",
    "lyndon_words",
    "witt_dimension",
    "growth_vector",
    "load_symbol",
]
