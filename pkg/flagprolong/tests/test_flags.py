"""
Tests for flag symbols and their prolongations
"""

import pytest
import sympy

from flagprolong.exactla import Mat
from flagprolong.exceptions import InvalidFlagSymbol, MixedStructure
from flagprolong.flags import (
    GradedEndomorphism,
    direct_sum,
    flag_prolong,
    flag_prolong_param,
    grading_compatibility,
    make_delta_rp,
    make_flag_symbol,
    make_tau_m,
    parameterized_so_dimension,
    symplectic_flag_check,
)
from flagprolong.graded import FiltrationSpec
from flagprolong.prolong import ProlongStatus
from flagprolong.symbols import standard_symplectic_form


def nonzero(dims):
    return {k: d for k, d in dims.items() if d}


def param_prolongation(*parts):
    sym = make_flag_symbol(direct_sum(list(parts)), ambient="sp", parameterized=True)
    return flag_prolong_param(sym, 20)


class TestGradedEndomorphisms:
    """delta_rp, tau_m and direct sums"""

    def test_delta_rp_shape(self):
        """Test delta(-3,-1) lowers weight by one on three weights"""
        datum = make_delta_rp(-3, -1)
        assert datum.weights == (-1, -2, -3)
        assert datum.matrix.to_rows() == [[0, 0, 0], [1, 0, 0], [0, 1, 0]]
        assert datum.graded_dims() == {-1: 1, -2: 1, -3: 1}

    def test_delta_rp_invalid(self):
        """Test r <= p < 0 is enforced"""
        with pytest.raises(InvalidFlagSymbol):
            make_delta_rp(-1, -3)
        with pytest.raises(InvalidFlagSymbol):
            make_delta_rp(-2, 0)

    @pytest.mark.parametrize("m", [1, 2, 3])
    def test_tau_is_symplectic(self, m):
        """Test tau_m lies in sp(omega) and omega is nondegenerate antisymmetric"""
        datum = make_tau_m(m)
        omega, tau = datum.omega, datum.matrix
        assert datum.dim == 2 * m
        assert omega.transpose() == -omega
        assert omega.rank() == 2 * m
        assert (tau.transpose() @ omega + omega @ tau).is_zero()

    def test_negated_tau(self):
        """Test -tau_m keeps the form and flips the matrix"""
        plus, minus = make_tau_m(2), make_tau_m(2, sign=-1)
        assert minus.matrix == -plus.matrix
        assert minus.omega == plus.omega
        assert minus.name == "-tau(2)"
        assert plus.negated().matrix == minus.matrix

    def test_direct_sum_mixed_structure(self):
        """Test mixing symplectic and plain parts is refused"""
        with pytest.raises(MixedStructure):
            direct_sum([make_tau_m(1), make_delta_rp(-2, -1)])

    def test_direct_sum_blocks(self):
        """Test weights concatenate and forms go block diagonal"""
        total = direct_sum([make_tau_m(1), make_tau_m(2)])
        assert total.weights == (-1, -2, 0, -1, -2, -3)
        assert total.omega.rank() == 6
        assert total.name == "tau(1) + tau(2)"

    def test_wrong_degree_entry(self):
        """Test a matrix entry not lowering weight by one is refused"""
        with pytest.raises(InvalidFlagSymbol):
            GradedEndomorphism((-1, -2), Mat.from_rows([[0, 1], [0, 0]]))


class TestFlagProlongation:
    """u^F(delta) inside gr of the ambient"""

    @pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
    def test_delta_gives_gl2(self, n):
        """Test u^F(delta) has dims (1, 2, 1) for every n >= 3"""
        sym = make_flag_symbol(make_delta_rp(-n, -1))
        result = flag_prolong(sym, 20)
        assert nonzero(result.dims()) == {-1: 1, 0: 2, 1: 1}
        assert result.total_dim == 4
        assert result.status == ProlongStatus(True, 1)
        assert result.is_subalgebra()

    def test_degree_zero_matches_sympy(self):
        """Test u^F_0(delta) for n = 3 against an independent sympy solve"""
        a, b, c, t = sympy.symbols("a b c t")
        x = sympy.diag(a, b, c)
        e = sympy.Matrix([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
        equations = list(x * e - e * x - t * e)
        system, _ = sympy.linear_eq_to_matrix(equations, [a, b, c, t])
        expected = len(system.nullspace())

        result = flag_prolong(make_flag_symbol(make_delta_rp(-3, -1)), 20)
        assert result.part(0).dim == expected == 2

    def test_tau2_in_csp(self):
        """Test u^F(tau_2) inside gr csp(4) is four-dimensional"""
        sym = make_flag_symbol(make_tau_m(2))
        assert sym.ambient.name.startswith("csp")
        result = flag_prolong(sym, 20)
        assert result.total_dim == 4
        assert result.is_subalgebra()

    def test_capped_flag_prolongation(self):
        """Test a cap below the top degree of the ambient reports Capped"""
        result = flag_prolong(make_flag_symbol(make_delta_rp(-4, -1)), 0)
        assert result.status == ProlongStatus(False, 0)
        assert nonzero(result.dims()) == {-1: 1, 0: 2}

    def test_as_subalgebra0(self):
        """Test u^F(delta) becomes a degree-0 algebra of derivations of Q^3"""
        sym = make_flag_symbol(make_delta_rp(-3, -1))
        g0 = flag_prolong(sym, 20).as_subalgebra0()
        assert g0.dim == 4
        assert g0.is_closed()

    def test_matrices_per_degree(self):
        """Test matrices(k) returns one matrix per basis vector of u_k"""
        result = flag_prolong(make_flag_symbol(make_delta_rp(-3, -1)), 20)
        assert len(result.matrices(0)) == 2
        assert len(result.matrices()) == 4
        assert result.matrices(-1)[0] == make_delta_rp(-3, -1).matrix

    def test_two_deltas_match_sympy(self):
        """Test delta(-3,-1) + delta(-2,-1) against a sympy solve in degree 0"""
        datum = direct_sum([make_delta_rp(-3, -1), make_delta_rp(-2, -1)])
        w = datum.weights
        n = datum.dim
        unknowns = {(a, b): sympy.Symbol(f"x{a}{b}") for a in range(n) for b in range(n) if w[a] == w[b]}
        t = sympy.Symbol("t")
        x = sympy.Matrix(n, n, lambda a, b: unknowns.get((a, b), 0))
        e = sympy.Matrix([[int(v) for v in row] for row in datum.matrix.to_rows()])
        system, _ = sympy.linear_eq_to_matrix(list(x * e - e * x - t * e), [*unknowns.values(), t])

        result = flag_prolong(make_flag_symbol(datum), 20)
        assert result.part(0).dim == len(system.nullspace()) == 4
        assert nonzero(result.dims()) == {-1: 1, 0: 4, 1: 2}
        assert result.part(2).dim == 0
        assert result.status == ProlongStatus(True, 1)
        assert result.is_subalgebra()

    def test_nonnegative_part_as_subalgebra0(self):
        """Test dropping u_-1 leaves the degree 0 and 1 parts as a closed algebra"""
        sym = make_flag_symbol(make_delta_rp(-3, -1))
        g0 = flag_prolong(sym, 20).as_subalgebra0(nonnegative=True)
        assert g0.dim == 3
        assert g0.is_closed()


class TestParameterized:
    """Degree-0 centralizer variant over sp"""

    def test_tau1_plus_tau1(self):
        """Test tau_1 + tau_1 has a one-dimensional degree-0 part"""
        result = param_prolongation(make_tau_m(1), make_tau_m(1))
        assert result.part(0).dim == 1
        assert all(result.part(k).dim == 0 for k in result.components if k > 0)

    def test_single_tau1(self):
        """Test a single tau_1 has a trivial degree-0 part"""
        result = param_prolongation(make_tau_m(1))
        assert result.part(0).dim == 0
        assert all(result.part(k).dim == 0 for k in result.components if k > 0)

    def test_tau1_plus_minus_tau1(self):
        """Test tau_1 + (-tau_1) has a one-dimensional degree-0 part"""
        result = param_prolongation(make_tau_m(1), make_tau_m(1, sign=-1))
        assert result.part(0).dim == 1
        assert all(result.part(k).dim == 0 for k in result.components if k > 0)

    def test_closed_form(self):
        """Test the so(N+, N-) count for the three cases"""
        assert parameterized_so_dimension({1: (2, 0)}) == 1
        assert parameterized_so_dimension({1: (1, 0)}) == 0
        assert parameterized_so_dimension({1: (1, 1)}) == 1
        assert parameterized_so_dimension({1: (2, 1), 2: (1, 0)}) == 3

    def test_requires_parameterized_symbol(self):
        """Test the parameterized recursion refuses plain symbols"""
        sym = make_flag_symbol(make_tau_m(1), ambient="sp")
        with pytest.raises(InvalidFlagSymbol):
            flag_prolong_param(sym, 20)

    @pytest.mark.parametrize(
        "parts",
        [
            [make_tau_m(1), make_tau_m(1)],
            [make_tau_m(1), make_tau_m(1, sign=-1)],
            [make_tau_m(2), make_tau_m(1)],
        ],
        ids=["tau1+tau1", "tau1-tau1", "tau2+tau1"],
    )
    def test_contained_in_flag_prolongation(self, parts):
        """Test each parameterized component lies in the plain flag prolongation"""
        sym = make_flag_symbol(direct_sum(parts), ambient="sp", parameterized=True)
        param = flag_prolong_param(sym, 20)
        plain = flag_prolong(sym, 20)
        for k in param.components:
            assert param.part(k).is_subspace_of(plain.part(k))


class TestSymplecticFlags:
    """Compatibility of flags with symplectic ambients"""

    def test_tau_flag_is_symplectic(self):
        """Test the flag of tau_2 is symplectic for its own form"""
        datum = make_tau_m(2)
        ok, nu = symplectic_flag_check(datum.flag(), datum.omega)
        assert ok
        assert nu == 0

    def test_complete_flag_breaks_standard_form(self):
        """Test a complete coordinate flag on (x1, x2, y1, y2) is not symplectic"""
        ok, nu = symplectic_flag_check(FiltrationSpec.complete(4), standard_symplectic_form(4))
        assert not ok
        assert nu is None

    @pytest.mark.parametrize(
        "vectors, expected",
        [
            ([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], (True, 0)),
            ([[1, 0, 0, 1], [0, 1, 1, 0], [0, 0, 1, 0], [0, 0, 0, 1]], (True, 0)),
            ([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], (False, None)),
        ],
        ids=["span(x1,x2)", "span(x1+y2,x2+y1)", "span(x1,y1)"],
    )
    def test_two_step_flag_symplectic_iff_lagrangian(self, vectors, expected):
        """Test 0 < L < Q^4 is symplectic exactly when L is Lagrangian"""
        flag = FiltrationSpec.from_adapted(vectors, [0, 0, -1, -1])
        assert symplectic_flag_check(flag, standard_symplectic_form(4)) == expected

    def test_grading_compatibility(self):
        """Test compatibility answers per family"""
        datum = make_tau_m(2)
        assert grading_compatibility("full", datum.flag()) == "compatible"
        assert grading_compatibility("csp", datum.flag(), datum.omega) == "compatible"
        assert (
            grading_compatibility("sp", FiltrationSpec.complete(4), standard_symplectic_form(4))
            == "incompatible"
        )
        assert grading_compatibility("custom", datum.flag()) == "undecided"
        with pytest.raises(InvalidFlagSymbol):
            grading_compatibility("sp", datum.flag())

    def test_unknown_ambient(self):
        """Test unknown ambient names are refused"""
        with pytest.raises(ValueError) as exc_info:
            make_flag_symbol(make_delta_rp(-3, -1), ambient="so")
        assert "Unknown ambient" in str(exc_info.value)
