"""
Tests for graded nilpotent symbols
"""

from fractions import Fraction

import pytest

from flagprolong.exactla import Mat
from flagprolong.exceptions import EvenDim, InvalidSymbol
from flagprolong.symbols import (
    NilpotentSymbol,
    build_commutative,
    build_free_nilpotent,
    build_heisenberg,
    growth_vector,
    heisenberg_from_form,
    load_symbol,
    lyndon_words,
    require_valid,
    standard_symplectic_form,
    validate,
    witt_dimension,
)


class TestBuilders:
    """Named symbol families"""

    def test_commutative(self):
        """Test commutative symbol has one component and no brackets"""
        m = build_commutative(4)
        assert m.dims == {-1: 4}
        assert m.depth == 1
        assert validate(m).ok

    def test_heisenberg_dims_and_bracket(self):
        """Test heis(5) has dims (4, 1) and [x1, y1] = z"""
        m = build_heisenberg(5)
        assert m.dims == {-1: 4, -2: 1}
        assert m.bracket_basis((-1, 0), (-1, 2)) == (1,)
        assert m.bracket_basis((-1, 2), (-1, 0)) == (-1,)
        assert m.bracket_basis((-1, 0), (-1, 1)) == (0,)
        assert validate(m).ok

    def test_heisenberg_needs_odd_dimension(self):
        """Test even dimension is rejected"""
        with pytest.raises(EvenDim):
            build_heisenberg(4)

    def test_heisenberg_from_degenerate_form(self):
        """Test degenerate and non-antisymmetric forms are rejected"""
        with pytest.raises(InvalidSymbol):
            heisenberg_from_form(Mat.from_rows([[0, 1], [1, 0]]))
        with pytest.raises(InvalidSymbol):
            heisenberg_from_form(Mat.zeros(2, 2))

    def test_standard_form(self):
        """Test the standard symplectic form on Q^2"""
        assert standard_symplectic_form(2).to_rows() == [[0, 1], [-1, 0]]
        with pytest.raises(EvenDim):
            standard_symplectic_form(3)

    @pytest.mark.parametrize(
        "generators, step, dims",
        [
            (2, 3, {-1: 2, -2: 1, -3: 2}),
            (2, 4, {-1: 2, -2: 1, -3: 2, -4: 3}),
            (3, 2, {-1: 3, -2: 3}),
        ],
    )
    def test_free_nilpotent_dims(self, generators, step, dims):
        """Test free nilpotent dims follow the Witt formula"""
        m = build_free_nilpotent(generators, step)
        assert m.dims == dims
        for degree, dim in dims.items():
            assert witt_dimension(generators, -degree) == dim
        assert validate(m).ok

    def test_growth_vector(self):
        """Test growth vector of free(2,3) is (2, 3, 5)"""
        assert growth_vector(build_free_nilpotent(2, 3)) == [2, 3, 5]


class TestCombinatorics:
    """Lyndon words and Witt dimensions"""

    def test_lyndon_words_two_letters(self):
        """Test Lyndon words on two letters up to length 3"""
        assert lyndon_words(2, 3) == [(0,), (0, 0, 1), (0, 1), (0, 1, 1), (1,)]

    @pytest.mark.parametrize("letters", [2, 3])
    def test_witt_counts_lyndon_words(self, letters):
        """Test the Witt formula counts Lyndon words of each length"""
        words = lyndon_words(letters, 6)
        for length in range(1, 7):
            assert witt_dimension(letters, length) == sum(len(w) == length for w in words)

    def test_witt_dimension(self):
        """Test Witt dimensions for two letters"""
        assert [witt_dimension(2, n) for n in range(1, 7)] == [2, 1, 2, 3, 6, 9]


class TestValidation:
    """Exhaustive validators"""

    def test_jacobi_failure_detected(self):
        """Test a bracket table violating Jacobi is reported"""
        data = {
            "dims": {"-1": 3, "-2": 1, "-3": 1},
            "brackets": [
                {"x": [-1, 0], "y": [-1, 1], "value": [[-2, 0], 1]},
                {"x": [-1, 2], "y": [-2, 0], "value": [[-3, 0], 1]},
                {"x": [-1, 0], "y": [-2, 0], "value": [[-3, 0], 1]},
            ],
        }
        m = load_symbol(data, check=False)
        report = validate(m)
        assert report.graded and report.antisymmetric and report.fundamental
        assert not report.jacobi
        with pytest.raises(InvalidSymbol) as exc_info:
            require_valid(m)
        assert "jacobi" in str(exc_info.value)

    def test_not_fundamental(self):
        """Test a degree -2 component not generated by g^-1"""
        m = NilpotentSymbol(dims={-1: 2, -2: 1}, brackets={})
        assert not validate(m).fundamental

    def test_not_antisymmetric(self):
        """Test explicitly given partners that disagree are kept and caught"""
        data = {
            "dims": {"-1": 2, "-2": 1},
            "brackets": [
                {"x": [-1, 0], "y": [-1, 1], "value": [[-2, 0], 1]},
                {"x": [-1, 1], "y": [-1, 0], "value": [[-2, 0], 1]},
            ],
        }
        assert not validate(load_symbol(data, check=False)).antisymmetric

    def test_missing_degree_rejected(self):
        """Test degrees must be contiguous from -1"""
        with pytest.raises(InvalidSymbol):
            NilpotentSymbol(dims={-1: 2, -3: 1}, brackets={})


class TestCodec:
    """Custom JSON form"""

    def test_heisenberg_round_trip(self):
        """Test to_dict then load_symbol reproduces the structure"""
        m = build_heisenberg(5)
        again = load_symbol(m.to_dict())
        assert again.same_structure(m)
        assert again.omega == m.omega

    def test_partner_filled_in(self):
        """Test a one-sided bracket entry gets its antisymmetric partner"""
        data = {
            "dims": {"-1": 2, "-2": 1},
            "brackets": [{"x": [-1, 0], "y": [-1, 1], "value": [[-2, 0], "1/2"]}],
        }
        m = load_symbol(data)
        assert m.bracket_basis((-1, 1), (-1, 0)) == (Fraction(-1, 2),)

    def test_malformed_entry(self):
        """Test malformed bracket entries raise InvalidSymbol"""
        with pytest.raises(InvalidSymbol):
            load_symbol({"dims": {"-1": 2}, "brackets": [{"x": [-1], "y": [-1, 1], "value": 1}]})
        with pytest.raises(InvalidSymbol):
            load_symbol({"brackets": []})

    @pytest.mark.parametrize(
        "entry",
        [
            {"x": [-1, 0], "y": [-1, 1], "value": [[-2, 5], "1"]},
            {"x": [-1, 0], "y": [-1, -1], "value": [[-2, 0], 1]},
            {"x": [-1, 2], "y": [-1, 1], "value": [[-2, 0], 1]},
            {"x": [-1, 0], "y": [-1, 1], "value": [[-3, 0], 1]},
        ],
    )
    def test_index_out_of_range(self, entry):
        """Test basis indices outside dims are refused even without validation"""
        data = {"dims": {"-1": 2, "-2": 1}, "brackets": [entry]}
        with pytest.raises(InvalidSymbol, match="outside dims"):
            load_symbol(data, check=False)

    def test_same_structure_ignores_labels(self):
        """Test relabelled copies compare equal"""
        m = build_heisenberg(3)
        relabelled = heisenberg_from_form(m.omega, labels=["p", "q"], name="other")
        assert relabelled.same_structure(m)
        assert not build_commutative(3).same_structure(m)
