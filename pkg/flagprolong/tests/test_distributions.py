"""
Tests for distributions given by polynomial vector fields
"""

from fractions import Fraction

import pytest
import sympy

from flagprolong.distributions import (
    DistributionSpec,
    PolyVectorField,
    bracket,
    growth_vector,
    parse_polynomial,
    symbol_at,
    variables,
    weak_derived_flag,
)
from flagprolong.exceptions import DependentAtPoint, NonConstantRank
from flagprolong.prolong import derivations0
from flagprolong.symbols import build_free_nilpotent, build_heisenberg, validate

CONTACT = {"n": 3, "fields": [{"dx1": 1}, {"dx2": 1, "dx3": "x1"}], "name": "contact"}
CARTAN_235 = {
    "n": 5,
    "fields": [{"dx1": 1}, {"dx2": 1, "dx3": "x1", "dx4": "x1^2/2", "dx5": "x3"}],
    "name": "cartan",
}


def test_parse_polynomial():
    """Test exact coefficients and the ^ power syntax"""
    x1, x2 = variables(2)
    poly = parse_polynomial("x1^2/2 + 3*x2", 2)
    assert poly.coeff_monomial(x1**2) == sympy.Rational(1, 2)
    assert poly.coeff_monomial(x2) == 3
    assert parse_polynomial(Fraction(2, 3), 1).is_ground
    with pytest.raises(ValueError) as exc_info:
        parse_polynomial("0.5*x1", 1)
    assert "floating point" in str(exc_info.value)
    with pytest.raises(ValueError) as exc_info:
        parse_polynomial("x4", 3)
    assert "unknown variables" in str(exc_info.value)


def test_bracket_of_coordinate_fields():
    """Test [d1, x1 d2] = d2 and antisymmetry"""
    x = PolyVectorField.from_dict({"dx1": 1}, 2)
    y = PolyVectorField.from_dict({"dx2": "x1"}, 2)
    assert bracket(x, y).to_dict() == {"dx2": "1"}
    assert bracket(y, x).to_dict() == {"dx2": "-1"}
    assert bracket(x, x).is_zero()


def test_unknown_component_key():
    """Test component keys must be dx1..dxn"""
    with pytest.raises(ValueError):
        PolyVectorField.from_dict({"dy1": 1}, 2)
    with pytest.raises(ValueError):
        PolyVectorField.from_dict({"dx3": 1}, 2)


def test_spec_codec():
    """Test from_dict keeps fields and to_dict writes them back"""
    spec = DistributionSpec.from_dict(CARTAN_235)
    data = spec.to_dict()
    assert data["n"] == 5
    assert data["name"] == "cartan"
    assert data["fields"][0] == {"dx1": "1"}
    assert DistributionSpec.from_dict(data).to_dict() == data
    with pytest.raises(ValueError):
        DistributionSpec.from_dict({"fields": []})


class TestDerivedFlag:
    """Weak derived flag at a point"""

    def test_contact_growth(self):
        """Test the contact distribution is bracket generating in one step"""
        assert growth_vector(DistributionSpec.from_dict(CONTACT)) == [2, 3]

    def test_cartan_growth(self):
        """Test the (2,3,5) distribution has growth vector (2, 3, 5) at several points"""
        spec = DistributionSpec.from_dict(CARTAN_235)
        assert growth_vector(spec) == [2, 3, 5]
        assert growth_vector(spec, ["1/2", 1, 0, -3, 2]) == [2, 3, 5]

    def test_depth_cap(self):
        """Test the flag stops at depth_cap"""
        spec = DistributionSpec.from_dict(CARTAN_235)
        assert [s.dim for s in weak_derived_flag(spec, depth_cap=2)] == [2, 3]

    def test_integrable_distribution_stabilizes(self):
        """Test an involutive distribution stops after the first step"""
        spec = DistributionSpec.from_dict({"n": 3, "fields": [{"dx1": 1}, {"dx2": 1}]})
        assert growth_vector(spec) == [2]

    def test_point_length_checked(self):
        """Test a point with the wrong number of coordinates is refused"""
        with pytest.raises(ValueError):
            growth_vector(DistributionSpec.from_dict(CONTACT), [0, 0])


class TestSymbolAt:
    """Tanaka symbol of a distribution"""

    def test_contact_symbol_is_heisenberg(self):
        """Test the contact symbol matches heis(3)"""
        symbol = symbol_at(DistributionSpec.from_dict(CONTACT))
        assert symbol.same_structure(build_heisenberg(3))

    def test_cartan_symbol(self):
        """Test the (2,3,5) symbol has the dims of free(2,3) and the same derivations"""
        symbol = symbol_at(DistributionSpec.from_dict(CARTAN_235))
        assert symbol.dims == build_free_nilpotent(2, 3).dims
        assert validate(symbol).ok
        assert derivations0(symbol).dim == 4

    def test_dependent_fields(self):
        """Test fields that coincide at the point are refused"""
        spec = DistributionSpec.from_dict({"n": 2, "fields": [{"dx1": 1}, {"dx1": "1 + x2"}]})
        with pytest.raises(DependentAtPoint):
            symbol_at(spec)

    def test_non_constant_rank(self):
        """Test a bracket vanishing only at the point is detected"""
        spec = DistributionSpec.from_dict(
            {"n": 3, "fields": [{"dx1": 1}, {"dx2": 1, "dx3": "x1^2"}]}
        )
        assert growth_vector(spec) == [2]
        with pytest.raises(NonConstantRank):
            symbol_at(spec)

    def test_explicit_sample_points(self):
        """Test explicit sample points replace the default ones"""
        spec = DistributionSpec.from_dict(CONTACT)
        symbol = symbol_at(spec, point=[1, 2, 3], sample_points=[[0, 0, 0], ["1/3", 0, 5]])
        assert symbol.dims == {-1: 2, -2: 1}
