"""
Tests for exact rational linear algebra
"""

import random
from fractions import Fraction

import pytest
import sympy

from flagprolong.exactla import (
    DirectSumLayout,
    Mat,
    Subspace,
    complement_in,
    hom_index,
    image,
    inverse,
    kernel,
    pivot_left_inverse,
    rref,
    solve_affine,
    to_rat,
)
from flagprolong.exceptions import NotContained


def random_matrix(rng, rows, cols, low=-3, high=3):
    return Mat.from_rows([[rng.randint(low, high) for _ in range(cols)] for _ in range(rows)], cols)


class TestToRat:
    """Conversion of user input into exact rationals"""

    def test_accepts_int_string_and_fraction(self):
        """Test ints, "p/q" strings and Fractions convert exactly"""
        assert to_rat(3) == Fraction(3)
        assert to_rat(" -2/6 ") == Fraction(-1, 3)
        assert to_rat(Fraction(5, 7)) == Fraction(5, 7)

    def test_rejects_float_and_bool(self):
        """Test floats and booleans are refused"""
        with pytest.raises(TypeError):
            to_rat(0.5)
        with pytest.raises(TypeError):
            to_rat(True)


class TestMat:
    """Basic matrix operations"""

    def test_shape_mismatch_raises(self):
        """Test constructor checks the entry count"""
        with pytest.raises(ValueError) as exc_info:
            Mat(2, 2, (Fraction(1),))
        assert "needs 4" in str(exc_info.value)

    def test_product_and_transpose(self):
        """Test matrix product and transpose"""
        a = Mat.from_rows([[1, 2], [3, 4]])
        b = Mat.from_rows([[0, 1], [1, 0]])
        assert (a @ b).to_rows() == [[2, 1], [4, 3]]
        assert a.transpose().to_rows() == [[1, 3], [2, 4]]

    def test_commutator_of_matrix_units(self):
        """Test [E12, E21] = E11 - E22"""
        e12 = Mat.from_rows([[0, 1], [0, 0]])
        e21 = Mat.from_rows([[0, 0], [1, 0]])
        assert e12.commutator(e21).to_rows() == [[1, 0], [0, -1]]

    def test_block_diag(self):
        """Test block diagonal assembly"""
        m = Mat.block_diag([Mat.identity(1), Mat.from_rows([[2, 3], [4, 5]])])
        assert m.to_rows() == [[1, 0, 0], [0, 2, 3], [0, 4, 5]]

    @pytest.mark.parametrize("seed", range(10))
    def test_rank_matches_sympy(self, seed):
        """Test rank against sympy on random integer matrices"""
        rng = random.Random(seed)
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 5), -1, 1)
        assert m.rank() == sympy.Matrix(m.to_rows()).rank()

    def test_inverse(self):
        """Test exact inverse and singular detection"""
        a = Mat.from_rows([[2, 1], [1, 1]])
        assert (a @ inverse(a)).is_identity()
        with pytest.raises(ValueError):
            inverse(Mat.from_rows([[1, 2], [2, 4]]))


class TestRref:
    """Row reduction"""

    def test_pivots_and_reduced_rows(self):
        """Test rref of a rank-2 matrix"""
        rows, pivots = rref([[1, 2, 3], [2, 4, 7], [3, 6, 10]], 3)
        assert pivots == [0, 2]
        assert rows == [[1, 2, 0], [0, 0, 1]]


class TestSubspace:
    """Subspace algebra"""

    def test_span_is_canonical(self):
        """Test two spanning sets of the same plane give equal subspaces"""
        a = Subspace.span([[1, 1, 0], [0, 1, 1]], 3)
        b = Subspace.span([[1, 2, 1], [1, 0, -1]], 3)
        assert a == b
        assert a.dim == 2

    def test_contains_and_coordinates(self):
        """Test membership and canonical coordinates"""
        s = Subspace.span([[1, 0, 2], [0, 1, 3]], 3)
        assert s.contains([2, 1, 7])
        assert not s.contains([0, 0, 1])
        assert s.coordinates([2, 1, 7]) == (2, 1)
        with pytest.raises(NotContained):
            s.coordinates([0, 0, 1])

    def test_sum_and_intersection(self):
        """Test dim(U + V) + dim(U n V) = dim U + dim V"""
        u = Subspace.span([[1, 0, 0, 0], [0, 1, 0, 0]], 4)
        v = Subspace.span([[0, 1, 0, 0], [0, 0, 1, 0]], 4)
        assert (u + v).dim == 3
        assert u.intersection(v) == Subspace.coordinate([1], 4)

    def test_annihilator(self):
        """Test annihilator of a line in Q^3"""
        line = Subspace.span([[1, 1, 1]], 3)
        ann = line.annihilator()
        assert ann.dim == 2
        for vec in ann.vectors():
            assert sum(vec) == 0

    def test_complement_in(self):
        """Test the complement together with the subspace spans the ambient"""
        ambient = Subspace.coordinate([0, 1, 2], 4)
        sub = Subspace.span([[1, 1, 0, 0]], 4)
        comp = complement_in(sub, ambient)
        assert comp.dim == 2
        assert sub + comp == ambient
        assert sub.intersection(comp).dim == 0

    def test_complement_requires_containment(self):
        """Test complement of a subspace outside the ambient raises"""
        with pytest.raises(NotContained):
            complement_in(Subspace.coordinate([3], 4), Subspace.coordinate([0], 4))


class TestKernelImage:
    """Kernels, images and affine systems"""

    @pytest.mark.parametrize("seed", range(10))
    def test_rank_nullity(self, seed):
        """Test dim ker + dim im = number of columns, and kernel vectors are killed"""
        rng = random.Random(seed)
        m = random_matrix(rng, rng.randint(1, 5), rng.randint(1, 6), -2, 2)
        ker = kernel(m)
        assert ker.dim + image(m).dim == m.cols
        for vec in ker.vectors():
            assert all(x == 0 for x in m.apply(vec))
        assert ker.dim == len(sympy.Matrix(m.to_rows()).nullspace())

    def test_solve_affine(self):
        """Test solvable and unsolvable systems"""
        a = Mat.from_rows([[1, 1], [1, -1]])
        solution = solve_affine(a, [3, 1])
        assert solution.solvable
        assert solution.particular == (2, 1)
        assert solution.kernel.dim == 0

        singular = Mat.from_rows([[1, 1], [2, 2]])
        assert not solve_affine(singular, [1, 3]).solvable

    def test_pivot_left_inverse(self):
        """Test the left inverse recovers coefficients of a full-column-rank map"""
        m = Mat.from_rows([[1, 0], [2, 1], [0, 3]])
        left = pivot_left_inverse(m)
        assert left.solve(m.apply([Fraction(5), Fraction(-2)])) == (5, -2)


class TestDirectSumLayout:
    """Index bookkeeping for direct sums"""

    def test_split_and_join(self):
        """Test offsets, split and join on a three-summand layout"""
        layout = DirectSumLayout((("a", 2), ("b", 0), ("c", 3)))
        assert layout.total == 5
        assert layout.offset("c") == 2
        vec = tuple(Fraction(k) for k in range(5))
        parts = layout.split(vec)
        assert parts["c"] == (2, 3, 4)
        assert layout.join(parts) == vec
        with pytest.raises(KeyError):
            layout.dim("missing")

    def test_hom_index_row_major(self):
        """Test entry (row, col) of a map out of Q^3"""
        assert hom_index(3, 1, 2) == 5
