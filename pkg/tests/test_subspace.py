import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linspp.costs import LinearCost, OrderDCost, linear_as_order_d
from linspp.errors import DimensionMismatch
from linspp.linearizer import linearize, verify_linearization
from linspp.oracle import oracle_linearize_lp
from linspp.subspace import (
    CostVector,
    LinearMapMatrix,
    assemble_matrix,
    compress_rows,
    kernel_basis,
    linearizable_subspace,
    project_onto_subspace,
    residuals,
    subset_index,
)

from .strategies import covered_dags, order_d_costs, rationals


SAMPLES = 200


def unit(index, key):
    return CostVector(index, tuple(Fraction(k == key) for k in index))


def random_fraction(rng):
    return Fraction(rng.randint(-9, 9), rng.randint(1, 4))


class TestSubsetIndex:
    def test_empty_set_first(self, diamond):
        index = subset_index(diamond, 2)
        assert index[0] == ()
        assert len(index) == 1 + 4 + 6
        assert list(index) == sorted(index)


class TestKernelDimension:
    def test_single_arc(self, single_arc):
        matrix = assemble_matrix(single_arc, 2)
        assert matrix.rows == []
        basis = kernel_basis(matrix, 2)
        assert len(basis) == 2
        assert basis.index == ((), (1,))

    def test_diamond_is_fully_linearizable(self, diamond):
        assert len(linearizable_subspace(diamond, 2)) == 11

    def test_double_diamond_has_one_constraint(self, double_diamond):
        basis = linearizable_subspace(double_diamond, 2)
        assert len(basis.index) == 37
        assert len(basis) == 36

    def test_rank_nullity(self, double_diamond):
        matrix = assemble_matrix(double_diamond, 2)
        basis = kernel_basis(matrix, 2)
        assert len(basis) + matrix.rank == len(matrix.columns)

    def test_compression_keeps_kernel(self, double_diamond):
        matrix = assemble_matrix(double_diamond, 2)
        compressed = compress_rows(matrix)
        assert len(compressed.rows) <= len(matrix.rows)
        assert all(any(row) for row in compressed.rows)
        assert kernel_basis(compressed, 2).vectors == kernel_basis(matrix, 2).vectors

    def test_threads_give_same_matrix(self, double_diamond):
        assert assemble_matrix(double_diamond, 2, jobs=3).rows == (
            assemble_matrix(double_diamond, 2).rows
        )

    def test_order_three_contains_order_two(self, double_diamond):
        two = linearizable_subspace(double_diamond, 2)
        three = linearizable_subspace(double_diamond, 3)
        assert len(three.index) == 1 + 8 + comb(8, 2) + comb(8, 3)
        assert len(three) >= len(two)


class TestKernelBasis:
    def test_zero_matrix(self, diamond):
        index = subset_index(diamond, 2)
        basis = kernel_basis(LinearMapMatrix(index, [[Fraction(0)] * len(index)]))
        assert [vec.values for vec in basis.vectors] == [unit(index, k).values for k in index]

    def test_single_row(self, diamond):
        index = subset_index(diamond, 2)
        row = [Fraction(x) for x in (1, 1, -1, -1)] + [Fraction(0)] * (len(index) - 4)
        assert len(kernel_basis(LinearMapMatrix(index, [row]))) == len(index) - 1

    @given(st.data())
    def test_random_matrix(self, data):
        ncols = data.draw(st.integers(1, 6))
        rows = data.draw(
            st.lists(st.lists(rationals(2), min_size=ncols, max_size=ncols), max_size=5)
        )
        index = tuple((i,) for i in range(ncols))
        matrix = LinearMapMatrix(index, rows)
        basis = kernel_basis(matrix, 1)
        assert len(basis) == ncols - matrix.rank
        for vec in basis.vectors:
            assert all(x == 0 for x in matrix.apply(vec))


class TestSubspaceMembership:
    def test_basis_vectors_linearize(self, double_diamond):
        basis = linearizable_subspace(double_diamond, 2)
        for vec in basis.vectors:
            assert linearize(double_diamond, vec.to_cost(2, double_diamond.arc_ids))

    def test_random_combinations_linearize(self, double_diamond):
        basis = linearizable_subspace(double_diamond, 2)
        rng = random.Random(2024)
        for _ in range(SAMPLES):
            combined = basis.combination([random_fraction(rng) for _ in basis.vectors])
            q = combined.to_cost(2, double_diamond.arc_ids)
            verdict = linearize(double_diamond, q)
            assert verdict.linearizable
            assert verify_linearization(double_diamond, q, verdict.cost, limit=10)

    def test_random_off_kernel_vectors_are_not_linearizable(self, double_diamond):
        matrix = assemble_matrix(double_diamond, 2)
        basis = kernel_basis(matrix, 2)
        off_kernel = [k for k in matrix.columns if any(matrix.apply(unit(matrix.columns, k)))]
        rng = random.Random(7)
        for _ in range(SAMPLES):
            inside = basis.combination([random_fraction(rng) for _ in basis.vectors])
            step = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 4))
            x = inside + unit(matrix.columns, rng.choice(off_kernel)).scaled(step)
            assert any(matrix.apply(x))
            q = x.to_cost(2, double_diamond.arc_ids)
            assert not linearize(double_diamond, q).linearizable
            assert not oracle_linearize_lp(double_diamond, q, limit=10).linearizable

    def test_outside_kernel_is_not_linearizable(self, double_diamond):
        matrix = assemble_matrix(double_diamond, 2)
        x = unit(matrix.columns, (3, 6))
        assert any(matrix.apply(x))
        q = x.to_cost(2, double_diamond.arc_ids)
        assert not linearize(double_diamond, q)
        assert not oracle_linearize_lp(double_diamond, q, limit=10)

    def test_linear_instances_are_in_kernel(self, double_diamond):
        matrix = assemble_matrix(double_diamond, 2)
        for key in matrix.columns:
            if len(key) <= 1:
                assert not any(matrix.apply(unit(matrix.columns, key)))

    def test_dimension_mismatch(self, diamond, double_diamond):
        matrix = assemble_matrix(double_diamond, 2)
        with pytest.raises(DimensionMismatch):
            matrix.apply(unit(subset_index(diamond, 2), ()))

    @given(st.data())
    def test_residuals_vanish_exactly_on_linearizable(self, data):
        dag = data.draw(covered_dags(max_vertices=5))
        q = data.draw(order_d_costs(dag, data.draw(st.integers(2, 3))))
        assert (not any(residuals(dag, q))) == linearize(dag, q).linearizable

    @settings(max_examples=20)
    @given(st.data())
    def test_kernel_matches_linearizer(self, data):
        dag = data.draw(covered_dags(max_vertices=4, max_extra_arcs=3))
        matrix = assemble_matrix(dag, 2)
        x = CostVector.from_cost(data.draw(order_d_costs(dag, 2)), matrix.columns)
        in_kernel = not any(matrix.apply(x))
        assert in_kernel == linearize(dag, x.to_cost(2, dag.arc_ids)).linearizable


class TestProjection:
    def test_vector_in_span(self, double_diamond):
        basis = linearizable_subspace(double_diamond, 2)
        x = basis.combination([Fraction(i % 3) for i in range(len(basis))])
        assert project_onto_subspace(x, basis) == x

    def test_linear_instance(self, double_diamond):
        basis = linearizable_subspace(double_diamond, 2)
        c = LinearCost({1: 2, 6: Fraction(-1, 2), 8: 5})
        q = linear_as_order_d(c, 2) + OrderDCost(2, {(): 3})
        x = CostVector.from_cost(q, basis.index)
        assert project_onto_subspace(x, basis) == x

    def test_orthogonal_vector(self, double_diamond):
        matrix = compress_rows(assemble_matrix(double_diamond, 2))
        basis = kernel_basis(matrix, 2)
        (row,) = matrix.rows
        x = CostVector(matrix.columns, tuple(row))
        assert project_onto_subspace(x, basis).is_zero()


class TestCostVector:
    def test_round_trip_through_cost(self, diamond, diamond_quadratic):
        index = subset_index(diamond, 2)
        vec = CostVector.from_cost(diamond_quadratic, index)
        assert vec.to_cost(2, diamond.arc_ids) == diamond_quadratic

    def test_key_outside_index(self, diamond):
        with pytest.raises(DimensionMismatch):
            CostVector.from_cost(OrderDCost(3, {(1, 2, 3): 1}), subset_index(diamond, 2))

    def test_arithmetic(self, diamond):
        index = subset_index(diamond, 1)
        a = unit(index, (1,))
        b = unit(index, (2,)).scaled(3)
        assert (a + b).dot(b) == 9
        assert not (a + a.scaled(-1)).values[1]
