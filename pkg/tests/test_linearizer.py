from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linspp.apec import compute_gamma
from linspp.costs import (
    LinearCost,
    OrderDCost,
    eval_linear,
    eval_order_d,
    linear_as_order_d,
    reduce_form,
)
from linspp.errors import PropertyPiViolated, UnknownArc
from linspp.generators import GeneratorSpec, generate
from linspp.graph import choose_nonbasic_system, iter_paths
from linspp.linearizer import linearize, val_of_arc, verify_linearization
from linspp.oracle import oracle_linearize_lp

from .strategies import covered_dags, order_d_costs, rationals


def random_linear(data, dag):
    values = data.draw(st.lists(rationals(), min_size=dag.m, max_size=dag.m))
    return LinearCost(dict(zip(sorted(dag.arc_ids), values, strict=True)), dag.arc_ids)


class TestLinearize:
    def test_diamond(self, diamond, diamond_quadratic):
        verdict = linearize(diamond, diamond_quadratic)
        assert verdict.linearizable
        assert verdict.cost == LinearCost({1: 6})
        assert verify_linearization(diamond, diamond_quadratic, verdict.cost, limit=10)

    def test_planted_violation(self, double_diamond, planted_violation):
        verdict = linearize(double_diamond, planted_violation)
        assert not verdict
        witness = verdict.failure_witness
        assert witness.arc == 6
        left, right = witness.system.balance(planted_violation)
        assert left != right

    def test_witness_shape(self, double_diamond, planted_violation):
        system = linearize(double_diamond, planted_violation).failure_witness.system
        assert system.v == 3
        assert {str(system.p1), str(system.p2)} == {"1 3", "2 4"}
        assert str(system.q1) == "5 8"
        assert str(system.q2) == "6 7"

    def test_order_one(self, diamond):
        verdict = linearize(diamond, OrderDCost(1, {(): 2, (1,): 1}))
        assert verdict.cost == LinearCost({1: 3, 3: 2})

    def test_zero(self, double_diamond):
        verdict = linearize(double_diamond, OrderDCost.zero(3, double_diamond))
        assert verdict.cost == LinearCost.zero(double_diamond)

    def test_unknown_arc(self, diamond):
        with pytest.raises(UnknownArc):
            linearize(diamond, OrderDCost(2, {(1, 9): 1}))

    def test_rational_costs(self, diamond):
        q = OrderDCost(2, {(1, 2): Fraction(1, 3), (3,): Fraction(-1, 2)})
        verdict = linearize(diamond, q)
        assert verdict.cost == LinearCost({1: Fraction(1, 3), 3: Fraction(-1, 2)})

    def test_parallel_jobs_agree(self):
        spec = GeneratorSpec(family="layered", mode="non-linearizable", d=3, seed=4)
        dag, q = generate(spec)
        assert not linearize(dag, q, jobs=1).linearizable
        threaded = linearize(dag, q, jobs=4)
        assert not threaded.linearizable
        left, right = threaded.failure_witness.system.balance(q)
        assert left != right

    def test_parallel_jobs_same_cost(self):
        dag, q = generate(GeneratorSpec(family="layered", mode="linearizable", d=3, seed=2))
        assert linearize(dag, q, jobs=3).cost == linearize(dag, q).cost

    @pytest.mark.parametrize("d", [2, 3])
    @given(data=st.data())
    def test_linear_instances_reduce(self, d, data):
        dag = data.draw(covered_dags())
        c0 = random_linear(data, dag)
        verdict = linearize(dag, linear_as_order_d(c0, d))
        assert verdict.cost == reduce_form(c0, choose_nonbasic_system(dag))

    @given(st.data())
    def test_result_is_reduced_and_exact(self, data):
        dag = data.draw(covered_dags())
        q = data.draw(order_d_costs(dag, data.draw(st.integers(1, 3))))
        verdict = linearize(dag, q)
        if verdict.linearizable:
            ns = choose_nonbasic_system(dag)
            assert all(verdict.cost[a] == 0 for a in ns.arcs)
            assert verify_linearization(dag, q, verdict.cost, limit=10_000)
        else:
            left, right = verdict.failure_witness.system.balance(q)
            assert left != right

    @settings(max_examples=20)
    @given(st.integers(0, 10_000))
    def test_basic_arc_invariant(self, seed):
        dag, q = generate(GeneratorSpec(family="random-dag", m=7, mode="linearizable", seed=seed))
        verdict = linearize(dag, q)
        assert verdict.linearizable
        ns = choose_nonbasic_system(dag)
        for arc in dag.arcs:
            if ns.is_nonbasic(arc.id):
                continue
            for p in iter_paths(dag, dag.source, arc.tail):
                full = p.then_arc(arc).then(ns.path(arc.head))
                assert eval_order_d(q, full) == eval_linear(verdict.cost, full)

    @given(st.data())
    def test_unique_reduced_form(self, data):
        dag = data.draw(covered_dags())
        q = data.draw(order_d_costs(dag, 2))
        verdict = linearize(dag, q)
        reference = oracle_linearize_lp(dag, q, limit=10_000)
        assert verdict.linearizable == reference.linearizable
        if verdict.linearizable:
            assert reduce_form(reference.cost, choose_nonbasic_system(dag)) == verdict.cost


class TestValOfArc:
    def test_zero(self, double_diamond):
        q = OrderDCost.zero(2, double_diamond)
        ns = choose_nonbasic_system(double_diamond)
        assert val_of_arc(6, q, ns, double_diamond, compute_gamma(q, ns)) == 0

    def test_violation(self, double_diamond, planted_violation):
        ns = choose_nonbasic_system(double_diamond)
        gamma = compute_gamma(planted_violation, ns)
        with pytest.raises(PropertyPiViolated):
            val_of_arc(6, planted_violation, ns, double_diamond, gamma)

    @given(st.data())
    def test_linear_value(self, data):
        dag = data.draw(covered_dags())
        c0 = random_linear(data, dag)
        q = linear_as_order_d(c0, 2)
        ns = choose_nonbasic_system(dag)
        gamma = compute_gamma(q, ns)
        for arc in ns.strongly_basic_arcs():
            expected = (
                c0[arc.id]
                + eval_linear(c0, ns.path(arc.head))
                - eval_linear(c0, ns.path(arc.tail))
            )
            assert val_of_arc(arc.id, q, ns, dag, gamma) == expected

    @settings(max_examples=10)
    @given(st.integers(0, 1_000))
    def test_matches_path_values(self, seed):
        spec = GeneratorSpec(family="double-diamond", mode="linearizable", d=2, seed=seed)
        dag, q = generate(spec)
        ns = choose_nonbasic_system(dag)
        gamma = compute_gamma(q, ns)
        for arc in ns.strongly_basic_arcs():
            value = val_of_arc(arc.id, q, ns, dag, gamma)
            for p in iter_paths(dag, dag.source, arc.tail):
                through_a = p.then_arc(arc).then(ns.path(arc.head))
                before = eval_order_d(q, p.then(ns.path(arc.tail)))
                assert eval_order_d(q, through_a) - before == value


class TestVerify:
    def test_diamond(self, diamond, diamond_quadratic):
        assert verify_linearization(diamond, diamond_quadratic, LinearCost({1: 6}), limit=10)

    def test_perturbed_source_arc(self, diamond, diamond_quadratic):
        assert not verify_linearization(
            diamond, diamond_quadratic, LinearCost({1: 6, 3: 1}), limit=10
        )

    def test_zero(self, diamond):
        assert verify_linearization(diamond, OrderDCost(2), LinearCost(), limit=10)

