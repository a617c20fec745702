from fractions import Fraction

import pytest

from vassiliev.diagrams import DiagramVector, build_graph, wheel
from vassiliev.liealg import builtin
from vassiliev.relations import (
    Basis,
    BudgetError,
    basis_A_chords,
    basis_A_jacobi,
    basis_B,
    chord_diagrams,
    dim_A,
    dim_B,
    enumerate_a_diagrams,
    enumerate_b_graphs,
    four_t_relations,
    four_t_vectors,
    ihx_rows,
    stu_reduce,
    stu_rows,
    stu_sites,
)
from vassiliev.weights import WeightSystem


class TestStuReduce:
    def test_chord_diagram_fixed(self, one_chord_vec):
        assert stu_reduce(one_chord_vec) == one_chord_vec

    def test_mercedes_two_terms(self):
        y = build_graph(
            "A",
            [("f1", "f2", "f3")],
            [("f1", "l1"), ("f2", "l2"), ("f3", "l3")],
            loop=["l1", "l2", "l3"],
        )
        out = stu_reduce(DiagramVector.from_graph(y))
        assert sorted(out.terms.values()) == [Fraction(-1), Fraction(1)]
        assert all(g.nv == 0 for g, _ in out)

    def test_idempotent_on_image(self):
        for g in enumerate_a_diagrams(6):
            red = stu_reduce(DiagramVector.from_graph(g))
            assert stu_reduce(red) == red
            assert all(not stu_sites(h) for h, _ in red)

    def test_pipeline_agreement_degree_six(self):
        basis = basis_A_jacobi(6)
        for g in enumerate_a_diagrams(6):
            v = DiagramVector.from_graph(g)
            assert basis.reduce(stu_reduce(v)) == basis.reduce(v)


class TestFourT:
    def test_low_degrees_empty(self):
        assert four_t_relations(0).rows == []
        assert four_t_relations(1).rows == []

    def test_n2_rank_matches_dimension(self):
        m = four_t_relations(2)
        assert len(chord_diagrams(2)) - m.rank() == dim_A(2)

    def test_rows_vanish_under_sl2(self, sl2):
        ws = WeightSystem(sl2, sl2.rep("fund"))
        for row in four_t_vectors(3):
            assert ws.eval_closed(row) == 0


class TestDims:
    def test_frozen_values_both_pipelines(self):
        expected = [1, 1, 2, 3, 6]
        for n, dim in enumerate(expected):
            assert dim_A(n) == dim
            assert dim_A(n, method="jacobi") == dim

    def test_budget(self):
        with pytest.raises(BudgetError):
            dim_A(7)
        with pytest.raises(BudgetError):
            dim_B(10, 4)

    def test_dim_b_strut(self):
        assert dim_B(0, 2) == 1

    def test_dim_b_theta_class(self, sl2):
        # the closed 2-vertex class is nonzero: its sl2 evaluation is nonzero
        theta = enumerate_b_graphs(2, 0)[0]
        ws = WeightSystem(sl2)
        val = ws.eval_to_S(DiagramVector.from_graph(theta))
        assert not val.is_zero()
        assert dim_B(2, 0) == 1

    def test_dim_b_odd_parity_empty(self):
        assert dim_B(1, 2) == 0
        assert dim_B(2, 1) == 0
        assert enumerate_b_graphs(1, 2) == []

    def test_odd_wheels_not_in_columns(self):
        cols = enumerate_b_graphs(3, 3)
        w3_canonical = wheel(3)
        from vassiliev.diagrams import canonicalize

        w3c, _ = canonicalize(w3_canonical)
        assert w3c not in cols


class TestBasisReduce:
    def test_zero_vector(self):
        basis = basis_A_chords(2)
        assert basis.reduce(DiagramVector.zero("A")) == [0, 0]

    def test_relation_rows_reduce_to_zero(self):
        basis = basis_A_chords(3)
        for row in four_t_vectors(3):
            assert all(c == 0 for c in basis.reduce(row))

    def test_ihx_rows_reduce_to_zero_in_b(self):
        basis = basis_B(4, 2)
        for row in ihx_rows(enumerate_b_graphs(4, 2)):
            assert all(c == 0 for c in basis.reduce(row))

    def test_grading_mismatch(self, one_chord_vec):
        basis = basis_A_chords(2)
        from vassiliev.diagrams import DiagramError

        with pytest.raises(DiagramError):
            basis.reduce(one_chord_vec)

    def test_representatives_count_is_dimension(self):
        basis = basis_A_chords(4)
        assert len(basis.representatives) == 6


class TestRowsStayInSpan:
    @pytest.mark.parametrize("degree", [4, 6])
    def test_degree(self, degree):
        cols = set(enumerate_a_diagrams(degree))
        for row in stu_rows(sorted(cols, key=lambda g: g.pairing)) + ihx_rows(
            sorted(cols, key=lambda g: g.pairing)
        ):
            for g, _ in row:
                assert g in cols
