import itertools
import random
from fractions import Fraction

import pytest

from vassiliev.diagrams import (
    DiagramError,
    DiagramVector,
    JacobiGraph,
    bernoulli_mod,
    build_graph,
    canonicalize,
    cap,
    chi,
    connect_sum,
    disjoint_union,
    empty_diagram,
    graph_disjoint_union,
    omega_truncated,
    unit_vector,
    wheel,
    wheel_vector,
)

PERMS3 = [
    ((0, 1, 2), 1), ((1, 2, 0), 1), ((2, 0, 1), 1),
    ((0, 2, 1), -1), ((2, 1, 0), -1), ((1, 0, 2), -1),
]


def brute_force_signed_automorphisms(g: JacobiGraph):
    """All (relabeling, orientation sign) pairs fixing g; independent oracle."""
    out = []
    nv, nlegs = g.nv, g.nlegs
    rotations = range(max(1, nlegs)) if g.kind == "A" else [0]
    leg_perms = (
        [tuple((r + k) % nlegs for k in range(nlegs)) for r in rotations]
        if g.kind == "A"
        else list(itertools.permutations(range(nlegs)))
    )
    for vperm in itertools.permutations(range(nv)):
        for slot_choice in itertools.product(PERMS3, repeat=nv):
            sign = 1
            portmap = {}
            for v in range(nv):
                perm, s = slot_choice[v]
                sign *= s
                for j in range(3):
                    portmap[3 * v + perm[j]] = 3 * vperm[v] + j
            for lp in leg_perms:
                m = dict(portmap)
                for k in range(nlegs):
                    m[3 * nv + k] = 3 * nv + lp[k]
                image = [-1] * len(g.pairing)
                ok = True
                for p, q in g.edges():
                    a, b = m[p], m[q]
                    image[a], image[b] = b, a
                if tuple(image) != g.pairing:
                    continue
                out.append(sign)
    return out


class TestCanonicalize:
    def test_idempotent(self, w2_vec):
        (g, c) = next(iter(w2_vec))
        assert canonicalize(g) == (g, 1)

    def test_odd_wheels_vanish(self):
        for l in (1, 3, 5):
            assert canonicalize(wheel(l))[1] == 0

    def test_even_wheel_nonzero_vs_automorphism_oracle(self):
        w2 = wheel(2)
        canon, sign = canonicalize(w2)
        assert sign in (1, -1)
        signs = brute_force_signed_automorphisms(canon)
        assert signs and -1 not in signs

    def test_odd_wheel_has_reversing_automorphism(self):
        canon, sign = canonicalize(wheel(3))
        assert sign == 0
        signs = brute_force_signed_automorphisms(canon)
        assert -1 in signs

    def test_tadpole_is_zero(self):
        g = build_graph(
            "B", [("a", "b", "c")], [("a", "b"), ("c", "l")]
        )
        assert canonicalize(g)[1] == 0

    def test_antisymmetry_sign_flip(self, strut):
        y = build_graph(
            "A",
            [("f1", "f2", "f3")],
            [("f1", "l1"), ("f2", "l2"), ("f3", "l3")],
            loop=["l1", "l2", "l3"],
        )
        y_swapped = build_graph(
            "A",
            [("f2", "f1", "f3")],
            [("f1", "l1"), ("f2", "l2"), ("f3", "l3")],
            loop=["l1", "l2", "l3"],
        )
        c1, s1 = canonicalize(y)
        c2, s2 = canonicalize(y_swapped)
        assert c1 == c2 and s1 == -s2 != 0

    def test_loop_rotation_same_class(self, one_chord):
        g2 = build_graph("A", [], [("a", "b")], loop=["b", "a"])
        assert canonicalize(one_chord)[0] == canonicalize(g2)[0]

    def test_malformed_rejected(self):
        with pytest.raises(DiagramError):
            JacobiGraph("B", 1, (1, 0, 2), None)  # port 2 pairs itself
        with pytest.raises(DiagramError):
            JacobiGraph("A", 0, (1, 0), None)  # kind A without loop
        with pytest.raises(DiagramError):
            build_graph("B", [("a", "b", "c")], [("a", "b")])  # c uncovered


class TestVectorOps:
    def test_add_zero(self, w2_vec):
        assert w2_vec + DiagramVector.zero("B") == w2_vec

    def test_cancel(self, w2_vec):
        assert (w2_vec + w2_vec.scale(-1)).is_zero()

    def test_scale(self, w2_vec):
        assert w2_vec.scale(2).scale(Fraction(1, 2)) == w2_vec

    def test_kind_mismatch(self, w2_vec, one_chord_vec):
        with pytest.raises(DiagramError):
            w2_vec + one_chord_vec


class TestDisjointUnion:
    def test_unit(self, w2_vec):
        assert disjoint_union(unit_vector("B"), w2_vec) == w2_vec

    def test_square_single_class(self, w2_vec):
        u = disjoint_union(w2_vec, w2_vec)
        assert len(u) == 1
        assert list(u.terms.values()) == [Fraction(1)]

    def test_commutative_associative_random(self, strut_vec, w2_vec):
        rng = random.Random(7)
        pool = [strut_vec, w2_vec, disjoint_union(strut_vec, w2_vec)]
        for _ in range(10):
            a, b, c = (rng.choice(pool) for _ in range(3))
            assert disjoint_union(a, b) == disjoint_union(b, a)
            assert disjoint_union(disjoint_union(a, b), c) == disjoint_union(
                a, disjoint_union(b, c)
            )

    def test_kind_a_rejected(self, one_chord_vec):
        with pytest.raises(DiagramError):
            disjoint_union(one_chord_vec, one_chord_vec)


class TestConnectSum:
    def test_unit(self, one_chord_vec, bare_loop_vec):
        assert connect_sum(bare_loop_vec, one_chord_vec) == one_chord_vec

    def test_two_chords(self, one_chord_vec):
        out = connect_sum(one_chord_vec, one_chord_vec)
        assert len(out) == 1
        ((g, c),) = list(out)
        assert (g.nv, g.nlegs) == (0, 4) and c == 1

    def test_cut_invariance_modulo_relations(self):
        # all cut points of the second factor yield the same reduced vector
        from vassiliev.relations import basis_A_chords, stu_reduce

        y = build_graph(
            "A",
            [("f1", "f2", "f3")],
            [("f1", "l1"), ("f2", "l2"), ("f3", "l3")],
            loop=["l1", "l2", "l3"],
        )
        chord = build_graph("A", [], [("a", "b")], loop=["a", "b"])
        basis = basis_A_chords(3)
        seen = []
        for r in range(3):
            loop = ["l1", "l2", "l3"][r:] + ["l1", "l2", "l3"][:r]
            yr = build_graph(
                "A",
                [("f1", "f2", "f3")],
                [("f1", "l1"), ("f2", "l2"), ("f3", "l3")],
                loop=loop,
            )
            s = connect_sum(DiagramVector.from_graph(yr), DiagramVector.from_graph(chord))
            seen.append(basis.reduce(stu_reduce(s)))
        assert all(v == seen[0] for v in seen)


class TestChi:
    def test_strut(self, strut_vec, one_chord_vec):
        assert chi(strut_vec) == one_chord_vec

    def test_empty_to_bare_loop(self, bare_loop_vec):
        assert chi(unit_vector("B")) == bare_loop_vec

    def test_w2_coefficient_one(self, w2_vec):
        out = chi(w2_vec)
        w2 = wheel(2)
        attached = JacobiGraph("A", w2.nv, w2.pairing, tuple(w2.legs), w2.circles)
        assert out == DiagramVector.from_graph(attached)

    def test_degree_preserving_and_linear(self, strut_vec, w2_vec):
        v = strut_vec.scale(3) + w2_vec
        out = chi(v)
        assert out.degrees() <= {2, 4}
        assert chi(strut_vec.scale(3)) + chi(w2_vec) == out

    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_strut_power_matches_direct_enumeration(self, strut_vec, k):
        from math import factorial

        v = strut_vec
        for _ in range(k - 1):
            v = disjoint_union(v, strut_vec)
        ((g, coeff),) = list(v)
        assert coeff == 1
        expected = DiagramVector("A")
        legs = list(g.legs)
        for perm in itertools.permutations(legs):
            expected.accumulate(JacobiGraph("A", g.nv, g.pairing, perm, g.circles), 1)
        expected = expected.scale(Fraction(1, factorial(len(legs))))
        assert chi(v) == expected


class TestCap:
    def test_empty_unit(self, strut_vec):
        assert cap(unit_vector("B"), strut_vec) == strut_vec

    def test_more_legs_is_zero(self, strut_vec):
        assert cap(DiagramVector.from_graph(wheel(4)), strut_vec).is_zero()

    def test_strut_strut_two_circles(self, strut_vec):
        out = cap(strut_vec, strut_vec)
        ((g, c),) = list(out)
        assert (g.nv, g.nlegs, g.circles, c) == (0, 0, 1, 2)

    def test_bilinear(self, strut_vec, w2_vec):
        d = disjoint_union(strut_vec, strut_vec)
        lhs = cap(w2_vec + strut_vec.scale(2), d)
        rhs = cap(w2_vec, d) + cap(strut_vec, d).scale(2)
        assert lhs == rhs

    def test_euler_grading(self, strut_vec, w2_vec):
        # capping C drops the ordinary degree by the Euler degree legs-v of C
        d = disjoint_union(strut_vec, strut_vec)
        for c_vec, euler in ((w2_vec, 0), (strut_vec, 2)):
            out = cap(c_vec, d)
            assert {g.degree for g, _ in out} == {4 - euler}


class TestWheel:
    def test_wheel2_shape(self):
        w2 = wheel(2)
        assert (w2.nv, w2.nlegs, w2.degree, w2.bigrade) == (2, 2, 4, (2, 2))

    def test_wheel4_bigrade(self):
        assert wheel(4).bigrade == (4, 4)

    def test_wheel0_rejected(self):
        with pytest.raises(DiagramError):
            wheel(0)


class TestBernoulli:
    def test_against_series_oracle(self):
        import sympy

        x = sympy.Symbol("x")
        series = sympy.series(
            sympy.log(sympy.sinh(x / 2) / (x / 2)) / 2, x, 0, 12
        ).removeO()
        poly = sympy.Poly(series, x)
        for i in (1, 2, 3, 4):
            expected = Fraction(str(poly.coeff_monomial(x ** (2 * i))))
            assert bernoulli_mod(i) == expected
        for odd in (1, 3, 5, 7):
            assert poly.coeff_monomial(x ** odd) == 0

    def test_frozen_values(self):
        assert bernoulli_mod(1) == Fraction(1, 48)
        assert bernoulli_mod(2) == Fraction(-1, 5760)

    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError):
            bernoulli_mod(0)


class TestOmega:
    def test_degree_zero(self):
        assert omega_truncated(0) == unit_vector("B")

    def test_degree_four(self):
        expected = unit_vector("B") + wheel_vector(2).scale(Fraction(1, 48))
        assert omega_truncated(4) == expected

    def test_degree_eight_has_w2w2_term(self, w2_vec):
        om = omega_truncated(8)
        w2w2 = disjoint_union(w2_vec, w2_vec)
        ((g, base),) = list(w2w2)
        assert om.terms[g] == Fraction(1, 2) * Fraction(1, 48) ** 2 * base

    def test_rejects_odd(self):
        with pytest.raises(ValueError):
            omega_truncated(3)


class TestComponents:
    def test_union_components(self, strut, w2_vec):
        ((w2g, _),) = list(w2_vec)
        g = graph_disjoint_union(w2g, strut)
        comps = g.components()
        sizes = sorted((len(v), len(l)) for v, l in comps)
        assert sizes == [(0, 2), (2, 2)]
