import json
from fractions import Fraction

import pytest

from vassiliev.liealg import (
    AlgebraError,
    MetricLieAlgebra,
    builtin,
    load_algebra,
    s_poly,
    save_algebra,
    validate,
)


class TestBuiltins:
    @pytest.mark.parametrize(
        "name", ["sl2", "gl(2)", "gl(3)", "so(3)", "so(4)", "abelian(3)", "gl(1|1)"]
    )
    def test_validates(self, name):
        g = builtin(name)
        assert validate(g) == []
        assert "fund" in g.reps and "adjoint" in g.reps

    def test_unknown_name(self):
        with pytest.raises(AlgebraError):
            builtin("e8")

    def test_sl2_casimir(self, sl2):
        c = sl2.casimir
        # (1/2) H x H + E x F + F x E  in basis order (H, E, F)
        expected = (
            (Fraction(1, 2), 0, 0),
            (0, 0, 1),
            (0, 1, 0),
        )
        assert all(c[i][j] == expected[i][j] for i in range(3) for j in range(3))

    def test_abelian_casimir_identity(self, abelian3):
        c = abelian3.casimir
        assert all(c[i][j] == (1 if i == j else 0) for i in range(3) for j in range(3))

    def test_metric_times_inverse(self, gl3):
        c = gl3.casimir
        b = gl3.metric
        for i in range(gl3.dim):
            for j in range(gl3.dim):
                s = sum(b[i][k] * c[k][j] for k in range(gl3.dim))
                assert s == (1 if i == j else 0)

    def test_adjoint_rep_satisfies_invariant(self, sl2):
        assert sl2.reps["adjoint"].validate(sl2) == []

    def test_perturbed_sl2_fails_jacobi_with_witness(self, sl2):
        f = dict(sl2.f)
        # perturb [H,E] = 2E into [H,E] = 2E + H
        f[(0, 1)] = ((1, Fraction(2)), (0, Fraction(1)))
        bad = MetricLieAlgebra("bad", 3, (0, 0, 0), f, sl2.metric, {})
        issues = validate(bad)
        assert any("Jacobi" in msg or "antisymmetry" in msg for msg in issues)

    def test_casimir_is_adjoint_invariant(self, sl2, gl11):
        # ad(e_d) annihilates c: sum_e f^a_{de} c^{eb} + (sign) f^b_{de} c^{ae} = 0
        for g in (sl2, gl11):
            c = g.casimir
            p = g.parity
            for d in range(g.dim):
                for a in range(g.dim):
                    for b in range(g.dim):
                        total = Fraction(0)
                        for e in range(g.dim):
                            for x, co in g.bracket(d, e):
                                if x == a:
                                    total += co * c[e][b]
                        for e in range(g.dim):
                            sgn = -1 if (p[d] and p[a]) else 1
                            for x, co in g.bracket(d, e):
                                if x == b:
                                    total += sgn * co * c[a][e]
                        assert total == 0, (d, a, b)

    def test_lowered_constants_fully_antisymmetric(self, sl2):
        for a in range(3):
            for b in range(3):
                for c in range(3):
                    v = sl2.lowered(a, b, c)
                    assert sl2.lowered(b, a, c) == -v
                    assert sl2.lowered(a, c, b) == -v
                    assert sl2.lowered(c, b, a) == -v


class TestSPoly:
    def test_abelian_vanishes(self, abelian3):
        for i in (1, 2, 3):
            assert s_poly(abelian3, i).is_zero()

    def test_sl2_s1_vanishes(self, sl2):
        assert s_poly(sl2, 1).is_zero()

    def test_sl2_s2_is_killing_form(self, sl2):
        s2 = s_poly(sl2, 2)
        k = sl2.killing_form()
        # polynomial coefficient of x_a x_b is K(a,b) summed over orderings
        for a in range(3):
            for b in range(a, 3):
                coeff = s2.terms.get(tuple(sorted((a, b))), Fraction(0))
                expected = k[a][b] if a == b else 2 * k[a][b]
                assert coeff == expected


class TestFileFormat:
    def test_round_trip(self, sl2, tmp_path):
        path = tmp_path / "sl2.json"
        save_algebra(sl2, path)
        g = load_algebra(path)
        assert g.dim == 3 and g.f == sl2.f and g.metric == sl2.metric
        assert set(g.reps) == set(sl2.reps)
        assert g.reps["fund"].rho == sl2.reps["fund"].rho

    def test_nonsymmetric_metric_rejected(self, tmp_path):
        doc = {"dim": 2, "parity": [0, 0], "f": [], "metric": [[0, 1, "1"], [1, 1, "1"]]}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(AlgebraError, match="symmetric"):
            load_algebra(path)

    def test_singular_metric_rejected(self, tmp_path):
        doc = {"dim": 2, "parity": [0, 0], "f": [], "metric": [[0, 0, "1"]]}
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(doc))
        with pytest.raises(AlgebraError, match="degenerate"):
            load_algebra(path)

    def test_parse_error_has_location(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{ not json")
        with pytest.raises(AlgebraError, match="line 1"):
            load_algebra(path)

    def test_super_round_trip(self, gl11, tmp_path):
        path = tmp_path / "gl11.json"
        save_algebra(gl11, path)
        g = load_algebra(path)
        assert g.parity == (0, 0, 1, 1)
        assert g.metric == gl11.metric
