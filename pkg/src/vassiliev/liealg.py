"""Metric Lie (super)algebras and representations as exact tensor data.

An algebra is given by structure constants f^c_{ab} ([x_a, x_b] =
sum_c f^c_{ab} x_c), a nondegenerate invariant (super)symmetric metric
b_{ab}, and a parity per basis element.  The single Koszul rule — a sign
(-1)^{|x||y|} whenever homogeneous symbols transpose — drives every
graded variant.  Everything is over exact rationals.

Built-ins use the trace form on the defining representation as metric
(not the Killing form), which keeps values small; the Killing form is
available as a derived matrix.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction

from .poly import Poly, sort_monomial


class AlgebraError(ValueError):
    pass


def _mat_mul(a, b):
    n, m, k = len(a), len(b[0]), len(b)
    return [
        [sum((a[i][t] * b[t][j] for t in range(k)), Fraction(0)) for j in range(m)]
        for i in range(n)
    ]


def _mat_inverse(m):
    """Gauss-Jordan inverse over Fraction; None if singular."""
    n = len(m)
    a = [list(row) + [Fraction(1) if i == j else Fraction(0) for j in range(n)]
         for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


@dataclass
class Representation:
    """Matrices rho(e_a) acting on a parity-graded space."""

    name: str
    dim: int
    parity: tuple[int, ...]
    rho: tuple  # per basis element, dim x dim rows of Fraction

    def matrix(self, a: int):
        return self.rho[a]

    def validate(self, g: "MetricLieAlgebra") -> list[str]:
        issues = []
        for a in range(g.dim):
            mat = self.rho[a]
            for i in range(self.dim):
                for j in range(self.dim):
                    if mat[i][j] and (self.parity[i] - self.parity[j] - g.parity[a]) % 2:
                        issues.append(
                            f"rep {self.name}: rho[{a}][{i}][{j}] violates parity"
                        )
        for a in range(g.dim):
            for b in range(g.dim):
                lhs = [[Fraction(0)] * self.dim for _ in range(self.dim)]
                for c, coeff in g.bracket(a, b):
                    for i in range(self.dim):
                        for j in range(self.dim):
                            lhs[i][j] += coeff * self.rho[c][i][j]
                ab = _mat_mul(self.rho[a], self.rho[b])
                ba = _mat_mul(self.rho[b], self.rho[a])
                sgn = -1 if (g.parity[a] and g.parity[b]) else 1
                for i in range(self.dim):
                    for j in range(self.dim):
                        if lhs[i][j] != ab[i][j] - sgn * ba[i][j]:
                            issues.append(
                                f"rep {self.name}: supercommutator fails at "
                                f"generators ({a},{b}) entry ({i},{j})"
                            )
                            break
                    else:
                        continue
                    break
        return issues

    def tensor(self, other: "Representation", g: "MetricLieAlgebra") -> "Representation":
        """Tensor-product representation (Leibniz action, Koszul signs)."""
        dim = self.dim * other.dim
        parity = tuple(
            (self.parity[i] + other.parity[j]) % 2
            for i in range(self.dim)
            for j in range(other.dim)
        )
        rho = []
        for a in range(g.dim):
            mat = [[Fraction(0)] * dim for _ in range(dim)]
            for i in range(self.dim):
                for k in range(self.dim):
                    if not self.rho[a][i][k]:
                        continue
                    for j in range(other.dim):
                        mat[i * other.dim + j][k * other.dim + j] += self.rho[a][i][k]
            for j in range(other.dim):
                for l in range(other.dim):
                    if not other.rho[a][j][l]:
                        continue
                    # rho_W(e_a) acting past the V factor
                    for i in range(self.dim):
                        sgn = -1 if (g.parity[a] and self.parity[i]) else 1
                        mat[i * other.dim + j][i * other.dim + l] += sgn * other.rho[a][j][l]
            rho.append(tuple(tuple(row) for row in mat))
        return Representation(f"{self.name}*{other.name}", dim, parity, tuple(rho))


@dataclass
class MetricLieAlgebra:
    name: str
    dim: int
    parity: tuple[int, ...]
    f: dict            # (a, b) -> tuple of (c, Fraction)
    metric: tuple      # rows of Fraction
    reps: dict = field(default_factory=dict)
    _casimir: tuple | None = field(default=None, repr=False)

    def bracket(self, a: int, b: int):
        return self.f.get((a, b), ())

    @property
    def casimir(self):
        """Inverse metric c^{ab}; raises if the metric is singular."""
        if self._casimir is None:
            inv = _mat_inverse([list(row) for row in self.metric])
            if inv is None:
                raise AlgebraError("metric is singular")
            self._casimir = tuple(tuple(row) for row in inv)
        return self._casimir

    def lowered(self, a: int, b: int, c: int) -> Fraction:
        """f_{abc} = sum_e f^e_{ab} b_{ec}."""
        return sum((coeff * self.metric[e][c] for e, coeff in self.bracket(a, b)), Fraction(0))

    def ad(self, a: int):
        """Matrix of ad(e_a): rows c, cols b with entry f^c_{ab}."""
        mat = [[Fraction(0)] * self.dim for _ in range(self.dim)]
        for b in range(self.dim):
            for c, coeff in self.bracket(a, b):
                mat[c][b] += coeff
        return mat

    def killing_form(self):
        """Derived matrix str(ad x ad y) (the supertrace on the adjoint)."""
        ads = [self.ad(a) for a in range(self.dim)]
        out = []
        for a in range(self.dim):
            row = []
            for b in range(self.dim):
                m = _mat_mul(ads[a], ads[b])
                row.append(
                    sum(
                        ((-m[i][i] if self.parity[i] else m[i][i]) for i in range(self.dim)),
                        Fraction(0),
                    )
                )
            out.append(tuple(row))
        return tuple(out)

    def rep(self, name: str) -> Representation:
        if name not in self.reps:
            raise AlgebraError(f"{self.name} has no representation {name!r}")
        return self.reps[name]


def validate(g: MetricLieAlgebra) -> list[str]:
    """Exhaustive axiom check; returns human-readable issues with witnesses."""
    issues = []
    d = g.dim
    p = g.parity

    def brk(a, b):
        out = [Fraction(0)] * d
        for c, coeff in g.bracket(a, b):
            out[c] += coeff
        return out

    for a in range(d):
        for b in range(d):
            for c, coeff in g.bracket(a, b):
                if coeff and (p[c] - p[a] - p[b]) % 2:
                    issues.append(f"f^{c}_{{{a},{b}}} violates parity additivity")
            sgn = -1 if (p[a] and p[b]) else 1
            ab, ba = brk(a, b), brk(b, a)
            for c in range(d):
                if ab[c] != -sgn * ba[c]:
                    issues.append(f"graded antisymmetry fails at ({a},{b}) -> {c}")
                    break
    for a in range(d):
        for b in range(d):
            for c in range(d):
                # [a,[b,c]] = [[a,b],c] + (-1)^{p_a p_b} [b,[a,c]]
                lhs = [Fraction(0)] * d
                for e, co in g.bracket(b, c):
                    for x, co2 in g.bracket(a, e):
                        lhs[x] += co * co2
                rhs = [Fraction(0)] * d
                for e, co in g.bracket(a, b):
                    for x, co2 in g.bracket(e, c):
                        rhs[x] += co * co2
                sgn = -1 if (p[a] and p[b]) else 1
                for e, co in g.bracket(a, c):
                    for x, co2 in g.bracket(b, e):
                        rhs[x] += sgn * co * co2
                if lhs != rhs:
                    issues.append(f"graded Jacobi identity fails at ({a},{b},{c})")
    for a in range(d):
        for b in range(d):
            if g.metric[a][b] and p[a] != p[b]:
                issues.append(f"metric pairs different parities at ({a},{b})")
            sgn = -1 if (p[a] and p[b]) else 1
            if g.metric[a][b] != sgn * g.metric[b][a]:
                issues.append(f"metric is not (super)symmetric at ({a},{b})")
    if _mat_inverse([list(r) for r in g.metric]) is None:
        issues.append("metric is degenerate")
    for a in range(d):
        for b in range(d):
            for c in range(d):
                lhs = sum((co * g.metric[e][c] for e, co in g.bracket(a, b)), Fraction(0))
                rhs = sum((g.metric[a][e] * co for e, co in g.bracket(b, c)), Fraction(0))
                if lhs != rhs:
                    issues.append(f"metric invariance b([x,y],z)=b(x,[y,z]) fails at ({a},{b},{c})")
    # total graded antisymmetry of the lowered constants
    for a in range(d):
        for b in range(d):
            for c in range(d):
                fabc = g.lowered(a, b, c)
                s_ab = -1 if (p[a] and p[b]) else 1
                if g.lowered(b, a, c) != -s_ab * fabc:
                    issues.append(f"lowered constants not antisymmetric in (a,b) at ({a},{b},{c})")
                s_bc = -1 if (p[b] and p[c]) else 1
                if g.lowered(a, c, b) != -s_bc * fabc:
                    issues.append(f"lowered constants not antisymmetric in (b,c) at ({a},{b},{c})")
    for rep in g.reps.values():
        issues.extend(rep.validate(g))
    return issues


# ---------------------------------------------------------------------------
# Construction helpers and built-ins


def _algebra_from_brackets(name, dim, parity, brackets, metric, reps=()):
    f = {}
    for (a, b), terms in brackets.items():
        cleaned = tuple((c, Fraction(v)) for c, v in terms if Fraction(v))
        if cleaned:
            f[(a, b)] = cleaned
    g = MetricLieAlgebra(
        name,
        dim,
        tuple(parity),
        f,
        tuple(tuple(Fraction(x) for x in row) for row in metric),
        {},
    )
    for rep in reps:
        g.reps[rep.name] = rep
    return g


def _adjoint_rep(g: MetricLieAlgebra) -> Representation:
    rho = tuple(tuple(tuple(row) for row in g.ad(a)) for a in range(g.dim))
    return Representation("adjoint", g.dim, g.parity, rho)


def _trivial_rep(g: MetricLieAlgebra) -> Representation:
    zero = ((Fraction(0),),)
    return Representation("trivial", 1, (0,), tuple(zero for _ in range(g.dim)))


def _brackets_from_matrices(mats, parity):
    """Structure constants of a matrix (super)algebra in the given basis."""
    dim = len(mats)
    n = len(mats[0])
    index = {}
    for k, m in enumerate(mats):
        for i in range(n):
            for j in range(n):
                if m[i][j]:
                    index.setdefault((i, j), []).append((k, m[i][j]))
    brackets = {}
    for a in range(dim):
        for b in range(dim):
            ab = _mat_mul(mats[a], mats[b])
            ba = _mat_mul(mats[b], mats[a])
            sgn = -1 if (parity[a] and parity[b]) else 1
            comm = [[ab[i][j] - sgn * ba[i][j] for j in range(n)] for i in range(n)]
            # decompose in the basis (assumed to consist of matrix units here)
            terms = []
            used = [[False] * n for _ in range(n)]
            for k, m in enumerate(mats):
                coeff = None
                for i in range(n):
                    for j in range(n):
                        if m[i][j]:
                            coeff = comm[i][j] / m[i][j]
                            break
                    if coeff is not None:
                        break
                if coeff:
                    terms.append((k, coeff))
                    for i in range(n):
                        for j in range(n):
                            comm[i][j] -= coeff * m[i][j]
            if any(any(row) for row in comm):
                raise AlgebraError("bracket does not close on the basis")
            if terms:
                brackets[(a, b)] = tuple(terms)
    return brackets


def _sl2() -> MetricLieAlgebra:
    # basis H, E, F; [H,E]=2E, [H,F]=-2F, [E,F]=H; metric = trace form on fund
    H, E, F = 0, 1, 2
    brackets = {
        (H, E): ((E, 2),),
        (E, H): ((E, -2),),
        (H, F): ((F, -2),),
        (F, H): ((F, 2),),
        (E, F): ((H, 1),),
        (F, E): ((H, -1),),
    }
    metric = [[2, 0, 0], [0, 0, 1], [0, 1, 0]]
    g = _algebra_from_brackets("sl2", 3, (0, 0, 0), brackets, metric)
    fund = Representation(
        "fund",
        2,
        (0, 0),
        (
            ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(-1))),
            ((Fraction(0), Fraction(1)), (Fraction(0), Fraction(0))),
            ((Fraction(0), Fraction(0)), (Fraction(1), Fraction(0))),
        ),
    )
    g.reps["fund"] = fund
    g.reps["adjoint"] = _adjoint_rep(g)
    g.reps["trivial"] = _trivial_rep(g)
    return g


def _matrix_units(n, pairs):
    mats = []
    for i, j in pairs:
        m = [[Fraction(0)] * n for _ in range(n)]
        m[i][j] = Fraction(1)
        mats.append(m)
    return mats


def _gl(n: int) -> MetricLieAlgebra:
    pairs = [(i, j) for i in range(n) for j in range(n)]
    mats = _matrix_units(n, pairs)
    parity = (0,) * len(pairs)
    brackets = _brackets_from_matrices(mats, parity)
    # trace form: b(E_ij, E_kl) = delta_jk delta_il
    d = len(pairs)
    metric = [[Fraction(0)] * d for _ in range(d)]
    for a, (i, j) in enumerate(pairs):
        for b, (k, l) in enumerate(pairs):
            if j == k and i == l:
                metric[a][b] = Fraction(1)
    g = _algebra_from_brackets(f"gl({n})", d, parity, brackets, metric)
    rho = tuple(tuple(tuple(row) for row in m) for m in mats)
    g.reps["fund"] = Representation("fund", n, (0,) * n, rho)
    g.reps["adjoint"] = _adjoint_rep(g)
    g.reps["trivial"] = _trivial_rep(g)
    return g


def _so(n: int) -> MetricLieAlgebra:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    mats = []
    for i, j in pairs:
        m = [[Fraction(0)] * n for _ in range(n)]
        m[i][j], m[j][i] = Fraction(1), Fraction(-1)
        mats.append(m)
    d = len(pairs)
    parity = (0,) * d
    # decompose commutators directly on the L_ij basis
    brackets = {}
    idx = {p: k for k, p in enumerate(pairs)}

    def coeff_of(m, i, j):
        return m[i][j]

    for a in range(d):
        for b in range(d):
            comm = _mat_mul(mats[a], mats[b])
            ba = _mat_mul(mats[b], mats[a])
            comm = [[comm[i][j] - ba[i][j] for j in range(n)] for i in range(n)]
            terms = []
            for (i, j), k in idx.items():
                if comm[i][j]:
                    terms.append((k, comm[i][j]))
            if terms:
                brackets[(a, b)] = tuple(terms)
    metric = [
        [
            sum((mats[a][i][j] * mats[b][j][i] for i in range(n) for j in range(n)), Fraction(0))
            for b in range(d)
        ]
        for a in range(d)
    ]
    g = _algebra_from_brackets(f"so({n})", d, parity, brackets, metric)
    rho = tuple(tuple(tuple(row) for row in m) for m in mats)
    g.reps["fund"] = Representation("fund", n, (0,) * n, rho)
    g.reps["adjoint"] = _adjoint_rep(g)
    g.reps["trivial"] = _trivial_rep(g)
    return g


def _abelian(d: int) -> MetricLieAlgebra:
    metric = [[Fraction(1) if i == j else Fraction(0) for j in range(d)] for i in range(d)]
    g = _algebra_from_brackets(f"abelian({d})", d, (0,) * d, {}, metric)
    zero = tuple(tuple(Fraction(0) for _ in range(d)) for _ in range(d))
    g.reps["fund"] = Representation("fund", d, (0,) * d, tuple(zero for _ in range(d)))
    g.reps["adjoint"] = _adjoint_rep(g)
    g.reps["trivial"] = _trivial_rep(g)
    return g


def _gl11() -> MetricLieAlgebra:
    # basis E11, E22 (even), E12, E21 (odd); supertrace metric on C^{1|1}
    pairs = [(0, 0), (1, 1), (0, 1), (1, 0)]
    mats = _matrix_units(2, pairs)
    parity = (0, 0, 1, 1)
    brackets = _brackets_from_matrices(mats, parity)
    # b(x, y) = str(xy), str(M) = M00 - M11 on C^{1|1}
    d = 4
    metric = [[Fraction(0)] * d for _ in range(d)]
    for a in range(d):
        for b in range(d):
            m = _mat_mul(mats[a], mats[b])
            metric[a][b] = m[0][0] - m[1][1]
    g = _algebra_from_brackets("gl(1|1)", d, parity, brackets, metric)
    rho = tuple(tuple(tuple(row) for row in m) for m in mats)
    g.reps["fund"] = Representation("fund", 2, (0, 1), rho)
    g.reps["adjoint"] = _adjoint_rep(g)
    g.reps["trivial"] = _trivial_rep(g)
    return g


_BUILTIN_CACHE: dict[str, MetricLieAlgebra] = {}


def builtin(name: str) -> MetricLieAlgebra:
    """Built-in algebras: sl2, gl(n), so(n), abelian(d), gl(1|1)."""
    if name in _BUILTIN_CACHE:
        return _BUILTIN_CACHE[name]
    if name == "sl2":
        g = _sl2()
    elif name == "gl(1|1)":
        g = _gl11()
    else:
        m = re.fullmatch(r"(gl|so|abelian)\((\d+)\)", name)
        if not m:
            raise AlgebraError(f"unknown algebra {name!r}")
        kind, n = m.group(1), int(m.group(2))
        if n < 1:
            raise AlgebraError("size must be positive")
        if kind == "gl":
            g = _gl(n)
        elif kind == "so":
            if n < 3:
                raise AlgebraError("so(n) needs n >= 3 for a nondegenerate trace form")
            g = _so(n)
        else:
            g = _abelian(n)
    issues = validate(g)
    if issues:
        raise AlgebraError(f"built-in {name} failed validation: {issues[:3]}")
    _BUILTIN_CACHE[name] = g
    return g


def s_poly(g: MetricLieAlgebra, i: int) -> Poly:
    """The invariant polynomial x -> str(ad(x)^i) as an element of S^i(g*).

    The coefficient of a monomial is the sum of str(ad ... ad) over its
    distinct orderings (Koszul-signed for odd indices).
    """
    if i < 1:
        raise ValueError("power must be positive")
    ads = [g.ad(a) for a in range(g.dim)]
    # cache of products along tuples
    prod_cache: dict[tuple[int, ...], list] = {(): None}

    def product(word):
        if word in prod_cache:
            return prod_cache[word]
        m = product(word[:-1])
        m = ads[word[-1]] if m is None else _mat_mul(m, ads[word[-1]])
        prod_cache[word] = m
        return m

    def strace(m):
        return sum(
            ((-m[k][k] if g.parity[k] else m[k][k]) for k in range(g.dim)), Fraction(0)
        )

    out = Poly.zero(g.parity, dual=True)
    import itertools as _it

    for mono in _it.combinations_with_replacement(range(g.dim), i):
        coeff = Fraction(0)
        for word in set(_it.permutations(mono)):
            _, sign = sort_monomial(word, g.parity)
            if sign == 0:
                continue
            coeff += sign * strace(product(word))
        if coeff:
            out.terms[mono] = coeff
    return out


# ---------------------------------------------------------------------------
# File format


def _frac_to_str(x: Fraction) -> str:
    return str(x)


def _frac_from(v) -> Fraction:
    if isinstance(v, str):
        return Fraction(v)
    if isinstance(v, int):
        return Fraction(v)
    raise AlgebraError(f"bad rational {v!r} (use integers or 'p/q' strings)")


def save_algebra(g: MetricLieAlgebra, path) -> None:
    doc = {
        "dim": g.dim,
        "parity": list(g.parity),
        "f": [
            [a, b, c, _frac_to_str(co)]
            for (a, b), terms in sorted(g.f.items())
            for c, co in terms
        ],
        "metric": [
            [a, b, _frac_to_str(g.metric[a][b])]
            for a in range(g.dim)
            for b in range(g.dim)
            if g.metric[a][b]
        ],
        "reps": {
            name: {
                "dim": rep.dim,
                "parity": list(rep.parity),
                "rho": [
                    [k, i, j, _frac_to_str(rep.rho[k][i][j])]
                    for k in range(g.dim)
                    for i in range(rep.dim)
                    for j in range(rep.dim)
                    if rep.rho[k][i][j]
                ],
            }
            for name, rep in sorted(g.reps.items())
        },
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")


def load_algebra(path, name: str | None = None, validated: bool = True) -> MetricLieAlgebra:
    """Parse (and by default validate) an algebra file.

    Raises AlgebraError with line/column on parse failures and with axiom
    witnesses on validation failures.
    """
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise AlgebraError(f"parse error at line {e.lineno} column {e.colno}: {e.msg}") from e
    try:
        dim = int(doc["dim"])
        parity = tuple(int(x) % 2 for x in doc.get("parity", [0] * dim))
        if len(parity) != dim:
            raise AlgebraError("parity vector length != dim")
        brackets: dict = {}
        for a, b, c, v in doc.get("f", []):
            brackets.setdefault((int(a), int(b)), []).append((int(c), _frac_from(v)))
        metric = [[Fraction(0)] * dim for _ in range(dim)]
        for a, b, v in doc.get("metric", []):
            metric[int(a)][int(b)] = _frac_from(v)
        g = _algebra_from_brackets(
            name or str(doc.get("name", "loaded")), dim, parity,
            {k: tuple(v) for k, v in brackets.items()}, metric,
        )
        for rname, rdoc in doc.get("reps", {}).items():
            rdim = int(rdoc["dim"])
            rparity = tuple(int(x) % 2 for x in rdoc.get("parity", [0] * rdim))
            rho = [
                [[Fraction(0)] * rdim for _ in range(rdim)] for _ in range(dim)
            ]
            for k, i, j, v in rdoc.get("rho", []):
                rho[int(k)][int(i)][int(j)] = _frac_from(v)
            g.reps[rname] = Representation(
                rname, rdim, rparity, tuple(tuple(tuple(r) for r in m) for m in rho)
            )
    except (KeyError, IndexError, TypeError, ValueError) as e:
        if isinstance(e, AlgebraError):
            raise
        raise AlgebraError(f"malformed algebra file: {e}") from e
    if validated:
        issues = validate(g)
        if issues:
            raise AlgebraError("validation failed: " + "; ".join(issues[:5]))
    return g
