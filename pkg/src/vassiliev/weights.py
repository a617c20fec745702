"""Weight systems: compiling diagrams into tensor networks and evaluating.

A trivalent vertex receives the lowered structure tensor f_{abc} (axis
order = orientation triple), every internal edge a Casimir c^{ab}, and
Wilson-loop points the representation matrices threaded in loop order.
Four targets are provided: scalars (closed loop diagrams under a
representation), U(g) via the cut-loop word map, S(g) and S(g*) for
loop-free diagrams with open legs.

The universal enveloping algebra is handled in PBW normal order
(nondecreasing indices, odd indices strictly increasing), with the
straightening rule  e_b e_a = (-1)^{|a||b|} e_a e_b + [e_b, e_a].
"""

from __future__ import annotations

from fractions import Fraction

from .diagrams import DiagramVector, JacobiGraph, bernoulli_mod
from .liealg import MetricLieAlgebra, Representation, s_poly
from .poly import Poly, cap_product, exp_truncated
from .tensor import ContractionNetwork, SparseTensor, execute, identity_tensor


class UEA:
    """Straightening calculus for U(g) elements as normal-ordered words."""

    def __init__(self, g: MetricLieAlgebra):
        self.g = g
        self.parity = g.parity
        self._memo: dict[tuple, dict] = {}

    def _is_normal(self, word) -> bool:
        for x, y in zip(word, word[1:]):
            if x > y or (x == y and self.parity[x]):
                return False
        return True

    def straighten(self, word) -> dict:
        """Normal-ordered expansion of a generator word."""
        word = tuple(word)
        cached = self._memo.get(word)
        if cached is not None:
            return cached
        for i in range(len(word) - 1):
            x, y = word[i], word[i + 1]
            if x > y:
                out: dict = {}
                sgn = -1 if (self.parity[x] and self.parity[y]) else 1
                swapped = word[:i] + (y, x) + word[i + 2 :]
                _merge(out, self.straighten(swapped), Fraction(sgn))
                for c, coeff in self.g.bracket(x, y):
                    _merge(out, self.straighten(word[:i] + (c,) + word[i + 2 :]), coeff)
                self._memo[word] = out
                return out
            if x == y and self.parity[x]:
                out = {}
                for c, coeff in self.g.bracket(x, x):
                    _merge(
                        out,
                        self.straighten(word[:i] + (c,) + word[i + 2 :]),
                        coeff / 2,
                    )
                self._memo[word] = out
                return out
        res = {word: Fraction(1)}
        self._memo[word] = res
        return res

    def product(self, u: dict, v: dict) -> dict:
        out: dict = {}
        for wu, cu in u.items():
            for wv, cv in v.items():
                _merge(out, self.straighten(wu + wv), cu * cv)
        return out

    def commutator(self, u: dict, v: dict) -> dict:
        out = self.product(u, v)
        for w, c in self.product(v, u).items():
            cur = out.get(w, Fraction(0)) - c
            if cur:
                out[w] = cur
            else:
                out.pop(w, None)
        return out

    def commutes_with_generators(self, u: dict) -> bool:
        for a in range(self.g.dim):
            gen = {(a,): Fraction(1)}
            if self.commutator(gen, u):
                return False
        return True


def _merge(acc: dict, terms: dict, coeff) -> None:
    if not coeff:
        return
    for k, v in terms.items():
        cur = acc.get(k, Fraction(0)) + v * coeff
        if cur:
            acc[k] = cur
        else:
            acc.pop(k, None)


def uea_straighten(word, g: MetricLieAlgebra) -> dict:
    return UEA(g).straighten(word)


def pbw(p: Poly, uea: UEA) -> dict:
    """The symmetrization-induced map S(g) -> U(g), on polynomials."""
    memo: dict[tuple, dict] = {(): {(): Fraction(1)}}
    parity = uea.parity

    def mono(m):
        if m in memo:
            return memo[m]
        out: dict = {}
        l = len(m)
        for i in range(l):
            a = m[i]
            sgn = 1
            if parity[a]:
                crossed = sum(1 for x in m[:i] if parity[x])
                sgn = -1 if crossed % 2 else 1
            sub = mono(m[:i] + m[i + 1 :])
            for w, c in sub.items():
                _merge(out, uea.straighten((a,) + w), Fraction(sgn, l) * c)
        memo[m] = out
        return out

    out: dict = {}
    for m, c in p.terms.items():
        _merge(out, mono(m), c)
    return out


# ---------------------------------------------------------------------------
# Structure tensors


def _f_tensor(g: MetricLieAlgebra) -> SparseTensor:
    """Vertex tensor: the lowered structure constants, Koszul-adjusted.

    A triple with two odd indices carries an extra -1.  This symmetric
    (hence orientation-safe) factor is what makes the flat tensor layout
    agree with the Morse-planar evaluation of super diagrams; for purely
    even algebras it is invisible.
    """
    d = g.dim
    p = g.parity
    entries = {}
    for (a, b), terms in g.f.items():
        for e, co in terms:
            for c in range(d):
                val = co * g.metric[e][c]
                if val:
                    if (p[a] + p[b] + p[c]) // 2 % 2:
                        val = -val
                    entries[(a, b, c)] = entries.get((a, b, c), Fraction(0)) + val
    return SparseTensor.make((d, d, d), "ddd", (g.parity,) * 3, entries)


def _c_tensor(g: MetricLieAlgebra) -> SparseTensor:
    d = g.dim
    cas = g.casimir
    entries = {
        (a, b): cas[a][b] for a in range(d) for b in range(d) if cas[a][b]
    }
    return SparseTensor.make((d, d), "uu", (g.parity,) * 2, entries)


def _b_tensor(g: MetricLieAlgebra) -> SparseTensor:
    d = g.dim
    entries = {
        (a, b): g.metric[a][b] for a in range(d) for b in range(d) if g.metric[a][b]
    }
    return SparseTensor.make((d, d), "dd", (g.parity,) * 2, entries)


def _rho_tensor(g: MetricLieAlgebra, V: Representation) -> SparseTensor:
    entries = {}
    for a in range(g.dim):
        m = V.rho[a]
        for i in range(V.dim):
            for j in range(V.dim):
                if m[i][j]:
                    entries[(i, j, a)] = m[i][j]
    return SparseTensor.make(
        (V.dim, V.dim, g.dim), "udd", (V.parity, V.parity, g.parity), entries
    )


def compile_diagram(
    d: JacobiGraph,
    g: MetricLieAlgebra,
    V: Representation | None = None,
    target: str = "scalar",
) -> ContractionNetwork:
    """Compile one diagram into a contraction network for the given target.

    Targets: "scalar" (kind A, requires V), "U" (kind A), "S" and "Sdual"
    (kind B, legs become open axes).
    """
    if target in ("scalar", "U"):
        if d.kind != "A":
            raise ValueError(f"target {target} needs a kind A diagram")
        if target == "scalar" and V is None:
            raise ValueError("scalar evaluation needs a representation")
    elif target in ("S", "Sdual"):
        if d.kind != "B":
            raise ValueError(f"target {target} needs a kind B diagram")
    else:
        raise ValueError(f"unknown target {target!r}")
    return _compile(d, g, V, target, verts=None, legs=None)


def _compile(d, g, V, target, verts=None, legs=None):
    """Network for a subset of the diagram (a component) or the whole."""
    if verts is None:
        verts = list(range(d.nv))
    if legs is None:
        legs = [p for p in d.legs]
    vset = set(verts)
    lset = set(legs)

    nodes = []
    pairings = []
    open_axes = []
    fnode = {}
    for v in verts:
        fnode[v] = len(nodes)
        nodes.append(_f_tensor(g))

    def endpoint(port):
        # (node, axis) for a vertex slot
        return (fnode[port // 3], port % 3)

    leg_open: dict[int, tuple] = {}
    edges = [
        (p, q)
        for p, q in d.edges()
        if (not d.is_leg(p) and p // 3 in vset)
        or (not d.is_leg(q) and q // 3 in vset)
        or (d.is_leg(p) and p in lset)
    ]
    for p, q in edges:
        p_leg, q_leg = d.is_leg(p), d.is_leg(q)
        if target == "Sdual":
            if not p_leg and not q_leg:
                cn = len(nodes)
                nodes.append(_c_tensor(g))
                pairings.append((cn, 0) + endpoint(p))
                pairings.append((cn, 1) + endpoint(q))
            elif p_leg and q_leg:
                bn = len(nodes)
                nodes.append(_b_tensor(g))
                leg_open[p] = (bn, 0)
                leg_open[q] = (bn, 1)
            else:
                leg, slot = (p, q) if p_leg else (q, p)
                leg_open[leg] = endpoint(slot)
            continue
        cn = len(nodes)
        nodes.append(_c_tensor(g))
        for axis, port in ((0, p), (1, q)):
            if d.is_leg(port):
                leg_open[port] = (cn, axis)
            else:
                pairings.append((cn, axis) + endpoint(port))

    if target in ("scalar",):
        loop = d.loop
        l = len(loop)
        rnode = {}
        for k, port in enumerate(loop):
            rnode[k] = len(nodes)
            nodes.append(_rho_tensor(g, V))
        for k in range(l):
            pairings.append((rnode[k], 1, rnode[(k + 1) % l], 0))
            node, axis = leg_open[loop[k]]
            pairings.append((node, axis, rnode[k], 2))
        if l == 0:
            n = len(nodes)
            nodes.append(identity_tensor(V.dim, V.parity))
            pairings.append((n, 1, n, 0))
        for _ in range(d.circles):
            n = len(nodes)
            nodes.append(identity_tensor(g.dim, g.parity))
            pairings.append((n, 1, n, 0))
    elif target == "U":
        for port in d.loop:
            open_axes.append(leg_open[port])
        for _ in range(d.circles):
            n = len(nodes)
            nodes.append(identity_tensor(g.dim, g.parity))
            pairings.append((n, 1, n, 0))
    else:
        for port in sorted(legs):
            open_axes.append(leg_open[port])

    return ContractionNetwork(nodes, pairings, open_axes)


class WeightSystem:
    """All weight-system evaluations for one algebra (and optional rep)."""

    def __init__(self, g: MetricLieAlgebra, V: Representation | None = None):
        self.g = g
        self.V = V
        self.uea = UEA(g)
        self._scalar_memo: dict[JacobiGraph, Fraction] = {}
        self._u_memo: dict[JacobiGraph, dict] = {}
        self._s_memo: dict[JacobiGraph, Poly] = {}
        self._sdual_memo: dict[JacobiGraph, Poly] = {}
        self._word_bases: dict[int, tuple] = {}
        self._left_mult: dict[int, SparseTensor] = {}

    def _word_basis(self, cap: int):
        """Normal-ordered words of length <= cap, with index and parities."""
        cached = self._word_bases.get(cap)
        if cached is not None:
            return cached
        parity = self.g.parity
        words = [()]
        frontier = [()]
        for _ in range(cap):
            new = []
            for w in frontier:
                last = w[-1] if w else -1
                for a in range(self.g.dim):
                    if a < last or (a == last and parity[a]):
                        continue
                    new.append(w + (a,))
            words.extend(new)
            frontier = new
        words.sort(key=lambda w: (len(w), w))
        index = {w: i for i, w in enumerate(words)}
        wpar = tuple(sum(parity[a] for a in w) % 2 for w in words)
        self._word_bases[cap] = (words, index, wpar)
        return self._word_bases[cap]

    def _left_mult_tensor(self, cap: int) -> SparseTensor:
        """Left multiplication U_{<cap} x g -> U_{<=cap} as a tensor.

        Shaped like a representation node, so the cut-loop chain carries
        exactly the Koszul bookkeeping of the closed trace chain; this is
        what makes the universal evaluation super-coherent.
        """
        cached = self._left_mult.get(cap)
        if cached is not None:
            return cached
        words, index, wpar = self._word_basis(cap)
        n = len(words)
        entries = {}
        for w, wi in index.items():
            if len(w) >= cap:
                continue
            for a in range(self.g.dim):
                for w2, c in self.uea.straighten((a,) + w).items():
                    entries[(index[w2], wi, a)] = c
        t = SparseTensor.make(
            (n, n, self.g.dim), "udd", (wpar, wpar, self.g.parity), entries
        )
        self._left_mult[cap] = t
        return t

    def u_value_via_chain(self, graph: JacobiGraph) -> dict:
        """Universal value through the left-multiplication chain.

        An independent factorization of the same morphism (it mirrors the
        closed trace chain with the truncated regular action in place of a
        representation); agrees with eval_to_U and serves as a cross-check.
        """
        net = compile_diagram(graph, self.g, None, "U")
        l = graph.nlegs
        words, index, wpar = self._word_basis(l)
        lm = self._left_mult_tensor(l)
        nodes = list(net.nodes)
        pairings = list(net.pairings)
        base = len(nodes)
        for _ in range(l):
            nodes.append(lm)
        unit = SparseTensor.make(
            (len(words),), "u", (wpar,), {(index[()],): Fraction(1)}
        )
        unit_node = len(nodes)
        nodes.append(unit)
        for k in range(l):
            node, axis = net.open_axes[k]
            pairings.append((node, axis, base + k, 2))
            if k < l - 1:
                pairings.append((base + k, 1, base + k + 1, 0))
        pairings.append((base + l - 1, 1, unit_node, 0))
        t = execute(ContractionNetwork(nodes, pairings, [(base, 0)]))
        return {words[idx[0]]: val for idx, val in t.entries.items()}

    # -- scalars -----------------------------------------------------------
    def eval_closed(self, v: DiagramVector) -> Fraction:
        if v.kind != "A":
            raise ValueError("closed evaluation takes kind A")
        if self.V is None:
            raise ValueError("closed evaluation needs a representation")
        total = Fraction(0)
        for graph, coeff in v:
            val = self._scalar_memo.get(graph)
            if val is None:
                net = compile_diagram(graph, self.g, self.V, "scalar")
                val = execute(net).scalar()
                self._scalar_memo[graph] = val
            total += coeff * val
        return total

    # -- U(g) --------------------------------------------------------------
    def eval_to_U(self, v: DiagramVector) -> dict:
        if v.kind != "A":
            raise ValueError("universal evaluation takes kind A")
        out: dict = {}
        for graph, coeff in v:
            val = self._u_memo.get(graph)
            if val is None:
                net = compile_diagram(graph, self.g, None, "U")
                t = execute(net)
                val = {}
                for idx, x in t.entries.items():
                    _merge(val, self.uea.straighten(idx), x)
                self._u_memo[graph] = val
            _merge(out, val, coeff)
        return out

    # -- S(g) and S(g*) ------------------------------------------------------
    def _eval_B(self, graph: JacobiGraph, dual: bool) -> Poly:
        memo = self._sdual_memo if dual else self._s_memo
        val = memo.get(graph)
        if val is not None:
            return val
        target = "Sdual" if dual else "S"
        sdim = sum(-1 if p else 1 for p in self.g.parity)
        result = Poly.one(self.g.parity, dual).scale(Fraction(sdim) ** graph.circles)
        for comp_verts, comp_legs in graph.components():
            net = _compile(graph, self.g, None, target,
                           verts=sorted(comp_verts), legs=sorted(comp_legs))
            t = execute(net)
            part = Poly.zero(self.g.parity, dual)
            for idx, x in t.entries.items():
                part.add_term(idx, x)
            result = result * part
        memo[graph] = result
        return result

    def eval_to_S(self, v: DiagramVector) -> Poly:
        if v.kind != "B":
            raise ValueError("symmetric-algebra evaluation takes kind B")
        out = Poly.zero(self.g.parity, False)
        for graph, coeff in v:
            out = out + self._eval_B(graph, False).scale(coeff)
        return out

    def eval_to_Sdual(self, v: DiagramVector) -> Poly:
        if v.kind != "B":
            raise ValueError("dual evaluation takes kind B")
        out = Poly.zero(self.g.parity, True)
        for graph, coeff in v:
            out = out + self._eval_B(graph, True).scale(coeff)
        return out


def eval_closed_A(v: DiagramVector, g: MetricLieAlgebra, V: Representation) -> Fraction:
    return WeightSystem(g, V).eval_closed(v)


def eval_A_to_U(v: DiagramVector, g: MetricLieAlgebra) -> dict:
    return WeightSystem(g).eval_to_U(v)


def eval_B_to_S(v: DiagramVector, g: MetricLieAlgebra) -> Poly:
    return WeightSystem(g).eval_to_S(v)


def eval_B_to_Sdual(v: DiagramVector, g: MetricLieAlgebra) -> Poly:
    return WeightSystem(g).eval_to_Sdual(v)


def duflo_j_half(g: MetricLieAlgebra, max_degree: int) -> Poly:
    """exp(sum b_{2i} s_{2i}) in S(g*), truncated.

    ``max_degree`` is counted in the diagram grading, where the wheel
    w_{2i} (degree 4i) maps to s_{2i} (polynomial degree 2i); terms of
    polynomial degree above max_degree/2 are dropped.
    """
    if max_degree < 0 or max_degree % 2:
        raise ValueError("max_degree must be even and nonnegative")
    cap = max_degree // 2
    x = Poly.zero(g.parity, dual=True)
    i = 1
    while 4 * i <= max_degree:
        x = x + s_poly(g, 2 * i).scale(bernoulli_mod(i))
        i += 1
    return exp_truncated(x, cap)


def cap_poly(p: Poly, s: Poly) -> Poly:
    """Degreewise symmetrized contraction of S(g*) against S(g)."""
    return cap_product(p, s)


def omega_variant(max_degree: int, flip_sign: bool = False) -> DiagramVector:
    """The wheeling element, optionally with negated wheel coefficients.

    The flipped variant is a test hook: it breaks the wheeling identities
    for any algebra with a nonzero s_2.
    """
    from .diagrams import disjoint_union, omega_truncated, unit_vector, wheel_vector

    if not flip_sign:
        return omega_truncated(max_degree)
    x = DiagramVector("B")
    i = 1
    while 4 * i <= max_degree:
        x = x + wheel_vector(2 * i).scale(-bernoulli_mod(i))
        i += 1
    acc = unit_vector("B")
    term = unit_vector("B")
    k = 1
    while not term.is_zero():
        term = disjoint_union(term, x).truncate(max_degree).scale(Fraction(1, k))
        acc = acc + term
        k += 1
    return acc


def wheeling_map(ws: WeightSystem, b: DiagramVector, flip_sign: bool = False) -> dict:
    """eval_A_to_U of chi(Omega cap b), the weight-system side of wheeling."""
    from .diagrams import cap, chi

    legs = max((g.nlegs for g, _ in b), default=0)
    return ws.eval_to_U(chi(cap(omega_variant(2 * legs, flip_sign), b)))


def wheeling_report(
    g: MetricLieAlgebra, max_degree: int, flip_sign: bool = False
) -> tuple[bool, list[str]]:
    """Check the wheeling identities through the weight systems of ``g``.

    Verifies that the wheeling element maps to the Duflo series, and that
    the composite map is multiplicative on all pairs of basis diagrams
    with total degree within ``max_degree``.  Returns (ok, report lines).
    """
    from .diagrams import disjoint_union
    from .relations import basis_B

    ws = WeightSystem(g)
    lines = []
    ok = True

    deg_cap = min(max_degree, 8)
    got = ws.eval_to_Sdual(omega_variant(deg_cap, flip_sign))
    duflo = duflo_j_half(g, deg_cap)
    good = got == duflo
    ok &= good
    lines.append(f"omega-to-duflo (degree {deg_cap}): {'PASS' if good else 'FAIL'}")

    reps = []
    for total in range(2, max_degree + 1, 2):
        for v in range(total + 1):
            l = total - v
            for rep in basis_B(v, l).representatives:
                reps.append(rep)
    memo: dict = {}

    def theta(vec: DiagramVector) -> dict:
        key = frozenset(vec.terms.items())
        if key not in memo:
            memo[key] = wheeling_map(ws, vec, flip_sign=flip_sign)
        return memo[key]

    for i, b1 in enumerate(reps):
        for b2 in reps[i:]:
            if b1.degree + b2.degree > max_degree:
                continue
            v1 = DiagramVector.from_graph(b1)
            v2 = DiagramVector.from_graph(b2)
            lhs = theta(disjoint_union(v1, v2))
            rhs = ws.uea.product(theta(v1), theta(v2))
            good = lhs == rhs
            ok &= good
            lines.append(
                f"multiplicative deg {b1.degree}+{b2.degree}: "
                f"{'PASS' if good else 'FAIL'}"
            )
    return ok, lines
