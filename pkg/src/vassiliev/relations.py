"""Relations between diagrams: STU, IHX, 4T, and graded dimensions.

Antisymmetry is built into canonical forms (orientation signs), so the
relation matrices only need one IHX row per internal edge and one STU
row per loop-attached vertex flag.  The 4T rows are produced by
resolving each one-internal-vertex diagram by STU at two different
sites and subtracting.  Ranks are computed by fraction-free integer
elimination on sparse rows.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .diagrams import (
    DiagramError,
    DiagramVector,
    JacobiGraph,
    build_graph,
    canonicalize_cached,
    empty_diagram,
)


class BudgetError(RuntimeError):
    """Raised when an enumeration exceeds the configured degree budget."""


DEFAULT_DEGREE_BUDGET = 12


# ---------------------------------------------------------------------------
# Enumeration of diagrams up to isomorphism


def _vertex_graphs(v: int, legs: int):
    """Raw unitrivalent graphs: v trivalent vertices, every leg on a slot.

    Yields pairing lists over ports 0..3v+legs-1 (legs are the trailing
    ports).  Tadpoles are skipped (they vanish).  Symmetry breaking keeps
    the output modest; duplicates remain and must be deduped by canonical
    form downstream.
    """
    nports = 3 * v + legs
    if nports % 2:
        return
    pairing = [-1] * nports
    leg_ports = list(range(3 * v, nports))

    def next_free_slot():
        for p in range(3 * v):
            if pairing[p] < 0:
                return p
        return None

    def rec(legs_left):
        p = next_free_slot()
        if p is None:
            if legs_left == 0:
                yield list(pairing)
            return
        free_slots = sum(1 for q in range(3 * v) if pairing[q] < 0)
        if legs_left > free_slots or (free_slots - legs_left) % 2:
            return
        # option: attach a leg
        if legs_left > 0:
            leg = leg_ports[legs - legs_left]
            pairing[p], pairing[leg] = leg, p
            yield from rec(legs_left - 1)
            pairing[p] = pairing[leg] = -1
        # option: match to another vertex's slot
        seen_fresh = False
        vp = p // 3
        for w in range(v):
            if w == vp:
                continue  # no tadpoles
            slots = [3 * w + j for j in range(3) if pairing[3 * w + j] < 0]
            if not slots:
                continue
            if len(slots) == 3:
                if seen_fresh:
                    continue
                seen_fresh = True
                slots = slots[:1]
            for q in slots:
                pairing[p], pairing[q] = q, p
                yield from rec(legs_left)
                pairing[p] = pairing[q] = -1
                break  # only the lowest free slot of each vertex

    yield from rec(legs)


def enumerate_b_graphs(
    v: int, l: int, leg_per_tri_component: bool = False, keep_zero: bool = False
):
    """Canonical kind-B graphs with v trivalent vertices and l legs.

    Includes leg-leg strut components.  Classes that vanish by
    antisymmetry (for the *unordered* legs of B) are excluded unless
    ``keep_zero``; they still matter as internal graphs of loop diagrams,
    where leg order is pinned by the loop.  With
    ``leg_per_tri_component`` every component containing a trivalent
    vertex must carry at least one leg.
    """
    out = {}
    for nstruts in range(l // 2 + 1):
        lv = l - 2 * nstruts
        for pairing in _vertex_graphs(v, lv):
            n0 = 3 * v + lv
            full = list(pairing) + [0] * (2 * nstruts)
            for k in range(nstruts):
                a, b = n0 + 2 * k, n0 + 2 * k + 1
                full[a], full[b] = b, a
            g = JacobiGraph("B", v, tuple(full), None, 0)
            if g.has_tadpole():
                continue
            if leg_per_tri_component and any(
                verts and not legs for verts, legs in g.components()
            ):
                continue
            canon, sign = canonicalize_cached(g)
            if sign != 0 or keep_zero:
                out[canon] = True
    return sorted(out, key=_graph_key)


def _graph_key(g: JacobiGraph):
    return (g.kind, g.degree, g.nv, g.circles, g.pairing, g.loop or ())


def enumerate_a_diagrams(degree: int):
    """Canonical kind-A diagrams of the given degree whose every trivalent
    component reaches the Wilson loop (the spanning set of the graded
    piece)."""
    out = {}
    if degree == 0:
        out[canonicalize_cached(empty_diagram("A"))[0]] = True
    for v in range(degree + 1):
        l = degree - v
        if l == 0:
            continue  # closed components cannot reach the loop
        for b in enumerate_b_graphs(v, l, leg_per_tri_component=True, keep_zero=True):
            legs = list(b.legs)
            first, rest = legs[0], legs[1:]
            for perm in itertools.permutations(rest):
                g = JacobiGraph("A", b.nv, b.pairing, (first,) + perm, b.circles)
                canon, sign = canonicalize_cached(g)
                if sign != 0:
                    out[canon] = True
    return sorted(out, key=_graph_key)


def chord_diagrams(n: int):
    """Canonical n-chord diagrams (kind A, no trivalent vertices)."""
    return [g for g in enumerate_a_diagrams(2 * n) if g.nv == 0] if n else [
        canonicalize_cached(empty_diagram("A"))[0]
    ]


# ---------------------------------------------------------------------------
# STU and IHX


def _rotated_pair(slot: int):
    """The other two slots of a vertex, in the cyclic order (a, b, slot)."""
    v, s = slot // 3, slot % 3
    if s == 0:
        return 3 * v + 1, 3 * v + 2
    if s == 1:
        return 3 * v + 2, 3 * v
    return 3 * v, 3 * v + 1


def stu_sites(g: JacobiGraph):
    """Slots whose edge ends on a Wilson-loop leg."""
    return [
        p for p in range(3 * g.nv) if g.is_leg(g.pairing[p])
    ]


def stu_resolutions(g: JacobiGraph, slot: int):
    """The two resolutions (T, U) of the vertex at ``slot``; S = T - U."""
    if g.kind != "A":
        raise DiagramError("STU needs a kind A diagram")
    leg = g.pairing[slot]
    if not g.is_leg(leg):
        raise DiagramError("slot does not end on the loop")
    v = slot // 3
    fa, fb = _rotated_pair(slot)
    k = g.loop.index(leg)

    # T: the wire at fa lands just before the wire at fb along the loop.
    def resolve(wa, wb):
        tri = [
            tuple(("p", 3 * w + j) for j in range(3))
            for w in range(g.nv)
            if w != v
        ]
        removed = {3 * v, 3 * v + 1, 3 * v + 2, leg}
        edges = []
        for p, q in g.edges():
            if p in removed or q in removed:
                continue
            edges.append((("p", p), ("p", q)))
        if g.pairing[wa] == wb:
            edges.append(((("newleg", 0)), ("newleg", 1)))
        else:
            edges.append((("p", g.pairing[wa]), ("newleg", 0)))
            edges.append((("p", g.pairing[wb]), ("newleg", 1)))
        loop = []
        for pos, L in enumerate(g.loop):
            if pos == k:
                loop.extend([("newleg", 0), ("newleg", 1)])
            else:
                loop.append(("p", L))
        return build_graph("A", tri, edges, loop=loop, circles=g.circles)

    return resolve(fa, fb), resolve(fb, fa)


def stu_rows(graphs):
    """Rows S - T + U = 0, one per loop-attached slot of each diagram."""
    rows = []
    for g in graphs:
        for slot in stu_sites(g):
            t, u = stu_resolutions(g, slot)
            row = DiagramVector.from_graph(g)
            row.accumulate(t, -1)
            row.accumulate(u, 1)
            if not row.is_zero():
                rows.append(row)
    return rows


_STU_MEMO: dict[JacobiGraph, DiagramVector] = {}


def stu_reduce(v: DiagramVector) -> DiagramVector:
    """Rewrite S -> T - U until no trivalent vertex touches the loop.

    Terminates because every application removes one trivalent vertex;
    components not meeting the loop pass through untouched.
    """
    if v.kind != "A":
        raise DiagramError("stu_reduce takes kind A")

    def reduce_graph(g: JacobiGraph) -> DiagramVector:
        cached = _STU_MEMO.get(g)
        if cached is not None:
            return cached
        sites = stu_sites(g)
        if not sites:
            res = DiagramVector.from_graph(g)
        else:
            t, u = stu_resolutions(g, sites[0])
            res = stu_reduce(
                DiagramVector.from_graph(t) - DiagramVector.from_graph(u)
            )
        _STU_MEMO[g] = res
        return res

    out = DiagramVector("A")
    for g, c in v:
        out = out + reduce_graph(g).scale(c)
    return out


def ihx_rows_for(g: JacobiGraph):
    """One three-term row per internal vertex-vertex edge of ``g``."""
    rows = []
    for p, q in g.edges():
        if g.is_leg(p) or g.is_leg(q) or p // 3 == q // 3:
            continue
        u, w = p // 3, q // 3
        x1, x2 = _rotated_pair(p)
        # w's triple rotated so q is first: (q, x3, x4)
        s = q % 3
        if s == 0:
            x3, x4 = 3 * w + 1, 3 * w + 2
        elif s == 1:
            x3, x4 = 3 * w + 2, 3 * w
        else:
            x3, x4 = 3 * w, 3 * w + 1
        row = DiagramVector(g.kind)
        for cyc in ((x1, x2, x3), (x2, x3, x1), (x3, x1, x2)):
            a, b, c = cyc
            rename = {a: ("s", 0), b: ("s", 1), c: ("s", 2)}
            rename[x4] = ("s", 3)
            rename[p] = ("s", 4)
            rename[q] = ("s", 5)

            def nm(port):
                return rename.get(port, ("p", port))

            tri = []
            for vv in range(g.nv):
                if vv == u:
                    tri.append((("s", 0), ("s", 1), ("s", 4)))
                elif vv == w:
                    tri.append((("s", 5), ("s", 2), ("s", 3)))
                else:
                    tri.append(tuple(("p", 3 * vv + j) for j in range(3)))
            edges = []
            for e1, e2 in g.edges():
                if (e1, e2) == (min(p, q), max(p, q)):
                    edges.append((("s", 4), ("s", 5)))
                else:
                    edges.append((nm(e1), nm(e2)))
            loop = [("p", L) for L in g.loop] if g.kind == "A" else None
            h = build_graph(g.kind, tri, edges, loop=loop, circles=g.circles)
            row.accumulate(h, 1)
        if not row.is_zero():
            rows.append(row)
    return rows


def ihx_rows(graphs):
    rows = []
    for g in graphs:
        rows.extend(ihx_rows_for(g))
    return rows


# ---------------------------------------------------------------------------
# Relation matrices and exact ranks


@dataclass
class RelationMatrix:
    columns: list            # canonical diagrams spanning the graded piece
    rows: list               # sparse dicts col_index -> Fraction

    @classmethod
    def from_vectors(cls, columns, vectors):
        index = {g: i for i, g in enumerate(columns)}
        rows = []
        seen = set()
        for vec in vectors:
            row = {}
            for g, c in vec:
                if g not in index:
                    raise DiagramError("relation row leaves the spanning set")
                row[index[g]] = c
            if not row:
                continue
            key = _row_key(row)
            if key in seen:
                continue
            seen.add(key)
            rows.append(row)
        return cls(list(columns), rows)

    def rank(self) -> int:
        return len(_eliminate(self.rows))


def _row_key(row: dict):
    items = sorted(row.items())
    lead = items[0][1]
    return tuple((c, v / lead) for c, v in items)


def _int_row(row: dict) -> dict:
    denom = 1
    for v in row.values():
        denom = denom * v.denominator // _gcd(denom, v.denominator)
    out = {}
    for c, v in row.items():
        out[c] = int(v * denom)
    g = 0
    for v in out.values():
        g = _gcd(g, abs(v))
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def _eliminate(rows):
    """Fraction-free sparse elimination; returns the pivot rows."""
    pivots: dict[int, dict] = {}
    for row in rows:
        row = _int_row(row)
        while row:
            c = min(row)
            piv = pivots.get(c)
            if piv is None:
                lead = row[c]
                if lead < 0:
                    row = {k: -v for k, v in row.items()}
                g = 0
                for v in row.values():
                    g = _gcd(g, abs(v))
                if g > 1:
                    row = {k: v // g for k, v in row.items()}
                pivots[c] = row
                break
            a, b = piv[c], row[c]
            g = _gcd(abs(a), abs(b))
            alpha, beta = a // g, b // g
            new = {}
            for k, v in row.items():
                new[k] = v * alpha
            for k, v in piv.items():
                nv = new.get(k, 0) - v * beta
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            row = new
            if row:
                g = 0
                for v in row.values():
                    g = _gcd(g, abs(v))
                if g > 1:
                    row = {k: v // g for k, v in row.items()}
    return pivots


def _rref(rows, ncols):
    """Rational reduced row echelon form (pivot col -> full row dict)."""
    pivots = _eliminate(rows)
    # back-substitute to clear pivot columns above/below, over Q
    rational = {
        c: {k: Fraction(v, row[c]) for k, v in row.items()} for c, row in pivots.items()
    }
    for c in sorted(rational, reverse=True):
        row = rational[c]
        for c2 in sorted(rational):
            if c2 <= c:
                continue
            coeff = row.get(c2)
            if coeff:
                for k, v in rational[c2].items():
                    nv = row.get(k, Fraction(0)) - coeff * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
    return rational


# ---------------------------------------------------------------------------
# Bases, dimensions, reduction


@dataclass
class Basis:
    space: tuple
    columns: list
    representatives: list
    reduction_map: dict      # diagram -> {representative: coefficient}

    def reduce(self, v: DiagramVector):
        """Coordinates of a vector with respect to the representatives."""
        coords = {rep: Fraction(0) for rep in self.representatives}
        for g, c in v:
            expansion = self.reduction_map.get(g)
            if expansion is None:
                raise DiagramError(f"diagram of degree {g.degree} is outside this graded piece")
            for rep, coeff in expansion.items():
                coords[rep] += c * coeff
        return [coords[rep] for rep in self.representatives]


def _make_basis(space, columns, row_vectors) -> Basis:
    matrix = RelationMatrix.from_vectors(columns, row_vectors)
    rref = _rref(matrix.rows, len(columns))
    pivot_cols = set(rref)
    reps = [g for i, g in enumerate(columns) if i not in pivot_cols]
    reduction = {}
    for i, g in enumerate(columns):
        if i in pivot_cols:
            reduction[g] = {
                columns[k]: -v for k, v in rref[i].items() if k != i
            }
        else:
            reduction[g] = {g: Fraction(1)}
    return Basis(space, list(columns), reps, reduction)


def four_t_relations(n: int, budget: int = DEFAULT_DEGREE_BUDGET) -> RelationMatrix:
    """All 4T rows among n-chord diagrams, from double STU resolutions."""
    if 2 * n > budget:
        raise BudgetError(f"degree {2 * n} exceeds budget {budget}")
    columns = chord_diagrams(n)
    vectors = four_t_vectors(n)
    return RelationMatrix.from_vectors(columns, vectors)


def four_t_vectors(n: int):
    vectors = []
    if n < 2:
        return vectors
    one_vertex = [g for g in enumerate_a_diagrams(2 * n) if g.nv == 1]
    for g in one_vertex:
        sites = stu_sites(g)
        for s1, s2 in itertools.combinations(sites, 2):
            t1, u1 = stu_resolutions(g, s1)
            t2, u2 = stu_resolutions(g, s2)
            row = DiagramVector("A")
            row.accumulate(t1, 1)
            row.accumulate(u1, -1)
            row.accumulate(t2, -1)
            row.accumulate(u2, 1)
            if not row.is_zero():
                vectors.append(row)
    return vectors


def basis_A_chords(n: int, budget: int = DEFAULT_DEGREE_BUDGET) -> Basis:
    """Chord diagrams with n chords modulo 4T."""
    if 2 * n > budget:
        raise BudgetError(f"degree {2 * n} exceeds budget {budget}")
    return _make_basis(("A", 2 * n), chord_diagrams(n), four_t_vectors(n))


def dim_A(n: int, method: str = "4t", budget: int = DEFAULT_DEGREE_BUDGET) -> int:
    """Dimension of the framed degree-2n piece (n chords, no 1T relation)."""
    if 2 * n > budget:
        raise BudgetError(f"degree {2 * n} exceeds budget {budget}")
    if method == "4t":
        cols = chord_diagrams(n)
        m = RelationMatrix.from_vectors(cols, four_t_vectors(n))
        return len(cols) - m.rank()
    if method == "jacobi":
        cols = enumerate_a_diagrams(2 * n)
        vectors = stu_rows(cols) + ihx_rows(cols)
        m = RelationMatrix.from_vectors(cols, vectors)
        return len(cols) - m.rank()
    raise ValueError(f"unknown method {method!r}")


def basis_A_jacobi(degree: int, budget: int = DEFAULT_DEGREE_BUDGET) -> Basis:
    if degree > budget:
        raise BudgetError(f"degree {degree} exceeds budget {budget}")
    cols = enumerate_a_diagrams(degree)
    vectors = stu_rows(cols) + ihx_rows(cols)
    return _make_basis(("A-jacobi", degree), cols, vectors)


def dim_B(v: int, l: int, budget: int = DEFAULT_DEGREE_BUDGET) -> int:
    if v + l > budget:
        raise BudgetError(f"degree {v + l} exceeds budget {budget}")
    cols = enumerate_b_graphs(v, l)
    m = RelationMatrix.from_vectors(cols, ihx_rows(cols))
    return len(cols) - m.rank()


def basis_B(v: int, l: int, budget: int = DEFAULT_DEGREE_BUDGET) -> Basis:
    if v + l > budget:
        raise BudgetError(f"degree {v + l} exceeds budget {budget}")
    cols = enumerate_b_graphs(v, l)
    return _make_basis(("B", v, l), cols, ihx_rows(cols))


def reduce(v: DiagramVector, basis: Basis):
    return basis.reduce(v)
