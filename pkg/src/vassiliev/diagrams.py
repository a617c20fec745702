"""Jacobi diagrams and their structural operations.

A diagram is a graph with trivalent vertices (each carrying a cyclic
orientation of its three incident half-edges) and univalent vertices
("legs").  Kind ``A`` diagrams additionally carry an oriented Wilson
loop on which all legs sit, in a given cyclic order; kind ``B`` diagrams
have free legs.  Degree is the total vertex count (trivalent + legs).

Port numbering convention: trivalent vertex ``v`` owns ports
``3v, 3v+1, 3v+2`` and the slot order *is* the orientation (any even
permutation of a triple is the same orientation, an odd one is the
opposite).  Legs are ports ``3*nv .. 3*nv + nlegs - 1``.  The ``pairing``
array is the involution matching each port with the other end of its
edge.  Vertexless circle components are tracked by a bare counter; they
carry degree 0.

Canonical forms are computed by exhaustive backtracking over vertex
orderings, slot permutations and (for kind A) loop rotations, pruned
against the best certificate found so far.  The returned sign compares
the input orientation with the canonical one and is 0 exactly when the
diagram admits an orientation-reversing automorphism (so it vanishes by
antisymmetry; in particular tadpoles and odd wheels are 0).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial


class DiagramError(ValueError):
    """Raised for structurally invalid diagrams or mismatched operands."""


_PERMS3 = (
    ((0, 1, 2), 1),
    ((1, 2, 0), 1),
    ((2, 0, 1), 1),
    ((0, 2, 1), -1),
    ((2, 1, 0), -1),
    ((1, 0, 2), -1),
)


@dataclass(frozen=True)
class JacobiGraph:
    """An oriented unitrivalent graph, with or without Wilson loop.

    ``loop`` is the cyclic order of leg ports for kind A and ``None``
    for kind B.  Instances are immutable and hashable; most code should
    only ever hold canonical instances (see :func:`canonicalize`).
    """

    kind: str
    nv: int
    pairing: tuple[int, ...]
    loop: tuple[int, ...] | None
    circles: int = 0
    _hash: int = field(init=False, repr=False, compare=False, default=0)

    def __post_init__(self):
        if self.kind not in ("A", "B"):
            raise DiagramError(f"unknown kind {self.kind!r}")
        nports = len(self.pairing)
        if nports < 3 * self.nv or (nports - 3 * self.nv) < 0:
            raise DiagramError("port count inconsistent with vertex count")
        for p, q in enumerate(self.pairing):
            if not 0 <= q < nports or q == p or self.pairing[q] != p:
                raise DiagramError(f"pairing is not a fixed-point-free involution at port {p}")
        if self.kind == "A":
            if self.loop is None:
                raise DiagramError("kind A requires a loop order")
            if sorted(self.loop) != list(range(3 * self.nv, nports)):
                raise DiagramError("loop order must be a permutation of the leg ports")
        elif self.loop is not None:
            raise DiagramError("kind B carries no loop")
        if self.circles < 0:
            raise DiagramError("negative circle count")
        object.__setattr__(
            self, "_hash", hash((self.kind, self.nv, self.pairing, self.loop, self.circles))
        )

    def __hash__(self):
        return self._hash

    @property
    def nlegs(self) -> int:
        return len(self.pairing) - 3 * self.nv

    @property
    def legs(self) -> range:
        return range(3 * self.nv, len(self.pairing))

    @property
    def degree(self) -> int:
        return self.nv + self.nlegs

    @property
    def bigrade(self) -> tuple[int, int]:
        return (self.nv, self.nlegs)

    def edges(self):
        """Edges as sorted port pairs, each once."""
        return [(p, q) for p, q in enumerate(self.pairing) if p < q]

    def is_leg(self, port: int) -> bool:
        return port >= 3 * self.nv

    def vertex_of(self, port: int) -> int:
        if self.is_leg(port):
            raise DiagramError(f"port {port} is a leg")
        return port // 3

    def has_tadpole(self) -> bool:
        return any(
            not self.is_leg(p) and not self.is_leg(q) and p // 3 == q // 3
            for p, q in self.edges()
        )

    def components(self) -> list[tuple[set[int], set[int]]]:
        """Connected components of the graph (ignoring the Wilson loop).

        Returns (vertex ids, leg ports) per component; circle components
        are not listed.
        """
        parent = list(range(len(self.pairing)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        for v in range(self.nv):
            union(3 * v, 3 * v + 1)
            union(3 * v, 3 * v + 2)
        for p, q in self.edges():
            union(p, q)
        groups: dict[int, tuple[set[int], set[int]]] = {}
        for v in range(self.nv):
            groups.setdefault(find(3 * v), (set(), set()))[0].add(v)
        for p in self.legs:
            groups.setdefault(find(p), (set(), set()))[1].add(p)
        return list(groups.values())


def build_graph(kind, triples, edges, loop=None, circles=0) -> JacobiGraph:
    """Assemble a JacobiGraph from named flags.

    ``triples`` lists each trivalent vertex as a 3-tuple of flag names in
    orientation order; ``edges`` is a perfect matching on all names; names
    appearing in edges but in no triple are legs.  ``loop`` gives the leg
    cyclic order for kind A.
    """
    flag_names = [f for tri in triples for f in tri]
    if len(set(flag_names)) != len(flag_names):
        raise DiagramError("duplicate flag name in triples")
    slot_of = {}
    for v, tri in enumerate(triples):
        if len(tri) != 3:
            raise DiagramError("vertex triple must have exactly 3 flags")
        for j, name in enumerate(tri):
            slot_of[name] = 3 * v + j
    nv = len(triples)
    seen: dict = {}
    leg_names = []
    for a, b in edges:
        for name in (a, b):
            if name in seen:
                raise DiagramError(f"flag {name!r} used twice in edges")
            seen[name] = True
            if name not in slot_of:
                leg_names.append(name)
    missing = [f for f in flag_names if f not in seen]
    if missing:
        raise DiagramError(f"vertex flags not covered by edges: {missing!r}")
    if kind == "A":
        if loop is None:
            loop = []
        if sorted(map(repr, loop)) != sorted(map(repr, leg_names)):
            raise DiagramError("loop must list exactly the leg names")
        leg_order = list(loop)
    else:
        if loop is not None:
            raise DiagramError("kind B takes no loop")
        leg_order = leg_names
    port_of = dict(slot_of)
    for i, name in enumerate(leg_order):
        port_of[name] = 3 * nv + i
    nports = 3 * nv + len(leg_order)
    pairing = [-1] * nports
    for a, b in edges:
        pa, pb = port_of[a], port_of[b]
        pairing[pa], pairing[pb] = pb, pa
    loop_ports = tuple(range(3 * nv, nports)) if kind == "A" else None
    return JacobiGraph(kind, nv, tuple(pairing), loop_ports, circles)


# ---------------------------------------------------------------------------
# Canonical forms


def _vertex_colors(g: JacobiGraph, leg_pos: dict[int, int] | None) -> list:
    """Isomorphism-invariant vertex colors, used only to order the search."""
    nv = g.nv
    colors = []
    for v in range(nv):
        kinds = []
        for s in range(3):
            q = g.pairing[3 * v + s]
            if g.is_leg(q):
                kinds.append((1, leg_pos[q] if leg_pos is not None else -1))
            elif q // 3 == v:
                kinds.append((2, 0))
            else:
                kinds.append((0, 0))
        colors.append(tuple(sorted(kinds)))
    for _ in range(3):
        new = []
        for v in range(nv):
            nb = sorted(
                colors[g.pairing[3 * v + s] // 3]
                for s in range(3)
                if not g.is_leg(g.pairing[3 * v + s])
            )
            new.append((colors[v], tuple(nb)))
        if new == colors:
            break
        colors = new
    return colors


def canonicalize(g: JacobiGraph) -> tuple[JacobiGraph, int]:
    """Return the canonical representative of ``g``'s isomorphism class.

    The sign relates the orientations: ``g = sign * canonical`` in the
    diagram space, and sign 0 means the class is zero by antisymmetry.
    Idempotent: a canonical nonzero graph maps to (itself, +1).

    Components are canonicalized separately and assembled in a canonical
    order; permuting whole components carries no orientation sign, so the
    class is zero exactly when some component is.  For kind A all
    loop-attached components form one block tied by the loop order.
    """
    comps = g.components()
    if g.kind == "A":
        blocks = [
            (sorted(v for vs, ls in comps if ls for v in vs), list(g.loop), True)
        ]
        blocks += [
            (sorted(vs), [], False) for vs, ls in comps if not ls
        ]
    else:
        blocks = [
            (sorted(vs), sorted(ls), False) for vs, ls in comps
        ]
        if not blocks:
            blocks = [([], [], False)]
    if len(blocks) == 1:
        return _canonical_search(g)
    sign = 1
    head = None
    tails = []
    for verts, leg_ports, is_loop in blocks:
        canon, s = _canonical_search(_subgraph(g, verts, leg_ports))
        sign = sign * s
        if is_loop:
            head = canon
        else:
            tails.append(canon)
    tails.sort(key=lambda c: (c.nv, c.nlegs, c.pairing))
    if head is None:
        head = empty_diagram(g.kind)
    return _assemble(g.kind, head, tails, g.circles), sign


def _subgraph(g: JacobiGraph, verts, leg_ports) -> JacobiGraph:
    """Extract the induced subdiagram on ``verts`` with the given legs."""
    vmap = {v: i for i, v in enumerate(verts)}
    portmap = {}
    for v in verts:
        for s in range(3):
            portmap[3 * v + s] = 3 * vmap[v] + s
    base = 3 * len(verts)
    for i, p in enumerate(leg_ports):
        portmap[p] = base + i
    pairing = [-1] * (base + len(leg_ports))
    for p, q in g.edges():
        if p in portmap and q in portmap:
            a, b = portmap[p], portmap[q]
            pairing[a], pairing[b] = b, a
    loop = tuple(portmap[p] for p in leg_ports) if g.kind == "A" else None
    return JacobiGraph(g.kind, len(verts), tuple(pairing), loop, 0)


def _assemble(kind, head: JacobiGraph, tails, circles: int) -> JacobiGraph:
    """Concatenate a head block and further components, renumbering ports."""
    parts = [head] + list(tails)
    nv = sum(p.nv for p in parts)
    nlegs = sum(p.nlegs for p in parts)
    pairing = [-1] * (3 * nv + nlegs)
    voff = 0
    loff = 3 * nv
    for sub in parts:
        def m(p, voff=voff, loff=loff, sub=sub):
            if sub.is_leg(p):
                return loff + (p - 3 * sub.nv)
            return 3 * (voff + p // 3) + p % 3

        for p, q in sub.edges():
            a, b = m(p), m(q)
            pairing[a], pairing[b] = b, a
        voff += sub.nv
        loff += sub.nlegs
    loop = tuple(range(3 * nv, 3 * nv + nlegs)) if kind == "A" else None
    return JacobiGraph(kind, nv, tuple(pairing), loop, circles)


def _canonical_search(g: JacobiGraph) -> tuple[JacobiGraph, int]:
    """Exhaustive certificate search on one block (no decomposition)."""
    nv, nlegs = g.nv, g.nlegs
    nrot = max(1, nlegs) if g.kind == "A" else 1
    FUT = 3 * nv + nlegs + 2
    LEG = 3 * nv + nlegs + 1

    best: tuple | None = None
    best_signs: set[int] = set()
    best_state: tuple | None = None

    for rot in range(nrot):
        if g.kind == "A":
            leg_pos = {g.loop[(rot + k) % nlegs]: k for k in range(nlegs)} if nlegs else {}
            chords = sorted(
                tuple(sorted((leg_pos[p], leg_pos[q])))
                for p, q in g.edges()
                if g.is_leg(p) and g.is_leg(q)
            )
            header = tuple(x for pair in chords for x in pair)
        else:
            leg_pos = None
            header = (sum(1 for p, q in g.edges() if g.is_leg(p) and g.is_leg(q)),)

        if best is not None and header > best[: len(header)]:
            continue
        colors = _vertex_colors(g, leg_pos)
        order_hint = sorted(range(nv), key=lambda v: (colors[v], v))

        def leg_token(q):
            return (3 * nv + leg_pos[q]) if leg_pos is not None else LEG

        # Depth-first search over (vertex, slot-permutation) placements.
        # Pruning against the best certificate is only sound while the
        # partial certificate ties its prefix, which is rechecked against
        # the current best before every descent.
        newport = [-1] * (3 * nv)
        placed = [False] * nv

        def rec(i, sign, cert):
            nonlocal best, best_signs, best_state
            if i == nv:
                if best is None or cert < best:
                    best = cert
                    best_signs = {sign}
                    best_state = (rot, list(order_used), list(perms_used))
                elif cert == best:
                    best_signs.add(sign)
                return
            cands = []
            for v in order_hint:
                if placed[v]:
                    continue
                for perm, psign in _PERMS3:
                    for j in range(3):
                        newport[3 * v + perm[j]] = 3 * i + j
                    toks = []
                    for j in range(3):
                        q = g.pairing[3 * v + perm[j]]
                        if g.is_leg(q):
                            toks.append(leg_token(q))
                        elif placed[q // 3] or q // 3 == v:
                            toks.append(newport[q])
                        else:
                            toks.append(FUT)
                    cands.append((tuple(toks), v, perm, psign))
                for j in range(3):
                    newport[3 * v + j] = -1
            cands.sort(key=lambda c: c[0])
            base = len(cert)
            for toks, v, perm, psign in cands:
                if best is not None and cert == best[:base] and toks > best[base : base + 3]:
                    break  # candidates are sorted; the rest are larger still
                placed[v] = True
                order_used.append(v)
                perms_used.append(perm)
                for j in range(3):
                    newport[3 * v + perm[j]] = 3 * i + j
                rec(i + 1, sign * psign, cert + toks)
                for j in range(3):
                    newport[3 * v + j] = -1
                placed[v] = False
                order_used.pop()
                perms_used.pop()

        order_used: list[int] = []
        perms_used: list[tuple[int, int, int]] = []
        rec(0, 1, header)

    assert best is not None and best_state is not None
    rot, order, perms = best_state

    # Rebuild the canonical graph from the best assignment.
    portmap = {}
    for i, v in enumerate(order):
        perm = perms[i]
        for j in range(3):
            portmap[3 * v + perm[j]] = 3 * i + j
    if g.kind == "A":
        for k in range(nlegs):
            portmap[g.loop[(rot + k) % nlegs]] = 3 * nv + k
        new_pairing = [-1] * len(g.pairing)
        for p, q in g.edges():
            a, b = portmap[p], portmap[q]
            new_pairing[a], new_pairing[b] = b, a
        loop = tuple(range(3 * nv, 3 * nv + nlegs))
        canon = JacobiGraph("A", nv, tuple(new_pairing), loop, g.circles)
    else:
        # Canonical leg ids: legs on vertex slots ordered by the slot,
        # then strut pairs.
        next_leg = 3 * nv
        for s in range(3 * nv):
            old = None
            for p, q in enumerate(g.pairing):
                if portmap.get(p) == s and g.is_leg(q):
                    old = q
                    break
            if old is not None:
                portmap[old] = next_leg
                next_leg += 1
        struts = [
            (p, q) for p, q in g.edges() if g.is_leg(p) and g.is_leg(q)
        ]
        for p, q in struts:
            portmap[p] = next_leg
            portmap[q] = next_leg + 1
            next_leg += 2
        new_pairing = [-1] * len(g.pairing)
        for p, q in g.edges():
            a, b = portmap[p], portmap[q]
            new_pairing[a], new_pairing[b] = b, a
        canon = JacobiGraph("B", nv, tuple(new_pairing), None, g.circles)

    if len(best_signs) == 2:
        return canon, 0
    return canon, best_signs.pop()


_CANON_CACHE: dict[JacobiGraph, tuple[JacobiGraph, int]] = {}


def canonicalize_cached(g: JacobiGraph) -> tuple[JacobiGraph, int]:
    res = _CANON_CACHE.get(g)
    if res is None:
        res = canonicalize(g)
        _CANON_CACHE[g] = res
        _CANON_CACHE.setdefault(res[0], (res[0], 1 if res[1] else res[1]))
    return res


# ---------------------------------------------------------------------------
# Linear combinations


class DiagramVector:
    """Formal rational linear combination of canonical diagrams, one kind."""

    __slots__ = ("kind", "terms")

    def __init__(self, kind: str, terms: dict[JacobiGraph, Fraction] | None = None):
        if kind not in ("A", "B"):
            raise DiagramError(f"unknown kind {kind!r}")
        self.kind = kind
        self.terms: dict[JacobiGraph, Fraction] = dict(terms) if terms else {}

    @classmethod
    def zero(cls, kind: str) -> "DiagramVector":
        return cls(kind)

    @classmethod
    def from_graph(cls, g: JacobiGraph, coeff=1) -> "DiagramVector":
        canon, sign = canonicalize_cached(g)
        coeff = Fraction(coeff) * sign
        if coeff == 0:
            return cls(g.kind)
        return cls(g.kind, {canon: coeff})

    def _check(self, other: "DiagramVector"):
        if self.kind != other.kind:
            raise DiagramError("kind mismatch")

    def __add__(self, other: "DiagramVector") -> "DiagramVector":
        self._check(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            c = out.get(k, Fraction(0)) + v
            if c:
                out[k] = c
            else:
                out.pop(k, None)
        return DiagramVector(self.kind, out)

    def __sub__(self, other: "DiagramVector") -> "DiagramVector":
        return self + other.scale(-1)

    def scale(self, c) -> "DiagramVector":
        c = Fraction(c)
        if c == 0:
            return DiagramVector(self.kind)
        return DiagramVector(self.kind, {k: v * c for k, v in self.terms.items()})

    def accumulate(self, g: JacobiGraph, coeff) -> None:
        """In-place add of ``coeff * g`` (canonicalizing); builder use only."""
        canon, sign = canonicalize_cached(g)
        if sign == 0:
            return
        c = self.terms.get(canon, Fraction(0)) + Fraction(coeff) * sign
        if c:
            self.terms[canon] = c
        else:
            self.terms.pop(canon, None)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DiagramVector)
            and self.kind == other.kind
            and self.terms == other.terms
        )

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def degrees(self) -> set[int]:
        return {g.degree for g in self.terms}

    def truncate(self, max_degree: int) -> "DiagramVector":
        return DiagramVector(
            self.kind, {g: c for g, c in self.terms.items() if g.degree <= max_degree}
        )

    def __repr__(self):
        return f"DiagramVector({self.kind}, {len(self.terms)} terms)"


def empty_diagram(kind: str = "B") -> JacobiGraph:
    """The empty diagram (unit of disjoint union) or the bare Wilson loop."""
    return JacobiGraph(kind, 0, (), () if kind == "A" else None, 0)


def unit_vector(kind: str = "B") -> DiagramVector:
    return DiagramVector.from_graph(empty_diagram(kind))


# ---------------------------------------------------------------------------
# Structural maps


def _merge_graphs(a: JacobiGraph, b: JacobiGraph):
    """Disjoint port structures of ``a`` and ``b`` under one numbering.

    Returns (nv, pairing list, a-leg map, b-leg map, circles).
    """
    nv = a.nv + b.nv
    na, nb = a.nlegs, b.nlegs
    nports = 3 * nv + na + nb

    def map_a(p):
        return p if p < 3 * a.nv else 3 * nv + (p - 3 * a.nv)

    def map_b(p):
        return 3 * a.nv + p if p < 3 * b.nv else 3 * nv + na + (p - 3 * b.nv)

    pairing = [-1] * nports
    for p, q in a.edges():
        x, y = map_a(p), map_a(q)
        pairing[x], pairing[y] = y, x
    for p, q in b.edges():
        x, y = map_b(p), map_b(q)
        pairing[x], pairing[y] = y, x
    return nv, pairing, map_a, map_b, a.circles + b.circles


def graph_disjoint_union(a: JacobiGraph, b: JacobiGraph) -> JacobiGraph:
    if a.kind != "B" or b.kind != "B":
        raise DiagramError("disjoint union is defined for kind B")
    nv, pairing, _, _, circles = _merge_graphs(a, b)
    return JacobiGraph("B", nv, tuple(pairing), None, circles)


def disjoint_union(a: DiagramVector, b: DiagramVector) -> DiagramVector:
    """Bilinear extension of graph disjoint union on kind B."""
    if a.kind != "B" or b.kind != "B":
        raise DiagramError("disjoint union is defined for kind B")
    out = DiagramVector("B")
    for ga, ca in a:
        for gb, cb in b:
            out.accumulate(graph_disjoint_union(ga, gb), ca * cb)
    return out


def graph_connect_sum(a: JacobiGraph, b: JacobiGraph) -> JacobiGraph:
    """Cut both Wilson loops at their base points and concatenate."""
    if a.kind != "A" or b.kind != "A":
        raise DiagramError("connect sum is defined for kind A")
    nv, pairing, map_a, map_b, circles = _merge_graphs(a, b)
    loop = tuple(map_a(p) for p in a.loop) + tuple(map_b(p) for p in b.loop)
    return JacobiGraph("A", nv, tuple(pairing), loop, circles)


def connect_sum(a: DiagramVector, b: DiagramVector) -> DiagramVector:
    """Loop connect sum; well defined modulo STU (tested via reduction)."""
    if a.kind != "A" or b.kind != "A":
        raise DiagramError("connect sum is defined for kind A")
    out = DiagramVector("A")
    for ga, ca in a:
        for gb, cb in b:
            out.accumulate(graph_connect_sum(ga, gb), ca * cb)
    return out


def chi(b: DiagramVector) -> DiagramVector:
    """Average the leg attachments of each diagram onto a Wilson loop.

    An l-legged diagram maps to the mean of its l! attachment orders
    (realized over (l-1)! necklace orders); a closed diagram acquires a
    disjoint bare Wilson loop.
    """
    if b.kind != "B":
        raise DiagramError("chi takes kind B")
    out = DiagramVector("A")
    for g, c in b:
        legs = list(g.legs)
        l = len(legs)
        if l == 0:
            out.accumulate(JacobiGraph("A", g.nv, g.pairing, (), g.circles), c)
            continue
        w = c / factorial(l - 1)
        first, rest = legs[0], legs[1:]
        for perm in itertools.permutations(rest):
            loop = (first,) + perm
            out.accumulate(JacobiGraph("A", g.nv, g.pairing, loop, g.circles), w)
    return out


def graph_cap(c_graph: JacobiGraph, d_graph: JacobiGraph, injection) -> JacobiGraph:
    """Glue every leg of C to a distinct leg of D along ``injection``.

    A glued leg pair is fused into a 2-valent junction and contracted
    away; junction-only cycles become vertexless circles.
    """
    nc, nd = len(c_graph.pairing), len(d_graph.pairing)
    partner = [-1] * (nc + nd)
    for p, q in c_graph.edges():
        partner[p], partner[q] = q, p
    for p, q in d_graph.edges():
        partner[nc + p], partner[nc + q] = nc + q, nc + p
    fuse = [-1] * (nc + nd)
    for cp, dp in injection.items():
        fuse[cp] = nc + dp
        fuse[nc + dp] = cp

    nv = c_graph.nv + d_graph.nv
    newport = {}
    for p in range(3 * c_graph.nv):
        newport[p] = p
    for p in range(3 * d_graph.nv):
        newport[nc + p] = 3 * c_graph.nv + p
    base = 3 * nv
    i = 0
    for p in d_graph.legs:
        if fuse[nc + p] < 0:
            newport[nc + p] = base + i
            i += 1
    pairing = [-1] * (base + i)
    seen_glued = [False] * (nc + nd)
    for old, new in newport.items():
        if pairing[new] != -1:
            continue
        q = partner[old]
        while fuse[q] >= 0:
            seen_glued[q] = True
            seen_glued[fuse[q]] = True
            q = partner[fuse[q]]
        om = newport[q]
        pairing[new], pairing[om] = om, new
    circles = c_graph.circles + d_graph.circles
    for start, other in enumerate(fuse):
        if other < 0 or seen_glued[start]:
            continue
        q = start
        while not seen_glued[q]:
            seen_glued[q] = True
            seen_glued[fuse[q]] = True
            q = partner[fuse[q]]
        circles += 1
    return JacobiGraph("B", nv, tuple(pairing), None, circles)


def cap(c: DiagramVector, d: DiagramVector) -> DiagramVector:
    """Sum over all ways of joining all legs of C to some legs of D.

    Zero whenever C has more legs than D.
    """
    if c.kind != "B" or d.kind != "B":
        raise DiagramError("cap is defined for kind B")
    out = DiagramVector("B")
    for gc, cc in c:
        clegs = list(gc.legs)
        for gd, cd in d:
            dlegs = list(gd.legs)
            if len(clegs) > len(dlegs):
                continue
            coeff = cc * cd
            for target in itertools.permutations(dlegs, len(clegs)):
                inj = dict(zip(clegs, target))
                out.accumulate(graph_cap(gc, gd, inj), coeff)
    return out


def wheel(l: int) -> JacobiGraph:
    """The l-legged wheel: a cycle of l trivalent vertices, one leg each.

    Orientation at each hub vertex is (leg, next rim edge, previous rim
    edge), the anticlockwise planar convention with legs pointing out.
    """
    if l < 1:
        raise DiagramError("wheel needs at least one leg")
    tri = []
    edges = []
    for i in range(l):
        leg = ("leg", i)
        nxt = ("rim", i)          # edge from vertex i to i+1, end at i
        prv = ("rim2", i)         # edge from vertex i-1 to i, end at i
        tri.append((leg, nxt, prv))
        edges.append((("rim", i), ("rim2", (i + 1) % l)))
        edges.append(((("leg", i)), ("free", i)))
    return build_graph("B", tri, edges)


def wheel_vector(l: int) -> DiagramVector:
    return DiagramVector.from_graph(wheel(l))


# ---------------------------------------------------------------------------
# Modified Bernoulli numbers and the wheeling element


def _log_sinh_series(nterms: int) -> list[Fraction]:
    """Coefficients of x^(2k) in (1/2) log(sinh(x/2) / (x/2)), k=0..nterms."""
    # p(x) = sinh(x/2)/(x/2) = sum_k x^(2k) / (4^k (2k+1)!)
    p = [Fraction(1, 4**k * factorial(2 * k + 1)) for k in range(nterms + 1)]
    u = p[:]  # u = p - 1 in even-power coordinates
    u[0] = Fraction(0)
    # log(1+u) = sum_m (-1)^(m+1) u^m / m, truncated at x^(2*nterms)
    out = [Fraction(0)] * (nterms + 1)
    upow = [Fraction(1)] + [Fraction(0)] * nterms
    for m in range(1, nterms + 1):
        new = [Fraction(0)] * (nterms + 1)
        for i, a in enumerate(upow):
            if a == 0:
                continue
            for j, b in enumerate(u):
                if i + j <= nterms and b != 0:
                    new[i + j] += a * b
        upow = new
        sgn = 1 if m % 2 == 1 else -1
        for k in range(nterms + 1):
            out[k] += Fraction(sgn, m) * upow[k]
    return [c / 2 for c in out]


_BERNOULLI_CACHE: list[Fraction] = []


def bernoulli_mod(i: int) -> Fraction:
    """The modified Bernoulli number b_{2i} (b_2 = 1/48, b_4 = -1/5760)."""
    if i < 1:
        raise ValueError("index must be positive")
    global _BERNOULLI_CACHE
    if len(_BERNOULLI_CACHE) <= i:
        _BERNOULLI_CACHE = _log_sinh_series(max(i, 8))
    return _BERNOULLI_CACHE[i]


def omega_truncated(max_degree: int) -> DiagramVector:
    """The wheeling element exp_⊔(sum b_{2i} w_{2i}), degree-truncated.

    Wheel w_{2i} has degree 4i; all terms above ``max_degree`` are dropped.
    """
    if max_degree < 0 or max_degree % 2:
        raise ValueError("max_degree must be even and nonnegative")
    x = DiagramVector("B")
    i = 1
    while 4 * i <= max_degree:
        x = x + wheel_vector(2 * i).scale(bernoulli_mod(i))
        i += 1
    acc = unit_vector("B")
    term = unit_vector("B")
    k = 1
    while not term.is_zero():
        term = disjoint_union(term, x).truncate(max_degree).scale(Fraction(1, k))
        acc = acc + term
        k += 1
    return acc
