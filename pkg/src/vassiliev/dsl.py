"""Line-oriented text format for diagrams.

    # chord diagram with one chord
    kind A
    legs 2
    loop l1 l2
    edge l1 l2

``tri`` declares trivalent vertices; a port is ``vertexId.slot`` with
slot in {0,1,2} (slot order is the orientation) or a leg id ``l1..ln``
declared by ``legs n``.  Kind A files give the Wilson-loop cyclic order
with ``loop``.  Every port appears in exactly one ``edge`` line.
"""

from __future__ import annotations

from .diagrams import DiagramError, JacobiGraph, build_graph


class DSLError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def parse_diagram(text: str) -> JacobiGraph:
    kind = None
    vertices: list[str] = []
    nlegs = None
    loop_names = None
    edge_lines: list[tuple[int, str, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        key, args = parts[0], parts[1:]
        if key == "kind":
            if len(args) != 1 or args[0] not in ("A", "B"):
                raise DSLError("kind must be A or B", lineno)
            if kind is not None:
                raise DSLError("duplicate kind", lineno)
            kind = args[0]
        elif key == "tri":
            for name in args:
                if name in vertices:
                    raise DSLError(f"duplicate vertex {name!r}", lineno)
                if "." in name:
                    raise DSLError(f"vertex id {name!r} may not contain '.'", lineno)
                vertices.append(name)
        elif key == "legs":
            if len(args) != 1 or not args[0].isdigit():
                raise DSLError("legs takes a count", lineno)
            if nlegs is not None:
                raise DSLError("duplicate legs line", lineno)
            nlegs = int(args[0])
        elif key == "loop":
            if loop_names is not None:
                raise DSLError("duplicate loop line", lineno)
            loop_names = (lineno, list(args))
        elif key == "edge":
            if len(args) != 2:
                raise DSLError("edge takes two ports", lineno)
            edge_lines.append((lineno, args[0], args[1]))
        else:
            raise DSLError(f"unknown directive {key!r}", lineno)
    if kind is None:
        raise DSLError("missing kind line")
    nlegs = nlegs or 0
    leg_names = {f"l{i + 1}" for i in range(nlegs)}

    def port(tok: str, lineno: int):
        if tok in leg_names:
            return ("leg", tok)
        if "." in tok:
            vid, _, slot = tok.rpartition(".")
            if vid not in vertices:
                raise DSLError(f"unknown vertex {vid!r}", lineno)
            if slot not in ("0", "1", "2"):
                raise DSLError(f"slot must be 0, 1 or 2 in {tok!r}", lineno)
            return ("slot", vid, int(slot))
        raise DSLError(f"unknown port {tok!r}", lineno)

    edges = []
    for lineno, a, b in edge_lines:
        edges.append((port(a, lineno), port(b, lineno)))
    triples = [tuple(("slot", v, j) for j in range(3)) for v in vertices]
    loop = None
    if kind == "A":
        lineno, names = loop_names if loop_names else (None, [])
        if sorted(names) != sorted(leg_names):
            raise DSLError("loop must list every declared leg exactly once", lineno)
        loop = [("leg", n) for n in names]
    elif loop_names is not None:
        raise DSLError("kind B takes no loop line", loop_names[0])
    try:
        return build_graph(kind, triples, edges, loop=loop)
    except DiagramError as e:
        raise DSLError(str(e)) from e


def parse_diagram_file(path) -> JacobiGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_diagram(fh.read())


def format_diagram(g: JacobiGraph) -> str:
    lines = [f"kind {g.kind}"]
    if g.nv:
        lines.append("tri " + " ".join(f"v{i}" for i in range(g.nv)))
    lines.append(f"legs {g.nlegs}")
    if g.kind == "A":
        lines.append(
            "loop " + " ".join(f"l{p - 3 * g.nv + 1}" for p in g.loop)
        )

    def port(p: int) -> str:
        if g.is_leg(p):
            return f"l{p - 3 * g.nv + 1}"
        return f"v{p // 3}.{p % 3}"

    for p, q in g.edges():
        lines.append(f"edge {port(p)} {port(q)}")
    return "\n".join(lines) + "\n"


def compact(g: JacobiGraph) -> str:
    """One-line canonical description, for tables and reports."""
    bits = [g.kind, f"v={g.nv}", f"l={g.nlegs}"]
    if g.circles:
        bits.append(f"o={g.circles}")
    edges = ";".join(f"{p}-{q}" for p, q in g.edges())
    bits.append(edges or "empty")
    return "|".join(bits)
