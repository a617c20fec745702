"""Command-line front end.

Subcommands: dims, reduce, eval, validate, wheeling, link.  Output is
TSV for tables and one monomial per line for algebra elements; rationals
are printed in lowest terms.  Exit codes: 0 success, 1 property-check
failure, 2 input error, 3 resource budget exceeded.
"""

from __future__ import annotations

import sys

import click

from .diagrams import DiagramError, DiagramVector
from .dsl import DSLError, compact, parse_diagram_file
from .liealg import AlgebraError, builtin, load_algebra, validate as validate_algebra
from .relations import (
    BudgetError,
    DEFAULT_DEGREE_BUDGET,
    basis_A_chords,
    basis_B,
    dim_A,
    dim_B,
    stu_reduce,
)
from .ribbon import BraidError, BraidWord, closure_invariant, parse_braid
from .weights import WeightSystem, wheeling_report

EXIT_PROPERTY = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3

_INPUT_ERRORS = (DiagramError, DSLError, AlgebraError, BraidError, ValueError)


def _resolve_algebra(name: str):
    try:
        return builtin(name)
    except AlgebraError:
        pass
    return load_algebra(name)


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


@click.group()
def main():
    """Exact diagram algebras, weight systems, and truncated link invariants."""


@main.command()
@click.option("--space", type=click.Choice(["A", "B"]), required=True)
@click.option("--degree", type=int, default=None, help="top degree for space A")
@click.option("--v", "vcount", type=int, default=None, help="trivalent vertices (space B)")
@click.option("--legs", type=int, default=None, help="legs (space B)")
@click.option("--budget", type=int, default=DEFAULT_DEGREE_BUDGET)
def dims(space, degree, vcount, legs, budget):
    """Dimensions of graded pieces (one TSV row per degree)."""
    try:
        if space == "A":
            if degree is None or degree < 0:
                _fail(EXIT_INPUT, "space A needs --degree")
            for d in range(degree + 1):
                dim = dim_A(d // 2, budget=budget) if d % 2 == 0 else 0
                click.echo(f"{d}\t{dim}")
        else:
            if vcount is None or legs is None:
                _fail(EXIT_INPUT, "space B needs --v and --legs")
            click.echo(f"{vcount}\t{legs}\t{dim_B(vcount, legs, budget=budget)}")
    except BudgetError as e:
        _fail(EXIT_BUDGET, str(e))
    except _INPUT_ERRORS as e:
        _fail(EXIT_INPUT, str(e))


@main.command()
@click.option("--diagram", "path", type=click.Path(exists=True), required=True)
@click.option("--budget", type=int, default=DEFAULT_DEGREE_BUDGET)
def reduce(path, budget):
    """Coordinates of a diagram in the basis of its graded piece.

    Kind A diagrams are first rewritten to chord diagrams and reduced
    against the 4T basis; kind B against the IHX basis of its bigrade.
    """
    try:
        g = parse_diagram_file(path)
        vec = DiagramVector.from_graph(g)
        if g.kind == "A":
            vec = stu_reduce(vec)
            basis = basis_A_chords(g.degree // 2, budget=budget)
        else:
            basis = basis_B(g.nv, g.nlegs, budget=budget)
        coords = basis.reduce(vec)
        for i, (rep, c) in enumerate(zip(basis.representatives, coords)):
            click.echo(f"{i}\t{c}\t{compact(rep)}")
    except BudgetError as e:
        _fail(EXIT_BUDGET, str(e))
    except _INPUT_ERRORS as e:
        _fail(EXIT_INPUT, str(e))


def _print_monomials(terms, prefix: str):
    for word in sorted(terms, key=lambda w: (len(w), w)):
        mono = " ".join(f"{prefix}{i}" for i in word) if word else "1"
        click.echo(f"{terms[word]}\t{mono}")


@main.command("eval")
@click.option("--alg", required=True, help="builtin name or algebra file")
@click.option("--rep", default="fund", help="representation name (scalar target)")
@click.option("--diagram", "path", type=click.Path(exists=True), required=True)
@click.option(
    "--target",
    type=click.Choice(["scalar", "U", "S", "Sdual"]),
    default="scalar",
)
def eval_cmd(alg, rep, path, target):
    """Evaluate a diagram under the weight systems of an algebra."""
    try:
        g = _resolve_algebra(alg)
        d = parse_diagram_file(path)
        vec = DiagramVector.from_graph(d)
        if target == "scalar":
            ws = WeightSystem(g, g.rep(rep))
            click.echo(str(ws.eval_closed(vec)))
        elif target == "U":
            ws = WeightSystem(g)
            _print_monomials(ws.eval_to_U(vec), "e")
        elif target == "S":
            ws = WeightSystem(g)
            _print_monomials(ws.eval_to_S(vec).terms, "x")
        else:
            ws = WeightSystem(g)
            _print_monomials(ws.eval_to_Sdual(vec).terms, "y")
    except BudgetError as e:
        _fail(EXIT_BUDGET, str(e))
    except _INPUT_ERRORS as e:
        _fail(EXIT_INPUT, str(e))


@main.command()
@click.option("--alg", required=True, help="algebra file to check")
def validate(alg):
    """Check all metric Lie (super)algebra axioms of an algebra file."""
    try:
        g = load_algebra(alg, validated=False)
    except AlgebraError as e:
        _fail(EXIT_INPUT, str(e))
    issues = validate_algebra(g)
    if issues:
        for issue in issues:
            click.echo(f"FAIL\t{issue}")
        sys.exit(EXIT_PROPERTY)
    click.echo(f"OK\tdim={g.dim}")


@main.command()
@click.option("--alg", required=True)
@click.option("--maxdeg", type=int, default=4)
@click.option("--flip-omega-sign", is_flag=True, hidden=True)
def wheeling(alg, maxdeg, flip_omega_sign):
    """Run the wheeling property suite; exit 1 on any failed identity."""
    try:
        g = _resolve_algebra(alg)
        ok, lines = wheeling_report(g, maxdeg, flip_sign=flip_omega_sign)
    except BudgetError as e:
        _fail(EXIT_BUDGET, str(e))
    except _INPUT_ERRORS as e:
        _fail(EXIT_INPUT, str(e))
    for line in lines:
        click.echo(line)
    sys.exit(0 if ok else EXIT_PROPERTY)


@main.command()
@click.option("--braid", required=True, help="signed generator indices, e.g. '1 1 1'")
@click.option("--strands", type=int, required=True)
@click.option("--alg", required=True)
@click.option("--rep", default="fund")
@click.option("--order", type=int, default=2, help="truncation order N")
@click.option("--normalize", is_flag=True, help="divide out the framing twist")
def link(braid, strands, alg, rep, order, normalize):
    """Truncated invariant of the closure of a braid word."""
    try:
        g = _resolve_algebra(alg)
        V = g.rep(rep)
        word = parse_braid(braid, strands)
        inv = closure_invariant(
            word, g, order, V=V, normalize_framing=normalize
        )
        click.echo(str(inv))
    except BudgetError as e:
        _fail(EXIT_BUDGET, str(e))
    except _INPUT_ERRORS as e:
        _fail(EXIT_INPUT, str(e))


if __name__ == "__main__":
    main()
