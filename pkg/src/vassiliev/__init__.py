"""Exact-arithmetic Jacobi diagram algebras and their weight systems.

The package computes with the two diagram spaces of Vassiliev theory
(with and without a Wilson loop), imposes the local relations by exact
linear algebra, evaluates diagrams through metric Lie (super)algebras
into scalars, S(g), S(g*) and U(g), realizes the wheeling/Duflo
correspondence, and produces truncated link invariants of braid
closures.  All arithmetic is over exact rationals.
"""

from .diagrams import (
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
    omega_truncated,
    unit_vector,
    wheel,
    wheel_vector,
)
from .dsl import DSLError, format_diagram, parse_diagram, parse_diagram_file
from .liealg import (
    AlgebraError,
    MetricLieAlgebra,
    Representation,
    builtin,
    load_algebra,
    s_poly,
    save_algebra,
    validate,
)
from .poly import Poly
from .relations import (
    Basis,
    BudgetError,
    RelationMatrix,
    basis_A_chords,
    basis_B,
    dim_A,
    dim_B,
    enumerate_a_diagrams,
    enumerate_b_graphs,
    four_t_relations,
    reduce,
    stu_reduce,
)
from .ribbon import (
    BraidError,
    BraidWord,
    RepMatrix,
    braid_rep,
    braiding,
    casimir_element,
    chord_element,
    closure_invariant,
    parse_braid,
    twist,
)
from .series import TruncatedSeries
from .tensor import ContractionNetwork, ContractionPlan, SparseTensor, execute, plan, symmetrize
from .weights import (
    WeightSystem,
    cap_poly,
    compile_diagram,
    duflo_j_half,
    eval_A_to_U,
    eval_B_to_S,
    eval_B_to_Sdual,
    eval_closed_A,
    pbw,
    uea_straighten,
    wheeling_report,
)

__version__ = "0.1.0"
