"""Exact verification of finite-dimensional quantum homomorphisms
between finite relational structures, with certificate-bearing gadget
checks and instance reductions.

All arithmetic is rational and exact (fractions.Fraction); nothing here
is numerical.  See the README for the CLI and file formats.
"""

from .structures import (
    ClassicalHom,
    FormatError,
    GadgetSpec,
    PPFormula,
    Signature,
    Structure,
    build,
    classical_hom,
    clique,
    compose_homs,
    core,
    cycle,
    diameter,
    direct_power,
    gaifman,
    hom_enumerate,
    hom_search,
    induced,
    is_connected,
    is_core,
    is_tree,
    parse_structure,
    path_graph,
    polymorphisms,
    pp_to_gadget,
    product,
    read_structure,
    render_structure,
    undirected_reduct,
    with_relation,
    write_structure,
)
from .homsearch import automorphisms, find_any, lex_all, lex_first
from .qlinalg import (
    QMat,
    QuantumFunction,
    block_diag,
    commutator,
    compose,
    decompose_noncontextual,
    dim_cap,
    direct_sum,
    from_classical_family,
    is_noncontextual,
    is_projector,
    is_pvm,
    kron,
    parse_qfun,
    quantum_function,
    read_qfun,
    render_qfun,
    tensor,
    write_qfun,
)
from .qhom import (
    MODES,
    Bifurcation,
    QHomCandidate,
    VerificationReport,
    core_column_sums,
    find_bifurcation,
    in_quantum_closure,
    is_quantum_polymorphism,
    verify,
    walk_orthogonality_check,
)
from .gadgets import (
    Certificate,
    CertificateStore,
    CommGadget,
    GeneratorSet,
    build_power_comm_gadget,
    build_qdef,
    check_c1,
    check_c2,
    check_generators,
    check_nonoracular_variants,
    check_q1,
    check_q2,
    closure_flags,
    defined_relation,
    parse_gadget,
    read_gadget,
    render_gadget,
    write_gadget,
)
from .reduce import (
    CompiledInstance,
    ReductionRecipe,
    classical_equivalence_check,
    clique_lift,
    compile_instance,
    compile_nonoracular,
    compile_oracular,
    lift_classical,
    load_recipe,
)
from .catalog import FLAG_TAGS, CatalogEntry, get as catalog_get, list_entries

__version__ = "0.1.0"
