"""Galois covers of degenerated surfaces: groups, kernels, and signatures.

Given a combinatorial description of a surface degenerating to a union of
planes, this package generates the quotient group of the branch-curve
complement (one involution per intersection line), enumerates its order,
identifies the kernel of the map onto the symmetric group -- which is the
fundamental group of the Galois cover -- and computes the Chern numbers
and signature of the cover.  Two independent computation routes are
provided for cross-checking: coset enumeration with Reidemeister-Schreier
rewriting, and a Coxeter-type quotient acting on a root lattice.
"""

from .complexes import (
    ComplexError,
    ComplexParseError,
    DegenerationComplex,
    DualGraph,
    Edge,
    Inner3,
    Inner4,
    PresentationOverrides,
    UnsupportedMultiplicity,
    ValidationReport,
    Vertex,
    betti,
    classify_vertex,
    dual_graph,
    parasitic_pairs,
    parse_complex,
    serialize_complex,
    validate,
)
from .coxeter import (
    CoxeterGraph,
    CoxeterRoute,
    SemidirectElement,
    coxeter_route,
    eval_word,
    lattice_quotient,
    sd_inverse,
    sd_multiply,
    standard_assignment,
)
from .datasets import builtin_names, load_builtin
from .enumeration import (
    CosetTable,
    EnumerationOverflow,
    coset_enumeration,
    generator_permutations,
    group_order,
)
from .invariants import (
    ChernSignature,
    InvariantCounts,
    chern_numbers,
    chern_signature,
    signature,
    singularity_counts,
)
from .kernel import (
    StructureVerdict,
    abelianization,
    identify_structure,
    kernel_coset_table,
    reidemeister_schreier,
    smith_normal_form,
)
from .permutations import (
    Permutation,
    SymmetricAssignment,
    permutation_group_order,
    plane_transposition_map,
    verify_homomorphism,
)
from .presentation import (
    BraidDescriptor,
    GroupPresentation,
    MissingFourPointData,
    PresentationError,
    Word,
    build_tilde_presentation,
    eliminate_generator,
    free_reduce,
    parse_relation,
    simplify_presentation,
    vk_relation,
)

__version__ = "1.0.0"
