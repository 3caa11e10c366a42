"""Tools for building, certifying and hunting nut graphs with prescribed symmetry.

A nut graph is a connected simple graph on at least two vertices whose
adjacency matrix has a one-dimensional kernel spanned by a vector with no
zero entry.  This package provides exact (integer) nut certification,
permutation-group machinery, canonical labelling, isomorph-free exhaustive
enumeration, and the gadget-decoration pipelines that realise any finite
group as the automorphism group of a nut graph (plain or d-regular).
"""

from .graphs import (
    Graph,
    VertexTag,
    build_graph,
    complement,
    is_connected,
    degree_profile,
    subdivide_edge,
    coalesce,
    disjoint_union,
)
from .kernel import KernelBasis, NutCertificate, nullspace, nut_certificate
from .perms import (
    Perm,
    PermGroup,
    parse_cycles,
    format_cycles,
    group_from_generators,
    group_order,
    orbits,
    stabilizer,
    restrict_group,
    groups_isomorphic,
)
from .autgroup import (
    CanonicalCode,
    automorphism_group,
    refine_partition,
    canonical_form,
    are_isomorphic,
)
from .codec import to_graph6, from_graph6, read_graph_file
from .gadgets import (
    GadgetSpec,
    GadgetRecord,
    search_root_gadgets,
    gadget_from_proto,
    search_proto_gadgets,
    default_root_gadget,
    load_gadget_records,
    save_gadget_records,
)
from .construct import (
    MultiplierResult,
    PipelineReport,
    triangle_multiplier,
    pairing_schedule,
    build_nut_realization,
    build_regular_nut_realization,
    verify_report,
)
from .census import (
    CensusResult,
    MinimalityResult,
    enumerate_graphs,
    enumerate_regular,
    census_nuts,
    minimal_order_for_group,
)

__version__ = "0.1.0"
