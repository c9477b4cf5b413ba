"""Common finite covers of non-positively curved cube complexes whose vertex
links are all isomorphic to a fixed Kneser complex."""

from .complex import (
    CubeComplex,
    DeltaAssignment,
    Link,
    StarIsomorphism,
    adjacency_map,
    assign_links,
    check_assignment,
    check_npc,
    from_arrays,
    from_undirected,
    link,
    pullback_assignment,
    validate_complex,
)
from .cover import (
    CoverMap,
    NotFound,
    VoltageAssignment,
    compose,
    compose_chain,
    davis_quotient,
    free_quotient,
    identity_cover,
    is_connected,
    search_trivializing_cover,
    verify_cover,
    voltage_cover,
)
from .deltacat import (
    DeltaCategory,
    ParallelHolonomy,
    PreDeltaCategory,
    all_parallel_holonomies,
    build_pre_delta,
    extend_to_delta,
    lift_delta,
    lift_pre_delta,
    parallel_holonomy,
    verify_delta,
    verify_pre_delta,
)
from .errors import *  # noqa: F401,F403
from .holonomy import (
    GlobalHolonomy,
    check_deck_regular,
    deck_action,
    flat_base_choices,
    global_holonomy,
    is_flat,
    kernel_cover,
)
from .hyperplane import (
    CleanlinessCertificate,
    Hyperplane,
    HyperplaneSystem,
    all_clean,
    certify_all,
    certify_clean,
    compute_hyperplanes,
    search_clean_cover,
    sides_and_parallel_edges,
    two_sided_cover,
)
from .kneser import (
    KneserComplex,
    LabelSet,
    SetBijection,
    build_kneser,
    is_square_free,
    kneser_parameters,
    recover_bijection,
    sub_kneser,
    vertex_star,
)
from .leighton import (
    CommonCover,
    FiberProduct,
    LColoring,
    OrbiCover,
    build_orbicover,
    common_cover,
    fiber_product,
    orbicover_pipeline,
    verify_lcoloring,
)

__version__ = "0.1.0"
