"""Budget-constrained single-vertex intervention design on tree-like skeletons."""

from .chordal import (
    ChordalDecomposition,
    allocate_budget,
    contract,
    count_triangles,
    find_cysts,
    triangle_free_edges,
    verify_chordal_moral_inputs,
)
from .design import (
    DesignTrace,
    Segment,
    WingPartition,
    divide,
    find_separator,
    make_segment,
    partition_lobes,
    probal,
    probal_minimax,
    probal_upper_bound,
)
from .errors import (
    AllZeroSegmentError,
    BudgetFractionTooLargeError,
    ContractionNotTreeError,
    DegenerateBoundError,
    DuplicateEdgeError,
    EmptyInterventionError,
    FileFormatError,
    GenerationStalledError,
    GraphError,
    MissingVertexError,
    NonPositiveMassError,
    NotATreeError,
    NotNormalizedError,
    PriorError,
    ProbalError,
    RoundCapExceededError,
    SearchSpaceTooLargeError,
    SelfLoopError,
    SingleVertexError,
    UnknownVertexError,
)
from .exact import (
    StudyReport,
    StudyRow,
    approx_factor,
    approx_ratio_study,
    bayes_lower_bound,
    brute_force_bayes,
    brute_force_minimax,
    minimax_lower_bound,
)
from .generators import (
    GenSpec,
    ba_tree,
    enumerate_trees,
    gw_tree,
    instance_batch,
    instance_seeds,
    prufer_tree,
)
from .graphs import (
    RootedTree,
    Skeleton,
    components,
    descendants,
    is_star_with_center,
    lobes,
    path_graph,
    read_edge_list,
    root_tree,
    skeleton_from_edge_list,
    star_graph,
    validate_skeleton,
    write_edge_list,
)
from .loss import (
    ComponentDecomposition,
    DiscrepancyReport,
    LossBounds,
    average_loss,
    average_loss_bounds,
    check_single_root,
    closed_form_loss,
    closed_form_losses_by_root,
    decompose,
    descendant_mask_table,
    discrepancy_report,
    loss_report,
    minimax_surrogate,
    oracle_consistent_roots,
    oracle_loss,
    oracle_losses_by_root,
    surrogate_loss,
)
from .priors import (
    RootPrior,
    SegmentMeasure,
    degree_prior,
    explicit_prior,
    normalize_segment,
    read_prior_file,
    uniform_prior,
)
from .sweep import (
    GrnReport,
    ScalingReport,
    SweepSpec,
    grn_pipeline,
    rows_to_csv,
    run_sweep,
    scaling_bench,
)

__version__ = "0.1.0"
