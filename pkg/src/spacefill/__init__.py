"""Data-driven space-filling curves for 2D/3D scalar fields."""

from .baselines import hilbert_curve, morton_curve, scanline_curve
from .curve import Curve, Step, read_curve, write_curve
from .errors import (
    CycleAssociationError,
    FieldFormatError,
    NoHamiltonianPath,
    SpacefillError,
    TreeFormatError,
)
from .estimators import (
    DataDrivenCurve2D,
    DataDrivenCurve3D,
    HilbertCurve,
    MortonCurve,
    MultiscaleCurve,
    ScanlineCurve,
)
from .evaluate import LinearizedSeries, compare_methods, linearize, normalized_autocorrelation
from .field import (
    ScalarField,
    ValuePyramid,
    build_pyramid,
    load_scalar_field,
    normalize_values,
    write_scalar_field,
)
from .grid import GridGraph, grid_graph_from_field
from .hampath import (
    HamPathProblem,
    exhaustive_min_hampath,
    parity_feasible,
    partitioned_hampath,
    path_cost,
)
from .methods import METHOD_NAMES, build_curve
from .multiscale import (
    find_best_entry,
    find_top_level_sfc,
    reconstruct_to_grid,
    refine,
    sfc_multiscale,
)
from .regular2d import (
    CircuitDualGraph,
    EdgeWeight,
    build_circuit_dual_graph,
    combined_weight,
    cut_cycle_to_path,
    dd_sfc_2d,
    merge_cycle_2d,
    position_weight,
    prim_mst,
    value_weight_2d,
)
from .regular3d import (
    CUBE_CYCLE_CONFIGS,
    CubeCycleConfig,
    assign_cycle_configs,
    associate_cycles,
    dd_sfc_3d,
    position_weight_3d,
    value_weight_3d,
)
from .tree import MultiscaleTree, TreeNode, build_multiscale_tree, read_tree, write_tree

__version__ = "0.1.0"
