"""Discrete topology and metric invariants on locally finite metric spaces.

Exact neighborhood/boundary/chain primitives, continuous paths and
bounded homotopy search, nearest-point-preserving isomorphism tests with
symbolic graphs, isoperimetric and zoom isoperimetric constants, the
digital Jordan curve theorem on the integer grid, and a spectral lower
bound on lp-distortion.
"""

__version__ = "0.1.0"

from .exact import Dist
from .spaces import (
    ChainLevels,
    MetricSpace,
    Window,
    closed_neighborhood,
    discrete_k_boundary,
    discrete_k_neighborhood,
    discrete_one_neighborhood,
    distance_levels,
    k_boundary,
    l1_product,
    rescaled,
    step_and_normal_form,
    subspace,
)
from .homotopy import (
    Circuit,
    circuits_homotopic,
    concat,
    constant_circuit,
    is_continuous_path,
    legal_row_moves,
    make_circuit,
    map_circuit,
    null_homotopy_search,
    path_components,
    rebase_circuit,
    reverse_circuit,
    validate_homotopy_matrix,
    winding_number,
)
from .npp import (
    PointMap,
    TsGraph,
    compose,
    functions_homotopic_search,
    identity_map,
    is_graph_type,
    is_npp_function,
    is_npp_isomorphism,
    is_npp_local_isomorphism,
    subset_transport_check,
    symbolic_graph,
)
from .isoperimetry import (
    IsoReport,
    SubsetPolicy,
    doubling_check,
    iota_global,
    iota_k,
    local_amenability_check,
    property_sn_locally_finite,
    zoom_constants,
    zoom_extremes,
)
from .distortion import (
    coverings,
    displacement,
    distortion_lower_bound,
    distortion_lower_bound_components,
    edge_set,
    metric_defect,
    minimal_continuous_paths,
    spectral_gap_p,
)
from .digital import (
    DigitalCurve,
    contains_unit_square,
    extremal_rays,
    gamma_completion,
    grid_boundaries,
    is_simple_curve,
    jordan_decomposition,
    box_components,
    reconstruction_closure,
    reduce_unit_square,
)
from .documents import load_curve, load_map, load_space, save_curve, save_space
from .fixtures import generate_fixture, simple_curve_corpus

__all__ = [name for name in dir() if not name.startswith("_")]
