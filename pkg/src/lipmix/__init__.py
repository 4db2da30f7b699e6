"""Sampled metric arcs and circles: constructive means, mixers, and
retractions, plus sampling estimators for the metric invariants that
govern when such maps exist."""

from .spaces import (
    BACKENDS,
    ConsistencyError,
    DomainError,
    EstimationError,
    InputError,
    LipmixError,
    MapSample,
    MetricCheckReport,
    MetricSpace,
    ProductSpace,
    TopologyError,
    displacement,
    distance,
    map_from_function,
    power,
    validate_metric,
)
from .curves import (
    CurveSpec,
    SampledCurve,
    arc_between,
    curve_length,
    diameter,
    generate,
    make_box_curve,
    make_circle,
    make_circles_arc,
    make_circular_arc,
    make_cusp_jordan,
    make_graph_curve,
    make_segment,
    make_snowflake_vertex,
    make_tv_curve,
    make_two_lines,
    order_stats,
    power_image,
    subarc,
)
from .mixers import (
    MeanHandle,
    MixerHandle,
    PiecewiseLinear,
    PointMapHandle,
    StripRetraction,
    TupleDomain,
    box_mixer,
    circle_local_mean,
    circle_local_mixer,
    coordinate_median,
    cusp_jordan_local_mean,
    graph_mean,
    graph_mean_value,
    median_mixer,
    mixer_path,
    strip_retraction,
    symmetrized_curve,
)
from .estimators import (
    AbsorptionReport,
    ChainComponents,
    DomainSampler,
    EstimateReport,
    absorption_check,
    chain_components,
    doubling_estimate,
    is_chain_connected,
    lipschitz_estimate,
    qh_profile,
    sampler_for_handle,
    turning_constant,
    uniform_disconnectedness,
)
from .hyperspace import (
    FiniteSubset,
    MeanRetraction,
    hausdorff,
    hausdorff_by_maps,
    mean_to_retraction,
)
from .winding import (
    ArgTrace,
    RefinementError,
    allowed_delta,
    build_arg_trace,
    delta_arg,
    mean_lip_lower_bound,
    suggest_centers,
)

__version__ = "0.1.0"
