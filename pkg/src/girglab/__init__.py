"""girglab: generate and analyze geometric scale-free random graphs.

Power-law vertex weights on a d-dimensional torus, edge kernels with
Chung-Lu marginals (product form, inverse-polynomial distance decay, or
threshold), reference and expected-near-linear samplers, and structural
measurements: degree tail, giant component, heavy core, greedy ascent
paths, and sampled average distance against 2 ln ln n / |ln(beta-2)|.
"""

from .analysis import (
    ComponentReport,
    CoreReport,
    DegreeReport,
    DistanceReport,
    components,
    core_report,
    degree_report,
    distance_report,
    distance_target,
    greedy_path,
    restricted_neighborhood,
)
from .config import ExperimentPlan, parse_kernel_spec, parse_model_config, parse_plan
from .geometry import Norm, ball_volume, inverse_volume, torus_distance
from .harness import run_experiment
from .kernels import (
    ChungLu,
    DistanceKernel,
    ThresholdKernel,
    edge_probability,
    verify_ep1,
    verify_ep2,
)
from .pairrng import mix64, pair_uniform
from .sampler import (
    Graph,
    ModelConfig,
    generate,
    generate_grid,
    generate_naive,
    read_graph,
    write_graph,
)
from .weights import (
    PowerLawReport,
    WeightSequence,
    partial_weight_sums,
    read_weights,
    sample_weights,
    verify_power_law,
    write_weights,
)

__version__ = "0.1.0"

__all__ = [
    "ChungLu",
    "ComponentReport",
    "CoreReport",
    "DegreeReport",
    "DistanceKernel",
    "DistanceReport",
    "ExperimentPlan",
    "Graph",
    "ModelConfig",
    "Norm",
    "PowerLawReport",
    "ThresholdKernel",
    "WeightSequence",
    "ball_volume",
    "components",
    "core_report",
    "degree_report",
    "distance_report",
    "distance_target",
    "edge_probability",
    "generate",
    "generate_grid",
    "generate_naive",
    "greedy_path",
    "inverse_volume",
    "mix64",
    "pair_uniform",
    "parse_kernel_spec",
    "parse_model_config",
    "parse_plan",
    "partial_weight_sums",
    "read_graph",
    "read_weights",
    "restricted_neighborhood",
    "run_experiment",
    "sample_weights",
    "torus_distance",
    "verify_ep1",
    "verify_ep2",
    "verify_power_law",
    "write_graph",
    "write_weights",
]
