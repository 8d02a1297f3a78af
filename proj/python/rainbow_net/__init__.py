"""Rainbow network flow routing of balanced multiple-description codes."""

from ._core import (
    ContinuousRnf,
    DecodeError,
    DiscreteRnf,
    InstanceTooLarge,
    Network,
    ParseError,
    ValidationError,
    __version__,
    drnf_distortion,
    gaussian_source,
    interval_measure,
    load_flow,
    load_flow_file,
    load_scenario,
    load_scenario_file,
    optimize_fig1_ozarow,
    optimize_pet_profile,
    ozarow_joint_bound,
    pet_decode,
    pet_encode,
    run_lemma_suite,
    run_pipeline,
    search,
    separate_coding_baseline,
)

__all__ = [
    "ContinuousRnf",
    "DecodeError",
    "DiscreteRnf",
    "InstanceTooLarge",
    "Network",
    "ParseError",
    "ValidationError",
    "__version__",
    "drnf_distortion",
    "gaussian_source",
    "interval_measure",
    "load_flow",
    "load_flow_file",
    "load_scenario",
    "load_scenario_file",
    "optimize_fig1_ozarow",
    "optimize_pet_profile",
    "ozarow_joint_bound",
    "pet_decode",
    "pet_encode",
    "run_lemma_suite",
    "run_pipeline",
    "search",
    "separate_coding_baseline",
]
