"""Optimal filling-in patterns and sequences for incomplete pairwise comparison matrices."""

from .graphs import (
    CanonicalForm,
    GraphClass,
    LabeledGraph,
    canonical_form,
    classify,
    enumerate_connected_classes,
    is_connected,
    parse_graph6,
)
from .pcm import (
    DEFAULT_RI,
    MODEST,
    STRONG,
    WEAK,
    ConsistencyReport,
    IncompletePcm,
    MetricPair,
    Pcm,
    PerturbationLevel,
    WeightVector,
    consistency_report,
    crev_incomplete,
    ev_complete,
    euclidean_distance,
    generate_consistent_pcm,
    kendall_tau,
    llsm_complete,
    llsm_incomplete,
    pcm_from_weights,
    perturb,
)
from .simulate import (
    GraphScore,
    SampleSizePlan,
    SimConfig,
    cr_calibration,
    plan_sample_size,
    run_cell,
    run_level_sweep,
    significant_difference,
)
from .metagraph import (
    FillingSequence,
    MetaGraph,
    ScoredMetaGraph,
    build_metagraph,
    export_metagraph,
    extract_sequences,
    import_metagraph_json,
    mark_optimal,
)
from .store import RunArtifact, load_run, save_run

__version__ = "0.1.0"
