"""Graph-signal sampling toolkit.

Builds weighted graphs, measures cutoff frequencies of sampling sets, selects
sets greedily under sampling-theoretic and experiment-design criteria, and
reconstructs signals either by bandlimited least squares or by MAP inference
on the matching Gaussian random field.
"""

from .active import (
    Criterion,
    LabeledSet,
    accuracy,
    classify_bandlimited,
    classify_map,
    indicator_signals,
    random_select,
    sigma_optimal_select,
    v_optimal_select,
)
from .exceptions import (
    DegenerateFeaturesError,
    DisconnectedGraphError,
    GraphsampError,
    NotUniquenessSetError,
    NumericalError,
)
from .experiments import (
    ExperimentConfig,
    FileDataset,
    ResultRow,
    ResultTable,
    SyntheticBlobs,
    emit,
    load_dataset,
    load_table,
    make_blobs,
    run_classification,
    run_regression,
)
from .graph import Graph, LaplacianKind, build_from_edges, is_connected, knn_graph, laplacian
from .grf import (
    GrfModel,
    LowRankGrf,
    Posterior,
    condition,
    covariance,
    covariance_from_spectrum,
    low_rank_covariance,
    map_estimate,
    map_full_signal,
    predictive_covariance,
    sample_signal,
)
from .sampling import (
    CutoffEstimate,
    SampleSet,
    bl_reconstruct,
    exact_cutoff,
    greedy_select_max_cutoff,
    omega_estimate,
)
from .spectral import (
    BandlimitedBasis,
    Spectrum,
    bandwidth,
    eigendecompose,
    gft,
    igft,
    pw_basis,
    synthesize,
)

__version__ = "0.1.0"
