"""Many-particle interference in multiport interferometers.

Exact transition probabilities for bosons, fermions, distinguishable and
partially distinguishable particles; suppression-law prediction and
certification; correlation datasets with random-matrix predictions for the
statistical validation of Boson-Sampling-type data.
"""

from .correlations import (
    CorrelationDataset,
    MomentSummary,
    correlation_dataset,
    correlation_pair,
    correlation_pair_partial,
    exact_first_moment,
    fourier_moments,
    moments,
    rmt_first_moment,
    rmt_first_moment_partial,
    rmt_prediction,
    rmt_second_moment,
    rmt_second_moment_partial,
    summary,
    summary_from_values,
    visibility,
    weingarten_11,
    weingarten_2,
)
from .errors import (
    DimensionError,
    MultiportError,
    NumericalConsistencyError,
    ParticleClassError,
    PortError,
    SizeLimitError,
)
from .interference import (
    GramMatrix,
    ParticleClass,
    WavePacketTrain,
    expected_number,
    gram_from_wave_packets,
    hom_dip_curve,
    single_particle_prob,
    transition_probability,
    transition_probability_partial,
)
from .permanents import (
    determinant,
    occupation_counts,
    occupation_normalization,
    permanent,
    permanent_naive,
)
from .sampling import (
    OutputDistribution,
    SampleBatch,
    classify,
    enumerate_distribution,
    estimate_correlations,
    sample_distinguishable_direct,
    sample_exact,
)
from .suppression import (
    EigenSystem,
    SuppressionVerdict,
    certify,
    eigensystem,
    input_symmetry,
    predict_suppressed,
    predict_suppressed_extended,
)
from .unitaries import (
    ModePermutation,
    Unitary,
    balanced_beamsplitter,
    fourier_unitary,
    haar_random_unitary,
    permutation_unitary,
    submatrix,
)

__version__ = "0.1.0"
