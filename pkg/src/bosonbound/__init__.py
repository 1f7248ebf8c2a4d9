"""Exact BosonSampling distributions, n-photon lifts, and network-noise experiments."""

from ._backend import BACKEND
from .errors import (
    BosonBoundError,
    ContractError,
    DecompositionError,
    DimensionError,
    InputStateError,
    ParameterError,
    SizeLimitError,
    SpecError,
    StructureError,
)
from .fock import (
    OutcomeDistribution,
    distinguishable_distribution,
    enumerate_outcomes,
    output_amplitudes,
    output_distribution,
    sample_outcome,
)
from .interferometer import (
    Beamsplitter,
    InterferometerNetwork,
    Phaseshifter,
    compose,
    decompose,
    perturb_network,
)
from .lift import BosonState, evolve, lift, lifted_eigenphases, lifted_operator_distance
from .linalg import (
    haar_random_unitary,
    is_unitary,
    operator_distance,
    unitary_eigenphases,
    unitary_operator_distance,
)
from .metrics import DistanceReport, chain_report, l1_distance, trace_distance_pure
from .noise import (
    NoiseSpec,
    gaussian_opnorm_stat,
    gaussian_perturb,
    mix_seed,
    nearest_unitary,
    perturb_unitary,
)
from .permanent import permanent, permanent_naive, permanent_sub

__version__ = "0.1.0"
