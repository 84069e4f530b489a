"""Two-atom light absorption: entanglement-enhanced rates and hyperentanglement.

Simulates a pair of distinguishable two-level atoms prepared in an
entangled, mixed or product state of their counter-propagating wavepackets,
applies a low-intensity absorption channel with photon recoil, and
quantifies how the absorption statistics and the entanglement structure of
the pair respond.
"""

__version__ = "0.1.0"

from .absorption import (
    AbsorptionAmplitudes,
    InitialStateKind,
    OutcomeProbabilities,
    Scenario,
    apply_absorption,
    build_initial,
    no_recoil_final,
    outcome_probabilities,
)
from .entanglement import (
    Classification,
    HyperentanglementReport,
    LambdaMatrices,
    SchmidtResult,
    build_lambda,
    entropy_bits,
    hyperentanglement_report,
    is_product_across,
    lambda_channel_deviation,
    lambda_spectrum_check,
    schmidt_decompose,
    schmidt_via_eigenvalues,
)
from .errors import (
    ComplexAmplitudesError,
    DegenerateSpectrumError,
    ExcitedInputError,
    FamilyMismatchError,
    NotADistributionError,
    NotNormalizedError,
    OutOfRangeError,
    SimulationError,
    WrongKindError,
    ZeroNormError,
)
from .recoil import (
    GaussianRecoilModel,
    RecoilOverlaps,
    decompose_overlap,
    gaussian_recoil_overlap,
)
from .report import ScenarioReport, evaluate_scenario
from .states import (
    BasisLabel,
    Bipartition,
    CoefficientMatrix,
    DensityMatrix,
    InternalLevel,
    Ket,
    MixedState,
    Particle,
    SpatialMode,
    Subsystem,
    a_label,
    b_label,
    coefficient_matrix,
    exchange_left_right,
    inner,
    ket_from_matrix,
    max_entry_delta,
    normalize,
    reduced_density,
    tensor,
)

__all__ = [name for name in dir() if not name.startswith("_")]
