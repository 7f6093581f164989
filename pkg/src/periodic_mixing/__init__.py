"""Lossless compression of periodic vector signals into scalar streams."""
from .continuous import (
    CartanForm,
    ContinuousCompressorDesign,
    SkewSymmetricMatrix,
    SpanningCertificate,
    cartan_decompose,
    continuous_stream,
    design_compressor,
    reconstruct_continuous,
    spanning_certificate,
)
from .discrete import (
    GroupSystemSpec,
    PermutationSpec,
    RationalAngle,
    RotationSpec,
    SensorNetworkSpec,
    cycle_resonance,
    group_resonance_search,
    permutation_losslessness,
    reconstruct_group,
    reconstruct_permutation,
    reconstruct_rotation,
    reconstruct_sensor_network,
    rotation_resonance,
    roundrobin_losslessness,
)
from .estimators import ContinuousCompressor, PeriodicCompressor
from .exceptions import (
    BudgetError,
    DimensionError,
    InconsistentSamples,
    InconsistentStream,
    InsufficientExcitation,
    InsufficientHorizon,
    NotLossless,
    PartialReconstruction,
    PeriodicMixingError,
    PreconditionError,
    UnsupportedSpec,
)
from .number_theory import (
    CongruenceSystem,
    crt_solve,
    gcd,
    general_losslessness,
    lcm,
    switch_losslessness,
    winding_coverage,
)
from .reconstruction import check_richness, minimal_horizon, plan_reconstruction, reconstruct
from .shutter import ImageSequence, ReadoutStream, deblur, rotor_sequence, simulate_readout
from .signals import CompressedStream, MixingSignal, PeriodicVectorSignal, compress, odd_index_mixer, switch_mixer

__version__ = "0.1.0"
