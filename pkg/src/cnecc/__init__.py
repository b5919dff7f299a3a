"""Convolutional network-error-correcting codes for single-source acyclic
unit-delay memory-free multicast networks: exact algebra over F_q(z),
network transfer matrices, source-code construction and decoding rules,
bound calculators, and a seeded Monte-Carlo error simulator.
"""

__version__ = "0.1.0"

from .convcode import (
    CatastrophicGeneratorError,
    CodeProfile,
    GeneratorMatrix,
    Trellis,
    brute_force_min_weight,
    code_profile,
    free_distance,
    is_catastrophic,
    singleton_bound,
    singleton_check,
    t_dfree,
    viterbi_decode,
)
from .design import (
    BoundReport,
    CneccDesign,
    DecodeMode,
    ErrorPatternSet,
    SinkAnalysis,
    bound_report,
    choose_processing,
    decode_at_sink,
    design_cnecc,
    enumerate_error_vectors,
    instantaneous_comparison,
    select_decode_mode,
    sink_error_images,
    vec_weight,
    verify_code,
)
from .errorsim import (
    ErrorModel,
    SimPoint,
    SimResult,
    ber_sweep,
    channel,
    no_error_probability,
    run_trial,
    simulate_frames,
    spaced_error_check,
)
from .galois import (
    GF,
    Field,
    FieldMismatchError,
    Poly,
    PolyMatrix,
    RationalFunction,
    RationalMatrix,
)
from .netgraph import (
    NetworkCode,
    NetworkGraph,
    TransferSet,
    compute_transfer,
    instantaneous_transfer,
    load_network,
    parse_network,
    random_network_code,
)
