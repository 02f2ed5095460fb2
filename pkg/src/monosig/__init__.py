"""Signature computation and signature inversion for monotone paths."""

__version__ = "0.1.0"

from .exceptions import (  # noqa: E402
    CapabilityError,
    DegeneratePathError,
    MonosigError,
    NotMonotoneError,
    SignatureNotNormalizedError,
)
from .paths import CandidatePath, MonotonePath, discretize, evaluate, normalize  # noqa: E402
from .signature import (  # noqa: E402
    TruncatedSignature,
    chen_concat,
    path_signature,
    quadrature_oracle,
    segment_signature,
)
from .words import (  # noqa: E402
    ProbMatrix,
    SymmetrizedWeights,
    WordDistribution,
    letter_count_marginal,
    piece_marginals,
    symmetrized_weights,
    word_weights,
)
from .invert import (  # noqa: E402
    Reconstruction,
    equivalence_bound_check,
    mle_reconstruct,
    sample_word,
    sample_words,
    word_to_lattice,
)
from .ldp import (  # noqa: E402
    RateEval,
    empirical_decay,
    rate_I,
    rate_W,
    rate_XT,
    rate_finite_dim,
    simulate_conditioned_word,
)
from .estimators import SignatureInverter, SignatureTransformer  # noqa: E402
