"""Sparse {-1, 0, 1} combinations with many sign changes, built by moment pigeonholing."""

__version__ = "0.1.0"

from .analytic import (  # noqa: E402
    C1,
    BoundReport,
    check_lemma31,
    check_lemma32,
    check_lemma33,
    choose_a,
    guaranteed_m,
    integral_log_abs,
    l0_norm,
    l1_norm,
    log_minus_integral,
    proof_chain_check,
)
from .collider import (  # noqa: E402
    CollisionCertificate,
    collide_exhaustive,
    collide_mitm,
    collide_random,
    construct,
    verify_collision,
)
from .errors import (  # noqa: E402
    ChainViolation,
    FormViolation,
    FrameViolation,
    NotFound,
    PigeonRootsError,
)
from .kernels import BACKEND  # noqa: E402
from .moments import GridSpec, make_grid, moment_vector  # noqa: E402
from .polycore import (  # noqa: E402
    ProblemInstance,
    RationalPolynomial,
    SelectionVector,
    SignVector,
    affine_pullback,
    assemble,
    difference,
)
from .rootcert import (  # noqa: E402
    SignChangeCertificate,
    count_sign_changes,
    max_multiplicity_search,
    multiplicity_at_one,
)

__all__ = [
    "GridSpec",
    "make_grid",
    "moment_vector",
    "BACKEND",
    "BoundReport",
    "C1",
    "ChainViolation",
    "CollisionCertificate",
    "FormViolation",
    "FrameViolation",
    "NotFound",
    "PigeonRootsError",
    "ProblemInstance",
    "RationalPolynomial",
    "SelectionVector",
    "SignChangeCertificate",
    "SignVector",
    "affine_pullback",
    "assemble",
    "check_lemma31",
    "check_lemma32",
    "check_lemma33",
    "choose_a",
    "collide_exhaustive",
    "collide_mitm",
    "collide_random",
    "construct",
    "count_sign_changes",
    "difference",
    "guaranteed_m",
    "integral_log_abs",
    "l0_norm",
    "l1_norm",
    "log_minus_integral",
    "max_multiplicity_search",
    "multiplicity_at_one",
    "proof_chain_check",
    "verify_collision",
]
