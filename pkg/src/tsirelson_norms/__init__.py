"""Exact norms, certificates and property checks for Tsirelson-type spaces."""

from .certificate import verify_certificate
from .engine import NormResult, eval_iterate, eval_norm, evaluate
from .errors import (
    ConfigError,
    ConstructionFailed,
    GuardExceeded,
    InvalidCertificate,
    NormError,
    OverflowGuard,
    StabilizationFailure,
)
from .oracle import oracle_norm
from .schreier import enumerate_schreier_subsets, is_schreier_member, schreier_norm
from .spaces import SpaceConfig, registry
from .vectors import FinVec
from .weights import WeightSeq, geometric_alpha, geometric_theta, harmonic_theta

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ConstructionFailed",
    "FinVec",
    "GuardExceeded",
    "InvalidCertificate",
    "NormError",
    "NormResult",
    "OverflowGuard",
    "SpaceConfig",
    "StabilizationFailure",
    "WeightSeq",
    "enumerate_schreier_subsets",
    "eval_iterate",
    "eval_norm",
    "evaluate",
    "geometric_alpha",
    "geometric_theta",
    "harmonic_theta",
    "is_schreier_member",
    "oracle_norm",
    "registry",
    "schreier_norm",
    "verify_certificate",
]
