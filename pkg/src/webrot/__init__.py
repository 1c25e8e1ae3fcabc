"""webrot: liveness/archival classification of shared web resources,
linear decay models, and social-neighborhood replacement mining."""

from .core import (
    CanonicalUri,
    Liveness,
    LivenessVerdict,
    ResourceStatus,
    VerdictReason,
    canonicalize,
    classify_status,
)

__version__ = "0.1.0"

__all__ = [
    "CanonicalUri",
    "Liveness",
    "LivenessVerdict",
    "ResourceStatus",
    "VerdictReason",
    "canonicalize",
    "classify_status",
    "__version__",
]
