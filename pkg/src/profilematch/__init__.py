"""profilematch: decide whether two profiles from two online social networks
belong to the same person.

The pipeline: ingest or synthesize two corpora, compute a 27-feature
similarity vector per candidate pair, build ten leakage-free train/test
folds, train boosted or bagged ensembles from scratch, and evaluate three
matching scenarios plus per-feature ablations.
"""

from profilematch._kernels import BACKEND
from profilematch.errors import (
    CorpusError,
    EncodingError,
    EvaluationError,
    GenerationError,
    ProfileMatchError,
    TrainingError,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ProfileMatchError",
    "CorpusError",
    "EncodingError",
    "TrainingError",
    "EvaluationError",
    "GenerationError",
    "__version__",
]
