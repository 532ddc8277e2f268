"""Exception types shared across the toolkit."""


class ProfileMatchError(Exception):
    """Base class for all toolkit errors."""


class CorpusError(ProfileMatchError):
    """Malformed corpus or reference file (parse error, duplicate id, missing field)."""


class EncodingError(ProfileMatchError):
    """Input cannot be phonetically encoded (no ASCII letter)."""


class TrainingError(ProfileMatchError):
    """Training data unusable (e.g. a single-class label set)."""


class EvaluationError(ProfileMatchError):
    """A metric or scenario run is undefined on the given data."""


class GenerationError(ProfileMatchError):
    """Synthetic corpus generation cannot satisfy the configuration."""
