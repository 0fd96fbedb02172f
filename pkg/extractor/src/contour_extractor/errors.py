class ExtractorError(Exception):
    """Base class for extractor failures."""


class SegmentationError(ExtractorError):
    """Annotation spans do not partition or nest properly."""


class ModelLoadError(ExtractorError):
    """The requested language model cannot be loaded."""


class ContextLengthExceeded(ExtractorError):
    """Document longer than the model window; no truncation is attempted."""


class UnalignableSpan(ExtractorError):
    """A subword cannot be mapped to a structural unit."""
