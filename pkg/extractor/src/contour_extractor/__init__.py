"""Per-subword surprisal extraction from segmented raw texts."""

__version__ = "0.1.0"

from .errors import (
    ContextLengthExceeded,
    ExtractorError,
    ModelLoadError,
    SegmentationError,
    UnalignableSpan,
)
from .extract import align_units, extract_corpus, extract_surprisal
from .models import CacheBigramModel, HFCausalModel, load_model
from .segments import SegmentedText, build_segmented, load_segmented
from .tokenizer import GreedyTokenizer, vocabulary_from_corpus

__all__ = [name for name in dir() if not name.startswith("_")]
