"""Morphological analysis by memory-decomposed lookup, with cost models.

Subpackages and modules:

* :mod:`morphoforge.textmodel` - graphematic segmentation and indexing
* :mod:`morphoforge.lexicon` - alphabet, lexicon files, statistics, memory images
* :mod:`morphoforge.amp` - cycle-level model of the morphological processor
* :mod:`morphoforge.costmodel` - description complexity, memory cost, Pareto selection
* :mod:`morphoforge.ontometrics` - ontograph complexity and concept union
"""

__version__ = "0.1.0"

from .amp import AmpConfig, MorphAnalyzer, analyze_sentence, analyze_word  # noqa: E402
from .lexicon import Alphabet, LexiconEntry, compile_lexicon, load_image, save_image  # noqa: E402
from .textmodel import AccDictionary, GraphematicSegmenter, RawDocument, segment  # noqa: E402

__all__ = [
    "AccDictionary", "Alphabet", "AmpConfig", "GraphematicSegmenter", "LexiconEntry",
    "MorphAnalyzer", "RawDocument", "analyze_sentence", "analyze_word", "compile_lexicon",
    "load_image", "save_image", "segment", "__version__",
]
