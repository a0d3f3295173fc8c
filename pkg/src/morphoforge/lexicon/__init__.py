"""Lexicon compilation and corpus statistics."""

from .alphabet import CODE_BITS, Alphabet
from .entries import LexiconEntry, dump_lexicon, load_lexicon, parse_lexicon
from .image import (EndingCell, MemoryImage, Sentinels, StemCell, StemEntry, compile_lexicon,
                    deserialize, load_image, save_image, serialize)
from .stats import (CombinationScheme, CombinationTable, GaussianFit, GaussianLengthModel,
                    GroupMode, PositionGroup, combination_counts, eval_gaussian, fit_gaussian,
                    histogram_mean, r_squared, range_counts, required_data_width,
                    stem_length_histogram)

__all__ = [
    "CODE_BITS", "Alphabet", "LexiconEntry", "dump_lexicon", "load_lexicon", "parse_lexicon",
    "EndingCell", "MemoryImage", "Sentinels", "StemCell", "StemEntry", "compile_lexicon",
    "deserialize", "load_image", "save_image", "serialize", "CombinationScheme",
    "CombinationTable", "GaussianFit", "GaussianLengthModel", "GroupMode", "PositionGroup",
    "combination_counts", "eval_gaussian", "fit_gaussian", "histogram_mean", "r_squared",
    "range_counts", "required_data_width", "stem_length_histogram",
]
