"""Software model of the table-driven morphological processor.

Each word runs through a fixed control sequence: symbols are received until
the word-end sentinel; suffixes of length 1..E_max are probed in the ending
memory, then the bare word (empty ending); every probe slot is followed by
one stem-memory compare slot (a NOP ending blocks the stem symbols but the
slot is still spent); finally every result word of every reading is emitted
up to its result-end sentinel.  Cycle counts are a weighted tally of those
steps and therefore depend on word length and on the readings returned, not
on how many stems the image holds.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from enum import Enum

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import CannotExpandError, ConfigError, MorphoforgeError, UnknownLetterError, WordLengthError
from .lexicon.alphabet import Alphabet
from .lexicon.image import Sentinels, compile_lexicon
from .textmodel import split_streams


class Status(str, Enum):
    FOUND = "found"
    NOT_FOUND = "notFound"
    ACC = "accProvided"


@dataclass(frozen=True)
class CycleParams:
    per_symbol_in: int = 1
    per_ending_probe: int = 1
    per_stem_compare: int = 2
    per_result_word: int = 1
    fixed: int = 4

    def __post_init__(self):
        for name, value in vars(self).items():
            if value < 0:
                raise ConfigError(f"cycle parameter {name} must be >= 0")


@dataclass(frozen=True)
class AmpConfig:
    block_count: int = 4
    max_word_len: int = 32
    max_ending_len: int = 4
    sentinels: Sentinels = Sentinels()
    cycles: CycleParams = CycleParams()
    strict: bool = True

    def __post_init__(self):
        if self.block_count < 1:
            raise ConfigError("block_count must be >= 1")
        if not 1 <= self.max_word_len <= 32:
            raise ConfigError("max_word_len must lie in 1..32")
        if self.max_ending_len < 0:
            raise ConfigError("max_ending_len must be >= 0")

    KEYS = {
        "blockCount": ("block_count", int), "maxWordLen": ("max_word_len", int),
        "maxEndingLen": ("max_ending_len", int), "strict": ("strict", None),
        "wordEnd": ("word_end", None), "resultEnd": ("result_end", None),
        "perSymbolIn": ("per_symbol_in", int), "perEndingProbe": ("per_ending_probe", int),
        "perStemCompare": ("per_stem_compare", int), "perResultWord": ("per_result_word", int),
        "fixed": ("fixed", int),
    }

    @classmethod
    def from_mapping(cls, mapping):
        """Build a config from ``key=value`` strings; unknown keys are rejected."""
        top, cyc, sent = {}, {}, {}
        for key, raw in mapping.items():
            if key not in cls.KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            name, conv = cls.KEYS[key]
            try:
                if name == "strict":
                    value = str(raw).strip().lower() in ("1", "true", "yes", "on")
                elif name in ("word_end", "result_end"):
                    value = int(str(raw), 0)
                else:
                    value = conv(raw)
            except ValueError:
                raise ConfigError(f"bad value {raw!r} for {key}") from None
            if name in ("word_end", "result_end"):
                sent[name] = value
            elif name.startswith("per_") or name == "fixed":
                cyc[name] = value
            else:
                top[name] = value
        return cls(sentinels=Sentinels(**sent), cycles=CycleParams(**cyc), **top)


@dataclass(frozen=True)
class Reading:
    lemma: str
    tags: tuple[str, ...]
    stem_len: int
    ending_len: int

    def key(self):
        return (self.lemma, ",".join(self.tags), self.stem_len, self.ending_len)


@dataclass(frozen=True)
class MorphResult:
    surface: str
    readings: tuple[Reading, ...]
    status: Status
    cycles: int = 0
    trace: tuple[tuple, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.status is Status.FOUND and not self.readings:
            raise MorphoforgeError("found result without readings")
        if self.status is Status.NOT_FOUND and self.readings:
            raise MorphoforgeError("notFound result with readings")
        n = len(self.surface)
        for r in self.readings:
            if r.stem_len + r.ending_len != n:
                raise MorphoforgeError(f"reading {r} does not cover {self.surface!r}")

    def reading_set(self):
        return sorted(r.key() for r in self.readings)


STEPS = ("receiveSymbol", "wordEndDetected", "endingProbe", "nopSkip", "stemCompare",
         "emitResultWord", "resultEnd")


def trace_cycles(trace, params):
    """Cycle count of a trace under ``params``."""
    cost = {
        "receiveSymbol": params.per_symbol_in,
        "wordEndDetected": 0,
        "endingProbe": params.per_ending_probe,
        "nopSkip": params.per_stem_compare,
        "stemCompare": params.per_stem_compare,
        "emitResultWord": params.per_result_word,
        "resultEnd": params.per_result_word,
    }
    return params.fixed + sum(cost[step[0]] for step in trace)


def format_trace(trace):
    """One line per state-machine step, e.g. ``endingProbe 2``."""
    return "\n".join(" ".join(str(p) for p in step) for step in trace)


def _check_image(image, config):
    if image.sentinels != config.sentinels:
        raise ConfigError("config sentinels differ from the ones compiled into the image")


def analyze_word(image, word, config=AmpConfig(), keep_trace=False):
    """Analyse one word over a compiled image."""
    _check_image(image, config)
    if not word:
        raise WordLengthError("empty word")
    if len(word) > config.max_word_len:
        if not config.strict:
            return MorphResult(word, (), Status.NOT_FOUND)
        raise WordLengthError(f"word {word!r} has {len(word)} symbols; limit is {config.max_word_len}")
    try:
        w = image.alphabet.fold(word, f"word {word!r}")
    except UnknownLetterError:
        if not config.strict:
            return MorphResult(word, (), Status.NOT_FOUND)
        raise

    n = len(w)
    trace = [("receiveSymbol", c) for c in w]
    trace.append(("wordEndDetected",))
    hits = []  # (result_addr, stem_len)

    for ell in range(1, min(config.max_ending_len, n) + 1):
        trace.append(("endingProbe", ell))
        suffix, stem = w[n - ell:], w[:n - ell]
        cell = image.ending_cell(suffix) if ell <= image.max_ending_len else None
        if cell is None or (stem and not cell.paradigm_classes):
            trace.append(("nopSkip", ell))
            continue
        trace.append(("stemCompare", ell))
        if not stem:
            hits.extend((a, 0) for a in cell.standalone)
            continue
        for sc in image.stem_bucket(stem):
            if sc.stem != stem:
                continue
            for se in sc.entries:
                if se.ending == suffix and se.paradigm_class in cell.paradigm_classes:
                    hits.append((se.result_addr, len(stem)))

    trace.append(("stemCompare", 0))
    for sc in image.stem_bucket(w):
        if sc.stem == w:
            hits.extend((se.result_addr, n) for se in sc.entries if not se.ending)

    readings = []
    for addr, stem_len in hits:
        lemma, tags, nwords = image.read_result(addr)
        trace.extend([("emitResultWord", addr + i) for i in range(nwords - 1)])
        trace.append(("resultEnd", addr))
        readings.append(Reading(lemma, tags, stem_len, n - stem_len))

    status = Status.FOUND if readings else Status.NOT_FOUND
    return MorphResult(word, tuple(readings), status, trace_cycles(trace, config.cycles),
                       tuple(trace) if keep_trace else None)


@dataclass(frozen=True)
class SentenceAnalysis:
    sentence_index: int
    per_word: tuple[MorphResult, ...]
    positions: tuple[int, ...]
    sentence_cycles: int
    waves: tuple[tuple[int, ...], ...] = ()

    @property
    def readings_count_bound(self):
        return math.prod(max(1, len(r.readings)) for r in self.per_word)


def wave_cycles(word_cycles, block_count, fixed):
    """Cycles for words processed in waves of ``block_count`` parallel blocks."""
    total = 0
    for i in range(0, len(word_cycles), block_count):
        total += max(word_cycles[i:i + block_count]) + fixed
    return total


def analyze_sentence(image, sentence, acc=None, config=AmpConfig()):
    """Analyse every word of a sentence; ACC words bypass the processor.

    Words needing analysis are packed in order into waves of
    ``config.block_count`` blocks.  A wave costs its slowest block plus
    ``cycles.fixed`` for the merge.
    """
    compute, acc_list = split_streams(sentence, acc)
    by_pos = {}
    for wf, rec in acc_list:
        reading = Reading(rec.lemma, tuple(rec.tags), len(wf.surface), 0)
        by_pos[wf.position] = MorphResult(wf.surface, (reading,), Status.ACC, 0)
    for wf in compute:
        try:
            by_pos[wf.position] = analyze_word(image, wf.surface, config)
        except MorphoforgeError as exc:
            exc.word_position = wf.position
            exc.args = (f"word {wf.position} of sentence {sentence.index}: {exc}",)
            raise
    k = config.block_count
    order = [wf.position for wf in compute]
    waves = tuple(tuple(order[i:i + k]) for i in range(0, len(order), k))
    cycles = wave_cycles([by_pos[p].cycles for p in order], k, config.cycles.fixed)
    positions = tuple(sorted(by_pos))
    return SentenceAnalysis(sentence.index, tuple(by_pos[p] for p in positions), positions,
                            cycles, waves)


@dataclass(frozen=True)
class Expansion:
    readings: list
    overflow: bool


def expand_readings(sa, cap):
    """Cartesian product of per-word readings, truncated at ``cap``."""
    bad = [p for p, r in zip(sa.positions, sa.per_word) if r.status is Status.NOT_FOUND]
    if bad:
        raise CannotExpandError(bad)
    if cap < 0:
        raise ValueError("cap must be >= 0")
    product = itertools.product(*(r.readings for r in sa.per_word))
    out = list(itertools.islice(product, cap))
    overflow = next(product, None) is not None
    return Expansion(out, overflow)


def _fold_default(text):
    return text.lower()


def _dedupe(entries, fold):
    seen, out = set(), []
    for e in entries:
        key = (fold(e.surface), e.lemma, e.tags)
        if key not in seen:
            seen.add(key)
            out.append(e)
    return out


class OracleTable:
    """Direct surface-to-readings map; the flat-table reference with no cost model."""

    def __init__(self, entries, alphabet=None):
        self._fold = alphabet.fold if alphabet is not None else _fold_default
        table = {}
        for e in _dedupe(entries, self._fold):
            table.setdefault(self._fold(e.surface), []).append(
                Reading(e.lemma, e.tags, len(e.stem), len(e.ending)))
        self._table = {k: tuple(v) for k, v in table.items()}

    def lookup(self, word):
        readings = self._table.get(self._fold(word), ())
        return MorphResult(word, readings, Status.FOUND if readings else Status.NOT_FOUND)


def oracle_lookup(entries, word, alphabet=None):
    """One-off :class:`OracleTable` lookup."""
    return OracleTable(entries, alphabet).lookup(word)


def naive_scan_baseline(entries, word, alphabet=None, full_scan=False):
    """Linear scan over the lexicon.

    Returns ``(result, comparisons)``.  By default the scan halts at the first
    matching entry; ``full_scan`` examines every entry and collects all
    matches.
    """
    fold = alphabet.fold if alphabet is not None else _fold_default
    target = fold(word)
    comparisons = 0
    found = []
    seen = set()
    for e in entries:
        comparisons += 1
        if fold(e.surface) == target:
            key = (e.lemma, e.tags)
            if key not in seen:
                seen.add(key)
                found.append(Reading(e.lemma, e.tags, len(e.stem), len(e.ending)))
            if not full_scan:
                break
    status = Status.FOUND if found else Status.NOT_FOUND
    return MorphResult(word, tuple(found), status), comparisons


class MorphAnalyzer(BaseEstimator):
    """Estimator facade: ``fit`` compiles a lexicon, ``predict`` analyses words.

    Parameters mirror :func:`compile_lexicon` and :class:`AmpConfig`; after
    ``fit`` the compiled image is available as ``image_``.
    """

    def __init__(self, alphabet=None, scheme=None, max_word_len=32, max_ending_len=4,
                 block_count=4, strict=True, cycle_params=None):
        self.alphabet = alphabet
        self.scheme = scheme
        self.max_word_len = max_word_len
        self.max_ending_len = max_ending_len
        self.block_count = block_count
        self.strict = strict
        self.cycle_params = cycle_params

    def _config(self):
        return AmpConfig(self.block_count, self.max_word_len, self.max_ending_len,
                         cycles=self.cycle_params or CycleParams(), strict=self.strict)

    def fit(self, X, y=None):
        self.image_ = compile_lexicon(list(X), self.alphabet or Alphabet.ukrainian(), self.scheme,
                                      max_word_len=self.max_word_len,
                                      max_ending_len=self.max_ending_len)
        self.config_ = self._config()
        return self

    def predict(self, X):
        check_is_fitted(self, "image_")
        return [analyze_word(self.image_, w, self.config_) for w in X]

    def analyze_sentence(self, sentence, acc=None):
        check_is_fitted(self, "image_")
        return analyze_sentence(self.image_, sentence, acc, self.config_)


__all__ = [
    "AmpConfig", "CycleParams", "Expansion", "MorphAnalyzer", "MorphResult", "OracleTable", "Reading",
    "SentenceAnalysis", "Status", "STEPS", "analyze_sentence", "analyze_word",
    "expand_readings", "format_trace", "naive_scan_baseline", "oracle_lookup", "trace_cycles",
    "wave_cycles",
]
