"""Graphematic analysis: raw text to an indexed sentence/word-form hierarchy.

Segmentation is lossless.  Every character of the input lands either in a
token's ``surface`` or in the whitespace recorded after it (``space_after``)
or before the first token (``GraphematicStructure.leading``), so
:func:`join` reproduces the source exactly.
"""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass, field, replace
from enum import Enum
from pathlib import Path

from sklearn.base import BaseEstimator, TransformerMixin

from .exceptions import DecodeError, MorphoforgeError, StructureError

TERMINATORS = frozenset(".!?…")
APOSTROPHES = frozenset("'’ʼ")
HYPHENS = frozenset("-‐")


class TokenClass(str, Enum):
    WORD = "word"
    ACC = "accEntry"
    PUNCT = "punctuation"
    NUMBER = "number"


@dataclass(frozen=True)
class MorphRecord:
    lemma: str
    tags: tuple[str, ...]


@dataclass(frozen=True)
class AccEntry:
    surface: str
    record: MorphRecord
    case_sensitive: bool = False


class AccDictionary:
    """Abbreviations and special symbols whose readings are looked up, not computed."""

    def __init__(self, entries=()):
        self._exact = {}
        self._folded = {}
        for e in entries:
            table, key = (self._exact, e.surface) if e.case_sensitive else (self._folded, e.surface.casefold())
            if key in table:
                raise MorphoforgeError(f"duplicate ACC entry {e.surface!r}")
            table[key] = e
        lengths = {len(e.surface) for e in self.entries()}
        self._lengths = sorted(lengths, reverse=True)

    def entries(self):
        return [*self._exact.values(), *self._folded.values()]

    def __len__(self):
        return len(self._exact) + len(self._folded)

    def lookup(self, surface):
        """Return the :class:`AccEntry` for ``surface`` or ``None``."""
        hit = self._exact.get(surface)
        if hit is None:
            hit = self._folded.get(surface.casefold())
        return hit

    def __contains__(self, surface):
        return self.lookup(surface) is not None

    def candidates(self, text, pos):
        """Entries matching ``text`` at ``pos``, longest first."""
        for n in self._lengths:
            cand = text[pos:pos + n]
            if len(cand) == n and self.lookup(cand) is not None:
                yield cand

    @classmethod
    def parse(cls, text, source="<acc>"):
        """Parse ``surface<TAB>tag1,tag2[<TAB>case]`` lines.

        The optional third column ``case`` marks an entry as case-sensitive.
        The lemma of an ACC entry is its surface.
        """
        entries = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            if not raw.strip() or raw.startswith("#"):
                continue
            parts = raw.split("\t")
            if len(parts) not in (2, 3):
                raise MorphoforgeError(f"{source}:{lineno}: expected surface<TAB>tags")
            surface, tags = parts[0], tuple(t.strip() for t in parts[1].split(",") if t.strip())
            if not surface or not tags:
                raise MorphoforgeError(f"{source}:{lineno}: empty surface or tags")
            cs = len(parts) == 3 and parts[2].strip().lower() in ("case", "cs", "case-sensitive")
            entries.append(AccEntry(surface, MorphRecord(surface, tags), cs))
        return cls(entries)

    @classmethod
    def load(cls, path):
        path = Path(path)
        return cls.parse(path.read_text(encoding="utf-8"), str(path))


@dataclass(frozen=True)
class RawDocument:
    id: str
    content: str

    def __post_init__(self):
        if not self.id:
            raise StructureError("document id must be non-empty")


@dataclass(frozen=True)
class WordForm:
    position: int
    surface: str
    token_class: TokenClass
    span: tuple[int, int]
    space_after: str = ""
    index: str | None = None

    def __post_init__(self):
        if not self.surface:
            raise StructureError("empty word form")

    @property
    def is_word(self):
        return self.token_class in (TokenClass.WORD, TokenClass.ACC)


@dataclass(frozen=True)
class Sentence:
    index: int
    wordforms: tuple[WordForm, ...]
    terminated: bool = True
    dotted_index: str | None = None

    def __post_init__(self):
        if not self.wordforms:
            raise StructureError(f"sentence {self.index} has no word forms")
        for expected, wf in enumerate(self.wordforms, 1):
            if wf.position != expected:
                raise StructureError(
                    f"sentence {self.index}: word form at slot {expected} has position {wf.position}")
        for a, b in zip(self.wordforms, self.wordforms[1:]):
            if a.span[1] > b.span[0]:
                raise StructureError(f"sentence {self.index}: overlapping or unordered spans")


@dataclass(frozen=True)
class GraphematicStructure:
    doc_id: str
    sentences: tuple[Sentence, ...]
    leading: str = ""
    doc_index: int = 1
    sections: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        for a, b in zip(self.sentences, self.sentences[1:]):
            if b.index <= a.index:
                raise StructureError("sentence indices must be strictly increasing")
            if a.wordforms[-1].span[1] > b.wordforms[0].span[0]:
                raise StructureError("sentences overlap or are out of document order")

    def wordforms(self):
        for s in self.sentences:
            yield from s.wordforms


def decode_utf8(data):
    """Strict UTF-8 decoding that reports the offending byte offset."""
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise DecodeError(exc.start) from None


# -- tokenizer ---------------------------------------------------------------

def _is_letter(ch):
    return ch.isalpha() or unicodedata.category(ch).startswith("M")


def _scan_word(text, i):
    n = len(text)
    j = i + 1
    while j < n:
        ch = text[j]
        if _is_letter(ch):
            j += 1
        elif (ch in APOSTROPHES or ch in HYPHENS) and j + 1 < n and text[j + 1].isalpha():
            j += 2
        else:
            break
    return j


def _scan_number(text, i):
    n = len(text)
    j = i + 1
    while j < n:
        ch = text[j]
        if ch.isdigit():
            j += 1
        elif ch in ".," and j + 1 < n and text[j + 1].isdigit():
            j += 2
        else:
            break
    return j


def _at_boundary(text, start, end):
    before = text[start - 1] if start else " "
    after = text[end] if end < len(text) else " "
    edge = end > start and not text[end - 1].isalnum()
    return not before.isalnum() and (edge or not after.isalnum())


def tokenize(text, acc=None):
    """Yield ``(start, end, token_class)`` triples over ``text`` (character offsets)."""
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if acc is not None and len(acc):
            hit = next((c for c in acc.candidates(text, i) if _at_boundary(text, i, i + len(c))), None)
            if hit is not None:
                yield i, i + len(hit), TokenClass.ACC
                i += len(hit)
                continue
        if _is_letter(ch):
            j = _scan_word(text, i)
            yield i, j, TokenClass.WORD
        elif ch.isdigit():
            j = _scan_number(text, i)
            yield i, j, TokenClass.NUMBER
        elif ch in TERMINATORS:
            j = i + 1
            while j < n and text[j] in TERMINATORS:
                j += 1
            yield i, j, TokenClass.PUNCT
        else:
            j = i + 1
            yield i, j, TokenClass.PUNCT
        i = j


def _starts_upper(text, pos):
    return pos < len(text) and text[pos].isupper()


def segment(doc, acc=None, doc_index=1):
    """Split a document into sentences of word forms.

    A sentence ends after a run of ``. ! ? …`` when whitespace and an
    upper-case letter follow, at a blank line, and at end of text.  ACC
    entries are matched before boundary rules, so ``т.д.`` never splits a
    sentence.  A trailing sentence without a terminator is kept with
    ``terminated=False``.
    """
    if isinstance(doc, (bytes, bytearray)):
        doc = RawDocument("doc", decode_utf8(bytes(doc)))
    elif isinstance(doc, str):
        doc = RawDocument("doc", doc)
    text = doc.content
    acc = acc if acc is not None else AccDictionary()

    tokens = list(tokenize(text, acc))
    if not tokens:
        return GraphematicStructure(doc.id, (), text, doc_index)

    sentences, sections = [], [[]]
    current = []
    byte_pos = len(text[:tokens[0][0]].encode("utf-8"))
    for k, (start, end, cls) in enumerate(tokens):
        nxt = tokens[k + 1][0] if k + 1 < len(tokens) else len(text)
        surface, gap = text[start:end], text[end:nxt]
        blen = len(surface.encode("utf-8"))
        current.append(WordForm(len(current) + 1, surface, cls, (byte_pos, byte_pos + blen), gap))
        byte_pos += blen + len(gap.encode("utf-8"))

        paragraph_break = gap.count("\n") >= 2
        terminal = cls is TokenClass.PUNCT and surface[-1] in TERMINATORS
        last = k + 1 == len(tokens)
        if last or paragraph_break or (terminal and gap and _starts_upper(text, nxt)):
            idx = len(sentences) + 1
            sentences.append(Sentence(idx, tuple(current), terminated=terminal))
            sections[-1].append(idx)
            current = []
            if paragraph_break and not last:
                sections.append([])
    return GraphematicStructure(doc.id, tuple(sentences), text[:tokens[0][0]], doc_index,
                                tuple(tuple(s) for s in sections if s))


def index_structure(gs):
    """Attach dotted indices ``k.l`` to sentences and ``k.l.m`` to word forms."""
    k = gs.doc_index
    sentences = []
    for s in gs.sentences:
        prefix = f"{k}.{s.index}"
        wfs = tuple(replace(wf, index=f"{prefix}.{wf.position}") for wf in s.wordforms)
        sentences.append(replace(s, wordforms=wfs, dotted_index=prefix))
    return replace(gs, sentences=tuple(sentences))


def index_key(dotted):
    return tuple(int(p) for p in dotted.split("."))


def join(gs):
    """Reassemble the source text from a structure."""
    parts = [gs.leading]
    for wf in gs.wordforms():
        parts.append(wf.surface)
        parts.append(wf.space_after)
    return "".join(parts)


def split_streams(sentence, acc):
    """Partition a sentence's word tokens into the compute and ACC streams.

    Returns ``(compute, acc_list)``; ``acc_list`` pairs each ACC word form
    with its dictionary record.  Punctuation and numbers belong to neither.
    """
    if sentence.dotted_index is None:
        raise StructureError("split_streams needs an indexed sentence")
    compute, acc_list = [], []
    for wf in sentence.wordforms:
        if not wf.is_word:
            continue
        hit = acc.lookup(wf.surface) if acc is not None else None
        if hit is not None:
            acc_list.append((wf, hit.record))
        elif wf.token_class is TokenClass.WORD:
            compute.append(wf)
        else:
            raise StructureError(f"ACC token {wf.surface!r} is missing from the dictionary")
    return compute, acc_list


def structure_to_dict(gs):
    """JSON-ready dump of an indexed structure (see ``schemas/structure.json``)."""
    return {
        "docId": gs.doc_id,
        "docIndex": gs.doc_index,
        "leading": gs.leading,
        "sections": [list(s) for s in gs.sections],
        "sentences": [
            {
                "index": s.index,
                "dottedIndex": s.dotted_index,
                "terminated": s.terminated,
                "wordforms": [
                    {"position": wf.position, "index": wf.index, "surface": wf.surface,
                     "tokenClass": wf.token_class.value, "span": list(wf.span),
                     "spaceAfter": wf.space_after}
                    for wf in s.wordforms
                ],
            }
            for s in gs.sentences
        ],
    }


class GraphematicSegmenter(BaseEstimator, TransformerMixin):
    """Transformer from raw documents to indexed graphematic structures.

    ``transform`` accepts strings, bytes or :class:`RawDocument` objects and
    numbers them ``1..n`` in input order.
    """

    def __init__(self, acc=None, index=True):
        self.acc = acc
        self.index = index

    def fit(self, X=None, y=None):
        return self

    def transform(self, X):
        out = []
        for k, doc in enumerate(X, 1):
            if isinstance(doc, str):
                doc = RawDocument(f"doc{k}", doc)
            gs = segment(doc, self.acc, doc_index=k)
            out.append(index_structure(gs) if self.index else gs)
        return out
