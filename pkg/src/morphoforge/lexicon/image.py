"""Compiled lexicon image: decoders, ending/stem memories and result store.

The image mirrors the hardware address path.  The first letter picks a
segment; each position group of the stem is turned into a dense index by
its combination decoder; ``(segment, *indices)`` addresses a bucket of stem
cells.  Each stem cell stores its full stem string, so the final comparison
rejects address collisions.  Endings live in a separate memory addressed by
the zero-padded suffix codes.
"""

from __future__ import annotations

import struct
import warnings
from dataclasses import dataclass, field

from ..exceptions import ImageFormatError, LexiconError
from .alphabet import Alphabet
from .stats import CombinationScheme, CombinationTable, GroupMode, PositionGroup, build_table

MAGIC = b"AMP1"
FORMAT_VERSION = 1
RESERVED_SEGMENTS = 2


def sentinel_text(code):
    """Render a sentinel code as the character string it occupies in memory."""
    nbytes = max(1, (code.bit_length() + 7) // 8)
    return code.to_bytes(nbytes, "big").decode("latin-1")


@dataclass(frozen=True)
class Sentinels:
    word_end: int = 0x09
    result_end: int = 0x0D0A

    @property
    def word_end_text(self):
        return sentinel_text(self.word_end)

    @property
    def result_end_text(self):
        return sentinel_text(self.result_end)


@dataclass(frozen=True)
class StemEntry:
    ending: str
    paradigm_class: str
    result_addr: int


@dataclass(frozen=True)
class StemCell:
    stem: str
    entries: tuple[StemEntry, ...]


@dataclass(frozen=True)
class EndingCell:
    """One ending-memory word; an absent key reads as NOP."""

    consumed_len: int
    paradigm_classes: tuple[str, ...] = ()
    standalone: tuple[int, ...] = ()

    def __post_init__(self):
        if self.consumed_len < 1:
            raise LexiconError("a non-NOP ending cell consumes at least one symbol")
        if not self.paradigm_classes and not self.standalone:
            raise LexiconError("ending cell without payload; leave the address as NOP")

    @property
    def kind(self):
        if self.paradigm_classes and self.standalone:
            return "ending+standaloneWord"
        return "ending" if self.paradigm_classes else "standaloneWord"


@dataclass(frozen=True)
class MemoryImage:
    alphabet: Alphabet
    scheme: CombinationScheme
    max_word_len: int
    max_ending_len: int
    first_letter_decoder: dict[str, int]
    tables: tuple[CombinationTable, ...]
    ending_memory: dict[tuple[int, ...], EndingCell]
    stem_memory: dict[tuple[int, ...], tuple[StemCell, ...]]
    result_store: tuple[str, ...]
    sentinels: Sentinels = Sentinels()
    reserved_segments: int = RESERVED_SEGMENTS
    duplicates: int = field(default=0, compare=False)

    @property
    def segment_count(self):
        return len(self.alphabet) + self.reserved_segments

    @property
    def segment_width(self):
        return max(1, (self.segment_count - 1).bit_length())

    @property
    def stem_cell_count(self):
        return sum(len(b) for b in self.stem_memory.values())

    def ending_key(self, suffix):
        codes = self.alphabet.encode(suffix)
        return (0,) * (self.max_ending_len - len(codes)) + codes

    def ending_cell(self, suffix):
        """Ending-memory cell for a folded suffix, or ``None`` for NOP."""
        return self.ending_memory.get(self.ending_key(suffix))

    def stem_address(self, stem):
        """Bucket address of a folded stem, or ``None`` when a decoder misses."""
        codes = self.alphabet.encode(stem)
        addr = [self.first_letter_decoder[stem[0]]]
        for table in self.tables:
            idx = table.index.get(table.group.key(codes))
            if idx is None:
                return None
            addr.append(idx)
        return tuple(addr)

    def stem_bucket(self, stem):
        addr = self.stem_address(stem)
        return () if addr is None else self.stem_memory.get(addr, ())

    def read_result(self, addr):
        """Return ``(lemma, tags, words_read)`` for the block at ``addr``.

        ``words_read`` counts the terminating sentinel word.
        """
        end = self.sentinels.result_end_text
        store = self.result_store
        words = []
        i = addr
        while store[i] != end:
            words.append(store[i])
            i += 1
        return words[0], tuple(words[1:]), len(words) + 1


def _fold_entry(entry, alphabet):
    where = f"entry {entry.surface!r}"
    return alphabet.fold(entry.stem, where), alphabet.fold(entry.ending, where)


def compile_lexicon(entries, alphabet=None, scheme=None, sentinels=None,
                    max_word_len=32, max_ending_len=4):
    """Compile lexicon entries into a :class:`MemoryImage`.

    Entries sharing folded surface, lemma and tags are merged; the number of
    dropped duplicates is kept on ``image.duplicates`` and reported as a
    warning.
    """
    alphabet = alphabet or Alphabet.ukrainian()
    scheme = scheme or CombinationScheme.default(max_word_len)
    sentinels = sentinels or Sentinels()
    end_text = sentinels.result_end_text
    if sentinels.word_end_text in alphabet:
        raise LexiconError("word-end sentinel collides with an alphabet letter")
    if scheme.groups and scheme.groups[-1].end > max_word_len:
        raise LexiconError("combination scheme reaches beyond max_word_len")

    folded = []
    seen = set()
    dupes = 0
    for e in entries:
        stem, ending = _fold_entry(e, alphabet)
        surface = stem + ending
        if len(surface) > max_word_len:
            raise LexiconError(f"entry {e.surface!r} is longer than {max_word_len} symbols")
        if len(ending) > max_ending_len:
            raise LexiconError(
                f"entry {e.surface!r}: ending of {len(ending)} symbols exceeds max_ending_len={max_ending_len}")
        if not e.lemma:
            raise LexiconError(f"entry {e.surface!r}: empty lemma")
        for word in (e.lemma, *e.tags):
            if end_text in word:
                raise LexiconError(f"entry {e.surface!r}: payload contains the result-end sentinel")
        key = (surface, e.lemma, e.tags)
        if key in seen:
            dupes += 1
            continue
        seen.add(key)
        folded.append((stem, ending, e))
    if dupes:
        warnings.warn(f"dropped {dupes} duplicate lexicon entries", stacklevel=2)

    folded.sort(key=lambda t: (t[0], t[1], t[2].lemma, t[2].tag_string, t[2].paradigm_class))

    store = []
    addrs = []
    for _, _, e in folded:
        addrs.append(len(store))
        store.append(e.lemma)
        store.extend(e.tags)
        store.append(end_text)

    stem_codes = [alphabet.encode(stem) for stem, _, _ in folded if stem]
    tables = tuple(build_table(g, stem_codes) for g in scheme.groups)
    decoder = {c: i for i, c in enumerate(alphabet.letters)}

    endings = {}
    cells = {}
    image = MemoryImage(alphabet, scheme, max_word_len, max_ending_len, decoder, tables,
                        {}, {}, (), sentinels)
    for (stem, ending, e), addr in zip(folded, addrs):
        if ending:
            slot = endings.setdefault(image.ending_key(ending), [len(ending), set(), []])
            if stem:
                slot[1].add(e.paradigm_class)
            else:
                slot[2].append(addr)
        if stem:
            bucket = cells.setdefault(image.stem_address(stem), {})
            bucket.setdefault(stem, []).append(
                ((e.lemma, e.tag_string, ending, e.paradigm_class),
                 StemEntry(ending, e.paradigm_class, addr)))

    ending_memory = {k: EndingCell(n, tuple(sorted(cls)), tuple(sa))
                     for k, (n, cls, sa) in sorted(endings.items())}
    stem_memory = {}
    for addr_key in sorted(cells):
        bucket = cells[addr_key]
        stem_memory[addr_key] = tuple(
            StemCell(stem, tuple(se for _, se in sorted(bucket[stem], key=lambda t: t[0])))
            for stem in sorted(bucket))
    return MemoryImage(alphabet, scheme, max_word_len, max_ending_len, decoder, tables,
                       ending_memory, stem_memory, tuple(store), sentinels,
                       duplicates=dupes)


# -- binary format -----------------------------------------------------------
#
# All integers little-endian.  Layout:
#   "AMP1" | u16 version | 7 x (u32 byte length | section payload)
# Sections, in order: alphabet, scheme, decoders, ending memory, stem memory,
# result store, sentinels.  Strings are u16 byte length + UTF-8.

_MODES = {GroupMode.INDEPENDENT: 0, GroupMode.OR_COLLECTED: 1}
_MODES_INV = {v: k for k, v in _MODES.items()}


class _Writer:
    def __init__(self):
        self.parts = []

    def u8(self, v):
        self.parts.append(struct.pack("<B", v))

    def u16(self, v):
        self.parts.append(struct.pack("<H", v))

    def u32(self, v):
        self.parts.append(struct.pack("<I", v))

    def s(self, text):
        raw = text.encode("utf-8")
        self.u16(len(raw))
        self.parts.append(raw)

    def codes(self, seq, wide=False):
        self.u8(len(seq))
        for c in seq:
            (self.u32 if wide else self.u8)(c)

    def getvalue(self):
        return b"".join(self.parts)


class _Reader:
    def __init__(self, data):
        self.data = data
        self.pos = 0

    def _take(self, fmt):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.data):
            raise ImageFormatError(f"truncated image at byte {self.pos}")
        (v,) = struct.unpack_from(fmt, self.data, self.pos)
        self.pos += size
        return v

    def u8(self):
        return self._take("<B")

    def u16(self):
        return self._take("<H")

    def u32(self):
        return self._take("<I")

    def s(self):
        n = self.u16()
        if self.pos + n > len(self.data):
            raise ImageFormatError(f"truncated string at byte {self.pos}")
        raw = self.data[self.pos:self.pos + n]
        self.pos += n
        try:
            return raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ImageFormatError(f"bad UTF-8 in image at byte {self.pos - n + exc.start}") from None

    def codes(self, wide=False):
        n = self.u8()
        return tuple((self.u32 if wide else self.u8)() for _ in range(n))

    def done(self):
        return self.pos == len(self.data)


def _sections(img):
    alpha = _Writer()
    alpha.u16(len(img.alphabet.letters))
    for c in img.alphabet.letters:
        alpha.s(c)
        alpha.u8(img.alphabet.codes[c])
    folds = sorted((s, d) for s, d in img.alphabet.fold_map.items() if s != d)
    alpha.u16(len(folds))
    for s, d in folds:
        alpha.s(s)
        alpha.s(d)

    scheme = _Writer()
    scheme.u16(img.max_word_len)
    scheme.u16(img.max_ending_len)
    scheme.u16(img.reserved_segments)
    scheme.u16(len(img.scheme.groups))
    for g in img.scheme.groups:
        scheme.u16(g.start)
        scheme.u16(g.end)
        scheme.u8(_MODES[g.mode])

    dec = _Writer()
    items = sorted(img.first_letter_decoder.items(), key=lambda kv: (kv[1], kv[0]))
    dec.u16(len(items))
    for letter, seg in items:
        dec.s(letter)
        dec.u16(seg)
    for t in img.tables:
        dec.u32(t.count)
        for key, _ in sorted(t.index.items(), key=lambda kv: kv[1]):
            dec.codes(key)

    ending = _Writer()
    ending.u32(len(img.ending_memory))
    for key in sorted(img.ending_memory):
        cell = img.ending_memory[key]
        ending.codes(key)
        ending.u8(cell.consumed_len)
        ending.u16(len(cell.paradigm_classes))
        for pc in cell.paradigm_classes:
            ending.s(pc)
        ending.u16(len(cell.standalone))
        for a in cell.standalone:
            ending.u32(a)

    stem = _Writer()
    stem.u32(len(img.stem_memory))
    for key in sorted(img.stem_memory):
        stem.codes(key, wide=True)
        bucket = img.stem_memory[key]
        stem.u16(len(bucket))
        for cell in bucket:
            stem.s(cell.stem)
            stem.u16(len(cell.entries))
            for se in cell.entries:
                stem.s(se.ending)
                stem.s(se.paradigm_class)
                stem.u32(se.result_addr)

    store = _Writer()
    store.u32(len(img.result_store))
    for w in img.result_store:
        store.s(w)

    sent = _Writer()
    sent.u32(img.sentinels.word_end)
    sent.u32(img.sentinels.result_end)
    return [alpha, scheme, dec, ending, stem, store, sent]


def serialize(img):
    out = _Writer()
    out.parts.append(MAGIC)
    out.u16(FORMAT_VERSION)
    for sec in _sections(img):
        payload = sec.getvalue()
        out.u32(len(payload))
        out.parts.append(payload)
    return out.getvalue()


def deserialize(data):
    if data[:4] != MAGIC:
        raise ImageFormatError("not a memory image (bad magic)")
    head = _Reader(data[4:6])
    version = head.u16()
    if version != FORMAT_VERSION:
        raise ImageFormatError(f"unsupported image version {version}")
    pos = 6
    secs = []
    for _ in range(7):
        if pos + 4 > len(data):
            raise ImageFormatError(f"truncated section header at byte {pos}")
        (n,) = struct.unpack_from("<I", data, pos)
        pos += 4
        if pos + n > len(data):
            raise ImageFormatError(f"truncated section at byte {pos}")
        secs.append(_Reader(data[pos:pos + n]))
        pos += n
    if pos != len(data):
        raise ImageFormatError(f"{len(data) - pos} trailing bytes after last section")
    alpha, scheme_r, dec, ending, stem, store, sent = secs

    letters, codes = [], {}
    for _ in range(alpha.u16()):
        c = alpha.s()
        letters.append(c)
        codes[c] = alpha.u8()
    folds = {}
    for _ in range(alpha.u16()):
        s = alpha.s()
        folds[s] = alpha.s()
    alphabet = Alphabet(tuple(letters), codes, folds)

    max_word_len, max_ending_len, reserved = scheme_r.u16(), scheme_r.u16(), scheme_r.u16()
    groups = []
    for _ in range(scheme_r.u16()):
        start, end, mode = scheme_r.u16(), scheme_r.u16(), scheme_r.u8()
        if mode not in _MODES_INV:
            raise ImageFormatError(f"unknown group mode {mode}")
        groups.append(PositionGroup(start, end, _MODES_INV[mode]))
    scheme = CombinationScheme(tuple(groups))

    decoder = {}
    for _ in range(dec.u16()):
        letter = dec.s()
        decoder[letter] = dec.u16()
    tables = []
    for g in scheme.groups:
        n = dec.u32()
        tables.append(CombinationTable(g, {dec.codes(): i for i in range(n)}))

    ending_memory = {}
    for _ in range(ending.u32()):
        key = ending.codes()
        consumed = ending.u8()
        classes = tuple(ending.s() for _ in range(ending.u16()))
        standalone = tuple(ending.u32() for _ in range(ending.u16()))
        ending_memory[key] = EndingCell(consumed, classes, standalone)

    stem_memory = {}
    for _ in range(stem.u32()):
        key = stem.codes(wide=True)
        bucket = []
        for _ in range(stem.u16()):
            s = stem.s()
            entries = []
            for _ in range(stem.u16()):
                e, pc, a = stem.s(), stem.s(), stem.u32()
                entries.append(StemEntry(e, pc, a))
            bucket.append(StemCell(s, tuple(entries)))
        stem_memory[key] = tuple(bucket)

    result_store = tuple(store.s() for _ in range(store.u32()))
    sentinels = Sentinels(sent.u32(), sent.u32())
    for name, r in zip(("alphabet", "scheme", "decoders", "ending", "stem", "results", "sentinels"), secs):
        if not r.done():
            raise ImageFormatError(f"{name} section has unread bytes")
    return MemoryImage(alphabet, scheme, max_word_len, max_ending_len, decoder, tuple(tables),
                       ending_memory, stem_memory, result_store, sentinels, reserved)


def save_image(img, path):
    from .._io import atomic_write_bytes
    atomic_write_bytes(path, serialize(img))


def load_image(path):
    with open(path, "rb") as fh:
        return deserialize(fh.read())
