"""Lexicon entries and the TSV lexicon format."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ..exceptions import LexiconError

FIELDS = ("surface", "stem", "ending", "lemma", "tags", "paradigm_class")


@dataclass(frozen=True, order=True)
class LexiconEntry:
    surface: str
    stem: str
    ending: str
    lemma: str
    tags: tuple[str, ...]
    paradigm_class: str = ""

    def __post_init__(self):
        if not self.surface:
            raise LexiconError("entry surface must be non-empty")
        if self.stem + self.ending != self.surface:
            raise LexiconError(
                f"stem {self.stem!r} + ending {self.ending!r} != surface {self.surface!r}")
        tags = tuple(sorted(set(self.tags)))
        if not tags or any(not t for t in tags):
            raise LexiconError(f"entry {self.surface!r} needs at least one non-empty tag")
        object.__setattr__(self, "tags", tags)

    @property
    def tag_string(self):
        return ",".join(self.tags)

    @property
    def standalone(self):
        """True for a word with no stem (the whole word is an ending)."""
        return not self.stem

    def to_row(self):
        return "\t".join((self.surface, self.stem, self.ending, self.lemma,
                          self.tag_string, self.paradigm_class))


def parse_lexicon(text, source="<lexicon>"):
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip() or raw.startswith("#"):
            continue
        parts = raw.split("\t")
        if len(parts) == 5:
            parts.append("")
        if len(parts) != 6:
            raise LexiconError(f"{source}:{lineno}: expected 6 tab-separated fields, got {len(parts)}")
        surface, stem, ending, lemma, tags, pclass = parts
        try:
            entries.append(LexiconEntry(surface, stem, ending, lemma,
                                        tuple(t.strip() for t in tags.split(",")), pclass))
        except LexiconError as exc:
            raise LexiconError(f"{source}:{lineno}: {exc}") from None
    return entries


def load_lexicon(path):
    path = Path(path)
    return parse_lexicon(path.read_text(encoding="utf-8"), source=str(path))


def dump_lexicon(entries):
    header = "# " + "\t".join(FIELDS)
    return "\n".join([header, *(e.to_row() for e in entries)]) + "\n"
