"""Letter inventory with reduced 6-bit codes and case folding."""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from ..exceptions import LexiconError, UnknownLetterError

CODE_BITS = 6
MAX_CODE = (1 << CODE_BITS) - 1  # code 0 is the zero-padding symbol


@dataclass(frozen=True)
class Alphabet:
    """Ordered letters, their reduced codes and a fold map.

    ``letters`` holds the canonical letters (those that fold to themselves)
    in code order.  ``fold_map`` maps every accepted character, canonical or
    not, to its canonical letter; ``codes`` maps canonical letters to codes
    in ``1..63``.
    """

    letters: tuple[str, ...]
    codes: dict[str, int]
    fold_map: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.letters) > MAX_CODE:
            raise LexiconError(
                f"alphabet has {len(self.letters)} letters; at most {MAX_CODE} fit in {CODE_BITS} bits")
        if set(self.letters) != set(self.codes):
            raise LexiconError("every canonical letter needs exactly one code")
        seen = {}
        for letter in self.letters:
            if len(letter) != 1:
                raise LexiconError(f"letter {letter!r} must be a single character")
            code = self.codes[letter]
            if not 1 <= code <= MAX_CODE:
                raise LexiconError(f"code {code} for {letter!r} outside 1..{MAX_CODE}")
            if code in seen:
                raise LexiconError(f"code {code} shared by {seen[code]!r} and {letter!r}")
            seen[code] = letter
        fm = dict(self.fold_map)
        for letter in self.letters:
            fm.setdefault(letter, letter)
            if fm[letter] != letter:
                raise LexiconError(f"canonical letter {letter!r} must fold to itself")
        for src, dst in fm.items():
            if dst not in self.codes:
                raise LexiconError(f"{src!r} folds to {dst!r}, which has no code")
        object.__setattr__(self, "fold_map", fm)

    @classmethod
    def from_letters(cls, letters, fold_upper=True):
        letters = tuple(dict.fromkeys(letters))
        codes = {c: i for i, c in enumerate(letters, 1)}
        fm = {}
        if fold_upper:
            for c in letters:
                up = c.upper()
                if len(up) == 1 and up != c and up not in codes:
                    fm[up] = c
        return cls(letters, codes, fm)

    @classmethod
    def parse(cls, text):
        """Parse ``letter<TAB>code<TAB>foldTarget`` lines."""
        codes, folds, order = {}, {}, []
        for lineno, raw in enumerate(text.splitlines(), 1):
            if not raw.strip() or raw.startswith("#"):
                continue
            parts = raw.split("\t")
            if len(parts) != 3:
                raise LexiconError(f"alphabet line {lineno}: expected 3 tab-separated fields")
            letter, code, target = parts
            try:
                code = int(code)
            except ValueError:
                raise LexiconError(f"alphabet line {lineno}: bad code {code!r}") from None
            if letter == target:
                if letter in codes:
                    raise LexiconError(f"alphabet line {lineno}: duplicate letter {letter!r}")
                codes[letter] = code
                order.append(letter)
            else:
                folds[letter] = (target, code, lineno)
        for letter, (target, code, lineno) in folds.items():
            if target not in codes:
                raise LexiconError(f"alphabet line {lineno}: fold target {target!r} undefined")
            if codes[target] != code:
                raise LexiconError(
                    f"alphabet line {lineno}: {letter!r} code {code} differs from its fold target's")
        order.sort(key=codes.__getitem__)
        return cls(tuple(order), codes, {k: v[0] for k, v in folds.items()})

    @classmethod
    def load(cls, path):
        return cls.parse(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def ukrainian(cls):
        text = resources.files("morphoforge.data").joinpath("uk_alphabet.tsv").read_text("utf-8")
        return cls.parse(text)

    def dumps(self):
        lines = [f"{c}\t{self.codes[c]}\t{c}" for c in self.letters]
        lines += [f"{s}\t{self.codes[d]}\t{d}" for s, d in sorted(self.fold_map.items()) if s != d]
        return "\n".join(lines) + "\n"

    def __len__(self):
        return len(self.letters)

    def __contains__(self, ch):
        return ch in self.fold_map

    def fold(self, text, where=None):
        """Case-fold ``text`` letter by letter; unknown letters raise."""
        fm = self.fold_map
        try:
            return "".join([fm[c] for c in text])
        except KeyError:
            bad = next(c for c in text if c not in fm)
            raise UnknownLetterError(bad, where) from None

    def code_of(self, letter):
        try:
            return self.codes[self.fold_map[letter]]
        except KeyError:
            raise UnknownLetterError(letter) from None

    def encode(self, text, where=None):
        codes = self.codes
        return tuple(codes[c] for c in self.fold(text, where))
