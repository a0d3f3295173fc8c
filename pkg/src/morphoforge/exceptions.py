"""Exception types raised across morphoforge.

Every data-level failure derives from :class:`MorphoforgeError` so that
callers (and the CLI) can separate bad input from programming errors.
"""


class MorphoforgeError(Exception):
    """Base class for all data errors."""


class DecodeError(MorphoforgeError, ValueError):
    def __init__(self, offset, reason="invalid UTF-8"):
        self.offset = offset
        super().__init__(f"{reason} at byte offset {offset}")


class StructureError(MorphoforgeError, ValueError):
    """A structural invariant (ordering, membership, connectivity) is broken."""


class UnknownLetterError(MorphoforgeError, ValueError):
    def __init__(self, letter, where=None):
        self.letter = letter
        self.where = where
        msg = f"letter {letter!r} (U+{ord(letter):04X}) is not in the alphabet"
        if where is not None:
            msg += f" ({where})"
        super().__init__(msg)


class WordLengthError(MorphoforgeError, ValueError):
    pass


class LexiconError(MorphoforgeError, ValueError):
    pass


class InsufficientDataError(MorphoforgeError, ValueError):
    pass


class DegenerateDataError(MorphoforgeError, ValueError):
    pass


class ImageFormatError(MorphoforgeError, ValueError):
    pass


class CannotExpandError(MorphoforgeError, ValueError):
    def __init__(self, positions):
        self.positions = tuple(positions)
        super().__init__(
            "cannot expand sentence readings; unanalysed words at positions "
            + ", ".join(map(str, self.positions)))


class LevelConflictError(StructureError):
    pass


class UnitMismatchError(MorphoforgeError, ValueError):
    pass


class ConfigError(MorphoforgeError, ValueError):
    pass
