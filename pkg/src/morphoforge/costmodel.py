"""Cost calculus: description complexity, memory sizing and Pareto selection."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from .exceptions import DegenerateDataError, MorphoforgeError, UnitMismatchError
from .lexicon.alphabet import CODE_BITS
from .lexicon.stats import GroupMode, required_data_width

# -- description complexity --------------------------------------------------


@dataclass(frozen=True)
class OperatorSpec:
    type_id: str
    code_width: int
    count: int
    level: int = 0

    def __post_init__(self):
        if self.code_width < 1:
            raise ValueError(f"operator {self.type_id}: code width must be >= 1")
        if self.count < 0 or self.level < 0:
            raise ValueError(f"operator {self.type_id}: count and level must be >= 0")


@dataclass(frozen=True)
class AlgorithmDescription:
    per_level: dict[int, tuple[OperatorSpec, ...]]

    def __post_init__(self):
        for level, ops in self.per_level.items():
            if sum(op.count for op in ops) < 1:
                raise ValueError(f"level {level} has no operator occurrences")

    @classmethod
    def from_ops(cls, ops):
        levels = {}
        for op in ops:
            levels.setdefault(op.level, []).append(op)
        return cls({k: tuple(v) for k, v in sorted(levels.items())})


def description_complexity(ops):
    """Total code length: sum of ``count * code_width`` over operator types."""
    ops = list(ops)
    if not ops:
        raise ValueError("empty operator list")
    return sum(op.count * op.code_width for op in ops)


def algorithm_length(ops):
    return sum(op.count for op in ops)


def hierarchical_complexity(alg):
    """Per-level complexities and their total, as ``(dict, total)``."""
    per = {level: description_complexity(ops) for level, ops in sorted(alg.per_level.items())}
    return per, sum(per.values())


def ratio(q_alg, q_ops):
    """Relative complexity of an algorithm against its operator set."""
    if not q_ops:
        raise DegenerateDataError("operator complexity is zero")
    return Fraction(q_alg, q_ops)


def relative_complexity(alg, level):
    """Level ``l`` complexity over the summed complexity of levels ``0..l-1``."""
    per, _ = hierarchical_complexity(alg)
    if level not in per:
        raise ValueError(f"level {level} is not declared")
    below = sum(q for j, q in per.items() if j < level)
    if below == 0:
        raise DegenerateDataError(f"no lower-level complexity under level {level}")
    return Fraction(per[level], below)


def micro_complexity(micro_ops):
    """Absolute complexity of a microinstruction: sum of its micro-operation costs."""
    micro_ops = list(micro_ops)
    if not micro_ops:
        raise ValueError("a microinstruction has at least one micro-operation")
    if any(z < 0 for z in micro_ops):
        raise ValueError("micro-operation complexity must be >= 0")
    return sum(micro_ops)


def table_complexity(arg_bits, value_bits):
    """Bits needed to tabulate a map from ``arg_bits``-bit inputs to ``value_bits``-bit outputs."""
    return (1 << arg_bits) * value_bits


def merge_occurrences(ops, take, composite):
    """Replace operator occurrences by a single composite occurrence.

    ``take`` maps ``type_id`` to the number of occurrences removed; the
    composite operator is appended with its own code width and count 1.
    """
    by_id = {op.type_id: op for op in ops}
    out = []
    for op in ops:
        k = take.get(op.type_id, 0)
        if k > op.count:
            raise ValueError(f"cannot take {k} occurrences of {op.type_id} (only {op.count})")
        if op.count - k:
            out.append(OperatorSpec(op.type_id, op.code_width, op.count - k, op.level))
    missing = set(take) - set(by_id)
    if missing:
        raise ValueError(f"unknown operator types {sorted(missing)}")
    out.append(OperatorSpec(composite.type_id, composite.code_width, 1, composite.level))
    return out


# -- Pareto selection --------------------------------------------------------


@dataclass(frozen=True)
class RealizationPoint:
    id: str
    time: float
    hardware: float
    time_unit: str = ""
    hardware_unit: str = ""

    def __post_init__(self):
        if not (self.time > 0 and self.hardware > 0):
            raise ValueError(f"point {self.id}: time and hardware must be positive")


@dataclass(frozen=True)
class WeightVector:
    c: tuple[float, ...]
    b: tuple[float, ...]
    t0: float
    q0: float

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(self.c))
        object.__setattr__(self, "b", tuple(self.b))
        if len(self.c) != len(self.b):
            raise ValueError("c and b must have equal length")
        if any(v < 0 for v in (*self.c, *self.b)):
            raise ValueError("weights must be >= 0")
        if abs(math.fsum(self.c) - 1) > 1e-9 or abs(math.fsum(self.b) - 1) > 1e-9:
            raise ValueError("c and b must each sum to 1")
        if not (self.t0 > 0 and self.q0 > 0):
            raise ValueError("reference T0 and Q0 must be positive")

    @classmethod
    def uniform(cls, m, t0, q0):
        return cls((1 / m,) * m, (1 / m,) * m, t0, q0)

    @property
    def k(self):
        return tuple(ci * bi for ci, bi in zip(self.c, self.b))


def _check_units(points):
    units = {(p.time_unit, p.hardware_unit) for p in points}
    if len(units) > 1:
        raise UnitMismatchError(f"points mix units: {sorted(units)}")


def dominates(p, q):
    return (p.time <= q.time and p.hardware <= q.hardware
            and (p.time < q.time or p.hardware < q.hardware))


def pareto_front(points):
    """Non-dominated points sorted by time ascending (hardware descending).

    Coincident points collapse to the one with the smallest id.
    """
    points = list(points)
    if not points:
        raise ValueError("need at least one point")
    _check_units(points)
    ordered = sorted(points, key=lambda p: (p.time, p.hardware, p.id))
    front = []
    best_q = math.inf
    for p in ordered:
        if p.hardware < best_q:
            front.append(p)
            best_q = p.hardware
    return front


@dataclass(frozen=True)
class Selection:
    id: str
    value: float
    scores: tuple[float, ...]
    k: tuple[float, ...] = field(default=())


def selection_scores(points, weights):
    return tuple(
        (c * p.hardware + b * p.time) / (c * weights.q0 + b * weights.t0)
        for p, c, b in zip(points, weights.c, weights.b))


def select_realization(points, weights):
    """Pick the realization minimising the normalised weighted functional.

    Each point ``r`` scores ``(c_r Q_r + b_r T_r) / (c_r Q_0 + b_r T_0)``;
    the lowest score wins, ties going to the earlier point.
    """
    points = list(points)
    if len(points) != len(weights.c):
        raise ValueError(f"{len(points)} points but {len(weights.c)} weights")
    if not points:
        raise ValueError("need at least one point")
    _check_units(points)
    for c, b in zip(weights.c, weights.b):
        if c == 0 and b == 0:
            raise DegenerateDataError("a point has both weights zero")
    scores = selection_scores(points, weights)
    best = min(range(len(points)), key=lambda i: (scores[i], i))
    k = weights.k
    if max(k) - min(k) > 1e-12:
        warnings.warn("c_r * b_r is not constant across points", stacklevel=2)
    return Selection(points[best].id, scores[best], scores, k)


# -- memory sizing -----------------------------------------------------------

RESULT_WORD_BITS = 16


@dataclass(frozen=True)
class MemoryCostBreakdown:
    levels: dict[str, int]
    ideal_exponent: int

    @property
    def total(self):
        return sum(self.levels.values())

    @property
    def ideal_bits(self):
        return f"2^{self.ideal_exponent}"


def ideal_exponent(max_word_len, symbol_bits=8):
    """Address width of a flat table indexed by whole words."""
    return symbol_bits * max_word_len


def result_word_bits(word):
    nbytes = len(word.encode("utf-8"))
    return max(1, math.ceil(nbytes * 8 / RESULT_WORD_BITS)) * RESULT_WORD_BITS


def memory_cost(image):
    """Bit cost of each memory level of a compiled image.

    Decoders and the ending memory are full tables (every address exists);
    the stem memory holds one row per stored stem (stem symbols plus the
    result pointer); the result store is counted in 16-bit words.
    """
    result_len = len(image.result_store)
    ptr = required_data_width(result_len) if result_len else 0
    levels = {}
    levels["firstLetterDecoder"] = (1 << CODE_BITS) * image.segment_width
    combo = 0
    for t in image.tables:
        addr = CODE_BITS * (1 if t.group.mode is GroupMode.OR_COLLECTED else t.group.width)
        combo += (1 << addr) * t.data_width_bits
    levels["combinationDecoders"] = combo
    classes = {c for cell in image.ending_memory.values() for c in cell.paradigm_classes}
    cell_bits = 1 + (required_data_width(len(classes) + 1) if classes else 0) + ptr
    levels["endingMemory"] = (1 << (CODE_BITS * image.max_ending_len)) * cell_bits
    row = CODE_BITS * image.max_word_len + ptr
    levels["stemMemory"] = sum(len(cell.entries) for bucket in image.stem_memory.values()
                               for cell in bucket) * row
    levels["resultStore"] = sum(result_word_bits(w) for w in image.result_store)
    return MemoryCostBreakdown(levels, ideal_exponent(image.max_word_len))


def bram_count(missing_addr_bits, data_bits):
    """Block RAMs for a decoder: ``2**missing`` per data bit."""
    if missing_addr_bits < 0 or data_bits < 1:
        raise MorphoforgeError("need missing_addr_bits >= 0 and data_bits >= 1")
    return (1 << missing_addr_bits) * data_bits


def decoder_brams(symbols, data_bits, bram_addr_bits=15, symbol_bits=CODE_BITS):
    """BRAMs for a combination decoder over ``symbols`` positions."""
    missing = max(0, symbols * symbol_bits - bram_addr_bits)
    return bram_count(missing, data_bits)
