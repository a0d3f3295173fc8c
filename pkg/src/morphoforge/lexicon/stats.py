"""Corpus statistics that drive the memory geometry.

Stem-length histograms, distinct symbol-combination counts per position
group, and the bell-shaped length model ``f(x) = A * exp(-(x - mu)**2 / w)``
with its coefficient of determination.
"""

from __future__ import annotations

import math
import warnings
from collections import Counter
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.optimize import least_squares
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ..exceptions import DegenerateDataError, InsufficientDataError, LexiconError, UnknownLetterError

DATA_WIDTH_SOFT_CAP = 20


class GroupMode(str, Enum):
    INDEPENDENT = "independent"
    OR_COLLECTED = "orCollected"


@dataclass(frozen=True)
class PositionGroup:
    start: int
    end: int
    mode: GroupMode = GroupMode.INDEPENDENT

    def __post_init__(self):
        object.__setattr__(self, "mode", GroupMode(self.mode))
        if self.start < 1 or self.end < self.start:
            raise LexiconError(f"bad position range {self.start}-{self.end}")

    @property
    def label(self):
        if self.start == self.end:
            return f"C{self.start}"
        return f"C{self.start}-C{self.end}"

    @property
    def width(self):
        return self.end - self.start + 1

    def key(self, codes):
        """Zero-padded symbol tuple of ``codes`` at this group's positions."""
        picked = [codes[p - 1] if p <= len(codes) else 0 for p in range(self.start, self.end + 1)]
        if self.mode is GroupMode.OR_COLLECTED:
            acc = 0
            for c in picked:
                acc |= c
            return (acc,)
        return tuple(picked)


@dataclass(frozen=True)
class CombinationScheme:
    groups: tuple[PositionGroup, ...]

    def __post_init__(self):
        groups = tuple(g if isinstance(g, PositionGroup) else PositionGroup(*g) for g in self.groups)
        object.__setattr__(self, "groups", groups)
        prev_end = 1
        for g in groups:
            if g.start < 2:
                raise LexiconError(f"group {g.label}: position 1 is handled by the segment decoder")
            if g.start <= prev_end:
                raise LexiconError(f"group {g.label} overlaps or is out of order")
            prev_end = g.end

    @classmethod
    def default(cls, max_word_len=32):
        groups = [PositionGroup(2, 4), PositionGroup(5, 7), PositionGroup(8, 10)]
        if max_word_len > 10:
            groups.append(PositionGroup(11, max_word_len, GroupMode.OR_COLLECTED))
        return cls(tuple(groups))

    @property
    def independent_reach(self):
        """Last position addressed independently without a gap from position 2."""
        reach = 1
        for g in self.groups:
            if g.mode is not GroupMode.INDEPENDENT or g.start != reach + 1:
                break
            reach = g.end
        return reach

    def keys(self, codes):
        return tuple(g.key(codes) for g in self.groups)


@dataclass(frozen=True)
class CombinationTable:
    group: PositionGroup
    index: dict[tuple[int, ...], int]

    @property
    def count(self):
        return len(self.index)

    @property
    def data_width_bits(self):
        return required_data_width(self.count) if self.index else 0


def required_data_width(count):
    """Smallest ``b`` with ``2**b >= count``."""
    if count < 1:
        raise ValueError("data width is undefined for an empty table")
    return (count - 1).bit_length()


def stem_length_histogram(entries):
    """Map stem length to number of entries; stemless entries are skipped."""
    return dict(sorted(Counter(len(e.stem) for e in entries if e.stem).items()))


def histogram_mean(hist):
    total = sum(hist.values())
    if not total:
        raise InsufficientDataError("empty histogram has no mean")
    return math.fsum(k * v for k, v in hist.items()) / total


def _stem_codes(entries, alphabet):
    for e in entries:
        if not e.stem:
            continue
        try:
            yield alphabet.encode(e.stem)
        except UnknownLetterError as exc:
            raise UnknownLetterError(exc.letter, f"entry {e.surface!r}") from None


def build_table(group, code_seqs):
    keys = {group.key(codes) for codes in code_seqs}
    return CombinationTable(group, {k: i for i, k in enumerate(sorted(keys))})


def combination_counts(entries, scheme, alphabet):
    """Per-group tables of distinct zero-padded symbol tuples over all stems."""
    seqs = list(_stem_codes(entries, alphabet))
    tables = tuple(build_table(g, seqs) for g in scheme.groups)
    for t in tables:
        if t.data_width_bits > DATA_WIDTH_SOFT_CAP:
            warnings.warn(f"group {t.group.label} needs {t.data_width_bits} data bits "
                          f"(> {DATA_WIDTH_SOFT_CAP})", stacklevel=2)
    return tables


def range_counts(entries, alphabet, ranges):
    """Distinct-tuple counts for arbitrary ranges, position 1 allowed.

    ``ranges`` is an iterable of ``(start, end)`` pairs; the result maps the
    range label (``"C2-C4"``) to its count, in input order.
    """
    seqs = list(_stem_codes(entries, alphabet))
    out = {}
    for start, end in ranges:
        g = PositionGroup(start, end)
        out[g.label] = len({g.key(c) for c in seqs})
    return out


# -- bell-shaped length model ------------------------------------------------

@dataclass(frozen=True)
class GaussianFit:
    amplitude: float
    center: float
    width: float
    r_squared: float = float("nan")

    def __post_init__(self):
        if not self.amplitude > 0 or not self.width > 0:
            raise ValueError("amplitude and width must be positive")

    def __call__(self, x):
        return eval_gaussian(self, x)

    def to_dict(self):
        return {"amplitude": self.amplitude, "center": self.center,
                "width": self.width, "rSquared": self.r_squared}


def eval_gaussian(fit, x):
    """``A * exp(-(x - mu)**2 / w)``; works on scalars and arrays."""
    if isinstance(x, (int, float)):
        return fit.amplitude * math.exp(-((x - fit.center) ** 2) / fit.width)
    x = np.asarray(x, dtype=float)
    return fit.amplitude * np.exp(-((x - fit.center) ** 2) / fit.width)


def r_squared(observed, predicted):
    """``1 - SSE/SST`` with ``SST = sum(Y**2) - sum(Y)**2 / n``."""
    y = [float(v) for v in observed]
    yhat = [float(v) for v in predicted]
    n = len(y)
    if n != len(yhat):
        raise ValueError(f"length mismatch: {n} observed vs {len(yhat)} predicted")
    if n < 2:
        raise InsufficientDataError("R² needs at least two observations")
    if max(y) == min(y):
        raise DegenerateDataError("constant observations: SST is zero")
    sse = math.fsum((a - b) ** 2 for a, b in zip(y, yhat))
    sst = math.fsum(v * v for v in y) - math.fsum(y) ** 2 / n
    if sst <= 0:
        raise DegenerateDataError("SST vanished under rounding")
    return 1.0 - sse / sst


def _as_xy(histogram):
    if isinstance(histogram, dict):
        items = sorted(histogram.items())
        x = np.array([k for k, _ in items], dtype=float)
        y = np.array([v for _, v in items], dtype=float)
    else:
        x, y = (np.asarray(a, dtype=float) for a in histogram)
    return x, y


def _residuals(p, x, y):
    a, mu, w = p
    return a * np.exp(-((x - mu) ** 2) / w) - y


def _jacobian(p, x, y):
    a, mu, w = p
    d = x - mu
    g = np.exp(-(d ** 2) / w)
    return np.column_stack([g, a * g * 2 * d / w, a * g * d ** 2 / w ** 2])


def fit_gaussian(histogram):
    """Least-squares fit of the fixed bell form to a length histogram.

    ``histogram`` is a ``{length: count}`` mapping or an ``(x, y)`` pair.
    """
    x, y = _as_xy(histogram)
    if np.count_nonzero(y) < 3:
        raise InsufficientDataError("need at least 3 nonzero histogram bins")
    pos = np.clip(y, 0, None)
    mu0 = float(np.sum(x * pos) / np.sum(pos))
    var0 = float(np.sum(pos * (x - mu0) ** 2) / np.sum(pos))
    starts = [(float(y.max()), mu0, max(2 * var0, 1e-3)),
              (float(y.max()), float(x[np.argmax(y)]), max(2 * var0, 1e-3))]
    best = None
    for p0 in starts:
        res = least_squares(_residuals, p0, jac=_jacobian, args=(x, y), method="trf",
                            bounds=([1e-300, -np.inf, 1e-12], [np.inf, np.inf, np.inf]),
                            x_scale="jac", ftol=1e-15, xtol=1e-15, gtol=1e-15, max_nfev=10000)
        if best is None or res.cost < best.cost:
            best = res
    a, mu, w = (float(v) for v in best.x)
    fit = GaussianFit(a, mu, w)
    return GaussianFit(a, mu, w, r_squared(y, eval_gaussian(fit, x)))


def sse(fit, histogram):
    x, y = _as_xy(histogram)
    return float(np.sum((eval_gaussian(fit, x) - y) ** 2))


class GaussianLengthModel(BaseEstimator):
    """Estimator wrapper: ``fit`` on lengths, ``predict`` counts, ``score`` is R².

    ``fit(X)`` accepts either a 1-D sequence of stem lengths (histogrammed
    internally) or, with ``y`` given, bin positions ``X`` and counts ``y``.
    """

    def fit(self, X, y=None):
        if y is None:
            hist = Counter(int(v) for v in np.ravel(X))
            x_arr, y_arr = _as_xy(dict(hist))
        else:
            x_arr, y_arr = np.ravel(np.asarray(X, dtype=float)), np.asarray(y, dtype=float)
        fit = fit_gaussian((x_arr, y_arr))
        self.fit_ = fit
        self.amplitude_, self.center_, self.width_ = fit.amplitude, fit.center, fit.width
        self.r_squared_ = fit.r_squared
        return self

    def predict(self, X):
        check_is_fitted(self, "fit_")
        return eval_gaussian(self.fit_, np.ravel(np.asarray(X, dtype=float)))

    def score(self, X, y):
        return r_squared(y, self.predict(X))
