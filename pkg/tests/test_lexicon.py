import itertools
import math
import random
import warnings

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from morphoforge.exceptions import (DegenerateDataError, InsufficientDataError, LexiconError,
                                    UnknownLetterError)
from morphoforge.lexicon import (Alphabet, CombinationScheme, GaussianFit, GaussianLengthModel,
                                 LexiconEntry, dump_lexicon, fit_gaussian, histogram_mean,
                                 parse_lexicon, r_squared, stem_length_histogram)
from morphoforge.lexicon.stats import (GroupMode, PositionGroup, combination_counts,
                                       eval_gaussian, range_counts, required_data_width, sse)
from morphoforge.synthetic import synthetic_lexicon

from oracles import brute_histogram, gaussian_oracle


def entry(stem, ending="", lemma=None, tags=("x",)):
    return LexiconEntry(stem + ending, stem, ending, lemma or stem + ending, tags)


# -- alphabet ---------------------------------------------------------------

def test_ukrainian_alphabet_shape(uk):
    assert len([c for c in uk.letters if c.isalpha()]) == 33
    assert uk.code_of("а") == 1 and uk.code_of("А") == 1
    assert uk.code_of("я") == 33
    assert max(uk.codes.values()) <= 63


def test_fold_is_idempotent(uk):
    text = "ҐаНоК'ЇЖАК"
    once = uk.fold(text)
    assert uk.fold(once) == once


def test_apostrophe_variants_share_a_code(uk):
    assert uk.code_of("'") == uk.code_of("’") == uk.code_of("ʼ")


def test_unknown_letter_is_named(uk):
    with pytest.raises(UnknownLetterError) as info:
        uk.encode("мамаq")
    assert info.value.letter == "q"


def test_alphabet_rejects_too_many_letters():
    with pytest.raises(LexiconError):
        Alphabet.from_letters([chr(0x4E00 + i) for i in range(64)])


def test_alphabet_rejects_shared_codes():
    with pytest.raises(LexiconError):
        Alphabet(("а", "б"), {"а": 1, "б": 1})


def test_alphabet_dump_parse_round_trip(uk):
    assert Alphabet.parse(uk.dumps()) == uk


# -- entries ----------------------------------------------------------------

def test_entry_invariants():
    with pytest.raises(LexiconError):
        LexiconEntry("мама", "ма", "а", "мама", ("noun",))
    with pytest.raises(LexiconError):
        LexiconEntry("мама", "мам", "а", "мама", ())
    with pytest.raises(LexiconError):
        LexiconEntry("", "", "", "x", ("t",))


def test_tags_are_a_set():
    e = LexiconEntry("мама", "мам", "а", "мама", ("sg", "noun", "sg"))
    assert e.tags == ("noun", "sg")


def test_lexicon_tsv_round_trip(small_entries):
    assert parse_lexicon(dump_lexicon(small_entries)) == small_entries


def test_lexicon_parse_reports_line():
    with pytest.raises(LexiconError, match="<lexicon>:2"):
        parse_lexicon("# header\nмама\tмам\tа\n")


# -- histogram --------------------------------------------------------------

def test_histogram_examples():
    assert stem_length_histogram([]) == {}
    es = [entry("мама"), entry("тато"), entry("словников")]
    assert stem_length_histogram(es) == {4: 2, 9: 1}


def test_histogram_matches_counting_oracle():
    es = synthetic_lexicon(1000, seed=3)
    assert stem_length_histogram(es) == brute_histogram(es)


def test_histogram_mean_matches_arithmetic_mean():
    es = synthetic_lexicon(1000, seed=3)
    lengths = [len(e.stem) for e in es if e.stem]
    assert abs(histogram_mean(stem_length_histogram(es)) - sum(lengths) / len(lengths)) < 1e-9


def test_histogram_mean_of_empty_raises():
    with pytest.raises(InsufficientDataError):
        histogram_mean({})


# -- combination counts -----------------------------------------------------

def test_single_position_group(uk):
    tables = combination_counts([entry("аб"), entry("ав")], CombinationScheme((PositionGroup(2, 2),)), uk)
    assert tables[0].count == 2
    assert sorted(tables[0].index) == [(uk.code_of("б"),), (uk.code_of("в"),)]


def test_short_stem_pads_with_zeros(uk):
    tables = combination_counts([entry("а")], CombinationScheme((PositionGroup(2, 4),)), uk)
    assert list(tables[0].index) == [(0, 0, 0)]


def test_engineered_corpus_needs_fifteen_bits(uk):
    letters = [c for c in uk.letters if c.isalpha()]
    triples = itertools.islice(itertools.product(letters, repeat=3), 26450)
    es = [entry("а" + "".join(t)) for t in triples]
    (table,) = combination_counts(es, CombinationScheme((PositionGroup(2, 4),)), uk)
    assert table.count == 26450
    assert table.data_width_bits == 15


def test_unknown_letter_in_stem_names_entry(uk):
    with pytest.raises(UnknownLetterError, match="мамq"):
        combination_counts([entry("мамq")], CombinationScheme.default(), uk)


def test_indices_are_dense(uk):
    tables = combination_counts(synthetic_lexicon(500), CombinationScheme.default(), uk)
    for t in tables:
        assert sorted(t.index.values()) == list(range(t.count))


def test_or_collected_group_folds_codes(uk):
    g = PositionGroup(2, 3, GroupMode.OR_COLLECTED)
    assert g.key((1, 2, 4)) == (6,)


def test_scheme_validation():
    with pytest.raises(LexiconError):
        CombinationScheme((PositionGroup(1, 3),))
    with pytest.raises(LexiconError):
        CombinationScheme((PositionGroup(2, 5), PositionGroup(4, 6)))
    assert CombinationScheme.default().independent_reach == 10


def test_wide_table_warns(uk):
    letters = [c for c in uk.letters if c.isalpha()]
    rng = random.Random(0)
    es = {entry("а" + "".join(rng.choice(letters) for _ in range(9))) for _ in range(1100)}
    scheme = CombinationScheme((PositionGroup(2, 10),))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        combination_counts(list(es), scheme, uk)
    assert not caught  # 1100 tuples need 11 bits
    assert required_data_width(2 ** 20 + 1) == 21


def test_counts_are_order_independent(uk):
    es = synthetic_lexicon(800, seed=5)
    shuffled = es[:]
    random.Random(1).shuffle(shuffled)
    scheme = CombinationScheme.default()
    assert combination_counts(es, scheme, uk) == combination_counts(shuffled, scheme, uk)


def test_range_counts_allow_position_one(uk):
    out = range_counts([entry("аб"), entry("вб")], uk, [(1, 1), (1, 2), (2, 2)])
    assert out == {"C1": 2, "C1-C2": 2, "C2": 1}


@pytest.mark.parametrize("count,bits", [(1, 0), (2, 1), (3, 2), (26450, 15), (32055, 15), (32769, 16)])
def test_required_data_width(count, bits):
    assert required_data_width(count) == bits


def test_required_data_width_zero():
    with pytest.raises(ValueError):
        required_data_width(0)


@given(st.integers(1, 10 ** 12))
def test_required_data_width_is_ceil_log2(count):
    b = required_data_width(count)
    assert 2 ** b >= count and (b == 0 or 2 ** (b - 1) < count)


# -- Gaussian ---------------------------------------------------------------

PRINTED = GaussianFit(33600.0, 9.0, 16.0)


def test_eval_at_center_is_amplitude():
    assert eval_gaussian(PRINTED, 9) == 33600.0


def test_eval_one_width_away():
    expected = mpmath.mpf(33600) * mpmath.e ** -1
    assert abs(eval_gaussian(PRINTED, 13) - float(expected)) < 1e-9
    assert eval_gaussian(PRINTED, 13) == pytest.approx(12360.3, abs=0.5)


@given(st.floats(0, 50))
def test_eval_is_symmetric(d):
    assert math.isclose(eval_gaussian(PRINTED, 9 + d), eval_gaussian(PRINTED, 9 - d), rel_tol=1e-12)


def test_fit_recovers_printed_formula():
    xs = np.arange(1, 21)
    fit = fit_gaussian((xs, eval_gaussian(PRINTED, xs)))
    assert fit.amplitude == pytest.approx(33600, rel=1e-6)
    assert fit.center == pytest.approx(9, rel=1e-6)
    assert fit.width == pytest.approx(16, rel=1e-6)
    assert fit.r_squared == pytest.approx(1, abs=1e-9)


def test_fit_symmetric_data_centers_at_midpoint():
    fit = fit_gaussian({4: 10.0, 5: 30.0, 6: 30.0, 7: 10.0})
    assert fit.center == pytest.approx(5.5, abs=1e-9)


def test_fit_matches_grid_oracle_on_noisy_data():
    rng = np.random.default_rng(11)
    xs = np.arange(1, 25)
    ys = eval_gaussian(GaussianFit(5000, 10.3, 22.0), xs) + rng.normal(0, 120, xs.size)
    ys = np.clip(ys, 0, None)
    fit = fit_gaussian((xs, ys))
    *_, oracle_sse = gaussian_oracle(xs, ys)
    assert sse(fit, (xs, ys)) <= oracle_sse * (1 + 1e-6) + 1e-9


def test_fit_needs_three_bins():
    with pytest.raises(InsufficientDataError):
        fit_gaussian({3: 1.0, 4: 2.0})


def test_r_squared_examples():
    assert r_squared([1, 2, 3], [1, 2, 3]) == 1.0
    assert r_squared([1, 2, 3], [2, 2, 2]) == 0.0
    assert r_squared([1, 2, 3], [3, 2, 1]) < 0


def test_r_squared_constant_data():
    with pytest.raises(DegenerateDataError):
        r_squared([2, 2, 2], [1, 2, 3])


@given(st.lists(st.floats(-1e3, 1e3), min_size=2, max_size=30))
def test_r_squared_of_self_is_one(obs):
    if max(obs) - min(obs) < 1e-3:
        return
    assert r_squared(obs, obs) == 1.0


def test_length_model_estimator():
    rng = np.random.default_rng(2)
    lengths = np.clip(np.round(rng.normal(8, 2.2, 20000)), 1, 30).astype(int)
    model = GaussianLengthModel().fit(lengths)
    assert model.center_ == pytest.approx(8, abs=0.2)
    xs = np.arange(1, 31)
    counts = np.bincount(lengths, minlength=31)[1:]
    assert model.score(xs, counts) > 0.98
