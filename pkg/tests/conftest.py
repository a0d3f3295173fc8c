from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from morphoforge.lexicon import Alphabet, compile_lexicon, load_lexicon
from morphoforge.synthetic import synthetic_lexicon

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def fixtures():
    return FIXTURES


@pytest.fixture(scope="session")
def uk():
    return Alphabet.ukrainian()


@pytest.fixture(scope="session")
def small_entries():
    return load_lexicon(FIXTURES / "lex_small.tsv")


@pytest.fixture(scope="session")
def small_image(small_entries):
    return compile_lexicon(small_entries)


@pytest.fixture(scope="session")
def homonym_entries():
    return load_lexicon(FIXTURES / "lex_homonyms.tsv")


@pytest.fixture(scope="session")
def synth_2k():
    return synthetic_lexicon(2000, seed=7)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import VERDICTS
    except ImportError:
        return
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(VERDICTS):
            terminalreporter.write_line(VERDICTS[n])
