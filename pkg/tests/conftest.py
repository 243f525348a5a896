import functools

import hypothesis
import pytest

from soapbubbles import corpus
from soapbubbles.realize import realize

hypothesis.settings.register_profile("default", max_examples=60, deadline=None)
hypothesis.settings.register_profile("thorough", max_examples=500, deadline=None)
hypothesis.settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def realized(name: str):
    """Realized corpus clusters, built once per session."""
    return realize(corpus.realizable_corpus()[name])


CORPUS = list(corpus.realizable_corpus())


@pytest.fixture(params=CORPUS)
def corpus_name(request):
    return request.param


# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
