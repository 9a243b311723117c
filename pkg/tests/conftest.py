import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from holmask.sexpr import Split, bundled_corpus_path, load_corpus, parse_statement

# The worked reflexivity example used throughout: x = x over a generic type.
XEQX_BODY = "(a (a (c (fun (A) (fun (A) (bool))) =) (v A x)) (v A x))"
XEQX = f"(<theorem> {XEQX_BODY})"
XEQX_EASY_BODY = "(a (a (c <PREDICT> =) (v A x)) (v A x))"
XEQX_HARD_BODY = "(a (a (c <PREDICT> =) (v <MASK> x)) (v <MASK> x))"
XEQX_TYPE = "(fun (A) (fun (A) (bool)))"

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(bundled_corpus_path())


@pytest.fixture(scope="session")
def train_corpus(corpus):
    return [s for s in corpus if s.split is Split.TRAIN]


@pytest.fixture(scope="session")
def valid_corpus(corpus):
    return [s for s in corpus if s.split is Split.VALID]


@pytest.fixture
def xeqx():
    return parse_statement(XEQX, split=Split.VALID, source_id="xeqx")
