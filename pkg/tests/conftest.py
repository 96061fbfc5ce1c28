import random
import logging
from collections.abc import Callable

import pytest

from qbf_algproof.constants import QuantifierEnum
from qbf_algproof.qbf import Qbf, parse_qdimacs

logger = logging.getLogger(__name__)


@pytest.fixture(scope="session", autouse=True)
def setup_and_teardown():
    # Equivalent of setUp
    logger.info("Setting up...")

    yield  # This is where the testing happens!

    # Equivalent of tearDown
    logger.info("Tearing down!")


@pytest.fixture
def forall_u() -> Qbf:
    """`forall u. (u)`: the smallest false formula."""

    return parse_qdimacs("p cnf 1 1\na 1 0\n1 0\n")


@pytest.fixture
def exists_forall() -> Qbf:
    """`exists x1 forall u2. (x1 v u2)(~x1 v u2)`: false, refuted by one reduction."""

    return parse_qdimacs("p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n-1 2 0\n")


@pytest.fixture
def forall_exists() -> Qbf:
    """`forall u1 exists x2. (u1 v x2)(~u1 v ~x2)`: true."""

    return parse_qdimacs("p cnf 2 2\na 1 0\ne 2 0\n1 2 0\n-1 -2 0\n")


@pytest.fixture
def random_qbf() -> Callable[[random.Random], Qbf]:
    """Factory of small random closed prenex formulas (1-3 variables, 1-4 clauses)."""

    def _make(rng: random.Random) -> Qbf:
        _n = rng.randint(1, 3)
        _prefix = tuple(
            (rng.choice((QuantifierEnum.EXISTS, QuantifierEnum.FORALL)), _v)
            for _v in range(1, _n + 1)
        )
        _clauses = []
        for _ in range(rng.randint(1, 4)):
            _vars = rng.sample(range(1, _n + 1), rng.randint(1, _n))
            _clauses.append(tuple(_v if rng.random() < 0.5 else -_v for _v in _vars))

        return Qbf(prefix=_prefix, clauses=tuple(_clauses))

    return _make
