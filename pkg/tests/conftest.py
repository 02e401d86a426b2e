import numpy as np
import pytest

from frax.kernel import LaguerreRule


@pytest.fixture(scope="session")
def rule():
    return LaguerreRule.build(200)


@pytest.fixture(scope="session")
def rule_doubled(rule):
    return rule.doubled()


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
