import random

import pytest

from qtaylor.qcore import QContext


@pytest.fixture
def ctx():
    return QContext(0.45)


@pytest.fixture
def ctx4():
    return QContext(0.4)


@pytest.fixture
def rng():
    return random.Random(20240901)
