import random

import pytest

from khpages.diagram import parse_braid

T34 = "s=3; w=1,2,1,2,1,2,1,2"
T35 = "s=3; w=1,2,1,2,1,2,1,2,1,2"
TREFOIL = "s=2; w=1,1,1"
LEFT_TREFOIL = "s=2; w=-1,-1,-1"
UNKNOT = "s=1; w="

T34_KH = "h^0q^6 + h^2q^10 + h^3q^12 + h^4q^12 + h^5q^16"
T35_KH = "h^0q^8 + h^2q^12 + h^3q^14 + h^4q^14 + h^5q^18 + h^6q^18 + h^7q^20"


@pytest.fixture
def rng():
    return random.Random(20261016)


@pytest.fixture
def braid():
    return parse_braid
