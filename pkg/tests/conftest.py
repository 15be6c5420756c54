from collections.abc import Sequence

import pytest

from gklo_verifier.gklo import Conventions, GkloFamily
from gklo_verifier.quiver import DimensionData, aiii


def make_family(
    n: int,
    v: Sequence[int],
    w: Sequence[int] = (),
    *,
    conventions: Conventions | None = None,
    max_mode: int = 3,
    plus: Sequence[int] | None = None,
) -> GkloFamily:
    quiver = aiii(n, plus)
    dims = DimensionData.build(dict(zip(quiver.vertices, v)), dict(zip(quiver.vertices, w)))
    return GkloFamily(quiver, dims, conventions=conventions, max_mode=max_mode)


@pytest.fixture(scope="module")
def aiii1() -> GkloFamily:
    return make_family(1, (2, 2), (1, 1))


@pytest.fixture(scope="module")
def aiii1_small() -> GkloFamily:
    return make_family(1, (1, 1), (1, 1), max_mode=2)


@pytest.fixture(scope="module")
def aiii2() -> GkloFamily:
    return make_family(2, (1, 1, 1, 1), (1, 0, 0, 1), max_mode=2)


@pytest.fixture(scope="module")
def aiii3() -> GkloFamily:
    return make_family(3, (1, 1, 1, 1, 1, 1), (1, 0, 0, 0, 0, 1), max_mode=1)


AIII_N1 = """\
# two vertices
vertices = 1 2
tau      = 1:2
edges    = 1>2
dims_v   = 1:1 2:1
dims_w   = 1:1 2:1
"""

AIII_N3 = """\
vertices = 1 2 3 4 5 6
tau      = 1:6 2:5 3:4
edges    = 1>2 3>2 3>4 5>4 5>6
dims_v   = 1:1 2:1 3:1 4:1 5:1 6:1
dims_w   = 1:1 6:1        # omitted vertices default to 0
"""


@pytest.fixture
def aiii1_text() -> str:
    return AIII_N1


@pytest.fixture
def aiii3_text() -> str:
    return AIII_N3
