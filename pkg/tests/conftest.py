import pytest

from bmolab import RandomVariable, build_dyadic, martingale_from_final


@pytest.fixture
def rademacher_pair():
    """Fair coin: one split, final values +1 and -1."""
    tree = build_dyadic(1)
    f = martingale_from_final(RandomVariable(tree, [1.0, -1.0]))
    return tree, f


@pytest.fixture
def depth2_example():
    """Two dyadic splits, final values (2, 0, -1, -1)."""
    tree = build_dyadic(2)
    f = martingale_from_final(RandomVariable(tree, [2.0, 0.0, -1.0, -1.0]))
    return tree, f
