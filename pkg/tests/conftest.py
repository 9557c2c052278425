import pytest

from affusion.characters import smatrix
from affusion.fusion import build_table
from affusion.liealg import AlgebraId
from affusion.weights import level_context


def make(name: str, k: int):
    c = level_context(AlgebraId.parse(name), k)
    return c, smatrix(c), build_table(c)


@pytest.fixture(scope="session")
def ring():
    cache = {}

    def get(name: str, k: int):
        if (name, k) not in cache:
            cache[(name, k)] = make(name, k)
        return cache[(name, k)]

    return get
