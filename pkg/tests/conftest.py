"""Shared fixtures: the shipped 27-point map and seeded random maps."""

import random
from typing import Callable

import pytest

from partial_steinhaus.core.fixture import fixture_map, fixture_points
from partial_steinhaus.models.maps import PartialMap


def make_random_map(m: int, rng: random.Random) -> PartialMap:
    return PartialMap.from_triples(
        m, [[rng.randrange(m) for _ in range(3)] for _ in range(m ** 3)]
    )


@pytest.fixture
def fixture_L() -> PartialMap:
    return fixture_map()


@pytest.fixture
def fixture_pts():
    return fixture_points()


@pytest.fixture
def zero_map() -> PartialMap:
    return PartialMap.constant(3)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(1729)


@pytest.fixture
def random_map() -> Callable[[int, random.Random], PartialMap]:
    return make_random_map
