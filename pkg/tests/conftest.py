import random

import pytest

from gposet.groups import group_from_name
from gposet.harness import RandomPosetSpec, random_free_gposet

SMALL_GROUPS = ["Z2", "Z3", "Z4", "Z2x2", "Z5", "Z6", "S3", "Z7", "Z8", "D8", "Q8", "Z2x4", "Z2x2x2"]


def random_instances(count=200, seed=1, max_orbits=5):
    """Seeded random free posets with |G| <= 8 and at most max_orbits orbits."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        G = group_from_name(rng.choice(SMALL_GROUPS))
        spec = RandomPosetSpec(G, rng.randint(1, max_orbits),
                               rng.choice([0.1, 0.2, 0.3, 0.5, 0.8]), seed * 100_003 + i)
        out.append(random_free_gposet(spec))
    return out


@pytest.fixture(scope="session")
def instances():
    return random_instances()


@pytest.fixture
def Z2():
    return group_from_name("Z2")


@pytest.fixture
def V4():
    return group_from_name("Z2x2")
