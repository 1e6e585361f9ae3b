import random

import pytest

from matchkit.model import Market, Profile
from matchkit.trees import Tree, enumerate_maximal_single_peaked, make_tree
from matchkit.domains import DomainPair, PreferenceSet


@pytest.fixture(scope="session")
def market3():
    return Market.default(3)


@pytest.fixture(scope="session")
def market4():
    return Market.default(4)


@pytest.fixture(scope="session")
def path3w(market3):
    return make_tree("path", market3.women)


@pytest.fixture(scope="session")
def path3m(market3):
    return make_tree("path", market3.men)


@pytest.fixture(scope="session")
def maximal3(market3, path3w, path3m):
    """Both sides carry the full single-peaked set of their 3-node path."""
    return DomainPair(
        market3,
        PreferenceSet("men", market3.women, enumerate_maximal_single_peaked(path3w)),
        PreferenceSet("women", market3.men, enumerate_maximal_single_peaked(path3m)),
        tree_over_women=path3w,
        tree_over_men=path3m,
    )


# The gadget every impossibility argument hangs off: two stable matchings
# at the first profile, unique ones at its two one-report neighbors.
@pytest.fixture(scope="session")
def gadget3(maximal3):
    from matchkit.replication import build_manipulation_gadget

    return build_manipulation_gadget(maximal3)


@pytest.fixture(scope="session")
def gadget4():
    from matchkit.replication import build_bossiness_gadget, maximal_domain

    return build_bossiness_gadget(maximal_domain(4, "path"))


@pytest.fixture()
def rng():
    return random.Random(20260819)


def random_tree(rng: random.Random, nodes) -> Tree:
    """Uniform-ish random labeled tree: attach each node to an earlier one."""
    order = list(nodes)
    rng.shuffle(order)
    edges = [(order[i], order[rng.randrange(i)]) for i in range(1, len(order))]
    return Tree(tuple(nodes), tuple(edges))
