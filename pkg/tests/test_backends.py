"""Pure-Python and compiled kernels must be interchangeable.

Every kernel is fed identical randomized inputs and must produce identical
bytes. Skipped wholesale when the extension is unavailable.
"""

import random

import pytest

from matchkit import _purecore

fast = pytest.importorskip("matchkit._fastcore")


def random_lists(rng, n, count):
    rows = []
    seen = set()
    while len(rows) < count:
        perm = tuple(rng.sample(range(n), n))
        if perm not in seen:
            seen.add(perm)
            rows.append(perm)
    return bytes(x for row in rows for x in row)


@pytest.fixture(params=[(3, 3, 2), (4, 2, 2)], ids=["n3", "n4"])
def inputs(request):
    n, num_mp, num_wp = request.param
    rng = random.Random(1000 + n)
    men_lists = random_lists(rng, n, num_mp)
    women_lists = random_lists(rng, n, num_wp)
    men_ranks = _purecore.ranks_from_lists(n, men_lists)
    women_ranks = _purecore.ranks_from_lists(n, women_lists)
    return {
        "n": n, "num_mp": num_mp, "num_wp": num_wp,
        "men_lists": men_lists, "women_lists": women_lists,
        "men_ranks": men_ranks, "women_ranks": women_ranks,
    }


def table_and_inv(i, men_propose=True):
    count = i["num_mp"] ** i["n"] * i["num_wp"] ** i["n"]
    table = _purecore.fill_table(
        i["n"], i["num_mp"], i["num_wp"], i["men_lists"], i["men_ranks"],
        i["women_lists"], i["women_ranks"], men_propose, 0, count)
    return table, _purecore.invert_rows(i["n"], table), count


def test_ranks_from_lists(inputs):
    i = inputs
    assert fast.ranks_from_lists(i["n"], i["men_lists"]) == i["men_ranks"]
    assert fast.ranks_from_lists(i["n"], i["women_lists"]) == i["women_ranks"]


def test_da_single(inputs):
    i, n = inputs, inputs["n"]
    rng = random.Random(7)
    for _ in range(25):
        prop = random_lists(rng, n, n)
        recv = _purecore.ranks_from_lists(n, random_lists(rng, n, n))
        order = bytes(rng.sample(range(n), n))
        assert fast.da_single(n, prop, recv) == _purecore.da_single(n, prop, recv)
        assert fast.da_single(n, prop, recv, order) == \
            _purecore.da_single(n, prop, recv, order)


@pytest.mark.parametrize("men_propose", [True, False], ids=["mpda", "wpda"])
def test_fill_table(inputs, men_propose):
    i = inputs
    count = i["num_mp"] ** i["n"] * i["num_wp"] ** i["n"]
    args = (i["n"], i["num_mp"], i["num_wp"], i["men_lists"], i["men_ranks"],
            i["women_lists"], i["women_ranks"], men_propose)
    whole_pure = _purecore.fill_table(*args, 0, count)
    whole_fast = fast.fill_table(*args, 0, count)
    assert whole_fast == whole_pure
    # chunked fills concatenate to the whole table in both backends
    cut = count // 3
    for impl, whole in ((fast, whole_fast), (_purecore, whole_pure)):
        assert impl.fill_table(*args, 0, cut) + impl.fill_table(*args, cut, count) == whole


def test_invert_rows(inputs):
    table, inv, _ = table_and_inv(inputs)
    assert fast.invert_rows(inputs["n"], table) == inv


def test_digits_matrix(inputs):
    i = inputs
    assert fast.digits_matrix(i["n"], i["num_mp"], i["num_wp"]) == \
        _purecore.digits_matrix(i["n"], i["num_mp"], i["num_wp"])


@pytest.mark.parametrize("want_sp", [True, False], ids=["sp", "nonbossy"])
def test_scan_unilateral(inputs, want_sp):
    i = inputs
    table, inv, _ = table_and_inv(i)
    args = (i["n"], i["num_mp"], i["num_wp"], i["men_ranks"], i["women_ranks"],
            table, inv, want_sp)
    assert fast.scan_unilateral(*args, 0) == _purecore.scan_unilateral(*args, 0)
    hits = _purecore.scan_unilateral(*args, 0)
    if hits:
        assert fast.scan_unilateral(*args, 1) == hits[:1]


@pytest.mark.parametrize("weak_mode", [True, False], ids=["weak", "strong"])
def test_scan_pairs_group(inputs, weak_mode):
    i = inputs
    table, inv, _ = table_and_inv(i)
    dm = _purecore.digits_matrix(i["n"], i["num_mp"], i["num_wp"])
    args = (i["n"], i["num_mp"], i["num_wp"], i["men_ranks"], i["women_ranks"],
            table, inv, dm, weak_mode, 2 * i["n"])
    assert fast.scan_pairs_group(*args, 0) == _purecore.scan_pairs_group(*args, 0)


def test_stable_perms_and_blocking(inputs):
    n = inputs["n"]
    rng = random.Random(9)
    for _ in range(40):
        mranks = _purecore.ranks_from_lists(n, random_lists(rng, n, n))
        wranks = _purecore.ranks_from_lists(n, random_lists(rng, n, n))
        stable = _purecore.stable_perms(n, mranks, wranks)
        assert fast.stable_perms(n, mranks, wranks) == stable
        for row_start in range(0, len(stable), n):
            row = stable[row_start:row_start + n]
            assert fast.blocking_pairs(n, mranks, wranks, row) == []
        # an arbitrary matching gives identical blocking lists
        row = bytes(rng.sample(range(n), n))
        assert fast.blocking_pairs(n, mranks, wranks, row) == \
            _purecore.blocking_pairs(n, mranks, wranks, row)
