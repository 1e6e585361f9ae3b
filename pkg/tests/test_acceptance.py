"""Acceptance gate: each test is one shipping criterion, timed and exact.

Run with -v to get one pass/fail line per criterion. Budgets are asserted
inside the tests so a regression that only slows things down still fails.
"""

import itertools
import math
import random
import time

from matchkit.audits import (
    MPDA,
    WPDA,
    ProfileSpace,
    audit_group,
    audit_non_bossiness,
    audit_strategy_proofness,
)
from matchkit.da import blocking_pairs, deferred_acceptance, enumerate_stable
from matchkit.domains import (
    DomainPair,
    PreferenceSet,
    find_rotation_violation,
    forced_rotation_witness,
    is_rich,
    rich_rotation_sweep,
    satisfies_td,
    td_selection,
    witness_holds,
)
from matchkit.model import Market, Profile
from matchkit.replication import (
    build_bossiness_gadget,
    build_manipulation_gadget,
    maximal_domain,
    rule_existence_oracle,
    td_domain,
    verify_theorem,
)
from matchkit.trees import (
    Tree,
    enumerate_maximal_single_peaked,
    is_single_peaked,
    is_single_peaked_linear,
    make_tree,
)


def timed(budget_s):
    class _Timer:
        def __enter__(self):
            self.start = time.perf_counter()
            return self

        def __exit__(self, *exc):
            self.elapsed = time.perf_counter() - self.start
            if exc == (None, None, None):
                assert self.elapsed < budget_s, \
                    f"budget exceeded: {self.elapsed:.1f}s >= {budget_s}s"
            return False

    return _Timer()


def nodes(k):
    return tuple(f"x{i}" for i in range(1, k + 1))


def test_criterion_1_single_peaked_cardinalities():
    """|S(path_k)| = 2^(k-1), |S(star_k)| = 2(k-1)!, star-4 characterization."""
    with timed(5.0):
        for k in range(3, 9):
            got = enumerate_maximal_single_peaked(make_tree("path", nodes(k)))
            assert len(got) == 2 ** (k - 1), f"path_{k}"
        for k in range(3, 7):
            got = enumerate_maximal_single_peaked(make_tree("star", nodes(k)))
            assert len(got) == 2 * math.factorial(k - 1), f"star_{k}"
        # hub x2, leaves x1 x3 x4: exactly the rankings with x2 first or second
        star = Tree(nodes(4), (("x2", "x1"), ("x2", "x3"), ("x2", "x4")))
        enumerated = set(enumerate_maximal_single_peaked(star))
        characterized = {p for p in itertools.permutations(nodes(4))
                        if p.index("x2") <= 1}
        brute = {p for p in itertools.permutations(nodes(4))
                 if is_single_peaked(p, star)}
        assert enumerated == characterized == brute


def test_criterion_2_two_stable_matchings_gadget():
    """Gadget profiles: DA outcomes and exact stable sets."""
    with timed(1.0):
        g = build_manipulation_gadget(maximal_domain(3, "path"))
        p1, p2, p3 = g.profiles
        mu1, mu2 = g.mu_a, g.mu_b
        assert str(mu1) == "m1-w1 m2-w2 m3-w3"
        assert str(mu2) == "m1-w2 m2-w1 m3-w3"
        assert deferred_acceptance(p1, side="men") == mu1
        assert deferred_acceptance(p1, side="women") == mu2
        assert set(enumerate_stable(p1)) == {mu1, mu2}
        assert set(enumerate_stable(p2)) == {mu2}
        assert set(enumerate_stable(p3)) == {mu1}


def test_criterion_3_unilateral_manipulation_witnesses():
    """SP audits on the gadget sub-domain emit both named manipulations."""
    with timed(1.0):
        g = build_manipulation_gadget(maximal_domain(3, "path"))
        space = g.space
        idx = space.index_of(g.profiles[0])

        mpda_census = audit_strategy_proofness(MPDA, space)
        assert any(
            w.profile_index == idx
            and w.misreports == (("w1", ("m2", "m3", "m1")),)
            for w in mpda_census
        ), "w1's manipulation of MPDA missing"

        wpda_census = audit_strategy_proofness(WPDA, space)
        assert any(
            w.profile_index == idx
            and w.misreports == (("m2", ("w2", "w3", "w1")),)
            for w in wpda_census
        ), "m2's manipulation of WPDA missing"


def test_criterion_4_td_side_makes_mpda_strategy_proof():
    """Women TD-selected, men maximal: 1728-profile audits come back clean."""
    with timed(30.0):
        dom = td_domain(3, "path")
        assert satisfies_td(dom.women_set) and is_rich(dom.women_set)
        assert len(dom.women_set) == 3 and len(dom.men_set) == 4
        space = ProfileSpace(dom)
        assert space.size == 1728
        assert audit_strategy_proofness(MPDA, space) == []
        assert audit_group(MPDA, space, mode="weak") == []


def test_criterion_5_oracle_settles_rule_existence():
    """Independent search: impossible on the full space, exists off it."""
    with timed(300.0):
        market = Market.default(3)
        full = maximal_domain(3, "path")
        womens_tree, mens_tree = full.tree_over_women, full.tree_over_men
        men_max, women_max = full.men_set, full.women_set

        res = rule_existence_oracle(ProfileSpace(full), "stable+sp")
        assert not res.exists

        def rich_subsets(pset):
            out = []
            for r in range(1, len(pset.prefs) + 1):
                for combo in itertools.combinations(pset.prefs, r):
                    sub = PreferenceSet(pset.side, pset.ground, combo)
                    if is_rich(sub):
                        out.append(sub)
            return out

        men_subs = rich_subsets(men_max)
        women_subs = rich_subsets(women_max)
        assert len(men_subs) == 3 and len(women_subs) == 3
        assert sum(satisfies_td(s) for s in men_subs) == 2
        assert sum(satisfies_td(s) for s in women_subs) == 2

        for ms, ws in itertools.product(men_subs, women_subs):
            sub = DomainPair(market, ms, ws,
                             tree_over_women=womens_tree, tree_over_men=mens_tree)
            space = ProfileSpace(sub)
            res = rule_existence_oracle(space, "stable+sp")
            td_somewhere = satisfies_td(ms) or satisfies_td(ws)
            assert res.exists == td_somewhere, (len(ms), len(ws))
            if res.exists:
                passing = [r for r in (MPDA, WPDA)
                           if audit_strategy_proofness(r, space) == []]
                assert passing, "oracle found a rule but neither DA is clean"


def test_criterion_6_bossiness_gadget():
    """n=4 gadget: stable sets plus the two pinned bossiness witnesses."""
    with timed(5.0):
        g = build_bossiness_gadget(maximal_domain(4, "path"))
        p1, p2, p3 = g.profiles
        mu1, mu2 = g.mu_a, g.mu_b
        assert set(enumerate_stable(p1)) == {mu1, mu2}
        assert set(enumerate_stable(p2)) == {mu2}
        assert set(enumerate_stable(p3)) == {mu1}

        space = g.space
        idx = space.index_of(p1)

        census = audit_non_bossiness(MPDA, space)
        hits = [w for w in census
                if w.profile_index == idx and w.coalition == ("m3",)]
        assert hits, "m3's bossiness of MPDA missing"
        w = hits[0]
        assert p1.replace("m3", w.misreports[0][1]) == p2
        assert w.before == mu1 and w.after == mu2
        assert w.before.partner("m3") == w.after.partner("m3") == "w4"

        census_w = audit_non_bossiness(WPDA, space)
        hits_w = [w for w in census_w
                  if w.profile_index == idx and w.coalition == ("w3",)]
        assert hits_w, "w3's bossiness of WPDA missing"
        v = hits_w[0]
        assert p1.replace("w3", v.misreports[0][1]) == p3
        assert v.before == mu2 and v.after == mu1
        assert v.before.partner("w3") == v.after.partner("w3") == "m4"


def test_criterion_7_rotation_failure_is_total():
    """Every 5-node shape yields a rotation witness; for the path no rich
    subset escapes."""
    with timed(120.0):
        for kind in ("path", "spider", "star"):
            tree = make_tree(kind, nodes(5))
            pset = PreferenceSet("men", tree.nodes,
                                 enumerate_maximal_single_peaked(tree))
            w = forced_rotation_witness(pset, tree)
            assert w.kind == "rotation-violation"
            assert witness_holds(w)
            assert find_rotation_violation(pset) is not None

        path5 = make_tree("path", nodes(5))
        pset5 = PreferenceSet("men", path5.nodes,
                              enumerate_maximal_single_peaked(path5))
        sweep = rich_rotation_sweep(pset5)
        assert sweep["members"] == 16
        assert sweep["subsets"] == 65535
        assert sweep["rich_subsets"] == 14175
        assert sweep["rich_violating"] == 14175
        assert sweep["rich_satisfying_rotation"] == []


def test_criterion_8_no_stable_nonbossy_rule_at_n5():
    """Composition pipeline verifies on all three 5-node tree shapes."""
    for kind in ("path", "spider", "star"):
        with timed(120.0):
            report = verify_theorem("thmD-n5", n=5, tree=kind)
            assert report.status == "verified", (kind, report.notes)


def test_criterion_9_property_suites():
    """Randomized stability, extremal bounds, and the linear-tree bridge."""
    rng = random.Random(20260819)

    def random_profile(n):
        market = Market.default(n)
        prefs = {}
        for m in market.men:
            prefs[m] = rng.sample(market.women, n)
        for w in market.women:
            prefs[w] = rng.sample(market.men, n)
        return Profile.from_rankings(market, prefs)

    for _ in range(10_000):
        profile = random_profile(rng.choice((3, 4, 5)))
        for side in ("men", "women"):
            assert blocking_pairs(profile, deferred_acceptance(profile, side=side)) == []

    for _ in range(1_000):
        profile = random_profile(rng.choice((3, 4, 5, 6)))
        best = deferred_acceptance(profile, side="men")
        worst = deferred_acceptance(profile, side="women")
        for mu in enumerate_stable(profile):
            for m in profile.market.men:
                assert profile.pref(m).weakly_prefers(best.partner(m), mu.partner(m))
                assert profile.pref(m).weakly_prefers(mu.partner(m), worst.partner(m))
            for w in profile.market.women:
                assert profile.pref(w).weakly_prefers(worst.partner(w), mu.partner(w))
                assert profile.pref(w).weakly_prefers(mu.partner(w), best.partner(w))

    def classical(ranking, order):
        # textbook form: every prefix of the ranking is an interval of the
        # linear order
        pos = {x: i for i, x in enumerate(order)}
        lo = hi = pos[ranking[0]]
        for x in ranking[1:]:
            p = pos[x]
            if p == lo - 1:
                lo = p
            elif p == hi + 1:
                hi = p
            else:
                return False
        return True

    for k in range(3, 8):
        order = nodes(k)
        path = make_tree("path", order)
        for perm in itertools.permutations(order):
            c = classical(perm, order)
            assert is_single_peaked_linear(perm, order) == c
            assert is_single_peaked(perm, path) == c
