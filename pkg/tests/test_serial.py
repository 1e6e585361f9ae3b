import json

import pytest

from matchkit.audits import MPDA, ProfileSpace, Rule, apply_rule, outcome_table
from matchkit.da import deferred_acceptance
from matchkit.model import InputError, Market, Matching, Profile
from matchkit.replication import td_domain
from matchkit.serial import (
    domain_from_doc,
    domain_to_doc,
    market_from_doc,
    matching_from_doc,
    matching_to_doc,
    profile_from_doc,
    profile_to_doc,
    rule_from_doc,
    rule_to_doc,
    split_pair,
    tree_from_doc,
    tree_to_doc,
)
from matchkit.trees import Tree


class TestSplitPair:
    def test_plain(self):
        assert split_pair("m1-w1", ["m1"], ["w1"], "x") == ("m1", "w1")

    def test_hyphenated_ids(self):
        # ids may themselves contain hyphens as long as only one split works
        assert split_pair("alpha-1-beta-2", ["alpha-1"], ["beta-2"], "x") == \
            ("alpha-1", "beta-2")

    def test_ambiguous(self):
        with pytest.raises(InputError, match="splits ambiguously"):
            split_pair("a-b-c", ["a", "a-b"], ["b-c", "c"], "x")

    def test_no_split(self):
        with pytest.raises(InputError, match="does not split"):
            split_pair("m1_w1", ["m1"], ["w1"], "x")

    def test_where_prefix_in_message(self):
        with pytest.raises(InputError, match=r"matching\[0\]"):
            split_pair("zz", ["m1"], ["w1"], "matching[0]")


class TestProfileDocs:
    def test_round_trip(self, gadget3):
        p1 = gadget3.profiles[0]
        doc = profile_to_doc(p1)
        assert set(doc) == {"men", "women", "prefs"}
        again = profile_from_doc(json.loads(json.dumps(doc)))
        assert again == p1

    def test_missing_field(self):
        with pytest.raises(InputError, match="profile: missing field 'men'"):
            profile_from_doc({"women": ["w1"], "prefs": {}})

    def test_wrong_type(self):
        with pytest.raises(InputError, match="profile.men"):
            profile_from_doc({"men": "m1", "women": ["w1"], "prefs": {}})

    def test_bad_ranking_reported_with_agent(self):
        doc = {
            "men": ["m1", "m2", "m3"],
            "women": ["w1", "w2", "w3"],
            "prefs": {
                "m1": ["w1", "w2", "w3"], "m2": ["w1", "w1", "w3"],
                "m3": ["w1", "w2", "w3"], "w1": ["m1", "m2", "m3"],
                "w2": ["m1", "m2", "m3"], "w3": ["m1", "m2", "m3"],
            },
        }
        with pytest.raises(InputError, match="m2"):
            profile_from_doc(doc)


class TestMatchingDocs:
    def test_round_trip(self, gadget3):
        mu = gadget3.mu_b
        doc = matching_to_doc(mu)
        assert doc == ["m1-w2", "m2-w1", "m3-w3"]
        assert matching_from_doc(doc, gadget3.domain.market) == mu

    def test_not_a_list(self, market3):
        with pytest.raises(InputError):
            matching_from_doc("m1-w1", market3)

    def test_incomplete(self, market3):
        with pytest.raises(InputError):
            matching_from_doc(["m1-w1"], market3)


class TestTreeDocs:
    def test_round_trip(self, path3w):
        doc = tree_to_doc(path3w)
        again = tree_from_doc(json.loads(json.dumps(doc)))
        assert again.nodes == path3w.nodes
        assert set(again.edges) == set(path3w.edges)

    def test_not_a_tree(self):
        with pytest.raises(InputError, match="not a tree"):
            tree_from_doc({"nodes": ["a", "b", "c"], "edges": ["a-b"]})

    def test_unknown_endpoint(self):
        with pytest.raises(InputError):
            tree_from_doc({"nodes": ["a", "b"], "edges": ["a-z"]})


class TestDomainDocs:
    def test_round_trip_with_trees(self, maximal3):
        doc = domain_to_doc(maximal3)
        assert "tree_over_women" in doc and "tree_over_men" in doc
        again = domain_from_doc(json.loads(json.dumps(doc)))
        assert again.men_set == maximal3.men_set
        assert again.women_set == maximal3.women_set
        assert again.tree_over_women.nodes == maximal3.tree_over_women.nodes

    def test_trees_optional(self, maximal3):
        doc = domain_to_doc(maximal3)
        doc.pop("tree_over_women")
        doc.pop("tree_over_men")
        again = domain_from_doc(doc)
        assert again.tree_over_women is None
        assert again.men_set == maximal3.men_set

    def test_bad_pref_row(self, maximal3):
        doc = domain_to_doc(maximal3)
        doc["men_prefs"][0] = ["w1", "w1", "w3"]
        with pytest.raises(InputError, match="men_prefs"):
            domain_from_doc(doc)


class TestRuleDocs:
    def test_da_kinds(self):
        assert rule_from_doc({"kind": "mpda"}).kind == "mpda"
        assert rule_to_doc(MPDA) == {"kind": "mpda"}

    def test_unknown_kind(self):
        with pytest.raises(InputError, match="unknown rule kind"):
            rule_from_doc({"kind": "serial-dictatorship"})

    def test_table_round_trip(self):
        space = ProfileSpace(td_domain(3, "path"))
        rule = Rule("table", space=space, table=outcome_table(MPDA, space))
        doc = json.loads(json.dumps(rule_to_doc(rule)))
        again = rule_from_doc(doc)
        assert again.kind == "table"
        assert again.table == rule.table
        prof = space.profile_at(17)
        assert apply_rule(again, prof) == apply_rule(rule, prof)

    def test_entries_out_of_order(self):
        space = ProfileSpace(td_domain(3, "path"))
        rule = Rule("table", space=space, table=outcome_table(MPDA, space))
        doc = rule_to_doc(rule)
        doc["entries"][0], doc["entries"][1] = doc["entries"][1], doc["entries"][0]
        with pytest.raises(InputError, match="digits out of canonical order"):
            rule_from_doc(doc)

    def test_entry_count_checked(self):
        space = ProfileSpace(td_domain(3, "path"))
        rule = Rule("table", space=space, table=outcome_table(MPDA, space))
        doc = rule_to_doc(rule)
        doc["entries"] = doc["entries"][:5]
        with pytest.raises(InputError, match="expected 1728 entries, got 5"):
            rule_from_doc(doc)
