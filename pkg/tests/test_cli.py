import json

import pytest

from matchkit.cli import main
from matchkit.domains import DomainPair, PreferenceSet, td_selection
from matchkit.replication import build_manipulation_gadget, maximal_domain, td_domain
from matchkit.serial import domain_to_doc, profile_to_doc


@pytest.fixture(scope="module")
def docs(tmp_path_factory):
    base = tmp_path_factory.mktemp("docs")
    gadget = build_manipulation_gadget(maximal_domain(3, "path"))
    maximal = maximal_domain(3, "path")
    td = td_domain(3, "path")
    clean = DomainPair(
        maximal.market,
        PreferenceSet("men", maximal.market.women, td_selection(maximal.tree_over_women)),
        PreferenceSet("women", maximal.market.men, td_selection(maximal.tree_over_men)),
        tree_over_women=maximal.tree_over_women,
        tree_over_men=maximal.tree_over_men,
    )
    paths = {}
    for name, doc in (
        ("prof", profile_to_doc(gadget.profiles[0])),
        ("maximal3", domain_to_doc(maximal)),
        ("td3", domain_to_doc(td)),
        ("clean3", domain_to_doc(clean)),
    ):
        p = base / f"{name}.json"
        p.write_text(json.dumps(doc))
        paths[name] = str(p)
    return paths


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, "--format", "json", *argv)
    return code, json.loads(out), err


class TestGlobalFlags:
    def test_version(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["--version"])
        assert exc.value.code == 0
        out = capsys.readouterr().out
        assert out.startswith("matchkit 0.1.0 (")
        assert out.strip().endswith("core)")

    def test_no_command_errors(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([])
        assert exc.value.code == 2

    def test_report_envelope(self, docs, capsys):
        code, report, _ = run_json(capsys, "--seed", "7", "da", "--profile", docs["prof"])
        assert code == 0
        assert report["command"] == "da"
        assert report["seed"] == 7
        assert report["backend"] in ("compiled", "pure")
        assert report["wall_time_s"] is None
        assert list(report["inputs"]) == [docs["prof"]]
        assert len(report["inputs"][docs["prof"]]) == 16

    def test_output_byte_stable(self, docs, capsys):
        _, first, _ = run(capsys, "--format", "json", "stable-set", "--profile", docs["prof"])
        _, second, _ = run(capsys, "--format", "json", "stable-set", "--profile", docs["prof"])
        assert first == second

    def test_timings_flag(self, docs, capsys):
        code, report, _ = run_json(capsys, "--timings", "da", "--profile", docs["prof"])
        assert isinstance(report["wall_time_s"], float)


class TestDa:
    def test_men_side(self, docs, capsys):
        code, report, _ = run_json(capsys, "da", "--profile", docs["prof"])
        assert code == 0
        assert report["result"]["matching"] == ["m1-w1", "m2-w2", "m3-w3"]

    def test_women_side(self, docs, capsys):
        code, report, _ = run_json(capsys, "da", "--profile", docs["prof"], "--side", "women")
        assert code == 0
        assert report["result"]["matching"] == ["m1-w2", "m2-w1", "m3-w3"]

    def test_human_output(self, docs, capsys):
        code, out, _ = run(capsys, "da", "--profile", docs["prof"])
        assert code == 0
        assert "m1-w1 m2-w2 m3-w3" in out
        assert out.startswith("matchkit da | seed 0 | ")

    def test_missing_file(self, capsys):
        code, out, err = run(capsys, "da", "--profile", "/nonexistent.json")
        assert code == 2
        assert "cannot read" in err

    def test_invalid_json(self, tmp_path, capsys):
        bad = tmp_path / "bad.json"
        bad.write_text("{nope")
        code, _, err = run(capsys, "da", "--profile", str(bad))
        assert code == 2
        assert "invalid JSON" in err


class TestStableSet:
    def test_gadget_profile(self, docs, capsys):
        code, report, _ = run_json(capsys, "stable-set", "--profile", docs["prof"])
        assert code == 0
        assert report["result"]["count"] == 2
        assert report["result"]["matchings"] == [
            ["m1-w1", "m2-w2", "m3-w3"],
            ["m1-w2", "m2-w1", "m3-w3"],
        ]


class TestSpEnum:
    def test_path4_count(self, capsys):
        code, report, _ = run_json(capsys, "sp-enum", "--kind", "path", "--size", "4",
                                   "--count-only")
        assert code == 0
        assert report["result"]["count"] == 8
        assert "rankings" not in report["result"]

    def test_star4_listing(self, capsys):
        code, report, _ = run_json(capsys, "sp-enum", "--kind", "star", "--size", "4")
        assert code == 0
        assert report["result"]["count"] == 12
        assert len(report["result"]["rankings"]) == 12

    def test_tree_file(self, tmp_path, capsys):
        doc = {"nodes": ["a", "b", "c"], "edges": ["a-b", "b-c"]}
        p = tmp_path / "tree.json"
        p.write_text(json.dumps(doc))
        code, report, _ = run_json(capsys, "sp-enum", "--tree", str(p), "--count-only")
        assert code == 0
        assert report["result"]["count"] == 4


class TestCheckDomain:
    def test_clean_domain_passes(self, docs, capsys):
        code, report, _ = run_json(capsys, "check-domain", "--domain", docs["clean3"])
        assert code == 0
        for side in ("men", "women"):
            assert report["result"][side]["rich"] is True
            assert report["result"][side]["top_dominance"] is True
            assert report["result"][side]["rotation"] is True
        assert report["result"]["single_peaked"] == {"men": [], "women": []}

    def test_maximal_fails_td(self, docs, capsys):
        code, report, _ = run_json(capsys, "check-domain", "--domain", docs["maximal3"],
                                   "--props", "td")
        assert code == 1
        assert report["result"]["men"]["top_dominance"] is False
        assert "td_violation" in report["result"]["men"]

    def test_richness_only_passes(self, docs, capsys):
        code, _, _ = run(capsys, "check-domain", "--domain", docs["maximal3"],
                         "--props", "rich,anonymous")
        assert code == 0

    def test_unknown_prop(self, docs, capsys):
        code, _, err = run(capsys, "check-domain", "--domain", docs["maximal3"],
                           "--props", "rich,pareto")
        assert code == 2
        assert "unknown properties: pareto" in err


class TestAudit:
    def test_sp_clean(self, docs, capsys):
        code, report, _ = run_json(capsys, "audit", "--domain", docs["td3"],
                                   "--rule", "mpda", "--check", "sp")
        assert code == 0
        assert report["result"]["witnesses"] == 0

    def test_sp_witness_found(self, docs, capsys):
        code, report, _ = run_json(capsys, "audit", "--domain", docs["maximal3"],
                                   "--rule", "mpda", "--check", "sp", "--first")
        assert code == 1
        assert report["result"]["mode"] == "existence"
        assert report["result"]["witnesses"] == 1
        w = report["result"]["witness_list"][0]
        assert set(w) == {"check", "profile_index", "misreport_index", "coalition",
                          "misreports", "before", "after"}

    def test_budget_exit(self, docs, capsys):
        code, _, err = run(capsys, "audit", "--domain", docs["maximal3"],
                           "--rule", "mpda", "--check", "sp", "--budget", "1")
        assert code == 3
        assert "budget error" in err

    def test_da_needs_domain(self, capsys):
        code, _, err = run(capsys, "audit", "--rule", "mpda", "--check", "sp")
        assert code == 2
        assert "--domain is required" in err

    def test_nonbossy_witnesses_flip_exit(self, docs, capsys):
        # one-sided top dominance restores strategy-proofness for the
        # proposing side, but both deferred acceptance rules stay bossy here
        code, report, _ = run_json(capsys, "audit", "--domain", docs["td3"],
                                   "--rule", "wpda", "--check", "nonbossy")
        assert code == 1
        assert report["result"]["witnesses"] == 96

    def test_human_show_cap(self, docs, capsys):
        code, out, _ = run(capsys, "audit", "--domain", docs["maximal3"],
                           "--rule", "mpda", "--check", "sp", "--show", "2")
        assert code == 1
        assert "... and " in out


class TestReplicate:
    def test_verified_claim(self, capsys):
        code, report, _ = run_json(capsys, "replicate", "--claim", "thm1-if")
        assert code == 0
        assert report["result"]["reports"][0]["status"] == "verified"

    def test_alias(self, capsys):
        code, report, _ = run_json(capsys, "replicate", "--claim", "propC")
        assert code == 0
        assert report["result"]["reports"][0]["claim"] == "propC-rotation"

    def test_gadget_table_rendered(self, capsys):
        code, out, _ = run(capsys, "replicate", "--claim", "thm1-onlyif")
        assert code == 0
        lines = out.splitlines()
        header = next(l for l in lines if l.startswith("profile"))
        assert header.split()[:3] == ["profile", "m1", "m2"]
        assert any(l.startswith("P1") for l in lines)
        assert any(l.startswith("P3") for l in lines)
        assert any(l.startswith("mu_a = ") and "mu_b = " in l for l in lines)

    def test_skipped_small_market(self, capsys):
        code, report, _ = run_json(capsys, "replicate", "--claim", "thmD-n5", "--n", "4")
        assert code == 0
        assert report["result"]["reports"][0]["status"] == "skipped"

    def test_all(self, capsys):
        code, report, _ = run_json(capsys, "replicate", "--claim", "all")
        assert code == 0
        statuses = {r["claim"]: r["status"] for r in report["result"]["reports"]}
        assert len(statuses) == 8
        assert set(statuses.values()) == {"verified"}


class TestSearchRule:
    def test_impossible(self, docs, capsys):
        code, report, _ = run_json(capsys, "search-rule", "--domain", docs["maximal3"])
        assert code == 0
        assert report["result"]["exists"] is False

    def test_exists_and_dump_feeds_audit(self, docs, tmp_path, capsys):
        out_path = tmp_path / "rule.json"
        code, report, _ = run_json(capsys, "search-rule", "--domain", docs["td3"],
                                   "--dump-rule", str(out_path))
        assert code == 0
        assert report["result"]["exists"] is True
        assert out_path.exists()
        code, report, _ = run_json(capsys, "audit", "--rule", f"table:{out_path}",
                                   "--check", "sp")
        assert code == 0
        assert report["result"]["witnesses"] == 0

    def test_cap_exit(self, docs, capsys):
        code, _, err = run(capsys, "search-rule", "--domain", docs["maximal3"],
                           "--cap", "10")
        assert code == 3

    def test_bad_requirement(self, docs, capsys):
        code, _, err = run(capsys, "search-rule", "--domain", docs["maximal3"],
                           "--require", "stable+pareto")
        assert code == 2
        assert "unknown requirement flags" in err
