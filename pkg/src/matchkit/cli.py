"""Command-line interface.

Subcommands: da, stable-set, sp-enum, check-domain, audit, replicate,
search-rule. Reports are deterministic for identical inputs and seed; wall
time is only included behind --timings so default output stays byte-stable.

Exit codes: 0 success or claim verified, 1 audited property failed or claim
refuted or witnesses found, 2 malformed input, 3 work budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

from . import __version__
from ._core import BACKEND
from .audits import (
    DEFAULT_BUDGET,
    ProfileSpace,
    Rule,
    audit_group,
    audit_non_bossiness,
    audit_strategy_proofness,
)
from .da import deferred_acceptance, enumerate_stable
from .domains import (
    check_tree_single_peaked,
    find_rotation_violation,
    find_td_violation,
    is_rich,
    missing_tops,
)
from .model import BudgetError, InputError, MatchkitError
from .replication import (
    CLAIMS,
    CLAIM_ALIASES,
    DEFAULT_ORACLE_CAP,
    rule_existence_oracle,
    verify_theorem,
)
from .serial import (
    domain_from_doc,
    matching_to_doc,
    profile_from_doc,
    rule_from_doc,
    rule_to_doc,
    tree_from_doc,
)
from .trees import enumerate_maximal_single_peaked, make_tree

_AUDIT_CHECKS = ("sp", "nonbossy", "wgsp", "gsp")


def _read_doc(path: str, inputs: dict) -> dict | list:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None
    inputs[path] = hashlib.sha256(blob).hexdigest()[:16]
    try:
        return json.loads(blob)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: invalid JSON at line {e.lineno}, column {e.colno}") from None


def _load_tree(args, inputs):
    if args.tree:
        return tree_from_doc(_read_doc(args.tree, inputs))
    k = args.size or 5
    return make_tree(args.kind, tuple(f"x{i}" for i in range(1, k + 1)))


def _load_rule(spec: str, space: ProfileSpace | None, inputs: dict) -> Rule:
    if spec == "mpda":
        return Rule("mpda")
    if spec == "wpda":
        return Rule("wpda")
    path = spec.removeprefix("table:")
    rule = rule_from_doc(_read_doc(path, inputs))
    if space is not None and rule.kind == "table" and rule.space.domain != space.domain:
        raise InputError("table rule's domain differs from --domain")
    return rule


def _witness_payload(w) -> dict:
    return {
        "check": w.check,
        "profile_index": w.profile_index,
        "misreport_index": w.misreport_index,
        "coalition": list(w.coalition),
        "misreports": {a: list(r) for a, r in w.misreports},
        "before": matching_to_doc(w.before),
        "after": matching_to_doc(w.after),
    }


def _witness_line(w) -> str:
    moves = "; ".join(f"{a} reports {'>'.join(r)}" for a, r in w.misreports)
    return (f"profile {w.profile_index}: {moves} | {w.before} -> {w.after}"
            + (f" | coalition {','.join(w.coalition)}" if len(w.coalition) > 1 else ""))


# --- subcommand handlers: return (result dict, human lines, exit code) -----


def _cmd_da(args, inputs):
    profile = profile_from_doc(_read_doc(args.profile, inputs))
    matching = deferred_acceptance(profile, side=args.side)
    return (
        {"side": args.side, "matching": matching_to_doc(matching)},
        [str(matching)],
        0,
    )


def _cmd_stable_set(args, inputs):
    profile = profile_from_doc(_read_doc(args.profile, inputs))
    stable = enumerate_stable(profile, max_n=args.max_n)
    return (
        {
            "profile_digest": stable.profile_digest,
            "count": len(stable),
            "matchings": [matching_to_doc(mu) for mu in stable],
        },
        [str(mu) for mu in stable],
        0,
    )


def _cmd_sp_enum(args, inputs):
    tree = _load_tree(args, inputs)
    rankings = enumerate_maximal_single_peaked(tree)
    result = {"nodes": list(tree.nodes), "count": len(rankings)}
    lines = [f"count {len(rankings)}"]
    if not args.count_only:
        result["rankings"] = [list(r) for r in rankings]
        lines += [">".join(r) for r in rankings]
    return result, lines, 0


def _cmd_check_domain(args, inputs):
    domain = domain_from_doc(_read_doc(args.domain, inputs))
    props = [p.strip() for p in args.props.split(",") if p.strip()]
    unknown = set(props) - {"rich", "anonymous", "td", "rotation", "sp"}
    if unknown:
        raise InputError(f"unknown properties: {', '.join(sorted(unknown))}")
    result: dict = {}
    lines = []
    failed = False
    for side, pset in (("men", domain.men_set), ("women", domain.women_set)):
        entry: dict = {}
        bits = []
        if "rich" in props:
            entry["rich"] = is_rich(pset)
            entry["missing_tops"] = list(missing_tops(pset))
            bits.append(f"rich={'yes' if entry['rich'] else 'no (missing ' + ','.join(entry['missing_tops']) + ')'}")
            failed |= not entry["rich"]
        if "anonymous" in props:
            entry["anonymous"] = True
            bits.append("anonymous=yes (single shared set per side)")
        if "td" in props:
            w = find_td_violation(pset)
            entry["top_dominance"] = w is None
            if w:
                entry["td_violation"] = {"elements": list(w.elements), "prefs": {r: list(p) for r, p in w.prefs}}
            bits.append(f"top-dominance={'yes' if w is None else 'no (' + ','.join(w.elements) + ')'}")
            failed |= w is not None
        if "rotation" in props:
            w = find_rotation_violation(pset)
            entry["rotation"] = w is None
            if w:
                entry["rotation_violation"] = {"elements": list(w.elements), "prefs": {r: list(p) for r, p in w.prefs}}
            bits.append(f"rotation={'yes' if w is None else 'no (' + ','.join(w.elements) + ')'}")
            failed |= w is not None
        result[side] = entry
        lines.append(f"{side}: " + " ".join(bits))
    if "sp" in props:
        report = check_tree_single_peaked(domain)
        result["single_peaked"] = {side: [list(p) for p in bad] for side, bad in report.items()}
        if not report:
            lines.append("single-peaked: no trees attached, nothing to check")
        for side, bad in report.items():
            lines.append(f"{side}: single-peaked={'yes' if not bad else f'no ({len(bad)} offending rankings)'}")
            failed |= bool(bad)
    return result, lines, 1 if failed else 0


def _cmd_audit(args, inputs):
    domain = domain_from_doc(_read_doc(args.domain, inputs)) if args.domain else None
    rule = _load_rule(args.rule, None, inputs)
    if rule.kind == "table":
        space = rule.space
        if domain is not None and space.domain != domain:
            raise InputError("table rule's domain differs from --domain")
    else:
        if domain is None:
            raise InputError("--domain is required for mpda/wpda audits")
        space = ProfileSpace(domain)
    kwargs = dict(first=args.first, budget=args.budget, jobs=args.jobs)
    if args.check == "sp":
        witnesses = audit_strategy_proofness(rule, space, **kwargs)
    elif args.check == "nonbossy":
        witnesses = audit_non_bossiness(rule, space, **kwargs)
    elif args.check == "wgsp":
        witnesses = audit_group(rule, space, mode="weak", max_coalition=args.max_coalition, **kwargs)
    else:
        witnesses = audit_group(rule, space, mode="strong", max_coalition=args.max_coalition, **kwargs)
    result = {
        "check": args.check,
        "rule": rule.kind,
        "space": space.size,
        "mode": "existence" if args.first else "census",
        "witnesses": len(witnesses),
        "witness_list": [_witness_payload(w) for w in witnesses],
    }
    lines = [f"space {space.size} profiles, {args.check} witnesses: {len(witnesses)}"]
    shown = witnesses if len(witnesses) <= args.show else witnesses[: args.show]
    lines += [_witness_line(w) for w in shown]
    if len(witnesses) > len(shown):
        lines.append(f"... and {len(witnesses) - len(shown)} more")
    return result, lines, 1 if witnesses else 0


def _render_table(table: dict) -> list[str]:
    cols = table["columns"]
    rows = [cols] + [[str(c) for c in row] for row in table["rows"]]
    widths = [max(len(r[i]) for r in rows) for i in range(len(cols))]
    out = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]
    out.insert(1, "-" * len(out[0]))
    return out


def _cmd_replicate(args, inputs):
    claims = list(CLAIMS) if args.claim == "all" else [args.claim]
    reports = [
        verify_theorem(c, n=args.n, tree=args.tree, oracle_cap=args.cap, jobs=args.jobs)
        for c in claims
    ]
    result = {
        "reports": [
            {"claim": r.claim, "status": r.status, "evidence": r.evidence, "notes": list(r.notes)}
            for r in reports
        ]
    }
    lines = []
    for r in reports:
        lines.append(f"{r.claim}: {r.status}")
        gadget = r.evidence.get("gadget")
        if gadget and "table" in gadget:
            lines += _render_table(gadget["table"])
            lines.append(f"mu_a = {gadget['mu_a']}   mu_b = {gadget['mu_b']}")
        for note in r.notes:
            lines.append(f"  {note}")
    return result, lines, 1 if any(r.status == "refuted" for r in reports) else 0


def _cmd_search_rule(args, inputs):
    domain = domain_from_doc(_read_doc(args.domain, inputs))
    space = ProfileSpace(domain)
    res = rule_existence_oracle(space, args.require, cap=args.cap)
    result = {
        "require": args.require,
        "space": space.size,
        "exists": res.exists,
        "stats": res.stats,
        "trace_tail": list(res.trace[-10:]),
    }
    lines = [f"{args.require} rule on {space.size} profiles: {'exists' if res.exists else 'impossible'}"]
    if res.exists and args.dump_rule:
        with open(args.dump_rule, "w") as fh:
            json.dump(rule_to_doc(res.rule), fh, indent=2, sort_keys=True)
        result["rule_written"] = args.dump_rule
        lines.append(f"rule table written to {args.dump_rule}")
    return result, lines, 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="matchkit",
        description="Two-sided matching: deferred acceptance, stable sets, "
                    "tree-single-peaked domains, exhaustive incentive audits.",
    )
    parser.add_argument("--version", action="version", version=f"matchkit {__version__} ({BACKEND} core)")
    parser.add_argument("--seed", type=int, default=0, help="recorded in the report for reproducibility")
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for table filling")
    parser.add_argument("--format", choices=("human", "json"), default="human")
    parser.add_argument("--timings", action="store_true", help="include wall time (breaks byte-stable output)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("da", help="run deferred acceptance on a profile")
    p.add_argument("--profile", required=True)
    p.add_argument("--side", choices=("men", "women"), default="men")
    p.set_defaults(func=_cmd_da)

    p = sub.add_parser("stable-set", help="enumerate all stable matchings by brute force")
    p.add_argument("--profile", required=True)
    p.add_argument("--max-n", type=int, default=8)
    p.set_defaults(func=_cmd_stable_set)

    p = sub.add_parser("sp-enum", help="enumerate rankings single-peaked on a tree")
    p.add_argument("--tree", help="tree document; omit to use --kind/--size")
    p.add_argument("--kind", choices=("path", "spider", "star"), default="path")
    p.add_argument("--size", type=int, help="node count for built-in tree kinds")
    p.add_argument("--count-only", action="store_true")
    p.set_defaults(func=_cmd_sp_enum)

    p = sub.add_parser("check-domain", help="richness, anonymity, top dominance, rotation, single-peakedness")
    p.add_argument("--domain", required=True)
    p.add_argument("--props", default="rich,anonymous,td,rotation,sp")
    p.set_defaults(func=_cmd_check_domain)

    p = sub.add_parser("audit", help="exhaustive incentive audit of a rule on a domain")
    p.add_argument("--domain", help="domain document (required for mpda/wpda)")
    p.add_argument("--rule", required=True, help="mpda, wpda, or table:FILE")
    p.add_argument("--check", choices=_AUDIT_CHECKS, required=True)
    p.add_argument("--max-coalition", type=int, default=None)
    p.add_argument("--first", action="store_true", help="stop at the first witness")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--show", type=int, default=10, help="witnesses to print in human format")
    p.set_defaults(func=_cmd_audit)

    p = sub.add_parser("replicate", help="verify a claim id end to end")
    p.add_argument("--claim", required=True, choices=CLAIMS + tuple(CLAIM_ALIASES) + ("all",))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--tree", choices=("path", "spider", "star"), default="path")
    p.add_argument("--cap", type=int, default=DEFAULT_ORACLE_CAP)
    p.set_defaults(func=_cmd_replicate)

    p = sub.add_parser("search-rule", help="decide existence of a rule with given properties")
    p.add_argument("--domain", required=True)
    p.add_argument("--require", default="stable+sp")
    p.add_argument("--cap", type=int, default=DEFAULT_ORACLE_CAP)
    p.add_argument("--dump-rule", help="write the found rule table to this path")
    p.set_defaults(func=_cmd_search_rule)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    inputs: dict[str, str] = {}
    started = time.perf_counter()
    try:
        result, lines, code = args.func(args, inputs)
    except BudgetError as e:
        print(f"budget error: {e}", file=sys.stderr)
        return 3
    except MatchkitError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    report = {
        "command": args.command,
        "inputs": inputs,
        "seed": args.seed,
        "jobs": args.jobs,
        "backend": BACKEND,
        "wall_time_s": round(time.perf_counter() - started, 3) if args.timings else None,
        "result": result,
    }
    if args.format == "json":
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        header = f"matchkit {args.command} | seed {args.seed}"
        for path, digest in inputs.items():
            header += f" | {path} {digest}"
        print(header)
        for line in lines:
            print(line)
        if args.timings:
            print(f"wall time: {report['wall_time_s']}s")
    return code


if __name__ == "__main__":
    sys.exit(main())
