"""JSON document formats for every object the CLI reads or writes.

All loaders raise InputError with a field-qualified message on malformed
input; all dumpers emit plain dict/list structures that json.dumps can
serialize deterministically. Matchings travel as "man-woman" pair strings
sorted by man index. Agent ids may themselves contain hyphens; pair strings
are resolved against the market, and only an unambiguous split is accepted.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from .audits import ProfileSpace, Rule
from .domains import DomainPair, PreferenceSet
from .model import InputError, Market, Matching, Profile, validate_profile
from .trees import Tree


def _require(doc: Mapping, key: str, kind: type, where: str):
    if not isinstance(doc, Mapping):
        raise InputError(f"{where}: expected an object")
    if key not in doc:
        raise InputError(f"{where}: missing field {key!r}")
    val = doc[key]
    if not isinstance(val, kind):
        raise InputError(f"{where}.{key}: expected {kind.__name__}, got {type(val).__name__}")
    return val


def _str_list(doc: Mapping, key: str, where: str) -> list[str]:
    val = _require(doc, key, list, where)
    for i, x in enumerate(val):
        if not isinstance(x, str):
            raise InputError(f"{where}.{key}[{i}]: expected string, got {type(x).__name__}")
    return val


def split_pair(pair: str, left_ids: Sequence[str], right_ids: Sequence[str], where: str) -> tuple[str, str]:
    """Split "a-b" against known id pools; exactly one valid split allowed."""
    if not isinstance(pair, str):
        raise InputError(f"{where}: expected string, got {type(pair).__name__}")
    left_set, right_set = set(left_ids), set(right_ids)
    hits = []
    start = 0
    while True:
        cut = pair.find("-", start)
        if cut < 0:
            break
        a, b = pair[:cut], pair[cut + 1 :]
        if a in left_set and b in right_set:
            hits.append((a, b))
        start = cut + 1
    if not hits:
        raise InputError(f"{where}: {pair!r} does not split into known ids")
    if len(hits) > 1:
        raise InputError(f"{where}: {pair!r} splits ambiguously")
    return hits[0]


# --- market / profile ------------------------------------------------------


def market_from_doc(doc: Mapping, where: str = "market") -> Market:
    return Market(tuple(_str_list(doc, "men", where)), tuple(_str_list(doc, "women", where)))


def profile_to_doc(profile: Profile) -> dict:
    return {
        "men": list(profile.market.men),
        "women": list(profile.market.women),
        "prefs": {a: list(profile.prefs[a].ranking) for a in (*profile.market.men, *profile.market.women)},
    }


def profile_from_doc(doc: Mapping, where: str = "profile") -> Profile:
    market = market_from_doc(doc, where)
    prefs = _require(doc, "prefs", Mapping, where)
    raw = {}
    for agent, ranking in prefs.items():
        if not isinstance(ranking, list) or not all(isinstance(x, str) for x in ranking):
            raise InputError(f"{where}.prefs.{agent}: expected a list of strings")
        raw[agent] = ranking
    problems = validate_profile(market, raw)
    if problems:
        raise InputError(f"{where}: " + "; ".join(problems))
    return Profile.from_rankings(market, raw)


# --- matching ---------------------------------------------------------------


def matching_to_doc(matching: Matching) -> list[str]:
    return [f"{m}-{w}" for m, w in matching.pairs()]


def matching_from_doc(doc, market: Market, where: str = "matching") -> Matching:
    if not isinstance(doc, list):
        raise InputError(f"{where}: expected a list of pair strings")
    pairs = [split_pair(p, market.men, market.women, f"{where}[{i}]") for i, p in enumerate(doc)]
    return Matching.from_pairs(market, pairs)


# --- tree --------------------------------------------------------------------


def tree_to_doc(tree: Tree) -> dict:
    return {"nodes": list(tree.nodes), "edges": [f"{a}-{b}" for a, b in tree.edges]}


def tree_from_doc(doc: Mapping, where: str = "tree") -> Tree:
    nodes = _str_list(doc, "nodes", where)
    raw_edges = _str_list(doc, "edges", where)
    edges = [split_pair(e, nodes, nodes, f"{where}.edges[{i}]") for i, e in enumerate(raw_edges)]
    return Tree(tuple(nodes), tuple(edges))


# --- domain -------------------------------------------------------------------


def domain_to_doc(domain: DomainPair) -> dict:
    return {
        "men": list(domain.market.men),
        "women": list(domain.market.women),
        "men_prefs": [list(p) for p in domain.men_set.prefs],
        "women_prefs": [list(p) for p in domain.women_set.prefs],
        "tree_over_women": tree_to_doc(domain.tree_over_women) if domain.tree_over_women else None,
        "tree_over_men": tree_to_doc(domain.tree_over_men) if domain.tree_over_men else None,
    }


def _pref_rows(doc: Mapping, key: str, where: str) -> tuple[tuple[str, ...], ...]:
    rows = _require(doc, key, list, where)
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list) or not all(isinstance(x, str) for x in row):
            raise InputError(f"{where}.{key}[{i}]: expected a list of strings")
        out.append(tuple(row))
    return tuple(out)


def _pref_set(side: str, ground, rows, where: str, key: str) -> PreferenceSet:
    try:
        return PreferenceSet(side, ground, rows)
    except InputError as exc:
        raise InputError(f"{where}.{key}: {exc}") from exc


def domain_from_doc(doc: Mapping, where: str = "domain") -> DomainPair:
    market = market_from_doc(doc, where)
    men_rows = _pref_rows(doc, "men_prefs", where)
    women_rows = _pref_rows(doc, "women_prefs", where)
    tw = doc.get("tree_over_women")
    tm = doc.get("tree_over_men")
    return DomainPair(
        market,
        _pref_set("men", market.women, men_rows, where, "men_prefs"),
        _pref_set("women", market.men, women_rows, where, "women_prefs"),
        tree_over_women=tree_from_doc(tw, f"{where}.tree_over_women") if tw else None,
        tree_over_men=tree_from_doc(tm, f"{where}.tree_over_men") if tm else None,
    )


# --- rule ---------------------------------------------------------------------


def rule_to_doc(rule: Rule) -> dict:
    if rule.kind in ("mpda", "wpda"):
        return {"kind": rule.kind}
    space = rule.space
    n = space.n
    entries = []
    for p in range(space.size):
        digits = space.digits_of(p)
        row = rule.table[p * n : (p + 1) * n]
        pairs = [f"{space.market.men[i]}-{space.market.women[row[i]]}" for i in range(n)]
        entries.append({"digits": list(digits), "matching": pairs})
    return {"kind": "table", "domain": domain_to_doc(space.domain), "entries": entries}


def rule_from_doc(doc: Mapping, where: str = "rule") -> Rule:
    kind = _require(doc, "kind", str, where)
    if kind == "mpda":
        return Rule("mpda")
    if kind == "wpda":
        return Rule("wpda")
    if kind != "table":
        raise InputError(f"{where}.kind: unknown rule kind {kind!r}")
    domain = domain_from_doc(_require(doc, "domain", Mapping, where), f"{where}.domain")
    space = ProfileSpace(domain)
    entries = _require(doc, "entries", list, where)
    if len(entries) != space.size:
        raise InputError(f"{where}.entries: expected {space.size} entries, got {len(entries)}")
    n = space.n
    table = bytearray(space.size * n)
    for i, entry in enumerate(entries):
        digits = _require(entry, "digits", list, f"{where}.entries[{i}]")
        idx = space.index_of_digits(digits)
        if idx != i:
            raise InputError(f"{where}.entries[{i}]: digits out of canonical order")
        matching = matching_from_doc(entry.get("matching"), space.market, f"{where}.entries[{i}].matching")
        table[i * n : (i + 1) * n] = bytes(matching.wife)
    return Rule("table", space, bytes(table))
