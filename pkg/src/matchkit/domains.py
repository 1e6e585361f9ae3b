"""Restricted preference domains and their structural properties.

A PreferenceSet is an anonymous menu of rankings shared by one side of the
market. The properties checked here are all about forbidden order patterns:

  richness        every potential partner is somebody's top choice
  top dominance   no pair of members realizes both x..y..z and x..z..y
  rotation        no pair realizes both x..y..z..t and z..x..t

Pattern containment means subsequence containment, positions need not be
adjacent. Besides the plain scans there are constructive witness builders
that exploit single-peakedness on a tree to force patterns from richness
alone; each construction is replayed against the definitional check before
it is returned.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .model import BudgetError, InputError, Market, PreconditionError
from .trees import PATH, SPIDER, STAR, Tree, classify_five_node_subtrees, is_single_peaked


@dataclass(frozen=True)
class PreferenceSet:
    """An anonymous set of rankings over a fixed ground tuple.

    side says which market side holds these preferences ("men" rank women).
    Members are stored lex-sorted in ground-index order, so two sets built
    from the same rankings in any order compare equal and all scans are
    order-independent by construction.
    """

    side: str
    ground: tuple[str, ...]
    prefs: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        if self.side not in ("men", "women"):
            raise InputError(f"side must be 'men' or 'women', got {self.side!r}")
        ground = tuple(self.ground)
        idx = {x: i for i, x in enumerate(ground)}
        if len(idx) != len(ground):
            raise InputError("duplicate ids in ground")
        seen = set()
        rows = []
        for p in self.prefs:
            p = tuple(p)
            if len(p) != len(ground) or set(p) != set(ground):
                raise InputError(f"ranking {p} is not a permutation of the ground")
            if p in seen:
                raise InputError(f"duplicate ranking {p}")
            seen.add(p)
            rows.append(p)
        rows.sort(key=lambda r: tuple(idx[x] for x in r))
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "prefs", tuple(rows))

    def __len__(self) -> int:
        return len(self.prefs)

    def __iter__(self):
        return iter(self.prefs)

    @classmethod
    def maximal_single_peaked(cls, side: str, tree: Tree) -> "PreferenceSet":
        from .trees import enumerate_maximal_single_peaked

        return cls(side, tree.nodes, enumerate_maximal_single_peaked(tree))

    def tops(self) -> tuple[str, ...]:
        seen = {p[0] for p in self.prefs}
        return tuple(x for x in self.ground if x in seen)

    def restrict(self, keep: Iterable[tuple[str, ...]]) -> "PreferenceSet":
        keep = set(keep)
        return PreferenceSet(self.side, self.ground, tuple(p for p in self.prefs if p in keep))


@dataclass(frozen=True)
class DomainPair:
    """Anonymous domains for both sides, optionally tied to trees.

    tree_over_women constrains what men's rankings are supposed to be
    single-peaked on, and vice versa. Single-peakedness is *not* enforced at
    construction; check_tree_single_peaked reports offenders so that broken
    domains can be loaded and diagnosed.
    """

    market: Market
    men_set: PreferenceSet
    women_set: PreferenceSet
    tree_over_women: Tree | None = None
    tree_over_men: Tree | None = None

    def __post_init__(self):
        if self.men_set.side != "men" or self.women_set.side != "women":
            raise InputError("men_set must have side 'men' and women_set side 'women'")
        if self.men_set.ground != self.market.women:
            raise InputError("men's ground must be the market's women, in order")
        if self.women_set.ground != self.market.men:
            raise InputError("women's ground must be the market's men, in order")
        if self.tree_over_women is not None and set(self.tree_over_women.nodes) != set(self.market.women):
            raise InputError("tree_over_women must span exactly the women")
        if self.tree_over_men is not None and set(self.tree_over_men.nodes) != set(self.market.men):
            raise InputError("tree_over_men must span exactly the men")


@dataclass(frozen=True)
class PatternWitness:
    """A concrete violation or forced-pattern certificate.

    kind: "td-violation", "rotation-violation", or "td-triple". elements are
    the distinct ground members in role order; prefs maps role patterns
    (e.g. "xyz") to the full rankings realizing them. detail carries the
    construction case for the forced builders.
    """

    kind: str
    elements: tuple[str, ...]
    prefs: tuple[tuple[str, tuple[str, ...]], ...]
    detail: str = ""

    def pref(self, role: str) -> tuple[str, ...]:
        for r, p in self.prefs:
            if r == role:
                return p
        raise KeyError(role)


def _contains_in_order(ranking: tuple[str, ...], pattern: Sequence[str]) -> bool:
    pos = {x: i for i, x in enumerate(ranking)}
    last = -1
    for x in pattern:
        i = pos.get(x)
        if i is None or i <= last:
            return False
        last = i
    return True


_ROLE_PATTERNS = {
    "td-violation": (("xyz", "xyz"), ("xzy", "xzy")),
    "rotation-violation": (("xyzt", "xyzt"), ("zxt", "zxt")),
    "td-triple": (("xyz", "xyz"), ("xzy", "xzy"), ("yxz", "yxz")),
}


def witness_holds(w: PatternWitness) -> bool:
    """Replay a witness against the raw pattern definitions."""
    if w.kind not in _ROLE_PATTERNS:
        raise InputError(f"unknown witness kind {w.kind!r}")
    if len(set(w.elements)) != len(w.elements):
        return False
    role_of = dict(zip("xyzt", w.elements))
    for role, pattern_letters in _ROLE_PATTERNS[w.kind]:
        try:
            ranking = w.pref(role)
        except KeyError:
            return False
        pattern = [role_of[c] for c in pattern_letters]
        if not _contains_in_order(ranking, pattern):
            return False
    return True


def missing_tops(pset: PreferenceSet) -> tuple[str, ...]:
    have = {p[0] for p in pset.prefs}
    return tuple(x for x in pset.ground if x not in have)


def is_rich(pset: PreferenceSet) -> bool:
    """Every ground element is the top of some member."""
    return not missing_tops(pset)


def _positions(pset: PreferenceSet) -> list[dict[str, int]]:
    return [{x: i for i, x in enumerate(p)} for p in pset.prefs]


def find_td_violation(pset: PreferenceSet) -> PatternWitness | None:
    """First (x, y, z, P, P') with x..y..z in P and x..z..y in P', scanning
    elements in ground order and members in stored (lex) order."""
    pos = _positions(pset)
    for x in pset.ground:
        for y in pset.ground:
            if y == x:
                continue
            for z in pset.ground:
                if z == x or z == y:
                    continue
                for i, pi in enumerate(pos):
                    if not (pi[x] < pi[y] < pi[z]):
                        continue
                    for j, pj in enumerate(pos):
                        if pj[x] < pj[z] < pj[y]:
                            return PatternWitness(
                                "td-violation",
                                (x, y, z),
                                (("xyz", pset.prefs[i]), ("xzy", pset.prefs[j])),
                            )
    return None


def satisfies_td(pset: PreferenceSet) -> bool:
    return find_td_violation(pset) is None


def find_rotation_violation(pset: PreferenceSet) -> PatternWitness | None:
    """First (x, y, z, t, P, P') with x..y..z..t in P and z..x..t in P'."""
    pos = _positions(pset)
    for x in pset.ground:
        for y in pset.ground:
            if y == x:
                continue
            for z in pset.ground:
                if z in (x, y):
                    continue
                for t in pset.ground:
                    if t in (x, y, z):
                        continue
                    for i, pi in enumerate(pos):
                        if not (pi[x] < pi[y] < pi[z] < pi[t]):
                            continue
                        for j, pj in enumerate(pos):
                            if pj[z] < pj[x] < pj[t]:
                                return PatternWitness(
                                    "rotation-violation",
                                    (x, y, z, t),
                                    (("xyzt", pset.prefs[i]), ("zxt", pset.prefs[j])),
                                )
    return None


def satisfies_rotation(pset: PreferenceSet) -> bool:
    return find_rotation_violation(pset) is None


def oriented_rotation_violation(pset: PreferenceSet) -> PatternWitness | None:
    """A rotation violation whose tri-pattern member also ranks z above y.

    The extra comparison is what the four-profile gadget construction needs.
    Any violation can be reoriented: if the tri member ranks y above z, then
    (y, z, x, t) with the members' roles swapped is again a violation, and
    its tri member (the old quad one) ranks the new z (= old x) above the
    new y (= old z) for free.
    """
    w = find_rotation_violation(pset)
    if w is None:
        return None
    x, y, z, t = w.elements
    quad = w.pref("xyzt")
    tri = w.pref("zxt")
    tri_pos = {e: i for i, e in enumerate(tri)}
    if tri_pos[z] < tri_pos[y]:
        return w
    flipped = PatternWitness(
        "rotation-violation",
        (y, z, x, t),
        (("xyzt", tri), ("zxt", quad)),
        detail="reoriented",
    )
    assert witness_holds(flipped)
    quad_pos = {e: i for i, e in enumerate(quad)}
    assert quad_pos[x] < quad_pos[z]
    return flipped


def check_tree_single_peaked(domain: DomainPair) -> dict[str, tuple[tuple[str, ...], ...]]:
    """Per side with a tree: the member rankings that are not single-peaked
    on it. Empty tuples everywhere means the domain passes."""
    report: dict[str, tuple[tuple[str, ...], ...]] = {}
    if domain.tree_over_women is not None:
        report["men"] = tuple(
            p for p in domain.men_set.prefs if not is_single_peaked(p, domain.tree_over_women)
        )
    if domain.tree_over_men is not None:
        report["women"] = tuple(
            p for p in domain.women_set.prefs if not is_single_peaked(p, domain.tree_over_men)
        )
    return report


def _require_rich_sp(pset: PreferenceSet, tree: Tree, op: str) -> None:
    if set(pset.ground) != set(tree.nodes):
        raise PreconditionError(f"{op}: preference ground and tree nodes differ")
    bad = missing_tops(pset)
    if bad:
        raise PreconditionError(f"{op}: set is not rich (no member tops {', '.join(bad)})")
    for p in pset.prefs:
        if not is_single_peaked(p, tree):
            raise PreconditionError(f"{op}: member {p} is not single-peaked on the tree")


def td_triple_witness(pset: PreferenceSet, tree: Tree) -> PatternWitness:
    """From a rich single-peaked set violating top dominance, force a triple
    (x, y, z) realizing all three patterns xyz, xzy, yxz.

    Construction: take a violation (x0, y, z) with members P realizing
    x0..y..z and P' realizing x0..z..y, plus any member T topping y. Let x
    be the meet of the paths y->x0 and x0->z. Single-peakedness pushes x
    above y in P, above z in P', and above z in T (x sits on the y->z path),
    giving the three patterns on (x, y, z). A brute scan over all triples
    double-checks that a triple exists at all, and the returned witness is
    replayed before leaving.
    """
    _require_rich_sp(pset, tree, "td_triple_witness")
    viol = find_td_violation(pset)
    if viol is None:
        raise PreconditionError("td_triple_witness: TD holds, no violating triple exists")
    x0, y, z = viol.elements
    p_xyz = viol.pref("xyz")
    p_xzy = viol.pref("xzy")
    p_top_y = next(p for p in pset.prefs if p[0] == y)
    on_xz = set(tree.path_between(x0, z))
    x = next(v for v in tree.path_between(y, x0) if v in on_xz)
    witness = PatternWitness(
        "td-triple",
        (x, y, z),
        (("xyz", p_xyz), ("xzy", p_xzy), ("yxz", p_top_y)),
        detail="direct" if x == x0 else "meet",
    )
    assert witness_holds(witness), f"forced triple failed replay: {witness}"
    assert _brute_triple_exists(pset), "constructive triple found but brute scan disagrees"
    return witness


def _brute_triple_exists(pset: PreferenceSet) -> bool:
    pos = _positions(pset)
    for x in pset.ground:
        for y in pset.ground:
            if y == x:
                continue
            for z in pset.ground:
                if z in (x, y):
                    continue
                have_xyz = any(p[x] < p[y] < p[z] for p in pos)
                have_xzy = any(p[x] < p[z] < p[y] for p in pos)
                have_yxz = any(p[y] < p[x] < p[z] for p in pos)
                if have_xyz and have_xzy and have_yxz:
                    return True
    return False


def _first_topping(pset: PreferenceSet, x: str) -> tuple[str, ...]:
    return next(p for p in pset.prefs if p[0] == x)


def forced_rotation_witness(pset: PreferenceSet, tree: Tree) -> PatternWitness:
    """Force a rotation violation from any rich single-peaked set on a tree
    with at least 5 nodes.

    Classifies the canonical 5-node subtree and walks the case analysis for
    its shape, using only tops guaranteed by richness and orders forced by
    single-peakedness. The result is replayed against the definition.
    """
    _require_rich_sp(pset, tree, "forced_rotation_witness")
    if tree.k < 5:
        raise PreconditionError(f"forced_rotation_witness: tree has {tree.k} nodes, need at least 5")
    shape = classify_five_node_subtrees(tree)[0]
    x1, x2, x3, x4, x5 = shape.labels

    def pos(p: tuple[str, ...]) -> dict[str, int]:
        return {e: i for i, e in enumerate(p)}

    if shape.kind == PATH:
        p1 = _first_topping(pset, x1)
        p3 = _first_topping(pset, x3)
        p5 = _first_topping(pset, x5)
        if pos(p3)[x1] < pos(p3)[x5]:
            witness = PatternWitness(
                "rotation-violation",
                (x1, x2, x3, x5),
                (("xyzt", p1), ("zxt", p3)),
                detail="path-near-end",
            )
        else:
            witness = PatternWitness(
                "rotation-violation",
                (x5, x4, x3, x1),
                (("xyzt", p5), ("zxt", p3)),
                detail="path-far-end",
            )
    elif shape.kind == SPIDER:
        p1 = _first_topping(pset, x1)
        u, v = (x4, x5) if pos(p1)[x4] < pos(p1)[x5] else (x5, x4)
        p_u = _first_topping(pset, u)
        if pos(p_u)[x2] < pos(p_u)[v]:
            witness = PatternWitness(
                "rotation-violation",
                (x2, x3, u, v),
                (("xyzt", p1), ("zxt", p_u)),
                detail="spider-arm-beats-tail",
            )
        else:
            p_v = _first_topping(pset, v)
            if pos(p_v)[u] < pos(p_v)[x1]:
                witness = PatternWitness(
                    "rotation-violation",
                    (u, x3, v, x1),
                    (("xyzt", p_u), ("zxt", p_v)),
                    detail="spider-arms-close",
                )
            else:
                witness = PatternWitness(
                    "rotation-violation",
                    (x3, x2, x1, u),
                    (("xyzt", p_v), ("zxt", p1)),
                    detail="spider-tail-beats-arm",
                )
    elif shape.kind == STAR:
        p1 = _first_topping(pset, x1)
        leaves = sorted((x2, x3, x4, x5), key=lambda e: pos(p1)[e])
        a, b, c = leaves[0], leaves[1], leaves[2]
        p_b = _first_topping(pset, b)
        witness = PatternWitness(
            "rotation-violation",
            (x1, a, b, c),
            (("xyzt", p1), ("zxt", p_b)),
            detail="star-center-quad",
        )
    else:
        raise AssertionError(f"unknown shape kind {shape.kind}")
    assert witness_holds(witness), f"forced rotation witness failed replay: {witness}"
    return witness


def td_selection(tree: Tree) -> tuple[tuple[str, ...], ...]:
    """One single-peaked ranking per peak such that the whole selection is
    rich and satisfies top dominance.

    The canonical attempt ranks, from each peak, the remaining nodes by
    (tree distance, node index); its prefixes are parent-closed, hence
    single-peaked. If that selection breaks top dominance, fall back to a
    backtracking search over all single-peaked members per peak, in lex
    order. Raises when no selection exists at all.
    """
    idx = {x: i for i, x in enumerate(tree.nodes)}
    canonical = []
    for peak in tree.nodes:
        rest = sorted((x for x in tree.nodes if x != peak), key=lambda x: (tree.distance(peak, x), idx[x]))
        canonical.append((peak, *rest))
    cand_set = PreferenceSet("men", tree.nodes, tuple(canonical))
    if satisfies_td(cand_set):
        return cand_set.prefs

    from .trees import enumerate_maximal_single_peaked

    per_peak: dict[str, list[tuple[str, ...]]] = {x: [] for x in tree.nodes}
    for p in enumerate_maximal_single_peaked(tree):
        per_peak[p[0]].append(p)

    def conflict(a: tuple[str, ...], b: tuple[str, ...]) -> bool:
        pa = {x: i for i, x in enumerate(a)}
        pb = {x: i for i, x in enumerate(b)}
        for x in tree.nodes:
            for y in tree.nodes:
                if y == x:
                    continue
                for z in tree.nodes:
                    if z in (x, y):
                        continue
                    if pa[x] < pa[y] < pa[z] and pb[x] < pb[z] < pb[y]:
                        return True
        return False

    chosen: list[tuple[str, ...]] = []

    def search(k: int) -> bool:
        if k == len(tree.nodes):
            return True
        for p in per_peak[tree.nodes[k]]:
            if any(conflict(p, q) or conflict(q, p) for q in chosen):
                continue
            chosen.append(p)
            if search(k + 1):
                return True
            chosen.pop()
        return False

    if not search(0):
        raise PreconditionError("no rich TD selection")
    return tuple(sorted(chosen, key=lambda r: tuple(idx[x] for x in r)))


def rich_rotation_sweep(pset: PreferenceSet, budget: int = 1 << 21) -> dict:
    """Exhaustively test every rich subset of the set for a rotation
    violation.

    Returns counts plus any rich subsets that satisfy rotation (as tuples of
    member indices). Pairwise violations are precomputed as bitmasks, so the
    sweep itself is linear in the number of subsets times set bits.
    """
    m = len(pset.prefs)
    if 1 << m > budget:
        raise BudgetError(f"subset sweep needs 2^{m} subsets, over budget {budget}", required=1 << m, budget=budget)
    pos = _positions(pset)
    ground = pset.ground
    conflict = [0] * m
    for i, pi in enumerate(pos):
        for j, pj in enumerate(pos):
            hit = False
            for x in ground:
                for y in ground:
                    if y == x:
                        continue
                    for z in ground:
                        if z in (x, y):
                            continue
                        if not (pi[x] < pi[y] < pi[z]):
                            continue
                        for t in ground:
                            if t in (x, y, z) or pi[t] <= pi[z]:
                                continue
                            if pj[z] < pj[x] < pj[t]:
                                hit = True
                                break
                        if hit:
                            break
                    if hit:
                        break
                if hit:
                    break
            if hit:
                conflict[i] |= 1 << j
                conflict[j] |= 1 << i
    topbit = [1 << pset.ground.index(p[0]) for p in pset.prefs]
    full_cover = (1 << len(ground)) - 1
    rich_count = 0
    violating = 0
    survivors: list[tuple[int, ...]] = []
    for mask in range(1, 1 << m):
        cover = 0
        bad = False
        mm = mask
        while mm:
            low = (mm & -mm).bit_length() - 1
            cover |= topbit[low]
            if conflict[low] & mask:
                bad = True
            mm &= mm - 1
        if cover != full_cover:
            continue
        rich_count += 1
        if bad:
            violating += 1
        else:
            survivors.append(tuple(i for i in range(m) if mask >> i & 1))
    return {
        "members": m,
        "subsets": (1 << m) - 1,
        "rich_subsets": rich_count,
        "rich_violating": violating,
        "rich_satisfying_rotation": survivors,
    }
