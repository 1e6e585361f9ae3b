"""Trees over one side of a market, and single-peakedness with respect to them.

A ranking is single-peaked w.r.t. a tree when, walking from its top toward any
node y, every node passed on the way is weakly preferred to y. Equivalently:
every prefix of the ranking induces a connected subtree. The enumerator below
exploits the prefix form directly, so its cost is linear in the output size
rather than in k! candidates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Sequence

from .model import InputError, PreconditionError

PATH = "path"
SPIDER = "spider"
STAR = "star"


@dataclass(frozen=True)
class Tree:
    """An undirected tree over named nodes.

    Node order is the canonical index order for scans and enumeration.
    Validation rejects anything that is not a single connected acyclic graph.
    """

    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str], ...]
    _adj: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        nodes = tuple(self.nodes)
        if len(set(nodes)) != len(nodes):
            raise InputError("duplicate node ids")
        if len(nodes) < 1:
            raise InputError("empty tree")
        node_set = set(nodes)
        adj: dict[str, list[str]] = {x: [] for x in nodes}
        seen_edges = set()
        canon = []
        for a, b in self.edges:
            if a not in node_set or b not in node_set:
                raise InputError(f"edge {a}-{b} references unknown node")
            if a == b:
                raise InputError(f"self-loop at {a}")
            key = frozenset((a, b))
            if key in seen_edges:
                raise InputError(f"duplicate edge {a}-{b}")
            seen_edges.add(key)
            adj[a].append(b)
            adj[b].append(a)
            canon.append((a, b))
        if len(canon) != len(nodes) - 1:
            raise InputError(f"not a tree: {len(nodes)} nodes need {len(nodes) - 1} edges, got {len(canon)}")
        # edge count is right, so connectivity alone rules out cycles
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != len(nodes):
            missing = sorted(node_set - seen)
            raise InputError(f"not a tree: disconnected (unreachable: {', '.join(missing)})")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", tuple(canon))
        idx = {x: i for i, x in enumerate(nodes)}
        object.__setattr__(self, "_adj", {x: tuple(sorted(ys, key=idx.__getitem__)) for x, ys in adj.items()})

    @property
    def k(self) -> int:
        return len(self.nodes)

    def neighbors(self, x: str) -> tuple[str, ...]:
        try:
            return self._adj[x]
        except KeyError:
            raise InputError(f"unknown node {x!r}") from None

    def degree(self, x: str) -> int:
        return len(self.neighbors(x))

    def path_between(self, x: str, y: str) -> tuple[str, ...]:
        """The unique path from x to y, inclusive of both endpoints."""
        self.neighbors(x), self.neighbors(y)
        parent = {x: None}
        stack = [x]
        while stack:
            u = stack.pop()
            if u == y:
                break
            for v in self._adj[u]:
                if v not in parent:
                    parent[v] = u
                    stack.append(v)
        path = [y]
        while path[-1] != x:
            path.append(parent[path[-1]])
        path.reverse()
        return tuple(path)

    def distance(self, x: str, y: str) -> int:
        return len(self.path_between(x, y)) - 1

    @classmethod
    def path_graph(cls, nodes: Sequence[str]) -> "Tree":
        nodes = tuple(nodes)
        return cls(nodes, tuple(zip(nodes, nodes[1:])))

    @classmethod
    def star_graph(cls, nodes: Sequence[str]) -> "Tree":
        """nodes[0] is the center."""
        nodes = tuple(nodes)
        return cls(nodes, tuple((nodes[0], x) for x in nodes[1:]))

    @classmethod
    def spider_graph(cls, nodes: Sequence[str]) -> "Tree":
        """A chain over nodes[:-2] with the last two nodes hanging off its end."""
        nodes = tuple(nodes)
        if len(nodes) < 5:
            raise InputError("spider needs at least 5 nodes")
        chain = nodes[:-2]
        edges = list(zip(chain, chain[1:]))
        edges += [(chain[-1], nodes[-2]), (chain[-1], nodes[-1])]
        return cls(nodes, tuple(edges))


def make_tree(kind: str, nodes: Sequence[str]) -> Tree:
    if kind == PATH:
        return Tree.path_graph(nodes)
    if kind == STAR:
        return Tree.star_graph(nodes)
    if kind == SPIDER:
        return Tree.spider_graph(nodes)
    raise InputError(f"unknown tree kind {kind!r}")


def is_single_peaked(ranking: Sequence[str], tree: Tree) -> bool:
    """Direct definitional check: every node on the path from the top to y
    must be weakly preferred to y.

    The ranking must be a permutation of the tree's nodes.
    """
    ranking = tuple(ranking)
    if sorted(ranking) != sorted(tree.nodes):
        raise InputError("ranking is not a permutation of the tree's nodes")
    pos = {x: i for i, x in enumerate(ranking)}
    top = ranking[0]
    for y in tree.nodes:
        py = pos[y]
        for x in tree.path_between(top, y):
            if pos[x] > py:
                return False
    return True


def is_single_peaked_linear(ranking: Sequence[str], order: Sequence[str]) -> bool:
    """Classical single-peakedness w.r.t. a linear order.

    For every pair, the one lying strictly between the other and the top (in
    the order) must be preferred. Kept independent of the tree-based check on
    purpose: a path graph must agree with this on every input.
    """
    ranking = tuple(ranking)
    if sorted(ranking) != sorted(order):
        raise InputError("ranking is not a permutation of the order's elements")
    pos = {x: i for i, x in enumerate(ranking)}
    at = {x: i for i, x in enumerate(order)}
    t = at[ranking[0]]
    for x in ranking:
        for y in ranking:
            if (at[y] < at[x] <= t or t <= at[x] < at[y]) and pos[x] > pos[y]:
                return False
    return True


def enumerate_maximal_single_peaked(tree: Tree) -> tuple[tuple[str, ...], ...]:
    """All rankings over the tree's nodes that are single-peaked w.r.t. it.

    Grows rankings prefix-by-prefix, extending only by nodes adjacent to the
    current prefix (the frontier), so every partial ranking already satisfies
    the connected-prefix property and no candidate is ever discarded. Output
    is lex-sorted in node-index order.
    """
    idx = {x: i for i, x in enumerate(tree.nodes)}
    out: list[tuple[str, ...]] = []
    k = tree.k

    def grow(prefix: list[str], frontier: list[str], used: set[str]):
        if len(prefix) == k:
            out.append(tuple(prefix))
            return
        for x in sorted(frontier, key=idx.__getitem__):
            nxt = [y for y in frontier if y != x]
            added = [y for y in tree.neighbors(x) if y not in used and y not in nxt]
            used.add(x)
            prefix.append(x)
            grow(prefix, nxt + added, used)
            prefix.pop()
            used.remove(x)

    for peak in tree.nodes:
        grow([peak], list(tree.neighbors(peak)), {peak})
    return tuple(out)


@dataclass(frozen=True)
class TreeShape:
    """One classified 5-node connected subtree.

    kind is "path", "spider" (one degree-3 node), or "star". labels maps the
    shape's role positions x1..x5 onto actual node ids:
      path:   x1-x2-x3-x4-x5 with x1 the lower-indexed endpoint
      spider: x3 the degree-3 center, x2 its degree-2 neighbor, x1 the leaf
              behind x2, x4/x5 the remaining leaves in index order
      star:   x1 the center, x2..x5 the leaves in index order
    """

    kind: str
    labels: tuple[str, ...]


def _label_shape(tree: Tree, nodes: tuple[str, ...]) -> TreeShape:
    sub = set(nodes)
    deg = {x: sum(1 for y in tree.neighbors(x) if y in sub) for x in nodes}
    nbrs = {x: [y for y in tree.neighbors(x) if y in sub] for x in nodes}
    idx = {x: i for i, x in enumerate(tree.nodes)}
    profile = sorted(deg.values())
    if profile == [1, 1, 2, 2, 2]:
        ends = sorted((x for x in nodes if deg[x] == 1), key=idx.__getitem__)
        walk = [ends[0]]
        while len(walk) < 5:
            walk.append(next(y for y in nbrs[walk[-1]] if y not in walk))
        return TreeShape(PATH, tuple(walk))
    if profile == [1, 1, 1, 2, 3]:
        center = next(x for x in nodes if deg[x] == 3)
        mid = next(x for x in nbrs[center] if deg[x] == 2)
        tail = next(x for x in nbrs[mid] if x != center)
        arms = sorted((x for x in nbrs[center] if x != mid), key=idx.__getitem__)
        return TreeShape(SPIDER, (tail, mid, center, arms[0], arms[1]))
    if profile == [1, 1, 1, 1, 4]:
        center = next(x for x in nodes if deg[x] == 4)
        leaves = sorted((x for x in nodes if x != center), key=idx.__getitem__)
        return TreeShape(STAR, (center, *leaves))
    raise AssertionError(f"impossible 5-node tree degree profile {profile}")


def five_node_subtrees(tree: Tree) -> list[tuple[str, ...]]:
    """All 5-subsets of nodes inducing a connected subtree, lex order."""
    found = []
    for combo in combinations(tree.nodes, 5):
        sub = set(combo)
        seen = {combo[0]}
        stack = [combo[0]]
        while stack:
            x = stack.pop()
            for y in tree.neighbors(x):
                if y in sub and y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) == 5:
            found.append(combo)
    return found


def classify_five_node_subtrees(tree: Tree, exhaustive: bool = False) -> list[TreeShape]:
    """Classify connected 5-node subtrees by shape.

    With exhaustive=False only the canonical (lex-first) subtree is
    classified; exhaustive=True classifies them all. Trees with fewer than 5
    nodes have none, which is an error here rather than an empty answer.
    """
    if tree.k < 5:
        raise PreconditionError(f"need at least 5 nodes, tree has {tree.k}")
    subs = five_node_subtrees(tree)
    if not exhaustive:
        subs = subs[:1]
    return [_label_shape(tree, s) for s in subs]
