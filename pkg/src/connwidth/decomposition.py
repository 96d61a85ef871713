"""Branch decompositions: cubic trees whose leaves biject onto the ground set.

Node ids are ints.  Builders in this module give leaf ``i`` the id ``i`` (the
element it carries) and number internal nodes from ``n`` upward, so a leaf
edge's side set (taken at the smaller endpoint) is always a singleton.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterator

from .core import (CapacityError, ConnectivitySystem, GroundSet, InputError,
                   canonical_subsets, check_cap, members, popcount, submasks)

MAX_DP = 14
MIN_ENUM, MAX_ENUM = 3, 7


@dataclass(frozen=True)
class DecompositionTree:
    ground: GroundSet
    edges: tuple[tuple[int, int], ...]
    leaf_map: dict = field(hash=False)   # leaf node -> element index

    def __post_init__(self):
        object.__setattr__(self, "edges",
                           tuple(sorted((min(u, v), max(u, v)) for u, v in self.edges)))
        self.validate()

    @property
    def nodes(self) -> list[int]:
        ns = set(self.leaf_map)
        for u, v in self.edges:
            ns.update((u, v))
        return sorted(ns)

    def adjacency(self) -> dict[int, list[int]]:
        adj = defaultdict(list)
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def validate(self) -> None:
        n = self.ground.size
        if sorted(self.leaf_map.values()) != list(range(n)):
            raise InputError("leaf map is not a bijection onto the ground set")
        if len(set(self.edges)) != len(self.edges) or any(u == v for u, v in self.edges):
            raise InputError("tree has repeated edges or loops")
        nodes = self.nodes
        if n <= 1:
            if self.edges or len(nodes) != n:
                raise InputError("a tree over at most one element has no edges")
            return
        if len(self.edges) != len(nodes) - 1:
            raise InputError("tree must have |nodes| - 1 edges")
        adj = self.adjacency()
        seen = {nodes[0]}
        stack = [nodes[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != len(nodes):
            raise InputError("tree is not connected")
        for node in nodes:
            deg = len(adj[node])
            if node in self.leaf_map:
                if deg != 1:
                    raise InputError(f"leaf node {node} has degree {deg}")
            elif deg != 3:
                raise InputError(f"internal node {node} has degree {deg}, expected 3")

    def side_mask(self, e: tuple[int, int]) -> int:
        u, v = min(e), max(e)
        if (u, v) not in self.edges:
            raise InputError(f"edge {e} is not in the tree")
        adj = self.adjacency()
        seen = {u, v}
        stack = [u]
        mask = 0
        while stack:
            x = stack.pop()
            if x in self.leaf_map:
                mask |= 1 << self.leaf_map[x]
            for w in adj[x]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return mask

    def splits(self) -> frozenset[int]:
        """Edge bipartitions, each normalised to the side missing element 0."""
        full = self.ground.full
        out = set()
        for e in self.edges:
            s = self.side_mask(e)
            out.add(s if not s & 1 else full & ~s)
        return frozenset(out)


def edge_side_set(tree: DecompositionTree, e) -> int:
    return tree.side_mask(e)


def _same_ground(tree: DecompositionTree, system: ConnectivitySystem) -> None:
    if tree.ground != system.ground:
        raise InputError("tree and system have different ground sets")


def width_of_edge(tree: DecompositionTree, system: ConnectivitySystem, e) -> int:
    _same_ground(tree, system)
    return system.evaluate(tree.side_mask(e))


@dataclass(frozen=True)
class EdgeCutRecord:
    edge: tuple[int, int]
    side: int
    width: int


@dataclass(frozen=True)
class WidthReport:
    records: tuple[EdgeCutRecord, ...]
    width: int


def width_of_tree(tree: DecompositionTree, system: ConnectivitySystem) -> WidthReport:
    _same_ground(tree, system)
    records = []
    for e in tree.edges:
        side = tree.side_mask(e)
        records.append(EdgeCutRecord(e, side, system.evaluate(side)))
    width = max((r.width for r in records), default=system.evaluate(system.ground.full))
    return WidthReport(tuple(records), width)


def degenerate_tree(ground: GroundSet) -> DecompositionTree:
    n = ground.size
    if n > 2:
        raise InputError("degenerate trees exist only for |X| <= 2")
    edges = ((0, 1),) if n == 2 else ()
    return DecompositionTree(ground, edges, {i: i for i in range(n)})


# --------------------------------------------------------------------- DP


def _lowbit(mask: int) -> int:
    return mask & -mask


def _branch_table(system: ConnectivitySystem):
    """W(S) and the chosen split of S for every nonempty S, smallest first."""
    n = system.n
    f = system.values()
    rank = _canonical_rank(n)
    best = [0] * (1 << n)
    choice = [0] * (1 << n)
    for s in sorted(range(1, 1 << n), key=popcount):
        if s & (s - 1) == 0:
            best[s] = f[s]
            continue
        low = _lowbit(s)
        rest = s ^ low
        top = None
        arg = 0
        # unordered splits: the side holding the lowest element represents each
        for sub in submasks(rest):
            a = sub | low
            if a == s:
                continue
            val = max(best[a], best[s ^ a])
            if top is None or val < top or (val == top and rank[a] < rank[arg]):
                top, arg = val, a
        best[s] = max(f[s], top)
        choice[s] = arg
    return best, choice, rank


def _canonical_rank(n: int) -> list[int]:
    rank = [0] * (1 << n)
    for i, m in enumerate(canonical_subsets(n)):
        rank[m] = i
    return rank


def _best_root_split(full: int, best: list[int], rank: list[int]) -> tuple[int, int]:
    low = _lowbit(full)
    top, arg = None, 0
    for sub in submasks(full ^ low):
        a = sub | low
        if a == full:
            continue
        val = max(best[a], best[full ^ a])
        if top is None or val < top or (val == top and rank[a] < rank[arg]):
            top, arg = val, a
    return top, arg


def exact_branchwidth(system: ConnectivitySystem) -> tuple[int, DecompositionTree]:
    """Exact branch-width by dynamic programming over subsets, with a witness.

    W(S) is the best width of a rooted subtree whose leaves are S (counting the
    edge above it); the root edge joins the two halves of the best split of X.
    """
    n = system.n
    check_cap(n, MAX_DP, "exact_branchwidth")
    if n < 2:
        return system.evaluate(system.ground.full), degenerate_tree(system.ground)
    best, choice, rank = _branch_table(system)
    full = system.ground.full
    width, a = _best_root_split(full, best, rank)

    edges = []
    counter = [n]

    def build(s: int) -> int:
        if s & (s - 1) == 0:
            return members(s)[0]
        node = counter[0]
        counter[0] += 1
        left = choice[s]
        for part in (left, s ^ left):
            edges.append((node, build(part)))
        return node

    edges.append((build(a), build(full ^ a)))
    tree = DecompositionTree(system.ground, tuple(edges), {i: i for i in range(n)})
    return width, tree


# --------------------------------------------------------- brute force


def enumerate_all_trees(ground: GroundSet) -> Iterator[DecompositionTree]:
    """Every cubic tree with leaves labelled by ``ground``, exactly once.

    Leaves 0, 1, 2 hang off one centre; each further leaf subdivides every
    existing edge in turn, giving (2n-5)!! trees.
    """
    n = ground.size
    if not MIN_ENUM <= n <= MAX_ENUM:
        raise CapacityError(f"enumerate_all_trees: |X| = {n} outside [{MIN_ENUM}, {MAX_ENUM}]")
    leaf_map = {i: i for i in range(n)}

    def grow(edges: list[tuple[int, int]], leaf: int, nxt: int):
        if leaf == n:
            yield DecompositionTree(ground, tuple(edges), leaf_map)
            return
        for i, (u, v) in enumerate(edges):
            new = edges[:i] + edges[i + 1:] + [(u, nxt), (v, nxt), (leaf, nxt)]
            yield from grow(new, leaf + 1, nxt + 1)

    yield from grow([(0, n), (1, n), (2, n)], 3, n + 1)


def brute_force_branchwidth(system: ConnectivitySystem) -> int:
    return min(width_of_tree(t, system).width for t in enumerate_all_trees(system.ground))


# ------------------------------------------------------------------ JSON


def tree_to_json(tree: DecompositionTree, system: ConnectivitySystem) -> dict:
    """Nested form rooted at the midpoint of the tree's first edge."""
    _same_ground(tree, system)
    labels = tree.ground.labels
    report = width_of_tree(tree, system)
    if not tree.edges:
        root = {"leaf": labels[0]} if tree.ground.size == 1 else {"children": []}
    else:
        adj = tree.adjacency()

        def nest(node: int, parent: int) -> dict:
            if node in tree.leaf_map:
                return {"leaf": labels[tree.leaf_map[node]]}
            kids = sorted(w for w in adj[node] if w != parent)
            return {"children": [nest(w, node) for w in kids]}

        u, v = tree.edges[0]
        root = {"children": [nest(u, v), nest(v, u)]}
    root["width"] = report.width
    root["edge_widths"] = [{"side": tree.ground.names(r.side), "width": r.width}
                           for r in report.records]
    return root


def tree_from_json(obj: dict, ground: GroundSet) -> DecompositionTree:
    """Inverse of :func:`tree_to_json` (width fields are ignored here)."""
    if not isinstance(obj, dict):
        raise InputError("decomposition: expected a JSON object")
    n = ground.size
    edges: list[tuple[int, int]] = []
    leaf_map: dict[int, int] = {}
    counter = [n]

    def walk(node, path: str) -> int:
        if not isinstance(node, dict):
            raise InputError(f"decomposition {path}: expected an object")
        if "leaf" in node:
            idx = ground.index(node["leaf"])
            if idx in leaf_map:
                raise InputError(f"decomposition {path}: element {node['leaf']!r} repeated")
            leaf_map[idx] = idx
            return idx
        kids = node.get("children")
        if not isinstance(kids, list) or len(kids) != 2:
            raise InputError(f"decomposition {path}: internal node needs exactly 2 children")
        me = counter[0]
        counter[0] += 1
        for i, kid in enumerate(kids):
            edges.append((me, walk(kid, f"{path}.children[{i}]")))
        return me

    if "leaf" in obj:
        walk(obj, "root")
    else:
        kids = obj.get("children")
        if kids == [] and n == 0:
            pass
        elif not isinstance(kids, list) or len(kids) != 2:
            raise InputError("decomposition root: expected exactly 2 children")
        else:
            a = walk(kids[0], "root.children[0]")
            b = walk(kids[1], "root.children[1]")
            edges.append((a, b))
    return DecompositionTree(ground, tuple(edges), leaf_map)


def recheck_json(obj: dict, system: ConnectivitySystem) -> list[str]:
    """Re-verify the widths recorded in a decomposition file; returns problems."""
    tree = tree_from_json(obj, system.ground)
    report = width_of_tree(tree, system)
    problems = []
    claimed = obj.get("edge_widths")
    if not isinstance(claimed, list):
        return ["missing 'edge_widths'"]
    actual = {frozenset([r.side, system.ground.complement(r.side)]): r.width
              for r in report.records}
    seen = set()
    for i, item in enumerate(claimed):
        side = system.ground.mask(item.get("side", []))
        key = frozenset([side, system.ground.complement(side)])
        if key not in actual:
            problems.append(f"edge_widths[{i}]: side is not a tree edge cut")
            continue
        seen.add(key)
        if system.evaluate(side) != item.get("width"):
            problems.append(f"edge_widths[{i}]: claimed {item.get('width')}, "
                            f"f(side) = {system.evaluate(side)}")
    if seen != set(actual):
        problems.append("edge_widths does not list every tree edge")
    if obj.get("width") != report.width:
        problems.append(f"width: claimed {obj.get('width')}, recomputed {report.width}")
    return problems
