"""Structural width measures: branch treewidth, domination width, local width.

Domination width of a forest is the least k such that for every subtree,
the associated generalized t-graphs are k-dominated: the members of core
treewidth at most k homomorphically cover the rest.  On UNION-free input
it coincides with branch treewidth, which only inspects root-to-node
branches.  `find_hard_witness` extracts, from a forest of width at least k,
a member that is maximal under the homomorphism preorder; the hardness
generator builds its reduction instances from that witness.

Everything here is exact and desk-scale: instance caps raise rather than
degrade to heuristics, and homomorphism/ctw results are memoized across a
single analysis.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InstanceTooLarge
from .graphs import DEFAULT_TW_CAP
from .hom import GeneralizedTGraph, ctw, find_homomorphism
from .trees import (
    ChildrenAssignment,
    Subtree,
    WdPF,
    WdPT,
    associated_with_provenance,
    subtrees,
)

MAX_TREES = 4
MAX_NODES_PER_TREE = 12
MAX_VARS_PER_MEMBER = 14


class HomCache:
    """Memo for directed homomorphism tests between generalized t-graphs."""

    def __init__(self):
        self._seen: dict[tuple[GeneralizedTGraph, GeneralizedTGraph], bool] = {}

    def maps(self, a: GeneralizedTGraph, b: GeneralizedTGraph) -> bool:
        key = (a, b)
        if key not in self._seen:
            self._seen[key] = find_homomorphism(a, b) is not None
        return self._seen[key]


@dataclass(frozen=True)
class WidthReport:
    measure: str
    value: int
    breakdown: tuple[tuple[str, int], ...]

    def __post_init__(self):
        worst = max((v for _, v in self.breakdown), default=1)
        if self.value != max(worst, 1):
            raise ValueError("report value inconsistent with its breakdown")

    def render(self) -> str:
        lines = [f"{self.measure} = {self.value}"]
        lines.extend(f"  {label}: {v}" for label, v in self.breakdown)
        return "\n".join(lines) + "\n"


def _check_caps(forest: WdPF) -> None:
    if len(forest) > MAX_TREES:
        raise InstanceTooLarge(f"{len(forest)} trees exceed the cap of {MAX_TREES}")
    for i, tree in enumerate(forest):
        if len(tree) > MAX_NODES_PER_TREE:
            raise InstanceTooLarge(
                f"tree {i} has {len(tree)} nodes, cap is {MAX_NODES_PER_TREE}"
            )


def _member_ctw(g: GeneralizedTGraph, cap: int) -> int:
    if len(g.tgraph.vars()) > MAX_VARS_PER_MEMBER:
        raise InstanceTooLarge(
            f"{len(g.tgraph.vars())} variables in a merged t-graph, "
            f"cap is {MAX_VARS_PER_MEMBER}"
        )
    return ctw(g, cap=cap)


def branch_treewidth(tree: WdPT, cap: int = DEFAULT_TW_CAP) -> int:
    """Max over non-root nodes of the ctw of the branch t-graph above them."""
    tree.ensure_nr()
    worst = 1
    for n in tree.nodes:
        if n == tree.root:
            continue
        branch = []
        up = tree.parent(n)
        while up is not None:
            branch.append(up)
            up = tree.parent(up)
        above = tree.pat(branch)
        g = GeneralizedTGraph(tree.label(n) | above, above.vars())
        worst = max(worst, ctw(g, cap=cap))
    return worst


def local_tractability_width(forest: WdPF, cap: int = DEFAULT_TW_CAP) -> int:
    """Max over non-root nodes of ctw(pat(n), vars(n) intersect vars(parent))."""
    forest.ensure_nr()
    worst = 1
    for tree in forest:
        for n in tree.nodes:
            if n == tree.root:
                continue
            shared = tree.node_vars(n) & tree.node_vars(tree.parent(n))
            worst = max(worst, ctw(GeneralizedTGraph(tree.label(n), shared), cap=cap))
    return worst


def is_k_dominated(
    gset,
    k: int,
    cache: HomCache | None = None,
    cap: int = DEFAULT_TW_CAP,
) -> bool:
    """Do the members of ctw <= k homomorphically cover everything else?

    Vacuously true for the empty set.
    """
    cache = cache or HomCache()
    members = list(gset)
    low = [g for g in members if _member_ctw(g, cap) <= k]
    for g in members:
        if g in low:
            continue
        if not any(cache.maps(d, g) for d in low):
            return False
    return True


def _subtree_demand(gset, cache: HomCache, cap: int) -> int:
    """Least k making the set k-dominated (1 for the empty set)."""
    if not gset:
        return 1
    top = max(_member_ctw(g, cap) for g in gset)
    for k in range(1, top + 1):
        if is_k_dominated(gset, k, cache, cap):
            return k
    return top  # unreachable: the set always dominates itself at its max ctw


def domination_width(forest: WdPF, cap: int = DEFAULT_TW_CAP) -> int:
    forest.ensure_nr()
    _check_caps(forest)
    cache = HomCache()
    worst = 1
    for sub in subtrees(forest):
        gset = [g for _, g in associated_with_provenance(forest, sub)]
        worst = max(worst, _subtree_demand(gset, cache, cap))
    return worst


def width_report(forest: WdPF, measure: str, cap: int = DEFAULT_TW_CAP) -> WidthReport:
    if measure == "bw":
        rows = [
            (f"tree {i}", branch_treewidth(tree, cap=cap))
            for i, tree in enumerate(forest)
        ]
        return WidthReport("bw", max(v for _, v in rows), tuple(rows))
    if measure == "local":
        forest.ensure_nr()
        rows = []
        for i, tree in enumerate(forest):
            for n in tree.nodes:
                if n == tree.root:
                    continue
                shared = tree.node_vars(n) & tree.node_vars(tree.parent(n))
                value = ctw(GeneralizedTGraph(tree.label(n), shared), cap=cap)
                rows.append((f"tree {i} node n{n}", value))
        return WidthReport("local", max((v for _, v in rows), default=1), tuple(rows))
    if measure == "dw":
        forest.ensure_nr()
        _check_caps(forest)
        cache = HomCache()
        rows = []
        for sub in subtrees(forest):
            pairs = associated_with_provenance(forest, sub)
            gset = [g for _, g in pairs]
            domains = ", ".join(str(set(ca.domain)) for ca, _ in pairs) or "none"
            label = f"{sub} ({len(gset)} members; assignment domains: {domains})"
            rows.append((label, _subtree_demand(gset, cache, cap)))
        return WidthReport("dw", max((v for _, v in rows), default=1), tuple(rows))
    raise ValueError(f"unknown measure {measure!r}")


@dataclass(frozen=True)
class HardWitness:
    subtree: Subtree
    assignment: ChildrenAssignment
    tgraph: GeneralizedTGraph


def find_hard_witness(forest: WdPF, k: int, cap: int = DEFAULT_TW_CAP) -> HardWitness | None:
    """From a forest of domination width >= k, a subtree and an associated
    t-graph of ctw >= k that is maximal under the homomorphism preorder:
    whatever set member maps into it, it maps back.  None iff dw < k.

    Follows the width definition directly: pick a subtree whose set is not
    (k-1)-dominated, drop everything dominated by a low-ctw member, and take
    any element of a source strongly connected component of the remaining
    homomorphism digraph.  The returned pair is re-verified against the full
    member set before being handed out.
    """
    forest.ensure_nr()
    _check_caps(forest)
    cache = HomCache()
    for sub in subtrees(forest):
        pairs = associated_with_provenance(forest, sub)
        gset = [g for _, g in pairs]
        if is_k_dominated(gset, k - 1, cache, cap):
            continue
        low = [g for g in gset if _member_ctw(g, cap) <= k - 1]
        hard = [
            g
            for g in gset
            if _member_ctw(g, cap) >= k and not any(cache.maps(d, g) for d in low)
        ]
        picked = _source_component_member(hard, cache)
        for ca, g in pairs:
            if g == picked:
                witness = HardWitness(sub, ca, g)
                _verify_witness(witness, gset, k, cache, cap)
                return witness
    return None


def _source_component_member(hard, cache: HomCache) -> GeneralizedTGraph:
    # Homomorphism existence is transitive, so the edge relation is already
    # its own reachability relation; no closure pass is needed.
    n = len(hard)
    reach = [
        [i == j or cache.maps(hard[i], hard[j]) for j in range(n)] for i in range(n)
    ]
    for i in range(n):
        scc = {j for j in range(n) if reach[i][j] and reach[j][i]}
        if all(not reach[j][i] for j in range(n) if j not in scc):
            return hard[min(scc)]
    raise AssertionError("a finite digraph always has a source component")


def _verify_witness(w: HardWitness, gset, k: int, cache: HomCache, cap: int) -> None:
    if _member_ctw(w.tgraph, cap) < k:
        raise AssertionError("hard witness lost its width")
    for other in gset:
        if cache.maps(other, w.tgraph) and not cache.maps(w.tgraph, other):
            raise AssertionError("hard witness is not maximal under homomorphism")
