"""Shared fixtures: the worked examples every module is checked against."""

from __future__ import annotations

from wdsparql.terms import TGraph, Triple, iri, var
from wdsparql.trees import WdPF, WdPT

P1_TEXT = "(((?x,p,?y) OPT (?z,q,?x)) OPT ((?y,r,?o1) AND (?o1,r,?o2)))"
P2_TEXT = "(((?x,p,?y) OPT (?z,q,?x)) OPT ((?y,r,?z) AND (?z,r,?o2)))"
P_UNION_TEXT = f"({P1_TEXT} UNION ((?x,p,?y) OPT ((?z,q,?x) AND (?w,q,?z))))"


def clique_block(k: int, prefix: str = "o") -> tuple[list[Triple], list]:
    """The t-graph K_k(?o1..?ok) = {(?oi, r, ?oj) | i < j} and its variables."""
    vs = [var(f"{prefix}{i}") for i in range(1, k + 1)]
    triples = [
        Triple(vs[i], iri("r"), vs[j]) for i in range(k) for j in range(i + 1, k)
    ]
    return triples, vs


def clique_pattern_tgraph(k: int) -> TGraph:
    """The generalized t-graph S of the treewidth example: an anchored clique."""
    block, vs = clique_block(k)
    return TGraph(
        tuple(
            [
                Triple(var("z"), iri("q"), var("x")),
                Triple(var("x"), iri("p"), var("y")),
                Triple(var("y"), iri("r"), vs[0]),
            ]
            + block
        )
    )


def collapsing_tgraph(k: int) -> TGraph:
    """S' of the same example: the clique plus a self-loop sink it folds onto."""
    return TGraph(
        clique_pattern_tgraph(k).triples
        + (
            Triple(var("y"), iri("r"), var("o")),
            Triple(var("o"), iri("r"), var("o")),
        )
    )


XYZ = frozenset({var("x"), var("y"), var("z")})


def two_node_clique_tree(k: int) -> WdPT:
    """Root {(?y,r,?y)} with one child {(?y,r,?o1)} + K_k: branch width 1,
    local width k-1."""
    block, vs = clique_block(k)
    return WdPT(
        0,
        {1: 0},
        {
            0: TGraph((Triple(var("y"), iri("r"), var("y")),)),
            1: TGraph(tuple([Triple(var("y"), iri("r"), vs[0])] + block)),
        },
    )


def forest_family(k: int, with_third_tree: bool = False) -> WdPF:
    """The running two/three-tree forest family.

    Tree 0: root {(?x,p,?y)} with children {(?z,q,?x)} and {(?y,r,?o1)}+K_k.
    Tree 1: root {(?x,p,?y)} with child {(?z,q,?x),(?w,q,?z)}.
    Tree 2 (optional): root {(?x,p,?y),(?z,q,?x)} with child
    {(?y,r,?o),(?o,r,?o)}; adding it collapses the clique member's core and
    drops the domination width to 1 for every k.
    """
    block, vs = clique_block(k)
    t1 = WdPT(
        0,
        {1: 0, 2: 0},
        {
            0: TGraph((Triple(var("x"), iri("p"), var("y")),)),
            1: TGraph((Triple(var("z"), iri("q"), var("x")),)),
            2: TGraph(tuple([Triple(var("y"), iri("r"), vs[0])] + block)),
        },
    )
    t2 = WdPT(
        0,
        {1: 0},
        {
            0: TGraph((Triple(var("x"), iri("p"), var("y")),)),
            1: TGraph(
                (
                    Triple(var("z"), iri("q"), var("x")),
                    Triple(var("w"), iri("q"), var("z")),
                )
            ),
        },
    )
    trees = [t1, t2]
    if with_third_tree:
        trees.append(
            WdPT(
                0,
                {1: 0},
                {
                    0: TGraph(
                        (
                            Triple(var("x"), iri("p"), var("y")),
                            Triple(var("z"), iri("q"), var("x")),
                        )
                    ),
                    1: TGraph(
                        (
                            Triple(var("y"), iri("r"), var("o")),
                            Triple(var("o"), iri("r"), var("o")),
                        )
                    ),
                },
            )
        )
    return WdPF(tuple(trees))
