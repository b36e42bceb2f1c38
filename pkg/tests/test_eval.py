import random

import pytest

from fixtures import forest_family, two_node_clique_tree
from oracles import eval_forest_by_enumeration
from wdsparql.errors import InstanceTooLarge, InvalidK, NotNRNormalForm
from wdsparql.evaluator import (
    SolutionSet,
    enumerate_solutions,
    eval_forest,
    eval_naive,
    eval_pebble,
    eval_tree,
)
from wdsparql.patterns import parse_pattern
from wdsparql.randgen import (
    random_candidate_mapping,
    random_forest,
    random_rdf_graph,
)
from wdsparql.terms import Mapping, iri, parse_graph, var
from wdsparql.trees import WdPF, WdPT, forest_pattern, to_forest
from wdsparql.width import domination_width


def m(**kv):
    return Mapping.of({var(k): iri(v) for k, v in kv.items()})


def test_naive_triple_rule():
    got = eval_naive(parse_pattern("(?x,p,?y)"), parse_graph("a p b"))
    assert list(got) == [m(x="a", y="b")]


def test_naive_opt_unextendable():
    got = eval_naive(
        parse_pattern("((?x,p,?y) OPT (?y,q,?z))"), parse_graph("a p b")
    )
    assert list(got) == [m(x="a", y="b")]


def test_naive_opt_extendable():
    got = eval_naive(
        parse_pattern("((?x,p,?y) OPT (?y,q,?z))"), parse_graph("a p b\nb q c")
    )
    assert list(got) == [m(x="a", y="b", z="c")]


def test_naive_handles_non_wd_patterns():
    got = eval_naive(
        parse_pattern("(((?x,p,?y) OPT (?z,q,?x)) OPT ((?y,r,?z) AND (?z,r,?o2)))"),
        parse_graph("a p b"),
    )
    assert list(got) == [m(x="a", y="b")]


def test_eval_tree_requires_nr():
    sloppy = WdPT(0, {1: 0}, {0: parse_graph("?x p ?y"), 1: parse_graph("?y q ?x")})
    with pytest.raises(NotNRNormalForm):
        eval_tree(sloppy, parse_graph("a p b"), m(x="a", y="b"))


def test_clique_family_membership():
    tree = two_node_clique_tree(3)
    forest = WdPF((tree,))
    graph = parse_graph("a r a")
    short = m(y="a")
    full = m(y="a", o1="a", o2="a", o3="a")
    assert not eval_tree(tree, graph, short)  # the child still extends
    assert eval_tree(tree, graph, full)
    assert eval_forest(forest, graph, full)
    assert list(enumerate_solutions(forest, graph)) == [full]


def test_single_node_tree_without_children():
    tree = WdPT(0, {}, {0: parse_graph("?x p ?y")})
    assert eval_tree(tree, parse_graph("a p b"), m(x="a", y="b"))
    assert not eval_tree(tree, parse_graph("a p b"), m(x="a", y="c"))
    assert not eval_tree(tree, parse_graph("a p b"), m(x="a"))


def test_enumeration_cap():
    rng = random.Random(1)
    forest = random_forest(rng)
    with pytest.raises(InstanceTooLarge):
        enumerate_solutions(forest, parse_graph("a p b"), var_cap=0)


def test_oracle_triangle():
    rng = random.Random(271)
    for _ in range(150):
        forest = random_forest(rng)
        pattern = forest_pattern(forest)
        graph = random_rdf_graph(rng)
        translated = to_forest(pattern)
        naive = eval_naive(pattern, graph)
        enumerated = enumerate_solutions(translated, graph)
        assert set(naive) == set(enumerated)
        for mu in list(naive)[:5]:
            assert eval_forest(translated, graph, mu)
            assert eval_forest_by_enumeration(translated, graph, mu)
        probe = random_candidate_mapping(rng, forest, graph)
        assert eval_forest(translated, graph, probe) == (probe in naive)


def test_eval_pebble_validates_k():
    forest = WdPF((WdPT(0, {}, {0: parse_graph("?x p ?y")}),))
    with pytest.raises(InvalidK):
        eval_pebble(forest, parse_graph("a p b"), m(x="a", y="b"), 0)


def test_eval_pebble_sound_and_complete_at_width():
    rng = random.Random(83)
    for _ in range(120):
        forest = random_forest(rng)
        graph = random_rdf_graph(rng, max_iris=4, max_triples=6)
        mu = random_candidate_mapping(rng, forest, graph)
        exact = eval_forest(forest, graph, mu)
        for k in (1, 2, 3):
            relaxed = eval_pebble(forest, graph, mu, k)
            if relaxed:
                assert exact  # never accepts a non-solution
            if exact and k >= 2:
                assert relaxed or not eval_pebble(forest, graph, mu, k - 1)
        assert eval_pebble(forest, graph, mu, domination_width(forest)) == exact


def test_eval_pebble_monotone_in_k():
    rng = random.Random(89)
    for _ in range(60):
        forest = random_forest(rng)
        graph = random_rdf_graph(rng, max_iris=4, max_triples=6)
        mu = random_candidate_mapping(rng, forest, graph)
        if eval_pebble(forest, graph, mu, 1):
            assert eval_pebble(forest, graph, mu, 2)


def test_eval_pebble_on_clique_family():
    for k in (2, 3, 4):
        forest = WdPF((two_node_clique_tree(k),))
        graph = parse_graph("a r a\na r b")
        sols = enumerate_solutions(forest, graph)
        for mu in sols:
            assert eval_pebble(forest, graph, mu, 1)
        assert not eval_pebble(forest, graph, m(y="b"), 1)  # (b,r,.) missing


def test_solution_set_membership_and_order():
    a, b = m(x="a"), m(x="b", y="c")
    ss = SolutionSet((b, a, a))
    assert list(ss) == [a, b]
    assert a in ss and b in ss and m(z="d") not in ss


def test_forest_family_has_expected_solutions():
    family = forest_family(2)
    graph = parse_graph("a p b\nc q a\nb r c\nc r c")
    sols = enumerate_solutions(family, graph)
    naive = eval_naive(forest_pattern(family), graph)
    assert set(sols) == set(naive)


def test_single_node_forest_solutions_are_triple_matches():
    tree = WdPT(0, {}, {0: parse_graph("?x p ?y")})
    graph = parse_graph("a p b\nb p c\na q b")
    sols = enumerate_solutions(WdPF((tree,)), graph)
    rule_one = eval_naive(parse_pattern("(?x, p, ?y)"), graph)
    assert set(sols) == set(rule_one)
    assert len(sols) == 2
