import random

import pytest

from oracles import duplicator_wins_game, hom_into_graph_exists
from wdsparql.errors import DomainMismatch, InvalidK
from wdsparql.hom import GeneralizedTGraph, ctw, maps_into_graph
from wdsparql.pebble import consistency_family, pebble_wins
from wdsparql.randgen import random_game_instance
from wdsparql.terms import Mapping, TGraph, iri, parse_graph, substitute, var


def gt(text, dist=()):
    return GeneralizedTGraph(parse_graph(text), frozenset(dist))


def test_invalid_inputs():
    g = gt("?x p ?y")
    graph = parse_graph("a p b")
    with pytest.raises(InvalidK):
        pebble_wins(g, graph, Mapping(), 1)
    with pytest.raises(DomainMismatch):
        pebble_wins(g, graph, Mapping.of({var("x"): iri("a")}), 2)


def test_family_smallest_cases():
    g = gt("?x p a")
    graph = parse_graph("b p a")
    fam = consistency_family(g, graph, Mapping(), 2)
    assert fam.wins()
    assert frozenset(m.domain for m in fam.members) == {
        frozenset(),
        frozenset({var("x")}),
    }
    assert {str(m) for m in fam.members} == {"{}", "{?x=b}"}
    unsat = gt("?x p c")
    assert consistency_family(unsat, graph, Mapping(), 2).members == frozenset()


def test_empty_domain_with_free_variables_loses():
    g = gt("?x p ?y")
    assert not pebble_wins(g, TGraph(), Mapping(), 2)


def test_no_free_variables_reduces_to_homomorphism():
    rng = random.Random(3)
    for _ in range(80):
        g, graph, mu = random_game_instance(rng)
        grounded = GeneralizedTGraph(g.tgraph, g.tgraph.vars())
        pool = sorted(graph.iris(), key=str) or [iri("a")]
        mu_full = Mapping.of({x: rng.choice(pool) for x in grounded.dist})
        hom = maps_into_graph(grounded, graph, mu_full) is not None
        for k in (2, 3):
            assert pebble_wins(grounded, graph, mu_full, k) == hom


def test_hom_implies_pebble_win():
    rng = random.Random(5)
    for _ in range(120):
        g, graph, mu = random_game_instance(rng, ensure_hom=rng.random() < 0.5)
        if maps_into_graph(g, graph, mu) is not None:
            for k in (2, 3):
                assert pebble_wins(g, graph, mu, k)


def test_monotone_in_k():
    rng = random.Random(7)
    for _ in range(100):
        g, graph, mu = random_game_instance(rng)
        if pebble_wins(g, graph, mu, 3):
            assert pebble_wins(g, graph, mu, 2)


def test_exact_when_ctw_small():
    rng = random.Random(11)
    for _ in range(150):
        g, graph, mu = random_game_instance(rng, ensure_hom=rng.random() < 0.4)
        k = ctw(g) + 1
        assert pebble_wins(g, graph, mu, k) == (
            maps_into_graph(g, graph, mu) is not None
        )


def test_hom_source_transfer():
    # if (S1,X) -> (S2,X) and the game is won on S2, it is won on S1
    from wdsparql.hom import find_homomorphism

    rng = random.Random(13)
    for _ in range(80):
        g, graph, mu = random_game_instance(rng, ensure_hom=rng.random() < 0.5)
        renaming = {v: var(v.name + "_c") for v in g.free_vars()}
        doubled = GeneralizedTGraph(
            g.tgraph | TGraph(tuple(substitute(t, renaming) for t in g.tgraph)),
            g.dist,
        )
        assert find_homomorphism(doubled, g) is not None
        if pebble_wins(g, graph, mu, 2):
            assert pebble_wins(doubled, graph, mu, 2)


def test_disjoint_union_of_wins():
    rng = random.Random(17)
    for _ in range(80):
        g, graph, mu = random_game_instance(rng, ensure_hom=rng.random() < 0.5)
        renaming = {v: var(v.name + "_d") for v in g.free_vars()}
        partner = GeneralizedTGraph(
            TGraph(tuple(substitute(t, renaming) for t in g.tgraph)), g.dist
        )
        if pebble_wins(g, graph, mu, 2) and pebble_wins(partner, graph, mu, 2):
            union = GeneralizedTGraph(g.tgraph | partner.tgraph, g.dist)
            assert pebble_wins(union, graph, mu, 2)


def test_family_invariants_hold_at_fixpoint():
    rng = random.Random(19)
    for _ in range(40):
        g, graph, mu = random_game_instance(rng, max_vars=3, max_iris=3)
        fam = consistency_family(g, graph, mu, 2)
        members = {frozenset(m.items()) for m in fam.members}
        domain = sorted(graph.iris(), key=str)
        for f in members:
            for pair in f:  # closed under restriction
                assert f - {pair} in members
            if len(f) < fam.k:  # forth property
                held = {v for v, _ in f}
                for x in g.free_vars():
                    if x not in held:
                        assert any(f | {(x, a)} in members for a in domain)


def test_agrees_with_game_tree_oracle():
    rng = random.Random(23)
    for _ in range(40):
        g, graph, mu = random_game_instance(
            rng, max_vars=3, max_triples=3, max_iris=3
        )
        assert pebble_wins(g, graph, mu, 2) == duplicator_wins_game(g, graph, mu, 2)


def test_two_pebbles_win_without_homomorphism():
    # an odd directed cycle admits every locally consistent 2-assignment over
    # a directed 2-cycle, yet no homomorphism
    g = gt("?u1 p ?u2\n?u2 p ?u3\n?u3 p ?u1")
    graph = parse_graph("a p b\nb p a")
    assert maps_into_graph(g, graph, Mapping()) is None
    assert not hom_into_graph_exists(g, graph, Mapping())
    assert pebble_wins(g, graph, Mapping(), 2)
    assert duplicator_wins_game(g, graph, Mapping(), 2)
