import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from argmine.classify import RelationPrediction
from argmine.errors import ArgmineError
from argmine.graph import Stance, graph_depth, validate
from argmine.construct import build_adu_position, build_flat_tree, build_pairwise, construct
from argmine.majorclaim import CLAIM, PREMISE
from argmine.relations import RelationMatrix

from conftest import make_adu, random_adus, random_relations


def _rel(entries):
    return RelationMatrix({k: RelationPrediction(s, p) for k, (s, p) in entries.items()})


def _out_degree(graph):
    return Counter(x for x, _, _ in graph.triples())


def test_flat_tree_counts_and_stances():
    mc = make_adu("0", 0, CLAIM)
    adus = [make_adu("1", 1), make_adu("2", 2)]
    rel = _rel({("1", "0"): (Stance.ATTACK, 0.8), ("2", "0"): (Stance.SUPPORT, 0.6)})
    g = build_flat_tree(mc, adus, rel)
    assert (len(g.inodes), len(g.snodes), len(g.edges)) == (3, 2, 4)
    assert {(x, g.snode_map[s].stance, z) for x, s, z in g.triples()} == {
        ("1", Stance.ATTACK, "0"), ("2", Stance.SUPPORT, "0")}
    assert graph_depth(g) == 2


def test_snode_ids_do_not_collide_with_adus():
    mc = make_adu("5", 2, CLAIM)
    adus = [make_adu("1", 0), make_adu("6", 3), make_adu("x", 4)]
    g = build_flat_tree(mc, adus, RelationMatrix())
    ids = [n.id for n in g.inodes] + [s.id for s in g.snodes]
    assert len(ids) == len(set(ids))
    assert validate(g) == []


def test_position_nearest_claim():
    mc = make_adu("0", 0, CLAIM)
    adus = [
        make_adu("1", 1, CLAIM),
        make_adu("2", 2, PREMISE),
        make_adu("3", 3, PREMISE),  # equidistant from 1 and 5 -> earlier claim
        make_adu("4", 4, PREMISE),
        make_adu("5", 5, CLAIM),
    ]
    g = build_adu_position(mc, adus, RelationMatrix())
    parent = {x: z for x, _, z in g.triples()}
    assert parent == {"1": "0", "5": "0", "2": "1", "3": "1", "4": "5"}
    assert graph_depth(g) == 3


def test_position_without_claims_is_flat():
    mc = make_adu("0", 0, CLAIM)
    g = build_adu_position(mc, [make_adu("1", 1), make_adu("2", 2)], RelationMatrix())
    assert graph_depth(g) == 2


def test_pairwise_links_and_multi_parent():
    mc = make_adu("0", 0, CLAIM)
    adus = [make_adu("1", 1), make_adu("2", 2), make_adu("3", 3)]
    S, A = Stance.SUPPORT, Stance.ATTACK
    rel = _rel({
        ("1", "0"): (S, 0.9), ("1", "2"): (S, 0.5), ("1", "3"): (S, 0.5),
        ("2", "0"): (S, 0.3), ("2", "1"): (A, 0.8), ("2", "3"): (S, 0.79),
        ("3", "0"): (S, 0.7), ("3", "1"): (S, 0.6), ("3", "2"): (S, 0.69),
    })
    g = build_pairwise(mc, adus, rel)
    assert validate(g) == []
    triples = {(x, g.snode_map[s].stance, z) for x, s, z in g.triples()}
    # 2 reaches 0.98 * 0.8 towards both 1 and 3 and keeps both links
    assert triples == {("1", S, "0"), ("3", S, "0"), ("2", A, "1"), ("2", S, "3")}
    assert _out_degree(g)["2"] == 2
    # a strict bound keeps only the best partner
    g1 = build_pairwise(mc, adus, rel, bound_factor=1.0)
    assert _out_degree(g1)["2"] == 1


def test_pairwise_forces_first_adu_when_nothing_attaches():
    mc = make_adu("0", 0, CLAIM)
    adus = [make_adu("1", 1), make_adu("2", 2)]
    rel = _rel({("1", "0"): (Stance.ATTACK, 0.1), ("1", "2"): (Stance.SUPPORT, 0.9),
                ("2", "0"): (Stance.SUPPORT, 0.1), ("2", "1"): (Stance.SUPPORT, 0.9)})
    g = build_pairwise(mc, adus, rel)
    parent = {x: z for x, _, z in g.triples()}
    assert parent == {"1": "0", "2": "1"}
    # the forced link still reports the predicted stance
    assert {g.snode_map[s].stance for x, s, _ in g.triples() if x == "1"} == {Stance.ATTACK}


def test_pairwise_leftovers_attach_as_support():
    mc = make_adu("0", 0, CLAIM)
    adus = [make_adu("1", 1), make_adu("2", 2)]
    rel = _rel({("1", "0"): (Stance.SUPPORT, 0.9), ("2", "0"): (Stance.ATTACK, 0.1)})
    g = build_pairwise(mc, adus, rel, bound_mode="absolute", bound_factor=0.5)
    parent = {x: (g.snode_map[s].stance, z) for x, s, z in g.triples()}
    assert parent == {"1": (Stance.SUPPORT, "0"), "2": (Stance.SUPPORT, "0")}


def test_bad_arguments():
    mc = make_adu("0", 0, CLAIM)
    with pytest.raises(ArgmineError, match="duplicate"):
        build_flat_tree(mc, [make_adu("1", 1), make_adu("1", 2)], RelationMatrix())
    with pytest.raises(ArgmineError, match="must not"):
        build_flat_tree(mc, [mc], RelationMatrix())
    with pytest.raises(ArgmineError, match="unknown constructor"):
        construct("tree", mc, [], RelationMatrix())
    with pytest.raises(ArgmineError):
        build_pairwise(mc, [], RelationMatrix(), bound_factor=0.0)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(0, 50), ties=st.booleans())
def test_constructors_produce_valid_graphs(seed, n, ties):
    rng = random.Random(seed)
    mc, adus = random_adus(rng, n)
    rel = random_relations(rng, [mc.id] + [a.id for a in adus], ties)
    for name in ("flat", "position", "pairwise"):
        g = construct(name, mc, adus, rel)
        assert validate(g) == []
        assert sorted(n.id for n in g.inodes) == sorted([mc.id] + [a.id for a in adus])
        depth = graph_depth(g)
        if name == "flat":
            assert depth == (2 if adus else 1)
        elif name == "position":
            assert depth in ((2, 3) if adus else (1,))
        if name != "pairwise":
            assert all(v == 1 for v in _out_degree(g).values())
        assert g == construct(name, mc, adus, rel)
