import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gposet.crossindex import build_counterexample
from gposet.errors import InvalidInputError
from gposet.groups import group_from_name
from gposet.harness import RandomPosetSpec, random_free_gposet
from gposet.posets import (
    GPoset,
    PosetGMap,
    antichain_poset,
    comparability_graph,
    compose_gmap,
    identity_gmap,
    orbit_digraph,
    orbits,
    product,
    projection_maps,
    q_poset,
    transitive_closure,
    validate_gmap,
    validate_gposet,
)

Z2_ACTION = [[0, 1, 2, 3], [1, 0, 3, 2]]


def test_q_poset_valid_and_shape(Z2):
    Q0 = q_poset(Z2, 0)
    assert validate_gposet(Q0).ok
    assert Q0.size == 2 and not Q0.less.any()
    assert list(Q0.action[1]) == [1, 0]
    Q1 = q_poset(Z2, 1)
    assert validate_gposet(Q1).ok and Q1.size == 4
    Q = q_poset(group_from_name("Z3"), 2)
    assert Q.size == 9 and len(orbits(Q)) == 3
    assert sorted(orbit_digraph(Q).edges) == [(0, 1), (0, 2), (1, 2)]
    with pytest.raises(InvalidInputError):
        q_poset(Z2, -1)


def test_q_poset_comparability_is_complete_multipartite():
    for name in ["Z2", "Z3", "S3"]:
        G = group_from_name(name)
        for n in range(3):
            Q = q_poset(G, n)
            assert len(orbits(Q)) == n + 1
            graph = comparability_graph(Q)
            s = G.order
            for u, v in itertools.combinations(range(Q.size), 2):
                assert graph.has_edge(u, v) == (u // s != v // s)


def test_orbits(Z2, V4):
    assert orbits(q_poset(Z2, 1)) == [(0, 1), (2, 3)]
    pair = build_counterexample(V4)
    assert [len(o) for o in orbits(pair.P1)] == [4, 4]
    P = antichain_poset(Z2, 2)
    PP = product(P, P)
    assert len(orbits(PP)) == PP.size // 2 == 8


def test_comparability_graph_examples(Z2, V4):
    assert comparability_graph(antichain_poset(Z2, 3)).number_of_edges() == 0
    C = comparability_graph(q_poset(Z2, 1))
    assert nx.is_isomorphic(C, nx.cycle_graph(4))
    P1 = build_counterexample(V4).P1
    g = comparability_graph(P1)
    assert g.number_of_nodes() == 8 and g.number_of_edges() == 8


def test_validate_rejects_same_orbit_relation(Z2):
    P = GPoset(Z2, [[0, 1], [0, 0]], [[0, 1], [1, 0]])
    assert validate_gposet(P).code == "orbit-comparable"


def test_validate_rejects_fixed_point(Z2):
    P = GPoset(Z2, np.zeros((2, 2), bool), [[0, 1], [0, 1]])
    assert validate_gposet(P).code == "not-free"
    P = GPoset(Z2, np.zeros((3, 3), bool), [[0, 1, 2], [1, 0, 2]])
    assert validate_gposet(P).code == "not-free"


def test_validate_rejects_orbit_cycle(Z2):
    L = np.zeros((4, 4), bool)
    L[0, 2] = L[1, 3] = L[3, 0] = L[2, 1] = True
    for less in (L, transitive_closure(L)):
        assert validate_gposet(GPoset(Z2, less, Z2_ACTION)).code == "orbit-cycle"


def test_validate_other_codes(Z2):
    Z1 = group_from_name("Z1")
    assert validate_gposet(GPoset(Z1, [[1]], [[0]])).code == "not-irreflexive"
    chain = [[0, 1, 0], [0, 0, 1], [0, 0, 0]]
    assert validate_gposet(GPoset(Z1, chain, [[0, 1, 2]])).code == "not-transitive"
    L = np.zeros((4, 4), bool)
    L[0, 2] = True
    assert validate_gposet(GPoset(Z2, L, Z2_ACTION)).code == "not-order-preserving"
    assert validate_gposet(GPoset(Z2, np.zeros((2, 2)), [[0, 0], [1, 0]])).code == "action-not-permutation"
    assert validate_gposet(GPoset(Z2, np.zeros((2, 2)), [[1, 0], [1, 0]])).code == "action-identity"
    Z3 = group_from_name("Z3")
    bad = GPoset(Z3, np.zeros((3, 3)), [[0, 1, 2], [1, 2, 0], [1, 2, 0]])
    assert validate_gposet(bad).code == "action-not-homomorphism"
    assert validate_gposet(GPoset(Z2, np.zeros((2, 2)), [[0, 1]])).code == "shape"


def test_product_examples(Z2, V4):
    P = q_poset(Z2, 1)
    A = antichain_poset(Z2, 1)
    PA = product(P, A)
    assert PA.size == P.size * Z2.order
    for i, j in np.argwhere(PA.less):
        assert i % A.size == j % A.size
    pair = build_counterexample(V4)
    PP = product(pair.P1, pair.P2)
    assert PP.size == 64 and len(orbits(PP)) == 16
    Q0 = q_poset(Z2, 0)
    Q00 = product(Q0, Q0)
    assert Q00.size == 4 and not Q00.less.any()
    with pytest.raises(InvalidInputError):
        product(P, q_poset(group_from_name("Z3"), 0))


def _brute_product_less(P, Q):
    mq = Q.size
    m = P.size * mq
    out = np.zeros((m, m), bool)
    for a, b in itertools.product(range(m), repeat=2):
        p, q = divmod(a, mq)
        p2, q2 = divmod(b, mq)
        le_p = p == p2 or P.less[p, p2]
        le_q = q == q2 or Q.less[q, q2]
        out[a, b] = le_p and le_q and a != b
    return out


def test_product_against_pairwise_oracle(instances):
    checked = 0
    for P, Q in zip(instances[::2], instances[1::2]):
        if P.group != Q.group or P.size * Q.size > 1000:
            continue
        PQ = product(P, Q)
        assert np.array_equal(PQ.less, _brute_product_less(P, Q))
        assert validate_gposet(PQ).ok
        checked += 1
    assert checked >= 3


def test_projection_maps(Z2, V4):
    Q0 = q_poset(Z2, 0)
    p1, p2 = projection_maps(Q0, Q0)
    assert validate_gmap(p1).ok and validate_gmap(p2).ok
    pair = build_counterexample(V4)
    p1, p2 = projection_maps(pair.P1, pair.P2)
    assert validate_gmap(p1).ok and validate_gmap(p2).ok
    psi = level_split_map(pair.P2)
    assert validate_gmap(compose_gmap(p2, psi)).ok


def level_split_map(P):
    """g(i) -> (g, i-1) into Q_1 G."""
    return PosetGMap(P, q_poset(P.group, 1), tuple(range(P.size)))


def test_validate_gmap_examples(Z2, V4):
    P = q_poset(Z2, 2)
    assert validate_gmap(identity_gmap(P)).ok
    pair = build_counterexample(V4)
    assert validate_gmap(level_split_map(pair.P1)).ok and validate_gmap(level_split_map(pair.P2)).ok
    two = antichain_poset(Z2, 2)
    const = PosetGMap(two, q_poset(Z2, 0), (0, 0, 0, 0))
    assert validate_gmap(const).code == "not-equivariant"
    # equivariant but reverses the order
    rev = PosetGMap(q_poset(Z2, 1), q_poset(Z2, 1), (2, 3, 0, 1))
    assert validate_gmap(rev).code == "not-order-preserving"


def test_compose(Z2):
    P = q_poset(Z2, 1)
    f = PosetGMap(P, q_poset(Z2, 2), (2, 3, 4, 5))
    assert compose_gmap(f, identity_gmap(f.target)) == f
    assert compose_gmap(identity_gmap(P), f) == f
    with pytest.raises(InvalidInputError):
        compose_gmap(f, f)


def test_max_chain_after_inclusion_pipeline(Z2):
    from gposet.complexes import face_poset, max_chain_map, order_complex, subdivide
    P = q_poset(Z2, 1)
    K = order_complex(P)
    F, F1 = face_poset(K), face_poset(subdivide(K, 1))
    # max-chain F(sd K) -> F(K), then max-chain F(K) -> P
    f = max_chain_map(F, F1, subdivide(K, 1))
    g = max_chain_map(P, F, K)
    assert validate_gmap(compose_gmap(f, g)).ok


def test_random_generator_valid_and_deterministic(Z2):
    G = group_from_name("S3")
    spec = RandomPosetSpec(G, 4, 0.4, 11)
    P = random_free_gposet(spec)
    assert validate_gposet(P).ok
    assert random_free_gposet(spec) == P
    zero = random_free_gposet(RandomPosetSpec(G, 3, 0.0, 5))
    assert not zero.less.any()
    with pytest.raises(ValueError):
        random_free_gposet(RandomPosetSpec(G, 0, 0.5, 1))


def test_derived_invariants_on_random_instances(instances):
    for P in instances:
        assert validate_gposet(P).ok
        G = P.group
        for g in range(1, G.order):
            act = P.action[g]
            assert not (act == np.arange(P.size)).any()
            assert not P.less[np.arange(P.size), act].any()
        assert nx.is_directed_acyclic_graph(orbit_digraph(P))


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["Z2", "Z3", "Z4", "Z2x2", "S3", "Q8"]), st.integers(1, 4),
       st.floats(0.0, 1.0), st.integers(0, 10 ** 6))
def test_random_posets_are_valid_free_and_acyclic(name, k, density, seed):
    P = random_free_gposet(RandomPosetSpec(group_from_name(name), k, density, seed))
    assert validate_gposet(P).ok
    assert nx.is_directed_acyclic_graph(orbit_digraph(P))
    assert all(len(o) == P.group.order for o in orbits(P))
