import itertools
import random

import networkx as nx
import pytest

from pcmfill.errors import CapacityError, DisconnectedGraphError
from pcmfill.graphs import (
    CanonicalForm,
    LabeledGraph,
    canonical_form,
    class_from_graph6,
    classify,
    connected_components,
    enumerate_connected_classes,
    is_bipartite,
    is_connected,
    labeled_copies,
    odd_cycle_edge_deletions,
    parse_graph6,
)

# counts of connected graphs per vertex count (forced analytically for small n)
KNOWN_TOTALS = {2: 1, 3: 2, 4: 6, 5: 21, 6: 112}


def g(n, edges):
    return LabeledGraph(n, frozenset(edges))


def relabel(graph, perm):
    return LabeledGraph(
        graph.n,
        frozenset(tuple(sorted((perm[i], perm[j]))) for i, j in graph.edges),
    )


def enumerate_by_subsets(n, e):
    """Independent oracle: filter all e-subsets of possible edges."""
    pairs = list(itertools.combinations(range(n), 2))
    found = {}
    for subset in itertools.combinations(pairs, e):
        cand = g(n, subset)
        if is_connected(cand):
            found.setdefault(canonical_form(cand), cand)
    return found


def test_canonical_relabel_invariance_seeded():
    rng = random.Random(42)
    for _ in range(500):
        n = rng.randint(2, 7)
        pool = list(itertools.combinations(range(n), 2))
        edges = rng.sample(pool, rng.randint(0, len(pool)))
        graph = g(n, edges)
        perm = list(range(n))
        rng.shuffle(perm)
        assert canonical_form(graph) == canonical_form(relabel(graph, perm))


def test_canonical_distinguishes_path_and_cycle():
    path = g(3, [(0, 1), (1, 2)])
    relabeled_path = g(3, [(0, 1), (0, 2)])
    cycle = g(3, [(0, 1), (1, 2), (0, 2)])
    assert canonical_form(path) == canonical_form(relabeled_path)
    assert canonical_form(path) != canonical_form(cycle)


def test_canonical_matches_networkx_isomorphism():
    # same canonical form iff networkx says isomorphic, over all 4-vertex graphs
    pool = list(itertools.combinations(range(4), 2))
    graphs = []
    for r in range(len(pool) + 1):
        for subset in itertools.combinations(pool, r):
            graphs.append(g(4, subset))
    for a, b in itertools.combinations(graphs, 2):
        ga = nx.Graph(list(a.edges))
        ga.add_nodes_from(range(4))
        gb = nx.Graph(list(b.edges))
        gb.add_nodes_from(range(4))
        assert (canonical_form(a) == canonical_form(b)) == nx.is_isomorphic(ga, gb)


def test_graph6_encoding_matches_networkx():
    for n, e in [(4, 3), (5, 6), (6, 9)]:
        for cls in enumerate_connected_classes(n, e):
            decoded = nx.from_graph6_bytes(cls.g6.encode())
            assert sorted(decoded.edges()) == sorted(cls.representative.edges)
            assert parse_graph6(cls.g6).edges == cls.representative.edges


def test_capacity_error_above_ten_vertices():
    with pytest.raises(CapacityError):
        LabeledGraph(11, frozenset())


def test_connectivity_examples():
    assert not is_connected(g(2, []))
    assert is_connected(g(4, [(0, 1), (1, 2), (2, 3)]))  # spanning tree
    two_triangles = g(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert not is_connected(two_triangles)
    assert connected_components(two_triangles) == [[0, 1, 2], [3, 4, 5]]


def test_enumerate_level_counts_and_totals():
    per_level = {}
    for n, expected_total in KNOWN_TOTALS.items():
        counts = [
            len(enumerate_connected_classes(n, e))
            for e in range(n - 1, n * (n - 1) // 2 + 1)
        ]
        per_level[n] = counts
        assert sum(counts) == expected_total
    assert per_level[4] == [2, 2, 1, 1]
    assert per_level[5][0] == 3  # spanning trees on five vertices


def test_enumerate_matches_subset_oracle():
    for n in (4, 5):
        for e in range(n - 1, n * (n - 1) // 2 + 1):
            ours = {cls.canon for cls in enumerate_connected_classes(n, e)}
            oracle = set(enumerate_by_subsets(n, e))
            assert ours == oracle


def test_enumerate_matches_subset_oracle_n6_spot():
    # full n=6 subset sweep is slow; spot-check two mid levels
    for e in (6, 9):
        ours = {cls.canon for cls in enumerate_connected_classes(6, e)}
        assert ours == set(enumerate_by_subsets(6, e))


def test_enumerate_connected_and_edge_counts():
    for n, e in [(4, 4), (5, 7), (6, 10)]:
        for cls in enumerate_connected_classes(n, e):
            assert cls.e == e
            assert is_connected(cls.representative)
            assert sum(cls.degree_sequence) == 2 * e


def test_enumerate_sorted_and_deterministic():
    a = enumerate_connected_classes(5, 6)
    b = enumerate_connected_classes(5, 6)
    assert [c.g6 for c in a] == [c.g6 for c in b]
    bits = [c.canon.bits for c in a]
    assert bits == sorted(bits)


def test_enumerate_range_errors():
    with pytest.raises(ValueError):
        enumerate_connected_classes(4, 2)  # below n-1
    with pytest.raises(ValueError):
        enumerate_connected_classes(4, 7)  # above n(n-1)/2


def test_four_vertices_three_edges_classes():
    # three classes overall, two of them connected (star and path)
    connected = enumerate_connected_classes(4, 3)
    assert len(connected) == 2
    assert {c.is_star for c in connected} == {True, False}
    all_canons = set()
    for subset in itertools.combinations(list(itertools.combinations(range(4), 2)), 3):
        all_canons.add(canonical_form(g(4, subset)))
    assert len(all_canons) == 3


def test_classify_star_cycle_k33():
    star5 = classify(g(5, [(0, j) for j in range(1, 5)]))
    assert star5.is_tree and star5.is_star
    assert star5.degree_sequence == (1, 1, 1, 1, 4)

    c4 = classify(g(4, [(0, 1), (1, 2), (2, 3), (0, 3)]))
    assert c4.is_cycle and c4.k_regular == 2 and c4.is_bipartite

    k33 = classify(g(6, [(i, j) for i in range(3) for j in range(3, 6)]))
    assert k33.k_regular == 3 and k33.is_bipartite and not k33.is_tree


def test_classify_quasi_regular():
    # five vertices, one of degree 4, rest degree 3
    classes = enumerate_connected_classes(5, 8)
    quasi = [c for c in classes if c.k_quasi_regular == 3]
    assert len(quasi) == 1
    assert quasi[0].degree_sequence == (3, 3, 3, 3, 4)


def test_classify_rejects_disconnected():
    with pytest.raises(DisconnectedGraphError):
        classify(g(4, [(0, 1), (2, 3)]))


def test_no_odd_odd_regular_classes():
    # k-regularity is impossible when n and k are both odd
    for n in (5,):
        for e in range(n - 1, n * (n - 1) // 2 + 1):
            for cls in enumerate_connected_classes(n, e):
                if cls.k_regular is not None:
                    assert not (n % 2 == 1 and cls.k_regular % 2 == 1)


def test_labeled_copies_star_and_cycle():
    star = g(4, [(0, 1), (0, 2), (0, 3)])
    copies = labeled_copies(star)
    assert len(copies) == 4  # one per choice of center
    c4 = g(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert len(labeled_copies(c4)) == 3


def test_odd_cycle_edge_deletions():
    triangle = g(3, [(0, 1), (1, 2), (0, 2)])
    assert odd_cycle_edge_deletions(triangle) == 1
    c4 = g(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
    assert odd_cycle_edge_deletions(c4) == 0
    k4 = g(4, list(itertools.combinations(range(4), 2)))
    assert odd_cycle_edge_deletions(k4) == 2
    assert is_bipartite(c4) and not is_bipartite(triangle)


def test_class_from_graph6_round_trip():
    for cls in enumerate_connected_classes(5, 5):
        again = class_from_graph6(cls.g6)
        assert again == cls


def test_canonical_form_ordering_is_total():
    forms = [cls.canon for cls in enumerate_connected_classes(5, 6)]
    assert sorted(forms) == forms
    assert isinstance(forms[0], CanonicalForm)
