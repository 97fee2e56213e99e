import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fusionperc.lattice import (ConnectionVectorSet, LatticeError, all_candidate_pairs,
                                build_family, build_lattice, load_lattice_spec,
                                negation_closure, vectors_for_family)


def test_hypercubic_d3_vectors():
    cvs = vectors_for_family("hypercubic", 3)
    expected = {(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)}
    assert set(cvs.vectors) == expected
    assert cvs.vertex_degree == 6


def test_bcc_d3_vectors():
    cvs = vectors_for_family("bcc", 3)
    assert cvs.vertex_degree == 8
    assert all(set(v) <= {-1, 1} for v in cvs.vectors)


def test_fcc_d2_equals_bcc_d2():
    assert vectors_for_family("fcc", 2).vectors == vectors_for_family("bcc", 2).vectors


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_family_counts(d):
    assert vectors_for_family("hypercubic", d).vertex_degree == 2 * d
    assert vectors_for_family("fcc", d).vertex_degree == 2 * d * (d - 1)
    assert vectors_for_family("bcc", d).vertex_degree == 2**d
    assert vectors_for_family("fcc+hc", d).vertex_degree == 2 * d * (d - 1) + 2 * d
    assert vectors_for_family("bcc+hc", d).vertex_degree == 2**d + 2 * d


def test_unknown_family_rejected():
    with pytest.raises(LatticeError):
        vectors_for_family("kagome", 2)
    with pytest.raises(LatticeError):
        vectors_for_family("custom", 2)
    with pytest.raises(LatticeError):
        vectors_for_family("hc", 1)


def test_square_open_edge_count():
    lat = build_family("hc", 2, 3, "open")
    assert lat.n_nodes == 9
    assert lat.n_edges == 12  # 2*L*(L-1)


def test_square_periodic_edge_count():
    lat = build_family("hc", 2, 3, "periodic")
    assert lat.n_nodes == 9
    assert lat.n_edges == 18  # d*L^d
    assert (lat.degrees() == 4).all()


def _brickwork_honeycomb_edges(length):
    """Independent direct construction of the d=2 brickwork honeycomb."""
    edges = set()
    for x in range(length):
        for y in range(length):
            if x + 1 < length:
                edges.add(((x, y), (x + 1, y)))
            if y + 1 < length and (x + y) % 2 == 1:
                edges.add(((x, y), (x, y + 1)))
    return edges


def test_diamond_d2_matches_direct_brickwork_construction():
    length = 6
    lat = build_family("diamond", 2, length, "open")
    built = set()
    for u, v in zip(lat.edges_u.tolist(), lat.edges_v.tolist()):
        cu = tuple(int(c) for c in lat.coordinates([u])[0])
        cv = tuple(int(c) for c in lat.coordinates([v])[0])
        built.add((min(cu, cv), max(cu, cv)))
    oracle = {(min(a, b), max(a, b)) for a, b in _brickwork_honeycomb_edges(length)}
    assert built == oracle


def test_diamond_d2_bulk_degree_three():
    lat = build_family("diamond", 2, 8, "open")
    deg = lat.degrees()
    coords = lat.coordinates()
    interior = ((coords > 0) & (coords < 7)).all(axis=1)
    assert (deg[interior] == 3).all()
    # dangling boundary nodes are kept
    assert deg.min() >= 1


@pytest.mark.parametrize("d", [2, 3, 4])
def test_diamond_periodic_uniform_degree(d):
    lat = build_family("diamond", d, 6, "periodic")
    assert (lat.degrees() == d + 1).all()


def test_diamond_filter_requires_hypercubic():
    with pytest.raises(LatticeError):
        build_lattice(vectors_for_family("fcc", 3), 4, "open", diamond_filter=True)


def test_periodic_requires_room_for_wrap():
    cvs = load_lattice_spec({"dimension": 2, "vectors": [[3, 0]], "k_bound": 3}).vectors
    with pytest.raises(LatticeError):
        build_lattice(cvs, 6, "periodic")
    build_lattice(cvs, 7, "periodic", check_connected=False)


def test_vector_set_invariants_enforced():
    with pytest.raises(LatticeError):
        ConnectionVectorSet(2, ((0, 0), (1, 0)), 1)
    with pytest.raises(LatticeError):
        ConnectionVectorSet(2, ((1, 0),), 1)  # not closed under negation
    with pytest.raises(LatticeError):
        ConnectionVectorSet(2, ((2, 0), (-2, 0)), 1)  # exceeds k_bound
    with pytest.raises(LatticeError):
        ConnectionVectorSet(2, ((1, 0, 0), (-1, 0, 0)), 1)  # wrong dimension


def test_load_lattice_spec_l2da():
    doc = load_lattice_spec({
        "dimension": 2, "k_bound": 7,
        "vectors": [[5, 7], [7, 4], [0, 3], [7, -6], [7, -5]],
    })
    assert doc.vectors.vertex_degree == 10
    assert doc.negation_completed
    assert (-5, -7) in doc.vectors.vectors


def test_load_lattice_spec_l3da():
    doc = load_lattice_spec(json.dumps({
        "dimension": 3, "k_bound": 1,
        "vectors": [[1, 0, 1], [1, -1, -1], [1, 1, 0], [1, 1, -1]],
    }))
    assert doc.vectors.vertex_degree == 8


def test_load_lattice_spec_rejects_zero_vector():
    with pytest.raises(LatticeError):
        load_lattice_spec({"dimension": 2, "vectors": [[0, 0]]})


def test_load_lattice_spec_rejects_schema_violations():
    with pytest.raises(LatticeError):
        load_lattice_spec({"dimension": 2})
    with pytest.raises(LatticeError):
        load_lattice_spec({"dimension": 2, "vectors": [[1, 0]], "extra": 1})
    with pytest.raises(LatticeError):
        load_lattice_spec({"dimension": 2, "vectors": [[1, 0.5]]})


def test_load_lattice_spec_k_bound_enforced():
    with pytest.raises(LatticeError):
        load_lattice_spec({"dimension": 2, "k_bound": 3, "vectors": [[5, 0]]})
    # default custom bound is 7
    with pytest.raises(LatticeError):
        load_lattice_spec({"dimension": 2, "vectors": [[8, 0]]})


def test_load_without_auto_negate_requires_closure():
    with pytest.raises(LatticeError):
        load_lattice_spec({"dimension": 2, "vectors": [[1, 0]], "auto_negate": False})
    doc = load_lattice_spec({"dimension": 2, "vectors": [[1, 0], [-1, 0]],
                             "auto_negate": False})
    assert not doc.negation_completed


def test_rebuild_is_bit_identical():
    doc = load_lattice_spec({"dimension": 2, "k_bound": 7,
                             "vectors": [[5, 7], [7, 4], [0, 3], [7, -6], [7, -5]]})
    a = build_lattice(doc.vectors, 12, "open", check_connected=False)
    b = build_lattice(doc.vectors, 12, "open", check_connected=False)
    assert np.array_equal(a.edges_u, b.edges_u)
    assert np.array_equal(a.edges_v, b.edges_v)
    assert np.array_equal(a.edge_vector_id, b.edge_vector_id)


def test_each_undirected_edge_once():
    for boundary in ("open", "periodic", "transverse-periodic"):
        lat = build_family("fcc+hc", 3, 5, boundary)
        pairs = {tuple(sorted(e)) for e in zip(lat.edges_u.tolist(), lat.edges_v.tolist())}
        assert len(pairs) == lat.n_edges


def test_disconnected_family_warns():
    with pytest.warns(UserWarning, match="disconnected"):
        build_family("bcc", 3, 6, "open")
    with pytest.warns(UserWarning, match="disconnected"):
        build_family("fcc", 3, 6, "open")


def test_transverse_periodic_wraps_only_transverse_axes():
    lat = build_family("hc", 2, 4, "transverse-periodic")
    # axis 0 open: 3*4 edges; axis 1 wrapped: 4*4 edges
    assert lat.n_edges == 12 + 16


def test_candidate_pair_count():
    # half of (2k+1)^d - 1
    assert len(all_candidate_pairs(2, 7)) == (15**2 - 1) // 2
    assert len(all_candidate_pairs(3, 1)) == (3**3 - 1) // 2


@st.composite
def _vector_sets(draw):
    d = draw(st.integers(min_value=2, max_value=4))
    k = draw(st.integers(min_value=1, max_value=2))
    pool = all_candidate_pairs(d, k)
    reps = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=4, unique=True))
    return d, k, negation_closure(reps)


@given(_vector_sets())
@settings(max_examples=25, deadline=None)
def test_random_sets_build_consistently(params):
    d, k, vectors = params
    cvs = ConnectionVectorSet(d, tuple(vectors), k)
    assert cvs.vertex_degree % 2 == 0
    lat = build_lattice(cvs, 2 * k + 2, "periodic", check_connected=False)
    # vertex transitivity under periodic boundary
    assert (lat.degrees() == cvs.vertex_degree).all()
