import json
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torcomb.complex import (
    ComplexError,
    HPolynomial,
    SimplicialComplex,
    are_isomorphic,
    chromatic_coloring,
    f_to_h,
    f_vector,
    find_isomorphism,
    flag_defect,
    h_polynomial,
    h_to_f,
    is_face,
    join,
    link,
    minimal_non_faces,
    one_skeleton_chromatic_number,
    relabel,
)
from torcomb.families import boundary_simplex, polygon_complex, simplex_skeleton, PolygonPresentation

import oracles


@st.composite
def complexes(draw, max_m=7):
    m = draw(st.integers(2, max_m))
    faces = draw(
        st.lists(st.sets(st.integers(1, m), min_size=1, max_size=m - 1), min_size=1, max_size=8)
    )
    used = set().union(*faces)
    # close the vertex set so there are no ghost vertices
    faces += [{v} for v in range(1, m + 1) if v not in used]
    return SimplicialComplex.from_faces(m, faces)


@settings(max_examples=80)
@given(complexes())
def test_f_vector_and_mnf_match_brute_force(K):
    assert tuple(f_vector(K).entries) == oracles.f_vector(K)
    assert sorted(minimal_non_faces(K), key=lambda t: (len(t), t)) == oracles.minimal_non_faces(K)
    for face in oracles.faces_of(K):
        assert is_face(K, face)


@settings(max_examples=60)
@given(complexes(6))
def test_chromatic_number_matches_exhaustive(K):
    chi = one_skeleton_chromatic_number(K)
    assert chi == oracles.chromatic_number(K)
    col = chromatic_coloring(K)
    for f in K.maximal_faces:
        for a, b in combinations(f, 2):
            assert col[a] != col[b]


@given(complexes())
def test_flag_defect(K):
    mnf = oracles.minimal_non_faces(K)
    is_flag, least = flag_defect(K)
    assert is_flag == all(len(w) == 2 for w in mnf)
    assert least == max(len(w) for w in mnf) if mnf else True


def test_pentagon_basics():
    K = polygon_complex(PolygonPresentation((1, 1, 1, 1, 1)))
    assert tuple(f_vector(K).entries) == (1, 5, 5)
    assert h_polynomial(K).coeffs == (1, 3, 1)
    assert len(minimal_non_faces(K)) == 5


def test_f_h_round_trip():
    h = HPolynomial((1, 4, 10, 4, 1))
    f = h_to_f(h)
    assert f_to_h(f).coeffs == h.coeffs
    assert tuple(oracles.h_from_f(tuple(f.entries))) == h.coeffs


@given(st.integers(2, 8).flatmap(lambda m: st.tuples(st.just(m), st.integers(1, m - 1))))
def test_skeleton_h_matches_oracle(mn):
    m, n = mn
    K = simplex_skeleton(m, n)
    assert h_polynomial(K).coeffs == tuple(oracles.h_from_f(oracles.f_vector(K)))


def test_h_undefined_for_non_pure():
    K = SimplicialComplex.from_faces(3, [{1, 2}, {3}])
    assert not K.is_pure
    with pytest.raises(ComplexError):
        h_polynomial(K)


@pytest.mark.parametrize(
    "m, faces",
    [
        (3, [{1, 4}]),
        (3, [{1, 2}, {1}, {3}]),
        (3, [{1, 2}]),
        (3, [set()]),
    ],
)
def test_validation(m, faces):
    with pytest.raises(ComplexError):
        SimplicialComplex(m, tuple(frozenset(f) for f in faces))


def test_serialization_round_trip():
    K = boundary_simplex(3)
    assert SimplicialComplex.from_json(K.to_json()) == K
    assert SimplicialComplex.from_dict(json.loads(K.to_json())) == K


def test_link_and_join():
    K = boundary_simplex(3)
    L, labels = link(K, [1])
    assert L.m == 3 and len(L.maximal_faces) == 3
    assert tuple(labels) == (2, 3, 4)
    S0 = SimplicialComplex.from_faces(2, [{1}, {2}])
    octahedron = join(join(S0, S0), S0)
    assert tuple(f_vector(octahedron).entries) == (1, 6, 12, 8)
    assert flag_defect(octahedron) == (True, 2)


@settings(max_examples=40)
@given(complexes(6), st.randoms(use_true_random=False))
def test_isomorphism_under_relabeling(K, rnd):
    perm = list(range(1, K.m + 1))
    rnd.shuffle(perm)
    mapping = {i + 1: perm[i] for i in range(K.m)}
    K2 = relabel(K, mapping)
    iso = find_isomorphism(K, K2)
    assert iso is not None
    assert relabel(K, iso) == K2


def test_non_isomorphic():
    assert not are_isomorphic(boundary_simplex(3), simplex_skeleton(4, 2))
