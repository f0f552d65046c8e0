from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torcomb.complex import (
    are_isomorphic,
    f_vector,
    find_isomorphism,
    h_polynomial,
    minimal_non_faces,
    relabel,
)
from torcomb.families import (
    InadmissibleFlip,
    PolygonPresentation,
    PresentationError,
    TableDiagram,
    admissible_flips,
    boundary_simplex,
    complex_from_spec,
    connected_sum,
    cyclic_dual,
    cyclic_to_polygon_map,
    doubling,
    find_bistellar_move,
    h_closed_form,
    h_via_table,
    polygon_complex,
    polygon_complex_via_center,
    polygon_flip,
    polygon_from_table,
    presentations_up_to_symmetry,
    simplex_skeleton,
    table_from_polygon,
    table_vertices,
    verify_flip,
)
from torcomb.polynomials import poly_sub

import oracles

SMALL = presentations_up_to_symmetry(9)


@st.composite
def presentations(draw, max_sum=9):
    k = draw(st.integers(2, 4))
    size = 2 * k - 1
    w = draw(st.lists(st.integers(1, 3), min_size=size, max_size=size).filter(lambda w: sum(w) <= max_sum))
    try:
        return PolygonPresentation(tuple(w))
    except PresentationError:
        from hypothesis import reject

        reject()


@pytest.mark.parametrize("p", SMALL, ids=lambda p: ",".join(map(str, p.weights)))
def test_polygon_faces_against_definition(p):
    K = polygon_complex(p)
    assert sorted(K.maximal_faces) == oracles.polygon_faces_bruteforce(p.weights)
    assert polygon_complex_via_center(p) == K


@settings(max_examples=50)
@given(presentations())
def test_h_three_ways(p):
    K = polygon_complex(p)
    h = h_polynomial(K).coeffs
    assert h == h_closed_form(p).coeffs
    assert h == h_via_table(table_from_polygon(p)).coeffs
    assert h == tuple(oracles.h_from_f(oracles.f_vector(K)))
    assert h == h[::-1]


@settings(max_examples=50)
@given(presentations())
def test_table_round_trip(p):
    T = table_from_polygon(p)
    assert are_isomorphic(table_vertices(T), polygon_complex(p))
    assert polygon_from_table(T).canonical() == p.canonical()


@settings(max_examples=40)
@given(presentations(), st.integers(0, 6), st.booleans())
def test_symmetries_give_isomorphic_complexes(p, r, flip):
    q = p.rotated(r)
    if flip:
        q = q.reflected()
    assert are_isomorphic(polygon_complex(p), polygon_complex(q))


def test_presentation_validation():
    with pytest.raises(PresentationError):
        PolygonPresentation((1, 1, 1, 1))
    with pytest.raises(PresentationError):
        PolygonPresentation((1, 0, 1))
    with pytest.raises(PresentationError):
        PolygonPresentation((1, 1, 1))  # a triangle of single points is degenerate
    assert PolygonPresentation.parse("2,1,2,1,1,2,1").weights == (2, 1, 2, 1, 1, 2, 1)


@pytest.mark.parametrize("n, m", [(2, 5), (2, 7), (3, 6), (4, 7), (4, 8), (6, 9)])
def test_cyclic_dual_gale_evenness(n, m):
    K = cyclic_dual(n, m)
    assert sorted(K.maximal_faces) == oracles.gale_even_bruteforce(n, m)
    # dual of a simplicial polytope: h symmetric
    h = h_polynomial(K).coeffs
    assert h == h[::-1]


def test_cyclic_dual_3_5_has_six_facets():
    # C^3(5) has six facets (f-vector 5, 9, 6); the two neighbourly 3-polytopes agree on this.
    assert len(cyclic_dual(3, 5).maximal_faces) == 6


@pytest.mark.parametrize("k", [3, 4, 5])
def test_cyclic_dual_is_polygon_complex(k):
    size = 2 * k - 1
    C = cyclic_dual(2 * k - 4, size)
    P = polygon_complex(PolygonPresentation((1,) * size))
    assert relabel(C, cyclic_to_polygon_map(k)) == P


def test_doubling():
    S0 = boundary_simplex(1)
    D = doubling(S0, (2, 2))
    assert D == boundary_simplex(3)
    pent = polygon_complex(PolygonPresentation((1, 1, 1, 1, 1)))
    assert doubling(pent, (1, 1, 1, 1, 1)) == pent
    D2 = doubling(pent, (2, 1, 1, 1, 1))
    assert are_isomorphic(D2, polygon_complex(PolygonPresentation((2, 1, 1, 1, 1))))
    assert D2.n == pent.n + 1


def test_doubling_matches_polygon_multiplicities():
    base = polygon_complex(PolygonPresentation((1,) * 7))
    for mult in [(2, 1, 1, 1, 1, 1, 1), (1, 2, 1, 2, 1, 1, 1), (3, 1, 1, 1, 1, 1, 2)]:
        # doubling in cyclic order multiplies the polygon weights
        D = doubling(base, mult)
        w = [mult[v - 1] for v in range(1, 8)]
        assert are_isomorphic(D, polygon_complex(PolygonPresentation(tuple(w))))


def test_connected_sum_of_simplices():
    T = boundary_simplex(2)
    K = connected_sum(T, (1, 2), T, (1, 2))
    # cutting a vertex off a triangle gives a square
    assert K.m == 4 and len(K.maximal_faces) == 4
    assert sorted(map(len, minimal_non_faces(K))) == [2, 2]


def test_pentagon_flip_is_square_pair():
    p = PolygonPresentation((1, 1, 1, 1, 1))
    for rec in admissible_flips(p):
        h_ok, move_ok = verify_flip(rec)
        assert h_ok and move_ok


def test_type_four_flip_between_equal_h_pair():
    P = PolygonPresentation((2, 1, 1, 1, 1, 1, 1, 1, 1))
    Q = PolygonPresentation((2, 1, 2, 1, 1, 2, 1))
    rec = polygon_flip(P, 3)
    assert rec.flip_type == 4
    assert rec.after.canonical() == Q.canonical()
    assert not any(rec.h_change())
    h0 = h_polynomial(polygon_complex(P)).ascending()
    h1 = h_polynomial(polygon_complex(Q)).ascending()
    assert not any(poly_sub(h1, h0))
    move = find_bistellar_move(polygon_complex(P), polygon_complex(rec.after))
    assert move is not None and len(move.I) == 4


@pytest.mark.parametrize("p", presentations_up_to_symmetry(8), ids=lambda p: ",".join(map(str, p.weights)))
def test_all_flips_verified(p):
    for rec in admissible_flips(p):
        assert verify_flip(rec) == (True, True)


def test_inadmissible_flip():
    with pytest.raises((InadmissibleFlip, PresentationError)):
        polygon_flip(PolygonPresentation((1, 1, 1, 1, 1)), 9)


def test_table_validation():
    with pytest.raises(PresentationError):
        TableDiagram((0, Fraction(1, 4), Fraction(1, 2)), (0, Fraction(1, 4), Fraction(1, 2)))
    with pytest.raises(PresentationError):
        TableDiagram((0, 0), (0,))
    with pytest.raises(PresentationError):
        TableDiagram((1,), (1, 2))


def test_table_generic_seven_facets():
    T = TableDiagram((0, Fraction(1, 3), Fraction(3, 5)), (0, Fraction(1, 4), Fraction(1, 2)))
    K = table_vertices(T)
    assert K.m == 7 and K.n == 4
    assert h_via_table(T).coeffs == h_polynomial(K).coeffs
    p = polygon_from_table(T)
    assert find_isomorphism(polygon_complex(p), K) is not None


def test_complex_from_spec():
    assert complex_from_spec({"simplex": 3}) == boundary_simplex(3)
    assert complex_from_spec({"skeleton": {"m": 5, "n": 2}}) == simplex_skeleton(5, 2)
    assert complex_from_spec({"double": {"base": {"simplex": 1}, "mult": [2, 2]}}) == boundary_simplex(3)
    K = complex_from_spec({"polygon": [1, 1, 1, 1, 1]})
    assert tuple(f_vector(K).entries) == (1, 5, 5)
