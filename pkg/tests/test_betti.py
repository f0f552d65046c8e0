import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from torcomb.betti import (
    BettiTable,
    DeskScaleError,
    compose_is_zero,
    euler_h_identity_check,
    koszul_betti,
    koszul_differential,
    polygon_betti_closed_form,
    polygon_minimal_resolution,
    resolution_betti,
    resolution_is_minimal,
)
from torcomb.complex import SimplicialComplex, minimal_non_faces
from torcomb.families import (
    PolygonPresentation,
    boundary_simplex,
    polygon_complex,
    presentations_up_to_symmetry,
    simplex_skeleton,
)

import oracles

ORACLE_SET = [p for p in presentations_up_to_symmetry(8)]


@pytest.mark.parametrize("p", ORACLE_SET, ids=lambda p: ",".join(map(str, p.weights)))
def test_koszul_matches_hochster(p):
    K = polygon_complex(p)
    table = koszul_betti(K)
    assert table.entries == oracles.hochster_betti(K)
    assert table == polygon_betti_closed_form(p)


@pytest.mark.parametrize("m, n", [(5, 2), (5, 3), (6, 3), (6, 2), (7, 3)])
def test_skeleton_matches_hochster(m, n):
    K = simplex_skeleton(m, n)
    assert koszul_betti(K).entries == oracles.hochster_betti(K)


@st.composite
def small_complexes(draw):
    m = draw(st.integers(3, 6))
    faces = draw(st.lists(st.sets(st.integers(1, m), min_size=1, max_size=m - 1), min_size=1, max_size=6))
    used = set().union(*faces)
    faces += [{v} for v in range(1, m + 1) if v not in used]
    return SimplicialComplex.from_faces(m, faces)


@settings(max_examples=40, deadline=None)
@given(small_complexes())
def test_random_complexes_match_hochster(K):
    table = koszul_betti(K)
    assert table.entries == oracles.hochster_betti(K)
    assert table.row_sum(-1) == len(minimal_non_faces(K))


@settings(max_examples=20, deadline=None)
@given(small_complexes())
def test_differential_squares_to_zero(K):
    full = (1 << K.m) - 1
    for q in range(1, K.m):
        src1, dst1, rows1 = koszul_differential(K, full, q)
        src2, dst2, rows2 = koszul_differential(K, full, q + 1)
        # rows are indexed by sources; compose d_{q} after d_{q+1}
        idx = {c: i for i, c in enumerate(src1)}
        for row in rows2:
            acc = {}
            for j, c in row.items():
                for t, v in rows1[idx[dst2[j]]].items() if dst2[j] in idx else ():
                    acc[t] = acc.get(t, 0) + c * v
            assert not any(acc.values())


def test_pentagon_table():
    K = polygon_complex(PolygonPresentation((1, 1, 1, 1, 1)))
    t = koszul_betti(K)
    assert t.entries == {(0, 0): 1, (-1, 4): 5, (-2, 6): 5, (-3, 10): 1}
    assert euler_h_identity_check(K, t)


def test_simplex_boundary():
    t = koszul_betti(boundary_simplex(3))
    assert t.entries == {(0, 0): 1, (-1, 8): 1}


@pytest.mark.parametrize("p", presentations_up_to_symmetry(9), ids=lambda p: ",".join(map(str, p.weights)))
def test_resolution(p):
    stages = polygon_minimal_resolution(p)
    for upper, lower in zip(stages[1:], stages):
        assert compose_is_zero(upper, lower)
    assert resolution_is_minimal(stages)
    assert resolution_betti(p) == polygon_betti_closed_form(p)
    K = polygon_complex(p)
    assert euler_h_identity_check(K, polygon_betti_closed_form(p))
    top = polygon_betti_closed_form(p).get(-(p.m - p.n), 2 * p.m)
    assert top == 1


def test_integral_mode_torsion_free_for_polygons():
    for w in [(1, 1, 1, 1, 1), (2, 2, 2), (1,) * 7, (2, 1, 2, 1, 1, 2, 1)]:
        t = koszul_betti(polygon_complex(PolygonPresentation(w)), integral=True)
        assert not t.torsion


def test_integral_mode_detects_torsion():
    # six-vertex RP^2: H_1 has Z/2 torsion, seen in the full multidegree
    rp2 = [
        (1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6),
        (2, 3, 5), (3, 4, 6), (2, 4, 5), (3, 5, 6), (2, 4, 6),
    ]
    K = SimplicialComplex.from_faces(6, rp2)
    t = koszul_betti(K, integral=True)
    assert any(2 in f for f in t.torsion.values())


def test_parallel_matches_serial():
    K = polygon_complex(PolygonPresentation((2, 1, 2, 1, 1, 2, 1)))
    assert koszul_betti(K, workers=2) == koszul_betti(K, workers=1)


def test_desk_cap():
    K = simplex_skeleton(17, 2)
    with pytest.raises(DeskScaleError):
        koszul_betti(K)


def test_serialization():
    t = koszul_betti(polygon_complex(PolygonPresentation((2, 2, 2))))
    assert BettiTable.from_dict(t.to_dict()) == t
    assert "q" in t.grid()
