"""Combinatorics and toric topology of simple polytopes with few facets."""

from .complex import (
    ComplexError,
    FVector,
    HPolynomial,
    SimplicialComplex,
    are_isomorphic,
    f_vector,
    flag_defect,
    h_polynomial,
    is_face,
    join,
    link,
    minimal_non_faces,
    one_skeleton_chromatic_number,
)
from .families import (
    FlipRecord,
    PolygonPresentation,
    TableDiagram,
    boundary_simplex,
    connected_sum,
    cyclic_dual,
    doubling,
    h_closed_form,
    h_via_table,
    polygon_complex,
    polygon_complex_via_center,
    polygon_flip,
    polygon_from_table,
    simplex_skeleton,
    table_from_polygon,
    table_vertices,
)
from .buchstaber import SRange, TorusAssignment, s_int, s_real
from .betti import BettiTable, koszul_betti, polygon_betti_closed_form

__version__ = "0.1.0"
