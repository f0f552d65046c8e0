"""Constructors for the polytope families: simplices, skeleta, cyclic duals,
weighted odd-polygon presentations, table diagrams, doubling, connected sums
and polygon flips.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence

from .complex import (
    ComplexError,
    HPolynomial,
    SimplicialComplex,
    find_isomorphism,
    from_mask,
    h_polynomial,
    to_mask,
)
from .polynomials import exact_div, monomial, poly_add, poly_pow, poly_sub


class PresentationError(ValueError):
    pass


class InadmissibleFlip(ValueError):
    pass


# ---------------------------------------------------------------------------
# simple families


def boundary_simplex(n: int) -> SimplicialComplex:
    if n < 1:
        raise ComplexError("boundary_simplex needs n >= 1")
    return SimplicialComplex(n + 1, tuple(combinations(range(1, n + 2), n)))


def simplex_skeleton(m: int, n: int) -> SimplicialComplex:
    """All n-subsets of [m], i.e. the (n-1)-skeleton of the (m-1)-simplex."""
    if not 1 <= n <= m - 1:
        raise ComplexError(f"skeleton needs 1 <= n <= m-1, got m={m}, n={n}")
    return SimplicialComplex(m, tuple(combinations(range(1, m + 1), n)))


def gale_even(face: Sequence[int], m: int) -> bool:
    """Gale's evenness condition on the segment 1..m."""
    inside = set(face)
    outside = [v for v in range(1, m + 1) if v not in inside]
    for x, y in zip(outside, outside[1:]):
        if sum(1 for v in range(x + 1, y) if v in inside) % 2:
            return False
    return True


def cyclic_dual(n: int, m: int) -> SimplicialComplex:
    """Dual of the cyclic polytope C^n(m): facets are the Gale-even n-subsets."""
    if n < 1 or m < n + 1:
        raise ComplexError(f"cyclic polytope needs 1 <= n < m, got n={n}, m={m}")
    faces = tuple(f for f in combinations(range(1, m + 1), n) if gale_even(f, m))
    return SimplicialComplex(m, faces)


# ---------------------------------------------------------------------------
# polygon presentations


@dataclass(frozen=True)
class PolygonPresentation:
    """Weights ``(a_1, ..., a_{2k-1})`` on the vertices of a regular odd-gon.

    Block ``i`` holds ``a_i`` consecutive facet labels; all indices on the
    polygon are cyclic and 1-based.
    """

    weights: tuple[int, ...]

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if len(w) < 3 or len(w) % 2 == 0:
            raise PresentationError(f"need an odd number >= 3 of weights, got {len(w)}")
        if any(x < 1 for x in w):
            raise PresentationError("all weights must be >= 1")
        if len(w) == 3 and any(x < 2 for x in w):
            raise PresentationError(
                "for a triangle every weight must be >= 2: an open half-plane "
                "through the centre would contain fewer than two points of the "
                "Gale diagram, so no polytope exists"
            )
        if sum(w) - 3 < 1:
            raise PresentationError("dimension n = sum(weights) - 3 must be >= 1")

    @classmethod
    def parse(cls, text: str) -> "PolygonPresentation":
        try:
            return cls(tuple(int(x) for x in text.replace(" ", "").split(",") if x))
        except ValueError as exc:
            raise PresentationError(str(exc)) from exc

    @property
    def k(self) -> int:
        return (len(self.weights) + 1) // 2

    @property
    def m(self) -> int:
        return sum(self.weights)

    @property
    def n(self) -> int:
        return self.m - 3

    @property
    def size(self) -> int:
        return len(self.weights)

    def a(self, i: int) -> int:
        return self.weights[(i - 1) % self.size]

    def eta(self, j: int) -> int:
        """a_1 + ... + a_j for 0 <= j <= 2k-1."""
        return sum(self.weights[:j])

    def phi(self, j: int) -> int:
        return sum(self.a(j + t) for t in range(self.k - 1))

    def psi(self, j: int) -> int:
        return sum(self.a(j + t) for t in range(self.k))

    def block(self, i: int) -> tuple[int, ...]:
        i = (i - 1) % self.size + 1
        start = self.eta(i - 1)
        return tuple(range(start + 1, start + self.a(i) + 1))

    def position(self, v: int) -> int:
        """Polygon vertex (0-based) carrying facet label v."""
        for i in range(self.size):
            if v <= self.eta(i + 1):
                return i
        raise ComplexError(f"label {v} out of range")

    def window_masks(self) -> list[int]:
        """Unions of k-1 consecutive blocks: the minimal non-faces."""
        return [
            to_mask(v for t in range(self.k - 1) for v in self.block(j + t))
            for j in range(1, self.size + 1)
        ]

    def rotated(self, r: int) -> "PolygonPresentation":
        r %= self.size
        return PolygonPresentation(self.weights[r:] + self.weights[:r])

    def reflected(self) -> "PolygonPresentation":
        return PolygonPresentation(tuple(reversed(self.weights)))

    def canonical(self) -> tuple[int, ...]:
        """Lexicographically least weight tuple under the dihedral group."""
        options = []
        for p in (self, self.reflected()):
            options += [p.rotated(r).weights for r in range(self.size)]
        return min(options)


def polygon_complex(p: PolygonPresentation) -> SimplicialComplex:
    """A set is a face iff it contains no union of k-1 consecutive blocks.

    Maximal faces have m-3 vertices; their complements are the triples meeting
    every window of k-1 consecutive blocks.
    """
    windows = p.window_masks()
    full = (1 << p.m) - 1
    faces = []
    for t in combinations(range(1, p.m + 1), 3):
        tm = to_mask(t)
        if all(w & tm for w in windows):
            faces.append(from_mask(full & ~tm))
    return SimplicialComplex(p.m, tuple(faces))


def polygon_complex_via_center(p: PolygonPresentation) -> SimplicialComplex:
    """Maximal faces are complements of triples whose triangle contains the centre.

    On a regular (2k-1)-gon this holds iff the three positions are distinct and
    every cyclic gap between them is at most k-1 steps.
    """
    full = (1 << p.m) - 1
    size = p.size
    faces = []
    for t in combinations(range(1, p.m + 1), 3):
        pos = sorted(p.position(v) for v in t)
        if len(set(pos)) < 3:
            continue
        gaps = (pos[1] - pos[0], pos[2] - pos[1], size - pos[2] + pos[0])
        if max(gaps) <= p.k - 1:
            faces.append(from_mask(full & ~to_mask(t)))
    return SimplicialComplex(p.m, tuple(faces))


def h_closed_form(p: PolygonPresentation) -> HPolynomial:
    """(t^(n+3) - sum t^psi_i + sum t^phi_i - 1) / (t-1)^3, divided exactly."""
    num = poly_sub(monomial(p.n + 3), [1])
    for i in range(1, p.size + 1):
        num = poly_sub(num, monomial(p.psi(i)))
        num = poly_add(num, monomial(p.phi(i)))
    try:
        q = exact_div(num, poly_pow([-1, 1], 3))
    except ArithmeticError as exc:
        raise ArithmeticError(f"closed form does not divide for {p.weights}") from exc
    return HPolynomial.from_ascending(q)


def cyclic_to_polygon_map(k: int) -> dict[int, int]:
    """i -> k*i mod (2k-1), with 0 read as 2k-1."""
    size = 2 * k - 1
    return {i: (k * i) % size or size for i in range(1, size + 1)}


# ---------------------------------------------------------------------------
# doubling and connected sums


def doubling(K: SimplicialComplex, multiplicities: Sequence[int]) -> SimplicialComplex:
    """Replace vertex i by a block of k_i vertices.

    A set is a face iff the vertices whose whole block it contains form a face
    of K.  Labels are assigned block by block in the order of K's vertices.
    """
    mult = [int(x) for x in multiplicities]
    if len(mult) != K.m:
        raise ComplexError(f"need {K.m} multiplicities, got {len(mult)}")
    if any(x < 1 for x in mult):
        raise ComplexError("multiplicities must be >= 1")
    starts = [0]
    for x in mult:
        starts.append(starts[-1] + x)
    blocks = [tuple(range(starts[i] + 1, starts[i + 1] + 1)) for i in range(K.m)]
    faces = []
    for F in K.maximal_faces:
        base = [v for i in F for v in blocks[i - 1]]
        others = [blocks[j - 1] for j in range(1, K.m + 1) if j not in F]
        choices = [[tuple(x for x in blk if x != drop) for drop in blk] for blk in others]

        def expand(i, acc):
            if i == len(choices):
                faces.append(tuple(sorted(acc)))
                return
            for c in choices[i]:
                expand(i + 1, acc + list(c))

        expand(0, base)
    return SimplicialComplex(starts[-1], tuple(faces))


def connected_sum(
    K1: SimplicialComplex,
    v1: Sequence[int],
    K2: SimplicialComplex,
    v2: Sequence[int],
    gluing: dict[int, int] | None = None,
) -> SimplicialComplex:
    """Dual of the connected sum of the polytopes along the vertices v1 and v2.

    ``gluing`` maps each label of v1 to a label of v2 (default: the sorted
    orders are matched).  Vertices of K2 outside v2 get labels m1+1, m1+2, ...
    """
    v1 = tuple(sorted(v1))
    v2 = tuple(sorted(v2))
    if not (K1.is_pure and K2.is_pure) or K1.n != K2.n:
        raise ComplexError("connected sum needs pure complexes of the same dimension")
    if v1 not in K1.maximal_faces or v2 not in K2.maximal_faces:
        raise ComplexError("connected sum is taken along maximal faces")
    if gluing is None:
        gluing = dict(zip(v1, v2))
    if sorted(gluing) != list(v1) or sorted(gluing.values()) != list(v2):
        raise ComplexError("gluing must be a bijection v1 -> v2")
    back = {b: a for a, b in gluing.items()}
    label = {}
    nxt = K1.m
    for v in range(1, K2.m + 1):
        if v in back:
            label[v] = back[v]
        else:
            nxt += 1
            label[v] = nxt
    faces = [f for f in K1.maximal_faces if f != v1]
    faces += [tuple(label[v] for v in f) for f in K2.maximal_faces if f != v2]
    return SimplicialComplex(nxt, tuple(faces))


# ---------------------------------------------------------------------------
# flips


@dataclass(frozen=True)
class BistellarMove:
    """Exchange of I and J inside the vertex set W = I + J (|W| = n+1)."""

    W: tuple[int, ...]
    I: tuple[int, ...]
    J: tuple[int, ...]
    relabel: dict[int, int]


@dataclass(frozen=True)
class FlipRecord:
    flip_type: int
    before: PolygonPresentation
    after: PolygonPresentation
    pos: int

    def h_change(self) -> list[int]:
        """(t^(n+1-i) - t^i)/(t-1), ascending coefficients."""
        n, i = self.before.n, self.flip_type
        return flip_h_change(n, i)


def flip_h_change(n: int, i: int) -> list[int]:
    return exact_div(poly_sub(monomial(n + 1 - i), monomial(i)), [-1, 1])


def _flip_weights(w: Sequence[int], pos: int) -> list[int]:
    size = len(w)
    k = (size + 1) // 2
    r = pos - 1
    a = list(w[r:]) + list(w[:r])  # a[0] is a_pos
    # a_pos - 1, 1, a_{pos+1..pos+k-1}, 1, a_{pos+k} - 1, a_{pos+k+1..}
    seq = [a[0] - 1, 1] + a[1:k] + [1, a[k] - 1] + a[k + 1 :]
    first_one, second_one = 1, k + 1
    drop = set()
    merges = []
    if a[0] == 1:
        drop.add(0)
        merges.append((second_one - 1, second_one))  # a_{pos+k-1} and the second 1
    if a[k] == 1:
        drop.add(k + 2)
        merges.append((first_one, first_one + 1))  # the first 1 and a_{pos+1}
    used = set()
    for x, y in merges:
        if {x, y} & used or {x, y} & drop:
            raise InadmissibleFlip("collapse rules overlap")
        used |= {x, y}
    out = []
    i = 0
    merge_at = {x: y for x, y in merges}
    while i < len(seq):
        if i in drop:
            i += 1
            continue
        if i in merge_at:
            out.append(seq[i] + seq[merge_at[i]])
            i = merge_at[i] + 1
            continue
        out.append(seq[i])
        i += 1
    return out


def polygon_flip(p: PolygonPresentation, pos: int) -> FlipRecord:
    """Flip at polygon vertex ``pos`` (1-based); type a_{pos+1}+...+a_{pos+k-1}.

    The resulting weights start at the (possibly shrunken) a_pos, i.e. they are
    the weight list read cyclically from position ``pos``.
    """
    if not 1 <= pos <= p.size:
        raise InadmissibleFlip(f"position {pos} outside 1..{p.size}")
    i = sum(p.a(pos + t) for t in range(1, p.k))
    if not 2 <= i <= p.n - 1:
        raise InadmissibleFlip(f"inadmissible flip: type {i} outside 2..{p.n - 1}")
    w = _flip_weights(p.weights, pos)
    if any(x < 1 for x in w):
        raise InadmissibleFlip("inadmissible flip: a weight would vanish")
    try:
        after = PolygonPresentation(tuple(w))
    except PresentationError as exc:
        raise InadmissibleFlip(f"inadmissible flip: {exc}") from exc
    if after.m != p.m:
        raise InadmissibleFlip("inadmissible flip: weight sum changed")
    return FlipRecord(i, p, after, pos)


def admissible_flips(p: PolygonPresentation) -> list[FlipRecord]:
    out = []
    for pos in range(1, p.size + 1):
        try:
            out.append(polygon_flip(p, pos))
        except InadmissibleFlip:
            pass
    return out


def find_bistellar_move(
    K: SimplicialComplex, target: SimplicialComplex
) -> BistellarMove | None:
    """Search for W, I, J with K's faces W\\t (t in I) swapped for W\\t (t in J)
    giving a complex isomorphic to ``target``."""
    if K.m != target.m or not K.is_pure:
        return None
    faces = set(K.maximal_faces)
    full = set(range(1, K.m + 1))
    n = K.n
    for out in combinations(range(1, K.m + 1), K.m - n - 1):
        W = tuple(sorted(full - set(out)))
        I = tuple(t for t in W if tuple(x for x in W if x != t) in faces)
        J = tuple(t for t in W if t not in I)
        if not I or not J:
            continue
        new = (faces - {tuple(x for x in W if x != t) for t in I}) | {
            tuple(x for x in W if x != t) for t in J
        }
        try:
            cand = SimplicialComplex(K.m, tuple(new))
        except ComplexError:
            continue
        mapping = find_isomorphism(cand, target)
        if mapping is not None:
            return BistellarMove(W, I, J, mapping)
    return None


def verify_flip(rec: FlipRecord) -> tuple[bool, bool]:
    """(h changes by the expected amount, a bistellar move of the stated type exists)."""
    h0 = h_polynomial(polygon_complex(rec.before)).ascending()
    h1 = h_polynomial(polygon_complex(rec.after)).ascending()
    h_ok = poly_sub(h1, h0) == rec.h_change() or (
        not any(poly_sub(h1, h0)) and not any(rec.h_change())
    )
    move = find_bistellar_move(polygon_complex(rec.before), polygon_complex(rec.after))
    return h_ok, move is not None and len(move.I) == rec.flip_type


# ---------------------------------------------------------------------------
# table diagrams


@dataclass(frozen=True)
class TableDiagram:
    """Lines x = a_0 < ... < a_i and y = b_0 < ... < b_j cut by x + y = 1.

    Facet labels: a-lines 1..i+1, then b-lines, then the cut line last.
    Nodes (p, q) with a_p + b_q < 1 lie beneath the cut.
    """

    a: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    def __post_init__(self):
        a = tuple(Fraction(x) for x in self.a)
        b = tuple(Fraction(x) for x in self.b)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        if not a or not b:
            raise PresentationError("table needs at least one line in each family")
        for name, seq in (("a", a), ("b", b)):
            if any(x >= y for x, y in zip(seq, seq[1:])):
                raise PresentationError(f"{name} must be strictly increasing")
        if len(a) + len(b) - 2 < 1:
            raise PresentationError("degenerate table: dimension i + j must be >= 1")
        for x in a:
            for y in b:
                if x + y == 1:
                    raise PresentationError(f"table not generic: {x} + {y} = 1")
        if a[0] + b[0] >= 1:
            raise PresentationError("table is empty: a_0 + b_0 must be < 1")

    @property
    def i(self) -> int:
        return len(self.a) - 1

    @property
    def j(self) -> int:
        return len(self.b) - 1

    @property
    def n(self) -> int:
        return self.i + self.j

    @property
    def m(self) -> int:
        return self.n + 3

    def below(self, p: int, q: int) -> bool:
        return self.a[p] + self.b[q] < 1

    def below_nodes(self) -> list[tuple[int, int]]:
        return [
            (p, q) for p in range(len(self.a)) for q in range(len(self.b)) if self.below(p, q)
        ]

    def a_label(self, p: int) -> int:
        return p + 1

    def b_label(self, q: int) -> int:
        return len(self.a) + q + 1

    @property
    def cut_label(self) -> int:
        return self.m

    def to_dict(self) -> dict:
        return {"a": [str(x) for x in self.a], "b": [str(x) for x in self.b]}

    @classmethod
    def from_dict(cls, data: dict) -> "TableDiagram":
        try:
            return cls(tuple(Fraction(x) for x in data["a"]), tuple(Fraction(x) for x in data["b"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise PresentationError(f"malformed table: {exc}") from exc


def table_vertex_triples(T: TableDiagram) -> list[tuple[int, int, int]]:
    """Complements of the vertices of the cut product of simplices."""
    A, B = range(len(T.a)), range(len(T.b))
    out = []
    for p, q in T.below_nodes():
        out.append((T.a_label(p), T.b_label(q), T.cut_label))
    for p in A:
        for q, r in combinations(B, 2):
            if T.below(p, q) != T.below(p, r):
                out.append((T.a_label(p), T.b_label(q), T.b_label(r)))
    for q in B:
        for p, r in combinations(A, 2):
            if T.below(p, q) != T.below(r, q):
                out.append((T.a_label(p), T.a_label(r), T.b_label(q)))
    return out


def table_vertices(T: TableDiagram) -> SimplicialComplex:
    triples = table_vertex_triples(T)
    everywhere = set(range(1, T.m + 1))
    for t in triples:
        everywhere &= set(t)
    if everywhere:
        raise PresentationError(
            f"invalid table: redundant facet {sorted(everywhere)} contains no vertex"
        )
    full = (1 << T.m) - 1
    faces = tuple(from_mask(full & ~to_mask(t)) for t in triples)
    return SimplicialComplex(T.m, faces)


def h_via_table(T: TableDiagram) -> HPolynomial:
    """(1/(t-1)) * sum over nodes beneath the cut of t^(n+1-(p+q)) - t^(p+q)."""
    num = [0]
    for p, q in T.below_nodes():
        num = poly_add(num, poly_sub(monomial(T.n + 1 - (p + q)), monomial(p + q)))
    return HPolynomial.from_ascending(exact_div(num, [-1, 1]))


def table_from_polygon(p: PolygonPresentation) -> TableDiagram:
    """The staircase table: vertical groups a_1..a_{k-1}, a_k - 1; horizontal
    groups a_{k+1}..a_{2k-1} with a_{2k-1} at the bottom."""
    k = p.k
    col_counts: list[int] = []
    for l in range(1, k + 1):
        size = p.a(l) - (1 if l == k else 0)
        c = sum(p.a(g) for g in range(k + l, 2 * k)) if l < k else 0
        col_counts += [c] * size
    rows = sum(p.a(g) for g in range(k + 1, 2 * k))
    V = len(col_counts)
    if V == 0:
        raise PresentationError("table would have no vertical lines")
    a = tuple(1 - c + Fraction(idx + 1, V + 1) for idx, c in enumerate(col_counts))
    b = tuple(Fraction(q) for q in range(rows))
    return TableDiagram(a, b)


def _groups(counts: list[int]) -> list[list[int]]:
    out: list[list[int]] = []
    for idx, c in enumerate(counts):
        if out and counts[out[-1][0]] == c:
            out[-1].append(idx)
        else:
            out.append([idx])
    return out


def polygon_from_table(T: TableDiagram) -> PolygonPresentation:
    """Group lines cut by the same segment of the staircase into polygon vertices."""
    col = [sum(1 for q in range(len(T.b)) if T.below(p, q)) for p in range(len(T.a))]
    row = [sum(1 for p in range(len(T.a)) if T.below(p, q)) for q in range(len(T.b))]
    vgroups = [g for g in _groups(col) if col[g[0]] > 0]
    hgroups = [g for g in _groups(row) if row[g[0]] > 0]
    centre = 1 + sum(1 for c in col if c == 0) + sum(1 for r in row if r == 0)
    weights = [len(g) for g in vgroups] + [centre] + [len(g) for g in reversed(hgroups)]
    try:
        p = PolygonPresentation(tuple(weights))
    except PresentationError as exc:
        raise PresentationError(f"degenerate table: {exc}") from exc
    if find_isomorphism(polygon_complex(p), table_vertices(T)) is None:
        raise PresentationError("degenerate table: no polygon presentation matches")
    return p


# ---------------------------------------------------------------------------
# family specs


def complex_from_spec(spec: dict) -> SimplicialComplex:
    """Build a complex from a JSON family spec or an explicit complex."""
    if not isinstance(spec, dict):
        raise ComplexError("spec must be a JSON object")
    if "maximal_faces" in spec:
        return SimplicialComplex.from_dict(spec)
    if len(spec) != 1:
        raise ComplexError(f"spec must name exactly one family, got {sorted(spec)}")
    (kind, value), = spec.items()
    if kind == "polygon":
        return polygon_complex(PolygonPresentation(tuple(value)))
    if kind == "skeleton":
        return simplex_skeleton(int(value["m"]), int(value["n"]))
    if kind == "cyclic_dual":
        return cyclic_dual(int(value["n"]), int(value["m"]))
    if kind == "simplex":
        return boundary_simplex(int(value["n"] if isinstance(value, dict) else value))
    if kind == "double":
        return doubling(complex_from_spec(value["base"]), value["mult"])
    if kind == "table":
        return table_vertices(TableDiagram.from_dict(value))
    raise ComplexError(f"unknown family {kind!r}")


def polygon_of_spec(spec: dict) -> PolygonPresentation | None:
    """The polygon presentation behind a spec, when there is an obvious one."""
    if "polygon" in spec:
        return PolygonPresentation(tuple(spec["polygon"]))
    if "table" in spec:
        return polygon_from_table(TableDiagram.from_dict(spec["table"]))
    return None


def all_presentations(max_sum: int, min_sum: int = 4) -> Iterable[PolygonPresentation]:
    """Every valid weight vector with min_sum <= sum <= max_sum (no symmetry reduction)."""

    def rec(prefix, remaining, length):
        if length == 0:
            yield tuple(prefix)
            return
        for x in range(1, remaining - (length - 1) + 1):
            yield from rec(prefix + [x], remaining - x, length - 1)

    for total in range(min_sum, max_sum + 1):
        for size in range(3, total + 1, 2):
            for w in rec([], total, size):
                try:
                    yield PolygonPresentation(w)
                except PresentationError:
                    continue


def presentations_up_to_symmetry(max_sum: int, min_sum: int = 4) -> list[PolygonPresentation]:
    seen = set()
    out = []
    for p in all_presentations(max_sum, min_sum):
        c = p.canonical()
        if c not in seen:
            seen.add(c)
            out.append(PolygonPresentation(c))
    return out
