"""Abstract simplicial complexes on the vertex set {1, ..., m}.

Convention used throughout the package: ``K`` is the boundary complex of the
polytope dual to a simple polytope ``P``.  Vertices of ``K`` are the facets of
``P`` and maximal faces of ``K`` are the vertices of ``P``.  Labels are
1-based.

Internally a vertex subset is also handled as a bitmask, bit ``i - 1`` for
vertex ``i``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import networkx as nx
from networkx.algorithms import isomorphism as nx_iso

from .polynomials import poly_pow


class ComplexError(ValueError):
    """Invalid complex, or an operation applied outside its domain."""


def to_mask(face: Iterable[int]) -> int:
    mask = 0
    for v in face:
        mask |= 1 << (v - 1)
    return mask


def from_mask(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _keep_maximal(masks: Iterable[int]) -> list[int]:
    ordered = sorted(set(masks), key=lambda x: -bin(x).count("1"))
    kept: list[int] = []
    for f in ordered:
        if not any(f & g == f for g in kept):
            kept.append(f)
    return kept


@dataclass(frozen=True)
class SimplicialComplex:
    """A simplicial complex given by its maximal faces.

    ``maximal_faces`` is normalised to a sorted tuple of sorted tuples.  No
    ghost vertices are allowed: every label in ``1..m`` must occur.
    """

    m: int
    maximal_faces: tuple[tuple[int, ...], ...]
    _masks: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.m, int) or self.m <= 0:
            raise ComplexError("m must be a positive integer")
        faces = []
        for f in self.maximal_faces:
            f = tuple(sorted(int(v) for v in f))
            if len(set(f)) != len(f):
                raise ComplexError(f"repeated vertex in face {f}")
            for v in f:
                if not 1 <= v <= self.m:
                    raise ComplexError(f"vertex {v} out of range 1..{self.m}")
            faces.append(f)
        faces = sorted(set(faces))
        masks = [to_mask(f) for f in faces]
        for a in masks:
            for b in masks:
                if a != b and a & b == a:
                    raise ComplexError(
                        f"face {from_mask(a)} is contained in face {from_mask(b)}"
                    )
        covered = 0
        for a in masks:
            covered |= a
        if covered != (1 << self.m) - 1:
            ghosts = [v for v in range(1, self.m + 1) if not covered >> (v - 1) & 1]
            raise ComplexError(f"ghost vertices {ghosts}: every vertex must lie in a face")
        object.__setattr__(self, "maximal_faces", tuple(faces))
        object.__setattr__(self, "_masks", tuple(masks))

    @classmethod
    def from_faces(cls, m: int, faces: Iterable[Iterable[int]]) -> "SimplicialComplex":
        """Build from any generating set of faces (non-maximal ones are dropped)."""
        masks = _keep_maximal(to_mask(f) for f in faces)
        return cls(m, tuple(from_mask(x) for x in masks))

    @property
    def face_masks(self) -> tuple[int, ...]:
        return self._masks

    @cached_property
    def dimension(self) -> int:
        return max(len(f) for f in self.maximal_faces) - 1

    @property
    def n(self) -> int:
        """Number of vertices in a largest face (the polytope dimension when pure)."""
        return self.dimension + 1

    @cached_property
    def is_pure(self) -> bool:
        sizes = {len(f) for f in self.maximal_faces}
        return len(sizes) == 1

    @cached_property
    def all_face_masks(self) -> frozenset[int]:
        faces = set()
        for f in self._masks:
            sub = f
            while True:
                faces.add(sub)
                if sub == 0:
                    break
                sub = (sub - 1) & f
        return frozenset(faces)

    def contains_mask(self, mask: int) -> bool:
        return any(mask & f == mask for f in self._masks)

    def to_dict(self) -> dict:
        return {"m": self.m, "maximal_faces": [list(f) for f in self.maximal_faces]}

    @classmethod
    def from_dict(cls, data: dict) -> "SimplicialComplex":
        try:
            return cls(int(data["m"]), tuple(tuple(f) for f in data["maximal_faces"]))
        except (KeyError, TypeError) as exc:
            raise ComplexError(f"malformed complex JSON: {exc}") from exc

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "SimplicialComplex":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class FVector:
    entries: tuple[int, ...]

    def __getitem__(self, i):
        return self.entries[i]

    def __len__(self):
        return len(self.entries)


@dataclass(frozen=True)
class HPolynomial:
    """h-vector ``(h0, ..., hn)``; as a polynomial, ``h(t) = sum_i h_i t^(n-i)``."""

    coeffs: tuple[int, ...]

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def ascending(self) -> list[int]:
        """Coefficients of ``h(t)`` from the constant term upwards."""
        return list(reversed(self.coeffs))

    @classmethod
    def from_ascending(cls, coeffs: Sequence[int]) -> "HPolynomial":
        c = list(coeffs)
        while len(c) > 1 and c[-1] == 0:
            c.pop()
        return cls(tuple(reversed(c)))

    def __getitem__(self, i):
        return self.coeffs[i]


def _check_subset(K: SimplicialComplex, sigma: Iterable[int]) -> int:
    sigma = list(sigma)
    for v in sigma:
        if not 1 <= v <= K.m:
            raise ComplexError(f"vertex {v} out of range 1..{K.m}")
    return to_mask(sigma)


def is_face(K: SimplicialComplex, sigma: Iterable[int]) -> bool:
    return K.contains_mask(_check_subset(K, sigma))


def f_vector(K: SimplicialComplex) -> FVector:
    counts = [0] * (K.dimension + 2)
    for f in K.all_face_masks:
        counts[bin(f).count("1")] += 1
    return FVector(tuple(counts))


def f_to_h(f: FVector | Sequence[int]) -> HPolynomial:
    """``sum_i f_{i-1} (t-1)^(n-i) = sum_i h_i t^(n-i)``."""
    f = list(f.entries if isinstance(f, FVector) else f)
    n = len(f) - 1
    total = [0] * (n + 1)
    for i, fi in enumerate(f):
        term = poly_pow([-1, 1], n - i)
        for d, c in enumerate(term):
            total[d] += fi * c
    # total is ascending in t; h_i is the coefficient of t^(n-i)
    return HPolynomial(tuple(total[n - i] for i in range(n + 1)))


def h_to_f(h: HPolynomial) -> FVector:
    """Inverse transform: substitute t -> t + 1 in ``sum h_i t^(n-i)``."""
    n = h.degree
    total = [0] * (n + 1)
    for i, hi in enumerate(h.coeffs):
        term = poly_pow([1, 1], n - i)
        for d, c in enumerate(term):
            total[d] += hi * c
    return FVector(tuple(total[n - i] for i in range(n + 1)))


def h_polynomial(K: SimplicialComplex) -> HPolynomial:
    if not K.is_pure:
        raise ComplexError("h undefined for non-pure complex")
    return f_to_h(f_vector(K))


def minimal_non_faces(K: SimplicialComplex) -> list[tuple[int, ...]]:
    """All minimal non-faces, sorted by size and then lexicographically.

    Grown level by level from faces: a candidate of size s is a face of size
    s - 1 plus a larger vertex, kept if it is not a face while all of its
    (s - 1)-subsets are.  No minimal non-face exceeds dim K + 2 vertices.
    """
    faces = K.all_face_masks
    by_size: dict[int, list[int]] = {}
    for f in faces:
        by_size.setdefault(bin(f).count("1"), []).append(f)
    out = []
    for s in range(1, K.dimension + 3):
        for base in by_size.get(s - 1, []):
            top = base.bit_length()  # candidates add a vertex above max(base)
            for v in range(top, K.m):
                cand = base | (1 << v)
                if cand in faces:
                    continue
                ok = True
                rest = cand
                while rest:
                    low = rest & -rest
                    if (cand ^ low) not in faces:
                        ok = False
                        break
                    rest ^= low
                if ok:
                    out.append(cand)
    return sorted((from_mask(x) for x in out), key=lambda t: (len(t), t))


def one_skeleton(K: SimplicialComplex) -> list[set[int]]:
    """Adjacency sets indexed by vertex (index 0 unused)."""
    adj = [set() for _ in range(K.m + 1)]
    for f in K.maximal_faces:
        for a, b in combinations(f, 2):
            adj[a].add(b)
            adj[b].add(a)
    return adj


def _greedy_clique(adj: list[set[int]], vertices: list[int]) -> list[int]:
    best: list[int] = []
    for start in vertices:
        clique = [start]
        cand = set(adj[start])
        while cand:
            v = max(sorted(cand), key=lambda x: len(adj[x] & cand))
            clique.append(v)
            cand &= adj[v]
        if len(clique) > len(best):
            best = clique
    return best


def _dsatur(adj: list[set[int]], vertices: list[int]) -> dict[int, int]:
    colour: dict[int, int] = {}
    while len(colour) < len(vertices):
        def key(v):
            sat = len({colour[u] for u in adj[v] if u in colour})
            return (sat, len(adj[v]), -v)

        v = max((u for u in vertices if u not in colour), key=key)
        used = {colour[u] for u in adj[v] if u in colour}
        c = 0
        while c in used:
            c += 1
        colour[v] = c
    return colour


def chromatic_coloring(K: SimplicialComplex) -> dict[int, int]:
    """An optimal proper colouring of the 1-skeleton (colours 0..gamma-1)."""
    adj = one_skeleton(K)
    vertices = list(range(1, K.m + 1))
    clique = _greedy_clique(adj, vertices)
    best = _dsatur(adj, vertices)
    upper = max(best.values()) + 1
    lower = len(clique)
    if lower == upper:
        return best
    # colour the clique first, then the rest by descending degree
    order = clique + sorted((v for v in vertices if v not in clique), key=lambda v: -len(adj[v]))
    for k in range(lower, upper):
        colouring: dict[int, int] = {}

        def extend(i, used):
            if i == len(order):
                return True
            v = order[i]
            forbidden = {colouring[u] for u in adj[v] if u in colouring}
            for c in range(min(used + 1, k)):
                if c in forbidden:
                    continue
                colouring[v] = c
                if extend(i + 1, max(used, c + 1)):
                    return True
                del colouring[v]
            return False

        if extend(0, 0):
            return dict(colouring)
    return best


def one_skeleton_chromatic_number(K: SimplicialComplex) -> int:
    return max(chromatic_coloring(K).values()) + 1


def flag_defect(K: SimplicialComplex) -> tuple[bool, int]:
    """(is_flag, least k with K k-flag); k-flag means minimal non-faces have <= k vertices."""
    mnf = minimal_non_faces(K)
    if not mnf:
        return True, 1
    largest = max(len(w) for w in mnf)
    return largest == 2, largest


def link(K: SimplicialComplex, sigma: Iterable[int]) -> tuple[SimplicialComplex, tuple[int, ...]]:
    """Link of a face, relabelled to 1..m'; also returns the original labels."""
    s = _check_subset(K, sigma)
    if not K.contains_mask(s):
        raise ComplexError(f"{from_mask(s)} is not a face")
    parts = _keep_maximal(f & ~s for f in K.face_masks if f & s == s)
    verts = 0
    for p in parts:
        verts |= p
    labels = from_mask(verts)
    if not labels:
        raise ComplexError("link of a maximal face is the empty complex")
    pos = {v: i + 1 for i, v in enumerate(labels)}
    faces = tuple(tuple(pos[v] for v in from_mask(p)) for p in parts)
    return SimplicialComplex(len(labels), faces), labels


def join(K1: SimplicialComplex, K2: SimplicialComplex) -> SimplicialComplex:
    faces = [f + tuple(v + K1.m for v in g) for f in K1.maximal_faces for g in K2.maximal_faces]
    return SimplicialComplex(K1.m + K2.m, tuple(faces))


def relabel(K: SimplicialComplex, mapping: dict[int, int]) -> SimplicialComplex:
    """Apply a bijection old label -> new label."""
    if sorted(mapping) != list(range(1, K.m + 1)) or sorted(mapping.values()) != list(
        range(1, K.m + 1)
    ):
        raise ComplexError("relabelling must be a bijection of 1..m")
    return SimplicialComplex(K.m, tuple(tuple(mapping[v] for v in f) for f in K.maximal_faces))


def _incidence_graph(K: SimplicialComplex) -> nx.Graph:
    G = nx.Graph()
    for v in range(1, K.m + 1):
        G.add_node(("v", v), kind="v")
    for i, f in enumerate(K.maximal_faces):
        G.add_node(("f", i), kind="f")
        for v in f:
            G.add_edge(("v", v), ("f", i))
    return G


def find_isomorphism(K1: SimplicialComplex, K2: SimplicialComplex) -> dict[int, int] | None:
    """A vertex bijection carrying K1 onto K2, or None."""
    if K1.m != K2.m or len(K1.maximal_faces) != len(K2.maximal_faces):
        return None
    if sorted(map(len, K1.maximal_faces)) != sorted(map(len, K2.maximal_faces)):
        return None
    matcher = nx_iso.GraphMatcher(
        _incidence_graph(K1),
        _incidence_graph(K2),
        node_match=nx_iso.categorical_node_match("kind", None),
    )
    for mapping in matcher.isomorphisms_iter():
        return {a[1]: b[1] for a, b in mapping.items() if a[0] == "v"}
    return None


def are_isomorphic(K1: SimplicialComplex, K2: SimplicialComplex) -> bool:
    return find_isomorphism(K1, K2) is not None
