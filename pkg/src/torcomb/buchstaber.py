"""Real and integral Buchstaber invariants.

An assignment sends vertex i of K to a vector lambda_i in R^r (R = GF(2) or Z)
so that the vectors on every maximal face are independent (over GF(2)) or
extend to a basis of Z^r.  The invariant is the largest s = m - r for which
such an assignment exists.

GF(2) vectors are ints (bit j = coordinate j).  A linear span inside GF(2)^r
is stored as a 2^r-bit mask of its elements, so "is x in the span" is one bit
test and extending the span by x is a bit permutation.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

from .complex import (
    ComplexError,
    SimplicialComplex,
    chromatic_coloring,
    flag_defect,
    minimal_non_faces,
    to_mask,
)
from .linalg import (
    gf2_nullspace,
    gf2_rank_words,
    integer_kernel,
    is_part_of_basis,
    transpose,
    unpack_bits,
)


@dataclass(frozen=True)
class TorusAssignment:
    """``vectors[i]`` is the vector of vertex i+1 in R^r."""

    ring: str
    r: int
    vectors: tuple[tuple[int, ...], ...]

    @property
    def s(self) -> int:
        return len(self.vectors) - self.r

    def to_dict(self) -> dict:
        return {"ring": self.ring, "r": self.r, "vectors": [list(v) for v in self.vectors]}

    @classmethod
    def from_dict(cls, data: dict) -> "TorusAssignment":
        return cls(data["ring"], int(data["r"]), tuple(tuple(int(x) for x in v) for v in data["vectors"]))

    @classmethod
    def from_words(cls, words: Sequence[int], r: int) -> "TorusAssignment":
        return cls("GF2", r, tuple(tuple(unpack_bits(w, r)) for w in words))

    def words(self) -> list[int]:
        return [sum((x & 1) << j for j, x in enumerate(v)) for v in self.vectors]


@dataclass
class SRange:
    lower: int
    upper: int
    exact: bool
    certificate: TorusAssignment | None = None
    provenance: list[tuple[str, int]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "exact": self.exact,
            "certificate": self.certificate.to_dict() if self.certificate else None,
            "provenance": [[name, value] for name, value in self.provenance],
        }


def _require_pure(K: SimplicialComplex):
    if not K.is_pure:
        raise ComplexError("Buchstaber invariant needs a pure complex")
    if K.n >= K.m:
        raise ComplexError("K is a full simplex; it has no free torus action")


def check_assignment(K: SimplicialComplex, cert: TorusAssignment) -> bool:
    """Verify a certificate face by face."""
    if len(cert.vectors) != K.m or any(len(v) != cert.r for v in cert.vectors):
        return False
    if cert.ring == "GF2":
        words = cert.words()
        return all(
            gf2_rank_words([words[v - 1] for v in f]) == len(f) for f in K.maximal_faces
        )
    if cert.ring == "Int":
        for f in K.maximal_faces:
            cols = [cert.vectors[v - 1] for v in f]
            if not is_part_of_basis(transpose(cols)):
                return False
        return True
    raise ValueError(f"unknown ring {cert.ring!r}")


# ---------------------------------------------------------------------------
# the pruned search over GF(2)


def _xor_masks(r: int) -> list[int]:
    """M_b: the set of y in GF(2)^r with bit b clear, as a 2^r-bit mask."""
    size = 1 << r
    out = []
    for b in range(r):
        step = 1 << b
        block = ((1 << step) - 1)
        mask = 0
        for start in range(0, size, 2 * step):
            mask |= block << start
        out.append(mask)
    return out


def _translate(S: int, x: int, masks: list[int]) -> int:
    """{y ^ x : y in S}; each set bit of x swaps blocks of the mask."""
    b = 0
    while x:
        if x & 1:
            step = 1 << b
            S = ((S & masks[b]) << step) | ((S >> step) & masks[b])
        x >>= 1
        b += 1
    return S


def _vertex_order(K: SimplicialComplex) -> list[int]:
    """Start with a maximal face, then repeatedly take the vertex lying in the
    most maximal faces that already meet the chosen set."""
    faces = K.face_masks
    chosen = list(K.maximal_faces[0])
    placed = to_mask(chosen)
    rest = [v for v in range(1, K.m + 1) if v not in chosen]
    while rest:
        def score(v):
            bit = 1 << (v - 1)
            touching = [f for f in faces if f & bit]
            return (
                sum(1 for f in touching if f & placed),
                sum(bin(f & placed).count("1") for f in touching),
                -v,
            )

        v = max(rest, key=score)
        chosen.append(v)
        placed |= 1 << (v - 1)
        rest.remove(v)
    return chosen


class _Search:
    """Backtracking for a GF(2) assignment into GF(2)^r.

    Canonical prefix: after placing some vectors their span is forced to be
    <e_1..e_d>, and a new vector is either inside it (x < 2^d) or exactly
    e_{d+1}.  Any assignment is carried to such a form by GL(r, 2).
    """

    def __init__(self, K: SimplicialComplex, r: int, prune_symmetry: bool = True):
        self.K = K
        self.r = r
        self.masks = _xor_masks(r)
        self.full = (1 << (1 << r)) - 1
        self.order = _vertex_order(K)
        pos = {v: i for i, v in enumerate(self.order)}
        self.faces = [[pos[v] for v in f] for f in K.maximal_faces]
        self.faces_of = [[] for _ in self.order]
        for fi, f in enumerate(self.faces):
            for p in f:
                self.faces_of[p].append(fi)
        self.neighbours = []
        for p in range(len(self.order)):
            nb = set()
            for fi in self.faces_of[p]:
                nb.update(self.faces[fi])
            nb.discard(p)
            self.neighbours.append(sorted(nb))
        self.prune_symmetry = prune_symmetry

    def start_state(self):
        return [0] * len(self.order), [1] * len(self.faces), 0

    def candidates(self, depth: int, spans: list[int], d: int) -> list[int]:
        forbidden = 0
        for fi in self.faces_of[depth]:
            forbidden |= spans[fi]
        top = 1 << self.r
        if self.prune_symmetry:
            limit = 1 << d
            cands = [x for x in range(1, min(limit, top)) if not (forbidden >> x) & 1]
            if d < self.r and not (forbidden >> limit) & 1:
                cands.append(limit)
            return cands
        return [x for x in range(1, top) if not (forbidden >> x) & 1]

    def place(self, depth, x, vecs, spans, d):
        """Assign and forward-check; returns (new spans, new d) or None."""
        vecs[depth] = x
        new = list(spans)
        for fi in self.faces_of[depth]:
            new[fi] = spans[fi] | _translate(spans[fi], x, self.masks)
        for w in self.neighbours[depth]:
            if w > depth:
                forbidden = 0
                for fi in self.faces_of[w]:
                    forbidden |= new[fi]
                if forbidden == self.full:
                    return None
        nd = d + 1 if x == (1 << d) and self.prune_symmetry else d
        return new, nd

    def run(self, depth, vecs, spans, d):
        if depth == len(self.order):
            return list(vecs)
        for x in self.candidates(depth, spans, d):
            res = self.place(depth, x, vecs, spans, d)
            if res is None:
                continue
            found = self.run(depth + 1, vecs, *res)
            if found is not None:
                return found
        return None

    def to_words(self, vecs: list[int]) -> list[int]:
        out = [0] * self.K.m
        for p, v in enumerate(self.order):
            out[v - 1] = vecs[p]
        return out


def _branch_worker(args):
    K, r, prefix = args
    search = _Search(K, r)
    vecs, spans, d = search.start_state()
    for depth, x in enumerate(prefix):
        res = search.place(depth, x, vecs, spans, d)
        if res is None:
            return None
        spans, d = res
    found = search.run(len(prefix), vecs, spans, d)
    return None if found is None else search.to_words(found)


def gf2_assignment(K: SimplicialComplex, r: int, workers: int = 1) -> list[int] | None:
    """A GF(2) assignment into GF(2)^r, or None if there is none."""
    _require_pure(K)
    if r < K.n:
        return None
    search = _Search(K, r)
    vecs, spans, d = search.start_state()
    if workers <= 1:
        found = search.run(0, vecs, spans, d)
        return None if found is None else search.to_words(found)
    # split at the first depth with more than one live candidate; branches are
    # examined in candidate order so the answer matches the sequential search
    prefix: list[int] = []
    depth = 0
    while depth < len(search.order):
        cands = [
            x for x in search.candidates(depth, spans, d)
            if search.place(depth, x, list(vecs), spans, d) is not None
        ]
        if len(cands) != 1:
            break
        spans, d = search.place(depth, cands[0], vecs, spans, d)
        prefix.append(cands[0])
        depth += 1
    else:
        return search.to_words(vecs)
    if not cands:
        return None
    jobs = [(K, r, prefix + [x]) for x in cands]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for result in pool.map(_branch_worker, jobs):
            if result is not None:
                return result
    return None


def default_workers() -> int:
    try:
        return max(1, int(os.environ.get("TORCOMB_THREADS", "1")))
    except ValueError:
        return 1


def s_real(K: SimplicialComplex, workers: int | None = None) -> tuple[int, TorusAssignment]:
    """Exact real Buchstaber invariant with a GF(2) certificate.

    r = m - s is tried upwards from max(n, ceil(log2(gamma + 1))); r = m - 1
    always succeeds (e_1, ..., e_{m-1} and their sum).
    """
    _require_pure(K)
    workers = default_workers() if workers is None else workers
    gamma = max(chromatic_coloring(K).values()) + 1
    r = max(K.n, gamma.bit_length())
    while r < K.m - 1:
        words = gf2_assignment(K, r, workers)
        if words is not None:
            return K.m - r, TorusAssignment.from_words(words, r)
        r += 1
    return 1, diagonal_certificate(K.m, "GF2")


def s_real_bruteforce(K: SimplicialComplex) -> int:
    """Unpruned oracle: plain enumeration of nonzero vectors, faces checked
    only once all their vertices are assigned.  Tiny inputs only."""
    _require_pure(K)
    m = K.m
    faces = [tuple(v - 1 for v in f) for f in K.maximal_faces]
    last = [max(f) for f in faces]
    by_last = [[f for f, l in zip(faces, last) if l == i] for i in range(m)]
    for r in range(K.n, m - 1):
        vecs = [0] * m

        def rec(i):
            if i == m:
                return True
            for x in range(1, 1 << r):
                vecs[i] = x
                if all(gf2_rank_words([vecs[v] for v in f]) == len(f) for f in by_last[i]):
                    if rec(i + 1):
                        return True
            return False

        if rec(0):
            return m - r
    return 1


def diagonal_certificate(m: int, ring: str = "Int") -> TorusAssignment:
    """e_1, ..., e_{m-1}, -(e_1 + ... + e_{m-1}): any m-1 of them form a basis."""
    r = m - 1
    vecs = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    last = -1 if ring == "Int" else 1
    vecs.append(tuple(last for _ in range(r)))
    return TorusAssignment(ring, r, tuple(vecs))


# ---------------------------------------------------------------------------
# the dual matrix M and lifting to Z


def dual_matrix(cert: TorusAssignment) -> list[list[int]] | None:
    """GF(2) m x s matrix whose columns span the kernel of [lambda_1 .. lambda_m].

    Returns None when the vectors do not span GF(2)^r.
    """
    words = cert.words()
    m, r = len(words), cert.r
    rows = [sum(((w >> j) & 1) << i for i, w in enumerate(words)) for j in range(r)]
    if gf2_rank_words(rows) != r:
        return None
    kernel = gf2_nullspace(rows, m)
    return [[(col >> i) & 1 for col in kernel] for i in range(m)]


def check_dual_matrix(K: SimplicialComplex, M: Sequence[Sequence[int]], ring: str = "Int") -> bool:
    """Rows of M off each maximal face must extend to a basis (Z) or be of full rank (GF(2))."""
    s = len(M[0]) if M else 0
    for f in K.maximal_faces:
        inside = set(f)
        sub = [list(M[i - 1]) for i in range(1, K.m + 1) if i not in inside]
        if ring == "Int":
            if not is_part_of_basis(transpose(sub)):
                return False
        else:
            words = [sum((x & 1) << j for j, x in enumerate(row)) for row in sub]
            if gf2_rank_words(words) != s:
                return False
    return True


def lift_certificate(K: SimplicialComplex, cert: TorusAssignment) -> TorusAssignment | None:
    """Try to turn a GF(2) certificate into an integral one.

    First the 0/1 vectors are read as integer vectors.  Failing that, the dual
    GF(2) matrix M is read over Z and lambda is rebuilt as an integer basis of
    the left kernel of M; with m - n <= 3 every 0/1 submatrix of M of full
    GF(2) rank is unimodular, so this succeeds.  The result is always verified.
    """
    direct = TorusAssignment("Int", cert.r, cert.vectors)
    if check_assignment(K, direct):
        return direct
    M = dual_matrix(cert)
    if M is None or not M[0] or not check_dual_matrix(K, M, "Int"):
        return None
    # rows of the result are a basis of {y in Z^m : y^T M = 0}
    basis = integer_kernel(transpose(M))  # m x r, columns are kernel vectors
    if not basis or len(basis[0]) != cert.r:
        return None
    vecs = tuple(tuple(basis[i]) for i in range(K.m))
    lifted = TorusAssignment("Int", cert.r, vecs)
    return lifted if check_assignment(K, lifted) else None


# ---------------------------------------------------------------------------
# bounds


def aizenberg_bound(K: SimplicialComplex) -> int:
    """m - ceil(log2(gamma + 1))."""
    gamma = max(chromatic_coloring(K).values()) + 1
    return K.m - gamma.bit_length()


def izmestiev_certificate(K: SimplicialComplex) -> TorusAssignment | None:
    """Vertex i -> e_{c(i)} for an optimal colouring c; valid when gamma < m."""
    colouring = chromatic_coloring(K)
    gamma = max(colouring.values()) + 1
    if gamma >= K.m:
        return None
    vecs = tuple(tuple(int(colouring[v] == j) for j in range(gamma)) for v in range(1, K.m + 1))
    return TorusAssignment("Int", gamma, vecs)


def izmestiev_bound(K: SimplicialComplex) -> int:
    """m - gamma, clamped at 1."""
    gamma = max(chromatic_coloring(K).values()) + 1
    return max(1, K.m - gamma)


def min_cover_weight(m: int, sets: Sequence[Sequence[int]]) -> int | None:
    """Least sum of (|w| - 1) over subfamilies covering [m]; None if impossible."""
    items = sorted({to_mask(w): len(w) - 1 for w in sets}.items(), key=lambda t: (t[1], t[0]))
    universe = (1 << m) - 1
    union = 0
    for mask, _ in items:
        union |= mask
    if union != universe:
        return None
    containing = [[(mask, w) for mask, w in items if mask >> e & 1] for e in range(m)]
    best_ratio = max(bin(mask).count("1") / max(w, 1) for mask, w in items)
    best = [sum(w for _, w in items) + 1]

    def rec(covered, cost):
        if covered == universe:
            best[0] = min(best[0], cost)
            return
        left = bin(universe & ~covered).count("1")
        if cost + left / best_ratio >= best[0] - 1e-9:
            return
        e = ((universe & ~covered) & -(universe & ~covered)).bit_length() - 1
        for mask, w in containing[e]:
            rec(covered | mask, cost + w)

    rec(0, 0)
    return best[0]


def cover_bound(K: SimplicialComplex) -> int:
    """m minus the least total dimension of a cover of [m] by minimal non-faces."""
    weight = min_cover_weight(K.m, minimal_non_faces(K))
    if weight is None:
        return 1
    return max(1, K.m - weight)


def skeleton_s2_predicate(m: int, n: int) -> bool:
    if not 1 <= n <= m - 1:
        raise ValueError("need 1 <= n <= m-1")
    return 2 * m >= 3 * (n + 1)


_S3_OFFSET = (0, 4, 8, 5, 2, 6, 3)


def skeleton_s3_predicate(m: int, n: int) -> bool:
    if not 1 <= n <= m - 1:
        raise ValueError("need 1 <= n <= m-1")
    return 4 * m >= 7 * (n + 1) + _S3_OFFSET[m % 7]


def skeleton_s_lower(m: int, n: int) -> int:
    """A lower bound for s of the (n-1)-skeleton of the (m-1)-simplex.

    The full simplex (m = n) gives 0.
    """
    if m <= n:
        return 0
    best = max(1, m // (n + 1))
    if skeleton_s2_predicate(m, n):
        best = max(best, 2)
    if skeleton_s3_predicate(m, n):
        best = max(best, 3)
    return best


def chromatic_skeleton_bound(K: SimplicialComplex) -> int:
    """m - gamma + s(skeleton of dimension n-1 on gamma vertices)."""
    gamma = max(chromatic_coloring(K).values()) + 1
    return max(1, K.m - gamma + skeleton_s_lower(gamma, K.n))


def flag_bounds(K: SimplicialComplex) -> int:
    """Lower bound from flagness (k = 2) or k-flagness (least k)."""
    _require_pure(K)
    is_flag, k = flag_defect(K)
    m, n = K.m, K.n
    if is_flag:
        gamma = max(chromatic_coloring(K).values()) + 1
        return max(1, -(-(m - n) // 2) + skeleton_s_lower(gamma, n))
    return max(1, -(-(m - n) // k) - (k - 2) * n)


def s_int(K: SimplicialComplex, workers: int | None = None) -> SRange:
    """Certified interval for the integral invariant s(K)."""
    _require_pure(K)
    sr, gf2_cert = s_real(K, workers)
    aiz = aizenberg_bound(K)
    upper = min(sr, aiz)
    prov = [("s_real", sr), ("aizenberg", aiz)]
    lower = 1
    cert = diagonal_certificate(K.m)
    for name, value in (
        ("izmestiev", izmestiev_bound(K)),
        ("chromatic_skeleton", chromatic_skeleton_bound(K)),
        ("cover", cover_bound(K)),
        ("flag", flag_bounds(K)),
    ):
        prov.append((name, value))
        lower = max(lower, value)
    izm = izmestiev_certificate(K)
    if izm is not None and izm.s >= cert.s and check_assignment(K, izm):
        cert = izm
    lifted = lift_certificate(K, gf2_cert)
    if lifted is not None:
        prov.append(("lifted_certificate", lifted.s))
        if lifted.s >= cert.s:
            cert = lifted
    lower = max(lower, cert.s)
    if lower > upper:
        raise ArithmeticError(f"bounds crossed: lower {lower} > upper {upper}")
    return SRange(lower, upper, lower == upper, cert, prov)


# ---------------------------------------------------------------------------
# Fukukawa-Masuda integer program


def fm_mk(k: int, b: int) -> int:
    """max sum a_v over v in GF(2)^k minus 0, subject to
    sum_{v : <u, v> = 0} a_v <= b for every u != 0, a_v >= 0 integer.

    Every v is orthogonal to some u != 0 (k >= 2), so a_v <= b; branch and
    bound over that box, bounding each open variable by its tightest slack.
    """
    if not 2 <= k <= 4:
        raise ValueError("desk-scale limit: fm_mk supports 2 <= k <= 4")
    if b < 0:
        raise ValueError("b must be >= 0")
    vs = list(range(1, 1 << k))
    us = list(range(1, 1 << k))
    orth = {v: [u for u in us if bin(u & v).count("1") % 2 == 0] for v in vs}
    slack = {u: b for u in us}
    best = [0]

    def rec(i, total):
        if i == len(vs):
            best[0] = max(best[0], total)
            return
        bound = total + sum(min(slack[u] for u in orth[v]) for v in vs[i:])
        if bound <= best[0]:
            return
        v = vs[i]
        cap = min(slack[u] for u in orth[v])
        for a in range(cap, -1, -1):
            for u in orth[v]:
                slack[u] -= a
            rec(i + 1, total + a)
            for u in orth[v]:
                slack[u] += a

    rec(0, 0)
    return best[0]


def fm_sandwich(k: int, b: int) -> tuple[int, int]:
    """Lower and upper bounds for m_k(b) in terms of b = (2^(k-1) - 1) Q + R."""
    unit = (1 << (k - 1)) - 1
    Q, R = divmod(b, unit)
    top = 1 << (k - 1)
    l = next(
        l for l in range(0, k - 1)
        if top - (1 << (k - 1 - l)) <= R < top - (1 << (k - 1 - (l + 1)))
    )
    lower = ((1 << k) - 1) * Q + R + top - (1 << (k - 1 - l))
    upper = ((1 << k) - 1) * Q + 2 * R
    return lower, upper
