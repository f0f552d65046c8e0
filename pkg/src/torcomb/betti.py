"""Bigraded Betti numbers of moment-angle complexes.

The cohomology of Z_K is that of the Koszul algebra
Lambda[u_1..u_m] (x) Q[K] / (v_i^2 = u_i v_i = 0) with d u_i = v_i.  It splits
over subsets tau of [m]: the summand for tau has basis u_omega v_sigma with
omega + sigma = tau and sigma a face, and contributes to bidegree
(-|omega|, 2|tau|).
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations

from .complex import SimplicialComplex, from_mask, h_polynomial
from .families import PolygonPresentation
from .linalg import smith_normal_form, sparse_rank
from .polynomials import poly_mul, poly_pow

DESK_CAP_M = 16


class DeskScaleError(RuntimeError):
    pass


@dataclass
class BettiTable:
    """``entries[(q, p2)]`` is beta^{q, p2}; q <= 0, p2 = 2p even."""

    entries: dict[tuple[int, int], int] = field(default_factory=dict)
    torsion: dict[tuple[int, int], list[int]] = field(default_factory=dict)

    def get(self, q: int, p2: int) -> int:
        return self.entries.get((q, p2), 0)

    def add(self, q: int, p2: int, value: int):
        if value:
            self.entries[(q, p2)] = self.entries.get((q, p2), 0) + value

    def row_sum(self, q: int) -> int:
        return sum(v for (qq, _), v in self.entries.items() if qq == q)

    def total(self) -> int:
        return sum(self.entries.values())

    def __eq__(self, other):
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.entries == other.entries

    def to_dict(self) -> dict:
        out = {
            "entries": [
                {"q": q, "p2": p2, "rank": r} for (q, p2), r in sorted(self.entries.items(), key=lambda t: (-t[0][0], t[0][1]))
            ]
        }
        if self.torsion:
            out["torsion"] = [
                {"q": q, "p2": p2, "factors": f} for (q, p2), f in sorted(self.torsion.items())
            ]
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "BettiTable":
        t = cls()
        for e in data["entries"]:
            t.add(int(e["q"]), int(e["p2"]), int(e["rank"]))
        return t

    def grid(self) -> str:
        """Aligned text grid: rows q = 0, -1, ..., columns 2p."""
        if not self.entries:
            return "(empty)"
        qs = sorted({q for q, _ in self.entries}, reverse=True)
        ps = sorted({p for _, p in self.entries})
        head = ["q\\2p"] + [str(p) for p in ps]
        rows = [[str(q)] + [str(self.get(q, p)) if self.get(q, p) else "." for p in ps] for q in qs]
        widths = [max(len(r[i]) for r in [head] + rows) for i in range(len(head))]
        return "\n".join(
            "  ".join(c.rjust(w) for c, w in zip(r, widths)) for r in [head] + rows
        )


# ---------------------------------------------------------------------------
# Koszul complex per multidegree


def _faces_inside(K: SimplicialComplex, tau: int) -> list[int]:
    tops = {f & tau for f in K.face_masks}
    faces = set()
    for f in tops:
        sub = f
        while True:
            faces.add(sub)
            if sub == 0:
                break
            sub = (sub - 1) & f
    return sorted(faces)


def koszul_differential(K: SimplicialComplex, tau: int, q: int, faces: list[int] | None = None):
    """Rows for d: C^{-q} -> C^{-q+1} in multidegree tau.

    Returns (row basis, column basis, rows as {col index: entry}).  A basis
    element is named by its v-part sigma (omega = tau minus sigma).
    """
    if faces is None:
        faces = _faces_inside(K, tau)
    p = bin(tau).count("1")
    src = [s for s in faces if bin(s).count("1") == p - q]
    dst = [s for s in faces if bin(s).count("1") == p - q + 1]
    index = {s: j for j, s in enumerate(dst)}
    rows = []
    for s in src:
        omega = tau & ~s
        row = {}
        pos = 0
        rest = omega
        while rest:
            low = rest & -rest
            j = index.get(s | low)
            if j is not None:
                row[j] = -1 if pos % 2 else 1
            pos += 1
            rest ^= low
        rows.append(row)
    return src, dst, rows


def _is_cone(K: SimplicialComplex, tau: int) -> bool:
    """Some vertex of tau lies in every maximal face of the full subcomplex on tau.

    The Koszul summand of a cone is acyclic (contract along the apex), so such
    multidegrees contribute nothing.
    """
    if not tau:
        return False
    tops = {f & tau for f in K.face_masks}
    common = tau
    for t in tops:
        if not any(t != u and t & u == t for u in tops):
            common &= t
            if not common:
                return False
    return bool(common)


def _tau_betti(K: SimplicialComplex, tau: int, integral: bool, skip_cones: bool = True):
    """[(q, rank, torsion factors)] for one multidegree."""
    if skip_cones and _is_cone(K, tau):
        return []
    faces = _faces_inside(K, tau)
    p = bin(tau).count("1")
    dims = {}
    ranks = {}
    mats = {}
    for q in range(0, p + 1):
        src, dst, rows = koszul_differential(K, tau, q, faces)
        dims[q] = len(src)
        if q == 0 or not src or not dst:
            ranks[q] = 0
            mats[q] = None
            continue
        if integral:
            dense = [[r.get(j, 0) for j in range(len(dst))] for r in rows]
            mats[q] = smith_normal_form(dense).diagonal
            ranks[q] = sum(1 for d in mats[q] if d)
        else:
            ranks[q] = sparse_rank([dict(r) for r in rows if r])
    out = []
    for q in range(0, p + 1):
        h = dims[q] - ranks[q] - ranks.get(q + 1, 0)
        tors = []
        if integral and mats.get(q + 1):
            tors = [d for d in mats[q + 1] if d > 1]
        if h or tors:
            out.append((q, h, tors))
    return out


def _chunk_worker(args):
    K, taus, integral = args
    return [(tau, _tau_betti(K, tau, integral)) for tau in taus]


def koszul_betti(
    K: SimplicialComplex,
    integral: bool = False,
    workers: int | None = None,
    cap: int = DESK_CAP_M,
    order: list[int] | None = None,
) -> BettiTable:
    """beta^{-q,2p} summed over multidegrees tau with |tau| = p.

    With ``integral=True`` ranks come from Smith forms and torsion of the
    integral cohomology is recorded as well.  ``order`` overrides the
    enumeration order of the multidegrees (results do not depend on it).
    """
    if K.m > cap:
        raise DeskScaleError(f"m = {K.m} exceeds the desk-scale cap {cap} for Betti numbers")
    if workers is None:
        try:
            workers = max(1, int(os.environ.get("TORCOMB_THREADS", "1")))
        except ValueError:
            workers = 1
    taus = list(range(1 << K.m)) if order is None else list(order)
    table = BettiTable()
    if workers > 1 and len(taus) > 64:
        chunks = [taus[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [r for part in pool.map(_chunk_worker, [(K, c, integral) for c in chunks]) for r in part]
    else:
        results = [(tau, _tau_betti(K, tau, integral)) for tau in taus]
    for tau, parts in sorted(results):
        p = bin(tau).count("1")
        for q, h, tors in parts:
            table.add(-q, 2 * p, h)
            if tors:
                table.torsion.setdefault((-q, 2 * p), []).extend(tors)
    return table


# ---------------------------------------------------------------------------
# polygon family closed forms


def polygon_betti_closed_form(p: PolygonPresentation) -> BettiTable:
    """beta^{0,0} = 1, beta^{-1,2j} = #{l : phi_l = j}, beta^{-2,2j} = #{l : psi_l = j},
    beta^{-3, 2(n+3)} = 1.  For k = 2 the table comes from the product of three
    odd spheres instead."""
    if p.k == 2:
        return _triangle_betti(p)
    t = BettiTable()
    t.add(0, 0, 1)
    for l in range(1, p.size + 1):
        t.add(-1, 2 * p.phi(l), 1)
        t.add(-2, 2 * p.psi(l), 1)
    t.add(-3, 2 * (p.n + 3), 1)
    return t


def _triangle_betti(p: PolygonPresentation) -> BettiTable:
    """Z_P = S^{2a_1-1} x S^{2a_2-1} x S^{2a_3-1}: one class per subset of factors."""
    t = BettiTable()
    for size in range(4):
        for S in combinations(range(3), size):
            t.add(-size, 2 * sum(p.weights[i] for i in S), 1)
    return t


# ---------------------------------------------------------------------------
# minimal resolution of the face ring (polygon family)

Poly = dict  # monomial exponent tuple over the block variables -> int


def _mono(size: int, idx: list[int]) -> tuple[int, ...]:
    e = [0] * size
    for i in idx:
        e[i % size] += 1
    return tuple(e)


def _padd(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for mono, c in b.items():
        v = out.get(mono, 0) + sign * c
        if v:
            out[mono] = v
        else:
            out.pop(mono, None)
    return out


def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            mono = tuple(x + y for x, y in zip(ma, mb))
            v = out.get(mono, 0) + ca * cb
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
    return out


@dataclass
class ResolutionStage:
    """Free module on ``generators``; ``differential[g]`` expresses d(g) in the
    previous stage's generators as polynomials in the block variables x_i."""

    index: int
    generators: list[tuple[str, tuple[int, ...]]]
    differential: list[dict[int, Poly]]

    @property
    def rank(self) -> int:
        return len(self.generators)

    def degrees(self, p: PolygonPresentation) -> list[int]:
        """Total internal degree 2 * (sum of weights of the block monomial)."""
        return [2 * sum(e * p.a(i + 1) for i, e in enumerate(md)) for _, md in self.generators]


def polygon_minimal_resolution(p: PolygonPresentation) -> list[ResolutionStage]:
    """X_i -> V_i = x_i ... x_{i+k-2};  Y_i -> x_{i+k-1} X_i - x_i X_{i+1};
    Z -> sum_i x_{i+k} ... x_{i+2k-2} Y_i.  Block variable x_i stands for the
    product of the a_i face-ring variables of block i; indices are cyclic."""
    size, k = p.size, p.k

    def x(*idx):
        return {_mono(size, list(idx)): 1}

    r0 = ResolutionStage(0, [("1", _mono(size, []))], [{}])
    gens1, diff1 = [], []
    for i in range(size):
        idx = list(range(i, i + k - 1))
        gens1.append((f"X{i + 1}", _mono(size, idx)))
        diff1.append({0: x(*idx)})
    gens2, diff2 = [], []
    for i in range(size):
        idx = list(range(i, i + k))
        gens2.append((f"Y{i + 1}", _mono(size, idx)))
        diff2.append({i: x(i + k - 1), (i + 1) % size: {m: -c for m, c in x(i).items()}})
    dz = {}
    for i in range(size):
        dz[i] = x(*range(i + k, i + 2 * k - 1))
    r3 = ResolutionStage(3, [("Z", _mono(size, list(range(size))))], [dz])
    return [r0, ResolutionStage(1, gens1, diff1), ResolutionStage(2, gens2, diff2), r3]


def compose_is_zero(upper: ResolutionStage, lower: ResolutionStage) -> bool:
    """d(d(g)) = 0 for every generator g of ``upper``."""
    for dg in upper.differential:
        total: Poly = {}
        for j, coeff in dg.items():
            for t, c2 in lower.differential[j].items():
                total = _padd(total, _pmul(coeff, c2))
        if total:
            return False
    return True


def resolution_is_minimal(stages: list[ResolutionStage]) -> bool:
    """No differential entry has a nonzero constant term."""
    zero_len = len(stages[0].generators[0][1])
    const = tuple([0] * zero_len)
    return all(const not in poly for st in stages for dg in st.differential for poly in dg.values())


def resolution_betti(p: PolygonPresentation) -> BettiTable:
    t = BettiTable()
    for st in polygon_minimal_resolution(p):
        for d in st.degrees(p):
            t.add(-st.index, d, 1)
    return t


# ---------------------------------------------------------------------------
# Euler characteristic identity


def euler_h_identity_check(K: SimplicialComplex, table: BettiTable | None = None) -> bool:
    """sum_p (sum_q (-1)^q beta^{-q,2p}) x^p == (1 - x)^(m-n) * sum_i h_i x^i, x = t^2."""
    if table is None:
        table = koszul_betti(K)
    lhs = [0] * (K.m + 1)
    for (q, p2), r in table.entries.items():
        lhs[p2 // 2] += (-1) ** (-q) * r
    h = list(h_polynomial(K).coeffs)
    rhs = poly_mul(poly_pow([1, -1], K.m - K.n), h)
    size = max(len(lhs), len(rhs))
    return lhs + [0] * (size - len(lhs)) == rhs + [0] * (size - len(rhs))
