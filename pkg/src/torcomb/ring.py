"""Products in the Koszul algebra R*(K) and the cohomology ring of Z_P for
the polygon family.

R*(K) = Lambda[u_1..u_m] (x) Z[K] / (v_i^2 = u_i v_i = 0), d u_i = v_i.  A
monomial u_omega v_sigma is stored as the pair of bitmasks (omega, sigma); the
u's are ordered by increasing label.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .betti import koszul_betti, koszul_differential
from .complex import SimplicialComplex, from_mask, to_mask
from .families import PolygonPresentation, polygon_complex
from .linalg import mat_mul, smith_normal_form


class RingError(ValueError):
    pass


def _popcount(x: int) -> int:
    return bin(x).count("1")


def _merge_sign(a: int, b: int) -> int:
    """Sign of u_a u_b = sign * u_{a+b}: (-1)^#{(i in a, j in b) : i > j}."""
    inv = 0
    rest = b
    while rest:
        low = rest & -rest
        inv += _popcount(a & ~((low << 1) - 1))
        rest ^= low
    return -1 if inv % 2 else 1


@dataclass
class KoszulElement:
    terms: dict[tuple[int, int], int] = field(default_factory=dict)

    @classmethod
    def monomial(cls, K: SimplicialComplex, omega: Iterable[int] = (), sigma: Iterable[int] = (), coeff: int = 1):
        o, s = to_mask(omega), to_mask(sigma)
        if o & s or not K.contains_mask(s):
            return cls()
        return cls({(o, s): coeff} if coeff else {})

    @classmethod
    def u(cls, K, i):
        return cls.monomial(K, (i,), ())

    @classmethod
    def v(cls, K, i):
        return cls.monomial(K, (), (i,))

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        out = dict(self.terms)
        for key, c in other.terms.items():
            val = out.get(key, 0) + c
            if val:
                out[key] = val
            else:
                out.pop(key, None)
        return KoszulElement(out)

    def __neg__(self):
        return KoszulElement({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c: int):
        if c == 0:
            return KoszulElement()
        return KoszulElement({k: c * x for k, x in self.terms.items()})

    def multidegrees(self) -> set[tuple[int, int]]:
        """{(tau mask, |omega|)} over the terms."""
        return {(o | s, _popcount(o)) for o, s in self.terms}

    def bidegree(self) -> tuple[int, int] | None:
        degs = {(-_popcount(o), 2 * _popcount(o | s)) for o, s in self.terms}
        if len(degs) != 1:
            return None
        return degs.pop()

    def describe(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (o, s), c in sorted(self.terms.items()):
            mono = "".join(f"u{i}" for i in from_mask(o)) + "".join(f"v{i}" for i in from_mask(s))
            parts.append(f"{c:+d}*{mono or '1'}")
        return " ".join(parts)


def koszul_product(K: SimplicialComplex, x: KoszulElement, y: KoszulElement) -> KoszulElement:
    """Bilinear product; monomials with any repeated index or a non-face v-part vanish."""
    out: dict[tuple[int, int], int] = {}
    for (o1, s1), c1 in x.terms.items():
        for (o2, s2), c2 in y.terms.items():
            if (o1 | s1) & (o2 | s2):
                continue
            s = s1 | s2
            if not K.contains_mask(s):
                continue
            key = (o1 | o2, s)
            val = out.get(key, 0) + _merge_sign(o1, o2) * c1 * c2
            if val:
                out[key] = val
            else:
                out.pop(key, None)
    return KoszulElement(out)


def product_of(K: SimplicialComplex, factors: Iterable[KoszulElement]) -> KoszulElement:
    result = KoszulElement({(0, 0): 1})
    for f in factors:
        result = koszul_product(K, result, f)
    return result


def koszul_d(K: SimplicialComplex, x: KoszulElement) -> KoszulElement:
    """d(u_omega v_sigma) = sum_j (-1)^(j-1) u_{omega - i_j} v_{sigma + i_j}."""
    out: dict[tuple[int, int], int] = {}
    for (o, s), c in x.terms.items():
        pos = 0
        rest = o
        while rest:
            low = rest & -rest
            ns = s | low
            if K.contains_mask(ns):
                key = (o & ~low, ns)
                val = out.get(key, 0) + (-c if pos % 2 else c)
                if val:
                    out[key] = val
                else:
                    out.pop(key, None)
            pos += 1
            rest ^= low
    return KoszulElement(out)


# ---------------------------------------------------------------------------
# cohomology of one multidegree


@dataclass
class ClassCoordinates:
    """Coordinates of a cohomology class: free part and (residue, order) torsion part."""

    free: tuple[int, ...]
    torsion: tuple[tuple[int, int], ...]

    def is_zero(self) -> bool:
        return not any(self.free) and not any(r for r, _ in self.torsion)

    def equal_up_to_sign(self, other: "ClassCoordinates") -> bool:
        if self == other:
            return True
        neg = ClassCoordinates(
            tuple(-x for x in self.free), tuple(((-r) % d, d) for r, d in self.torsion)
        )
        return neg == other


class MultidegreeCohomology:
    """H^{-q} of the Koszul summand in multidegree tau, over Z."""

    def __init__(self, K: SimplicialComplex, tau: int, q: int):
        self.K, self.tau, self.q = K, tau, q
        src, dst, rows = koszul_differential(K, tau, q)
        self.basis = src
        self.index = {s: i for i, s in enumerate(src)}
        n = len(src)
        # A: columns indexed by src, rows by dst (d acting on column vectors)
        A = [[0] * n for _ in dst]
        for i, row in enumerate(rows):
            for j, c in row.items():
                A[j][i] = c
        self.A = A
        if A and n:
            snf = smith_normal_form(A, transforms=True)
            r = snf.rank
            self.V_inv = snf.V_inv
        else:
            r = 0
            self.V_inv = [[int(i == j) for j in range(n)] for i in range(n)]
        self.kernel_rank = n - r
        self._r = r
        # image of d from C^{-q-1}, in kernel coordinates
        src2, _, rows2 = koszul_differential(K, tau, q + 1)
        B = [[0] * len(src2) for _ in range(n)]
        for i, row in enumerate(rows2):
            for j, c in row.items():
                B[j][i] = c
        if n and src2:
            C = [row[:] for row in mat_mul(self.V_inv, B)[r:]]
        else:
            C = [[] for _ in range(self.kernel_rank)]
        if self.kernel_rank and C and C[0]:
            snf2 = smith_normal_form(C, transforms=True)
            self.U2 = snf2.U
            diag = snf2.diagonal + [0] * (self.kernel_rank - len(snf2.diagonal))
        else:
            self.U2 = [[int(i == j) for j in range(self.kernel_rank)] for i in range(self.kernel_rank)]
            diag = [0] * self.kernel_rank
        self.diag = diag

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diag if d == 0)

    @property
    def torsion(self) -> list[int]:
        return [d for d in self.diag if d > 1]

    def vector(self, x: KoszulElement) -> list[int]:
        vec = [0] * len(self.basis)
        for (o, s), c in x.terms.items():
            if o | s != self.tau or _popcount(o) != self.q:
                raise RingError("element does not live in this multidegree")
            vec[self.index[s]] += c
        return vec

    def coordinates(self, x: KoszulElement) -> ClassCoordinates:
        vec = self.vector(x)
        if any(sum(a * b for a, b in zip(row, vec)) for row in self.A):
            raise RingError("element is not a cocycle (dx != 0)")
        y = [sum(a * b for a, b in zip(row, vec)) for row in self.V_inv][self._r:]
        z = [sum(a * b for a, b in zip(row, y)) for row in self.U2]
        free, tors = [], []
        for zi, d in zip(z, self.diag):
            if d == 0:
                free.append(zi)
            elif d > 1:
                tors.append((zi % d, d))
        return ClassCoordinates(tuple(free), tuple(tors))


def reduce_mod_coboundaries(K: SimplicialComplex, x: KoszulElement) -> dict[tuple[int, int], ClassCoordinates]:
    """Class of a cocycle, split by multidegree (tau, q)."""
    out = {}
    for tau, q in sorted(x.multidegrees()):
        part = KoszulElement(
            {(o, s): c for (o, s), c in x.terms.items() if o | s == tau and _popcount(o) == q}
        )
        out[(tau, q)] = MultidegreeCohomology(K, tau, q).coordinates(part)
    return out


def is_zero_class(K: SimplicialComplex, x: KoszulElement) -> bool:
    return all(c.is_zero() for c in reduce_mod_coboundaries(K, x).values())


# ---------------------------------------------------------------------------
# generators for the polygon family


@dataclass
class Generator:
    name: str
    bidegree: tuple[int, int]
    element: KoszulElement
    multidegree: int
    q: int


def _cyclic_labels(p: PolygonPresentation, start: int, length: int) -> list[int]:
    """Labels start+1, ..., start+length read cyclically in 1..m."""
    return [((start + t) % p.m) + 1 for t in range(length)]


def x_representative(p: PolygonPresentation, i: int, K: SimplicialComplex | None = None) -> KoszulElement:
    """v_{eta_{i-1}+1} ... v_{eta_{i-1}+phi_i-1} u_{eta_{i-1}+phi_i}."""
    K = K or polygon_complex(p)
    labels = _cyclic_labels(p, p.eta(i - 1), p.phi(i))
    factors = [KoszulElement.v(K, v) for v in labels[:-1]] + [KoszulElement.u(K, labels[-1])]
    return product_of(K, factors)


def y_representative(
    p: PolygonPresentation, i: int, K: SimplicialComplex | None = None, first_u: int = 0
) -> KoszulElement:
    """u_{eta_{i-1}+1} v ... v u_{eta_{i-1}+psi_i}.

    ``first_u`` moves the first u to another label of block i (the rest of the
    block stays v).
    """
    K = K or polygon_complex(p)
    if not 0 <= first_u < p.a(i):
        raise RingError("first_u must index a label of block i")
    labels = _cyclic_labels(p, p.eta(i - 1), p.psi(i))
    factors = []
    for t, v in enumerate(labels):
        if t == first_u or t == len(labels) - 1:
            factors.append(KoszulElement.u(K, v))
        else:
            factors.append(KoszulElement.v(K, v))
    return product_of(K, factors)


def z_representative(K: SimplicialComplex, sigma: Iterable[int] | None = None) -> KoszulElement:
    """u_omega v_sigma for a maximal face sigma (default: the least one)."""
    sigma = tuple(sorted(sigma)) if sigma is not None else min(K.maximal_faces)
    if sigma not in K.maximal_faces:
        raise RingError(f"{sigma} is not a maximal face")
    omega = [v for v in range(1, K.m + 1) if v not in sigma]
    return KoszulElement.monomial(K, omega, sigma)


def generator_representatives(p: PolygonPresentation) -> list[Generator]:
    K = polygon_complex(p)
    gens = []
    for i in range(1, p.size + 1):
        x = x_representative(p, i, K)
        (tau, q), = x.multidegrees()
        gens.append(Generator(f"X{i}", (-1, 2 * p.phi(i)), x, tau, q))
    for i in range(1, p.size + 1):
        y = y_representative(p, i, K)
        (tau, q), = y.multidegrees()
        gens.append(Generator(f"Y{i}", (-2, 2 * p.psi(i)), y, tau, q))
    z = z_representative(K)
    (tau, q), = z.multidegrees()
    gens.append(Generator("Z", (-3, 2 * p.m), z, tau, q))
    return gens


def check_generator(K: SimplicialComplex, g: Generator) -> tuple[bool, bool]:
    """(is a cocycle, represents a nonzero class)."""
    if not koszul_d(K, g.element).is_zero():
        return False, False
    return True, not is_zero_class(K, g.element)


# ---------------------------------------------------------------------------
# product table


@dataclass
class RingPresentation:
    weights: tuple[int, ...]
    generators: list[Generator]
    products: dict[tuple[str, ...], list[tuple[int, str]]]

    def bidegrees(self) -> dict[str, tuple[int, int]]:
        return {g.name: g.bidegree for g in self.generators}

    def signature(self):
        """Bidegree data of generators and nonzero products, ignoring names."""
        bd = self.bidegrees()
        gens = sorted(bd.values())
        prods = sorted(
            (tuple(bd[n] for n in key), tuple(sorted((abs(c), bd[g]) for c, g in val)))
            for key, val in self.products.items() if val
        )
        return gens, prods

    def to_dict(self) -> dict:
        return {
            "weights": list(self.weights),
            "generators": [
                {"name": g.name, "bidegree": list(g.bidegree), "representative": g.element.describe()}
                for g in self.generators
            ],
            "products": [
                {"factors": list(key), "result": [{"coeff": c, "generator": g} for c, g in val]}
                for key, val in sorted(self.products.items())
            ],
        }


def _express(K, gens_by_deg, element: KoszulElement) -> list[tuple[int, str]]:
    """Write a homogeneous cocycle as an integer combination of generator classes."""
    if element.is_zero():
        return []
    result = []
    for (tau, q), coords in reduce_mod_coboundaries(K, element).items():
        if coords.is_zero():
            continue
        cands = gens_by_deg.get((tau, q), [])
        H = MultidegreeCohomology(K, tau, q)
        if H.torsion or H.rank != len(cands):
            raise RingError(f"multidegree {from_mask(tau)} not spanned by generators")
        basis = [H.coordinates(g.element).free for g in cands]
        target = coords.free
        if len(cands) != 1 or len(target) != 1 or basis[0][0] in (0,) or target[0] % basis[0][0]:
            raise RingError(f"cannot express class in multidegree {from_mask(tau)}")
        result.append((target[0] // basis[0][0], cands[0].name))
    return result


def product_table(p: PolygonPresentation) -> RingPresentation:
    """All products X*X, X*Y, Y*X, Y*Y (and X1*X2*X3 for triangles), in generators."""
    K = polygon_complex(p)
    gens = generator_representatives(p)
    by_deg: dict[tuple[int, int], list[Generator]] = {}
    for g in gens:
        by_deg.setdefault((g.multidegree, g.q), []).append(g)
    xs = [g for g in gens if g.name.startswith("X")]
    ys = [g for g in gens if g.name.startswith("Y")]
    products: dict[tuple[str, ...], list[tuple[int, str]]] = {}
    for A in (xs, ys):
        for B in (xs, ys):
            for g in A:
                for h in B:
                    prod = koszul_product(K, g.element, h.element)
                    products[(g.name, h.name)] = _express(K, by_deg, prod)
    if p.k == 2:
        prod = product_of(K, [g.element for g in xs])
        products[tuple(g.name for g in xs)] = _express(K, by_deg, prod)
    return RingPresentation(p.weights, gens, products)


def expected_table(p: PolygonPresentation) -> dict[tuple[str, ...], set[str]]:
    """Nonzero pattern of the product table (generator names, signs ignored)."""
    size, k = p.size, p.k

    def idx(i):
        return (i - 1) % size + 1

    out: dict[tuple[str, ...], set[str]] = {}
    for i in range(1, size + 1):
        for j in range(1, size + 1):
            xx = set()
            if k == 2 and idx(i + 1) == j:
                xx = {f"Y{i}"}
            if k == 2 and idx(j + 1) == i:
                xx = {f"Y{j}"}
            out[(f"X{i}", f"X{j}")] = xx
            xy = {"Z"} if idx(i + k - 1) == j else set()
            out[(f"X{i}", f"Y{j}")] = xy
            out[(f"Y{j}", f"X{i}")] = xy
            out[(f"Y{i}", f"Y{j}")] = set()
    if k == 2:
        out[("X1", "X2", "X3")] = {"Z"}
    return out


@dataclass
class Conformance:
    ok: bool
    mismatches: list[str]
    rank: int
    torsion_free: bool


def theorem_conformance(p: PolygonPresentation, table: RingPresentation | None = None) -> Conformance:
    """Compare with the expected multiplication table up to a sign per product,
    and check the additive group is free of rank 4k."""
    table = table or product_table(p)
    expected = expected_table(p)
    bad = []
    for key, want in expected.items():
        got = table.products.get(key, [])
        names = {g for _, g in got}
        if names != want or any(abs(c) != 1 for c, _ in got):
            bad.append(f"{'*'.join(key)}: expected {sorted(want) or 0}, got {got or 0}")
    K = polygon_complex(p)
    betti = koszul_betti(K, integral=True)
    rank = betti.total()
    torsion_free = not betti.torsion
    if rank != 4 * p.k:
        bad.append(f"additive rank {rank} != 4k = {4 * p.k}")
    if not torsion_free:
        bad.append(f"torsion found: {betti.torsion}")
    return Conformance(not bad, bad, rank, torsion_free)


def duality_matrix(table: RingPresentation, size: int) -> list[list[int]]:
    """Coefficient of Z in X_i * Y_j."""
    out = []
    for i in range(1, size + 1):
        row = []
        for j in range(1, size + 1):
            got = table.products.get((f"X{i}", f"Y{j}"), [])
            row.append(sum(c for c, g in got if g == "Z"))
        out.append(row)
    return out
