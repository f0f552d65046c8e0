"""Exact linear algebra over GF(2) and the integers.

GF(2) matrices are stored as rows packed into Python ints (bit ``j`` of a row
is column ``j``).  Integer matrices are plain lists of lists of Python ints, so
there is no overflow anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Sequence

IntMatrix = list[list[int]]


@dataclass(frozen=True)
class GF2Matrix:
    rows: int
    cols: int
    bits: tuple[int, ...]

    def __post_init__(self):
        if self.rows <= 0 or self.cols <= 0:
            raise ValueError("GF2Matrix dimensions must be positive")
        if len(self.bits) != self.rows:
            raise ValueError("bits must hold one packed int per row")
        limit = 1 << self.cols
        if any(not 0 <= b < limit for b in self.bits):
            raise ValueError("row has bits beyond the column count")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "GF2Matrix":
        rows = [list(r) for r in rows]
        cols = len(rows[0]) if rows else 0
        packed = []
        for r in rows:
            if len(r) != cols:
                raise ValueError("ragged matrix")
            packed.append(sum((x & 1) << j for j, x in enumerate(r)))
        return cls(len(rows), cols, tuple(packed))

    def to_rows(self) -> list[list[int]]:
        return [[(b >> j) & 1 for j in range(self.cols)] for b in self.bits]


def pack_bits(vec: Sequence[int]) -> int:
    return sum((x & 1) << j for j, x in enumerate(vec))


def unpack_bits(word: int, width: int) -> list[int]:
    return [(word >> j) & 1 for j in range(width)]


def gf2_rank_words(words: Sequence[int]) -> int:
    """Rank of a list of packed GF(2) vectors."""
    basis: dict[int, int] = {}
    for w in words:
        while w:
            top = w.bit_length() - 1
            if top in basis:
                w ^= basis[top]
            else:
                basis[top] = w
                break
    return len(basis)


def gf2_rank(M: GF2Matrix) -> int:
    """Rank over GF(2) by bitset elimination."""
    return gf2_rank_words(M.bits)


def gf2_nullspace(words: Sequence[int], width: int) -> list[int]:
    """Basis (packed) of ``{x : <w, x> = 0 for every w in words}``."""
    # reduced row echelon form keyed by pivot column
    pivots: dict[int, int] = {}
    for w in words:
        for col, row in pivots.items():
            if (w >> col) & 1:
                w ^= row
        if not w:
            continue
        col = (w & -w).bit_length() - 1
        for c in list(pivots):
            if (pivots[c] >> col) & 1:
                pivots[c] ^= w
        pivots[col] = w
    free = [j for j in range(width) if j not in pivots]
    out = []
    for f in free:
        x = 1 << f
        for col, row in pivots.items():
            if (row >> f) & 1:
                x |= 1 << col
        out.append(x)
    return out


def _check_rect(M: Sequence[Sequence[int]]) -> tuple[int, int]:
    rows = len(M)
    cols = len(M[0]) if rows else 0
    if any(len(r) != cols for r in M):
        raise ValueError("ragged matrix")
    return rows, cols


def int_det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by Bareiss fraction-free elimination."""
    n, cols = _check_rect(M)
    if n != cols:
        raise ValueError(f"determinant of a non-square {n}x{cols} matrix")
    if n == 0:
        return 1
    A = [list(r) for r in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        piv = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * piv - A[i][k] * A[k][j]) // prev
            A[i][k] = 0
        prev = piv
    return sign * A[n - 1][n - 1]


def int_rank(M: Sequence[Sequence[int]]) -> int:
    """Rank over Q with fraction-free elimination on sparse rows."""
    rows = []
    for r in M:
        d = {j: x for j, x in enumerate(r) if x}
        if d:
            rows.append(d)
    return sparse_rank(rows)


def sparse_rank(rows: list[dict[int, int]]) -> int:
    """Rank over Q of sparse integer rows (``{col: value}``), destructive.

    Pivots are chosen on the column of smallest index; rows are kept primitive
    (divided by the gcd of their entries) so coefficients stay small on the
    +-1 coboundary matrices this is used for.
    """
    rank = 0
    work = [r for r in rows if r]
    while work:
        # pick the row with the smallest leading column, shortest first
        best = min(range(len(work)), key=lambda i: (min(work[i]), len(work[i])))
        piv_row = work.pop(best)
        col = min(piv_row)
        p = piv_row[col]
        rank += 1
        nxt = []
        for r in work:
            c = r.get(col)
            if c is None:
                nxt.append(r)
                continue
            g = gcd(p, c)
            fp, fc = p // g, c // g
            new = {}
            for j, x in r.items():
                v = x * fp
                if v:
                    new[j] = v
            for j, x in piv_row.items():
                v = new.get(j, 0) - fc * x
                if v:
                    new[j] = v
                else:
                    new.pop(j, None)
            if new:
                g2 = 0
                for x in new.values():
                    g2 = gcd(g2, x)
                    if g2 == 1:
                        break
                if g2 > 1:
                    new = {j: x // g2 for j, x in new.items()}
                nxt.append(new)
        work = nxt
    return rank


@dataclass
class SmithForm:
    """``U @ A @ V == D`` with ``U``, ``V`` unimodular.

    ``diagonal`` lists the invariant factors d1 | d2 | ... (length min(r, c));
    ``V_inv`` is the exact inverse of ``V``.
    """

    diagonal: list[int]
    U: IntMatrix | None = None
    V: IntMatrix | None = None
    V_inv: IntMatrix | None = None

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d)


def _identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M: Sequence[Sequence[int]], transforms: bool = False) -> SmithForm:
    """Smith normal form of an integer matrix.

    With ``transforms=True`` the unimodular ``U``, ``V`` and ``V^{-1}`` are
    tracked as well.
    """
    rows, cols = _check_rect(M)
    A = [list(r) for r in M]
    U = _identity(rows) if transforms else None
    V = _identity(cols) if transforms else None
    Vi = _identity(cols) if transforms else None

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        if transforms:
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for r in A:
            r[i], r[j] = r[j], r[i]
        if transforms:
            for r in V:
                r[i], r[j] = r[j], r[i]
            Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, f):  # row_dst += f * row_src
        if f == 0:
            return
        rs, rd = A[src], A[dst]
        for j in range(cols):
            if rs[j]:
                rd[j] += f * rs[j]
        if transforms:
            us, ud = U[src], U[dst]
            for j in range(rows):
                if us[j]:
                    ud[j] += f * us[j]

    def add_col(dst, src, f):  # col_dst += f * col_src
        if f == 0:
            return
        for r in A:
            if r[src]:
                r[dst] += f * r[src]
        if transforms:
            for r in V:
                if r[src]:
                    r[dst] += f * r[src]
            # inverse update: row_src -= f * row_dst
            vd, vs = Vi[dst], Vi[src]
            for j in range(cols):
                if vd[j]:
                    vs[j] -= f * vd[j]

    def negate_row(i):
        A[i] = [-x for x in A[i]]
        if transforms:
            U[i] = [-x for x in U[i]]

    t = 0
    diag = []
    while t < min(rows, cols):
        # smallest nonzero entry in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                x = A[i][j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            p = A[t][t]
            done = True
            for i in range(t + 1, rows):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        done = False
            if not done:
                # move the smallest remaining entry of row/col t to the pivot
                cand = [(abs(A[i][t]), i, t) for i in range(t, rows) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, cols) if A[t][j]]
                _, i, j = min(cand)
                if i != t:
                    swap_rows(t, i)
                if j != t:
                    swap_cols(t, j)
                continue
            # divisibility: every remaining entry must be a multiple of the pivot
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if A[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            negate_row(t)
        diag.append(A[t][t])
        t += 1
    diag += [0] * (min(rows, cols) - len(diag))
    return SmithForm(diag, U, V, Vi)


def is_part_of_basis(M: Sequence[Sequence[int]]) -> bool:
    """Do the ``s`` columns of the ``r x s`` integer matrix extend to a basis of Z^r?

    True iff the Smith form has ``s`` unit invariant factors.  ``s > r`` can
    never extend and returns False.
    """
    r, s = _check_rect(M)
    if s == 0:
        return True
    if s > r:
        return False
    diag = smith_normal_form(M).diagonal
    return len(diag) == s and all(d == 1 for d in diag)


def integer_kernel(M: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Basis of the lattice ``{x in Z^c : M x = 0}`` as the columns of the result.

    The basis is saturated (it spans the full integer kernel).
    """
    rows = len(M)
    cols = len(M[0]) if rows else (ncols or 0)
    if rows == 0:
        return _identity(cols)
    snf = smith_normal_form(M, transforms=True)
    r = snf.rank
    return [row[r:] for row in snf.V]


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    inner = len(B)
    cols = len(B[0]) if inner else 0
    out = []
    for row in A:
        acc = [0] * cols
        for k, a in enumerate(row):
            if a:
                bk = B[k]
                for j in range(cols):
                    if bk[j]:
                        acc[j] += a * bk[j]
        out.append(acc)
    return out


def transpose(A: Sequence[Sequence[int]]) -> IntMatrix:
    return [list(c) for c in zip(*A)]
