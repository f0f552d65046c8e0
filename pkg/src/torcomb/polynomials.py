"""Dense integer polynomials as ascending coefficient lists."""

from __future__ import annotations

from typing import Sequence


def trim(p: Sequence[int]) -> list[int]:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p or [0]


def poly_add(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, x in enumerate(b):
        out[i] += x
    return trim(out)


def poly_sub(a: Sequence[int], b: Sequence[int]) -> list[int]:
    return poly_add(a, [-x for x in b])


def poly_mul(a: Sequence[int], b: Sequence[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return trim(out)


def poly_pow(a: Sequence[int], e: int) -> list[int]:
    out = [1]
    for _ in range(e):
        out = poly_mul(out, a)
    return out


def monomial(deg: int, coeff: int = 1) -> list[int]:
    return [0] * deg + [coeff]


def poly_divmod(a: Sequence[int], b: Sequence[int]) -> tuple[list[int], list[int]]:
    """Division with remainder; ``b`` must be monic up to sign."""
    a = trim(a)
    b = trim(b)
    lead = b[-1]
    if lead not in (1, -1):
        raise ValueError("divisor must have leading coefficient +-1")
    rem = list(a)
    if len(rem) < len(b):
        return [0], rem
    quot = [0] * (len(rem) - len(b) + 1)
    for i in range(len(quot) - 1, -1, -1):
        c = rem[i + len(b) - 1] * lead
        quot[i] = c
        if c:
            for j, y in enumerate(b):
                rem[i + j] -= c * y
    return trim(quot), trim(rem[: len(b) - 1] or [0])


def exact_div(a: Sequence[int], b: Sequence[int]) -> list[int]:
    q, r = poly_divmod(a, b)
    if any(r):
        raise ArithmeticError("polynomial division left a nonzero remainder")
    return q
