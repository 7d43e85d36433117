"""Small exact linear algebra over F_p (dense, desk scale)."""

from __future__ import annotations

from typing import Sequence


def rank_modp(rows: Sequence[Sequence[int]], p: int) -> int:
    """Rank by Gaussian elimination over F_p."""
    a = [[x % p for x in row] for row in rows]
    m = len(a)
    n = len(a[0]) if m else 0
    r = 0
    for c in range(n):
        piv = None
        for i in range(r, m):
            if a[i][c]:
                piv = i
                break
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [(x * inv) % p for x in a[r]]
        for i in range(m):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
        if r == m:
            break
    return r


def is_square_modp(a: int, p: int) -> bool:
    """Quadratic-residue test for a != 0 (odd p)."""
    a %= p
    if a == 0:
        raise ValueError("0 is neither class")
    return pow(a, (p - 1) // 2, p) == 1


def sqrt_modp(a: int, p: int) -> int:
    """A square root of a mod p, by search (desk-scale p)."""
    a %= p
    for s in range(p):
        if (s * s) % p == a:
            return s
    raise ValueError(f"{a} is not a square mod {p}")
