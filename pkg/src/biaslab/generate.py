"""Deterministic seeded instance generators for the verification suites.

Every generator takes an explicit random.Random; a suite seed therefore
fully determines its instances, and reruns are bit-identical.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .errors import InfeasibleConstraint
from .fpcore import FieldCtx
from .dist import BoxFunction, Distribution
from .linalg import rank_modp
from .poly import Polynomial, Shape
from .tensor import PartitionRankCertificate, PartitionTerm, Tensor


def gen_alphabet(rng: random.Random, ctx: FieldCtx, size: int) -> list[int]:
    if not 1 <= size <= ctx.p:
        raise InfeasibleConstraint("alphabet size must be in [1, p]")
    return sorted(rng.sample(range(ctx.p), size))


def gen_exponent_vector(rng: random.Random, n: int, degree: int, homogeneous: bool) -> tuple[int, ...]:
    total = degree if homogeneous else rng.randrange(0, degree + 1)
    exps = [0] * n
    for _ in range(total):
        exps[rng.randrange(n)] += 1
    return tuple(exps)


def gen_polynomial(
    rng: random.Random,
    ctx: FieldCtx,
    n: int,
    degree: int,
    terms: int | None = None,
    homogeneous: bool = False,
) -> Polynomial:
    if terms is None:
        terms = rng.randrange(1, max(2, 2 * n))
    out = {}
    for _ in range(terms):
        exps = gen_exponent_vector(rng, n, degree, homogeneous)
        out[exps] = rng.randrange(1, ctx.p)
    return Polynomial(ctx, n, out)


def gen_separable_polynomial(
    rng: random.Random, ctx: FieldCtx, n: int, degree: int
) -> Polynomial:
    """Monomials each involving at most one variable."""
    out = {}
    for _ in range(rng.randrange(1, n + 3)):
        i = rng.randrange(n)
        e = rng.randrange(0, degree + 1)
        exps = tuple(e if j == i else 0 for j in range(n))
        out[exps] = rng.randrange(1, ctx.p)
    return Polynomial(ctx, n, out)


def gen_linear_form(
    rng: random.Random, ctx: FieldCtx, n: int, support: int | None = None
) -> Polynomial:
    if support is None:
        support = rng.randrange(0, n + 1)
    vars_ = rng.sample(range(n), support)
    out = {}
    for i in vars_:
        exps = tuple(1 if j == i else 0 for j in range(n))
        out[exps] = rng.randrange(1, ctx.p)
    if rng.randrange(2):
        out[(0,) * n] = rng.randrange(1, ctx.p)
    return Polynomial(ctx, n, out)


def gen_piece(rng: random.Random, ctx: FieldCtx, n: int, shape: Shape) -> Polynomial:
    """A polynomial whose every monomial has the given exponent pattern."""
    k = len(shape)
    out = {}
    for _ in range(rng.randrange(1, 4)):
        vars_ = rng.sample(range(n), k)
        exps = [0] * n
        order = list(shape.s)
        rng.shuffle(vars_)
        for v, e in zip(vars_, order):
            exps[v] = e
        out[tuple(exps)] = rng.randrange(1, ctx.p)
    return Polynomial(ctx, n, out)


def gen_tensor(rng: random.Random, ctx: FieldCtx, dims: Sequence[int]) -> Tensor:
    size = 1
    for d in dims:
        size *= d
    return Tensor(ctx, dims, [rng.randrange(ctx.p) for _ in range(size)])


def gen_full_rank_matrix(rng: random.Random, ctx: FieldCtx, n: int) -> Tensor:
    while True:
        t = gen_tensor(rng, ctx, (n, n))
        if rank_modp(t.as_matrix(), ctx.p) == n:
            return t


def gen_pr_certified_tensor(
    rng: random.Random, ctx: FieldCtx, dims: Sequence[int], k: int
) -> tuple[Tensor, PartitionRankCertificate]:
    """A tensor built as a sum of k partition-rank-1 terms (so pr <= k)."""
    dims = tuple(dims)
    d = len(dims)
    terms = []
    acc = Tensor.zero(ctx, dims)
    for _ in range(k):
        axes = list(range(d))
        rng.shuffle(axes)
        cut = rng.randrange(1, d)
        axes_i = tuple(sorted(axes[:cut]))
        axes_j = tuple(sorted(axes[cut:]))
        size_i = 1
        for i in axes_i:
            size_i *= dims[i]
        size_j = 1
        for j in axes_j:
            size_j *= dims[j]
        a = Tensor(ctx, tuple(dims[i] for i in axes_i),
                   [rng.randrange(ctx.p) for _ in range(size_i)])
        b = Tensor(ctx, tuple(dims[j] for j in axes_j),
                   [rng.randrange(ctx.p) for _ in range(size_j)])
        term = PartitionTerm(axes_i, axes_j, a, b)
        terms.append(term)
        acc = acc + term.expand(ctx, dims)
    return acc, PartitionRankCertificate(tuple(terms))


def gen_distribution(
    rng: random.Random,
    ctx: FieldCtx,
    k: int = 1,
    c: Fraction | None = None,
    den_bound: int = 32,
    max_tries: int = 10000,
) -> Distribution:
    """Random exact-rational distribution on F_p^k; when c is given, every
    mass is at most 1 - c (rejection sampling on bounded denominators)."""
    p = ctx.p
    size = p**k
    if c is not None:
        c = Fraction(c)
        if c > 1 - Fraction(1, size):
            raise InfeasibleConstraint(f"no distribution on {size} points has max mass <= {1 - c}")
    for _ in range(max_tries):
        nums = [rng.randrange(0, den_bound + 1) for _ in range(size)]
        total = sum(nums)
        if total == 0:
            continue
        probs = [Fraction(x, total) for x in nums]
        if c is None or max(probs) <= 1 - c:
            return Distribution(ctx, k, probs)
    raise InfeasibleConstraint("rejection sampling failed (constraint too tight)")


def gen_near_uniform(
    rng: random.Random, ctx: FieldCtx, k: int, steps: int = 8
) -> Distribution:
    """A distribution within p^{-2k} of uniform in sup norm, by exact
    rational perturbation steps (the deconvolution hypothesis)."""
    p = ctx.p
    size = p**k
    base = Fraction(1, size)
    tol = Fraction(1, size * size)
    probs = [base] * size
    for _ in range(steps):
        i, j = rng.randrange(size), rng.randrange(size)
        if i == j:
            continue
        room = min(tol - (probs[i] - base), (probs[j] - base) + tol)
        if room <= 0:
            continue
        delta = room * Fraction(rng.randrange(1, 5), 8)
        probs[i] += delta
        probs[j] -= delta
    assert sum(probs) == 1 and all(abs(q - base) <= tol for q in probs)
    return Distribution(ctx, k, probs)


def gen_box_function(
    rng: random.Random, bounds: Sequence[int], den: int = 8
) -> BoxFunction:
    size = 1
    for r in bounds:
        size *= r + 1
    return BoxFunction(bounds, [Fraction(rng.randrange(0, den + 1), den) for _ in range(size)])


def gen_box_subset(
    rng: random.Random, bounds: Sequence[int], density_num: int = 1, density_den: int = 2
) -> list[tuple[int, ...]]:
    import itertools

    pts = []
    for pt in itertools.product(*[range(r + 1) for r in bounds]):
        if rng.randrange(density_den) < density_num:
            pts.append(pt)
    if not pts:
        pts.append(tuple(rng.randrange(r + 1) for r in bounds))
    return pts


def gen_partition(rng: random.Random, n: int, d: int) -> list[list[int]]:
    """Partition of range(n) into d nonempty blocks (needs n >= d)."""
    idx = list(range(n))
    rng.shuffle(idx)
    blocks: list[list[int]] = [[idx[i]] for i in range(d)]
    for x in idx[d:]:
        blocks[rng.randrange(d)].append(x)
    return [sorted(b) for b in blocks]
