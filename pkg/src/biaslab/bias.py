"""Exact bias computation over restricted alphabets and product
distributions: character sums for polynomials and multilinear forms, box
norms, decoupling checks, and the reduction-to-one-function verifier.

The engine never samples: every value is an exact sum.  Enumeration is
odometer-style with per-step re-evaluation of only the terms touching a
changed coordinate, and box norms integrate out the last coordinate block
(the 2^d-fold average over pairs of copies of the first d-1 blocks of the
squared modulus of a single-block character sum), which removes a factor
of |support|^{|last block|} from the work.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping, Sequence

from .dist import Distribution, convolve, negate
from .errors import (
    BudgetExceeded,
    DEFAULT_BUDGET,
    DegreeTooHigh,
    DimensionMismatch,
    EmptyAlphabet,
    NotAPartition,
    ZeroCharacter,
    check_budget,
)
from .fpcore import (
    BiasValue,
    Cyclotomic,
    Ordering,
    ValueCount,
    bias_from_counts,
    compare_real_values,
    modulus_compare,
)
from .poly import Polynomial, evaluate
from .tensor import Tensor, contract_first, mlf_eval

Sampler = "Sequence[int] | Distribution"


def _normalize_alphabet(ctx, alphabet: Sequence[int]) -> list[int]:
    pts = sorted({a % ctx.p for a in alphabet})
    if not pts:
        raise EmptyAlphabet("alphabet must be nonempty")
    return pts


def _sampler_support(ctx, sampler) -> tuple[list[int], list[int], int]:
    """(points, integer numerators, denominator) for an alphabet or a
    one-dimensional distribution."""
    if isinstance(sampler, Distribution):
        if sampler.k != 1 or sampler.ctx != ctx:
            raise DimensionMismatch("sampler must be a distribution on F_p")
        den = 1
        for q in sampler.probs:
            den = den * q.denominator // _gcd(den, q.denominator)
        pts = []
        nums = []
        for x, q in enumerate(sampler.probs):
            if q:
                pts.append(x)
                nums.append(int(q * den))
        return pts, nums, den
    pts = _normalize_alphabet(ctx, sampler)
    return pts, [1] * len(pts), len(pts)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def is_separable(poly: Polynomial) -> bool:
    """True when every monomial involves at most one variable."""
    return all(sum(1 for e in exps if e) <= 1 for exps in poly.terms)


def value_counts_on_grid(
    poly: Polynomial, alphabet: Sequence[int], budget: int = DEFAULT_BUDGET
) -> ValueCount:
    """Exact value distribution of P over S^n (odometer enumeration with
    incremental re-evaluation of the terms touching changed coordinates)."""
    p = poly.ctx.p
    pts = _normalize_alphabet(poly.ctx, alphabet)
    m = len(pts)
    n = poly.n
    check_budget(m**n, budget)
    terms = list(poly.terms.items())
    by_var: list[list[int]] = [[] for _ in range(n)]
    for ti, (exps, _) in enumerate(terms):
        for i, e in enumerate(exps):
            if e:
                by_var[i].append(ti)

    cur = [pts[0]] * n
    term_vals = []
    for exps, c in terms:
        v = c
        for i, e in enumerate(exps):
            if e:
                v = v * pow(cur[i], e, p)
        term_vals.append(v % p)
    total = sum(term_vals) % p
    counts = [0] * p
    digits = [0] * n
    while True:
        counts[total] += 1
        j = n - 1
        while j >= 0 and digits[j] == m - 1:
            j -= 1
        if j < 0:
            break
        digits[j] += 1
        changed = [j]
        for i in range(j + 1, n):
            if digits[i]:
                digits[i] = 0
                changed.append(i)
        touched = set()
        for i in changed:
            cur[i] = pts[digits[i]]
            touched.update(by_var[i])
        for ti in touched:
            exps, c = terms[ti]
            v = c
            for i, e in enumerate(exps):
                if e:
                    v = v * pow(cur[i], e, p)
            v %= p
            total = (total - term_vals[ti] + v) % p
            term_vals[ti] = v
    return ValueCount.from_counts(counts)


def poly_bias_enumerated(
    poly: Polynomial, alphabet: Sequence[int], t: int, budget: int = DEFAULT_BUDGET
) -> BiasValue:
    return bias_from_counts(poly.ctx, value_counts_on_grid(poly, alphabet, budget), t)


def poly_bias_separable(poly: Polynomial, alphabet: Sequence[int], t: int) -> BiasValue:
    """Product fast path for P = sum_i P_i(x_i): one p-point sum per
    coordinate.  Yields the identical cyclotomic representative (same z,
    same scale) as brute-force enumeration."""
    if not is_separable(poly):
        raise ValueError("polynomial is not separable")
    p = poly.ctx.p
    t %= p
    if t == 0:
        raise ZeroCharacter("t must be a nonzero field element")
    pts = _normalize_alphabet(poly.ctx, alphabet)
    per_var: list[dict[int, int]] = [dict() for _ in range(poly.n)]
    const = 0
    for exps, c in poly.terms.items():
        sup = [(i, e) for i, e in enumerate(exps) if e]
        if not sup:
            const = c
        else:
            i, e = sup[0]
            per_var[i][e] = c
    z = Cyclotomic.root_power(p, (t * const) % p)
    scale = 1
    for i in range(poly.n):
        co = [0] * p
        for x in pts:
            val = sum(c * pow(x, e, p) for e, c in per_var[i].items()) % p
            co[(t * val) % p] += 1
        z = z * Cyclotomic(p, co)
        scale *= len(pts)
    return BiasValue(p, z, scale)


def poly_bias(
    poly: Polynomial,
    alphabet: Sequence[int],
    t: int,
    budget: int = DEFAULT_BUDGET,
    method: str = "auto",
) -> BiasValue:
    """Exact bias of P on S^n for the character x -> w^(t x)."""
    if method == "enumerate":
        return poly_bias_enumerated(poly, alphabet, t, budget)
    if method == "separable" or (method == "auto" and is_separable(poly)):
        return poly_bias_separable(poly, alphabet, t)
    if method == "auto":
        return poly_bias_enumerated(poly, alphabet, t, budget)
    raise ValueError(f"unknown method {method!r}")


def poly_bias_dist_separable(poly: Polynomial, d: Distribution, t: int) -> BiasValue:
    """Per-coordinate product for P = sum_i P_i(x_i) sampled from D^n;
    yields the same value (and representation) as full enumeration."""
    if not is_separable(poly):
        raise ValueError("polynomial is not separable")
    p = poly.ctx.p
    t %= p
    if t == 0:
        raise ZeroCharacter("t must be a nonzero field element")
    pts, nums, den = _sampler_support(poly.ctx, d)
    per_var: list[dict[int, int]] = [dict() for _ in range(poly.n)]
    const = 0
    for exps, c in poly.terms.items():
        sup = [(i, e) for i, e in enumerate(exps) if e]
        if not sup:
            const = c
        else:
            i, e = sup[0]
            per_var[i][e] = c
    z = Cyclotomic.root_power(p, (t * const) % p)
    for i in range(poly.n):
        co = [0] * p
        for x, w in zip(pts, nums):
            val = sum(c * pow(x, e, p) for e, c in per_var[i].items()) % p
            co[(t * val) % p] += w
        z = z * Cyclotomic(p, co)
    return BiasValue(p, z, den**poly.n)


def poly_bias_dist(
    poly: Polynomial,
    d: Distribution,
    t: int,
    budget: int = DEFAULT_BUDGET,
    method: str = "auto",
) -> BiasValue:
    """Exact weighted character sum over support(D)^n."""
    if method == "separable" or (method == "auto" and is_separable(poly)):
        return poly_bias_dist_separable(poly, d, t)
    p = poly.ctx.p
    t %= p
    if t == 0:
        raise ZeroCharacter("t must be a nonzero field element")
    pts, nums, den = _sampler_support(poly.ctx, d)
    m = len(pts)
    n = poly.n
    check_budget(m**n, budget)
    weight_acc = [0] * p
    for assign in itertools.product(range(m), repeat=n):
        w = 1
        for di in assign:
            w *= nums[di]
        val = evaluate(poly, [pts[di] for di in assign])
        weight_acc[val] += w
    co = [0] * p
    for v, w in enumerate(weight_acc):
        if w:
            co[(t * v) % p] += w
    return BiasValue(p, Cyclotomic(p, co), den**n)


def mlf_bias_dist(
    t_tensor: Tensor,
    dists: Sequence,
    t: int,
    budget: int = DEFAULT_BUDGET,
) -> BiasValue:
    """bias of the d-linear form with slot i drawn from D_i^(n_i).

    Slots 1..d-1 are enumerated; the last slot's sum factorizes through a
    per-coefficient table of one-coordinate character sums.
    """
    p = t_tensor.ctx.p
    t %= p
    if t == 0:
        raise ZeroCharacter("t must be a nonzero field element")
    d = t_tensor.order
    if len(dists) != d:
        raise DimensionMismatch("need one sampler per slot")
    samplers = [_sampler_support(t_tensor.ctx, s) for s in dists]
    cost = 1
    for (pts, _, _), nd in zip(samplers[:-1], t_tensor.dims[:-1]):
        cost *= len(pts) ** nd
    check_budget(cost, budget)
    last_pts, last_nums, last_den = samplers[-1]
    n_last = t_tensor.dims[-1]
    # F[a] = sum over x in support of num(x) * w^(t a x), as coefficient vectors
    factor_table = []
    for a in range(p):
        co = [0] * p
        for x, w in zip(last_pts, last_nums):
            co[(t * a * x) % p] += w
        factor_table.append(Cyclotomic(p, co))

    z = Cyclotomic.zero(p)

    def rec(tt: Tensor, slot: int, weight: int):
        nonlocal z
        if tt.order == 1:
            prod = Cyclotomic.constant(p, weight)
            for a in tt.entries:
                prod = prod * factor_table[a % p]
            z = z + prod
            return
        pts, nums, _ = samplers[slot]
        for assign in itertools.product(range(len(pts)), repeat=tt.dims[0]):
            w = weight
            for di in assign:
                w *= nums[di]
            rec(contract_first(tt, [pts[di] for di in assign]), slot + 1, w)

    rec(t_tensor, 0, 1)
    scale = 1
    for (pts, nums, den), nd in zip(samplers, t_tensor.dims):
        scale *= den**nd
    return BiasValue(p, z, scale)


def restrict_piece(poly: Polynomial, blocks: Sequence[Sequence[int]]) -> Polynomial:
    """Keep only the monomials that touch every block of the partition."""
    _validate_partition(poly.n, blocks)
    sets = [frozenset(b) for b in blocks]
    out = {}
    for exps, c in poly.terms.items():
        sup = {i for i, e in enumerate(exps) if e}
        if all(sup & b for b in sets):
            out[exps] = c
    return Polynomial(poly.ctx, poly.n, out)


def _validate_partition(n: int, blocks: Sequence[Sequence[int]]) -> None:
    seen: list[int] = []
    for b in blocks:
        seen.extend(b)
    if sorted(seen) != list(range(n)):
        raise NotAPartition("blocks must partition the variable set")


def _block_assignments(block: Sequence[int], pts: list[int], nums: list[int]):
    """All assignments of a coordinate block: (values tuple, weight)."""
    out = []
    for combo in itertools.product(range(len(pts)), repeat=len(block)):
        w = 1
        for di in combo:
            w *= nums[di]
        out.append((tuple(pts[di] for di in combo), w))
    return out


def box_norm(
    poly: Polynomial,
    blocks: Sequence[Sequence[int]],
    sampling: Sequence,
    t: int = 1,
    budget: int = DEFAULT_BUDGET,
) -> BiasValue:
    """The 2^d-power of the box norm of w^(t P) for the block partition,
    with each block sampled independently (alphabet or distribution).

    Exact and real: the sum over all sign patterns is folded so that the
    last block contributes |one-block character sum|^2, an exact cyclotomic
    autocorrelation.
    """
    p = poly.ctx.p
    t %= p
    if t == 0:
        raise ZeroCharacter("t must be a nonzero field element")
    d = len(blocks)
    if d < 1 or len(sampling) != d:
        raise DimensionMismatch("need one sampler per block")
    _validate_partition(poly.n, blocks)
    samplers = [_sampler_support(poly.ctx, s) for s in sampling]
    assigns = [
        _block_assignments(blocks[b], samplers[b][0], samplers[b][1])
        for b in range(d)
    ]
    last = max(range(d), key=lambda b: len(assigns[b]))
    others = [b for b in range(d) if b != last]
    cost = len(assigns[last])
    for b in others:
        cost *= len(assigns[b]) ** 2
    check_budget(cost, budget)

    # evaluation table of P over the product of block assignments
    strides = [0] * d
    acc_stride = 1
    for b in reversed(range(d)):
        strides[b] = acc_stride
        acc_stride *= len(assigns[b])
    table = [0] * acc_stride
    for combo in itertools.product(*[range(len(assigns[b])) for b in range(d)]):
        x = [0] * poly.n
        for b in range(d):
            for var, val in zip(blocks[b], assigns[b][combo[b]][0]):
                x[var] = val
        idx = sum(strides[b] * combo[b] for b in range(d))
        table[idx] = evaluate(poly, x)

    sign_patterns = list(itertools.product((1, -1), repeat=len(others)))
    acc = [0] * p  # autocorrelation accumulator (real coefficients)
    last_len = len(assigns[last])
    other_ranges = [range(len(assigns[b])) for b in others]
    for pair_combo in itertools.product(*(other_ranges + other_ranges)):
        plus = pair_combo[: len(others)]
        minus = pair_combo[len(others) :]
        w_outer = 1
        for pos, b in enumerate(others):
            w_outer *= assigns[b][plus[pos]][1] * assigns[b][minus[pos]][1]
        bases = []
        for eps in sign_patterns:
            base = 0
            sign = 1
            for pos, b in enumerate(others):
                choice = plus[pos] if eps[pos] == 1 else minus[pos]
                base += strides[b] * choice
                if eps[pos] == -1:
                    sign = -sign
            bases.append((base, sign))
        cnt = [0] * p
        for y in range(last_len):
            off = strides[last] * y
            g = 0
            for base, sign in bases:
                g += sign * table[base + off]
            cnt[g % p] += assigns[last][y][1]
        for g in range(p):
            cg = cnt[g]
            if not cg:
                continue
            for h in range(p):
                ch = cnt[h]
                if ch:
                    acc[(g - h) % p] += w_outer * cg * ch
    co = [0] * p
    for w, a in enumerate(acc):
        if a:
            co[(t * w) % p] += a
    scale = 1
    for b in range(d):
        scale *= samplers[b][2] ** (2 * len(blocks[b]))
    return BiasValue(p, Cyclotomic(p, co), scale)


@dataclass(frozen=True)
class DecouplingReport:
    lhs_pow: BiasValue
    rhs_general: BiasValue
    rhs_poly: BiasValue | None
    holds_general: bool
    holds_poly: bool | None


def decoupling_check(
    poly: Polynomial,
    blocks: Sequence[Sequence[int]],
    d_dist: Distribution,
    t: int = 1,
    budget: int = DEFAULT_BUDGET,
    variant: str = "both",
) -> DecouplingReport:
    """|E w^(tP)|^(2^d) against the two decoupled right-hand sides.

    The degree-restricted form averages w^(t P_blocks) over (D - D)^n and
    needs deg P <= d; the general form is the box-norm expression and has
    no degree hypothesis.
    """
    d = len(blocks)
    _validate_partition(poly.n, blocks)
    deg_ok = poly.degree() <= d
    if variant == "degree" and not deg_ok:
        raise DegreeTooHigh("degree-restricted decoupling needs deg P <= d")
    lhs = poly_bias_dist(poly, d_dist, t, budget)
    lhs_pow = lhs.modulus_pow_2d(d)
    rhs_general = None
    holds_general = None
    if variant in ("both", "general"):
        rhs_general = box_norm(poly, blocks, [d_dist] * d, t, budget)
        assert rhs_general.is_real()
        holds_general = compare_real_values(lhs_pow, rhs_general) != Ordering.GREATER
    rhs_poly = None
    holds_poly = None
    if variant in ("both", "degree") and deg_ok:
        dd = convolve(d_dist, negate(d_dist))
        rhs_poly = poly_bias_dist(restrict_piece(poly, blocks), dd, t, budget)
        assert rhs_poly.is_real()
        holds_poly = compare_real_values(lhs_pow, rhs_poly) != Ordering.GREATER
    return DecouplingReport(
        lhs_pow=lhs_pow,
        rhs_general=rhs_general,
        rhs_poly=rhs_poly,
        holds_general=holds_general,
        holds_poly=holds_poly,
    )


def multi_alphabet_bias(
    tensors: Mapping[tuple[int, ...], Tensor],
    coeffs: Mapping[tuple[int, ...], int],
    sigma: Sequence,
    pis: Sequence[Callable[[object], int]],
    t: int,
    n: int,
    budget: int = DEFAULT_BUDGET,
) -> BiasValue:
    """Exact bias of (x_1..x_d) -> sum over index tuples of
    a_(i_1..i_d) m_(i_1..i_d)(pi_(i_1)^n(x_1), ..., pi_(i_d)^n(x_d))
    with each x_j uniform on Sigma^n."""
    if not tensors:
        raise DimensionMismatch("need at least one tensor")
    d = len(next(iter(tensors)))
    k = len(pis)
    if not sigma:
        raise EmptyAlphabet("Sigma must be nonempty")
    ctx = next(iter(tensors.values())).ctx
    p = ctx.p
    size = len(sigma) ** (n * d)
    check_budget(size, budget)
    sigma_vecs = list(itertools.product(range(len(sigma)), repeat=n))
    proj = []
    for vec in sigma_vecs:
        proj.append(
            [tuple(pis[i](sigma[s]) % p for s in vec) for i in range(k)]
        )
    active = [(key, coeffs.get(key, 0) % p) for key in sorted(tensors)]
    active = [(key, a) for key, a in active if a]
    counts = [0] * p
    for combo in itertools.product(range(len(sigma_vecs)), repeat=d):
        val = 0
        for key, a in active:
            vecs = [proj[combo[j]][key[j]] for j in range(d)]
            val += a * mlf_eval(tensors[key], vecs)
        counts[val % p] += 1
    return bias_from_counts(ctx, ValueCount.from_counts(counts), t)


@dataclass(frozen=True)
class ReductionReport:
    hypothesis_holds: bool
    conclusion_holds: bool
    linear_verdicts: tuple[Ordering, ...]
    composed_verdict: Ordering


def reduction_lemma_check(
    f0: Polynomial,
    fs: Sequence[Polynomial],
    f_table: Mapping[tuple[int, ...], int] | Callable[[tuple[int, ...]], int],
    d_dist: Distribution,
    t: int,
    eps: Fraction,
    budget: int = DEFAULT_BUDGET,
) -> ReductionReport:
    """Hypothesis: |bias(f0 + a.f)| <= p^-k eps for all a in F_p^k.
    Conclusion: |bias(f0 + F(f_1, ..., f_k))| <= eps.

    All p^k linear-combination biases and the composed bias are computed
    exactly from one pass over support(D)^n (the joint value distribution
    of (f0, f1, ..., fk) is all that matters).
    """
    p = f0.ctx.p
    k = len(fs)
    pts, nums, den = _sampler_support(f0.ctx, d_dist)
    n = f0.n
    check_budget(len(pts) ** n * (k + 1), budget)
    if callable(f_table):
        f_lookup = f_table
    else:
        f_lookup = lambda v: f_table[v]
    joint: dict[tuple[int, ...], int] = {}
    for assign in itertools.product(range(len(pts)), repeat=n):
        x = [pts[di] for di in assign]
        w = 1
        for di in assign:
            w *= nums[di]
        key = (evaluate(f0, x),) + tuple(evaluate(f, x) for f in fs)
        joint[key] = joint.get(key, 0) + w
    scale = den**n
    thr_hyp = Fraction(eps) / p**k

    def bias_of(shift: Callable[[tuple[int, ...]], int]) -> BiasValue:
        co = [0] * p
        for key, w in joint.items():
            co[(t * shift(key)) % p] += w
        return BiasValue(p, Cyclotomic(p, co), scale)

    verdicts = []
    hyp = True
    for a in itertools.product(range(p), repeat=k):
        b = bias_of(lambda key: key[0] + sum(ai * vi for ai, vi in zip(a, key[1:])))
        v = modulus_compare(b, min(thr_hyp, Fraction(1)))
        verdicts.append(v)
        if v == Ordering.GREATER:
            hyp = False
    composed = bias_of(lambda key: key[0] + f_lookup(tuple(key[1:])))
    cv = modulus_compare(composed, min(Fraction(eps), Fraction(1)))
    return ReductionReport(
        hypothesis_holds=hyp,
        conclusion_holds=cv != Ordering.GREATER,
        linear_verdicts=tuple(verdicts),
        composed_verdict=cv,
    )
