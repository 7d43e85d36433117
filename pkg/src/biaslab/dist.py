"""Exact-rational probability distributions on F_p^k and box functions.

Everything here is Fraction arithmetic; no floats anywhere.  Points of
F_p^k are tuples, stored row-major (big-endian in the base-p digits).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from mpmath import iv

from .errors import (
    ConstructionFailed,
    DEFAULT_BUDGET,
    DimensionMismatch,
    EmptyAlphabet,
    EvenCharacteristic,
    HypothesisViolated,
    ShapeMismatch,
    check_budget,
)
from .fpcore import FieldCtx, iv_prec


class Distribution:
    """Probability distribution on F_p^k with exact rational masses."""

    __slots__ = ("ctx", "k", "probs")

    def __init__(self, ctx: FieldCtx, k: int, probs: Sequence[Fraction]):
        probs = tuple(Fraction(q) for q in probs)
        if len(probs) != ctx.p**k:
            raise DimensionMismatch(f"need p^k = {ctx.p ** k} masses")
        if any(q < 0 for q in probs):
            raise ValueError("masses must be nonnegative")
        if sum(probs) != 1:
            raise ValueError("masses must sum to 1 exactly")
        self.ctx = ctx
        self.k = k
        self.probs = probs

    def __eq__(self, other):
        return (
            isinstance(other, Distribution)
            and self.ctx == other.ctx
            and self.k == other.k
            and self.probs == other.probs
        )

    def __hash__(self):
        return hash((self.ctx.p, self.k, self.probs))

    def __repr__(self):
        return f"Distribution(p={self.ctx.p}, k={self.k}, {self.probs})"

    def point_index(self, point: Sequence[int]) -> int:
        p = self.ctx.p
        idx = 0
        for x in point:
            idx = idx * p + (x % p)
        return idx

    def index_point(self, idx: int) -> tuple[int, ...]:
        p = self.ctx.p
        out = []
        for _ in range(self.k):
            out.append(idx % p)
            idx //= p
        return tuple(reversed(out))

    def mass(self, point: Sequence[int]) -> Fraction:
        return self.probs[self.point_index(point)]

    def support(self) -> list[tuple[int, ...]]:
        return [self.index_point(i) for i, q in enumerate(self.probs) if q]

    def max_mass(self) -> Fraction:
        return max(self.probs)

    def to_json(self) -> dict:
        return {
            "p": self.ctx.p,
            "k": self.k,
            "probs": [f"{q.numerator}/{q.denominator}" for q in self.probs],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Distribution":
        return cls(
            FieldCtx(data["p"]), data["k"], [Fraction(s) for s in data["probs"]]
        )

    @classmethod
    def uniform(cls, ctx: FieldCtx, k: int = 1) -> "Distribution":
        size = ctx.p**k
        return cls(ctx, k, [Fraction(1, size)] * size)

    @classmethod
    def delta(cls, ctx: FieldCtx, point: Sequence[int]) -> "Distribution":
        k = len(point)
        idx = 0
        for x in point:
            idx = idx * ctx.p + (x % ctx.p)
        probs = [Fraction(0)] * ctx.p**k
        probs[idx] = Fraction(1)
        return cls(ctx, k, probs)

    @classmethod
    def uniform_on(cls, ctx: FieldCtx, alphabet: Sequence[int]) -> "Distribution":
        pts = sorted({a % ctx.p for a in alphabet})
        if not pts:
            raise EmptyAlphabet("alphabet must be nonempty")
        probs = [Fraction(0)] * ctx.p
        for a in pts:
            probs[a] = Fraction(1, len(pts))
        return cls(ctx, 1, probs)


def convolve(d1: Distribution, d2: Distribution) -> Distribution:
    """(D+D')(x) = sum over y+z=x of D(y) D'(z), exactly."""
    if d1.ctx != d2.ctx or d1.k != d2.k:
        raise DimensionMismatch("convolution needs matching spaces")
    p = d1.ctx.p
    k = d1.k
    size = p**k
    out = [Fraction(0)] * size
    pts = [d1.index_point(i) for i in range(size)]
    for i, qi in enumerate(d1.probs):
        if not qi:
            continue
        yi = pts[i]
        for j, qj in enumerate(d2.probs):
            if not qj:
                continue
            zj = pts[j]
            s = tuple((a + b) % p for a, b in zip(yi, zj))
            out[d1.point_index(s)] += qi * qj
    return Distribution(d1.ctx, k, out)


def negate(d: Distribution) -> Distribution:
    p = d.ctx.p
    out = [Fraction(0)] * len(d.probs)
    for i, q in enumerate(d.probs):
        if q:
            pt = d.index_point(i)
            out[d.point_index(tuple((-x) % p for x in pt))] = q
    return Distribution(d.ctx, d.k, out)


def _int_convolve(a: list[int], b: list[int], ctx: FieldCtx, k: int) -> list[int]:
    """Group convolution of integer mass vectors on F_p^k (numerators)."""
    p = ctx.p
    size = p**k
    ref = Distribution.uniform(ctx, k)
    pts = [ref.index_point(i) for i in range(size)]
    out = [0] * size
    for i, ai in enumerate(a):
        if not ai:
            continue
        yi = pts[i]
        for j, bj in enumerate(b):
            if bj:
                s = tuple((x + y) % p for x, y in zip(yi, pts[j]))
                out[ref.point_index(s)] += ai * bj
    return out


def self_convolve(d: Distribution, m: int) -> Distribution:
    """M-fold convolution by binary doubling; the doubling runs on integer
    numerators over a common denominator (exact, faster than Fractions)."""
    if m < 1:
        raise ValueError("M must be >= 1")
    from math import gcd

    den = 1
    for q in d.probs:
        den = den * q.denominator // gcd(den, q.denominator)
    nums = [int(q * den) for q in d.probs]
    result = None
    res_den = 1
    base = nums
    base_den = den
    mm = m
    while mm:
        if mm & 1:
            if result is None:
                result, res_den = base, base_den
            else:
                result = _int_convolve(result, base, d.ctx, d.k)
                res_den *= base_den
        mm >>= 1
        if mm:
            base = _int_convolve(base, base, d.ctx, d.k)
            base_den *= base_den
    return Distribution(d.ctx, d.k, [Fraction(x, res_den) for x in result])


def difference_dist(ctx: FieldCtx, alphabet: Sequence[int]) -> Distribution:
    """Distribution of v - w with v, w uniform on S; max mass <= 1/2 for |S| >= 2."""
    pts = sorted({a % ctx.p for a in alphabet})
    if not pts:
        raise EmptyAlphabet("alphabet must be nonempty")
    mu = Distribution.uniform_on(ctx, pts)
    d = convolve(mu, negate(mu))
    if len(pts) >= 2:
        assert d.max_mass() <= Fraction(1, 2)
    return d


def phi_sign(ctx: FieldCtx) -> tuple[int, ...]:
    """The alternating-sign inverse of the {0,1}-uniform measure: (-1)^[x]
    with [x] the canonical residue lift into {0, ..., p-1}."""
    return tuple((-1) ** x for x in range(ctx.p))


def _signed_convolve_k(
    d_vals: Sequence[Fraction], signs: tuple[int, ...], ctx: FieldCtx, k: int
) -> list[Fraction]:
    """Convolve a signed function on F_p^k with phi^k (product of signs)."""
    p = ctx.p
    size = p**k
    ref = Distribution.uniform(ctx, k)
    out = [Fraction(0)] * size
    for i, f in enumerate(d_vals):
        if not f:
            continue
        yi = ref.index_point(i)
        for j in range(size):
            zj = ref.index_point(j)
            diff = tuple((b - a) % p for a, b in zip(yi, zj))
            sgn = 1
            for x in diff:
                sgn *= signs[x]
            out[j] += f * sgn
    return out


@dataclass(frozen=True)
class DeconvolutionResult:
    e: Distribution
    hypothesis_ok: bool


def deconvolve_u(d: Distribution) -> DeconvolutionResult:
    """Write D = U^k + E with U uniform on {0,1} and E a distribution.

    E = p^{-k} + (D - p^{-k}) * phi^k.  The stated hypothesis is
    |D(x) - p^{-k}| <= p^{-2k} everywhere; instances outside it where the
    construction still succeeds are flagged, not failed.
    """
    p = d.ctx.p
    if p == 2:
        raise EvenCharacteristic("deconvolution needs odd p")
    k = d.k
    base = Fraction(1, p**k)
    tol = Fraction(1, p ** (2 * k))
    hypothesis_ok = all(abs(q - base) <= tol for q in d.probs)
    f = [q - base for q in d.probs]
    conv = _signed_convolve_k(f, phi_sign(d.ctx), d.ctx, k)
    e_vals = [base + c for c in conv]
    if any(v < 0 for v in e_vals):
        if hypothesis_ok:
            raise ConstructionFailed(
                "negative mass in E despite the deviation hypothesis"
            )
        raise HypothesisViolated(
            "deviation bound fails and the construction does not salvage it"
        )
    e = Distribution(d.ctx, k, e_vals)
    # exact round trip: U^k + E must reproduce D
    assert convolve(u_box(d.ctx, k), e) == d
    return DeconvolutionResult(e=e, hypothesis_ok=hypothesis_ok)


def u_box(ctx: FieldCtx, k: int) -> Distribution:
    """U^k: independent uniform {0,1} coordinates in F_p^k."""
    probs = [Fraction(0)] * ctx.p**k
    ref = Distribution.uniform(ctx, k)
    for pt in itertools.product((0, 1), repeat=k):
        probs[ref.point_index(pt)] = Fraction(1, 2**k)
    return Distribution(ctx, k, probs)


def affine_mass(d: Distribution) -> Fraction:
    """Max mass of a strict affine subspace; hyperplanes suffice since
    every strict affine subspace extends to one."""
    p = d.ctx.p
    k = d.k
    best = Fraction(0)
    for r in itertools.product(range(p), repeat=k):
        if not any(r):
            continue
        first = next(x for x in r if x)
        if first != 1:  # directions up to scaling
            continue
        masses = [Fraction(0)] * p
        for i, q in enumerate(d.probs):
            if q:
                pt = d.index_point(i)
                masses[sum(a * b for a, b in zip(r, pt)) % p] += q
        m = max(masses)
        if m > best:
            best = m
    return best


@dataclass(frozen=True)
class MixingReport:
    affine_mass: Fraction
    hypothesis_ok: bool
    m_large_enough: bool
    deviation_ok: bool
    max_deviation: Fraction
    md: Distribution


def mixing_bound_interval(p: int, c: Fraction, k: int, prec: int = 128):
    """Certified enclosure of 2 k p^2 log p / (c pi^2)."""
    with iv_prec(prec):
        return (
            2
            * iv.mpf(k)
            * iv.mpf(p) ** 2
            * iv.log(iv.mpf(p))
            / (iv.mpf(c.numerator) / iv.mpf(c.denominator) * iv.pi**2)
        )


def _endpoint_fraction(data) -> Fraction:
    """Exact dyadic value of a raw mpf endpoint tuple."""
    sign, man, exp, _ = data
    v = Fraction(int(man))
    if exp >= 0:
        v *= 2**exp
    else:
        v /= 2**-exp
    return -v if sign else v


def mixing_m(p: int, c: Fraction, k: int, prec: int = 128) -> int:
    """ceil of the mixing constant, taken from the certified upper endpoint
    (deterministic: always >= the true transcendental value)."""
    bound = mixing_bound_interval(p, c, k, prec)
    hi = _endpoint_fraction(bound._mpi_[1])
    m = hi.numerator // hi.denominator
    if m < hi:
        m += 1
    return max(m, 1)


def mixing_check(d: Distribution, c: Fraction, m: int) -> MixingReport:
    """Evaluate hypothesis (affine mass <= 1-c) and conclusion
    (|MD - p^{-k}|_inf <= p^{-2k}) exactly; report whether m meets the
    2 k p^2 log p / (c pi^2) threshold."""
    if m < 1:
        raise ValueError("M must be >= 1")
    p = d.ctx.p
    k = d.k
    am = affine_mass(d)
    hypothesis_ok = am <= 1 - c
    md = self_convolve(d, m)
    base = Fraction(1, p**k)
    tol = Fraction(1, p ** (2 * k))
    devs = [abs(q - base) for q in md.probs]
    max_dev = max(devs)
    bound = mixing_bound_interval(p, c, k)
    m_large = Fraction(m) >= _endpoint_fraction(bound._mpi_[1])
    return MixingReport(
        affine_mass=am,
        hypothesis_ok=hypothesis_ok,
        m_large_enough=bool(m_large),
        deviation_ok=max_dev <= tol,
        max_deviation=max_dev,
        md=md,
    )


@dataclass(frozen=True)
class ProjectionResult:
    dist: Distribution
    criterion_ok: bool


def project_dist(
    ctx: FieldCtx, sigma: Sequence, pis: Sequence[Callable[[object], int]]
) -> ProjectionResult:
    """Pushforward of the uniform measure on Sigma under x -> (pi_1(x), ...).

    criterion_ok reports whether the maps are linearly independent with no
    nonzero constant in their span: no (lambda, w) != 0 with
    sum lambda_i pi_i == w on Sigma, checked as full column rank of the
    |Sigma| x (k+1) matrix with rows (pi_1(x), ..., pi_k(x), 1).
    """
    if not sigma:
        raise EmptyAlphabet("Sigma must be nonempty")
    if not pis:
        raise DimensionMismatch("need at least one projection map")
    from .linalg import rank_modp

    p = ctx.p
    k = len(pis)
    probs = [Fraction(0)] * p**k
    ref = Distribution.uniform(ctx, k)
    rows = []
    w = Fraction(1, len(sigma))
    for x in sigma:
        image = tuple(pi(x) % p for pi in pis)
        probs[ref.point_index(image)] += w
        rows.append(list(image) + [1])
    criterion = rank_modp(rows, p) == k + 1
    return ProjectionResult(Distribution(ctx, k, probs), criterion)


class BoxFunction:
    """Nonnegative rational function on the integer box
    {0..r_1} x ... x {0..r_n} (bounds inclusive), stored densely."""

    __slots__ = ("bounds", "values")

    def __init__(self, bounds: Sequence[int], values: Sequence[Fraction]):
        bounds = tuple(int(r) for r in bounds)
        if any(r < 0 for r in bounds):
            raise ShapeMismatch("box bounds must be nonnegative")
        size = 1
        for r in bounds:
            size *= r + 1
        values = tuple(Fraction(v) for v in values)
        if len(values) != size:
            raise ShapeMismatch(f"expected {size} values, got {len(values)}")
        if any(v < 0 for v in values):
            raise ValueError("box functions are nonnegative")
        self.bounds = bounds
        self.values = values

    def index(self, point: Sequence[int]) -> int:
        idx = 0
        for x, r in zip(point, self.bounds):
            idx = idx * (r + 1) + x
        return idx

    def points(self):
        return itertools.product(*[range(r + 1) for r in self.bounds])

    def value(self, point: Sequence[int]) -> Fraction:
        return self.values[self.index(point)]

    def mean(self) -> Fraction:
        size = len(self.values)
        return sum(self.values, Fraction(0)) / size

    @classmethod
    def constant(cls, bounds: Sequence[int], v: Fraction) -> "BoxFunction":
        size = 1
        for r in bounds:
            size *= r + 1
        return cls(bounds, [Fraction(v)] * size)

    @classmethod
    def indicator(cls, bounds: Sequence[int], points: Sequence[Sequence[int]]) -> "BoxFunction":
        out = cls.constant(bounds, Fraction(0))
        vals = list(out.values)
        for pt in points:
            vals[out.index(pt)] = Fraction(1)
        return cls(bounds, vals)


def max_convolve(f: BoxFunction, g: BoxFunction) -> BoxFunction:
    """(f o g)(z) = max over x+y=z of f(x) g(y), exact rationals."""
    if len(f.bounds) != len(g.bounds):
        raise ShapeMismatch("box dimensions differ")
    n = len(f.bounds)
    out_bounds = tuple(rf + rg for rf, rg in zip(f.bounds, g.bounds))
    out = BoxFunction.constant(out_bounds, Fraction(0))
    vals = [Fraction(0)] * len(out.values)
    for z in out.points():
        best = Fraction(0)
        ranges = []
        for i in range(n):
            lo = max(0, z[i] - g.bounds[i])
            hi = min(f.bounds[i], z[i])
            ranges.append(range(lo, hi + 1))
        for x in itertools.product(*ranges):
            fx = f.value(x)
            if fx == 0:
                continue
            y = tuple(zi - xi for zi, xi in zip(z, x))
            v = fx * g.value(y)
            if v > best:
                best = v
        vals[out.index(z)] = best
    return BoxFunction(out_bounds, vals)


@dataclass(frozen=True)
class DenseSumsetReport:
    """Stage-by-stage verdict of the dense-sumset pipeline.

    The composed statement needs the mixing constant M(p, c), far beyond
    enumeration, so M is a free parameter here and the three exactly
    checkable stages are reported separately: (1) the M-fold sumset of A
    is at least eps^M dense under (MD)^n, (2) when MD is within p^{-2k} of
    uniform, some shift of MA meets {0,1}^n in density >= eps^M, and
    (3) the (p-1)-fold boxed sumset of that slice reaches density
    >= eps^((p-1)M) in F_p^n, hence so does (p-1)MA.
    """

    eps: Fraction
    stage_power: bool
    stage_shift: bool | None
    stage_boxed: bool | None
    final_density: Fraction | None


def dense_sumset_check(
    a_points: Sequence[Sequence[int]],
    d: Distribution,
    m: int,
    n: int,
    budget: int = DEFAULT_BUDGET,
) -> DenseSumsetReport:
    if d.k != 1:
        raise DimensionMismatch("pipeline runs on distributions on F_p")
    p = d.ctx.p
    check_budget((p**n) * max(len(a_points), 1) * m, budget)
    a_set = {tuple(x % p for x in pt) for pt in a_points}
    for pt in a_set:
        if len(pt) != n:
            raise ShapeMismatch("points must have length n")

    def density_under(points: set, dist: Distribution) -> Fraction:
        total = Fraction(0)
        for pt in points:
            w = Fraction(1)
            for x in pt:
                w *= dist.probs[x]
            total += w
        return total

    eps = density_under(a_set, d)
    if eps == 0:
        return DenseSumsetReport(eps, True, None, None, None)
    md = self_convolve(d, m)
    ma = a_set
    for _ in range(m - 1):
        ma = {
            tuple((x + y) % p for x, y in zip(u, v)) for u in ma for v in a_set
        }
    stage_power = density_under(ma, md) >= eps**m
    base = Fraction(1, p)
    stage_shift = None
    stage_boxed = None
    final_density = None
    if all(abs(q - base) <= base**2 for q in md.probs):
        # some translate of MA meets the 0/1 cube in density >= eps^M
        target = eps**m
        best_y = None
        for shift in itertools.product(range(p), repeat=n):
            y_slice = {
                pt
                for pt in (
                    tuple((x - s) % p for x, s in zip(u, shift)) for u in ma
                )
                if all(c in (0, 1) for c in pt)
            }
            if Fraction(len(y_slice), 2**n) >= target:
                best_y = y_slice
                break
        stage_shift = best_y is not None
        if best_y:
            # (p-1)-fold integer boxed sumset, then reduce into F_p^n
            cur = best_y
            for _ in range(p - 2):
                cur = {
                    tuple(x + y for x, y in zip(u, v)) for u in cur for v in best_y
                }
            reduced = {tuple(x % p for x in pt) for pt in cur}
            stage_boxed = Fraction(len(reduced), p**n) >= eps ** ((p - 1) * m)
            # the final set sits inside (p-1)MA
            pma = ma
            for _ in range(p - 2):
                pma = {
                    tuple((x + y) % p for x, y in zip(u, v)) for u in pma for v in ma
                }
            final_density = Fraction(len(pma), p**n)
    return DenseSumsetReport(eps, stage_power, stage_shift, stage_boxed, final_density)


@dataclass(frozen=True)
class SumsetReport:
    alpha: Fraction
    beta: Fraction
    sum_density: Fraction
    holds: bool


def sumset_density_check(
    a_points: Sequence[Sequence[int]],
    b_points: Sequence[Sequence[int]],
    n: int,
    r: int,
    budget: int = DEFAULT_BUDGET,
) -> SumsetReport:
    """Exact densities of A in {0,1}^n, B in {0..r}^n and A+B in {0..r+1}^n,
    with the product lower bound verdict."""
    check_budget(len(a_points) * len(b_points), budget)
    a_set = {tuple(pt) for pt in a_points}
    b_set = {tuple(pt) for pt in b_points}
    for pt in a_set:
        if len(pt) != n or any(x not in (0, 1) for x in pt):
            raise ShapeMismatch("A must live in {0,1}^n")
    for pt in b_set:
        if len(pt) != n or any(not 0 <= x <= r for x in pt):
            raise ShapeMismatch("B must live in {0..r}^n")
    alpha = Fraction(len(a_set), 2**n)
    beta = Fraction(len(b_set), (r + 1) ** n)
    sums = {tuple(x + y for x, y in zip(pa, pb)) for pa in a_set for pb in b_set}
    density = Fraction(len(sums), (r + 2) ** n)
    return SumsetReport(alpha, beta, density, density >= alpha * beta)
