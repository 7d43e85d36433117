"""Sparse multivariate polynomials over F_p.

Polynomials are formal: they are NOT auto-reduced modulo x^p = x.  Function
equality on a grid S^n always goes through alphabet_reduce, which rewrites
every per-variable power >= |S| with its interpolant on S; the canonical
representative modulo the vanishing ideal of S^n has all exponents
<= |S| - 1.

Degree-2 rank is exact and certificate-backed: a polynomial equals a sum of
k products of affine forms iff its homogenization (one extra variable)
splits into k products of linear forms, and the minimal k for a quadratic
form of rank r over F_p (p odd) is r/2 when the form is hyperbolic,
ceil(r/2)+ (r even, non-hyperbolic discriminant) or ceil(r/2) (r odd).
The construction below emits the witnessing pairs and re-verifies them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    CharacteristicTooSmall,
    DEFAULT_BUDGET,
    DegreeTooHigh,
    DimensionMismatch,
    EmptyAlphabet,
    EvenCharacteristic,
    MalformedCertificate,
    ShapeMismatch,
    check_budget,
)
from .fpcore import FieldCtx
from .linalg import is_square_modp, rank_modp, sqrt_modp
from .tensor import Tensor

Exps = tuple[int, ...]


class Polynomial:
    """Immutable sparse polynomial: map from exponent vectors to coefficients."""

    __slots__ = ("ctx", "n", "terms")

    def __init__(self, ctx: FieldCtx, n: int, terms: Mapping[Exps, int]):
        clean: dict[Exps, int] = {}
        for exps, coeff in terms.items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise DimensionMismatch("exponent vector length must equal n")
            if any(e < 0 for e in exps):
                raise ValueError("exponents must be nonnegative")
            c = coeff % ctx.p
            if c:
                clean[exps] = c
        self.ctx = ctx
        self.n = n
        self.terms = dict(sorted(clean.items()))

    @classmethod
    def zero(cls, ctx: FieldCtx, n: int) -> "Polynomial":
        return cls(ctx, n, {})

    @classmethod
    def constant(cls, ctx: FieldCtx, n: int, c: int) -> "Polynomial":
        return cls(ctx, n, {(0,) * n: c})

    @classmethod
    def variable(cls, ctx: FieldCtx, n: int, i: int) -> "Polynomial":
        e = [0] * n
        e[i] = 1
        return cls(ctx, n, {tuple(e): 1})

    @classmethod
    def monomial(cls, ctx: FieldCtx, n: int, exps: Sequence[int], coeff: int = 1) -> "Polynomial":
        return cls(ctx, n, {tuple(exps): coeff})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.n, 0)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ctx == other.ctx
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.ctx.p, self.n, tuple(self.terms.items())))

    def __repr__(self):
        return f"Polynomial(p={self.ctx.p}, n={self.n}, {self.terms})"

    def _check(self, other: "Polynomial") -> None:
        if self.ctx != other.ctx or self.n != other.n:
            raise DimensionMismatch("mixed polynomial spaces")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.ctx, self.n, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) - c
        return Polynomial(self.ctx, self.n, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.ctx, self.n, {e: -c for e, c in self.terms.items()})

    def scale(self, k: int) -> "Polynomial":
        return Polynomial(self.ctx, self.n, {e: c * k for e, c in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out: dict[Exps, int] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.ctx, self.n, out)

    def to_json(self) -> dict:
        return {
            "p": self.ctx.p,
            "n": self.n,
            "terms": [{"exps": list(e), "coeff": c} for e, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Polynomial":
        ctx = FieldCtx(data["p"])
        return cls(
            ctx, data["n"], {tuple(t["exps"]): t["coeff"] for t in data["terms"]}
        )


def evaluate(poly: Polynomial, x: Sequence[int]) -> int:
    if len(x) != poly.n:
        raise DimensionMismatch(f"expected {poly.n} coordinates, got {len(x)}")
    p = poly.ctx.p
    xs = [v % p for v in x]
    total = 0
    for exps, c in poly.terms.items():
        prod = c
        for i, e in enumerate(exps):
            if e:
                prod = prod * pow(xs[i], e, p)
        total += prod
    return total % p


@dataclass(frozen=True)
class Shape:
    """Non-increasing positive exponent pattern; () is the constant shape."""

    s: tuple[int, ...]

    def __post_init__(self):
        if any(e <= 0 for e in self.s):
            raise ShapeMismatch("shape entries must be positive")
        if any(self.s[i] < self.s[i + 1] for i in range(len(self.s) - 1)):
            raise ShapeMismatch("shape must be non-increasing")

    def __len__(self):
        return len(self.s)

    def total(self) -> int:
        return sum(self.s)


def shape_of(exps: Exps) -> Shape:
    return Shape(tuple(sorted((e for e in exps if e), reverse=True)))


def decompose_pieces(poly: Polynomial) -> dict[Shape, Polynomial]:
    """Split P into its pieces P_s by sorted positive-exponent pattern.

    The pieces sum to P term-by-term; the constant term (if any) maps to
    the empty shape.
    """
    buckets: dict[Shape, dict[Exps, int]] = {}
    for exps, c in poly.terms.items():
        sh = shape_of(exps)
        buckets.setdefault(sh, {})[exps] = c
    return {
        sh: Polynomial(poly.ctx, poly.n, terms) for sh, terms in buckets.items()
    }


def _lagrange_power(ctx: FieldCtx, points: Sequence[int], k: int) -> list[int]:
    """Coefficients (by degree) of the interpolant of x -> x^k on points."""
    p = ctx.p
    m = len(points)
    coeffs = [0] * m
    for s in points:
        y = pow(s, k, p) if k else 1 % p
        if y == 0:
            continue
        # build prod_{s' != s} (x - s') / (s - s')
        basis = [1]
        denom = 1
        for s2 in points:
            if s2 == s:
                continue
            basis = [0] + basis  # multiply by x
            for i in range(len(basis) - 1):
                basis[i] = (basis[i] - s2 * basis[i + 1]) % p
            denom = denom * (s - s2) % p
        f = y * ctx.inv(denom) % p
        for i, b in enumerate(basis):
            coeffs[i] = (coeffs[i] + f * b) % p
    return coeffs


def alphabet_reduce(poly: Polynomial, alphabet: Sequence[int]) -> Polynomial:
    """Canonical representative agreeing with P on S^n, exponents <= |S|-1.

    Powers x^k with k >= |S| are replaced by the degree-(|S|-1) interpolant
    of x -> x^k on S.  The rewrite never raises a monomial's total degree
    or its number of distinct variables (the interpolant of x^k with k >= 1
    has zero constant term whenever 0 is in S, and in any case replacing a
    power of one variable only touches that variable).
    """
    p = poly.ctx.p
    s = sorted({a % p for a in alphabet})
    if not s:
        raise EmptyAlphabet("alphabet must be nonempty")
    size = len(s)
    if size > p:
        raise ValueError("alphabet larger than the field")
    max_e = max((max(e) for e in poly.terms), default=0)
    if max_e < size:
        return poly
    table = {k: _lagrange_power(poly.ctx, s, k) for k in range(size, max_e + 1)}
    out: dict[Exps, int] = {}

    def emit(exps: list[int], coeff: int, var: int) -> None:
        while var < poly.n and exps[var] < size:
            var += 1
        if var == poly.n:
            e = tuple(exps)
            out[e] = (out.get(e, 0) + coeff) % p
            return
        k = exps[var]
        for deg, c in enumerate(table[k]):
            if c:
                child = exps.copy()
                child[var] = deg
                emit(child, coeff * c % p, var)  # new power may still be >= size? no: deg < size

    for exps, c in poly.terms.items():
        emit(list(exps), c, 0)
    return Polynomial(poly.ctx, poly.n, out)


def vanishes_on(poly: Polynomial, alphabet: Sequence[int]) -> bool:
    """True iff P is identically zero on S^n (canonical form vanishes)."""
    return alphabet_reduce(poly, alphabet).is_zero()


def linear_rank(poly: Polynomial) -> int:
    """Support size of the linear part (degree <= 1 inputs only)."""
    if poly.degree() > 1:
        raise DegreeTooHigh("linear rank needs degree <= 1")
    return sum(1 for e in poly.terms if sum(e) == 1)


@dataclass(frozen=True)
class PolyRankCertificate:
    """P = offset + sum Q_i R_i with offset vanishing on the grid."""

    d: int
    pairs: tuple[tuple[Polynomial, Polynomial], ...]
    offset: Polynomial | None = None

    def validate(self, poly: Polynomial) -> None:
        if self.d < 1:
            raise MalformedCertificate("certificate degree must be >= 1")
        for q, r in self.pairs:
            q._check(poly)
            r._check(poly)
            dq, dr = q.degree(), r.degree()
            if dq >= self.d or dr >= self.d:
                raise MalformedCertificate("factor degree must be < d")
            if dq + dr > self.d:
                raise MalformedCertificate("factor degrees must sum to <= d")
        if self.offset is not None:
            self.offset._check(poly)


def verify_rank_certificate(
    poly: Polynomial,
    cert: PolyRankCertificate,
    alphabet: Sequence[int] | None = None,
) -> bool:
    """True iff P - offset - sum Q_i R_i == 0 formally and the offset
    vanishes on S^n; establishes rk_{d,S}(P) <= len(pairs).

    alphabet None means the full field.
    """
    cert.validate(poly)
    if alphabet is None:
        alphabet = range(poly.ctx.p)
    acc = poly
    if cert.offset is not None:
        acc = acc - cert.offset
    for q, r in cert.pairs:
        acc = acc - q * r
    if not acc.is_zero():
        return False
    if cert.offset is not None and not vanishes_on(cert.offset, alphabet):
        return False
    return True


# -- degree-2 rank: homogenization + Witt-style splitting ---------------


def _homogenized_matrix(poly: Polynomial) -> list[list[int]]:
    """Symmetric (n+1)x(n+1) matrix of the homogenization; slot 0 is the
    homogenizing variable."""
    p = poly.ctx.p
    n = poly.n
    inv2 = poly.ctx.inv(2)
    m = [[0] * (n + 1) for _ in range(n + 1)]
    for exps, c in poly.terms.items():
        support = [(i, e) for i, e in enumerate(exps) if e]
        total = sum(e for _, e in support)
        if total == 0:
            m[0][0] = (m[0][0] + c) % p
        elif total == 1:
            i = support[0][0] + 1
            m[0][i] = (m[0][i] + c * inv2) % p
            m[i][0] = m[0][i]
        elif total == 2:
            if len(support) == 1:
                i = support[0][0] + 1
                m[i][i] = (m[i][i] + c) % p
            else:
                i, j = support[0][0] + 1, support[1][0] + 1
                m[i][j] = (m[i][j] + c * inv2) % p
                m[j][i] = m[i][j]
        else:
            raise DegreeTooHigh("degree-2 machinery needs degree <= 2")
    return m


def _diagonalize(ctx: FieldCtx, mat: list[list[int]]) -> list[tuple[int, tuple[int, ...]]]:
    """Write x^T M x = sum lam_i * (w_i . x)^2 by rank-one peeling."""
    p = ctx.p
    m = [row[:] for row in mat]
    size = len(m)
    items: list[tuple[int, tuple[int, ...]]] = []
    while True:
        v = None
        for i in range(size):
            if m[i][i]:
                v = [0] * size
                v[i] = 1
                break
        if v is None:
            for i in range(size):
                for j in range(i + 1, size):
                    if m[i][j]:
                        v = [0] * size
                        v[i] = v[j] = 1
                        break
                if v is not None:
                    break
        if v is None:
            break
        w = [sum(m[i][j] * v[j] for j in range(size)) % p for i in range(size)]
        lam = sum(v[i] * w[i] for i in range(size)) % p
        inv_lam = ctx.inv(lam)
        items.append((inv_lam, tuple(w)))
        for i in range(size):
            for j in range(size):
                m[i][j] = (m[i][j] - inv_lam * w[i] * w[j]) % p
    # reconstruction check: sum lam w w^T == original matrix
    acc = [[0] * size for _ in range(size)]
    for lam, w in items:
        for i in range(size):
            for j in range(size):
                acc[i][j] = (acc[i][j] + lam * w[i] * w[j]) % p
    assert acc == [[x % p for x in row] for row in mat]
    return items


def _witt_pair_count(ctx: FieldCtx, lams: Sequence[int]) -> int:
    """Minimal number of linear-form products for a diagonal form."""
    r = len(lams)
    if r == 0:
        return 0
    if r % 2 == 1:
        return (r + 1) // 2
    disc = 1
    for lam in lams:
        disc = disc * lam % ctx.p
    sign = pow(ctx.p - 1, r // 2, ctx.p)
    return r // 2 if is_square_modp(disc * sign % ctx.p, ctx.p) else r // 2 + 1


def _split_pairs(
    ctx: FieldCtx, items: list[tuple[int, tuple[int, ...]]]
) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Turn sum lam_i L_i^2 into a minimal list of form products (u, v),
    meaning the product (u.x)(v.x)."""
    p = ctx.p
    items = list(items)
    pairs: list[tuple[tuple[int, ...], tuple[int, ...]]] = []

    def vec_comb(a: int, u: Sequence[int], b: int, v: Sequence[int]) -> tuple[int, ...]:
        return tuple((a * x + b * y) % p for x, y in zip(u, v))

    def emit_hyperbolic(i: int, j: int) -> None:
        lam1, w1 = items[i]
        lam2, w2 = items[j]
        rho = sqrt_modp(-lam1 * lam2 % p, p)
        c = rho * ctx.inv(lam1) % p
        q = vec_comb(lam1, w1, (-lam1 * c) % p, w2)
        r = vec_comb(1, w1, c, w2)
        pairs.append((q, r))
        for k in sorted((i, j), reverse=True):
            items.pop(k)

    while len(items) >= 2:
        hit = None
        for i in range(len(items)):
            for j in range(i + 1, len(items)):
                if is_square_modp(-items[i][0] * items[j][0] % p, p):
                    hit = (i, j)
                    break
            if hit:
                break
        if hit:
            emit_hyperbolic(*hit)
            continue
        if len(items) == 2:
            break
        # rebalance items 1,2 so item 0 gets a hyperbolic partner:
        # lam_a La^2 + lam_b Lb^2 = mu M1^2 + (lam_a lam_b mu) M2^2
        lam0 = items[0][0]
        mu = (-ctx.inv(lam0)) % p
        (la, wa), (lb, wb) = items[1], items[2]
        st = None
        for s0 in range(p):
            for t0 in range(p):
                if (s0 or t0) and (la * s0 * s0 + lb * t0 * t0) % p == mu:
                    st = (s0, t0)
                    break
            if st:
                break
        assert st is not None  # nondegenerate binary forms represent all of F_p*
        s0, t0 = st
        inv_mu = ctx.inv(mu)
        m1 = vec_comb(la * s0 * inv_mu % p, wa, lb * t0 * inv_mu % p, wb)
        m2 = vec_comb(t0 * inv_mu % p, wa, (-s0 * inv_mu) % p, wb)
        nu = la * lb % p * mu % p
        items[1], items[2] = (mu, m1), (nu, m2)

    for lam, w in items:
        pairs.append((tuple(lam * x % p for x in w), w))
    return pairs


def _dehomogenize_form(ctx: FieldCtx, n: int, vec: Sequence[int]) -> Polynomial:
    terms: dict[Exps, int] = {}
    if vec[0]:
        terms[(0,) * n] = vec[0]
    for i in range(n):
        if vec[i + 1]:
            e = [0] * n
            e[i] = 1
            terms[tuple(e)] = terms.get(tuple(e), 0) + vec[i + 1]
    return Polynomial(ctx, n, terms)


def _quadratic_items(poly: Polynomial) -> list[tuple[int, tuple[int, ...]]]:
    if poly.ctx.p == 2:
        raise EvenCharacteristic("degree-2 rank machinery needs odd p")
    if poly.degree() > 2:
        raise DegreeTooHigh("quadratic rank needs degree <= 2")
    return _diagonalize(poly.ctx, _homogenized_matrix(poly))


def quadratic_rank(poly: Polynomial) -> int:
    """Exact rk_2 for degree <= 2 polynomials over odd p.

    Computed from the homogenization's diagonal form: ceil(r/2) for odd
    matrix rank r, r/2 for hyperbolic-type even rank, r/2 + 1 otherwise.
    quadratic_rank_certificate constructs a witnessing decomposition with
    exactly this many pairs.
    """
    items = _quadratic_items(poly)
    return _witt_pair_count(poly.ctx, [lam for lam, _ in items])


def quadratic_rank_certificate(poly: Polynomial) -> PolyRankCertificate:
    """A minimal degree-2 certificate for any polynomial of degree <= 2."""
    items = _quadratic_items(poly)
    expected = _witt_pair_count(poly.ctx, [lam for lam, _ in items])
    vec_pairs = _split_pairs(poly.ctx, items)
    assert len(vec_pairs) == expected
    pairs = tuple(
        (
            _dehomogenize_form(poly.ctx, poly.n, u),
            _dehomogenize_form(poly.ctx, poly.n, v),
        )
        for u, v in vec_pairs
    )
    cert = PolyRankCertificate(d=2, pairs=pairs, offset=None)
    assert verify_rank_certificate(poly, cert)
    return cert


def quadratic_essential_rank(poly: Polynomial, budget: int = DEFAULT_BUDGET) -> int:
    """min over all p^n diagonal forms sum a_i x_i^2 of rk_2(q + q_diag)."""
    if poly.degree() > 2:
        raise DegreeTooHigh("essential rank needs degree <= 2")
    p = poly.ctx.p
    n = poly.n
    check_budget(p**n, budget)
    best = None
    for diag in itertools.product(range(p), repeat=n):
        shift = Polynomial(
            poly.ctx,
            n,
            {tuple(2 if i == j else 0 for j in range(n)): a for i, a in enumerate(diag) if a},
        )
        k = quadratic_rank(poly + shift)
        if best is None or k < best:
            best = k
            if best == 0:
                break
    return best


def polarize(piece: Polynomial, shape: Shape) -> Tensor:
    """Block-symmetric multilinear form m_s with m_s(x^{s_1},...,x^{s_k})
    equal to the piece, zero on index tuples with repeated coordinates.

    Dividing by the block sizes' factorials requires |s| < p.
    """
    dprime = len(shape)
    if dprime >= piece.ctx.p:
        raise CharacteristicTooSmall("need |shape| < p for the factorial inverses")
    if dprime == 0:
        raise ShapeMismatch("polarize needs a nonempty shape")
    n = piece.n
    p = piece.ctx.p
    # positions of each distinct exponent value in the shape
    positions: dict[int, list[int]] = {}
    for pos, e in enumerate(shape.s):
        positions.setdefault(e, []).append(pos)
    norm = 1
    for pos_list in positions.values():
        norm = norm * math.factorial(len(pos_list)) % p
    inv_norm = piece.ctx.inv(norm)
    values: dict[tuple[int, ...], int] = {}
    for exps, c in piece.terms.items():
        if shape_of(exps) != shape:
            raise ShapeMismatch(f"term {exps} does not have shape {shape.s}")
        by_exp: dict[int, list[int]] = {}
        for var, e in enumerate(exps):
            if e:
                by_exp.setdefault(e, []).append(var)
        spread = c * inv_norm % p
        block_orders = []
        for e, pos_list in positions.items():
            block_orders.append(
                [(pos_list, perm) for perm in itertools.permutations(by_exp[e])]
            )
        for combo in itertools.product(*block_orders):
            idx = [0] * dprime
            for pos_list, perm in combo:
                for pos, var in zip(pos_list, perm):
                    idx[pos] = var
            key = tuple(idx)
            values[key] = (values.get(key, 0) + spread) % p
    return Tensor.from_map(piece.ctx, (n,) * dprime, values)
