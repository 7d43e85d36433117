"""Every explicit constant and bound function of the theory, evaluable in
log space, with paired "as-stated" and "safe" predicate variants.

The two-point-average lemma's proof controls the SQUARED modulus of the
character sum while its statement asserts the plain modulus (the exact
computation at p=3 with the uniform {0,1} distribution separates the two:
|bias| = 1/2 exceeds 1 - pi^2/18 but |bias|^2 = 1/4 does not).  Every
downstream bound therefore comes in two variants: as_stated evaluates the
literal formula; safe weakens it exactly as far as the proof steps support
(the squared-modulus comparison, equivalently a halved exponent constant).
Acceptance-grade assertions use safe variants only; as-stated violations
are findings, never assertion failures.

Values such as the analytic-to-partition-rank conversion formulas are
doubly exponential, so all arithmetic here is on natural-log magnitudes
held as certified intervals (LogValue).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from mpmath import iv

from .errors import (
    MissingBlackBox,
    MissingConstant,
    ParameterOutOfRange,
    PrecisionExhausted,
)
from .fpcore import (
    BiasValue,
    Ordering,
    certified_compare,
    dyadic_str,
    iv_fraction,
    iv_prec,
)

DEFAULT_PREC = 128


class LogValue:
    """A nonnegative quantity held as a certified interval for its natural
    log (sign 0 encodes exact zero).  Survives doubly-exponential
    magnitudes: only the log is stored, and mpf exponents are bignums."""

    __slots__ = ("sign", "ln")

    def __init__(self, sign: int, ln=None):
        if sign not in (0, 1):
            raise ValueError("LogValue holds nonnegative magnitudes")
        if sign and ln is None:
            raise ValueError("nonzero LogValue needs a log interval")
        self.sign = sign
        self.ln = ln

    @classmethod
    def zero(cls) -> "LogValue":
        return cls(0)

    @classmethod
    def from_fraction(cls, q: Fraction, prec: int = DEFAULT_PREC) -> "LogValue":
        q = Fraction(q)
        if q < 0:
            raise ValueError("LogValue holds nonnegative magnitudes")
        if q == 0:
            return cls.zero()
        with iv_prec(prec):
            return cls(1, iv.log(iv_fraction(q)))

    @classmethod
    def from_int(cls, n: int, prec: int = DEFAULT_PREC) -> "LogValue":
        return cls.from_fraction(Fraction(n), prec)

    @classmethod
    def from_ln(cls, ln) -> "LogValue":
        return cls(1, ln)

    def is_zero(self) -> bool:
        return self.sign == 0

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.is_zero() or other.is_zero():
            return LogValue.zero()
        return LogValue(1, self.ln + other.ln)

    def __add__(self, other: "LogValue") -> "LogValue":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        # ln(a+b) = ln a + log1p(exp(ln b - ln a)), computed on intervals
        a, b = self, other
        return LogValue(1, a.ln + iv.log(1 + iv.exp(b.ln - a.ln)))

    def pow_int(self, k: int) -> "LogValue":
        if k < 0:
            raise ValueError("negative powers not supported")
        if self.is_zero():
            return LogValue.zero() if k else LogValue.from_int(1)
        return LogValue(1, self.ln * k)

    def scale_fraction(self, q: Fraction, prec: int = DEFAULT_PREC) -> "LogValue":
        return self * LogValue.from_fraction(q, prec)

    def compare(self, other: "LogValue") -> Ordering:
        if self.is_zero() and other.is_zero():
            return Ordering.EQUAL
        if self.is_zero():
            return Ordering.LESS
        if other.is_zero():
            return Ordering.GREATER
        if self.ln.b < other.ln.a:
            return Ordering.LESS
        if self.ln.a > other.ln.b:
            return Ordering.GREATER
        if self.ln.a == other.ln.a and self.ln.b == other.ln.b:
            return Ordering.EQUAL  # identical computations
        raise PrecisionExhausted("log intervals overlap")

    def __le__(self, other: "LogValue") -> bool:
        return self.compare(other) != Ordering.GREATER

    def consistent_with(self, other: "LogValue") -> bool:
        """The two certified enclosures can describe the same real number
        (identity checks across different computation paths)."""
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return not (self.ln.b < other.ln.a or self.ln.a > other.ln.b)

    def interval(self):
        """The value itself as an interval (may overflow only notionally:
        mpf exponents are arbitrary integers)."""
        if self.is_zero():
            return iv.mpf(0)
        return iv.exp(self.ln)

    def to_json(self) -> dict:
        if self.is_zero():
            return {"sign": 0, "ln": None}
        lo, hi = self.ln._mpi_
        return {"sign": 1, "ln": dyadic_str(lo), "ln_hi": dyadic_str(hi)}

    def __repr__(self):
        if self.is_zero():
            return "LogValue(0)"
        return f"LogValue(ln={self.ln})"


def _pi_sq():
    return iv.pi**2


def roots_bound(p: int, c: Fraction, prec: int = DEFAULT_PREC):
    """The two-point-average bound 1 - c pi^2 / p^2 as a certified interval.

    Same numeric value for both variants; as_stated compares it against
    |bias|, safe against |bias|^2 (what the proof actually controls).
    """
    c = Fraction(c)
    if not (0 < c <= Fraction(1, 2)):
        raise ParameterOutOfRange("need 0 < c <= 1/2")
    if p < 3:
        raise ParameterOutOfRange("need p >= 3")
    with iv_prec(prec):
        return 1 - iv_fraction(c) * _pi_sq() / p**2


def linear_bound(p: int, c: Fraction, rk1: int, prec: int = DEFAULT_PREC):
    """(1 - c pi^2/p^2)^rk1; safe variant bounds |bias|^2 by the same."""
    if rk1 < 0:
        raise ParameterOutOfRange("rk1 must be >= 0")
    with iv_prec(prec):
        return roots_bound(p, c, prec) ** rk1


def bilinear_bound(
    p: int,
    c1: Fraction,
    c2: Fraction,
    k: int,
    variant: str = "as_stated",
    prec: int = DEFAULT_PREC,
) -> LogValue:
    """3 exp(-c1 c2 pi^2 k / (2 p^2 log(2 e p / c1))), exponent halved in
    the safe variant (k = 0 makes the bound 3, trivially true)."""
    c1, c2 = Fraction(c1), Fraction(c2)
    if not (0 < c1 <= Fraction(1, 2) and 0 < c2 <= Fraction(1, 2)):
        raise ParameterOutOfRange("need c1, c2 in (0, 1/2]")
    if k < 0:
        raise ParameterOutOfRange("rank must be >= 0")
    div = 2 if variant == "as_stated" else 4
    with iv_prec(prec):
        expo = (
            iv_fraction(c1)
            * iv_fraction(c2)
            * _pi_sq()
            * k
            / (div * p**2 * iv.log(2 * iv.e * p / iv_fraction(c1)))
        )
        return LogValue.from_ln(iv.log(iv.mpf(3)) - expo)


def k_bilinear(
    p: int,
    c1: Fraction,
    c2: Fraction,
    eps: Fraction,
    variant: str = "as_stated",
    prec: int = DEFAULT_PREC,
) -> LogValue:
    """Rank bound 2 c1^-1 c2^-1 pi^-2 p^2 log(2ep/c1) log(3/eps); the safe
    variant doubles it (inverting the halved bias exponent)."""
    c1, c2, eps = Fraction(c1), Fraction(c2), Fraction(eps)
    if eps <= 0:
        raise ParameterOutOfRange("eps must be positive")
    mult = 2 if variant == "as_stated" else 4
    with iv_prec(prec):
        val = (
            mult
            / iv_fraction(c1)
            / iv_fraction(c2)
            / _pi_sq()
            * p**2
            * iv.log(2 * iv.e * p / iv_fraction(c1))
            * iv.log(3 / iv_fraction(eps))
        )
        return LogValue.from_ln(iv.log(val))


def m_const(p: int, c: Fraction, prec: int = DEFAULT_PREC):
    """2 p^2 log p / (c pi^2) as a certified interval."""
    c = Fraction(c)
    if not (0 < c < 1):
        raise ParameterOutOfRange("need c in (0,1)")
    with iv_prec(prec):
        return 2 * p**2 * iv.log(iv.mpf(p)) / (iv_fraction(c) * _pi_sq())


def m_const_k(p: int, c: Fraction, k: int, prec: int = DEFAULT_PREC):
    """k * m_const(p, c) (the F_p^k mixing constant)."""
    if k < 1:
        raise ParameterOutOfRange("k must be >= 1")
    with iv_prec(prec):
        return k * m_const(p, c, prec)


AFunc = Callable[[LogValue], LogValue]


def a_formula(
    d: int,
    p: int,
    which: str,
    c_abs: Fraction | None = None,
    o_exp_outer: int = 1,
    o_exp_inner: int = 1,
    prec: int = DEFAULT_PREC,
) -> AFunc:
    """The analytic-to-partition-rank conversion functions, as callables
    LogValue -> LogValue.

    janzer:    (c_abs log p)^(4^(d^d)) * r^(4^(d^d)); c_abs is mandatory
               (the absolute constant is unspecified; no silent default).
    milicevic: 2^(d^(2^(o_exp_outer d^2))) * (r^(2^(2^(o_exp_inner d^2))) + 1);
               the o_* exponents default to 1 as documented placeholders.
    """
    if d < 2:
        raise ParameterOutOfRange("order must be >= 2")
    if which == "janzer":
        if c_abs is None:
            raise MissingConstant("janzer needs the absolute constant c_abs")
        c_abs = Fraction(c_abs)
        if c_abs <= 0:
            raise ParameterOutOfRange("c_abs must be positive")
        cprime = 4 ** (d**d)

        def a_janzer(r: LogValue) -> LogValue:
            if r.is_zero():
                return LogValue.zero()
            with iv_prec(prec):
                base = LogValue.from_ln(iv.log(iv_fraction(c_abs) * iv.log(iv.mpf(p))))
                return (base * r).pow_int(cprime)

        return a_janzer
    if which == "milicevic":
        e_outer = d ** (2 ** (o_exp_outer * d * d))
        e_inner = 2 ** (2 ** (o_exp_inner * d * d))

        def a_milicevic(r: LogValue) -> LogValue:
            with iv_prec(prec):
                lead = LogValue.from_ln(e_outer * iv.log(iv.mpf(2)))
                return lead * (r.pow_int(e_inner) + LogValue.from_int(1, prec))

        return a_milicevic
    raise ValueError(f"unknown conversion formula {which!r}")


def _log_p_of_inverse(eps: Fraction, p: int, prec: int) -> LogValue:
    """log_p(1/eps) as a LogValue."""
    eps = Fraction(eps)
    if not (0 < eps <= 1):
        raise ParameterOutOfRange("eps must be in (0,1]")
    if eps == 1:
        return LogValue.zero()
    with iv_prec(prec):
        val = iv.log(1 / iv_fraction(eps)) / iv.log(iv.mpf(p))
        return LogValue.from_ln(iv.log(val))


def b_recursion(
    d: int,
    p: int,
    c: Fraction,
    eps: Fraction,
    a_func: AFunc | None = None,
    variant: str = "as_stated",
    prec: int = DEFAULT_PREC,
) -> LogValue:
    """Partition-rank bound from bias for product one-dimensional
    distributions: the base case is the bilinear rank bound and each order
    adds one conversion through a_func."""
    if d < 2:
        raise ParameterOutOfRange("order must be >= 2")
    if d == 2:
        return k_bilinear(p, c, c, eps, variant, prec)
    if a_func is None:
        raise MissingBlackBox("orders >= 3 need an analytic-to-partition function")
    eps = Fraction(eps)
    inner = b_recursion(d - 1, p, c, eps / 2, a_func, variant, prec)
    with iv_prec(prec):
        pm = LogValue.from_ln(iv.log((p - 1) * m_const(p, c, prec)))
        arg = pm * inner + pm * _log_p_of_inverse(eps / 2, p, prec)
    return a_func(arg)


def b_multi(
    d: int,
    p: int,
    k: int,
    c0: int,
    eps: Fraction,
    a_func: AFunc | None = None,
    prec: int = DEFAULT_PREC,
) -> LogValue:
    """Partition-rank bound for combinations of forms composed with k
    projection maps from an alphabet of size at most c0."""
    if d < 1:
        raise ParameterOutOfRange("order must be >= 1")
    eps = Fraction(eps)
    if not (0 < eps <= 1):
        raise ParameterOutOfRange("eps must be in (0,1]")
    if d == 1:
        if eps == 1:
            return LogValue.zero()
        with iv_prec(prec):
            val = c0 * p**2 * iv.log(1 / iv_fraction(eps)) / _pi_sq()
            return LogValue.from_ln(iv.log(val))
    if a_func is None:
        raise MissingBlackBox("orders >= 2 need an analytic-to-partition function")
    inner = b_multi(d - 1, p, k, c0, eps / 2, a_func, prec)
    with iv_prec(prec):
        m_val = 2 * k * c0 * p**2 * iv.log(iv.mpf(p)) / _pi_sq()
        pm = LogValue.from_ln(iv.log((p - 1) * m_val))
        arg = pm * (
            inner.pow_int(1) * LogValue.from_int(2, prec)
            + _log_p_of_inverse(eps / 2, p, prec)
        )
    return a_func(arg)


_LAMBDA_REGISTRY: dict[int, Callable[[LogValue], LogValue]] = {}


def register_lambda(d: int, fn: Callable[[LogValue], LogValue]) -> None:
    """Plug in a disjoint-rank threshold for order d >= 3 (nothing is
    fabricated for these; only d = 2 is concrete)."""
    if d < 3:
        raise ParameterOutOfRange("only orders >= 3 are pluggable")
    _LAMBDA_REGISTRY[d] = fn


def clear_lambda_registry() -> None:
    _LAMBDA_REGISTRY.clear()


def lambda_bound(d: int, l_value) -> LogValue:
    """Lambda_d: essential rank >= Lambda_d(l) forces disjoint rank >= l.
    Concrete only at d = 2, where Lambda_2(l) = 3l."""
    if isinstance(l_value, int):
        if l_value < 0:
            raise ParameterOutOfRange("l must be >= 0")
        lv = LogValue.from_fraction(Fraction(l_value)) if l_value else LogValue.zero()
    else:
        lv = l_value
    if d == 2:
        return lv * LogValue.from_int(3)
    if d in _LAMBDA_REGISTRY:
        return _LAMBDA_REGISTRY[d](lv)
    raise MissingBlackBox(f"no disjoint-rank threshold registered for order {d}")


def lambda2_int(l_value: int) -> int:
    if l_value < 0:
        raise ParameterOutOfRange("l must be >= 0")
    return 3 * l_value


def quadratic_bound(
    p: int,
    rank: int,
    alphabet_size: int,
    variant: str = "as_stated",
    prec: int = DEFAULT_PREC,
) -> LogValue:
    """Bias bound for degree-2 polynomials: 3 exp(-rk/(2^8 p^4 (log p)^2))
    for |S| >= 3 and 3 exp(-(rk_S - 2)/(64 p^2 log p)) for |S| = 2; safe
    halves the exponents."""
    if alphabet_size < 2:
        raise ParameterOutOfRange("alphabet size must be >= 2")
    halve = 1 if variant == "as_stated" else 2
    with iv_prec(prec):
        logp = iv.log(iv.mpf(p))
        if alphabet_size >= 3:
            expo = iv.mpf(rank) / (2**8 * p**4 * logp**2)
        else:
            expo = iv.mpf(rank - 2) / (64 * p**2 * logp)
        return LogValue.from_ln(iv.log(iv.mpf(3)) - expo / halve)


def kappa(
    p: int,
    big_d: int,
    d: int,
    alphabet_size: int,
    eps: Fraction,
    a_func: AFunc | None = None,
    prec: int = DEFAULT_PREC,
) -> LogValue:
    """Lambda_D(B_multi(D, p, d, |S|^2, eps^(2^D)))."""
    eps = Fraction(eps)
    inner = b_multi(big_d, p, d, alphabet_size**2, eps ** (2**big_d), a_func, prec)
    return lambda_bound(big_d, inner)


def theta(
    p: int, d: int, a_func: AFunc | None = None, prec: int = DEFAULT_PREC
) -> LogValue:
    """Tensor-rank surjectivity threshold: the base case is the bilinear
    rank bound at c1 = c2 = 1/p, eps = 1/(2p); each order then applies
    (4 (A(p * previous))^3)^(2^d)."""
    if d < 2:
        raise ParameterOutOfRange("order must be >= 2")
    if d == 2:
        return k_bilinear(p, Fraction(1, p), Fraction(1, p), Fraction(1, 2 * p), "as_stated", prec)
    if a_func is None:
        raise MissingBlackBox("orders >= 3 need an analytic-to-partition function")
    prev = theta(p, d - 1, a_func, prec)
    conv = a_func(prev * LogValue.from_int(p, prec))
    return (LogValue.from_int(4, prec) * conv.pow_int(3)).pow_int(2**d)


def size2_rank_bound(
    p: int,
    d: int,
    eps: Fraction,
    a_func: AFunc | None = None,
    prec: int = DEFAULT_PREC,
) -> LogValue:
    """Two-letter-alphabet main bound: Lambda_d(B(d, p, 1/2, eps^(2^d))) + 1."""
    eps = Fraction(eps)
    inner = b_recursion(d, p, Fraction(1, 2), eps ** (2**d), a_func, "as_stated", prec)
    return lambda_bound(d, inner) + LogValue.from_int(1, prec)


def h_evaluator(
    p: int,
    d: int,
    alphabet_size: int,
    eps: Fraction,
    a_func: AFunc | None = None,
    c0: int | None = None,
    prec: int = DEFAULT_PREC,
) -> LogValue:
    """The master rank-from-bias bound, evaluated by the lexicographic
    descent on (number of distinct variables D, top degree T), with an
    outer descent on the degree.

    The base case constant is c0 * p^2 * log(1/eps) / pi^2 + 1 with
    c0 = alphabet_size by default (the one-variable product bound needs
    each per-coordinate factor bounded through the alphabet size; pass
    c0 = p to reproduce the p^3 reading).
    """
    if d < 1:
        raise ParameterOutOfRange("degree must be >= 1")
    eps = Fraction(eps)
    if not (0 < eps <= 1):
        raise ParameterOutOfRange("eps must be in (0,1]")
    if c0 is None:
        c0 = alphabet_size

    def shapes_count(big_d: int, t: int) -> int:
        # partitions of t into exactly big_d positive non-increasing parts
        def count(total: int, parts: int, max_part: int) -> int:
            if parts == 0:
                return 1 if total == 0 else 0
            return sum(
                count(total - first, parts - 1, first)
                for first in range(1, min(total, max_part) + 1)
            )

        return count(t, big_d, t)

    def _h_ln(deg: int, big_d: int, t: int, ln_e) -> LogValue:
        # eps is carried as a log interval: it shrinks doubly
        # exponentially along the recursion, far below Fraction range
        if big_d <= 1:
            with iv_prec(prec):
                val = c0 * p**2 * (-ln_e) / _pi_sq()
                return LogValue.from_ln(iv.log(val)) + LogValue.from_int(1, prec)
        kap = _kappa_ln(big_d, deg, ln_e)
        with iv_prec(prec):
            two_kap_plus = kap * LogValue.from_int(2, prec) + LogValue.from_int(1, prec)
            ln_e_new = -two_kap_plus.interval() * iv.log(iv.mpf(p)) + ln_e
        candidates = []
        if deg > 1:
            candidates.append(_h_ln(deg - 1, deg - 1, deg - 1, ln_e_new))
        if t > big_d:
            candidates.append(_h_ln(deg, big_d, t - 1, ln_e_new))
        candidates.append(_h_ln(deg, big_d - 1, deg, ln_e_new))
        best = candidates[0]
        for cand in candidates[1:]:
            try:
                if best.compare(cand) == Ordering.LESS:
                    best = cand
            except PrecisionExhausted:
                best = best + cand
        extra = LogValue.from_int(shapes_count(big_d, t), prec) * kap
        return best + extra + LogValue.from_int(1, prec)

    def _kappa_ln(big_d: int, deg: int, ln_e) -> LogValue:
        inner = _b_multi_ln(big_d, deg, ln_e * (2**big_d))
        return lambda_bound(big_d, inner)

    def _b_multi_ln(order: int, deg: int, ln_e) -> LogValue:
        c0sq = alphabet_size**2
        with iv_prec(prec):
            if order == 1:
                val = c0sq * p**2 * (-ln_e) / _pi_sq()
                return LogValue.from_ln(iv.log(val))
            inner = _b_multi_ln(order - 1, deg, ln_e - iv.log(iv.mpf(2)))
            if a_func is None:
                raise MissingBlackBox("orders >= 2 need a conversion function")
            m_val = 2 * deg * c0sq * p**2 * iv.log(iv.mpf(p)) / _pi_sq()
            pm = LogValue.from_ln(iv.log((p - 1) * m_val))
            logp_inv = LogValue.from_ln(
                iv.log((-(ln_e - iv.log(iv.mpf(2)))) / iv.log(iv.mpf(p)))
            )
            arg = pm * (inner * LogValue.from_int(2, prec) + logp_inv)
        return a_func(arg)

    with iv_prec(prec):
        ln_eps = iv.log(iv_fraction(eps))
    return _h_ln(d, d, d, ln_eps)


def tr_from_pr_bound(l_value: int, d: int) -> int:
    """(4 l^3)^(2^d): tensor rank from partition rank <= l when every
    intermediate slice also has partition rank <= l."""
    if l_value < 1:
        raise ParameterOutOfRange("l must be >= 1")
    if d < 2:
        raise ParameterOutOfRange("order must be >= 2")
    return (4 * l_value**3) ** (2**d)


# -- predicate reports ---------------------------------------------------


@dataclass(frozen=True)
class PredicateReport:
    name: str
    variant: str
    holds: bool
    lhs: str
    rhs: str

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "variant": self.variant,
            "holds": self.holds,
            "lhs": self.lhs,
            "rhs": self.rhs,
        }


def _holds_le(lhs_fn, rhs_fn) -> bool:
    """Certified lhs <= rhs (equality counts as holding)."""
    try:
        return certified_compare(lhs_fn, rhs_fn) != Ordering.GREATER
    except PrecisionExhausted:
        # can only happen at exact contact; treat as holding is unsound,
        # so report failure loudly instead
        raise


def check_roots(bias: BiasValue, p: int, c: Fraction, variant: str) -> PredicateReport:
    """as_stated: |bias| <= 1 - c pi^2/p^2; safe: |bias|^2 <= same."""
    bound_fn = lambda prec: roots_bound(p, c, prec)
    if variant == "safe":
        lhs_fn = lambda prec: bias.modulus_sq_interval(prec)
    else:
        lhs_fn = lambda prec: iv.sqrt(bias.modulus_sq_interval(prec))
    holds = _holds_le(lhs_fn, bound_fn)
    return PredicateReport(
        name="two-point-average-character-bound",
        variant=variant,
        holds=holds,
        lhs=str(lhs_fn(DEFAULT_PREC)),
        rhs=str(bound_fn(DEFAULT_PREC)),
    )


def check_linear(
    bias: BiasValue, p: int, c: Fraction, rk1: int, variant: str
) -> PredicateReport:
    bound_fn = lambda prec: linear_bound(p, c, rk1, prec)
    if variant == "safe":
        lhs_fn = lambda prec: bias.modulus_sq_interval(prec)
    else:
        lhs_fn = lambda prec: iv.sqrt(bias.modulus_sq_interval(prec))
    holds = _holds_le(lhs_fn, bound_fn)
    return PredicateReport(
        name="linear-form-bias-product-bound",
        variant=variant,
        holds=holds,
        lhs=str(lhs_fn(DEFAULT_PREC)),
        rhs=str(bound_fn(DEFAULT_PREC)),
    )


def check_bilinear(
    bias: BiasValue, p: int, c1: Fraction, c2: Fraction, k: int, variant: str
) -> PredicateReport:
    bound_fn = lambda prec: bilinear_bound(p, c1, c2, k, variant, prec).interval()
    lhs_fn = lambda prec: iv.sqrt(bias.modulus_sq_interval(prec))
    holds = _holds_le(lhs_fn, bound_fn)
    return PredicateReport(
        name="bilinear-bias-exponential-bound",
        variant=variant,
        holds=holds,
        lhs=str(lhs_fn(DEFAULT_PREC)),
        rhs=str(bound_fn(DEFAULT_PREC)),
    )


def check_quadratic(
    bias: BiasValue, p: int, rank: int, alphabet_size: int, variant: str
) -> PredicateReport:
    bound_fn = lambda prec: quadratic_bound(p, rank, alphabet_size, variant, prec).interval()
    lhs_fn = lambda prec: iv.sqrt(bias.modulus_sq_interval(prec))
    holds = _holds_le(lhs_fn, bound_fn)
    return PredicateReport(
        name="quadratic-bias-bound",
        variant=variant,
        holds=holds,
        lhs=str(lhs_fn(DEFAULT_PREC)),
        rhs=str(bound_fn(DEFAULT_PREC)),
    )
