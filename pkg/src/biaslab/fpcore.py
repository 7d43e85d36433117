"""Prime-field context and exact character-sum values.

A character sum over F_p lives in Z[w], w = exp(2*pi*i/p).  Because p is
prime, the only Z-linear relation among 1, w, ..., w^(p-1) is that they sum
to zero, so every element of Z[w] has a unique coefficient vector
(c_0, ..., c_{p-1}) with min(c) == 0.  We keep that canonical form
everywhere, which makes equality testing plain tuple comparison.

Moduli of such values are irrational for p >= 5, so magnitude comparisons
go through certified interval arithmetic (mpmath.iv) with doubling
precision, while every equality test stays exact.  Squared moduli are again
elements of Z[w] (an autocorrelation), which is what lets several
comparisons short-circuit to exact rational arithmetic.
"""

from __future__ import annotations

import enum
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from mpmath import iv

from .errors import (
    CompositeModulus,
    ParameterOutOfRange,
    PrecisionExhausted,
    ZeroCharacter,
)

DEFAULT_PREC = 128
MAX_PREC = 1024

_IV_LOCK = threading.RLock()


class _IvPrec:
    """Scoped precision for the global mpmath.iv context."""

    def __init__(self, bits: int):
        self.bits = bits
        self._saved = None

    def __enter__(self):
        _IV_LOCK.acquire()
        self._saved = iv.prec
        iv.prec = self.bits
        return iv

    def __exit__(self, *exc):
        iv.prec = self._saved
        _IV_LOCK.release()


def iv_prec(bits: int) -> _IvPrec:
    return _IvPrec(bits)


def iv_fraction(q: Fraction):
    """Certified enclosure of an exact rational in the current iv context."""
    return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def dyadic_str(x) -> str:
    """Deterministic sign*mantissa*2^exponent rendering of an mpf endpoint."""
    sign, man, exp, _ = x
    m = int(man)
    if sign:
        m = -m
    return f"{m}*2^{exp}"


def interval_json(value) -> dict:
    lo, hi = value._mpi_
    return {"lo": dyadic_str(lo), "hi": dyadic_str(hi)}


class Ordering(enum.Enum):
    LESS = -1
    EQUAL = 0
    GREATER = 1


def is_prime(n: int) -> bool:
    """Deterministic primality test (trial division; desk-scale moduli)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldCtx:
    """The prime field F_p.  Frozen, shareable, hashable."""

    p: int

    def __post_init__(self):
        if self.p < 2 or not is_prime(self.p):
            raise CompositeModulus(f"{self.p} is not prime")

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_p")
        return pow(a, self.p - 2, self.p)

    def elements(self) -> range:
        return range(self.p)


def make_field(p: int) -> FieldCtx:
    return FieldCtx(p)


class Cyclotomic:
    """An element of Z[w_p] in canonical form (min coefficient == 0).

    Adding a constant to all coordinates does not change the value
    (sum of all p-th roots of unity is 0); canonicalization subtracts the
    minimum, so two equal values have identical coefficient tuples.
    """

    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs: Sequence[int]):
        if len(coeffs) != p:
            raise ValueError("coefficient vector must have length p")
        m = min(coeffs)
        self.p = p
        self.coeffs = tuple(c - m for c in coeffs)

    @classmethod
    def zero(cls, p: int) -> "Cyclotomic":
        return cls(p, (0,) * p)

    @classmethod
    def constant(cls, p: int, value: int) -> "Cyclotomic":
        co = [0] * p
        co[0] = value
        return cls(p, co)

    @classmethod
    def root_power(cls, p: int, v: int, mult: int = 1) -> "Cyclotomic":
        co = [0] * p
        co[v % p] += mult
        return cls(p, co)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Cyclotomic)
            and self.p == other.p
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        return f"Cyclotomic(p={self.p}, {self.coeffs})"

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def as_rational_int(self) -> int | None:
        """The exact integer this value equals, or None if irrational.

        z = sum c_v w^v is rational iff c_1 = ... = c_{p-1}; its value is
        then c_0 - c_1.  (Rational elements of Z[w_p] are integers.)
        """
        tail = self.coeffs[1:]
        if all(c == tail[0] for c in tail):
            return self.coeffs[0] - tail[0]
        return None

    def __add__(self, other: "Cyclotomic") -> "Cyclotomic":
        self._check(other)
        return Cyclotomic(self.p, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "Cyclotomic") -> "Cyclotomic":
        self._check(other)
        return Cyclotomic(self.p, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.p, [-c for c in self.coeffs])

    def scale(self, k: int) -> "Cyclotomic":
        return Cyclotomic(self.p, [k * c for c in self.coeffs])

    def __mul__(self, other: "Cyclotomic") -> "Cyclotomic":
        self._check(other)
        p = self.p
        out = [0] * p
        for u, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for v, b in enumerate(other.coeffs):
                if b:
                    out[(u + v) % p] += a * b
        return Cyclotomic(p, out)

    def conj(self) -> "Cyclotomic":
        p = self.p
        return Cyclotomic(p, [self.coeffs[(-v) % p] for v in range(p)])

    def is_real(self) -> bool:
        return self == self.conj()

    def modulus_sq(self) -> "Cyclotomic":
        """|z|^2 = z * conj(z), again an exact element of Z[w_p] (real)."""
        return self * self.conj()

    def pow_int(self, k: int) -> "Cyclotomic":
        if k < 0:
            raise ValueError("negative cyclotomic power")
        acc = Cyclotomic.constant(self.p, 1)
        base = self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def real_interval(self, prec: int = DEFAULT_PREC):
        """Certified enclosure of Re(z) = sum c_v cos(2 pi v / p)."""
        with iv_prec(prec):
            total = iv.mpf(0)
            for v, c in enumerate(self.coeffs):
                if c:
                    total += iv.mpf(c) * iv.cos(2 * iv.pi * v / self.p)
            return total

    def imag_interval(self, prec: int = DEFAULT_PREC):
        with iv_prec(prec):
            total = iv.mpf(0)
            for v, c in enumerate(self.coeffs):
                if c:
                    total += iv.mpf(c) * iv.sin(2 * iv.pi * v / self.p)
            return total

    def _check(self, other: "Cyclotomic") -> None:
        if self.p != other.p:
            raise ValueError("mixed cyclotomic orders")


@dataclass(frozen=True)
class ValueCount:
    """How often each field value occurs among the inputs of a function."""

    counts: tuple[int, ...]
    total: int

    def __post_init__(self):
        if any(c < 0 for c in self.counts):
            raise ValueError("counts must be nonnegative")
        if sum(self.counts) != self.total:
            raise ValueError("total must equal sum of counts")
        if self.total <= 0:
            raise ValueError("total must be positive")

    @classmethod
    def from_counts(cls, counts: Sequence[int]) -> "ValueCount":
        t = tuple(int(c) for c in counts)
        return cls(t, sum(t))


class BiasValue:
    """An exact character-sum average z/scale with |z/scale| <= 1.

    z is stored as a canonical Cyclotomic and scale as a positive integer,
    so exact equality tests never see rounding; the certified interval for
    |z/scale|^2 is computed on demand and clamped to the theory range [0,1].
    """

    __slots__ = ("p", "z", "scale", "_mod_sq")

    def __init__(self, p: int, z: Cyclotomic, scale: int):
        if scale <= 0:
            raise ValueError("scale must be positive")
        if z.p != p:
            raise ValueError("cyclotomic order does not match p")
        self.p = p
        self.z = z
        self.scale = scale
        self._mod_sq = None

    def __repr__(self):
        return f"BiasValue(p={self.p}, z={self.z.coeffs}, scale={self.scale})"

    def is_zero(self) -> bool:
        return self.z.is_zero()

    def value_eq(self, other: "BiasValue") -> bool:
        """Exact equality of the represented complex numbers."""
        if self.p != other.p:
            return False
        return self.z.scale(other.scale) == other.z.scale(self.scale)

    def __eq__(self, other):
        return isinstance(other, BiasValue) and self.value_eq(other)

    def __hash__(self):
        raise TypeError("BiasValue is not hashable (compare by value_eq)")

    def conjugate(self) -> "BiasValue":
        return BiasValue(self.p, self.z.conj(), self.scale)

    def __mul__(self, other: "BiasValue") -> "BiasValue":
        if self.p != other.p:
            raise ValueError("mixed prime orders")
        return BiasValue(self.p, self.z * other.z, self.scale * other.scale)

    def modulus_sq_cyc(self) -> Cyclotomic:
        if self._mod_sq is None:
            self._mod_sq = self.z.modulus_sq()
        return self._mod_sq

    def modulus_sq_rational(self) -> Fraction | None:
        """|bias|^2 as an exact rational, when it is one."""
        q = self.modulus_sq_cyc().as_rational_int()
        if q is None:
            return None
        return Fraction(q, self.scale * self.scale)

    def modulus_sq_interval(self, prec: int = DEFAULT_PREC):
        """Certified enclosure of |bias|^2, clamped to [0, 1]."""
        w = self.modulus_sq_cyc()
        with iv_prec(prec):
            raw = w.real_interval(prec) / iv.mpf(self.scale * self.scale)
            lo = iv.mpf([max(0, raw.a), max(0, raw.b)])
            return iv.mpf([min(lo.a, iv.mpf(1)), min(lo.b, iv.mpf(1))])

    def is_real(self) -> bool:
        return self.z.is_real()

    def real_sign(self) -> int:
        """Exact sign of a provably real value."""
        return real_cyclotomic_sign(self.z)

    def pow_int(self, k: int) -> "BiasValue":
        return BiasValue(self.p, self.z.pow_int(k), self.scale**k)

    def modulus_pow_2d(self, d: int) -> "BiasValue":
        """|bias|^(2^d) as an exact real BiasValue (d >= 1)."""
        if d < 1:
            raise ValueError("d must be >= 1")
        w = self.modulus_sq_cyc().pow_int(2 ** (d - 1))
        return BiasValue(self.p, w, self.scale ** (2**d))

    def to_json(self, prec: int = DEFAULT_PREC) -> dict:
        return {
            "p": self.p,
            "cyclotomic": list(self.z.coeffs),
            "scale": self.scale,
            "modulus_sq": interval_json(self.modulus_sq_interval(prec)),
        }

    @classmethod
    def from_json(cls, data: dict) -> "BiasValue":
        return cls(data["p"], Cyclotomic(data["p"], data["cyclotomic"]), data["scale"])

    @classmethod
    def one(cls, p: int) -> "BiasValue":
        return cls(p, Cyclotomic.constant(p, 1), 1)

    @classmethod
    def from_rational(cls, p: int, q: Fraction) -> "BiasValue":
        return cls(p, Cyclotomic.constant(p, q.numerator), q.denominator)


def bias_from_counts(ctx: FieldCtx, counts: ValueCount, t: int) -> BiasValue:
    """z = sum_v counts[v] * w^(t v), scale = total.

    The character x -> w^(t x) must be nontrivial (t != 0 mod p).
    """
    p = ctx.p
    if len(counts.counts) != p:
        raise ValueError("counts length must equal p")
    t %= p
    if t == 0:
        raise ZeroCharacter("t must be a nonzero field element")
    co = [0] * p
    for v, c in enumerate(counts.counts):
        if c:
            co[(t * v) % p] += c
    return BiasValue(p, Cyclotomic(p, co), counts.total)


def weighted_bias(ctx: FieldCtx, weights: Sequence[Fraction], t: int) -> BiasValue:
    """Like bias_from_counts but with exact rational weights summing to 1."""
    p = ctx.p
    t %= p
    if t == 0:
        raise ZeroCharacter("t must be a nonzero field element")
    den = 1
    for w in weights:
        den = den * w.denominator // _gcd(den, w.denominator)
    co = [0] * p
    for v, w in enumerate(weights):
        if w:
            co[(t * v) % p] += int(w * den)
    return BiasValue(p, Cyclotomic(p, co), den)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def certified_compare(
    lhs_fn: Callable[[int], object],
    rhs_fn: Callable[[int], object],
    start_prec: int = DEFAULT_PREC,
    max_prec: int = MAX_PREC,
) -> Ordering:
    """Compare two interval-valued quantities, doubling precision on overlap.

    Both callables map a bit precision to a certified iv enclosure.  Raises
    PrecisionExhausted when the intervals still overlap at max_prec; callers
    that can prove exact equality must do so before calling this.
    """
    prec = start_prec
    while prec <= max_prec:
        with iv_prec(prec):
            lhs = lhs_fn(prec)
            rhs = rhs_fn(prec)
            if lhs.b < rhs.a:
                return Ordering.LESS
            if lhs.a > rhs.b:
                return Ordering.GREATER
        prec *= 2
    raise PrecisionExhausted(
        f"intervals still overlap at {max_prec} bits; genuinely borderline"
    )


def real_cyclotomic_sign(
    z: Cyclotomic, start_prec: int = DEFAULT_PREC, max_prec: int = MAX_PREC
) -> int:
    """Exact sign of a real element of Z[w_p]: -1, 0 or +1.

    Zero is decided exactly from the canonical form; nonzero sign by
    refining intervals (always terminates: a nonzero algebraic number
    is bounded away from zero).
    """
    if not z.is_real():
        raise ValueError("value is not real")
    if z.is_zero():
        return 0
    q = z.as_rational_int()
    if q is not None:
        return -1 if q < 0 else 1
    prec = start_prec
    while True:
        val = z.real_interval(prec)
        if val.b < 0:
            return -1
        if val.a > 0:
            return 1
        prec *= 2
        if prec > max(max_prec, 1 << 16):
            raise PrecisionExhausted("sign of a nonzero cyclotomic not separated")


def compare_real_values(a: BiasValue, b: BiasValue) -> Ordering:
    """Exact ordering of two provably real BiasValues (a.value ? b.value)."""
    diff = a.z.scale(b.scale) - b.z.scale(a.scale)
    sign = real_cyclotomic_sign(diff)
    return Ordering(sign)


def modulus_compare(
    b: BiasValue,
    threshold: Fraction,
    start_prec: int = DEFAULT_PREC,
    max_prec: int = MAX_PREC,
) -> Ordering:
    """Order |bias| against an exact rational threshold in [0, 1].

    EQUAL is returned only when provable exactly from the cyclotomic
    representation (|z|^2 rational); otherwise the certified interval is
    refined until it separates, or PrecisionExhausted signals a genuinely
    borderline comparison.
    """
    threshold = Fraction(threshold)
    if threshold < 0 or threshold > 1:
        raise ParameterOutOfRange("threshold must lie in [0, 1]")
    if b.is_zero():
        if threshold == 0:
            return Ordering.EQUAL
        return Ordering.LESS
    t_sq = threshold * threshold
    exact = b.modulus_sq_rational()
    if exact is not None:
        if exact == t_sq:
            return Ordering.EQUAL
        return Ordering.LESS if exact < t_sq else Ordering.GREATER
    return certified_compare(
        lambda prec: b.modulus_sq_interval(prec),
        lambda prec: iv_fraction(t_sq),
        start_prec,
        max_prec,
    )
