"""Order-d tensors over F_p, their multilinear forms, and rank machinery.

Rank semantics are three-tier and always carried in a RankBound: exact
values (matrices, or exhaustive search over the full state space when it
fits the budget), certified bounds (analytic-rank lower bounds, certificate
or greedy upper bounds), and nothing else -- a bare integer is only
returned where the value is provably exact.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    BudgetExceeded,
    DEFAULT_BUDGET,
    DimensionMismatch,
    IndexOutOfRange,
    MalformedCertificate,
    check_budget,
)
from .fpcore import FieldCtx
from .linalg import rank_modp


class Tensor:
    """Dense order-d tensor with row-major entries over F_p."""

    __slots__ = ("ctx", "dims", "entries", "_strides")

    def __init__(self, ctx: FieldCtx, dims: Sequence[int], entries: Sequence[int]):
        dims = tuple(int(d) for d in dims)
        if any(d < 0 for d in dims):
            raise DimensionMismatch("dims must be nonnegative")
        size = 1
        for d in dims:
            size *= d
        entries = tuple(e % ctx.p for e in entries)
        if len(entries) != size:
            raise DimensionMismatch(f"expected {size} entries, got {len(entries)}")
        self.ctx = ctx
        self.dims = dims
        self.entries = entries
        strides = [1] * len(dims)
        for i in range(len(dims) - 2, -1, -1):
            strides[i] = strides[i + 1] * dims[i + 1]
        self._strides = tuple(strides)

    @property
    def order(self) -> int:
        return len(self.dims)

    def flat_index(self, idx: Sequence[int]) -> int:
        return sum(i * s for i, s in zip(idx, self._strides))

    def get(self, idx: Sequence[int]) -> int:
        return self.entries[self.flat_index(idx)]

    def indices(self) -> Iterable[tuple[int, ...]]:
        return itertools.product(*[range(d) for d in self.dims])

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def __eq__(self, other):
        return (
            isinstance(other, Tensor)
            and self.ctx == other.ctx
            and self.dims == other.dims
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.ctx.p, self.dims, self.entries))

    def __repr__(self):
        return f"Tensor(p={self.ctx.p}, dims={self.dims})"

    def __add__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        p = self.ctx.p
        return Tensor(
            self.ctx, self.dims, [(a + b) % p for a, b in zip(self.entries, other.entries)]
        )

    def __sub__(self, other: "Tensor") -> "Tensor":
        self._check(other)
        p = self.ctx.p
        return Tensor(
            self.ctx, self.dims, [(a - b) % p for a, b in zip(self.entries, other.entries)]
        )

    def __neg__(self) -> "Tensor":
        return Tensor(self.ctx, self.dims, [-e for e in self.entries])

    def _check(self, other: "Tensor") -> None:
        if self.ctx != other.ctx or self.dims != other.dims:
            raise DimensionMismatch("tensor shapes differ")

    @classmethod
    def zero(cls, ctx: FieldCtx, dims: Sequence[int]) -> "Tensor":
        size = 1
        for d in dims:
            size *= d
        return cls(ctx, dims, [0] * size)

    @classmethod
    def from_map(cls, ctx: FieldCtx, dims: Sequence[int], values: dict) -> "Tensor":
        t = cls.zero(ctx, dims)
        entries = list(t.entries)
        for idx, v in values.items():
            entries[t.flat_index(idx)] = v % ctx.p
        return cls(ctx, dims, entries)

    def as_matrix(self) -> list[list[int]]:
        if self.order != 2:
            raise DimensionMismatch("not a matrix")
        n1, n2 = self.dims
        return [list(self.entries[i * n2 : (i + 1) * n2]) for i in range(n1)]

    def to_json(self) -> dict:
        return {"p": self.ctx.p, "dims": list(self.dims), "entries": list(self.entries)}

    @classmethod
    def from_json(cls, data: dict) -> "Tensor":
        return cls(FieldCtx(data["p"]), data["dims"], data["entries"])


def mlf_eval(t: Tensor, vectors: Sequence[Sequence[int]]) -> int:
    """The d-linear form: sum over indices of T(i) * prod_a x_a[i_a]."""
    if len(vectors) != t.order:
        raise DimensionMismatch("need one vector per axis")
    for v, d in zip(vectors, t.dims):
        if len(v) != d:
            raise DimensionMismatch("vector length does not match axis")
    p = t.ctx.p
    total = 0
    for idx in t.indices():
        e = t.get(idx)
        if e:
            prod = e
            for a, i in enumerate(idx):
                prod = prod * vectors[a][i]
            total += prod
    return total % p


def contract_first(t: Tensor, x: Sequence[int]) -> Tensor:
    """Plug x into the first slot, yielding an order-(d-1) tensor."""
    if len(x) != t.dims[0]:
        raise DimensionMismatch("vector length does not match first axis")
    p = t.ctx.p
    block = len(t.entries) // t.dims[0]
    out = [0] * block
    for i, xi in enumerate(x):
        if xi % p == 0:
            continue
        base = i * block
        for j in range(block):
            e = t.entries[base + j]
            if e:
                out[j] = (out[j] + xi * e) % p
    return Tensor(t.ctx, t.dims[1:], out)


def restrict(t: Tensor, subsets: Sequence[Sequence[int]]) -> Tensor:
    """Sub-tensor on the given index sets (0-based, may be empty)."""
    if len(subsets) != t.order:
        raise DimensionMismatch("need one index set per axis")
    for s, d in zip(subsets, t.dims):
        for i in s:
            if not 0 <= i < d:
                raise IndexOutOfRange(f"index {i} outside axis of size {d}")
    dims = tuple(len(s) for s in subsets)
    entries = []
    for idx in itertools.product(*subsets):
        entries.append(t.get(idx))
    return Tensor(t.ctx, dims, entries)


@dataclass(frozen=True)
class AnalyticRank:
    """Exact bias of the multilinear form, plus its -log_p when rational.

    bias = (# assignments of the first d-1 slots whose induced linear form
    on the last slot vanishes) / p^(n_1+...+n_{d-1}).  log_exact is the
    exact rational -log_p(bias) when bias is a power of p, else None.
    """

    bias: Fraction
    zero_fiber_count: int
    log_exact: Fraction | None

    def ceil_ar(self) -> int:
        """Smallest integer k with p^(-k) <= bias (so ar <= k <= pr)."""
        k = 0
        p = self._p
        while Fraction(1, p**k) > self.bias:
            k += 1
        return k

    @property
    def _p(self) -> int:
        # denominator of bias is a p-power by construction
        den = self.bias.denominator
        if den == 1:
            return 2  # bias == 1, any base works; never used
        for q in range(2, den + 1):
            if den % q == 0:
                return q
        raise AssertionError

    def ar_interval(self, prec: int = 128):
        from .fpcore import iv_prec
        from mpmath import iv

        with iv_prec(prec):
            return -iv.log(
                iv.mpf(self.bias.numerator) / iv.mpf(self.bias.denominator)
            ) / iv.log(iv.mpf(self._p))


def _log_p_exact(value: Fraction, p: int) -> Fraction | None:
    """-log_p(value) as an exact rational, when value is a p-power."""
    if value == 1:
        return Fraction(0)
    num, den = value.numerator, value.denominator
    # value = num/den with den = p^m; exact log iff num is also a power of p
    def p_power_exponent(x: int) -> int | None:
        e = 0
        while x % p == 0:
            x //= p
            e += 1
        return e if x == 1 else None

    en = p_power_exponent(num)
    ed = p_power_exponent(den)
    if en is None or ed is None:
        return None
    return Fraction(ed - en)


def analytic_rank(t: Tensor, budget: int = DEFAULT_BUDGET) -> AnalyticRank:
    """Exact bias as the probability that a random partial assignment of
    the first d-1 slots kills the last linear slot."""
    p = t.ctx.p
    if t.order < 2:
        raise DimensionMismatch("analytic rank needs order >= 2")
    pre_dims = t.dims[:-1]
    space = 1
    for d in pre_dims:
        space *= p**d
    check_budget(space, budget)

    def count_zero(tt: Tensor) -> int:
        if tt.order == 2:
            # x with x^T A = 0: p^(n1 - rank)
            r = rank_modp(tt.as_matrix(), p)
            return p ** (tt.dims[0] - r)
        total = 0
        for x in itertools.product(range(p), repeat=tt.dims[0]):
            total += count_zero(contract_first(tt, x))
        return total

    z = count_zero(t)
    bias = Fraction(z, space)
    return AnalyticRank(bias=bias, zero_fiber_count=z, log_exact=_log_p_exact(bias, p))


@dataclass(frozen=True)
class PartitionTerm:
    """One partition-rank-1 term a(x(I)) * b(x(J))."""

    axes_i: tuple[int, ...]
    axes_j: tuple[int, ...]
    a: Tensor
    b: Tensor

    def expand(self, ctx: FieldCtx, dims: tuple[int, ...]) -> Tensor:
        p = ctx.p
        d = len(dims)
        if sorted(self.axes_i + self.axes_j) != list(range(d)):
            raise MalformedCertificate("axes do not bipartition the order")
        if not self.axes_i or not self.axes_j:
            raise MalformedCertificate("bipartition must be nontrivial")
        if self.a.dims != tuple(dims[i] for i in self.axes_i):
            raise MalformedCertificate("factor a has wrong shape")
        if self.b.dims != tuple(dims[j] for j in self.axes_j):
            raise MalformedCertificate("factor b has wrong shape")
        entries = []
        for idx in itertools.product(*[range(dd) for dd in dims]):
            ai = tuple(idx[i] for i in self.axes_i)
            bj = tuple(idx[j] for j in self.axes_j)
            entries.append((self.a.get(ai) * self.b.get(bj)) % p)
        return Tensor(ctx, dims, entries)

    def to_json(self) -> dict:
        return {
            "I": list(self.axes_i),
            "J": list(self.axes_j),
            "a": self.a.to_json(),
            "b": self.b.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "PartitionTerm":
        return cls(
            tuple(data["I"]),
            tuple(data["J"]),
            Tensor.from_json(data["a"]),
            Tensor.from_json(data["b"]),
        )


@dataclass(frozen=True)
class PartitionRankCertificate:
    terms: tuple[PartitionTerm, ...]

    def to_json(self) -> dict:
        return {"kind": "partition", "terms": [t.to_json() for t in self.terms]}

    @classmethod
    def from_json(cls, data: dict) -> "PartitionRankCertificate":
        return cls(tuple(PartitionTerm.from_json(t) for t in data["terms"]))


def verify_pr_certificate(t: Tensor, cert: PartitionRankCertificate) -> bool:
    """True iff the terms sum to T entrywise (so pr T <= len(terms))."""
    acc = Tensor.zero(t.ctx, t.dims)
    for term in cert.terms:
        acc = acc + term.expand(t.ctx, t.dims)
    return acc == t


@dataclass(frozen=True)
class TensorRankCertificate:
    """Sum of full outer products a_1 x ... x a_d."""

    terms: tuple[tuple[tuple[int, ...], ...], ...]

    def to_json(self) -> dict:
        return {"kind": "tensor", "terms": [[list(v) for v in t] for t in self.terms]}

    @classmethod
    def from_json(cls, data: dict) -> "TensorRankCertificate":
        return cls(tuple(tuple(tuple(v) for v in t) for t in data["terms"]))


def verify_tr_certificate(t: Tensor, cert: TensorRankCertificate) -> bool:
    p = t.ctx.p
    for vecs in cert.terms:
        if len(vecs) != t.order:
            raise MalformedCertificate("term arity does not match order")
        for v, d in zip(vecs, t.dims):
            if len(v) != d:
                raise MalformedCertificate("factor length does not match axis")
    acc = [0] * len(t.entries)
    for vecs in cert.terms:
        for pos, idx in enumerate(t.indices()):
            prod = 1
            for a, i in enumerate(idx):
                prod = (prod * vecs[a][i]) % p
            acc[pos] = (acc[pos] + prod) % p
    return tuple(acc) == t.entries


@dataclass(frozen=True)
class RankBound:
    """lower <= true rank <= upper (upper None when unknown)."""

    lower: int
    upper: int | None
    lower_witness: str
    upper_witness: str

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper:
            raise ValueError("lower bound exceeds upper bound")

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.lower == self.upper

    def to_json(self) -> dict:
        return {
            "lower": self.lower,
            "upper": self.upper,
            "lower_witness": self.lower_witness,
            "upper_witness": self.upper_witness,
        }


def _bipartitions(d: int) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Unordered nontrivial bipartitions of range(d); axis 0 stays in I."""
    out = []
    rest = list(range(1, d))
    for mask in range(0, 1 << (d - 1)):
        i_side = [0] + [rest[k] for k in range(d - 1) if mask >> k & 1]
        j_side = [rest[k] for k in range(d - 1) if not mask >> k & 1]
        if j_side:
            out.append((tuple(i_side), tuple(j_side)))
    return out


def _nonzero_vectors(p: int, length: int, canonical: bool) -> list[tuple[int, ...]]:
    """All nonzero vectors; canonical = first nonzero coordinate is 1
    (cuts the p-1 scaling symmetry in rank-1 factor searches)."""
    out = []
    for v in itertools.product(range(p), repeat=length):
        if not any(v):
            continue
        if canonical:
            first = next(x for x in v if x)
            if first != 1:
                continue
        out.append(v)
    return out


def _rank_one_partition_tensors(ctx: FieldCtx, dims: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Entry tuples of every nonzero partition-rank-1 tensor on dims."""
    p = ctx.p
    d = len(dims)
    seen = set()
    out = []
    for axes_i, axes_j in _bipartitions(d):
        size_i = 1
        for i in axes_i:
            size_i *= dims[i]
        size_j = 1
        for j in axes_j:
            size_j *= dims[j]
        for a in _nonzero_vectors(p, size_i, canonical=True):
            ta = Tensor(ctx, tuple(dims[i] for i in axes_i), a)
            for b in _nonzero_vectors(p, size_j, canonical=False):
                tb = Tensor(ctx, tuple(dims[j] for j in axes_j), b)
                term = PartitionTerm(axes_i, axes_j, ta, tb)
                ent = term.expand(ctx, dims).entries
                if ent not in seen:
                    seen.add(ent)
                    out.append(ent)
    return out


_PR_TABLE: dict = {}
_TR_TABLE: dict = {}


def _bfs_rank_table(ctx: FieldCtx, dims: tuple[int, ...], generators: list) -> dict:
    """Distance of every tensor from zero under 'add one generator' moves.

    The distance of T is exactly the minimum number of generator terms
    summing to T, i.e. the exact rank for the generator family.
    """
    p = ctx.p
    size = len(Tensor.zero(ctx, dims).entries)
    zero = (0,) * size
    dist = {zero: 0}
    frontier = [zero]
    while frontier:
        nxt = []
        for state in frontier:
            dstate = dist[state]
            for gen in generators:
                new = tuple((a + b) % p for a, b in zip(state, gen))
                if new not in dist:
                    dist[new] = dstate + 1
                    nxt.append(new)
        frontier = nxt
    return dist


def exact_partition_rank_table(
    ctx: FieldCtx, dims: Sequence[int], budget: int = DEFAULT_BUDGET
) -> dict:
    """Exact pr for every tensor of the given tiny shape, by BFS."""
    dims = tuple(dims)
    key = (ctx.p, dims)
    if key not in _PR_TABLE:
        size = 1
        for d in dims:
            size *= d
        states = ctx.p**size
        gens = _rank_one_partition_tensors(ctx, dims)
        check_budget(states * len(gens), budget)
        _PR_TABLE[key] = _bfs_rank_table(ctx, dims, gens)
    return _PR_TABLE[key]


def _rank_one_full_tensors(ctx: FieldCtx, dims: tuple[int, ...]) -> list[tuple[int, ...]]:
    p = ctx.p
    out = []
    factor_sets = [_nonzero_vectors(p, dims[0], canonical=True)]
    for d in dims[1:]:
        factor_sets.append(_nonzero_vectors(p, d, canonical=False))
    for vecs in itertools.product(*factor_sets):
        entries = []
        for idx in itertools.product(*[range(d) for d in dims]):
            prod = 1
            for a, i in enumerate(idx):
                prod = (prod * vecs[a][i]) % p
            entries.append(prod)
        out.append(tuple(entries))
    return out


def exact_tensor_rank_table(
    ctx: FieldCtx, dims: Sequence[int], budget: int = DEFAULT_BUDGET
) -> dict:
    dims = tuple(dims)
    key = (ctx.p, dims)
    if key not in _TR_TABLE:
        size = 1
        for d in dims:
            size *= d
        states = ctx.p**size
        gens = _rank_one_full_tensors(ctx, dims)
        check_budget(states * len(gens), budget)
        _TR_TABLE[key] = _bfs_rank_table(ctx, dims, gens)
    return _TR_TABLE[key]


def _greedy_slice_upper(t: Tensor) -> tuple[int, PartitionRankCertificate]:
    """Upper bound: peel along the axis whose nonzero slices fall into the
    fewest projective classes; slices proportional to one another share a
    single a(x_axis) * b(slice) term."""
    p = t.ctx.p
    best = None
    for axis in range(t.order):
        n_axis = t.dims[axis]
        other_axes = tuple(a for a in range(t.order) if a != axis)
        other_dims = tuple(t.dims[a] for a in other_axes)
        slices = []
        for i in range(n_axis):
            sub = []
            for idx in itertools.product(*[range(d) for d in other_dims]):
                full = list(idx)
                full.insert(axis, i)
                sub.append(t.get(tuple(full)))
            slices.append(tuple(sub))
        classes: list[tuple[tuple[int, ...], list[tuple[int, int]]]] = []
        for i, s in enumerate(slices):
            if not any(s):
                continue
            first = next(x for x in s if x)
            inv = pow(first, p - 2, p)
            canon = tuple(x * inv % p for x in s)
            for rep, members in classes:
                if rep == canon:
                    members.append((i, first))
                    break
            else:
                classes.append((canon, [(i, first)]))
        terms = []
        for rep, members in classes:
            avec = [0] * n_axis
            for i, coef in members:
                avec[i] = coef
            terms.append(
                PartitionTerm(
                    (axis,),
                    other_axes,
                    Tensor(t.ctx, (n_axis,), avec),
                    Tensor(t.ctx, other_dims, rep),
                )
            )
        if best is None or len(terms) < len(best):
            best = terms
    return len(best), PartitionRankCertificate(tuple(best))


def partition_rank(t: Tensor, budget: int = DEFAULT_BUDGET) -> RankBound:
    """Never raises: degrades to wider bounds when exact search is too big."""
    p = t.ctx.p
    if t.is_zero():
        return RankBound(0, 0, "trivial", "trivial")
    if t.order == 2:
        r = rank_modp(t.as_matrix(), p)
        return RankBound(r, r, "matrix-rank", "matrix-rank")
    size = 1
    for d in t.dims:
        size *= d
    # exact exhaustive when the whole state space fits the budget
    try:
        if p**size <= 1 << 14:
            table = exact_partition_rank_table(t.ctx, t.dims, budget)
            r = table[t.entries]
            return RankBound(r, r, "exhaustive", "exhaustive")
    except BudgetExceeded:
        pass
    upper, _cert = _greedy_slice_upper(t)
    lower = 0
    lower_tag = "trivial"
    try:
        ar = analytic_rank(t, budget)
        lower = ar.ceil_ar()
        lower_tag = "analytic-rank"
    except BudgetExceeded:
        pass
    lower = min(lower, upper)
    return RankBound(lower, upper, lower_tag, "greedy-slices")


def essential_pr(t: Tensor, budget: int = DEFAULT_BUDGET) -> RankBound:
    """min over perturbations supported on tuples with a repeated coordinate."""
    p = t.ctx.p
    if len(set(t.dims)) != 1:
        raise DimensionMismatch("essential rank needs cubical dims")
    n = t.dims[0]
    d = t.order
    if d == 2:
        check_budget(p**n, budget)
        best = None
        mat = t.as_matrix()
        for diag in itertools.product(range(p), repeat=n):
            m = [row[:] for row in mat]
            for i in range(n):
                m[i][i] = (m[i][i] + diag[i]) % p
            r = rank_modp(m, p)
            if best is None or r < best:
                best = r
        return RankBound(best, best, "exhaustive-diagonal", "exhaustive-diagonal")
    # d >= 3: bound via the zero-on-E perturbation and the dpr lower bound
    repeated = [idx for idx in t.indices() if len(set(idx)) < len(idx)]
    zeroed = list(t.entries)
    tz = Tensor.zero(t.ctx, t.dims)
    for idx in repeated:
        zeroed[tz.flat_index(idx)] = 0
    t_zeroed = Tensor(t.ctx, t.dims, zeroed)
    up_candidates = [partition_rank(t_zeroed, budget), partition_rank(t, budget)]
    upper = min(b.upper for b in up_candidates if b.upper is not None)
    try:
        dpr = disjoint_pr(t, budget)
        lower = min(dpr.lower, upper)
        lower_tag = "disjoint-rank"
    except BudgetExceeded:
        lower, lower_tag = 0, "trivial"
    return RankBound(lower, upper, lower_tag, "perturbation-certificate")


def disjoint_pr(t: Tensor, budget: int = DEFAULT_BUDGET) -> RankBound:
    """max over disjoint X_1..X_d of pr of the restriction."""
    if len(set(t.dims)) != 1:
        raise DimensionMismatch("disjoint rank needs cubical dims")
    n = t.dims[0]
    d = t.order
    check_budget((d + 1) ** n, budget)
    lo = 0
    hi = 0
    all_exact = True
    for assign in itertools.product(range(d + 1), repeat=n):
        subsets = [[i for i in range(n) if assign[i] == a + 1] for a in range(d)]
        if any(not s for s in subsets):
            continue
        sub = restrict(t, subsets)
        b = partition_rank(sub, budget)
        lo = max(lo, b.lower)
        if b.upper is None:
            all_exact = False
        else:
            hi = max(hi, b.upper)
        if not b.exact:
            all_exact = False
    if all_exact:
        return RankBound(hi, hi, "exhaustive-restrictions", "exhaustive-restrictions")
    return RankBound(lo, None, "restriction-lower", "unknown")


def _greedy_tr_upper(t: Tensor) -> int:
    """Slice-recursive tensor-rank upper bound (matrix rank at the base)."""
    if t.is_zero():
        return 0
    if t.order == 2:
        return rank_modp(t.as_matrix(), t.ctx.p)
    p = t.ctx.p
    best = None
    for axis in range(t.order):
        other_axes = tuple(a for a in range(t.order) if a != axis)
        other_dims = tuple(t.dims[a] for a in other_axes)
        classes: dict[tuple[int, ...], int] = {}
        for i in range(t.dims[axis]):
            sub = []
            for idx in itertools.product(*[range(dd) for dd in other_dims]):
                full = list(idx)
                full.insert(axis, i)
                sub.append(t.get(tuple(full)))
            s = tuple(sub)
            if not any(s):
                continue
            first = next(x for x in s if x)
            inv = pow(first, p - 2, p)
            canon = tuple(x * inv % p for x in s)
            classes[canon] = 1
        total = 0
        for rep in classes:
            total += _greedy_tr_upper(Tensor(t.ctx, other_dims, rep))
        if best is None or total < best:
            best = total
    return best


def tensor_rank(t: Tensor, budget: int = DEFAULT_BUDGET) -> RankBound:
    p = t.ctx.p
    if t.is_zero():
        return RankBound(0, 0, "trivial", "trivial")
    if t.order == 2:
        r = rank_modp(t.as_matrix(), p)
        return RankBound(r, r, "matrix-rank", "matrix-rank")
    size = 1
    for d in t.dims:
        size *= d
    try:
        if p**size <= 1 << 14:
            table = exact_tensor_rank_table(t.ctx, t.dims, budget)
            r = table[t.entries]
            return RankBound(r, r, "exhaustive", "exhaustive")
    except BudgetExceeded:
        pass
    upper = _greedy_tr_upper(t)
    pr = partition_rank(t, budget)
    lower = min(pr.lower, upper)  # tr >= pr
    return RankBound(lower, upper, f"pr-{pr.lower_witness}", "greedy-slices")


@dataclass(frozen=True)
class SurjectivityResult:
    image: frozenset
    surjective: bool


def surjective_on(
    t: Tensor, alphabets: Sequence[Sequence[int]], budget: int = DEFAULT_BUDGET
) -> SurjectivityResult:
    """Exact image of the d-linear form on S_1^{n_1} x ... x S_d^{n_d}.

    Recursive contraction with early exit once the image is all of F_p.
    """
    p = t.ctx.p
    if len(alphabets) != t.order:
        raise DimensionMismatch("need one alphabet per axis")
    need = 1
    for s, d in zip(alphabets, t.dims):
        need *= len(s) ** d
    check_budget(need, budget)
    full = set(range(p))
    image: set[int] = set()

    def rec(tt: Tensor, depth: int) -> bool:
        """Returns True when image became all of F_p (early exit)."""
        alpha = [x % p for x in alphabets[depth]]
        if tt.order == 1:
            vec = tt.entries
            n = len(vec)

            def enum(i: int, acc: int) -> bool:
                if i == n:
                    image.add(acc % p)
                    return image == full
                for s in alpha:
                    if enum(i + 1, acc + s * vec[i]):
                        return True
                return False

            return enum(0, 0)
        for x in itertools.product(alpha, repeat=tt.dims[0]):
            if rec(contract_first(tt, x), depth + 1):
                return True
        return False

    rec(t, 0)
    return SurjectivityResult(frozenset(image), image == full)


def surjective_on_naive(
    t: Tensor, alphabets: Sequence[Sequence[int]], budget: int = DEFAULT_BUDGET
) -> SurjectivityResult:
    """Independent oracle: plain product enumeration through mlf_eval."""
    p = t.ctx.p
    need = 1
    for s, d in zip(alphabets, t.dims):
        need *= len(s) ** d
    check_budget(need, budget)
    image = set()
    spaces = [
        list(itertools.product([x % p for x in s], repeat=d))
        for s, d in zip(alphabets, t.dims)
    ]
    for vectors in itertools.product(*spaces):
        image.add(mlf_eval(t, vectors))
    return SurjectivityResult(frozenset(image), image == set(range(p)))
