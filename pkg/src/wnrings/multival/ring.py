"""Multivaluation rings R = O_1 ∩ ... ∩ O_n and their value-vector modules.

Every decision here reduces to comparing value vectors.  Where a positive
answer is claimed an explicit certificate is built (by strong approximation)
and checked in exact arithmetic before it is returned.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Sequence

from ..errors import ConsistencyError, FieldMismatchError, PreconditionError
from ..exactfield import FieldDesc, FieldElem, sample_universe
from ..valuation import INF, Valuation, approximate, local_uniformizers, val, value_vector

NEG_INF = -INF


# ---------------------------------------------------------------------------
# rings


@dataclass(frozen=True)
class MultiValRing:
    valuations: tuple

    def __post_init__(self):
        vs = tuple(self.valuations)
        object.__setattr__(self, "valuations", vs)
        if not vs:
            raise PreconditionError("a multivaluation ring needs at least one valuation")
        if len(set(vs)) != len(vs):
            raise PreconditionError("duplicate valuation in ring")
        if len({v.field for v in vs}) != 1:
            raise FieldMismatchError("valuations over different fields")

    @property
    def n(self) -> int:
        return len(self.valuations)

    @property
    def field(self) -> FieldDesc:
        return self.valuations[0].field

    def valvec(self, x: FieldElem) -> tuple:
        return value_vector(self.valuations, x)

    def contains(self, x: FieldElem) -> bool:
        return all(val(v, x) >= 0 for v in self.valuations)

    __contains__ = contains

    def is_valuation_ring(self) -> bool:
        return self.n == 1

    @cached_property
    def uniformizers(self) -> tuple:
        """pi_i of value vector e_i (a uniformizer at v_i, a unit elsewhere)."""
        return tuple(local_uniformizers(self.valuations))

    def element_with_vector(self, exps: Sequence[int]) -> FieldElem:
        out = self.field.one()
        for pi, e in zip(self.uniformizers, exps):
            if e:
                out = out * pi**e
        return out

    def sub_ring(self, indices: Iterable[int]) -> "MultiValRing":
        return MultiValRing(tuple(self.valuations[i] for i in indices))

    def sample(self, height_bound: int = 2) -> list[FieldElem]:
        return sample_universe(self.field, height_bound, self.valuations)

    def descriptor(self) -> str:
        return "intersect(" + ", ".join(v.descriptor() for v in self.valuations) + ")"

    def __str__(self):
        return self.descriptor()


# ---------------------------------------------------------------------------
# value-vector modules


@dataclass(frozen=True)
class ModuleVec:
    """M(gamma) = {x : v_i(x) >= gamma_i for all i}; ``gamma=None`` is {0}.

    Components may be ``-inf`` (no constraint); the all ``-inf`` vector is K.
    """

    gamma: tuple | None

    def __post_init__(self):
        g = self.gamma
        if g is not None:
            g = tuple(c if c in (INF, NEG_INF) else int(c) for c in g)
            if any(c == INF for c in g):
                g = None
        object.__setattr__(self, "gamma", g)

    @classmethod
    def bottom(cls) -> "ModuleVec":
        return cls(None)

    @classmethod
    def top(cls, n: int) -> "ModuleVec":
        return cls((NEG_INF,) * n)

    @classmethod
    def ring(cls, n: int) -> "ModuleVec":
        return cls((0,) * n)

    @property
    def is_bottom(self) -> bool:
        return self.gamma is None

    @property
    def is_top(self) -> bool:
        return self.gamma is not None and all(c == NEG_INF for c in self.gamma)

    def is_finite(self) -> bool:
        return self.gamma is not None and all(c != NEG_INF for c in self.gamma)

    def meet(self, other: "ModuleVec") -> "ModuleVec":
        if self.is_bottom or other.is_bottom:
            return ModuleVec.bottom()
        return ModuleVec(tuple(max(a, b) for a, b in zip(self.gamma, other.gamma)))

    def join(self, other: "ModuleVec") -> "ModuleVec":
        if self.is_bottom:
            return other
        if other.is_bottom:
            return self
        return ModuleVec(tuple(min(a, b) for a, b in zip(self.gamma, other.gamma)))

    __and__ = meet
    __or__ = join

    def __le__(self, other: "ModuleVec") -> bool:
        if self.is_bottom:
            return True
        if other.is_bottom:
            return False
        return all(a >= b for a, b in zip(self.gamma, other.gamma))

    def __lt__(self, other):
        return self <= other and self != other

    def __ge__(self, other):
        return other <= self

    def __gt__(self, other):
        return other < self

    def contains_vec(self, vec: Sequence) -> bool:
        if self.is_bottom:
            return all(c == INF for c in vec)
        return all(c >= g for c, g in zip(vec, self.gamma))

    def contains(self, R: MultiValRing, x: FieldElem) -> bool:
        return self.contains_vec(R.valvec(x))

    def translate(self, shift: Sequence) -> "ModuleVec":
        """Scaling by c acts as translation by the value vector of c."""
        if self.is_bottom:
            return self
        return ModuleVec(tuple(g + s for g, s in zip(self.gamma, shift)))

    def scale(self, R: MultiValRing, c: FieldElem) -> "ModuleVec":
        if c.is_zero():
            return ModuleVec.bottom()
        return self.translate(R.valvec(c))

    def render(self) -> str:
        if self.is_bottom:
            return "bottom"
        return "vec(" + ", ".join("-inf" if c == NEG_INF else str(c) for c in self.gamma) + ")"

    def __str__(self):
        return self.render()


# ---------------------------------------------------------------------------
# module-sum membership


@dataclass(frozen=True)
class SumCertificate:
    """Certificate for x ∈ sum_j gens_j R (positive) or its refutation."""

    x: FieldElem
    gens: tuple
    positive: bool
    coefficients: tuple | None = None
    index: int | None = None  # violated valuation for refutations

    def verify(self, R: MultiValRing) -> bool:
        if self.positive:
            if len(self.coefficients) != len(self.gens):
                return False
            if not all(R.contains(r) for r in self.coefficients):
                return False
            total = R.field.zero()
            for g, r in zip(self.gens, self.coefficients):
                total = total + g * r
            return total == self.x
        v = R.valuations[self.index]
        return val(v, self.x) < min(val(v, g) for g in self.gens)


def sum_criterion(vx: Sequence, vgens: Sequence[Sequence]) -> int | None:
    """First valuation index at which v_k(x) < min_j v_k(x_j), or None."""
    for k, c in enumerate(vx):
        if c < min(vg[k] for vg in vgens):
            return k
    return None


def member_sum(R: MultiValRing, x: FieldElem, gens: Sequence[FieldElem]) -> SumCertificate:
    """Decide x ∈ gens_1 R + ... + gens_m R with a checked certificate."""
    gens = tuple(gens)
    if not gens:
        raise PreconditionError("member_sum needs at least one generator")
    for g in gens + (x,):
        if g.field != R.field:
            raise FieldMismatchError("element not in the ring's field")
    if all(g.is_zero() for g in gens):
        raise PreconditionError("generators are all zero")
    vx = R.valvec(x)
    vgens = [R.valvec(g) for g in gens]
    bad = sum_criterion(vx, vgens)
    if bad is not None:
        cert = SumCertificate(x, gens, False, index=bad)
    else:
        cert = SumCertificate(x, gens, True, coefficients=_coefficients(R, x, gens, vx, vgens))
    if not cert.verify(R):
        raise ConsistencyError(f"member_sum certificate failed to verify for {x}")
    return cert


def _argmins(vgens: Sequence[Sequence], n: int) -> list[int]:
    out = []
    for k in range(n):
        col = [vg[k] for vg in vgens]
        out.append(col.index(min(col)))
    return out


def _coefficients(R, x, gens, vx, vgens) -> tuple:
    zero, one = R.field.zero(), R.field.one()
    if x.is_zero():
        return tuple(zero for _ in gens)
    owner = _argmins(vgens, R.n)
    chosen = sorted(set(owner))
    if len(chosen) == 1:
        j = chosen[0]
        return tuple(x / gens[j] if i == j else zero for i in range(len(gens)))
    # partition of unity u_j: u_j ≈ 1 where j owns the valuation, ≈ 0 elsewhere
    prec = 1
    for j in chosen:
        for k in range(R.n):
            prec = max(prec, vgens[j][k] - vx[k])
    units = {}
    for j in chosen:
        targets = [(v, one if owner[k] == j else zero, prec) for k, v in enumerate(R.valuations)]
        units[j] = approximate(targets)
    s = zero
    for u in units.values():
        s = s + u
    return tuple(x * units[i] / (gens[i] * s) if i in units else zero for i in range(len(gens)))


# ---------------------------------------------------------------------------
# weight


def wset_select(R: MultiValRing, xs: Sequence[FieldElem]):
    """Pick i with xs[i] in the R-span of the others (0-based index).

    For each valuation take the lowest-index argmin; with n+1 entries and
    n valuations some index is never an argmin, and the least such index is
    returned together with a positive membership certificate.
    """
    xs = tuple(xs)
    if len(xs) != R.n + 1:
        raise PreconditionError(f"wset_select needs {R.n + 1} elements, got {len(xs)}")
    if all(x.is_zero() for x in xs):
        raise PreconditionError("all elements are zero")
    vecs = [R.valvec(x) for x in xs]
    owners = set(_argmins(vecs, R.n))
    i = min(set(range(len(xs))) - owners)
    cert = member_sum(R, xs[i], xs[:i] + xs[i + 1 :])
    if not cert.positive:
        raise ConsistencyError("pigeonhole selection produced a refutation")
    return i, cert


@dataclass(frozen=True)
class WeightCertificate:
    n: int
    lower_witness: tuple
    refutations: tuple
    upper_proof: str = "wset_select: pigeonhole over argmins is total at arity n+1"

    def verify(self, R: MultiValRing) -> bool:
        if len(self.lower_witness) != self.n or self.n != R.n:
            return False
        for i, cert in enumerate(self.refutations):
            others = self.lower_witness[:i] + self.lower_witness[i + 1 :]
            others = others or (R.field.zero(),)
            if cert.positive or cert.x != self.lower_witness[i] or cert.gens != others:
                return False
            if not cert.verify(R):
                return False
        return True


def weight(R: MultiValRing) -> WeightCertificate:
    """Weight of R with a checked lower-bound witness.

    The witness entries are N/pi_i with N = prod pi_j (value vector ones - e_i);
    none lies in the span of the others.  The matching upper bound is the
    totality of ``wset_select``.
    """
    pis = R.uniformizers
    witness = []
    for i in range(R.n):
        w = R.field.one()
        for j, pi in enumerate(pis):
            if j != i:
                w = w * pi
        witness.append(w)
    witness = tuple(witness)
    refs = []
    for i in range(R.n):
        if R.n == 1:
            # single generator 1: the empty-span refutation is "1 ∉ {0}"
            refs.append(SumCertificate(witness[0], (R.field.zero(),), False, index=0))
            continue
        cert = member_sum(R, witness[i], witness[:i] + witness[i + 1 :])
        if cert.positive:
            raise ConsistencyError("weight witness is generated by the others")
        refs.append(cert)
    out = WeightCertificate(R.n, witness, tuple(refs))
    if not out.verify(R):
        raise ConsistencyError("weight certificate failed")
    return out


def check_wset_total(R: MultiValRing, universe: Sequence[FieldElem], limit: int | None = None) -> int:
    """Run ``wset_select`` on every (n+1)-tuple from ``universe``; return count."""
    count = 0
    for tup in itertools.product(universe, repeat=R.n + 1):
        if all(x.is_zero() for x in tup):
            continue
        wset_select(R, tup)
        count += 1
        if limit is not None and count >= limit:
            break
    return count


# ---------------------------------------------------------------------------
# ideals


@dataclass(frozen=True)
class MaximalIdeal:
    ring: MultiValRing
    index: int

    @property
    def valuation(self) -> Valuation:
        return self.ring.valuations[self.index]

    def contains(self, x: FieldElem) -> bool:
        return self.ring.contains(x) and val(self.valuation, x) > 0

    __contains__ = contains

    def __str__(self):
        return f"m[{self.valuation}]"


def maximal_ideals(R: MultiValRing) -> list[MaximalIdeal]:
    return [MaximalIdeal(R, i) for i in range(R.n)]


def jacobson_witness(R: MultiValRing) -> FieldElem:
    x = R.element_with_vector((1,) * R.n)
    if x.is_zero() or not all(c > 0 for c in R.valvec(x)):
        raise ConsistencyError("Jacobson witness has a non-positive value")
    return x


def crt_selectors(R: MultiValRing, p_index: int) -> dict:
    """a_S in m_p with a_S in m_j exactly for j in S, keyed by frozenset(S).

    Indices are 0-based positions in ``R.valuations``; S ranges over subsets
    of the indices other than ``p_index``.
    """
    if not 0 <= p_index < R.n:
        raise PreconditionError(f"ideal index {p_index} out of range")
    others = [j for j in range(R.n) if j != p_index]
    out = {}
    for r in range(len(others) + 1):
        for S in itertools.combinations(others, r):
            exps = [1 if (j == p_index or j in S) else 0 for j in range(R.n)]
            a = R.element_with_vector(exps)
            vec = R.valvec(a)
            if not (vec[p_index] > 0 and all((vec[j] > 0) == (j in S) for j in others)):
                raise ConsistencyError("selector has the wrong support")
            out[frozenset(S)] = a
    return out


def localization_search(R: MultiValRing, p_index: int, x: FieldElem, selectors=None):
    """Return the first S (in size-then-lex order) with 1/(x + a_S) ∈ R, else None."""
    if not R.contains(x):
        raise PreconditionError(f"{x} is not in the ring")
    sels = selectors if selectors is not None else crt_selectors(R, p_index)
    for S in sorted(sels, key=lambda s: (len(s), sorted(s))):
        y = x + sels[S]
        if not y.is_zero() and all(c <= 0 for c in R.valvec(y)):
            return S
    return None


def localization_member(R: MultiValRing, p_index: int, x: FieldElem, selectors=None) -> bool:
    """x ∉ m_p, decided through the selector criterion and cross-checked."""
    found = localization_search(R, p_index, x, selectors) is not None
    direct = val(R.valuations[p_index], x) == 0
    if found != direct:
        raise ConsistencyError(f"selector criterion disagrees with v_p for {x}")
    return found


# ---------------------------------------------------------------------------
# assorted certified facts


@dataclass
class IntegralityReport:
    x: FieldElem
    index: int
    value: int
    degree_bound: int
    relations_checked: int
    reason: str


def not_integral_witness(
    R: MultiValRing, x: FieldElem, degree_bound: int = 4, coefficients: Sequence[FieldElem] | None = None
) -> IntegralityReport:
    """Check that 1/x satisfies no monic relation of degree <= degree_bound.

    Coefficients are drawn from ``coefficients`` (default: a small sample of
    R).  Besides the direct evaluation, every relation is checked to have the
    ultrametric leading-term value predicted below.
    """
    if x.is_zero() or not R.contains(x):
        raise PreconditionError(f"{x} is not a nonzero element of R")
    vec = R.valvec(x)
    pos = [i for i, c in enumerate(vec) if c > 0]
    if not pos:
        raise PreconditionError(f"{x} lies in no maximal ideal")
    i = pos[0]
    v = R.valuations[i]
    y = x.inverse()
    m = -val(v, y)
    if coefficients is None:
        coefficients = [c for c in sample_universe(R.field, 1, R.valuations) if R.contains(c)]
    coefficients = list(coefficients)
    checked = 0
    for d in range(1, degree_bound + 1):
        powers = [y**k for k in range(d + 1)]
        for cs in itertools.product(coefficients, repeat=d):
            total = powers[d]
            for k, c in enumerate(cs):
                total = total + c * powers[k]
            if total.is_zero() or val(v, total) != -d * m:
                raise ConsistencyError(f"1/{x} satisfies or nearly satisfies a monic relation")
            checked += 1
    reason = f"v[{v}](1/x) = {-m} < 0, so the leading term y^d has value {-m}*d, below every other term"
    return IntegralityReport(x, i, -m, degree_bound, checked, reason)


@dataclass
class ContinuityReport:
    ideal: ModuleVec
    shrunk: ModuleVec
    checked: int
    failures: list = dc_field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def division_continuity(R: MultiValRing, I: ModuleVec, sample: Sequence[FieldElem] | None = None):
    """I' = I ∩ J, checking (1 + x)^-1 ∈ 1 + I on the sampled x ∈ I'."""
    if I.is_bottom:
        raise PreconditionError("the zero ideal is not a neighborhood")
    if not I.is_finite() or any(g < 0 for g in I.gamma) or len(I.gamma) != R.n:
        raise PreconditionError("ideal vector must be finite and nonnegative")
    J = ModuleVec((1,) * R.n)
    shrunk = I.meet(J)
    if sample is None:
        sample = sample_universe(R.field, 3, R.valuations)
    one = R.field.one()
    checked = 0
    failures = []
    for x in sample:
        if not shrunk.contains(R, x):
            continue
        checked += 1
        if not I.contains(R, (one + x).inverse() - one):
            failures.append(x)
    report = ContinuityReport(I, shrunk, checked, failures)
    return shrunk, report


def subring_generated(seed: Iterable[FieldElem], depth: int, field: FieldDesc | None = None) -> frozenset:
    """U_0 = seed ∪ {0, 1}; U_{i+1} = U_i ∪ (U_i - U_i) ∪ (U_i · U_i)."""
    if depth < 0:
        raise PreconditionError("depth must be >= 0")
    seed = list(seed)
    if field is None:
        if seed:
            field = seed[0].field
        else:
            from ..exactfield import QQ

            field = QQ
    cur = set(seed) | {field.zero(), field.one()}
    for _ in range(depth):
        items = list(cur)
        nxt = set(cur)
        for a in items:
            for b in items:
                nxt.add(a - b)
                nxt.add(a * b)
        cur = nxt
    return frozenset(cur)
