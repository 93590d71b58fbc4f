"""Topological consequences checked on multivaluation rings.

Co-embeddability, V-topological coarsenings, independence of two superrings,
the V^n condition, and the weight drop under coarsening.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from ..errors import ConsistencyError, PreconditionError
from ..exactfield import FieldElem, sample_universe
from ..valuation import Valuation, approximate, in_ring, val
from .ring import NEG_INF, ModuleVec, MultiValRing, jacobson_witness, weight


# ---------------------------------------------------------------------------
# co-embeddability


@dataclass(frozen=True)
class Coembedding:
    a: FieldElem
    b: FieldElem


@dataclass(frozen=True)
class CoembedRefutation:
    component: int  # index into the joint valuation list
    valuation: Valuation
    reason: str


def _joint_vector(obj, joint: Sequence[Valuation], over: Sequence[Valuation] | None) -> ModuleVec:
    if isinstance(obj, MultiValRing):
        return ModuleVec(tuple(0 if v in obj.valuations else NEG_INF for v in joint))
    if over is None:
        return obj
    if obj.is_bottom:
        return obj
    pos = {v: i for i, v in enumerate(over)}
    return ModuleVec(tuple(obj.gamma[pos[v]] if v in pos else NEG_INF for v in joint))


def coembeddable(X, Y, over: Sequence[Valuation] | None = None, scale_scope=None):
    """Exact co-embeddability test for value-vector modules and rings.

    A ModuleVec argument is read against ``over``; rings are embedded into
    the joint valuation list (``over`` plus every ring's valuations).  Since
    a·M(γ) = M(γ + v(a)), X and Y are co-embeddable iff they are finite on
    the same components.  Witnesses are powers of the joint Jacobson element
    (or, if given, the first matching members of ``scale_scope``).
    """
    joint = list(over or [])
    for obj in (X, Y):
        if isinstance(obj, MultiValRing):
            joint += [v for v in obj.valuations if v not in joint]
    if not joint:
        raise PreconditionError("no valuation list to interpret module vectors")
    gx = _joint_vector(X, joint, over)
    gy = _joint_vector(Y, joint, over)
    if gx.is_bottom or gy.is_bottom:
        if gx.is_bottom and gy.is_bottom:
            one = joint[0].field.one()
            return Coembedding(one, one)
        return CoembedRefutation(0, joint[0], "only {0} embeds into {0}")
    for k, (a, b) in enumerate(zip(gx.gamma, gy.gamma)):
        if (a == NEG_INF) != (b == NEG_INF):
            side = "first" if a == NEG_INF else "second"
            return CoembedRefutation(k, joint[k], f"{side} argument is unbounded at {joint[k]}")
    R = MultiValRing(tuple(joint))
    a = _shift_witness(R, gx, gy, scale_scope)
    b = _shift_witness(R, gy, gx, scale_scope)
    if not (gx.scale(R, a) <= gy and gy.scale(R, b) <= gx):
        raise ConsistencyError("co-embedding witnesses failed")
    return Coembedding(a, b)


def _shift_witness(R: MultiValRing, src: ModuleVec, dst: ModuleVec, scope) -> FieldElem:
    """Nonzero a with a·src ⊆ dst."""
    if scope is not None:
        for c in sorted(scope, key=FieldElem.sort_key):
            if not c.is_zero() and src.scale(R, c) <= dst:
                return c
    need = 0
    for s, d in zip(src.gamma, dst.gamma):
        if s != NEG_INF:
            need = max(need, d - s)
    return jacobson_witness(R) ** need


# ---------------------------------------------------------------------------
# coarsenings


@dataclass
class CoarseningReport:
    ring: MultiValRing
    coarsenings: list
    checked: int

    @property
    def count(self) -> int:
        return len(self.coarsenings)

    @property
    def within_bounds(self) -> bool:
        return 1 <= self.count <= self.ring.n


def coarsening_report(R: MultiValRing, sample: Sequence[FieldElem] | None = None) -> CoarseningReport:
    """V-topological coarsenings of tau_R: the component valuation rings.

    Each O_i is re-checked to contain every sampled element of R and R's
    Jacobson witness and local uniformizers.
    """
    if sample is None:
        sample = sample_universe(R.field, 2, R.valuations)
    members = [x for x in sample if R.contains(x)]
    members += [jacobson_witness(R)] + list(R.uniformizers)
    for v in R.valuations:
        for x in members:
            if not in_ring(v, x):
                raise ConsistencyError(f"{x} ∈ R but not in the valuation ring of {v}")
    out = CoarseningReport(R, list(R.valuations), len(members))
    if not out.within_bounds:
        raise ConsistencyError("coarsening count outside [1, n]")
    return out


# ---------------------------------------------------------------------------
# independence


@dataclass(frozen=True)
class CommonVCoarsening:
    valuation: Valuation


@dataclass(frozen=True)
class ApproxWitness:
    x: FieldElem
    y: FieldElem
    precision: tuple  # (k1, k2)
    z: FieldElem


@dataclass
class Independent:
    witnesses: list = dc_field(default_factory=list)


def _default_batch(R: MultiValRing):
    f = R.field
    elems = [f.element(1), f.element(2), f.zero(), f.element(-1)]
    if f.is_rational:
        elems += [f.element(1, 2), f.element(5, 3)]
    else:
        elems += [f.gen(), f.gen().inverse()]
    precs = [(3, 2), (1, 1), (2, 3), (4, 1), (1, 4), (5, 5)]
    batch = []
    for i, x in enumerate(elems):
        y = elems[(i + 1) % len(elems)]
        batch.append((x, y, precs[i % len(precs)]))
    return batch


def classify_pair(R: MultiValRing, R1: MultiValRing, R2: MultiValRing, batch=None):
    """Independent (with approximation witnesses) or a shared V-coarsening."""
    for S in (R1, R2):
        if not set(S.valuations) <= set(R.valuations):
            raise PreconditionError(f"{S} is not a superring of {R}")
    shared = [v for v in R.valuations if v in R1.valuations and v in R2.valuations]
    if shared:
        return CommonVCoarsening(shared[0])
    out = Independent()
    for x, y, (k1, k2) in batch if batch is not None else _default_batch(R):
        targets = [(v, x, k1) for v in R1.valuations] + [(w, y, k2) for w in R2.valuations]
        z = approximate(targets)
        if not all(val(v, z - x) >= k1 for v in R1.valuations):
            raise ConsistencyError("approximation witness not close to x")
        if not all(val(w, z - y) >= k2 for w in R2.valuations):
            raise ConsistencyError("approximation witness not close to y")
        out.witnesses.append(ApproxWitness(x, y, (k1, k2), z))
    return out


# ---------------------------------------------------------------------------
# V^n condition


@dataclass(frozen=True)
class VnResult:
    passed: bool
    checked: int
    witness: FieldElem | None = None


def vn_condition(R: MultiValRing, qs: Sequence[FieldElem], x: FieldElem) -> bool:
    if R.contains(x):
        return True
    return any(x != q and R.contains((x - q).inverse()) for q in qs)


def vn_check(R: MultiValRing, qs: Sequence[FieldElem], universe: Sequence[FieldElem]) -> VnResult:
    """Check ({x} ∪ {1/(x - q_i)}) ∩ R ≠ ∅ for every x; report the first failure."""
    qs = list(qs)
    if not qs:
        raise PreconditionError("need at least one q")
    if len(set(qs)) != len(qs):
        raise PreconditionError("q values must be distinct")
    checked = 0
    for x in sorted(universe, key=FieldElem.sort_key):
        checked += 1
        if not vn_condition(R, qs, x):
            return VnResult(False, checked, x)
    return VnResult(True, checked)


# ---------------------------------------------------------------------------
# weight drop under coarsening


@dataclass(frozen=True)
class BumpReport:
    branch: str  # "coembeddable" or "lower-weight"
    n: int
    superring_weight: int
    coembedding: Coembedding | None = None


def verify_bump(R: MultiValRing, Rp: MultiValRing) -> BumpReport:
    if not set(Rp.valuations) <= set(R.valuations):
        raise PreconditionError(f"{Rp} does not contain {R}")
    if set(Rp.valuations) == set(R.valuations):
        ce = coembeddable(R, Rp)
        if not isinstance(ce, Coembedding):
            raise ConsistencyError("equal rings reported as not co-embeddable")
        return BumpReport("coembeddable", R.n, R.n, ce)
    m = weight(Rp).n
    if m > R.n - 1:
        raise ConsistencyError("strict superring did not drop weight")
    return BumpReport("lower-weight", R.n, m)
