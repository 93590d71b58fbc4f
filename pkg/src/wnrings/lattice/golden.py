"""Value-vector lattices of a multivaluation ring viewed as golden lattices.

The lattice is {0} ∪ {M(γ)} ∪ {K}.  Everything is decided by vector
arithmetic; the finite fragment |γ_i| <= bound is used wherever an
enumeration is needed.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from typing import Sequence

from ..errors import ConsistencyError, PreconditionError
from ..exactfield import FieldElem, sample_universe
from ..multival import ModuleVec, MultiValRing
from ..multival.ring import NEG_INF
from .finite import DEFAULT_MAX_SIZE, FinLattice, cube_rank, strict_cube_rank

INF = float("inf")
RANK_STRICT_BOUND = 512
AXIOMS = ("Lattice", "Scaling", "Rank", "Intersection", "NonDegeneracy")


class GoldenLatticeView:
    """A multivaluation ring with its value-vector lattice and a finite fragment.

    ``members`` overrides the default fragment (Bottom, Top and every integer
    vector in the box |γ_i| <= bound).
    """

    def __init__(self, ring: MultiValRing, bound: int = 4, scale_height: int = 16,
                 members: Sequence[ModuleVec] | None = None):
        if bound < 1:
            raise PreconditionError("fragment bound must be >= 1")
        self.ring = ring
        self.n = ring.n
        self.bound = bound
        self.scale_height = scale_height
        self.custom = members is not None
        if members is None:
            box = itertools.product(range(-bound, bound + 1), repeat=self.n)
            members = [ModuleVec.bottom()] + [ModuleVec(g) for g in box] + [ModuleVec.top(self.n)]
        self.members = list(dict.fromkeys(members))
        self._set = set(self.members)

    def __contains__(self, A: ModuleVec) -> bool:
        return A in self._set

    def box_lattice(self, radius: int) -> FinLattice:
        """The fragment of the given radius as a finite lattice."""
        box = [ModuleVec(g) for g in itertools.product(range(-radius, radius + 1), repeat=self.n)]
        elems = [ModuleVec.bottom()] + box + [ModuleVec.top(self.n)]
        return FinLattice.from_order(elems, lambda a, b: a <= b)


@dataclass
class AxiomResult:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class AxiomReport:
    results: dict = dc_field(default_factory=dict)
    rank: int | None = None

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results.values())

    def failed(self) -> list[str]:
        return [k for k, r in self.results.items() if not r.passed]


def _pairs(V: GoldenLatticeView, limit: int, rng: random.Random):
    m = V.members
    if len(m) ** 2 <= limit:
        return list(itertools.product(m, m))
    return [(rng.choice(m), rng.choice(m)) for _ in range(limit)]


def _fragment_rank(V: GoldenLatticeView) -> int:
    if V.custom:
        elems = V.members
        L = FinLattice.from_order(elems, lambda a, b: a <= b)
        method = "all" if L.size <= DEFAULT_MAX_SIZE else "strictCube"
        return cube_rank(L, method, max_size=max(RANK_STRICT_BOUND, DEFAULT_MAX_SIZE))
    # the box is a product of chains, so radius 1 already realizes the rank;
    # use the largest radius the chosen method can afford
    radius = 1
    while (2 * radius + 3) ** V.n + 2 <= DEFAULT_MAX_SIZE and radius < V.bound:
        radius += 1
    L = V.box_lattice(radius)
    if L.size <= DEFAULT_MAX_SIZE:
        return cube_rank(L, "all")
    return cube_rank(L, "strictCube", max_size=RANK_STRICT_BOUND)


def _random_scalars(R: MultiValRing, height: int, count: int, rng: random.Random) -> list[FieldElem]:
    """Distinct nonzero u·∏ b_i^e_i of height <= ``height`` over the ring's support elements."""
    bases = [v.support_element() for v in R.valuations]
    units = R.field.units()
    out: dict = {}
    tries = 0
    while len(out) < count and tries < 50 * count:
        tries += 1
        c = rng.choice(units)
        for b in bases:
            c = c * b ** rng.randint(-3, 3)
        if c.height <= height:
            out[c] = None
    return sorted(out, key=FieldElem.sort_key)


def golden_axioms(V: GoldenLatticeView, pair_limit: int = 2000, seed: int = 0) -> AxiomReport:
    """Check the five golden-lattice axioms on the fragment."""
    R, n = V.ring, V.n
    rng = random.Random(seed)
    report = AxiomReport()
    bottom, top = ModuleVec.bottom(), ModuleVec.top(n)
    sample = sample_universe(R.field, 2, R.valuations)
    probe = sample[:: max(1, len(sample) // 40)]
    vecs = {x: R.valvec(x) for x in probe}
    pairs = _pairs(V, pair_limit, rng)

    # Lattice: 0 and K present, fragment closed, meet is intersection
    bad = None
    if bottom not in V or top not in V:
        bad = "fragment misses {0} or K"
    for A, B in pairs:
        if bad:
            break
        C = A.meet(B)
        if C not in V or A.join(B) not in V:
            bad = f"{A} and {B} leave the fragment"
            break
        for x in probe:
            if C.contains_vec(vecs[x]) != (A.contains_vec(vecs[x]) and B.contains_vec(vecs[x])):
                bad = f"meet of {A}, {B} is not the intersection at {x}"
                break
    report.results["Lattice"] = AxiomResult("Lattice", bad is None, bad or f"{len(pairs)} pairs")

    # Scaling: c·M(γ) = M(γ + v(c)) tested on members
    scalars = _random_scalars(R, V.scale_height, 40, rng)
    bad = None
    for c in scalars:
        vc = R.valvec(c)
        pre = {x: R.valvec(x / c) for x in probe[::3]}
        for A in rng.sample(V.members, min(len(V.members), 25)):
            cA = A.scale(R, c)
            if A.is_bottom or A.is_top:
                if cA != A:
                    bad = f"{c} moves {A}"
                continue
            if not cA.is_finite():
                bad = f"{c}·{A} left the vector lattice"
                break
            for x in probe[::3]:
                if cA.contains_vec(vecs[x]) != A.contains_vec(pre[x]):
                    bad = f"{c}·{A} disagrees with translation at {x}"
                    break
            if cA.gamma != tuple(g + s for g, s in zip(A.gamma, vc)):
                bad = f"{c}·{A} is not a translation"
        if bad:
            break
    report.results["Scaling"] = AxiomResult("Scaling", bad is None, bad or f"{len(scalars)} scalars")

    # Rank
    rank = _fragment_rank(V)
    report.rank = rank
    ok = rank == n if not V.custom else rank < INF
    report.results["Rank"] = AxiomResult("Rank", ok, f"cube rank {rank}, weight {n}")

    # Intersection: nonzero meets of nonzero members are nonzero
    bad = None
    for A, B in pairs:
        if A.is_bottom or B.is_bottom:
            continue
        C = A.meet(B)
        if C.is_bottom:
            bad = f"{A} ∧ {B} = 0"
            break
        g = tuple(0 if c == NEG_INF else c for c in C.gamma)
        w = R.element_with_vector(g)
        if not (A.contains(R, w) and B.contains(R, w) and not w.is_zero()):
            bad = f"no common nonzero element for {A}, {B}"
            break
    report.results["Intersection"] = AxiomResult("Intersection", bad is None, bad or "ok")

    middle = next((A for A in V.members if not A.is_bottom and not A.is_top), None)
    report.results["NonDegeneracy"] = AxiomResult(
        "NonDegeneracy", middle is not None, f"middle element {middle}" if middle else "only {0} and K"
    )
    return report


# ---------------------------------------------------------------------------
# pedestals and guards


@dataclass(frozen=True)
class Pedestal:
    A: ModuleVec
    cube: tuple  # B_1..B_r

    def check(self) -> bool:
        acc = None
        for B in self.cube:
            if not self.A < B:
                return False
            if acc is not None and acc.meet(B) != self.A:
                return False
            acc = B if acc is None else acc.join(B)
        return True


def pedestal(V: GoldenLatticeView) -> Pedestal:
    """A = R with the coordinate relaxations M(-e_i) as a strict n-cube above it."""
    n = V.n
    A = ModuleVec.ring(n)
    cube = tuple(ModuleVec(tuple(-1 if j == i else 0 for j in range(n))) for i in range(n))
    out = Pedestal(A, cube)
    if not out.check():
        raise ConsistencyError("pedestal cube fails independence")
    return out


def guard_set(V: GoldenLatticeView, A: ModuleVec | Pedestal) -> list[FieldElem]:
    """g_i ∈ B_i \\ A for the pedestal cube: the inverse local uniformizers."""
    ped = A if isinstance(A, Pedestal) else pedestal(V)
    R = V.ring
    S = []
    for B in ped.cube:
        g = R.element_with_vector(B.gamma)
        if not B.contains(R, g) or ped.A.contains(R, g):
            raise ConsistencyError(f"guard element {g} not in B \\ A")
        S.append(g)
    res = check_guard(V, S, ped.A)
    if not res.guarded:
        raise ConsistencyError("constructed guard set fails")
    return S


@dataclass(frozen=True)
class GuardResult:
    guarded: bool
    counterexample: ModuleVec | None = None


def _min_vector(R: MultiValRing, S: Sequence[FieldElem]) -> tuple:
    m = [INF] * R.n
    for s in S:
        m = [min(a, b) for a, b in zip(m, R.valvec(s))]
    return tuple(m)


def check_guard(V: GoldenLatticeView, S: Sequence[FieldElem], A: ModuleVec) -> GuardResult:
    """S guards A iff every lattice member containing S contains A.

    The smallest member containing S is M(min over S of value vectors), so
    the whole condition is one vector comparison.
    """
    R = V.ring
    worst = ModuleVec(_min_vector(R, S))
    if A <= worst:
        return GuardResult(True)
    return GuardResult(False, worst)


def scale_into(V: GoldenLatticeView, S: Sequence[FieldElem], A: ModuleVec) -> FieldElem:
    """Nonzero c with c·S ⊆ A."""
    if A.is_bottom:
        raise PreconditionError("cannot scale into {0}")
    R = V.ring
    d = [0] * R.n
    for s in S:
        if s.is_zero():
            continue
        for k, (g, vs) in enumerate(zip(A.gamma, R.valvec(s))):
            if g != NEG_INF:
                d[k] = max(d[k], g - vs)
    c = R.element_with_vector(d)
    if c.is_zero() or not all(A.contains(R, c * s) for s in S):
        raise ConsistencyError("scaling element fails membership")
    return c
