"""Bounded evaluation of local sentences over a neighborhood basis {cR}.

Neighborhood quantifiers range over c·R for c in the scale set, element
quantifiers over the element scope (intersected with a neighborhood when
bound by ``in V``), and ``existsC`` over the scale set.  A structure may
give existential binders larger witness ranges than universal ones; by
default the two coincide.  Every verdict is relative to these finite
ranges.  A term that divides by zero makes its
atom false.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from ..errors import ConsistencyError, PreconditionError
from ..exactfield import FieldDesc, FieldElem
from ..multival import MultiValRing
from ..valuation import INF, Valuation, val
from .polarity import Violation, check_polarity
from .vector import BlockRunner, compile_block
from .syntax import (
    SCOPE,
    And,
    BinOp,
    ConstEx,
    ElemAll,
    ElemEx,
    Eq,
    Formula,
    Gen,
    Implies,
    Lit,
    Mem,
    NbhdAll,
    NbhdEx,
    Neg,
    Neq,
    Not,
    Or,
    Pow,
    Var,
    print_sentence,
)

NEG_INF = -INF
HOLDS = "HoldsOnScope"
FAILS = "FailsOnScope"


@dataclass
class Structure:
    """Field, basis ring(s), scale set and element scope.

    ``bases`` maps tags used as ``forallN U@tag`` to further basis rings;
    untagged neighborhood variables use ``ring``.  ``witness_scales`` and
    ``witness_scope`` are the ranges of existsN/existsC and existsE; they
    always include the universal ranges and default to them.
    """

    field: FieldDesc
    ring: MultiValRing
    scale_set: Sequence[FieldElem]
    elem_scope: Sequence[FieldElem]
    bases: dict = dc_field(default_factory=dict)
    witness_scales: Sequence[FieldElem] | None = None
    witness_scope: Sequence[FieldElem] | None = None

    def __post_init__(self):
        key = FieldElem.sort_key
        self.scale_set = sorted(set(self.scale_set), key=key)
        self.elem_scope = sorted(set(self.elem_scope), key=key)
        self.witness_scales = sorted(set(self.witness_scales or ()) | set(self.scale_set), key=key)
        self.witness_scope = sorted(set(self.witness_scope or ()) | set(self.elem_scope), key=key)
        if not self.scale_set or not self.elem_scope:
            raise PreconditionError("scale set and element scope must be nonempty")
        if any(c.is_zero() for c in self.witness_scales):
            raise PreconditionError("scale set must consist of nonzero elements")
        if self.field.zero() not in self.elem_scope or self.field.one() not in self.elem_scope:
            raise PreconditionError("element scope must contain 0 and 1")
        for R in [self.ring, *self.bases.values()]:
            if R.field != self.field:
                raise PreconditionError("basis ring over a different field")
        joint: list[Valuation] = list(self.ring.valuations)
        for R in self.bases.values():
            joint += [v for v in R.valuations if v not in joint]
        self.joint = tuple(joint)

    def basis(self, tag: str | None) -> MultiValRing:
        if tag is None:
            return self.ring
        if tag not in self.bases:
            raise PreconditionError(f"unknown basis tag {tag!r}")
        return self.bases[tag]


@dataclass
class WitnessNode:
    """One step of a verdict explanation.

    ``kind`` is forall/exists (a chosen instance), forall-all (every
    instance checked), exists-none (every candidate refuted, with one
    sub-witness per candidate), a connective name, or atom.
    """

    kind: str
    truth: bool
    var: str | None = None
    value: object = None
    children: list = dc_field(default_factory=list)
    note: str = ""

    def render(self, indent: int = 0, limit: int = 40) -> str:
        pad = "  " * indent
        head = f"{pad}{self.kind}"
        if self.var is not None:
            head += f" {self.var}"
        if self.value is not None:
            head += f" = {_render_value(self.value)}"
        if self.note:
            head += f" [{self.note}]"
        head += f" -> {self.truth}"
        lines = [head]
        for c in self.children[:limit]:
            lines.append(c.render(indent + 1, limit))
        if len(self.children) > limit:
            lines.append(f"{pad}  ... {len(self.children) - limit} more")
        return "\n".join(lines)

    def instances(self) -> list:
        """The chosen values along the first branch, for compact reports."""
        out = []
        node = self
        while node is not None:
            if node.kind in ("forall", "exists") and node.value is not None:
                out.append((node.var, node.value))
            node = node.children[0] if node.children and node.kind != "exists-none" else None
        return out


def _render_value(v) -> str:
    if isinstance(v, tuple) and len(v) == 2 and isinstance(v[0], FieldElem):
        return f"{v[0]}*R"
    return str(v)


@dataclass
class EvalResult:
    verdict: str
    witness: WitnessNode
    stats: dict = dc_field(default_factory=dict)

    @property
    def holds(self) -> bool:
        return self.verdict == HOLDS


class _Undefined(Exception):
    pass


class _Evaluator:
    def __init__(self, st: Structure, vectorize: bool = True, prune: bool = True):
        self.st = st
        self.vectorize = vectorize
        self.prune = prune
        self._pruned: dict = {}
        self._monotone: dict = {}
        self._blocks: dict = {}
        self._runner = None
        self.joint = st.joint
        self.n = len(self.joint)
        self.one = st.field.one()
        self._vv: dict = {}
        self._nb: dict = {}
        self._in: dict = {}
        self.atoms = 0
        self.gen = st.field.gen() if not st.field.is_rational else None

    # values
    def vv(self, x: FieldElem) -> tuple:
        r = self._vv.get(x)
        if r is None:
            r = tuple(val(v, x) for v in self.joint)
            self._vv[x] = r
        return r

    def nbhd(self, tag, c: FieldElem) -> tuple:
        """Value vector of c·R over the joint list; -inf off the basis."""
        key = (tag, c)
        r = self._nb.get(key)
        if r is None:
            R = self.st.basis(tag)
            r = tuple(val(v, c) if v in R.valuations else NEG_INF for v in self.joint)
            self._nb[key] = r
        return r

    def value(self, t, env) -> FieldElem:
        if isinstance(t, Var):
            return env[t.name]
        if isinstance(t, Lit):
            return self.st.field.element(t.value)
        if isinstance(t, Gen):
            return self.gen
        if isinstance(t, Neg):
            return -self.value(t.arg, env)
        if isinstance(t, Pow):
            b = self.value(t.base, env)
            if t.exp < 0 and b.is_zero():
                raise _Undefined
            return b**t.exp
        a, b = self.value(t.left, env), self.value(t.right, env)
        if t.op == "+":
            return a + b
        if t.op == "-":
            return a - b
        if t.op == "*":
            return a * b
        if b.is_zero():
            raise _Undefined
        return a / b

    def tvec(self, t, env) -> tuple:
        """Value vector of a term; products go through vector arithmetic."""
        if isinstance(t, Var):
            x = env[t.name]
            return self.vv(x)
        if isinstance(t, Neg):
            return self.tvec(t.arg, env)
        if isinstance(t, BinOp) and t.op in ("*", "/"):
            a, b = self.tvec(t.left, env), self.tvec(t.right, env)
            if t.op == "*":
                return tuple(x + y for x, y in zip(a, b))
            if b[0] == INF:
                raise _Undefined
            return tuple(x - y if x != INF else INF for x, y in zip(a, b))
        if isinstance(t, Pow):
            a = self.tvec(t.base, env)
            if a[0] == INF:
                if t.exp < 0:
                    raise _Undefined
                return a if t.exp > 0 else (0,) * self.n
            return tuple(t.exp * x for x in a)
        return self.vv(self.value(t, env))

    # atoms
    def atom(self, f, env) -> bool:
        self.atoms += 1
        try:
            if isinstance(f, Mem):
                xv = self.tvec(f.term, env)
                bound = None
                for sc in f.nbhd:
                    g = env[sc.var]
                    cv = self.tvec(sc.coef, env) if sc.coef is not None else None
                    if cv is not None and cv[0] == INF:
                        continue  # 0·U = {0}
                    s = g if cv is None else tuple(a + b for a, b in zip(cv, g))
                    bound = s if bound is None else tuple(min(a, b) for a, b in zip(bound, s))
                if bound is None:
                    return xv[0] == INF
                return all(a >= b for a, b in zip(xv, bound))
            a, b = self.value(f.left, env), self.value(f.right, env)
            return (a == b) if isinstance(f, Eq) else (a != b)
        except _Undefined:
            return False

    # domains
    def domain(self, f, env) -> list:
        if isinstance(f, (NbhdAll, NbhdEx)):
            scales = self.st.scale_set if isinstance(f, NbhdAll) else self.st.witness_scales
            return [(c, self.nbhd(f.basis, c)) for c in scales]
        if isinstance(f, ConstEx):
            return list(self.st.witness_scales)
        universal = isinstance(f, ElemAll)
        pool = self.st.elem_scope if universal else self.st.witness_scope
        if f.scope == SCOPE:
            return pool
        g = env[f.scope]
        key = (g, universal)
        r = self._in.get(key)
        if r is None:
            r = [x for x in pool if all(a >= b for a, b in zip(self.vv(x), g))]
            self._in[key] = r
        return r

    def search_domain(self, f, env) -> list:
        """The domain used for verdicts, reduced by monotonicity where sound.

        A forallN variable occurs only positively, so its body is monotone
        under enlarging the neighborhood and only inclusion-minimal basis
        members need checking; an existsN variable occurs only negatively,
        so again the minimal members suffice.  An existsC variable that only
        scales positive membership summands can be restricted to candidates
        with minimal value vector.
        """
        if not self.prune:
            return self.domain(f, env)
        if isinstance(f, (NbhdAll, NbhdEx)):
            key = ("n", f.basis, isinstance(f, NbhdAll))
            if key not in self._pruned:
                dom = self.domain(f, env)
                self._pruned[key] = _extremal(dom, lambda item: item[1], maximal=True)
            return self._pruned[key]
        if isinstance(f, ConstEx):
            mono = self._monotone.get(id(f))
            if mono is None:
                mono = self._monotone[id(f)] = _const_monotone(f)
            if not mono:
                return self.domain(f, env)
            if "c" not in self._pruned:
                self._pruned["c"] = _extremal(self.domain(f, env), self.vv, maximal=False)
            return self._pruned["c"]
        return self.domain(f, env)

    @staticmethod
    def bind(f, item):
        # neighborhood domains carry (c, vector); bind the vector
        if isinstance(f, (NbhdAll, NbhdEx)):
            return item[1]
        return item

    # boolean evaluation
    def ev(self, f, env) -> bool:
        if isinstance(f, (Mem, Eq, Neq)):
            return self.atom(f, env)
        if isinstance(f, Not):
            return not self.ev(f.arg, env)
        if isinstance(f, And):
            return self.ev(f.left, env) and self.ev(f.right, env)
        if isinstance(f, Or):
            return self.ev(f.left, env) or self.ev(f.right, env)
        if isinstance(f, Implies):
            return (not self.ev(f.left, env)) or self.ev(f.right, env)
        if self.vectorize and isinstance(f, (ElemAll, ElemEx)) and f.scope == SCOPE:
            block = self._block(f)
            if block is not None:
                return self._runner.run(block, env)
        universal = isinstance(f, (NbhdAll, ElemAll))
        dom = self.search_domain(f, env)
        saved = env.get(f.var, _MISSING)
        try:
            for item in dom:
                env[f.var] = self.bind(f, item)
                r = self.ev(f.body, env)
                if universal and not r:
                    return False
                if not universal and r:
                    return True
            return universal
        finally:
            _restore(env, f.var, saved)

    def _block(self, f):
        key = id(f)
        if key not in self._blocks:
            if self._runner is None:
                self._runner = BlockRunner(self)
            b = compile_block(f)
            self._blocks[key] = b if b is not None and self._runner.eligible(b) else None
        return self._blocks[key]

    # explanations
    def explain(self, f, env, budget: list) -> WitnessNode:
        truth = self.ev(f, env)
        if isinstance(f, (Mem, Eq, Neq)):
            return WitnessNode("atom", truth, note=print_sentence(f))
        if isinstance(f, Not):
            return WitnessNode("not", truth, children=[self.explain(f.arg, env, budget)])
        if isinstance(f, (And, Or, Implies)):
            kind = type(f).__name__.lower()
            left = self.explain(f.left, env, budget)
            if (isinstance(f, And) and not left.truth) or (isinstance(f, Or) and left.truth) or (
                isinstance(f, Implies) and not left.truth
            ):
                return WitnessNode(kind, truth, children=[left])
            return WitnessNode(kind, truth, children=[left, self.explain(f.right, env, budget)])
        universal = isinstance(f, (NbhdAll, ElemAll))
        dom = self.domain(f, env)
        saved = env.get(f.var, _MISSING)
        try:
            if truth != universal:
                # a decisive instance: counterexample to forall or witness for exists
                for item in dom:
                    env[f.var] = self.bind(f, item)
                    if self.ev(f.body, env) == truth:
                        sub = self.explain(f.body, env, budget)
                        shown = item if not isinstance(f, (NbhdAll, NbhdEx)) else (item[0], item[1])
                        return WitnessNode("forall" if universal else "exists", truth, f.var, shown, [sub])
                raise ConsistencyError("no decisive instance found on re-evaluation")
            if universal:
                return WitnessNode("forall-all", truth, f.var, note=f"{len(dom)} instances")
            kids = []
            for item in dom:
                env[f.var] = self.bind(f, item)
                budget[0] -= 1
                if budget[0] < 0:
                    kids.append(WitnessNode("truncated", False, f.var))
                    break
                sub = self.explain(f.body, env, budget)
                shown = item if not isinstance(f, (NbhdAll, NbhdEx)) else (item[0], item[1])
                kids.append(WitnessNode("candidate", False, f.var, shown, [sub]))
            return WitnessNode("exists-none", truth, f.var, children=kids, note=f"{len(dom)} candidates")
        finally:
            _restore(env, f.var, saved)


_MISSING = object()


def _extremal(dom, vec, maximal: bool) -> list:
    """Members whose vector is not strictly beaten by another (first of equals kept)."""
    vecs = [vec(x) for x in dom]
    out = []
    seen = set()
    for i, (x, v) in enumerate(zip(dom, vecs)):
        if v in seen:
            continue
        seen.add(v)
        beaten = False
        for w in vecs:
            if w == v:
                continue
            if (maximal and all(a >= b for a, b in zip(w, v))) or (
                not maximal and all(a <= b for a, b in zip(w, v))
            ):
                beaten = True
                break
        if not beaten:
            out.append(x)
    return out


def _term_vars(t, acc: set) -> set:
    if isinstance(t, Var):
        acc.add(t.name)
    elif isinstance(t, Neg):
        _term_vars(t.arg, acc)
    elif isinstance(t, Pow):
        _term_vars(t.base, acc)
    elif isinstance(t, BinOp):
        _term_vars(t.left, acc)
        _term_vars(t.right, acc)
    return acc


def _positive_power(t, var: str) -> bool:
    """t is a monomial in which ``var`` has positive total exponent."""
    from .vector import _NotMonomial, _monomial

    try:
        mono = _monomial(t)
    except _NotMonomial:
        return False
    exps = mono.get(("var", var), [])
    return len(exps) == 1 and exps[0] > 0


def _const_monotone(f: ConstEx) -> bool:
    c = f.var

    def walk(g, positive) -> bool:
        if isinstance(g, Mem):
            if c in _term_vars(g.term, set()):
                return False
            for sc in g.nbhd:
                if sc.coef is not None and c in _term_vars(sc.coef, set()):
                    if not (positive and _positive_power(sc.coef, c)):
                        return False
            return True
        if isinstance(g, (Eq, Neq)):
            return c not in _term_vars(g.left, set()) | _term_vars(g.right, set())
        if isinstance(g, Not):
            return walk(g.arg, not positive)
        if isinstance(g, (And, Or)):
            return walk(g.left, positive) and walk(g.right, positive)
        if isinstance(g, Implies):
            return walk(g.left, not positive) and walk(g.right, positive)
        return walk(g.body, positive)

    return walk(f.body, True)


def _restore(env, var, saved):
    if saved is _MISSING:
        env.pop(var, None)
    else:
        env[var] = saved


def evaluate(
    s: Formula, st: Structure, explain_budget: int = 5000, vectorize: bool = True, prune: bool = True
) -> EvalResult:
    """Verdict on the structure's finite ranges, with a replayable witness tree.

    ``vectorize=False`` forces instance-by-instance evaluation and
    ``prune=False`` iterates every candidate; both only affect speed.
    """
    pol = check_polarity(s)
    if isinstance(pol, Violation):
        raise PreconditionError(f"polarity violation: {pol.render()}")
    E = _Evaluator(st, vectorize, prune)
    truth = E.ev(s, {})
    atoms = E.atoms
    wit = E.explain(s, {}, [explain_budget])
    if wit.truth != truth:
        raise ConsistencyError("explanation disagrees with verdict")
    res = EvalResult(HOLDS if truth else FAILS, wit, {"atoms": atoms})
    if not replay(s, st, wit, vectorize, prune):
        raise ConsistencyError("witness tree does not replay")
    return res


def replay(s: Formula, st: Structure, w: WitnessNode, vectorize: bool = True, prune: bool = True) -> bool:
    """Re-check a witness tree against a fresh evaluator (no shared caches)."""
    E = _Evaluator(st, vectorize, prune)

    def go(f, node, env) -> bool:
        if node.kind == "truncated":
            return True
        if isinstance(f, (Mem, Eq, Neq)):
            return node.kind == "atom" and E.atom(f, env) == node.truth
        if isinstance(f, Not):
            return node.truth != node.children[0].truth and go(f.arg, node.children[0], env)
        if isinstance(f, (And, Or, Implies)):
            kids = node.children
            ok = go(f.left, kids[0], env)
            if len(kids) > 1:
                ok = ok and go(f.right, kids[1], env)
                a, b = kids[0].truth, kids[1].truth
            else:
                a, b = kids[0].truth, None
            if isinstance(f, And):
                expect = a and b if b is not None else False
            elif isinstance(f, Or):
                expect = a or b if b is not None else True
            else:
                expect = (not a) or b if b is not None else True
            return ok and expect == node.truth
        universal = isinstance(f, (NbhdAll, ElemAll))
        saved = env.get(f.var, _MISSING)
        try:
            dom = E.domain(f, env)
            if node.kind in ("forall", "exists"):
                item = node.value
                if item not in dom:
                    return False
                env[f.var] = E.bind(f, item)
                sub = node.children[0]
                return sub.truth == node.truth and node.truth != universal and go(f.body, sub, env)
            if node.kind == "forall-all":
                for item in E.search_domain(f, env):
                    env[f.var] = E.bind(f, item)
                    if not E.ev(f.body, env):
                        return False
                return node.truth
            if node.kind == "exists-none":
                shown = [k.value for k in node.children if k.kind == "candidate"]
                truncated = any(k.kind == "truncated" for k in node.children)
                if not truncated and shown != list(dom):
                    return False
                if shown != list(dom)[: len(shown)]:
                    return False
                for k in node.children:
                    if k.kind != "candidate":
                        continue
                    env[f.var] = E.bind(f, k.value)
                    if not go(f.body, k.children[0], env) or k.children[0].truth:
                        return False
                if truncated:
                    # unrecorded candidates are checked directly
                    for item in list(dom)[len(shown):]:
                        env[f.var] = E.bind(f, item)
                        if E.ev(f.body, env):
                            return False
                return not node.truth
            return False
        finally:
            _restore(env, f.var, saved)

    return go(s, w, {})


# ---------------------------------------------------------------------------
# standard ranges


def positive_scales(R: MultiValRing, height: int) -> list[FieldElem]:
    """Monic (positive over Q) products of support elements of bounded size.

    Size is max(|num|, den) over Q and p^(max degree) over F_p(t), so that a
    bound means the same order of magnitude in both fields.
    """
    bases = []
    for v in R.valuations:
        b = v.support_element()
        if b not in bases:
            bases.append(b)
    one = R.field.one()
    out = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for c in frontier:
            for b in bases:
                for d in (c * b, c / b):
                    if d not in out and arithmetic_height(d) <= height:
                        out.add(d)
                        nxt.append(d)
        frontier = nxt
    return sorted(out, key=FieldElem.sort_key)


def arithmetic_height(x: FieldElem) -> int:
    if x.field.is_rational:
        return x.height
    return x.field.characteristic ** x.height


def standard_structure(R: MultiValRing, scale_height: int = 64, extra=()) -> Structure:
    """Two-tier structure used by the sentence suite.

    Universal ranges: scales of arithmetic height <= scale_height, and the
    element scope {0, ±1}, the support elements, the weight lower
    witnesses and ``extra``.
    Witness ranges add c·j for a Jacobson witness j (so every universal
    neighborhood has a strictly smaller witness neighborhood) and the
    scales themselves as elements (so every universal neighborhood meets
    the witness scope away from 0).
    """
    from ..multival import jacobson_witness, weight

    F = R.field
    scales = positive_scales(R, scale_height)
    j = jacobson_witness(R)
    supports = [v.support_element() for v in R.valuations]
    scope = {F.zero(), F.one(), -F.one(), *supports, *weight(R).lower_witness, *extra}
    return Structure(
        F,
        R,
        scales,
        scope,
        witness_scales=scales + [c * j for c in scales],
        witness_scope=set(scope) | set(scales),
    )

