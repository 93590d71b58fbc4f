"""Verification commands over an instance and the aggregate suite."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable

from ..errors import ConsistencyError, PreconditionError, WnError
from ..exactfield import FieldElem, height_universe, parse_element, render
from ..lattice import (
    FinModule,
    GoldenLatticeView,
    check_guard,
    cube_rank,
    golden_axioms,
    guard_set,
    pedestal,
    semisimple_subquotient,
    strict_cube_rank,
    submodule_cube_rank,
)
from ..localsent import BUILTIN_NAMES, RING_TOPOLOGY, builtin, evaluate, standard_structure
from ..multival import (
    Coembedding,
    CommonVCoarsening,
    ModuleVec,
    MultiValRing,
    check_wset_total,
    classify_pair,
    coarsening_report,
    coembeddable,
    crt_selectors,
    dilworth_chains,
    jacobson_witness,
    localization_member,
    localization_search,
    max_antichain_bruteforce,
    maximal_ideals,
    verify_bump,
    vn_check,
    weight,
    wset_select,
)
from ..valuation import val
from .instance import Instance

PASS = "PASS"
FAIL = "FAIL"
REFUTED = "REFUTED-ON-SCOPE"
SKIP = "SKIP"
VERDICTS = (PASS, FAIL, REFUTED, SKIP)

WSET_LIMIT = 4000
DILWORTH_BRUTE_LIMIT = 14


class UsageError(PreconditionError):
    """Bad command name or arguments."""


@dataclass
class Record:
    name: str
    verdict: str
    details: str = ""
    witness: str = ""
    fields: dict = dc_field(default_factory=dict)

    def human(self) -> str:
        line = f"{self.verdict:<16} {self.name}"
        if self.details:
            line += f": {self.details}"
        if self.witness:
            line += "\n" + "\n".join("    " + w for w in self.witness.splitlines())
        return line

    def machine(self) -> str:
        parts = ["CHECK", ":".join(self.name.split()), self.verdict]
        parts += [f"{k}={_token(str(v))}" for k, v in self.fields.items()]
        return " ".join(parts)


def _token(s: str) -> str:
    return "".join(s.split())


@dataclass
class Report:
    records: list = dc_field(default_factory=list)
    summary: str = ""

    @property
    def exit_status(self) -> int:
        return 1 if any(r.verdict == FAIL for r in self.records) else 0

    def counts(self) -> dict:
        return {v: sum(r.verdict == v for r in self.records) for v in VERDICTS}

    def render(self, machine: bool = False) -> str:
        lines = [r.machine() if machine else r.human() for r in self.records]
        if self.summary:
            lines.append(("SUMMARY " + self.summary) if machine else self.summary)
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# rendering


def _set(xs) -> str:
    return "{" + ", ".join(render(x) for x in xs) + "}"


def _tup(xs) -> str:
    return "(" + ", ".join(render(x) if isinstance(x, FieldElem) else str(x) for x in xs) + ")"


def _vec(v) -> str:
    return "(" + ", ".join(str(c) for c in v) + ")"


# ---------------------------------------------------------------------------
# context


@dataclass
class Context:
    inst: Instance
    seed: int = 0
    max_height: int | None = None

    @property
    def height(self) -> int:
        return self.max_height if self.max_height is not None else self.inst.height

    def universe(self, height: int | None = None) -> list[FieldElem]:
        """Scope elements of bounded arithmetic height (p^degree over F_p(t))."""
        h = height if height is not None else self.height
        F = self.field
        if F.is_rational:
            return height_universe(F, h)
        p, d = F.characteristic, 0
        while p ** (d + 1) <= h:
            d += 1
        return height_universe(F, max(d, 1))

    @property
    def field(self):
        if self.inst.field is None:
            raise PreconditionError("instance declares no field")
        return self.inst.field

    def element(self, text: str) -> FieldElem:
        return parse_element(text, self.field)

    def ring(self, name: str) -> MultiValRing:
        return self.inst.ring(name)

    def valuation_index(self, R: MultiValRing, name: str) -> int:
        if name in self.inst.valuations:
            v = self.inst.valuations[name]
            if v in R.valuations:
                return R.valuations.index(v)
            raise UsageError(f"valuation {name} is not part of the ring")
        try:
            k = int(name)
        except ValueError:
            raise UsageError(f"unknown valuation {name!r}") from None
        if not 1 <= k <= R.n:
            raise UsageError(f"valuation index {k} out of range 1..{R.n}")
        return k - 1

    def vname(self, v) -> str:
        return self.inst.valuation_name(v)

    def rname(self, R: MultiValRing) -> str:
        return self.inst.ring_name(R)

    def module(self, token: str, R: MultiValRing | None = None):
        """A named module (vector, ring) or a literal vec(...) read over R."""
        if token in self.inst.modules:
            m = self.inst.modules[token]
            return m.vec, self.ring(m.ring)
        if token.startswith("vec(") and token.endswith(")"):
            if R is None:
                raise UsageError("a literal vector needs a ring")
            try:
                gamma = tuple(int(c) for c in token[4:-1].split(","))
            except ValueError:
                raise UsageError(f"bad vector {token!r}") from None
            if len(gamma) != R.n:
                raise UsageError(f"vector length {len(gamma)} does not match the ring")
            return ModuleVec(gamma), R
        raise UsageError(f"unknown module {token!r}")


def _arity(args, lo: int, hi: int | None, usage: str):
    if len(args) < lo or (hi is not None and len(args) > hi):
        raise UsageError(f"usage: {usage}")


# ---------------------------------------------------------------------------
# commands; each returns a list of records


def cmd_weight(ctx: Context, args) -> list[Record]:
    _arity(args, 1, 1, "weight RING")
    R = ctx.ring(args[0])
    cert = weight(R)
    ok = cert.verify(R) and cert.n == R.n
    return [
        Record(
            f"weight {args[0]}",
            PASS if ok else FAIL,
            f"weight = {cert.n}, witness {_set(cert.lower_witness)}",
            fields={"ring": args[0], "weight": cert.n, "witness": _set(cert.lower_witness)},
        )
    ]


def cmd_wset(ctx: Context, args) -> list[Record]:
    _arity(args, 1, None, "wset RING [x1 ... x_{n+1}]")
    R = ctx.ring(args[0])
    if len(args) > 1:
        xs = [ctx.element(a) for a in args[1:]]
        i, cert = wset_select(R, xs)
        ok = cert.verify(R)
        return [
            Record(
                f"wset {args[0]}",
                PASS if ok else FAIL,
                f"x{i + 1} = {render(xs[i])} lies in the span of the others",
                f"coefficients {_tup(cert.coefficients)}",
                {"ring": args[0], "index": i + 1, "coefficients": _tup(cert.coefficients)},
            )
        ]
    sample = [x for x in R.sample(1)]
    count = check_wset_total(R, sample, WSET_LIMIT)
    out = [
        Record(
            f"wset {args[0]}",
            PASS,
            f"selection total at arity {R.n + 1} on {count} tuples",
            fields={"ring": args[0], "arity": R.n + 1, "tuples": count},
        )
    ]
    if R.n >= 2:
        cert = weight(R)
        ok = cert.verify(R)
        out.append(
            Record(
                f"wset-refutation {args[0]}",
                PASS if ok else FAIL,
                f"arity {R.n} refuted: no entry of {_tup(cert.lower_witness)} lies in the span of the others",
                fields={"ring": args[0], "arity": R.n, "witness": _tup(cert.lower_witness)},
            )
        )
    return out


def cmd_ideals(ctx: Context, args) -> list[Record]:
    _arity(args, 1, 1, "ideals RING")
    R = ctx.ring(args[0])
    ms = maximal_ideals(R)
    j = jacobson_witness(R)
    ok = all(m.contains(j) for m in ms) and all(not m.contains(R.field.one()) for m in ms)
    names = ", ".join(f"m[{ctx.vname(m.valuation)}]" for m in ms)
    return [
        Record(
            f"ideals {args[0]}",
            PASS if ok else FAIL,
            f"{len(ms)} maximal ideal{'s' if len(ms) != 1 else ''}: {names}",
            fields={"ring": args[0], "count": len(ms)},
        )
    ]


def cmd_jacobson(ctx: Context, args) -> list[Record]:
    _arity(args, 1, 1, "jacobson RING")
    R = ctx.ring(args[0])
    j = jacobson_witness(R)
    vec = R.valvec(j)
    ok = all(c > 0 for c in vec)
    return [
        Record(
            f"jacobson {args[0]}",
            PASS if ok else FAIL,
            f"{render(j)} lies in every maximal ideal, value vector {_vec(vec)}",
            fields={"ring": args[0], "witness": render(j), "vector": _vec(vec)},
        )
    ]


def cmd_selectors(ctx: Context, args) -> list[Record]:
    _arity(args, 2, 2, "selectors RING VAL")
    R = ctx.ring(args[0])
    k = ctx.valuation_index(R, args[1])
    sels = crt_selectors(R, k)
    order = sorted(sels, key=lambda s: (len(s), sorted(s)))
    lines = []
    for S in order:
        label = "{" + ", ".join(ctx.vname(R.valuations[i]) for i in sorted(S)) + "}"
        lines.append(f"a_{label} = {render(sels[S])}")
    return [
        Record(
            f"selectors {args[0]} {args[1]}",
            PASS,
            f"{len(sels)} selectors",
            "\n".join(lines),
            {"ring": args[0], "ideal": args[1], "count": len(sels)},
        )
    ]


def cmd_localize(ctx: Context, args) -> list[Record]:
    _arity(args, 2, None, "localize RING VAL [x ...]")
    R = ctx.ring(args[0])
    k = ctx.valuation_index(R, args[1])
    sels = crt_selectors(R, k)
    if len(args) > 2:
        out = []
        for a in args[2:]:
            x = ctx.element(a)
            S = localization_search(R, k, x, sels)
            unit = localization_member(R, k, x, sels)
            label = "none" if S is None else "{" + ", ".join(ctx.vname(R.valuations[i]) for i in sorted(S)) + "}"
            out.append(
                Record(
                    f"localize {args[0]} {args[1]} {a}",
                    PASS,
                    f"{'outside' if unit else 'inside'} the maximal ideal; selector set {label}",
                    fields={"ring": args[0], "x": a, "unit": unit, "selector": label},
                )
            )
        return out
    elems = [x for x in ctx.universe() if R.contains(x)]
    agree = 0
    for x in elems:
        try:
            localization_member(R, k, x, sels)
            agree += 1
        except ConsistencyError:
            pass
    ok = agree == len(elems)
    return [
        Record(
            f"localize {args[0]} {args[1]}",
            PASS if ok else FAIL,
            f"selector test agrees with the valuation on {agree}/{len(elems)} elements",
            fields={"ring": args[0], "ideal": args[1], "agree": agree, "total": len(elems)},
        )
    ]


def cmd_dilworth(ctx: Context, args) -> list[Record]:
    _arity(args, 1, 1, "dilworth LATTICE")
    L = ctx.inst.lattice(args[0])
    elems = list(range(L.size))
    chains = dilworth_chains(elems, L.leq)
    detail = f"{len(chains)} chains"
    ok = sorted(x for c in chains for x in c) == elems
    fields = {"lattice": args[0], "chains": len(chains)}
    if L.size <= DILWORTH_BRUTE_LIMIT:
        rel = [[L.leq(a, b) for b in elems] for a in elems]
        width = len(max_antichain_bruteforce(rel))
        ok = ok and width == len(chains)
        detail += f", maximum antichain {width}"
        fields["antichain"] = width
    rendered = "; ".join("<".join(str(x) for x in c) for c in chains)
    return [Record(f"dilworth {args[0]}", PASS if ok else FAIL, detail, rendered, fields)]


def cmd_coembed(ctx: Context, args) -> list[Record]:
    _arity(args, 2, 2, "coembed X Y")
    objs, joint = [], []
    for a in args:
        if a in ctx.inst.rings:
            objs.append(ctx.ring(a))
            joint += [v for v in ctx.ring(a).valuations if v not in joint]
        else:
            vec, R = ctx.module(a)
            objs.append((vec, R))
            joint += [v for v in R.valuations if v not in joint]
    lifted = []
    for o in objs:
        if isinstance(o, MultiValRing):
            lifted.append(o)
            continue
        vec, R = o
        if vec.is_bottom:
            lifted.append(vec)
            continue
        pos = {v: i for i, v in enumerate(R.valuations)}
        lifted.append(ModuleVec(tuple(vec.gamma[pos[v]] if v in pos else float("-inf") for v in joint)))
    res = coembeddable(lifted[0], lifted[1], over=joint)
    name = f"coembed {args[0]} {args[1]}"
    if isinstance(res, Coembedding):
        return [
            Record(
                name,
                PASS,
                f"co-embeddable with a = {render(res.a)}, b = {render(res.b)}",
                fields={"a": render(res.a), "b": render(res.b)},
            )
        ]
    return [
        Record(
            name,
            FAIL,
            f"not co-embeddable: {res.reason}",
            fields={"component": ctx.vname(res.valuation)},
        )
    ]


def cmd_coarsenings(ctx: Context, args) -> list[Record]:
    _arity(args, 1, 1, "coarsenings RING")
    R = ctx.ring(args[0])
    rep = coarsening_report(R)
    names = ", ".join(v.descriptor() for v in rep.coarsenings)
    ok = rep.within_bounds and rep.count == R.n
    return [
        Record(
            f"coarsenings {args[0]}",
            PASS if ok else FAIL,
            f"{rep.count} V-topological coarsenings: {names}; bound 1..{R.n} respected",
            fields={"ring": args[0], "count": rep.count, "bound": f"1..{R.n}"},
        )
    ]


def cmd_classify(ctx: Context, args) -> list[Record]:
    _arity(args, 3, 3, "classify RING R1 R2")
    R, R1, R2 = (ctx.ring(a) for a in args)
    res = classify_pair(R, R1, R2)
    name = f"classify {' '.join(args)}"
    if isinstance(res, CommonVCoarsening):
        return [
            Record(
                name,
                PASS,
                f"dependent: common V-coarsening {res.valuation.descriptor()}",
                fields={"verdict": "dependent", "coarsening": res.valuation.descriptor()},
            )
        ]
    lines = [f"z = {render(w.z)} for (x, y, k) = ({render(w.x)}, {render(w.y)}, {_vec(w.precision)})" for w in res.witnesses]
    ok = len(res.witnesses) >= 5
    return [
        Record(
            name,
            PASS if ok else FAIL,
            f"independent: {len(res.witnesses)} approximation witnesses re-verified",
            "\n".join(lines),
            {"verdict": "independent", "witnesses": len(res.witnesses)},
        )
    ]


def cmd_vncheck(ctx: Context, args) -> list[Record]:
    _arity(args, 2, None, "vncheck RING q1 [q2 ...]")
    R = ctx.ring(args[0])
    qs = [ctx.element(a) for a in args[1:]]
    res = vn_check(R, qs, ctx.universe())
    label = _tup(qs)
    name = f"vncheck {args[0]} {label}"
    if res.passed:
        return [Record(name, PASS, f"holds on {res.checked} scope elements", fields={"checked": res.checked})]
    x = res.witness
    return [
        Record(
            name,
            FAIL,
            f"fails at x = {render(x)}",
            f"x = {render(x)} and every 1/(x - q) lie outside the ring",
            {"checked": res.checked, "witness": render(x)},
        )
    ]


def cmd_bump(ctx: Context, args) -> list[Record]:
    _arity(args, 2, 2, "bump RING SUPERRING")
    R, Rp = ctx.ring(args[0]), ctx.ring(args[1])
    rep = verify_bump(R, Rp)
    name = f"bump {args[0]} {args[1]}"
    if rep.branch == "coembeddable":
        ce = rep.coembedding
        return [
            Record(
                name,
                PASS,
                f"equal rings, co-embeddable with witnesses ({render(ce.a)}, {render(ce.b)})",
                fields={"branch": rep.branch, "a": render(ce.a), "b": render(ce.b)},
            )
        ]
    ok = rep.superring_weight <= rep.n - 1
    return [
        Record(
            name,
            PASS if ok else FAIL,
            f"W_{rep.n - 1} branch: weight of superring = {rep.superring_weight} <= {rep.n - 1}",
            fields={"branch": rep.branch, "weight": rep.superring_weight, "n": rep.n},
        )
    ]


def cmd_cuberank(ctx: Context, args) -> list[Record]:
    _arity(args, 1, 2, "cuberank LATTICE [strictCube|meetDrop|joinDrop|all]")
    L = ctx.inst.lattice(args[0])
    method = args[1] if len(args) > 1 else "all"
    L.check_modular()
    r = cube_rank(L, method)
    _, wit = strict_cube_rank(L)
    w = "" if wit is None else f"base {wit.base}, independent {_tup(wit.independent)}"
    how = "three characterizations agree" if method == "all" else method
    return [
        Record(
            f"cuberank {args[0]}",
            PASS,
            f"cube rank {r} ({how})",
            w,
            {"lattice": args[0], "rank": r, "method": method},
        )
    ]


def _golden_view(ctx: Context, R: MultiValRing) -> GoldenLatticeView:
    return GoldenLatticeView(R)


def cmd_golden(ctx: Context, args) -> list[Record]:
    _arity(args, 1, 1, "golden RING")
    R = ctx.ring(args[0])
    rep = golden_axioms(_golden_view(ctx, R), seed=ctx.seed)
    bad = rep.failed()
    detail = f"all five axioms hold, rank {rep.rank}" if not bad else "failed: " + ", ".join(bad)
    lines = [f"{k}: {'ok' if v.passed else 'FAILED'} {v.detail}".rstrip() for k, v in rep.results.items()]
    return [
        Record(
            f"golden {args[0]}",
            PASS if not bad else FAIL,
            detail,
            "\n".join(lines),
            {"ring": args[0], "rank": rep.rank, "failed": len(bad)},
        )
    ]


def cmd_guard(ctx: Context, args) -> list[Record]:
    _arity(args, 2, None, "guard RING MODULE [s1 s2 ...]")
    R = ctx.ring(args[0])
    A, RA = ctx.module(args[1], R)
    if RA != R:
        raise UsageError(f"module {args[1]} lives over another ring")
    V = _golden_view(ctx, R)
    S = [ctx.element(a) for a in args[2:]]
    res = check_guard(V, S, A)
    name = f"guard {args[0]} {args[1]} {_set(S)}"
    if res.guarded:
        return [Record(name, PASS, f"{_set(S)} guards {A}", fields={"guarded": True})]
    return [
        Record(
            name,
            FAIL,
            f"{_set(S)} does not guard {A}",
            f"counterexample {res.counterexample}: contains S but not A",
            {"guarded": False, "counterexample": str(res.counterexample)},
        )
    ]


def cmd_pedestal(ctx: Context, args) -> list[Record]:
    _arity(args, 1, 1, "pedestal RING")
    R = ctx.ring(args[0])
    V = _golden_view(ctx, R)
    ped = pedestal(V)
    S = guard_set(V, ped)
    ok = ped.check() and check_guard(V, S, ped.A).guarded
    return [
        Record(
            f"pedestal {args[0]}",
            PASS if ok else FAIL,
            f"pedestal {ped.A} with a strict {len(ped.cube)}-cube; guard set {_set(S)}",
            "cube " + ", ".join(str(B) for B in ped.cube),
            {"ring": args[0], "pedestal": str(ped.A), "guards": _set(S)},
        )
    ]


def cmd_semisimple(ctx: Context, args) -> list[Record]:
    _arity(args, 1, None, "semisimple ORDER [ORDER ...]")
    try:
        orders = tuple(int(a) for a in args)
    except ValueError:
        raise UsageError("semisimple takes cyclic factor orders, e.g. 'semisimple 2 4'") from None
    M = FinModule(orders)
    res = semisimple_subquotient(M)
    rank = submodule_cube_rank(M)
    ok = res.length == rank and M.is_semisimple_quotient(res.A, res.B)
    label = " + ".join(f"Z/{o}" for o in orders)
    return [
        Record(
            f"semisimple {label}",
            PASS if ok else FAIL,
            f"semisimple subquotient of length {res.length}; submodule cube rank {rank}",
            f"A has order {M.order_of(res.A)}, B has order {M.order_of(res.B)}",
            {"group": label, "length": res.length, "rank": rank},
        )
    ]


def _parse_sentence_ref(ctx: Context, text: str):
    """A named instance sentence, a builtin, or a builtin with parameters."""
    if text in ctx.inst.sentences:
        return text, ctx.inst.sentences[text][1], None
    gen = ctx.field.variable if not ctx.field.is_rational else "t"
    name, params = text, None
    if "(" in text and text.endswith(")"):
        name, inner = text[:-1].split("(", 1)
        parts = [p.strip() for p in inner.split(",") if p.strip()]
        if name == "Wn":
            if len(parts) != 1:
                raise UsageError("Wn takes one parameter")
            try:
                params = int(parts[0])
            except ValueError:
                raise UsageError(f"bad Wn parameter {parts[0]!r}") from None
        elif name == "Vn":
            params = [ctx.element(p) for p in parts]
        else:
            raise UsageError(f"{name} takes no parameters")
    if name not in BUILTIN_NAMES:
        raise UsageError(f"unknown sentence {text!r}")
    return text, builtin(name, params, gen), (name, params)


def _first_branch(node) -> list[str]:
    """Chosen instances down the failing branch, then the exhausted list."""
    out = []
    while node is not None:
        if node.kind in ("forall", "exists") and node.value is not None:
            out.append(f"{node.var} = {_render_value(node.value)}")
        if node.kind == "exists-none":
            out.append(f"no {node.var} among {node.note.split()[0]} candidates")
            kids = [c for c in node.children if c.kind == "candidate"]
            if kids:
                first = kids[0]
                inner = _first_branch(first.children[0] if first.children else None)
                out.append(f"e.g. {first.var} = {_render_value(first.value)}: " + ", ".join(inner))
            break
        node = node.children[0] if node.children else None
    return out


def _render_value(v) -> str:
    if isinstance(v, tuple) and len(v) == 2 and isinstance(v[0], FieldElem):
        return f"{render(v[0])}*R"
    return render(v) if isinstance(v, FieldElem) else str(v)


def cmd_check(ctx: Context, args) -> list[Record]:
    _arity(args, 2, None, "check SENTENCE RING [TAG=RING ...]")
    label, s, ref = _parse_sentence_ref(ctx, args[0])
    R = ctx.ring(args[1])
    st = standard_structure(R, ctx.inst.scale_height)
    for extra in args[2:]:
        if "=" not in extra:
            raise UsageError(f"expected TAG=RING, got {extra!r}")
        tag, rn = extra.split("=", 1)
        st.bases[tag] = ctx.ring(rn)
        st.__post_init__()
    res = evaluate(s, st)
    name = f"check {label} {args[1]}"
    fields = {"sentence": label, "ring": args[1], "verdict": res.verdict}
    if res.holds:
        return [Record(name, PASS, "holds on scope", fields=fields)]
    branch = _first_branch(res.witness)
    witness = "\n".join(branch)
    if ref is not None and ref[0] == "Wn" and ref[1] < R.n:
        cert = weight(R)
        if cert.verify(R):
            wt = _tup(cert.lower_witness)
            witness = f"certified witness {wt}: no entry lies in the span of the others\n" + witness
            fields["witness"] = wt
    return [Record(name, REFUTED, "refuted on scope; " + "; ".join(branch[:1]), witness, fields)]


COMMANDS: dict[str, Callable] = {
    "weight": cmd_weight,
    "wset": cmd_wset,
    "ideals": cmd_ideals,
    "jacobson": cmd_jacobson,
    "selectors": cmd_selectors,
    "localize": cmd_localize,
    "dilworth": cmd_dilworth,
    "coembed": cmd_coembed,
    "coarsenings": cmd_coarsenings,
    "classify": cmd_classify,
    "vncheck": cmd_vncheck,
    "bump": cmd_bump,
    "cuberank": cmd_cuberank,
    "golden": cmd_golden,
    "guard": cmd_guard,
    "pedestal": cmd_pedestal,
    "semisimple": cmd_semisimple,
    "check": cmd_check,
}


def run_command(inst: Instance, cmd, seed: int = 0, max_height: int | None = None) -> Report:
    """Run one command (a string or a token list) and collect its records."""
    tokens = cmd.split() if isinstance(cmd, str) else list(cmd)
    if not tokens:
        raise UsageError("empty command")
    name, args = tokens[0], tokens[1:]
    ctx = Context(inst, seed, max_height)
    if name == "suite":
        if args:
            raise UsageError("usage: suite")
        return verify_suite(inst, seed, max_height)
    if name not in COMMANDS:
        raise UsageError(f"unknown command {name!r}; known: {', '.join(list(COMMANDS) + ['suite'])}")
    return Report(COMMANDS[name](ctx, args))


# ---------------------------------------------------------------------------
# suite


def _q_valid(R: MultiValRing, qs) -> bool:
    # distinct residues at every valuation
    return all(val(v, a - b) == 0 for v in R.valuations for i, a in enumerate(qs) for b in qs[i + 1 :])


def _skip(name: str, why: str) -> Record:
    return Record(name, SKIP, why, fields={"reason": why})


def _guarded(fn, ctx, args, name) -> list[Record]:
    try:
        return fn(ctx, args)
    except WnError as exc:
        return [Record(name, FAIL, f"{type(exc).__name__}: {exc}")]


def _expect_refuted(records: list[Record]) -> list[Record]:
    # the predicted refutation is the expected outcome
    out = []
    for r in records:
        if r.verdict == REFUTED:
            out.append(Record("expect-" + r.name, PASS, "refuted on scope as the weight predicts", r.witness, r.fields))
        elif r.verdict == PASS:
            out.append(Record("expect-" + r.name, FAIL, "expected a refutation below the weight", r.witness, r.fields))
        else:
            out.append(r)
    return out


def verify_suite(inst: Instance, seed: int = 0, max_height: int | None = None) -> Report:
    """Every applicable check on every named ring, module and lattice."""
    if not inst.rings:
        raise PreconditionError("the suite needs at least one ring")
    ctx = Context(inst, seed, max_height)
    recs: list[Record] = []
    for rn, R in inst.rings.items():
        run = lambda fn, *a: recs.extend(_guarded(fn, ctx, [rn, *a], f"{fn.__name__[4:]} {rn}"))  # noqa: E731
        run(cmd_weight)
        run(cmd_wset)
        if R.n == 1:
            recs.append(Record(f"W1-certification {rn}", PASS, "valuation ring: selection total at arity 2"))
        run(cmd_ideals)
        run(cmd_jacobson)
        run(cmd_coarsenings)
        for vn in [inst.valuation_name(v) for v in R.valuations]:
            run(cmd_localize, vn)
        if R.n >= 2:
            run(cmd_selectors, inst.valuation_name(R.valuations[0]))
        else:
            recs.append(_skip(f"selectors {rn}", "single valuation: no proper selector sets"))
        supers = [S for S in inst.rings.values() if set(S.valuations) < set(R.valuations)]
        if R.n >= 2:
            recs.extend(_guarded(_bump_drop, ctx, [rn], f"bump {rn}"))
            recs.extend(_guarded(_classify_pair_checks, ctx, [rn], f"classify {rn}"))
        else:
            recs.append(_skip(f"bump {rn}", "single valuation: no strict coarsening"))
            recs.append(_skip(f"classify {rn}", "single valuation: no pair of coarsenings"))
        for S in supers:
            run(cmd_bump, inst.ring_name(S))
        run(cmd_golden)
        run(cmd_pedestal)
        qs = [R.field.element(i) for i in range(R.n)]
        if _q_valid(R, qs):
            run(cmd_vncheck, *[render(q) for q in qs])
        else:
            recs.append(_skip(f"vncheck {rn}", f"q = 0..{R.n - 1} collide in some residue field"))
        for sname in list(RING_TOPOLOGY) + [f"Wn({R.n})"] + list(inst.sentences):
            recs.extend(_guarded(cmd_check, ctx, [sname, rn], f"check {sname} {rn}"))
        if R.n >= 2:
            below = f"Wn({R.n - 1})"
            recs.extend(_expect_refuted(_guarded(cmd_check, ctx, [below, rn], f"check {below} {rn}")))
    for mn, m in inst.modules.items():
        recs.extend(_guarded(cmd_coembed, ctx, [mn, m.ring], f"coembed {mn} {m.ring}"))
    for ln, L in inst.lattices.items():
        recs.extend(_guarded(cmd_dilworth, ctx, [ln], f"dilworth {ln}"))
        if _modular(L):
            recs.extend(_guarded(cmd_cuberank, ctx, [ln], f"cuberank {ln}"))
        else:
            recs.append(_skip(f"cuberank {ln}", "lattice is not modular"))
    rep = Report(recs)
    c = rep.counts()
    rep.summary = (
        f"suite: {len(recs)} checks, {c[PASS]} PASS, {c[FAIL]} FAIL, {c[REFUTED]} {REFUTED}, {c[SKIP]} SKIP"
    )
    return rep


def _modular(L) -> bool:
    try:
        L.check_modular()
    except WnError:
        return False
    return True


def _bump_drop(ctx: Context, args) -> list[Record]:
    """Weight drop for the coarsenings that forget one valuation."""
    R = ctx.ring(args[0])
    out = []
    for i in range(R.n):
        Rp = R.sub_ring([j for j in range(R.n) if j != i])
        rep = verify_bump(R, Rp)
        ok = rep.branch == "lower-weight" and rep.superring_weight == R.n - 1
        out.append(
            Record(
                f"bump-drop {args[0]} -{ctx.vname(R.valuations[i])}",
                PASS if ok else FAIL,
                f"W_{R.n - 1} branch: weight {rep.superring_weight} after dropping {R.valuations[i].descriptor()}",
                fields={"weight": rep.superring_weight},
            )
        )
    return out


def _classify_pair_checks(ctx: Context, args) -> list[Record]:
    """A disjoint split (independent) and an overlapping pair (dependent)."""
    R = ctx.ring(args[0])
    first = R.sub_ring([0])
    rest = R.sub_ring(range(1, R.n))
    out = []
    res = classify_pair(R, first, rest)
    ok = not isinstance(res, CommonVCoarsening) and len(res.witnesses) >= 5
    out.append(
        Record(
            f"classify-disjoint {args[0]}",
            PASS if ok else FAIL,
            f"{first} and {rest}: independent with {len(getattr(res, 'witnesses', []))} witnesses",
        )
    )
    res = classify_pair(R, R, first)
    ok = isinstance(res, CommonVCoarsening)
    out.append(
        Record(
            f"classify-overlap {args[0]}",
            PASS if ok else FAIL,
            f"{R} and {first}: common V-coarsening {getattr(res, 'valuation', '?')}",
        )
    )
    return out
