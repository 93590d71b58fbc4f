"""Array evaluation of element-quantifier blocks with membership bodies.

A block is a run of ``forallE``/``existsE`` over the whole scope whose body
is quantifier-free and built from membership atoms with monomial terms
(products, quotients and powers of variables and literals).  Such a body is
decided by value vectors alone, because v(ab) = v(a) + v(b), so the block is
evaluated on all scope tuples at once.  Everything free in the block enters
only through per-summand offset vectors, which also serve as the memo key.
"""

from __future__ import annotations

import numpy as np

from ..valuation import INF
from .syntax import SCOPE, And, BinOp, ElemAll, ElemEx, Gen, Implies, Lit, Mem, Neg, Not, Or, Pow, Var

MAX_CELLS = 3_000_000
# small-integer arithmetic; sentinels stand in for +inf / -inf bounds
DT = np.int16
BIG = 30000
MAX_ABS = 1000


class _NotMonomial(Exception):
    pass


def _monomial(t, exp: int = 1, acc=None) -> dict:
    """Exponent map {("var", name) | ("lit", value) | ("gen", name): exponent}."""
    acc = {} if acc is None else acc
    if isinstance(t, Var):
        key = ("var", t.name)
    elif isinstance(t, Lit):
        key = ("lit", t.value)
    elif isinstance(t, Gen):
        key = ("gen", t.name)
    elif isinstance(t, Neg):
        return _monomial(t.arg, exp, acc)
    elif isinstance(t, Pow):
        return _monomial(t.base, exp * t.exp, acc)
    elif isinstance(t, BinOp) and t.op in ("*", "/"):
        _monomial(t.left, exp, acc)
        return _monomial(t.right, -exp if t.op == "/" else exp, acc)
    else:
        raise _NotMonomial
    # keep occurrences separate so that 0^1 * 0^-1 stays undefined
    acc.setdefault(key, []).append(exp)
    return acc


class Block:
    """Compiled block; ``None`` from ``compile_block`` means not eligible."""

    def __init__(self, quants, body, atoms):
        self.quants = quants  # list of (var, universal)
        self.bound = [v for v, _ in quants]
        self.body = body
        self.atoms = atoms  # list of (term_mono, [(coef_mono | None, nbhd_var)])
        self.memo: dict = {}


def compile_block(f):
    quants = []
    g = f
    while isinstance(g, (ElemAll, ElemEx)) and g.scope == SCOPE:
        quants.append((g.var, isinstance(g, ElemAll)))
        g = g.body
    if not quants:
        return None
    atoms = []
    try:
        _collect(g, atoms)
    except _NotMonomial:
        return None
    return Block(quants, g, atoms)


def _collect(g, atoms):
    if isinstance(g, Mem):
        term = _monomial(g.term)
        summands = [(None if s.coef is None else _monomial(s.coef), s.var) for s in g.nbhd]
        atoms.append((term, summands))
    elif isinstance(g, Not):
        _collect(g.arg, atoms)
    elif isinstance(g, (And, Or, Implies)):
        _collect(g.left, atoms)
        _collect(g.right, atoms)
    else:
        raise _NotMonomial


class BlockRunner:
    def __init__(self, evaluator):
        self.E = evaluator
        self.n = evaluator.n
        # universal binders use the element scope, existential ones the witness scope
        self.tiers = {True: self._arrays(evaluator.st.elem_scope), False: self._arrays(evaluator.st.witness_scope)}

    def _arrays(self, scope):
        # the body sees only value vectors, so equal vectors are one instance
        rows = sorted({self.E.vv(x) for x in scope})
        zero = np.array([r[0] == INF for r in rows], bool)
        fin = np.array([[0 if r[0] == INF else c for c in r] for r in rows], dtype=np.int64).reshape(len(rows), self.n)
        if fin.size and np.abs(fin).max() > MAX_ABS:
            raise OverflowError("valuation too large for the array path")
        return zero, fin.astype(DT)

    def _shape(self, block: Block) -> tuple:
        return tuple(len(self.tiers[u][0]) for _, u in block.quants)

    def eligible(self, block: Block) -> bool:
        return int(np.prod(self._shape(block))) * self.n <= MAX_CELLS

    def _const_part(self, mono, env, bound):
        """Offset vector, zero flag and undefined flag for the free factors."""
        off = np.zeros(self.n, dtype=np.int64)
        zero = undefined = False
        for key, exps in mono.items():
            if key[0] == "var" and key[1] in bound:
                continue
            if key[0] == "var":
                v = self.E.vv(env[key[1]])
            elif key[0] == "lit":
                v = self.E.vv(self.E.st.field.element(key[1]))
            else:
                v = self.E.vv(self.E.gen)
            for e in exps:
                if v[0] == INF:
                    if e < 0:
                        undefined = True
                    elif e > 0:
                        zero = True
                else:
                    off += e * np.array(v, dtype=np.int64)
        return off, zero, undefined

    def run(self, block: Block, env) -> bool:
        bound = set(block.bound)
        k = len(block.bound)
        keyparts = []
        compiled = []
        for term, summands in block.atoms:
            t_off, t_zero, t_undef = self._const_part(term, env, bound)
            parts = []
            for coef, U in summands:
                gamma = np.array([-BIG if g == -INF else g for g in env[U]], dtype=np.int64)
                if coef is None:
                    parts.append((None, gamma, False, False))
                    keyparts.append(("s", tuple(gamma), False, False))
                    continue
                off, z, u = self._const_part(coef, env, bound)
                parts.append((coef, off + gamma, z, u))
                keyparts.append(("s", tuple(off + gamma), z, u))
            keyparts.append(("t", tuple(t_off), t_zero, t_undef))
            compiled.append((term, t_off, t_zero, t_undef, parts))
        key = tuple(keyparts)
        hit = block.memo.get(key)
        if hit is not None:
            return hit
        truth = self._evaluate(block, compiled, k)
        block.memo[key] = truth
        return truth

    def _bound_part(self, mono, bound_index, shape, cache):
        """Broadcast arrays: finite vector sum, zero mask, undefined mask."""
        ckey = tuple(sorted((key, tuple(e)) for key, e in mono.items() if key[0] == "var" and key[1] in bound_index))
        hit = cache.get(ckey)
        if hit is not None:
            return hit
        k = len(shape)
        vec = np.zeros(shape + (self.n,), dtype=DT)
        zero = np.zeros(shape, bool)
        undef = np.zeros(shape, bool)
        for key, exps in mono.items():
            if key[0] != "var" or key[1] not in bound_index:
                continue
            axis, universal = bound_index[key[1]]
            view = [1] * k
            view[axis] = shape[axis]
            zero_col, fin_col = self.tiers[universal]
            fin = fin_col.reshape(view + [self.n])
            z = zero_col.reshape(view)
            for e in exps:
                vec = vec + DT(e) * fin
                if e > 0:
                    zero = zero | z
                elif e < 0:
                    undef = undef | z
        cache[ckey] = (vec, zero, undef)
        return vec, zero, undef

    def _evaluate(self, block: Block, compiled, k: int) -> bool:
        index = {v: (i, u) for i, (v, u) in enumerate(block.quants)}
        shape = self._shape(block)
        cache = block.__dict__.setdefault("parts", {})
        values = []
        for term, t_off, t_zero, t_undef, parts in compiled:
            if t_undef:
                values.append(np.zeros(shape, bool))
                continue
            xv, xz, xu = self._bound_part(term, index, shape, cache)
            xv = xv + t_off.astype(DT)
            xz = xz | t_zero
            bound = None
            undef = xu
            for coef, off, z, u in parts:
                if u:
                    undef = np.ones_like(undef)
                    continue
                if coef is None:
                    b = np.broadcast_to(off.astype(DT), xv.shape)
                    excl = np.zeros(xz.shape, bool) | z
                else:
                    cv, cz, cu = self._bound_part(coef, index, shape, cache)
                    undef = undef | cu
                    excl = cz | z
                    b = cv + np.clip(off, -BIG, BIG).astype(DT)
                b = np.where(excl[..., None], DT(BIG), b)
                bound = b if bound is None else np.minimum(bound, b)
            if bound is None:
                member = xz
            else:
                member = xz | (xv >= bound).all(axis=-1)
            values.append(member & ~undef)
        it = iter(values)
        arr = _combine(block.body, it)
        for axis in range(k - 1, -1, -1):
            arr = arr.all(axis=axis) if block.quants[axis][1] else arr.any(axis=axis)
        return bool(arr)


def _combine(g, it):
    if isinstance(g, Mem):
        return next(it)
    if isinstance(g, Not):
        return ~_combine(g.arg, it)
    left = _combine(g.left, it)
    right = _combine(g.right, it)
    if isinstance(g, And):
        return left & right
    if isinstance(g, Or):
        return left | right
    return ~left | right
