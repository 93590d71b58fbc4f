"""Occurrence polarity of neighborhood variables.

A membership atom ``t in ... U ...`` is a positive occurrence of U; ``not``
and the antecedent of ``->`` flip polarity.  The element binder
``forallE x in V`` reads as ``forall x (x in V -> ...)`` and so is a
negative occurrence of V; ``existsE y in U`` reads as
``exists y (y in U and ...)`` and is a positive one.  Universally bound
neighborhood variables may occur only positively, existentially bound
ones only negatively.
"""

from __future__ import annotations

from dataclasses import dataclass

from .syntax import (
    SCOPE,
    And,
    ConstEx,
    ElemAll,
    ElemEx,
    Eq,
    Formula,
    Implies,
    Mem,
    NbhdAll,
    NbhdEx,
    Neq,
    Not,
    Or,
    print_sentence,
)


@dataclass(frozen=True)
class Violation:
    var: str
    binder: str  # "forallN" or "existsN"
    polarity: str  # polarity of the offending occurrence
    path: tuple  # binder and connective labels from the root to the occurrence

    def render(self) -> str:
        return f"{self.binder} {self.var} occurs {self.polarity}ly at " + " / ".join(self.path)


@dataclass(frozen=True)
class PolarityOk:
    occurrences: tuple  # (var, polarity) pairs in traversal order

    def __bool__(self):
        return True


def _label(f: Formula) -> str:
    if isinstance(f, NbhdAll):
        return f"forallN {f.var}"
    if isinstance(f, NbhdEx):
        return f"existsN {f.var}"
    if isinstance(f, ElemAll):
        return f"forallE {f.var} in {f.scope}"
    if isinstance(f, ElemEx):
        return f"existsE {f.var} in {f.scope}"
    if isinstance(f, ConstEx):
        return f"existsC {f.var}"
    if isinstance(f, (Mem, Eq, Neq)):
        return print_sentence(f)
    return type(f).__name__.lower()


def check_polarity(s: Formula):
    """PolarityOk, or the first Violation in left-to-right order."""
    occurrences = []
    binders: dict[str, str] = {}

    def occur(var, positive, path):
        pol = "positive" if positive else "negative"
        occurrences.append((var, pol))
        kind = binders[var]
        if (kind == "forallN") != positive:
            return Violation(var, kind, pol, path)
        return None

    def walk(f, positive, path):
        path = path + (_label(f),)
        if isinstance(f, Mem):
            for sc in f.nbhd:
                v = occur(sc.var, positive, path)
                if v:
                    return v
            return None
        if isinstance(f, (Eq, Neq)):
            return None
        if isinstance(f, Not):
            return walk(f.arg, not positive, path)
        if isinstance(f, (And, Or)):
            return walk(f.left, positive, path) or walk(f.right, positive, path)
        if isinstance(f, Implies):
            return walk(f.left, not positive, path) or walk(f.right, positive, path)
        if isinstance(f, (NbhdAll, NbhdEx)):
            binders[f.var] = "forallN" if isinstance(f, NbhdAll) else "existsN"
            return walk(f.body, positive, path)
        if isinstance(f, (ElemAll, ElemEx)):
            if f.scope != SCOPE:
                # forallE binder is a negative occurrence, existsE a positive one
                v = occur(f.scope, positive == isinstance(f, ElemEx), path)
                if v:
                    return v
            return walk(f.body, positive, path)
        if isinstance(f, ConstEx):
            return walk(f.body, positive, path)
        raise TypeError(f"not a formula: {f!r}")

    bad = walk(s, True, ())
    return bad if bad is not None else PolarityOk(tuple(occurrences))
