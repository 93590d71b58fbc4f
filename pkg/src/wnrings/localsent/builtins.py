"""Named local sentences: topology axioms, W_n, V^n and independence."""

from __future__ import annotations

from typing import Sequence

from ..errors import PreconditionError
from ..exactfield import FieldElem, render
from .polarity import Violation, check_polarity
from .syntax import MAX_SUMMANDS, Sentence, parse_sentence

_FIXED = {
    "nondiscreteness": "forallN U . existsE x in U . x != 0",
    "hausdorff": "forallE x in Scope . x != 0 -> existsN V . not (x in V)",
    "subtraction-continuity": "forallN U . existsN V . forallE x in V . forallE y in V . x - y in U",
    "scalar-continuity": "forallE a in Scope . forallN U . existsN V . forallE x in V . a*x in U",
    "multiplication-continuity": "forallN U . existsN V . forallE x in V . forallE y in V . x*y in U",
    "local-boundedness": "existsN U . forallN V . existsC c . forallE x in U . c*x in V",
    "field-topology": "forallN U . existsN V . forallE x in V . existsE y in U . (1+x)*(1+y) = 1",
    "division-continuity": "forallN U . existsN V . forallE x in V . 1/(1+x) - 1 in U",
    "independence": "forallN U@A . forallN V@B . forallE x in Scope . x in U + V",
}

RING_TOPOLOGY = (
    "nondiscreteness",
    "hausdorff",
    "subtraction-continuity",
    "scalar-continuity",
    "multiplication-continuity",
    "local-boundedness",
)
NAMES = tuple(_FIXED) + ("Wn", "Vn")


def wn_text(n: int) -> str:
    """∀U ∃c ∀x_1..x_{n+1}: some x_i lies in the sum of c·x_j·U over j != i."""
    if not isinstance(n, int) or n < 1:
        raise PreconditionError("Wn needs n >= 1")
    if n > MAX_SUMMANDS:
        raise PreconditionError(f"Wn supports n <= {MAX_SUMMANDS}")
    xs = [f"x{i}" for i in range(1, n + 2)]
    quants = " ".join(f"forallE {x} in Scope ." for x in xs)
    disj = []
    for i, x in enumerate(xs):
        terms = " + ".join(f"c*{y}*U" for j, y in enumerate(xs) if j != i)
        disj.append(f"{x} in {terms}")
    return f"forallN U . existsC c . {quants} " + " or ".join(disj)


def vn_text(qs: Sequence[FieldElem]) -> str:
    """∀U ∃c ∀x: x ∈ cU or some 1/(x - q_i) ∈ cU, for the fixed q_i."""
    qs = list(qs)
    if not qs:
        raise PreconditionError("Vn needs at least one q")
    if len(set(qs)) != len(qs):
        raise PreconditionError("Vn needs distinct q values")
    parts = ["x in c*U"] + [f"1/(x - ({render(q)})) in c*U" for q in qs]
    return "forallN U . existsC c . forallE x in Scope . " + " or ".join(parts)


def builtin(name: str, params=None, generator: str = "t") -> Sentence:
    """The named sentence as an AST; polarity is checked before returning."""
    if name in _FIXED:
        if params not in (None, (), []):
            raise PreconditionError(f"{name} takes no parameters")
        text = _FIXED[name]
    elif name == "Wn":
        text = wn_text(params)
    elif name == "Vn":
        text = vn_text(params)
    else:
        raise PreconditionError(f"unknown builtin {name!r}")
    s = parse_sentence(text, generator)
    pol = check_polarity(s)
    if isinstance(pol, Violation):
        raise PreconditionError(f"builtin {name} violates polarity: {pol.render()}")
    return s
