"""Instance files: a field, named valuations, rings, modules, lattices, sentences.

One declaration per line::

    field Q                      # or: field F5 t
    val v2 = padic 2
    ring R = intersect(v2, v3)
    module M = vec(1, 0) over R
    lattice L = elements 4 cover 0 1 cover 0 2 cover 1 3 cover 2 3
    scope height 16 scale-height 64
    sentence S = "forallN U . existsE x in U . x != 0"
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from ..errors import ParseError, PreconditionError, WnError
from ..exactfield import QQ, FieldDesc, is_prime, rational_functions
from ..lattice import FinLattice
from ..localsent import parse_sentence
from ..multival import ModuleVec, MultiValRing
from ..valuation import Valuation, parse_valuation

DEFAULT_HEIGHT = 16
DEFAULT_SCALE_HEIGHT = 64

_IDENT = r"[A-Za-z_][A-Za-z0-9_']*"
_FIELD = re.compile(r"field\s+(?:(Q)|F\s*(\d+)\s*\(?\s*([a-z])\s*\)?)$")
_VAL = re.compile(rf"val\s+({_IDENT})\s*=\s*(.+)$")
_RING = re.compile(rf"ring\s+({_IDENT})\s*=\s*intersect\s*\((.*)\)$")
_MODULE = re.compile(rf"module\s+({_IDENT})\s*=\s*vec\s*\((.*)\)\s*over\s+({_IDENT})$")
_LATTICE = re.compile(rf"lattice\s+({_IDENT})\s*=\s*elements\s+(\d+)((?:\s+cover\s+\d+\s+\d+)*)$")
_SCOPE = re.compile(r"scope\s+height\s+(\d+)\s+scale-height\s+(\d+)$")
_SENTENCE = re.compile(rf"sentence\s+({_IDENT})\s*=\s*\"(.*)\"$")


@dataclass
class Module:
    vec: ModuleVec
    ring: str


@dataclass
class Instance:
    field: FieldDesc | None = None
    valuations: dict = dc_field(default_factory=dict)  # name -> Valuation
    rings: dict = dc_field(default_factory=dict)  # name -> MultiValRing
    modules: dict = dc_field(default_factory=dict)  # name -> Module
    lattices: dict = dc_field(default_factory=dict)  # name -> FinLattice
    sentences: dict = dc_field(default_factory=dict)  # name -> (text, Sentence)
    height: int = DEFAULT_HEIGHT
    scale_height: int = DEFAULT_SCALE_HEIGHT

    def names(self) -> set:
        return set(self.valuations) | set(self.rings) | set(self.modules) | set(self.lattices) | set(self.sentences)

    def ring(self, name: str) -> MultiValRing:
        if name not in self.rings:
            raise PreconditionError(f"unknown ring {name!r}")
        return self.rings[name]

    def lattice(self, name: str) -> FinLattice:
        if name not in self.lattices:
            raise PreconditionError(f"unknown lattice {name!r}")
        return self.lattices[name]

    def ring_name(self, R: MultiValRing) -> str:
        for k, v in self.rings.items():
            if v == R:
                return k
        return R.descriptor()

    def valuation_name(self, v: Valuation) -> str:
        for k, w in self.valuations.items():
            if w == v:
                return k
        return v.descriptor()


class InstanceError(ParseError):
    """Instance text rejected; ``line`` is 1-based."""

    def __init__(self, message: str, line: int):
        self.line = line
        WnError.__init__(self, f"line {line}: {message}")
        self.position = None
        self.text = None


def parse_instance(text: str) -> Instance:
    inst = Instance()
    seen_scope = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw).strip()
        if not line:
            continue
        try:
            seen_scope = _declare(inst, line, seen_scope)
        except InstanceError:
            raise
        except WnError as exc:
            raise InstanceError(str(exc), lineno) from None
    return inst


def _strip_comment(line: str) -> str:
    # '#' inside a quoted sentence is kept
    out, quoted = [], False
    for ch in line:
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            break
        out.append(ch)
    return "".join(out)


def _fresh(inst: Instance, name: str):
    if name in inst.names():
        raise PreconditionError(f"duplicate name {name!r}")


def _need_field(inst: Instance) -> FieldDesc:
    if inst.field is None:
        raise PreconditionError("declare the field first")
    return inst.field


def _declare(inst: Instance, line: str, seen_scope: bool) -> bool:
    head = line.split(None, 1)[0]
    if head == "field":
        m = _FIELD.match(line)
        if not m:
            raise ParseError("expected 'field Q' or 'field F<p> t'", 0, line)
        if inst.field is not None:
            raise PreconditionError("field declared twice")
        if m.group(1):
            inst.field = QQ
        else:
            p = int(m.group(2))
            if not is_prime(p):
                raise PreconditionError(f"{p} is not prime")
            inst.field = rational_functions(p, m.group(3))
    elif head == "val":
        m = _VAL.match(line)
        if not m:
            raise ParseError("expected 'val NAME = SPEC'", 0, line)
        name = m.group(1)
        _fresh(inst, name)
        v = parse_valuation(m.group(2), _need_field(inst))
        for other, w in inst.valuations.items():
            if w == v:
                raise PreconditionError(f"valuation {name} repeats {other}")
        inst.valuations[name] = v
    elif head == "ring":
        m = _RING.match(line)
        if not m:
            raise ParseError("expected 'ring NAME = intersect(v, ...)'", 0, line)
        name = m.group(1)
        _fresh(inst, name)
        refs = [r.strip() for r in m.group(2).split(",")]
        if not refs or any(not r for r in refs):
            raise ParseError("empty valuation list", 0, line)
        if len(set(refs)) != len(refs):
            raise PreconditionError("duplicate valuation in ring")
        for r in refs:
            if r not in inst.valuations:
                raise PreconditionError(f"unknown valuation {r!r}")
        inst.rings[name] = MultiValRing(tuple(inst.valuations[r] for r in refs))
    elif head == "module":
        m = _MODULE.match(line)
        if not m:
            raise ParseError("expected 'module NAME = vec(k, ...) over RING'", 0, line)
        name, body, ring = m.groups()
        _fresh(inst, name)
        if ring not in inst.rings:
            raise PreconditionError(f"unknown ring {ring!r}")
        try:
            gamma = tuple(int(c) for c in body.split(","))
        except ValueError:
            raise ParseError("vector entries must be integers", 0, line) from None
        if len(gamma) != inst.rings[ring].n:
            raise PreconditionError(f"vector length {len(gamma)} does not match ring {ring}")
        inst.modules[name] = Module(ModuleVec(gamma), ring)
    elif head == "lattice":
        m = _LATTICE.match(line)
        if not m:
            raise ParseError("expected 'lattice NAME = elements N cover i j ...'", 0, line)
        name = m.group(1)
        _fresh(inst, name)
        n = int(m.group(2))
        nums = [int(x) for x in re.findall(r"\d+", m.group(3))]
        covers = list(zip(nums[::2], nums[1::2]))
        for i, j in covers:
            if not (0 <= i < n and 0 <= j < n):
                raise PreconditionError(f"cover {i} {j} refers to a missing element")
        inst.lattices[name] = FinLattice.from_covers(n, covers, check_modular=False)
    elif head == "scope":
        m = _SCOPE.match(line)
        if not m:
            raise ParseError("expected 'scope height H scale-height S'", 0, line)
        if seen_scope:
            raise PreconditionError("scope declared twice")
        inst.height, inst.scale_height = int(m.group(1)), int(m.group(2))
        if inst.height < 1 or inst.scale_height < 1:
            raise PreconditionError("scope bounds must be positive")
        return True
    elif head == "sentence":
        m = _SENTENCE.match(line)
        if not m:
            raise ParseError('expected \'sentence NAME = "..."\'', 0, line)
        name = m.group(1)
        _fresh(inst, name)
        gen = inst.field.variable if inst.field is not None and not inst.field.is_rational else "t"
        inst.sentences[name] = (m.group(2), parse_sentence(m.group(2), gen))
    else:
        raise ParseError(f"unknown declaration {head!r}", 0, line)
    return seen_scope
