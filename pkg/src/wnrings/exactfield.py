"""Exact arithmetic in Q and F_p(t).

Elements are immutable and always stored in canonical form: the numerator and
denominator are coprime, the denominator of a rational is positive, and the
denominator of a rational function is monic.  Equality of canonical forms is
field equality, so elements hash and compare structurally.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Iterable, Sequence

from .errors import FieldMismatchError, ParseError, PreconditionError

__all__ = [
    "FieldDesc",
    "Poly",
    "FieldElem",
    "QQ",
    "rational_functions",
    "parse_element",
    "arith",
    "render",
    "sample_universe",
    "height_universe",
    "is_prime",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


@dataclass(frozen=True)
class FieldDesc:
    """Descriptor of a ground field: ``Q`` or ``F_p(t)``."""

    kind: str  # "Q" or "Fpt"
    characteristic: int = 0
    variable: str = "t"

    def __post_init__(self):
        if self.kind not in ("Q", "Fpt"):
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == "Fpt" and not is_prime(self.characteristic):
            raise ValueError(f"characteristic {self.characteristic} is not prime")
        if self.kind == "Q" and self.characteristic != 0:
            raise ValueError("Q has characteristic 0")

    @property
    def is_rational(self) -> bool:
        return self.kind == "Q"

    # constructors ---------------------------------------------------------

    def element(self, num, den=1) -> "FieldElem":
        if self.is_rational:
            return FieldElem.make(self, int(num), int(den))
        return FieldElem.make(self, self._poly(num), self._poly(den))

    def _poly(self, value) -> "Poly":
        if isinstance(value, Poly):
            if value.p != self.characteristic:
                raise FieldMismatchError("polynomial over wrong prime field")
            return value
        if isinstance(value, int):
            return Poly.const(value, self.characteristic)
        return Poly(tuple(value), self.characteristic)

    def zero(self) -> "FieldElem":
        return self.element(0)

    def one(self) -> "FieldElem":
        return self.element(1)

    def gen(self) -> "FieldElem":
        """The transcendental t of F_p(t)."""
        if self.is_rational:
            raise FieldMismatchError("Q has no polynomial variable")
        return self.element(Poly.x(self.characteristic))

    def units(self) -> list["FieldElem"]:
        """Unit multiples adjoined to sample universes."""
        if self.is_rational:
            return [self.element(1), self.element(-1)]
        return [self.element(c) for c in range(1, self.characteristic)]

    def __str__(self):
        return "Q" if self.is_rational else f"F{self.characteristic}({self.variable})"


QQ = FieldDesc("Q")


def rational_functions(p: int, variable: str = "t") -> FieldDesc:
    return FieldDesc("Fpt", p, variable)


# ---------------------------------------------------------------------------
# polynomials over F_p


@total_ordering
class Poly:
    """Dense polynomial over F_p, coefficients stored low degree first."""

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs: Sequence[int], p: int):
        cs = [c % p for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self.p = p

    @classmethod
    def const(cls, c: int, p: int) -> "Poly":
        return cls((c,), p)

    @classmethod
    def x(cls, p: int) -> "Poly":
        return cls((0, 1), p)

    @classmethod
    def monomial(cls, c: int, d: int, p: int) -> "Poly":
        return cls((0,) * d + (c,), p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_monic(self) -> bool:
        return self.lead == 1

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(pow(self.lead, -1, self.p))

    def scale(self, c: int) -> "Poly":
        return Poly([a * c for a in self.coeffs], self.p)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Poly([x + y for x, y in zip(a, b)], self.p)

    def __neg__(self) -> "Poly":
        return self.scale(-1)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        if self.is_zero() or other.is_zero():
            return Poly((), self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out, self.p)

    def __pow__(self, e: int) -> "Poly":
        result = Poly.const(1, self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __divmod__(self, other: "Poly"):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly((), p), self
        inv = pow(other.lead, -1, p)
        quo = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + len(other.coeffs) - 1] * inv % p
            quo[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] = (rem[k + j] - c * b) % p
        return Poly(quo, p), Poly(rem, p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __eq__(self, other):
        return isinstance(other, Poly) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.coeffs, self.p))

    def sort_key(self):
        return (self.degree, tuple(reversed(self.coeffs)))

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def render(self, var: str = "t") -> str:
        if self.is_zero():
            return "0"
        parts = []
        for d in range(self.degree, -1, -1):
            c = self.coeffs[d]
            if not c:
                continue
            if d == 0:
                mono = str(c)
            else:
                pw = var if d == 1 else f"{var}^{d}"
                mono = pw if c == 1 else f"{c}*{pw}"
            parts.append(mono)
        return "+".join(parts)

    def __repr__(self):
        return f"Poly({self.render()!s}, p={self.p})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: Poly, b: Poly):
    """Return (g, s, u) with s*a + u*b = g, g monic."""
    p = a.p
    r0, r1 = a, b
    s0, s1 = Poly.const(1, p), Poly((), p)
    u0, u1 = Poly((), p), Poly.const(1, p)
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        u0, u1 = u1, u0 - q * u1
    inv = pow(r0.lead, -1, p)
    return r0.scale(inv), s0.scale(inv), u0.scale(inv)


def monic_polys(p: int, degree: int) -> Iterable[Poly]:
    """All monic polynomials of exactly the given degree, in canonical order."""
    for tail in itertools.product(range(p), repeat=degree):
        yield Poly(tuple(reversed(tail)) + (1,), p)


def all_polys(p: int, max_degree: int) -> Iterable[Poly]:
    """All polynomials of degree <= max_degree (including zero)."""
    yield Poly((), p)
    for d in range(0, max_degree + 1):
        for lead in range(1, p):
            for tail in itertools.product(range(p), repeat=d):
                yield Poly(tuple(reversed(tail)) + (lead,), p)


# ---------------------------------------------------------------------------
# field elements


class FieldElem:
    """Immutable element of Q or F_p(t) in canonical form."""

    __slots__ = ("field", "num", "den", "_hash")

    def __init__(self, field, num, den):
        # callers must pass canonical data; use FieldElem.make otherwise
        self.field = field
        self.num = num
        self.den = den
        self._hash = hash((field, num, den))

    @classmethod
    def make(cls, field: FieldDesc, num, den) -> "FieldElem":
        if field.is_rational:
            if den == 0:
                raise ZeroDivisionError("zero denominator")
            g = math.gcd(num, den)
            num, den = num // g, den // g
            if den < 0:
                num, den = -num, -den
            return cls(field, num, den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            return cls(field, num, Poly.const(1, field.characteristic))
        g = poly_gcd(num, den)
        if g.degree > 0:
            num, den = num // g, den // g
        inv = pow(den.lead, -1, field.characteristic)
        return cls(field, num.scale(inv), den.scale(inv))

    # structure -----------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num == 0 if self.field.is_rational else self.num.is_zero()

    def __bool__(self):
        return not self.is_zero()

    def _check(self, other) -> "FieldElem":
        if isinstance(other, int):
            return self.field.element(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return FieldElem.make(self.field, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        if self.field.is_rational:
            return FieldElem(self.field, -self.num, self.den)
        return FieldElem(self.field, -self.num, self.den)

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return FieldElem.make(self.field, self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return FieldElem.make(self.field, self.den, self.num)

    def __truediv__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        if self.field.is_rational:
            return FieldElem(self.field, self.num**e, self.den**e)
        return FieldElem(self.field, self.num**e, self.den**e)

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field.element(other)
        if not isinstance(other, FieldElem):
            return NotImplemented
        return self.field == other.field and self.num == other.num and self.den == other.den

    def __hash__(self):
        return self._hash

    # ordering / display ----------------------------------------------------

    @property
    def height(self) -> int:
        if self.field.is_rational:
            return max(abs(self.num), self.den)
        return max(self.num.degree, self.den.degree, 0)

    def sort_key(self):
        """Deterministic enumeration order: by height, then denominator, numerator."""
        if self.field.is_rational:
            return (self.height, self.den, abs(self.num), self.num < 0)
        return (self.height, self.den.sort_key(), self.num.sort_key())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"FieldElem({render(self)!r}, {self.field})"


def render(x: FieldElem) -> str:
    """Text form in the element grammar; ``parse_element`` inverts it."""
    if x.field.is_rational:
        return str(x.num) if x.den == 1 else f"{x.num}/{x.den}"
    var = x.field.variable
    num = x.num.render(var)
    if x.den.degree == 0:
        return num
    if len([c for c in x.num.coeffs if c]) > 1:
        num = f"({num})"
    den = x.den.render(var)
    if len([c for c in x.den.coeffs if c]) > 1:
        den = f"({den})"
    return f"{num}/{den}"


def arith(op: str, a: FieldElem, b: FieldElem) -> FieldElem:
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if b.is_zero():
            raise ZeroDivisionError("division by zero")
        return a / b
    raise ValueError(f"unknown operation {op!r}")


# ---------------------------------------------------------------------------
# parsing


class _ElemParser:
    """Recursive-descent parser for the element grammar.

    elem := signed ("/" signed)?
    signed := "-"? "(" poly ")" | poly
    poly := "-"? term (("+"|"-") term)*
    term := coeff ("*"? monom)? | monom ;  monom := var ("^" nat)?
    """

    def __init__(self, text: str, field: FieldDesc):
        self.text = text
        self.field = field
        self.pos = 0

    def error(self, msg):
        raise ParseError(msg, self.pos, self.text)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def eat(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def parse(self) -> FieldElem:
        if not self.text.strip():
            self.error("empty element")
        num = self.signed()
        den = self.field.one()
        if self.eat("/"):
            den = self.signed()
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        if den.is_zero():
            raise ParseError("division by zero literal", self.pos, self.text)
        return num / den

    def signed(self) -> FieldElem:
        start = self.pos
        if self.eat("-"):
            if self.peek() == "(":
                return -self.group()
            self.pos = start
            return self.poly()
        if self.peek() == "(":
            return self.group()
        return self.poly()

    def group(self) -> FieldElem:
        self.eat("(")
        val = self.poly()
        if not self.eat(")"):
            self.error("expected ')'")
        return val

    def poly(self) -> FieldElem:
        neg = self.eat("-")
        acc = self.term()
        if neg:
            acc = -acc
        while self.peek() in ("+", "-"):
            op = self.text[self.pos]
            self.pos += 1
            t = self.term()
            acc = acc + t if op == "+" else acc - t
        return acc

    def integer(self) -> int | None:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            return None
        return int(self.text[start : self.pos])

    def term(self) -> FieldElem:
        coeff = self.integer()
        if coeff is not None:
            save = self.pos
            star = self.eat("*")
            if self._at_var():
                return self.field.element(coeff) * self.monom()
            if star:
                self.error("expected variable after '*'")
            self.pos = save
            return self.field.element(coeff)
        if self._at_var():
            return self.monom()
        self.error("expected integer or variable")

    def _at_var(self) -> bool:
        self.skip()
        v = self.field.variable
        if self.field.is_rational:
            if self.pos < len(self.text) and self.text[self.pos].isalpha():
                raise ParseError("polynomial variable used in Q (wrong field)", self.pos, self.text)
            return False
        end = self.pos + len(v)
        if self.text[self.pos : end] != v:
            if self.pos < len(self.text) and self.text[self.pos].isalpha():
                raise ParseError(f"unknown variable (field variable is {v!r})", self.pos, self.text)
            return False
        return not (end < len(self.text) and (self.text[end].isalnum() or self.text[end] == "_"))

    def monom(self) -> FieldElem:
        self.pos += len(self.field.variable)
        e = 1
        if self.eat("^"):
            e = self.integer()
            if e is None:
                self.error("expected exponent")
        return self.field.gen() ** e


def parse_element(text: str, field: FieldDesc) -> FieldElem:
    return _ElemParser(text, field).parse()


# ---------------------------------------------------------------------------
# bounded scopes


def _support_base(field: FieldDesc, item) -> FieldElem:
    """Element whose powers generate the sample along one support direction."""
    base = getattr(item, "support_element", None)
    if base is not None:
        return base() if callable(base) else base
    if isinstance(item, FieldElem):
        return item
    if isinstance(item, Poly):
        return field.element(item)
    if isinstance(item, int):
        return field.element(item)
    raise TypeError(f"cannot use {item!r} as prime support")


def sample_universe(field: FieldDesc, height_bound: int, prime_support=()) -> list[FieldElem]:
    """All u * prod b^e with |e| <= height_bound over the support, plus 0.

    ``u`` ranges over ``field.units()``.  The result is sorted by
    ``FieldElem.sort_key`` and free of duplicates.
    """
    if height_bound < 1:
        raise PreconditionError("height bound must be >= 1")
    bases = []
    for item in prime_support:
        b = _support_base(field, item)
        if b not in bases:
            bases.append(b)
    out = {field.zero(), field.one()}
    rng = range(-height_bound, height_bound + 1)
    for exps in itertools.product(rng, repeat=len(bases)):
        core = field.one()
        for b, e in zip(bases, exps):
            core = core * b**e
        for u in field.units():
            out.add(u * core)
    return sorted(out, key=FieldElem.sort_key)


def height_universe(field: FieldDesc, height: int) -> list[FieldElem]:
    """Every element of height <= ``height`` in canonical order.

    For Q this is {a/b : max(|a|, b) <= height}; for F_p(t) numerator and
    denominator degrees are at most ``height``.
    """
    if height < 1:
        raise PreconditionError("height must be >= 1")
    out = set()
    if field.is_rational:
        out.add(field.zero())
        for b in range(1, height + 1):
            for a in range(-height, height + 1):
                if a and math.gcd(a, b) == 1:
                    out.add(FieldElem(field, a, b))
    else:
        p = field.characteristic
        dens = [d for k in range(height + 1) for d in monic_polys(p, k)]
        for den in dens:
            for num in all_polys(p, height):
                if num.is_zero() and den.degree > 0:
                    continue
                if poly_gcd(num, den).degree == 0 or num.is_zero():
                    out.add(FieldElem.make(field, num, den))
    return sorted(out, key=FieldElem.sort_key)
