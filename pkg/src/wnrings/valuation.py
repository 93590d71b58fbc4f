"""Discrete rank-1 valuations on Q and F_p(t) and a strong-approximation solver."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import FieldMismatchError, ParseError, PreconditionError, ConsistencyError
from .exactfield import (
    FieldDesc,
    FieldElem,
    Poly,
    QQ,
    _ElemParser,
    is_prime,
    monic_polys,
    poly_xgcd,
)

INF = math.inf

__all__ = [
    "INF",
    "Valuation",
    "padic",
    "polyadic",
    "degree",
    "val",
    "in_ring",
    "value_vector",
    "approximate",
    "local_uniformizers",
    "is_irreducible",
    "parse_valuation",
]


def is_irreducible(f: Poly) -> bool:
    """Trial division by every monic polynomial of degree <= deg f / 2."""
    if f.degree < 1:
        return False
    for d in range(1, f.degree // 2 + 1):
        for g in monic_polys(f.p, d):
            if (f % g).is_zero():
                return False
    return True


@dataclass(frozen=True)
class Valuation:
    """A discrete valuation: p-adic on Q, f-adic or degree on F_p(t)."""

    kind: str  # "padic" | "polyadic" | "degree"
    field: FieldDesc
    prime: int | None = None
    poly: Poly | None = None

    def __post_init__(self):
        if self.kind == "padic":
            if not self.field.is_rational:
                raise PreconditionError("p-adic valuations live on Q")
            if not is_prime(self.prime or 0):
                raise PreconditionError(f"{self.prime} is not prime")
        elif self.kind == "polyadic":
            if self.field.is_rational:
                raise PreconditionError("polyadic valuations live on F_p(t)")
            f = self.poly
            if f is None or f.p != self.field.characteristic:
                raise PreconditionError("polynomial over the wrong prime field")
            if not f.is_monic():
                raise PreconditionError("polyadic polynomial must be monic")
            if not is_irreducible(f):
                raise PreconditionError(f"{f.render(self.field.variable)} is reducible")
        elif self.kind == "degree":
            if self.field.is_rational:
                raise PreconditionError("the degree valuation lives on F_p(t)")
        else:
            raise PreconditionError(f"unknown valuation kind {self.kind!r}")

    def __call__(self, x: FieldElem):
        return val(self, x)

    def support_element(self) -> FieldElem:
        """Generator of the sample direction for this valuation."""
        if self.kind == "padic":
            return self.field.element(self.prime)
        if self.kind == "polyadic":
            return self.field.element(self.poly)
        return self.field.gen()

    def uniformizer(self) -> FieldElem:
        """An element of value 1 (no control over other valuations)."""
        if self.kind == "degree":
            return self.field.gen().inverse()
        return self.support_element()

    def descriptor(self) -> str:
        if self.kind == "padic":
            return f"padic {self.prime}"
        if self.kind == "polyadic":
            return f"polyadic {self.poly.render(self.field.variable)}"
        return "degree"

    def __str__(self):
        return self.descriptor()

    def __repr__(self):
        return f"Valuation({self.descriptor()!r})"


def padic(p: int) -> Valuation:
    return Valuation("padic", QQ, prime=p)


def polyadic(f, field: FieldDesc) -> Valuation:
    if not isinstance(f, Poly):
        f = field.element(f).num if not isinstance(f, FieldElem) else f.num
    return Valuation("polyadic", field, poly=f)


def degree(field: FieldDesc) -> Valuation:
    return Valuation("degree", field)


def _int_mult(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _poly_mult(a: Poly, f: Poly) -> int:
    k = 0
    while True:
        q, r = divmod(a, f)
        if not r.is_zero():
            return k
        a = q
        k += 1


def val(v: Valuation, x: FieldElem):
    if x.field != v.field:
        raise FieldMismatchError(f"{v} is on {v.field}, element is in {x.field}")
    if x.is_zero():
        return INF
    if v.kind == "padic":
        return _int_mult(x.num, v.prime) - _int_mult(x.den, v.prime)
    if v.kind == "polyadic":
        return _poly_mult(x.num, v.poly) - _poly_mult(x.den, v.poly)
    return x.den.degree - x.num.degree


def in_ring(v: Valuation, x: FieldElem) -> bool:
    return val(v, x) >= 0


def value_vector(vs: Sequence[Valuation], x: FieldElem) -> tuple:
    return tuple(val(v, x) for v in vs)


# ---------------------------------------------------------------------------
# strong approximation


def _check_targets(targets):
    if not targets:
        raise PreconditionError("approximate needs at least one target")
    vs = [t[0] for t in targets]
    if len(set(vs)) != len(vs):
        raise PreconditionError("duplicate valuations in approximation targets")
    field = vs[0].field
    for v, y, _ in targets:
        if v.field != field or y.field != field:
            raise FieldMismatchError("approximation targets over different fields")
    return field


def _residue_int(x: FieldElem, modulus: int) -> int:
    return x.num * pow(x.den, -1, modulus) % modulus


def _residue_poly(x: FieldElem, modulus: Poly) -> Poly:
    g, s, _ = poly_xgcd(x.den, modulus)
    if g.degree != 0:
        raise ConsistencyError("denominator not invertible modulo target power")
    return (x.num * s) % modulus


def _crt_route(field: FieldDesc, targets) -> FieldElem:
    # clear the denominators at target primes, then solve congruences on w
    shift = [max(0, -val(v, y)) if not y.is_zero() else 0 for v, y, _ in targets]
    D = field.one()
    for (v, _, _), m in zip(targets, shift):
        D = D * v.support_element() ** m
    rational = field.is_rational
    w = 0 if rational else Poly((), field.characteristic)
    M = 1 if rational else Poly.const(1, field.characteristic)
    for (v, y, k), m in zip(targets, shift):
        K = k + m
        if K <= 0:
            continue
        base = v.prime if rational else v.poly
        mod = base**K
        r = _residue_int(D * y, mod) if rational else _residue_poly(D * y, mod)
        # combine w mod M with r mod mod
        if rational:
            t = (r - w) * pow(M, -1, mod) % mod
            w, M = w + M * t, M * mod
        else:
            _, inv, _ = poly_xgcd(M, mod)
            t = ((r - w) * inv) % mod
            w, M = w + M * t, M * mod
    if not rational:
        w = w % M
    return field.element(w) / D


def _separator(field: FieldDesc, vs: Sequence[Valuation], i: int) -> FieldElem:
    """Element positive at vs[i] and negative at every other vs[j]."""
    v = vs[i]
    others = [w for j, w in enumerate(vs) if j != i]
    if field.is_rational:
        b = field.element(v.prime)
        for w in others:
            b = b / w.prime
        return b
    finite_others = [w.poly for w in others if w.kind == "polyadic"]
    has_degree = any(w.kind == "degree" for w in others)
    den = Poly.const(1, field.characteristic)
    for f in finite_others:
        den = den * f
    if v.kind == "degree":
        if not finite_others:
            return field.gen().inverse()
        return field.element(1, den)
    a = 1
    if has_degree:
        a = den.degree // v.poly.degree + 1
    return field.element(v.poly**a, den)


def _idempotent_route(field: FieldDesc, targets) -> FieldElem:
    vs = [t[0] for t in targets]
    ys = [t[1] for t in targets]
    N = 1
    for i, (v, _, k) in enumerate(targets):
        finite = [val(v, y) for y in ys if not y.is_zero()]
        if finite:
            N = max(N, k - min(finite))
    z = field.zero()
    for i, y in enumerate(ys):
        if y.is_zero():
            continue
        b = _separator(field, vs, i)
        e = (field.one() + b**N).inverse()
        z = z + y * e
    return z


def approximate(targets) -> FieldElem:
    """Find z with v_i(z - y_i) >= k_i for every (v_i, y_i, k_i) in targets.

    Over Q and for purely polyadic targets this is a Chinese remaindering on
    the numerator after clearing target denominators; when the degree
    valuation is involved a separating-element construction is used.
    The result is always re-verified.
    """
    targets = [(v, y, int(k)) for v, y, k in targets]
    field = _check_targets(targets)
    if any(v.kind == "degree" for v, _, _ in targets):
        z = _idempotent_route(field, targets)
    else:
        z = _crt_route(field, targets)
    for v, y, k in targets:
        if val(v, z - y) < k:
            raise ConsistencyError(f"approximation failed at {v}: got {z}")
    return z


def local_uniformizers(vs: Sequence[Valuation]) -> list[FieldElem]:
    """pi_i with v_i(pi_i) = 1 and v_j(pi_i) = 0 for j != i."""
    out = []
    for i, v in enumerate(vs):
        raw = v.uniformizer()
        vec = value_vector(vs, raw)
        if all(c == (1 if j == i else 0) for j, c in enumerate(vec)):
            out.append(raw)
            continue
        fixed = _coprime_correction(vs, v)
        if fixed is not None:
            out.append(fixed)
            continue
        one = v.field.one()
        targets = [(w, raw if j == i else one, 2 if j == i else 1) for j, w in enumerate(vs)]
        out.append(approximate(targets))
    return out


def _coprime_correction(vs, v):
    """Divide out the degree defect by a polynomial that is a unit at every finite target."""
    field = v.field
    if field.is_rational:
        return None
    d = v.poly.degree if v.kind == "polyadic" else 1
    finite = [w.poly for w in vs if w.kind == "polyadic"]
    for g in monic_polys(field.characteristic, d):
        if any((g % f).is_zero() for f in finite):
            continue
        cand = field.element(v.poly, g) if v.kind == "polyadic" else field.element(1, g)
        i = vs.index(v)
        if all(c == (1 if j == i else 0) for j, c in enumerate(value_vector(vs, cand))):
            return cand
    return None


def parse_valuation(text: str, field: FieldDesc) -> Valuation:
    """Parse a descriptor: ``padic 2``, ``polyadic t^2+1`` or ``degree``."""
    parts = text.strip().split(None, 1)
    if not parts:
        raise ParseError("empty valuation descriptor", 0, text)
    kind = parts[0]
    if kind == "degree":
        if len(parts) > 1:
            raise ParseError("degree takes no argument", len(parts[0]), text)
        return degree(field) if not field.is_rational else _fail("degree valuation needs F_p(t)", text)
    if len(parts) < 2:
        raise ParseError(f"{kind} needs an argument", len(text), text)
    arg = parts[1].strip()
    if kind == "padic":
        if not field.is_rational:
            _fail("padic valuation needs Q", text)
        try:
            p = int(arg)
        except ValueError:
            raise ParseError(f"expected prime, got {arg!r}", text.find(arg), text) from None
        if not is_prime(p):
            _fail(f"{p} is not prime", text)
        return padic(p)
    if kind == "polyadic":
        if field.is_rational:
            _fail("polyadic valuation needs F_p(t)", text)
        f = _ElemParser(arg, field).parse()
        if f.den.degree != 0:
            _fail("polyadic argument must be a polynomial", text)
        if not f.num.is_monic():
            _fail("polyadic polynomial must be monic", text)
        if not is_irreducible(f.num):
            _fail(f"{arg} is reducible or constant", text)
        return Valuation("polyadic", field, poly=f.num)
    raise ParseError(f"unknown valuation kind {kind!r}", 0, text)


def _fail(msg, text):
    raise PreconditionError(msg)
