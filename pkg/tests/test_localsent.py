import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import q, ring
from wnrings.errors import ParseError, PreconditionError
from wnrings.exactfield import QQ, sample_universe
from wnrings.localsent import (
    BUILTIN_NAMES,
    FAILS,
    HOLDS,
    PolarityOk,
    Structure,
    Violation,
    builtin,
    check_polarity,
    evaluate,
    parse_sentence,
    positive_scales,
    print_sentence,
    replay,
    standard_structure,
)
from wnrings.localsent.syntax import (
    And,
    BinOp,
    ElemAll,
    ElemEx,
    Eq,
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
    Scaled,
    Var,
)
from wnrings.multival import MultiValRing, weight

FIELD_TOPOLOGY = "forallN U . existsN V . forallE x in V . existsE y in U . (1+x)*(1+y) = 1"


# -- syntax ------------------------------------------------------------------------


def test_parse_field_topology():
    s = parse_sentence(FIELD_TOPOLOGY)
    assert isinstance(s, NbhdAll) and isinstance(s.body, NbhdEx)
    inner = s.body.body
    assert isinstance(inner, ElemAll) and inner.scope == "V"
    assert isinstance(inner.body, ElemEx) and inner.body.scope == "U"
    one = Lit(1)
    assert inner.body.body == Eq(BinOp("*", BinOp("+", one, Var("x")), BinOp("+", one, Var("y"))), one)
    assert s == builtin("field-topology")


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("forallN U . U = U", "cannot appear in a term"),
        ("", "empty"),
        ("   ", "empty"),
        ("forallN U . existsE x in U . y != 0", "unbound variable 'y'"),
        ("forallE x in W . x = x", "not a bound neighborhood variable"),
        ("forallN U . forallN U . 1 in U", "U"),
        ("forallE x in Scope . x = ", "position"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError) as e:
        parse_sentence(text)
    assert fragment in str(e.value)


def test_parse_error_positions():
    with pytest.raises(ParseError) as e:
        parse_sentence("forallN U . existsE x in U . y != 0")
    assert "position 29" in str(e.value)


@pytest.mark.parametrize("name", [n for n in BUILTIN_NAMES if n not in ("Wn", "Vn")])
def test_builtin_roundtrip_and_polarity(name):
    s = builtin(name)
    assert parse_sentence(print_sentence(s)) == s
    assert isinstance(check_polarity(s), PolarityOk)


@pytest.mark.parametrize("n", range(1, 8))
def test_wn_roundtrip(n):
    s = builtin("Wn", n)
    assert parse_sentence(print_sentence(s)) == s
    assert isinstance(check_polarity(s), PolarityOk)
    # n+1 element universals
    depth, f = 0, s.body.body
    while isinstance(f, ElemAll):
        depth, f = depth + 1, f.body
    assert depth == n + 1


def test_vn_roundtrip():
    s = builtin("Vn", [q(0), q(1), q(-1, 2)])
    assert parse_sentence(print_sentence(s)) == s
    with pytest.raises(PreconditionError):
        builtin("Vn", [q(1), q(1)])


def test_builtin_errors():
    with pytest.raises(PreconditionError):
        builtin("nope")
    with pytest.raises(PreconditionError):
        builtin("Wn", 0)
    with pytest.raises(PreconditionError):
        builtin("Wn", 9)
    with pytest.raises(PreconditionError):
        builtin("hausdorff", 3)


def test_hausdorff_text():
    assert builtin("hausdorff") == parse_sentence("forallE x in Scope . x != 0 -> existsN V . not (x in V)")


var_names = ["x", "y"]
terms = st.recursive(
    st.one_of(st.integers(0, 20).map(Lit), st.sampled_from(var_names).map(Var)),
    lambda sub: st.one_of(
        sub.map(Neg),
        st.builds(BinOp, st.sampled_from("+-*/"), sub, sub),
        st.builds(Pow, sub, st.integers(1, 4)),
    ),
    max_leaves=6,
)
coefs = st.one_of(st.none(), terms)
atoms = st.one_of(
    st.builds(Eq, terms, terms),
    st.builds(Neq, terms, terms),
    st.builds(Mem, terms, st.lists(st.builds(Scaled, coefs, st.sampled_from(["U", "V"])), min_size=1, max_size=3).map(tuple)),
)
bodies = st.recursive(
    atoms,
    lambda sub: st.one_of(
        sub.map(Not), st.builds(And, sub, sub), st.builds(Or, sub, sub), st.builds(Implies, sub, sub)
    ),
    max_leaves=5,
)


@settings(max_examples=200)
@given(bodies)
def test_printer_roundtrip_property(body):
    s = NbhdAll("U", NbhdEx("V", ElemAll("x", "V", ElemEx("y", "Scope", body))))
    assert parse_sentence(print_sentence(s)) == s


# -- polarity ------------------------------------------------------------------------


def test_polarity_violations_with_paths():
    v = check_polarity(parse_sentence("existsN U . forallE x in Scope . x in U"))
    assert isinstance(v, Violation)
    assert (v.var, v.binder, v.polarity) == ("U", "existsN", "positive")
    assert v.path == ("existsN U", "forallE x in Scope", "x in U")
    w = check_polarity(parse_sentence("forallN U . not (1 in U)"))
    assert (w.var, w.binder, w.polarity) == ("U", "forallN", "negative")
    assert w.path == ("forallN U", "not", "1 in U")


def test_polarity_field_topology():
    ok = check_polarity(parse_sentence(FIELD_TOPOLOGY))
    assert ok.occurrences == (("V", "negative"), ("U", "positive"))


def test_polarity_implies_flips():
    assert isinstance(check_polarity(parse_sentence("forallN U . 1 in U -> 0 in U")), Violation)
    assert isinstance(check_polarity(parse_sentence("existsN U . 1 in U -> 0 = 0")), PolarityOk)


def test_evaluate_rejects_violation():
    R = ring(2, 3)
    with pytest.raises(PreconditionError):
        evaluate(parse_sentence("forallN U . not (1 in U)"), standard_structure(R))


# -- evaluation -------------------------------------------------------------------------


@pytest.fixture(scope="module")
def st23():
    return standard_structure(ring(2, 3))


def test_nondiscreteness(st23):
    assert evaluate(builtin("nondiscreteness"), st23).verdict == HOLDS


def test_w1_fails_w2_holds(st23):
    r1 = evaluate(builtin("Wn", 1), st23)
    assert r1.verdict == FAILS
    assert r1.witness.kind == "forall" and r1.witness.var == "U"
    assert r1.witness.children[0].kind == "exists-none"
    assert evaluate(builtin("Wn", 2), st23).verdict == HOLDS


@pytest.mark.parametrize("primes", [(2,), (3,), (2, 5), (2, 3, 5)])
def test_wn_verdict_matches_weight(primes):
    R = ring(*primes)
    st_ = standard_structure(R, scale_height=16)
    w = weight(R).n
    for n in range(1, w + 1):
        assert evaluate(builtin("Wn", n), st_).holds == (n >= w)


def test_ring_topology_axioms(st23):
    for name in ("hausdorff", "subtraction-continuity", "scalar-continuity", "multiplication-continuity", "local-boundedness"):
        assert evaluate(builtin(name), st23).verdict == HOLDS, name


def test_replay_and_tamper(st23):
    s = builtin("Wn", 1)
    r = evaluate(s, st23)
    assert replay(s, st23, r.witness)
    r.witness.value = (q(5), r.witness.value[1])
    assert not replay(s, st23, r.witness)


def test_vectorize_and_prune_are_exact():
    R = ring(2, 3)
    st_ = standard_structure(R, scale_height=12)
    for name in ("nondiscreteness", "hausdorff", "subtraction-continuity", "local-boundedness"):
        s = builtin(name)
        verdicts = {evaluate(s, st_, vectorize=a, prune=b).verdict for a, b in itertools.product([True, False], repeat=2)}
        assert len(verdicts) == 1, name
    for n in (1, 2):
        s = builtin("Wn", n)
        verdicts = {evaluate(s, st_, vectorize=a, prune=b).verdict for a, b in itertools.product([True, False], repeat=2)}
        assert len(verdicts) == 1


UNIVERSAL = [
    "forallN U . forallE x in Scope . x in U or x*x != 4",
    "forallE x in Scope . forallE y in Scope . x*y != 2",
    "forallN U . forallE x in Scope . forallE y in Scope . x - y in U or x*y in 6*U",
]


@pytest.mark.parametrize("text", UNIVERSAL)
@pytest.mark.parametrize("h", [1, 2])
def test_universal_sentence_scope_growth(text, h):
    R = ring(2, 3)
    s = parse_sentence(text)
    scales = positive_scales(R, 8)
    small = Structure(QQ, R, scales, sample_universe(QQ, h, R.valuations))
    big = Structure(QQ, R, scales, sample_universe(QQ, h + 1, R.valuations))
    if not evaluate(s, small).holds:
        assert not evaluate(s, big).holds


def _two_basis(R1, R2):
    R = MultiValRing(tuple(dict.fromkeys(R1.valuations + R2.valuations)))
    scope = sample_universe(QQ, 1, R.valuations)
    scales = positive_scales(R, 12)
    return Structure(QQ, R1, scales, scope, bases={"A": R1, "B": R2})


def test_independence_two_bases():
    s = builtin("independence")
    assert evaluate(s, _two_basis(ring(2), ring(3))).verdict == HOLDS
    assert evaluate(s, _two_basis(ring(2), ring(2, 3))).verdict == FAILS
