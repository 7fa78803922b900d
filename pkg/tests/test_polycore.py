from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uinvariants.errors import MissingAssignment
from uinvariants.polycore import (
    Poly,
    VarId,
    parse_poly,
    poly_arith,
    poly_degree_in,
    poly_eval,
    poly_partial,
    registry,
    s,
    x,
)

N = 2
REG = registry(N)
XVARS = [VarId("x", (a, b), N) for a in (1, 2) for b in (1, 2)]


def point(A):
    n = len(A)
    return {VarId("x", (a + 1, b + 1), n): A[a][b] for a in range(n) for b in range(n)}


# ----------------------------------------------------------------- strategies

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=7)


@st.composite
def polys(draw, max_terms=4):
    terms = draw(
        st.lists(
            st.tuples(
                st.dictionaries(st.sampled_from(XVARS), st.integers(1, 3), max_size=3),
                rationals,
            ),
            max_size=max_terms,
        )
    )
    return Poly.from_terms(REG, terms)


points = st.fixed_dictionaries({v: rationals for v in XVARS})


# ------------------------------------------------------------------- examples


def test_additive_inverse():
    assert poly_arith("add", x(1, 1, N), -x(1, 1, N)) == Poly.zero(REG)
    assert not poly_arith("add", x(1, 1, N), poly_arith("neg", x(1, 1, N), x(1, 1, N)))


def test_distributivity_example():
    got = poly_arith("mul", x(2, 1, N), x(1, 1, N) + x(2, 2, N))
    assert got == x(2, 1, N) * x(1, 1, N) + x(2, 1, N) * x(2, 2, N)
    assert got.to_text() == "x[1][1]*x[2][1] + x[2][1]*x[2][2]"


def test_mul_by_zero():
    p = x(1, 1, N) ** 3 - Fraction(2, 3) * x(1, 2, N)
    assert poly_arith("mul", p, Poly.zero(REG)) == 0


def test_eval_examples():
    A = [[1, 2], [3, 4]]
    assert poly_eval(x(2, 1, N), point(A)) == 3
    assert poly_eval(x(2, 1, N) * (x(1, 1, N) + x(2, 2, N)), point(A)) == 15
    assert poly_eval(Poly.zero(REG), {}) == 0


def test_eval_missing_assignment():
    with pytest.raises(MissingAssignment):
        poly_eval(x(1, 1, N) + x(2, 2, N), {VarId("x", (1, 1), N): 1})


def test_partial_examples():
    assert poly_partial(x(2, 1, N) * x(1, 1, N), VarId("x", (1, 1), N)) == x(2, 1, N)
    assert poly_partial(s(1, 0, N) * s(2, 1, N), VarId("s", (2, 1), N)) == s(1, 0, N)
    assert poly_partial(Poly.const(REG, 7), VarId("x", (1, 2), N)) == 0


def test_degree_in_examples():
    assert poly_degree_in(s(1, 0, N) * s(2, 1, N), VarId("s", (2, 1), N)) == 1
    assert poly_degree_in(x(2, 1, N), VarId("x", (1, 1), N)) == 0
    assert poly_degree_in(Poly.zero(REG), VarId("x", (1, 1), N)) == -1


def test_varid_validation_and_equality():
    with pytest.raises(ValueError):
        VarId("x", (3, 1), 2)
    with pytest.raises(ValueError):
        VarId("s", (2, 2), 2)
    assert VarId("x", (1, 1), 2) == VarId("x", (1, 1), 2)
    assert VarId("x", (1, 1), 2) != VarId("x", (1, 1), 3)


def test_mixing_registries_rejected():
    with pytest.raises(ValueError):
        x(1, 1, 2) + x(1, 1, 3)


def test_canonical_text_order_is_graded_lex():
    p = x(2, 2, N) + x(1, 1, N) ** 2 + 3 + x(1, 2, N) * x(2, 1, N)
    assert p.to_text() == "x[1][1]^2 + x[1][2]*x[2][1] + x[2][2] + 3"


def test_rational_coefficients_reduced():
    p = Fraction(4, 6) * x(1, 1, N) + Fraction(3, 3)
    assert p.to_text() == "2/3*x[1][1] + 1"
    assert (p - Fraction(1, 3) * x(1, 1, N) * 2).to_text() == "1"


def test_parse_known_text():
    p = parse_poly("-s[1][0]*s[2][0]", 2)
    assert p == -s(1, 0, 2) * s(2, 0, 2)
    q = parse_poly("3/2*x[1][1]^2 - x[1][2]*x[2][1] + 1", 2)
    assert q == Fraction(3, 2) * x(1, 1, 2) ** 2 - x(1, 2, 2) * x(2, 1, 2) + 1
    with pytest.raises(ValueError):
        parse_poly("x[1][1] + + 2", 2)


def test_json_format_shape():
    p = Fraction(-1, 2) * x(1, 1, N) * x(2, 1, N) ** 2
    assert p.to_json_obj() == [{"coeff": "-1/2", "exps": [["x[1][1]", 1], ["x[2][1]", 2]]}]


def test_substitute_partial_mapping():
    p = x(1, 1, N) * x(2, 2, N) - x(1, 2, N)
    got = p.substitute({VarId("x", (2, 2), N): x(1, 1, N) + 1})
    assert got == x(1, 1, N) ** 2 + x(1, 1, N) - x(1, 2, N)


def test_power_and_overflow_guard():
    p = x(1, 1, N) ** 40000
    assert p.degree_in(VarId("x", (1, 1), N)) == 40000
    with pytest.raises(OverflowError):
        p * p


# ----------------------------------------------------------------- properties


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p - p == 0


@given(polys(), polys(), points)
def test_eval_is_ring_homomorphism(p, q, pt):
    assert (p * q).eval(pt) == p.eval(pt) * q.eval(pt)
    assert (p + q).eval(pt) == p.eval(pt) + q.eval(pt)


@given(polys(max_terms=6))
def test_text_and_json_round_trip(p):
    assert parse_poly(p.to_text(), N) == p
    assert Poly.from_json(p.to_json(), N) == p
    assert parse_poly(p.to_text(), N).to_text() == p.to_text()


@given(polys(), polys(), st.sampled_from(XVARS))
def test_leibniz_rule(p, q, v):
    assert (p * q).partial(v) == p.partial(v) * q + p * q.partial(v)


@settings(max_examples=50)
@given(polys(), st.sampled_from(XVARS), polys(max_terms=2), points)
def test_substitution_commutes_with_evaluation(p, v, img, pt):
    sub = p.substitute({v: img})
    moved = dict(pt)
    moved[v] = img.eval(pt)
    assert sub.eval(pt) == p.eval(moved)


@given(polys(), st.sampled_from(XVARS))
def test_coefficient_split_reassembles(p, v):
    parts = p.coefficient_split(v)
    var = Poly.var(v)
    assert sum((c * var**e for e, c in parts.items()), Poly.zero(REG)) == p
