"""Expression AST, DSL round trips, exact evaluation, error reporting."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from opbrackets import (
    Const,
    DomainError,
    Geometric,
    IDENTITY,
    Lin,
    ParseError,
    Power,
    Prod,
    Quad,
    RHO,
    Scale,
    Sum,
    X,
    canonicalize,
    eval_expr,
    expressions_equal,
    finite,
    operator,
    parse_expr,
    parse_field,
    parse_mu,
    parse_operator,
    parse_point,
    parse_vec,
    point,
    print_expr,
)
from conftest import make_sampler


class TestParseExamples:
    def test_identity_quad_is_squared_norm(self):
        e = parse_expr("q(op(1;;))")
        assert isinstance(e, Quad)
        assert e.op == IDENTITY
        assert expressions_equal(e, RHO)

    def test_linear_times_x(self):
        e = parse_expr("ip(v,[1:1/2,3:-2]) * x")
        assert isinstance(e, Prod)
        lin, var = e.factors
        assert isinstance(lin, Lin)
        assert lin.vec == finite([(1, Fraction(1, 2)), (3, -2)])
        assert isinstance(var, X)

    def test_operator_with_diagonal(self):
        e = parse_expr("q(op(2; pow(1,1) ;))")
        assert isinstance(e, Quad)
        assert e.op.lam == 2
        assert e.op.diag.components() == ((Fraction(1), Power(Fraction(1), 1)),)

    def test_whitespace_insensitive(self):
        a = parse_expr(" 1/2 * x +  ip( v , [ 1 : 1 ] ) ")
        b = parse_expr("1/2*x+ip(v,[1:1])")
        assert expressions_equal(a, b)

    def test_empty_vec_literal(self):
        v = parse_vec("[]")
        assert v.is_zero()

    def test_subtraction_and_parens(self):
        e = parse_expr("(x - 2) * (x + 2)")
        m = point([], 5)
        assert eval_expr(e, m) == 21


class TestParseErrors:
    @pytest.mark.parametrize(
        "text",
        [
            "",
            "x +",
            "ip(v,[1:])",
            "q(op(1;)",
            "ip(v,[0:1])",
            "1//2",
            "x x",
            "point([1:1],)",
        ],
    )
    def test_malformed_input_raises_with_position(self, text):
        with pytest.raises(ParseError) as exc:
            parse_expr(text)
        assert exc.value.code == "SyntaxError"
        assert isinstance(exc.value.position, int)

    def test_zero_denominator(self):
        with pytest.raises(ParseError):
            parse_expr("1/0")

    def test_geometric_ratio_out_of_range(self):
        with pytest.raises(DomainError):
            parse_expr("ip(v,geo(3/2))")

    def test_trailing_junk_rejected(self):
        with pytest.raises(ParseError):
            parse_expr("x + 1 )")

    def test_point_requires_finite_vec(self):
        with pytest.raises(ParseError):
            parse_point("point(geo(1/2),0)")

    def test_field_duplicate_part_rejected(self):
        with pytest.raises(ParseError):
            parse_field("field(dx=1;dx=2)")

    def test_mu_literal(self):
        mu = parse_mu("mu([1:2],3)")
        assert mu.vpart.entry(1) == 2
        assert mu.xpart == 3


class TestEvalExamples:
    def test_rho_at_single_entry(self):
        assert eval_expr(RHO, point([(1, 2)], 0)) == 4

    def test_lin_geometric(self):
        e = Lin(Geometric(Fraction(1, 2)))
        assert eval_expr(e, point([(2, 4)], 0)) == 1

    def test_quad_with_diagonal(self):
        a = operator(2, Power(Fraction(1), 1))
        assert eval_expr(Quad(a), point([(1, 1)], 0)) == 3

    def test_lin_quad_vanish_at_zero_point(self, sampler):
        for _ in range(15):
            w = sampler.seqvec()
            a = sampler.operator()
            m = point([], sampler.rational())
            assert eval_expr(Lin(w), m) == 0
            assert eval_expr(Quad(a), m) == 0


class TestPrintExamples:
    def test_identity_quad(self):
        assert print_expr(Quad(IDENTITY)) == "q(op(1;;))"

    def test_zero(self):
        assert print_expr(Const(Fraction(0))) == "0"

    def test_scaled_x(self):
        assert print_expr(Scale(Fraction(2), X())) == "2*x"

    def test_leading_minus_rides_on_rational(self):
        text = print_expr(Scale(Fraction(-1), X()))
        assert text == "-1*x"
        assert expressions_equal(parse_expr(text), Scale(Fraction(-1), X()))


class TestRoundTrip:
    def test_parse_print_agree_at_random_points(self):
        sampler = make_sampler(11)
        for _ in range(30):
            e = sampler.expression()
            back = parse_expr(print_expr(e))
            for _ in range(20):
                m = sampler.point()
                assert eval_expr(back, m) == eval_expr(e, m)

    def test_canonical_forms_identical(self):
        sampler = make_sampler(12)
        for _ in range(30):
            e = sampler.expression()
            assert expressions_equal(parse_expr(print_expr(e)), e)


class TestRingHomomorphism:
    def test_sum_and_product(self):
        sampler = make_sampler(13)
        for _ in range(25):
            f, g = sampler.expression(), sampler.expression()
            m = sampler.point()
            assert eval_expr(Sum((f, g)), m) == eval_expr(f, m) + eval_expr(g, m)
            assert eval_expr(Prod((f, g)), m) == eval_expr(f, m) * eval_expr(g, m)

    def test_scale(self):
        sampler = make_sampler(14)
        for _ in range(25):
            f = sampler.expression()
            c = sampler.rational()
            m = sampler.point()
            assert eval_expr(Scale(c, f), m) == c * eval_expr(f, m)


class TestCanonicalForm:
    def test_linearity_of_lin_in_its_vector(self):
        split = Sum((Lin(finite([(1, 1)])), Scale(Fraction(-1), Lin(finite([(4, 1)])))))
        joint = Lin(finite([(1, 1), (4, -1)]))
        assert expressions_equal(split, joint)

    def test_quad_of_finite_diag_expands_to_squares(self):
        a = operator(0, finite([(2, Fraction(1, 2))]))
        lin = Lin(finite([(2, 1)]))
        assert expressions_equal(Quad(a), Scale(Fraction(1, 2), Prod((lin, lin))))

    def test_rank_one_quad_expands_to_product(self):
        u, w = finite([(1, 1)]), finite([(2, 3)])
        a = operator(0, None, [(1, u, w)])
        assert expressions_equal(Quad(a), Scale(Fraction(3), Prod((Lin(u), Lin(basisvec(2))))))


def basisvec(k):
    return finite([(k, 1)])


@given(st.fractions(max_denominator=20, min_value=-50, max_value=50))
@settings(max_examples=80, deadline=None)
def test_rational_literals_round_trip(q):
    e = parse_expr(str(Fraction(q)))
    assert eval_expr(e, point([], 0)) == q


@given(
    st.lists(
        st.tuples(
            st.integers(1, 9),
            st.fractions(max_denominator=6, min_value=-5, max_value=5).filter(
                lambda q: q != 0
            ),
        ),
        min_size=1,
        max_size=4,
        unique_by=lambda t: t[0],
    )
)
@settings(max_examples=80, deadline=None)
def test_vec_literals_round_trip(pairs):
    from opbrackets import format_vec

    v = finite(pairs)
    assert parse_vec(format_vec(v)) == v
