"""First and second derivatives against an independent interpolation oracle."""

from fractions import Fraction

import pytest

from opbrackets import (
    Const,
    Lin,
    Prod,
    Quad,
    RHO,
    Scale,
    Sum,
    X,
    basis,
    canonicalize,
    ddx,
    delta_ell,
    dirderiv,
    dot,
    eval_expr,
    expressions_equal,
    finite,
    gradient,
    hessian,
    is_zero_expr,
    op_transpose,
    parse_expr,
    point,
    print_expr,
)
from conftest import (
    make_sampler,
    oracle_directional,
    oracle_hessian_pair,
    oracle_second,
)

ZERO_F = Fraction(0)
ONE_F = Fraction(1)


class TestGradientExamples:
    def test_rho_at_origin_vanishes(self):
        g = gradient(RHO, point([], 0))
        assert g.vpart.is_zero() and g.xpart == 0

    def test_linear_function(self, sampler):
        for _ in range(10):
            w = sampler.seqvec()
            m = sampler.point()
            g = gradient(Lin(w), m)
            assert g.xpart == 0
            for k in range(1, 8):
                assert g.vpart.entry(k) == w.entry(k)

    def test_x_times_rho(self):
        m = point([(1, 1)], 3)
        g = gradient(Prod((X(), RHO)), m)
        assert g.vpart.entry(1) == 6
        assert g.vpart.entry(2) == 0
        assert g.xpart == 1
        # independent interpolation oracle, same values
        assert oracle_directional(Prod((X(), RHO)), m, basis(1), ZERO_F) == 6
        assert (
            oracle_directional(Prod((X(), RHO)), m, finite([]), ONE_F) == 1
        )


class TestHessianExamples:
    def test_rho_is_twice_identity(self, sampler):
        for _ in range(5):
            h = hessian(RHO, sampler.point())
            assert h.vv.lam == 2
            assert h.vv.diag.is_zero() and h.vv.rank1 == ()
            assert h.vx.is_zero() and h.xx == 0

    def test_linear_is_flat(self, sampler):
        for _ in range(5):
            h = hessian(Lin(sampler.seqvec()), sampler.point())
            assert h.vv.is_zero() and h.vx.is_zero() and h.xx == 0

    def test_product_of_linears_is_symmetrized_rank_one(self, sampler):
        for _ in range(8):
            w, wp = sampler.seqvec(), sampler.seqvec()
            m = sampler.point()
            h = hessian(Prod((Lin(w), Lin(wp))), m)
            for j in (1, 2, 3, 6):
                for k in (1, 2, 3, 6):
                    expected = w.entry(j) * wp.entry(k) + wp.entry(j) * w.entry(k)
                    assert h.vv.matrix_entry(j, k) == expected


class TestOracleAgreement:
    def test_gradient_and_hessian_blocks(self):
        sampler = make_sampler(31)
        x_dir = (finite([]), ONE_F)
        for _ in range(20):
            f = sampler.expression()
            m = sampler.point()
            g = gradient(f, m)
            h = hessian(f, m)
            dirs = [(basis(k), ZERO_F) for k in (1, 2, 3, 5, 6)]
            for dv, dx in dirs:
                assert g.vpart.dot(dv) == oracle_directional(f, m, dv, dx)
            assert g.xpart == oracle_directional(f, m, *x_dir)
            for dva, dxa in dirs:
                ja = dva.entries[0][0]
                for dvb, dxb in dirs:
                    kb = dvb.entries[0][0]
                    assert h.vv.matrix_entry(ja, kb) == oracle_hessian_pair(
                        f, m, dva, dxa, dvb, dxb
                    )
                assert h.vx.dot(dva) == oracle_hessian_pair(
                    f, m, dva, dxa, *x_dir
                )
            assert h.xx == oracle_second(f, m, *x_dir)

    def test_dirderiv_matches_oracle(self):
        sampler = make_sampler(32)
        for _ in range(15):
            f = sampler.expression()
            m = sampler.point()
            d = sampler.finite_vec()
            assert eval_expr(dirderiv(f, d), m) == oracle_directional(
                f, m, d, ZERO_F
            )


class TestDeltaEll:
    def test_rho(self):
        assert print_expr(delta_ell(RHO)) == "2"

    def test_linear_vanishes(self, sampler):
        for _ in range(10):
            assert is_zero_expr(delta_ell(Lin(sampler.seqvec())))

    def test_x_times_rho(self):
        assert expressions_equal(delta_ell(Prod((X(), RHO))), parse_expr("2*x"))

    def test_agreement_with_jet_formula(self):
        sampler = make_sampler(33)
        for _ in range(25):
            f = sampler.expression()
            m = sampler.point()
            assert eval_expr(delta_ell(f), m) == hessian(f, m).vv.ell()

    def test_pointwise_leibniz(self):
        sampler = make_sampler(34)
        for _ in range(20):
            f, g = sampler.expression(), sampler.expression()
            m = sampler.point()
            lhs = eval_expr(delta_ell(Prod((f, g))), m)
            rhs = eval_expr(delta_ell(f), m) * eval_expr(g, m) + eval_expr(
                f, m
            ) * eval_expr(delta_ell(g), m)
            assert lhs == rhs

    def test_commutes_with_ddx(self):
        sampler = make_sampler(35)
        for _ in range(20):
            f = sampler.expression()
            assert expressions_equal(delta_ell(ddx(f)), ddx(delta_ell(f)))

    def test_queer_versus_kinematic_on_rho(self):
        sampler = make_sampler(36)
        for _ in range(20):
            w = sampler.seqvec()
            m = point([], sampler.rational())
            assert gradient(RHO, m).vpart.dot(w) == 0
            assert eval_expr(delta_ell(RHO), m) == 2


class TestDdx:
    def test_x_squared(self):
        assert expressions_equal(ddx(Prod((X(), X()))), parse_expr("2*x"))

    def test_rho_is_x_free(self):
        assert is_zero_expr(ddx(RHO))

    def test_product_rule(self, sampler):
        w = sampler.seqvec()
        assert expressions_equal(ddx(Prod((X(), Lin(w)))), Lin(w))


class TestStructure:
    def test_hessian_vv_symmetric(self):
        sampler = make_sampler(37)
        for _ in range(15):
            h = hessian(sampler.expression(), sampler.point())
            assert op_transpose(h.vv) == h.vv

    def test_derivations_linear(self):
        sampler = make_sampler(38)
        for op in (ddx, delta_ell):
            for _ in range(10):
                f, g = sampler.expression(), sampler.expression()
                c = sampler.rational()
                combo = Sum((Scale(c, f), g))
                assert expressions_equal(
                    op(combo), Sum((Scale(c, op(f)), op(g)))
                )

    def test_gradient_linear(self):
        sampler = make_sampler(39)
        for _ in range(10):
            f, g = sampler.expression(), sampler.expression()
            c = sampler.rational()
            m = sampler.point()
            combo = gradient(Sum((Scale(c, f), g)), m)
            gf, gg = gradient(f, m), gradient(g, m)
            for k in range(1, 8):
                assert combo.vpart.entry(k) == c * gf.vpart.entry(k) + gg.vpart.entry(k)
            assert combo.xpart == c * gf.xpart + gg.xpart
