"""First and second jets, and the derivations acting on expressions.

Three derivations matter here:

* ``dirderiv(f, d)`` -- the kinematic derivative along a fixed vector
  direction d in the sequence-space factor, returned as an expression;
* ``ddx(f)``         -- the derivative along the scalar coordinate;
* ``delta_ell(f)``   -- the second-order tangent vector: it feeds the
  Hessian of f into the diagonal-limit functional.

``delta_ell`` is computed by structural recursion: it kills constants,
the coordinate x and every linear form, sends a quadratic form <A v, v>
to the constant ell(A + A^T) = 2*lam(A), and obeys the product rule
delta(f*g) = delta(f)*g + f*delta(g).  The product rule is consistent
with the Hessian picture because the rank-one terms contributed by
products of gradients are compact, and the functional vanishes on
compact symbols.  The agreement eval(delta_ell(f), m) =
ell(hessian(f, m).vv) is an invariant the tests exercise at random
inputs.

A ``DualVector`` is the first jet (gradient) at a point: a vector
combination in the sequence factor and a rational in the x factor.  A
``HessianSymbol`` is the second jet: a symmetric operator symbol for the
vv block, a vector combination for the mixed vx block, and a rational
for xx.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .expr import (
    Const,
    Expression,
    Lin,
    Point,
    Prod,
    Quad,
    Scale,
    Sum,
    X,
    ZERO,
    canonicalize,
    eval_expr,
)
from .opsym import (
    OperatorSymbol,
    ZERO_OP,
    op_add,
    op_apply,
    op_scale,
    op_symmetrize,
    op_transpose,
    operator,
)
from .seqvec import SeqVec, VecComb, comb


@dataclass(frozen=True)
class DualVector:
    """Gradient at a point: (v-part, x-part) of the first jet."""

    vpart: VecComb = VecComb()
    xpart: Fraction = Fraction(0)

    def pair(self, w: Union[SeqVec, VecComb]) -> Fraction:
        """Pairing against a tangent direction in the sequence factor."""
        return self.vpart.dot(w)

    def is_zero(self) -> bool:
        return self.vpart.is_zero() and self.xpart == 0

    def __str__(self) -> str:
        return f"(v={self.vpart}; x={self.xpart})"


@dataclass(frozen=True)
class HessianSymbol:
    """Second jet at a point, in blocks: vv operator, vx vector, xx scalar."""

    vv: OperatorSymbol = ZERO_OP
    vx: VecComb = VecComb()
    xx: Fraction = Fraction(0)

    def is_zero(self) -> bool:
        return self.vv.is_zero() and self.vx.is_zero() and self.xx == 0


ZERO_JET = DualVector()
ZERO_HESSIAN = HessianSymbol()


def gradient(f: Expression, m: Point) -> DualVector:
    """First jet of f at m, exactly."""
    if isinstance(f, (Const,)):
        return ZERO_JET
    if isinstance(f, X):
        return DualVector(VecComb(), Fraction(1))
    if isinstance(f, Lin):
        return DualVector(comb(f.vec), Fraction(0))
    if isinstance(f, Quad):
        return DualVector(op_apply(op_symmetrize(f.op), m.v), Fraction(0))
    if isinstance(f, Sum):
        parts = [gradient(t, m) for t in f.terms]
        return DualVector(
            VecComb.of(*((1, p.vpart) for p in parts)),
            sum((p.xpart for p in parts), Fraction(0)),
        )
    if isinstance(f, Scale):
        g = gradient(f.arg, m)
        return DualVector(g.vpart.scale(f.coeff), f.coeff * g.xpart)
    if isinstance(f, Prod):
        # fold the product rule with exact values at m
        grad = ZERO_JET
        value = Fraction(1)
        for factor in f.factors:
            gf = gradient(factor, m)
            vf = eval_expr(factor, m)
            grad = DualVector(
                VecComb.of((vf, grad.vpart), (value, gf.vpart)),
                vf * grad.xpart + value * gf.xpart,
            )
            value *= vf
        return grad
    raise TypeError(f"not an expression: {f!r}")


def hessian(f: Expression, m: Point) -> HessianSymbol:
    """Second jet of f at m.  The vv block equals its own transpose."""
    if isinstance(f, (Const, X, Lin)):
        return ZERO_HESSIAN
    if isinstance(f, Quad):
        return HessianSymbol(op_symmetrize(f.op), VecComb(), Fraction(0))
    if isinstance(f, Sum):
        vv = ZERO_OP
        vx = VecComb()
        xx = Fraction(0)
        for t in f.terms:
            h = hessian(t, m)
            vv = op_add(vv, h.vv)
            vx = vx.add(h.vx)
            xx += h.xx
        return HessianSymbol(vv, vx, xx)
    if isinstance(f, Scale):
        h = hessian(f.arg, m)
        return HessianSymbol(op_scale(f.coeff, h.vv), h.vx.scale(f.coeff), f.coeff * h.xx)
    if isinstance(f, Prod):
        # binary product rule folded left to right:
        # (fg)'' = f''*g(m) + f(m)*g'' + f' (x) g' + g' (x) f'
        run_val = Fraction(1)
        run_grad = ZERO_JET
        run_hess = ZERO_HESSIAN
        for factor in f.factors:
            gv = eval_expr(factor, m)
            gg = gradient(factor, m)
            gh = hessian(factor, m)
            vv = op_add(
                op_add(op_scale(gv, run_hess.vv), op_scale(run_val, gh.vv)),
                operator(
                    0,
                    None,
                    [(1, run_grad.vpart, gg.vpart), (1, gg.vpart, run_grad.vpart)],
                ),
            )
            vx = VecComb.of(
                (gv, run_hess.vx),
                (run_val, gh.vx),
                (gg.xpart, run_grad.vpart),
                (run_grad.xpart, gg.vpart),
            )
            xx = (
                gv * run_hess.xx
                + run_val * gh.xx
                + 2 * run_grad.xpart * gg.xpart
            )
            run_hess = HessianSymbol(vv, vx, xx)
            run_grad = DualVector(
                VecComb.of((gv, run_grad.vpart), (run_val, gg.vpart)),
                gv * run_grad.xpart + run_val * gg.xpart,
            )
            run_val *= gv
        return run_hess
    raise TypeError(f"not an expression: {f!r}")


def ddx(f: Expression) -> Expression:
    """Derivative along the scalar coordinate, as a canonical expression."""
    return canonicalize(_ddx_raw(f))


def _ddx_raw(f: Expression) -> Expression:
    if isinstance(f, (Const, Lin, Quad)):
        return ZERO
    if isinstance(f, X):
        return Const(Fraction(1))
    if isinstance(f, Sum):
        return Sum(tuple(_ddx_raw(t) for t in f.terms))
    if isinstance(f, Scale):
        return Scale(f.coeff, _ddx_raw(f.arg))
    if isinstance(f, Prod):
        return _leibniz(f.factors, _ddx_raw)
    raise TypeError(f"not an expression: {f!r}")


def delta_ell(f: Expression) -> Expression:
    """Second-order tangent vector at work: ell applied to the Hessian.

    Returns the canonical expression for the function
    m |-> ell(hessian(f, m).vv).
    """
    return canonicalize(_delta_raw(f))


def _delta_raw(f: Expression) -> Expression:
    if isinstance(f, (Const, X, Lin)):
        return ZERO
    if isinstance(f, Quad):
        return Const(op_symmetrize(f.op).ell())
    if isinstance(f, Sum):
        return Sum(tuple(_delta_raw(t) for t in f.terms))
    if isinstance(f, Scale):
        return Scale(f.coeff, _delta_raw(f.arg))
    if isinstance(f, Prod):
        return _leibniz(f.factors, _delta_raw)
    raise TypeError(f"not an expression: {f!r}")


def dirderiv(f: Expression, d: SeqVec) -> Expression:
    """Kinematic derivative along direction d, as a canonical expression."""
    return canonicalize(_dirderiv_raw(f, d))


def _dirderiv_raw(f: Expression, d: SeqVec) -> Expression:
    if isinstance(f, (Const, X)):
        return ZERO
    if isinstance(f, Lin):
        return Const(comb(d).dot(f.vec))
    if isinstance(f, Quad):
        # derivative of <A v, v> along d is <v, (A + A^T) d>
        image = op_apply(op_symmetrize(f.op), d)
        return Sum(tuple(Scale(c, Lin(w)) for c, w in image.components()))
    if isinstance(f, Sum):
        return Sum(tuple(_dirderiv_raw(t, d) for t in f.terms))
    if isinstance(f, Scale):
        return Scale(f.coeff, _dirderiv_raw(f.arg, d))
    if isinstance(f, Prod):
        return _leibniz(f.factors, lambda g: _dirderiv_raw(g, d))
    raise TypeError(f"not an expression: {f!r}")


def _leibniz(factors: tuple[Expression, ...], deriv) -> Expression:
    terms = []
    for i in range(len(factors)):
        replaced = list(factors)
        replaced[i] = deriv(factors[i])
        terms.append(Prod(tuple(replaced)))
    return Sum(tuple(terms))
