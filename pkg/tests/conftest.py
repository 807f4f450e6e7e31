"""Shared fixtures and the independent derivative oracle.

The oracle differentiates by exact univariate interpolation: restrict an
expression to a rational line through the point, sample it at small
integer parameters, solve the Vandermonde system over Fraction, and read
the derivative off the coefficients.  It never touches the jet module,
so agreement is evidence rather than tautology.
"""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from opbrackets import (
    Const,
    Expression,
    Lin,
    Point,
    Prod,
    Quad,
    Scale,
    Sum,
    X,
    ZERO_VEC,
    eval_expr,
    finite,
    point,
)
from opbrackets.sampling import Sampler
from opbrackets.seqvec import FiniteSupport


@pytest.fixture
def sampler() -> Sampler:
    return Sampler(random.Random(0))


def make_sampler(seed: int) -> Sampler:
    return Sampler(random.Random(seed))


def expr_degree(e: Expression) -> int:
    """Total degree bound by tree walk; independent of the normal form."""
    if isinstance(e, Const):
        return 0
    if isinstance(e, X):
        return 1
    if isinstance(e, Lin):
        return 1
    if isinstance(e, Quad):
        return 2
    if isinstance(e, Sum):
        return max((expr_degree(t) for t in e.terms), default=0)
    if isinstance(e, Prod):
        return sum(expr_degree(f) for f in e.factors)
    if isinstance(e, Scale):
        return expr_degree(e.arg)
    raise TypeError(f"not an expression: {e!r}")


def shift_point(m: Point, dv: FiniteSupport, dx: Fraction, t: Fraction) -> Point:
    """The point m + t*(dv, dx), built with plain dictionary arithmetic."""
    entries: dict[int, Fraction] = dict(m.v.entries)
    for idx, val in dv.entries:
        entries[idx] = entries.get(idx, Fraction(0)) + t * val
    pairs = [(i, c) for i, c in sorted(entries.items()) if c != 0]
    return point(pairs, m.x + t * dx)


def _solve_vandermonde(ts: list[Fraction], vals: list[Fraction]) -> list[Fraction]:
    """Coefficients of the unique polynomial through (t_i, val_i), exactly."""
    n = len(ts)
    rows = [[t**j for j in range(n)] + [v] for t, v in zip(ts, vals)]
    for col in range(n):
        pivot = next(r for r in range(col, n) if rows[r][col] != 0)
        rows[col], rows[pivot] = rows[pivot], rows[col]
        lead = rows[col][col]
        rows[col] = [c / lead for c in rows[col]]
        for r in range(n):
            if r != col and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
    return [rows[i][n] for i in range(n)]


def line_coeffs(
    f: Expression, m: Point, dv: FiniteSupport, dx: Fraction
) -> list[Fraction]:
    """Exact coefficients of t -> f(m + t*(dv, dx))."""
    degree = expr_degree(f)
    ts = [Fraction(k) for k in range(degree + 1)]
    vals = [eval_expr(f, shift_point(m, dv, dx, t)) for t in ts]
    return _solve_vandermonde(ts, vals)


def _coeff(coeffs: list[Fraction], k: int) -> Fraction:
    return coeffs[k] if k < len(coeffs) else Fraction(0)


def oracle_directional(f, m, dv, dx=Fraction(0)) -> Fraction:
    """First derivative of f at m along (dv, dx)."""
    return _coeff(line_coeffs(f, m, dv, dx), 1)


def oracle_second(f, m, dv, dx=Fraction(0)) -> Fraction:
    """Pure second derivative d.H.d along (dv, dx): twice the t^2 term."""
    return 2 * _coeff(line_coeffs(f, m, dv, dx), 2)


def _merge(dva: FiniteSupport, dvb: FiniteSupport) -> FiniteSupport:
    entries: dict[int, Fraction] = dict(dva.entries)
    for idx, val in dvb.entries:
        entries[idx] = entries.get(idx, Fraction(0)) + val
    return finite(sorted(entries.items()))


def oracle_hessian_pair(f, m, dva, dxa, dvb, dxb) -> Fraction:
    """Mixed second derivative a.H.b by polarization of pure seconds."""
    both = oracle_second(f, m, _merge(dva, dvb), dxa + dxb)
    aa = oracle_second(f, m, dva, dxa)
    bb = oracle_second(f, m, dvb, dxb)
    return (both - aa - bb) / 2


ZERO_FIN = ZERO_VEC
assert isinstance(ZERO_FIN, FiniteSupport)
