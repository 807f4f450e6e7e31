"""Structured symbols for bounded operators of the form lam*I + D + F.

An ``OperatorSymbol`` denotes a scalar multiple of the identity, plus a
diagonal operator whose entries tend to zero, plus a finite-rank part
built from rank-one tensors (u (x) w)(a) = <a, w> u.  The diagonal and
finite-rank parts are compact, so the subalgebra is closed under the
operations implemented here and large enough for every computation in
this package.

On this subalgebra the shift-invariant limit functional has a computable
realization: ell(A) is the limit of the diagonal entries <A e_n, e_n>,
which is exactly the identity coefficient ``lam``.  It is 1 on the
identity and 0 on every compact symbol, which is the behaviour the
second-order tangent vector downstream relies on.

Diagonals and rank-one parts are stored as formal rational combinations
(coefficients on closed-form vectors) so that sums, scalings and
transposes of symbols stay representable; a plain single-vector diagonal
would not be closed under the Hessian calculus of products.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .seqvec import (
    FiniteSupport,
    Geometric,
    Power,
    RatLike,
    SeqVec,
    VecComb,
    comb,
    dot,
    frac,
    pointwise_product,
)

Rank1Term = tuple[Fraction, SeqVec, SeqVec]  # coeff * (u (x) w)


@dataclass(frozen=True)
class OperatorSymbol:
    """lam * I + diagonal(diag) + sum of coeff * (u (x) w) terms.

    ``diag`` holds the diagonal entries d_k as a vector combination (the
    entries tend to zero because every closed form does).  ``rank1``
    terms keep u and w primitive: monic finite-support, geometric, or
    pow(1, s); scalings live in the coefficient.  Build via
    :func:`operator`, which normalizes.
    """

    lam: Fraction = Fraction(0)
    diag: VecComb = VecComb()
    rank1: tuple[Rank1Term, ...] = ()

    def ell(self) -> Fraction:
        """Diagonal-limit functional: 1 on I, 0 on the compact parts."""
        return self.lam

    def is_compact(self) -> bool:
        return self.lam == 0

    def diagonal_entry(self, n: int) -> Fraction:
        """<A e_n, e_n>, exactly."""
        total = self.lam + self.diag.entry(n)
        for c, u, w in self.rank1:
            total += c * u.entry(n) * w.entry(n)
        return total

    def matrix_entry(self, j: int, k: int) -> Fraction:
        """<A e_k, e_j>, exactly (row j, column k)."""
        total = Fraction(0)
        if j == k:
            total += self.lam + self.diag.entry(j)
        for c, u, w in self.rank1:
            total += c * u.entry(j) * w.entry(k)
        return total

    def is_zero(self) -> bool:
        return self.lam == 0 and self.diag.is_zero() and not self.rank1

    def __str__(self) -> str:
        return format_operator(self)


def _normalize_rank1(
    terms: Iterable[tuple[RatLike, Union[SeqVec, VecComb], Union[SeqVec, VecComb]]]
) -> tuple[Rank1Term, ...]:
    acc: dict[tuple[tuple, tuple], tuple[Fraction, SeqVec, SeqVec]] = {}
    for c, u, w in terms:
        c = frac(c)
        if c == 0:
            continue
        for cu, pu in comb(u).primitive_components():
            for cw, pw in comb(w).primitive_components():
                coeff = c * cu * cw
                key = (pu.sort_key(), pw.sort_key())
                if key in acc:
                    old, _, _ = acc[key]
                    coeff += old
                acc[key] = (coeff, pu, pw)
    return tuple(
        (c, u, w) for _, (c, u, w) in sorted(acc.items()) if c != 0
    )


def operator(
    lam: RatLike = 0,
    diag: Union[SeqVec, VecComb, None] = None,
    rank1: Iterable[tuple[RatLike, Union[SeqVec, VecComb], Union[SeqVec, VecComb]]] = (),
) -> OperatorSymbol:
    """Normalizing constructor for operator symbols."""
    d = VecComb() if diag is None else comb(diag)
    return OperatorSymbol(frac(lam), d, _normalize_rank1(rank1))


IDENTITY = operator(1)
ZERO_OP = operator(0)


def op_add(a: OperatorSymbol, b: OperatorSymbol) -> OperatorSymbol:
    return operator(
        a.lam + b.lam,
        a.diag.add(b.diag),
        [(c, u, w) for c, u, w in a.rank1] + [(c, u, w) for c, u, w in b.rank1],
    )


def op_scale(c: RatLike, a: OperatorSymbol) -> OperatorSymbol:
    c = frac(c)
    return operator(c * a.lam, a.diag.scale(c), [(c * cc, u, w) for cc, u, w in a.rank1])


def op_transpose(a: OperatorSymbol) -> OperatorSymbol:
    # (u (x) w)^T = w (x) u; identity and diagonals are fixed
    return operator(a.lam, a.diag, [(c, w, u) for c, u, w in a.rank1])


def op_symmetrize(a: OperatorSymbol) -> OperatorSymbol:
    """A + A^T, the operator a quadratic form differentiates to."""
    return op_add(a, op_transpose(a))


def op_apply(a: OperatorSymbol, v: SeqVec) -> VecComb:
    """Image A v as a vector combination.

    Always succeeds for finite-support v.  For geometric and power v it
    succeeds when the diagonal action and the rank-one pairings stay in
    the exact class, and raises DomainError otherwise.
    """
    terms: list[tuple[Fraction, Union[SeqVec, VecComb]]] = [(a.lam, v)]
    for c, d in a.diag.components():
        terms.append((c, pointwise_product(d, v)))
    for c, u, w in a.rank1:
        terms.append((c * dot(v, w), u))
    return VecComb.of(*terms)


def format_operator(a: OperatorSymbol) -> str:
    """Literal-style text op(lam;diag;pairs).

    Round-trips through the parser for any symbol whose diagonal is a
    single closed form (coefficients fold into finite and pow literals,
    rank-one coefficients print as a "c*" prefix the parser accepts).  A
    diagonal that genuinely mixes closed forms prints as a sum, which is
    display only.
    """
    from .seqvec import format_veccomb, format_vec

    if a.diag.is_zero():
        diag_txt = ""
    else:
        comps = a.diag.components()
        if len(comps) == 1:
            c, v = comps[0]
            if c == 1:
                diag_txt = format_vec(v)
            elif isinstance(v, FiniteSupport):
                diag_txt = format_vec(v.scaled(c))
            elif isinstance(v, Power):
                diag_txt = format_vec(Power(c * v.coeff, v.exponent))
            else:
                diag_txt = format_veccomb(a.diag)
        else:
            diag_txt = format_veccomb(a.diag)
    pair_txts = []
    for c, u, w in a.rank1:
        body = f"({format_vec(u)},{format_vec(w)})"
        pair_txts.append(body if c == 1 else f"{c}*{body}")
    return f"op({a.lam};{diag_txt};{','.join(pair_txts)})"
