"""Expression trees for smooth scalar functions on sequence space x R.

A function of the point (v, x) is a polynomial in the coordinate x, the
linear forms <v, w>, and the quadratic forms <A v, v>.  The tree nodes
are Const, X, Lin, Quad, Sum, Prod and Scale; evaluation at a point with
finite-support v is exact rational arithmetic throughout.

Canonical form
--------------
Every expression normalizes to a polynomial over an independent family
of atoms:

* ``x`` itself;
* linear atoms ip(v, w) with w a monic finite vector, a geometric
  vector, or pow(1, s) (scalar content is pulled into the coefficient);
* irreducible quadratic atoms q(A) where A is the identity or a
  geometric / power diagonal.

Finite-rank and finite-diagonal pieces of a quadratic form are expanded
into products of linear atoms, since <(u (x) w) v, v> = <v, w><u, v>.
The normal form fully distributes products over sums, so two expressions
that differ by regrouping, transposition inside a quadratic form, or
splitting of a linear form across vector components map to the same
polynomial.  That is what lets the bracket axioms be checked by exact
structural equality rather than by tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import DomainError
from .opsym import IDENTITY, OperatorSymbol, operator
from .seqvec import (
    FiniteSupport,
    Geometric,
    Power,
    RatLike,
    SeqVec,
    basis,
    dot,
    finite,
    frac,
    format_vec,
)


@dataclass(frozen=True)
class Point:
    """Evaluation point (v, x) with finite-support v."""

    v: FiniteSupport = FiniteSupport()
    x: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "x", frac(self.x))

    def __str__(self) -> str:
        return f"point({format_vec(self.v)},{self.x})"


def point(pairs: Iterable[tuple[int, RatLike]] = (), x: RatLike = 0) -> Point:
    return Point(finite(pairs), frac(x))


ORIGIN = point()


class Expression:
    """Base node.  Arithmetic operators build raw (uncanonicalized) trees."""

    def __add__(self, other):
        return Sum((self, _as_expr(other)))

    def __radd__(self, other):
        return Sum((_as_expr(other), self))

    def __sub__(self, other):
        return Sum((self, Scale(Fraction(-1), _as_expr(other))))

    def __rsub__(self, other):
        return Sum((_as_expr(other), Scale(Fraction(-1), self)))

    def __mul__(self, other):
        if isinstance(other, Expression):
            return Prod((self, other))
        return Scale(frac(other), self)

    def __rmul__(self, other):
        return Scale(frac(other), self)

    def __neg__(self):
        return Scale(Fraction(-1), self)

    def __str__(self) -> str:
        return print_expr(self)


def _as_expr(x) -> Expression:
    if isinstance(x, Expression):
        return x
    return Const(frac(x))


@dataclass(frozen=True)
class Const(Expression):
    value: Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", frac(self.value))


@dataclass(frozen=True)
class X(Expression):
    """The scalar coordinate of the point (v, x)."""


@dataclass(frozen=True)
class Lin(Expression):
    """The linear form v |-> <v, vec>."""

    vec: SeqVec


@dataclass(frozen=True)
class Quad(Expression):
    """The quadratic form v |-> <A v, v>."""

    op: OperatorSymbol


@dataclass(frozen=True)
class Sum(Expression):
    terms: tuple[Expression, ...]


@dataclass(frozen=True)
class Prod(Expression):
    factors: tuple[Expression, ...]


@dataclass(frozen=True)
class Scale(Expression):
    coeff: Fraction
    arg: Expression

    def __post_init__(self):
        object.__setattr__(self, "coeff", frac(self.coeff))


ZERO = Const(Fraction(0))
ONE = Const(Fraction(1))
RHO = Quad(IDENTITY)  # squared norm <v, v>


def eval_expr(e: Expression, m: Point) -> Fraction:
    """Exact value of e at the point m."""
    if isinstance(e, Const):
        return e.value
    if isinstance(e, X):
        return m.x
    if isinstance(e, Lin):
        return dot(m.v, e.vec)
    if isinstance(e, Quad):
        a = e.op
        total = a.lam * dot(m.v, m.v)
        for c, d in a.diag.components():
            total += c * sum(
                (d.entry(i) * val * val for i, val in m.v.entries), Fraction(0)
            )
        for c, u, w in a.rank1:
            total += c * dot(m.v, w) * dot(m.v, u)
        return total
    if isinstance(e, Sum):
        return sum((eval_expr(t, m) for t in e.terms), Fraction(0))
    if isinstance(e, Prod):
        total = Fraction(1)
        for f in e.factors:
            total *= eval_expr(f, m)
        return total
    if isinstance(e, Scale):
        return e.coeff * eval_expr(e.arg, m)
    raise TypeError(f"not an expression: {e!r}")


# ---------------------------------------------------------------------------
# polynomial normal form


# Atoms hash and compare through a precomputed integer-tuple key;
# Poly dictionaries live on these operations.


@dataclass(frozen=True, eq=False)
class AtomX:
    _KEY = (0,)

    def key(self) -> tuple:
        return self._KEY

    def __hash__(self) -> int:
        return hash(self._KEY)

    def __eq__(self, other) -> bool:
        return isinstance(other, AtomX)

    def text(self) -> str:
        return "x"

    def to_expr(self) -> Expression:
        return X()


@dataclass(frozen=True, eq=False)
class AtomLin:
    vec: SeqVec  # a basis vector e_k, geometric, or pow(1, s)

    def __post_init__(self):
        object.__setattr__(self, "_k", (1,) + self.vec.sort_key())

    def key(self) -> tuple:
        return self._k

    def __hash__(self) -> int:
        return hash(self._k)

    def __eq__(self, other) -> bool:
        return isinstance(other, AtomLin) and self._k == other._k

    def text(self) -> str:
        return f"ip(v,{format_vec(self.vec)})"

    def to_expr(self) -> Expression:
        return Lin(self.vec)


@dataclass(frozen=True, eq=False)
class AtomQuad:
    diag: Union[SeqVec, None]  # None means the identity operator

    def __post_init__(self):
        key = (2,) + ((-1,) if self.diag is None else self.diag.sort_key())
        object.__setattr__(self, "_k", key)

    def key(self) -> tuple:
        return self._k

    def __hash__(self) -> int:
        return hash(self._k)

    def __eq__(self, other) -> bool:
        return isinstance(other, AtomQuad) and self._k == other._k

    def text(self) -> str:
        if self.diag is None:
            return "q(op(1;;))"
        return f"q(op(0;{format_vec(self.diag)};))"

    def to_expr(self) -> Expression:
        if self.diag is None:
            return Quad(IDENTITY)
        return Quad(operator(0, self.diag))


Atom = Union[AtomX, AtomLin, AtomQuad]
Monomial = tuple[Atom, ...]
Poly = dict[Monomial, Fraction]


def _mono(*atoms: Atom) -> Monomial:
    return tuple(sorted(atoms, key=lambda a: a.key()))


def _padd(a: Poly, b: Poly) -> Poly:
    out = dict(a)
    for mono, c in b.items():
        nc = out.get(mono, Fraction(0)) + c
        if nc == 0:
            out.pop(mono, None)
        else:
            out[mono] = nc
    return out


def _pscale(c: Fraction, a: Poly) -> Poly:
    if c == 0:
        return {}
    return {m: c * v for m, v in a.items()}


def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            mono = _mono(*(m1 + m2))
            nc = out.get(mono, Fraction(0)) + c1 * c2
            if nc == 0:
                out.pop(mono, None)
            else:
                out[mono] = nc
    return out


def _lin_poly(w: SeqVec) -> Poly:
    # Lin is linear in its vector, so a finite vector must be expanded
    # into basis coordinates: the atoms {<., e_k>} u {<., geo(r)>} u
    # {<., pow(1,s)>} are linearly independent, arbitrary finite vectors
    # are not.
    if w.is_zero():
        return {}
    if isinstance(w, FiniteSupport):
        return {_mono(AtomLin(basis(idx))): val for idx, val in w.entries}
    if isinstance(w, Geometric):
        return {_mono(AtomLin(w)): Fraction(1)}
    if isinstance(w, Power):
        return {_mono(AtomLin(Power(Fraction(1), w.exponent))): w.coeff}
    raise TypeError(f"not a vector: {w!r}")


def _quad_poly(a: OperatorSymbol) -> Poly:
    out: Poly = {}
    if a.lam != 0:
        out[_mono(AtomQuad(None))] = a.lam
    for c, d in a.diag.components():
        if isinstance(d, FiniteSupport):
            # <diag(d) v, v> = sum d_k <v, e_k>^2, a finite polynomial
            for idx, val in d.entries:
                atom = AtomLin(basis(idx))
                out = _padd(out, {_mono(atom, atom): c * val})
        else:
            out = _padd(out, {_mono(AtomQuad(d)): c})
    for c, u, w in a.rank1:
        # <(u (x) w) v, v> = <v, w> <u, v>
        out = _padd(out, _pscale(c, _pmul(_lin_poly(u), _lin_poly(w))))
    return out


def _poly_raw(e: Expression) -> Poly:
    if isinstance(e, Const):
        return {(): e.value} if e.value != 0 else {}
    if isinstance(e, X):
        return {_mono(AtomX()): Fraction(1)}
    if isinstance(e, Lin):
        return _lin_poly(e.vec)
    if isinstance(e, Quad):
        return _quad_poly(e.op)
    if isinstance(e, Sum):
        out: Poly = {}
        for t in e.terms:
            out = _padd(out, poly_of(t))
        return out
    if isinstance(e, Prod):
        out = {(): Fraction(1)}
        for f in e.factors:
            out = _pmul(out, poly_of(f))
        return out
    if isinstance(e, Scale):
        return _pscale(e.coeff, poly_of(e.arg))
    raise TypeError(f"not an expression: {e!r}")


# Normal forms are recomputed constantly by equality tests and nested
# bracket expansions, so cache per node.  Keys are object ids; holding
# the node in the value pins the id.  Entries are never mutated.
_POLY_CACHE: dict[int, tuple[Expression, Poly]] = {}
_POLY_CACHE_LIMIT = 200_000


def poly_of(e: Expression) -> Poly:
    hit = _POLY_CACHE.get(id(e))
    if hit is not None and hit[0] is e:
        return hit[1]
    p = _poly_raw(e)
    if len(_POLY_CACHE) >= _POLY_CACHE_LIMIT:
        _POLY_CACHE.clear()
    _POLY_CACHE[id(e)] = (e, p)
    return p


def eval_atom(atom: Atom, m: Point) -> Fraction:
    """Exact value of one atom at a point."""
    if isinstance(atom, AtomX):
        return m.x
    if isinstance(atom, AtomLin):
        return dot(m.v, atom.vec)
    if atom.diag is None:
        return dot(m.v, m.v)
    return sum(
        (val * val * atom.diag.entry(idx) for idx, val in m.v.entries),
        Fraction(0),
    )


def eval_poly(p: Poly, m: Point) -> Fraction:
    """Exact value of a normal form at a point, one atom lookup each."""
    cache: dict[Atom, Fraction] = {}
    total = Fraction(0)
    for mono, coeff in p.items():
        term = coeff
        for atom in mono:
            val = cache.get(atom)
            if val is None:
                val = eval_atom(atom, m)
                cache[atom] = val
            term *= val
        total += term
    return total


def _sorted_terms(p: Poly) -> list[tuple[Monomial, Fraction]]:
    return sorted(p.items(), key=lambda kv: (len(kv[0]), [a.key() for a in kv[0]]))


def canonicalize(e: Expression) -> Expression:
    """Rebuild e from its normal form: flat, sorted, scalar-in-front."""
    p = poly_of(e)
    terms: list[Expression] = []
    for mono, coeff in _sorted_terms(p):
        factors = [a.to_expr() for a in mono]
        if not factors:
            terms.append(Const(coeff))
        elif coeff == 1:
            terms.append(factors[0] if len(factors) == 1 else Prod(tuple(factors)))
        else:
            terms.append(Prod(tuple([Const(coeff)] + factors)))
    if not terms:
        out: Expression = ZERO
    elif len(terms) == 1:
        out = terms[0]
    else:
        out = Sum(tuple(terms))
    if len(_POLY_CACHE) < _POLY_CACHE_LIMIT:
        _POLY_CACHE[id(out)] = (out, p)
    return out


def expressions_equal(a: Expression, b: Expression) -> bool:
    """Exact structural equality of normal forms."""
    return poly_of(a) == poly_of(b)


def is_zero_expr(e: Expression) -> bool:
    return not poly_of(e)


def constant_value(e: Expression) -> Fraction:
    """The value of a constant expression; DomainError if not constant."""
    p = poly_of(e)
    if not p:
        return Fraction(0)
    if len(p) == 1 and () in p:
        return p[()]
    raise DomainError(f"expression is not constant: {print_expr(e)}")


def print_expr(e: Expression) -> str:
    """Canonical text form; parses back to the same normal form."""
    parts: list[str] = []
    for i, (mono, coeff) in enumerate(_sorted_terms(poly_of(e))):
        atoms = "*".join(a.text() for a in mono)
        mag = abs(coeff)
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = atoms
        else:
            body = f"{mag}*{atoms}"
        if i == 0:
            # a leading minus sign must ride on a rational factor
            if coeff < 0:
                body = str(coeff) if not mono else f"{coeff}*{atoms}"
            parts.append(body)
        else:
            parts.append(("-" if coeff < 0 else "+") + body)
    if not parts:
        return "0"
    return "".join(parts)
