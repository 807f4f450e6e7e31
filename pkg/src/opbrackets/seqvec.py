"""Square-summable sequence vectors with exact rational entries.

Vectors live in the space of square-summable sequences indexed from 1.
Three closed forms are supported, and every entry of every form is an
exact ``Fraction``:

* ``FiniteSupport`` -- finitely many nonzero entries;
* ``Geometric(r)``  -- entry k equals r**k, with |r| < 1;
* ``Power(c, s)``   -- entry k equals c / k**s, with s >= 1.

``VecComb`` is a formal rational combination of closed forms.  It is the
closure of the three forms under addition and scaling, and is what linear
operations (gradients, operator images) return.

Inner products are computed exactly whenever the series has a rational
closed form: finite-support against anything, and geometric against
geometric (a geometric series).  The remaining pairings (power against
power, geometric against power) sum to zeta and polylogarithm values,
which are not rational; those raise ``DomainError``.  No computation in
this package needs them.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .errors import DomainError

RatLike = Union[Fraction, int, str]


def frac(x: RatLike) -> Fraction:
    """Coerce to Fraction.  Fraction already keeps lowest terms, q > 0."""
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class FiniteSupport:
    """Finitely many nonzero entries, stored as (index, value) pairs.

    Indices are >= 1 and strictly increasing; values are nonzero.  Build
    through :func:`finite`, which merges duplicates and drops zeros.
    """

    entries: tuple[tuple[int, Fraction], ...] = ()

    def __post_init__(self):
        last = 0
        for idx, val in self.entries:
            if idx <= last:
                raise DomainError(
                    f"finite-support indices must be >= 1 and strictly increasing, got {idx} after {last}"
                )
            if val == 0:
                raise DomainError(f"finite-support values must be nonzero (index {idx})")
            last = idx

    def entry(self, k: int) -> Fraction:
        for idx, val in self.entries:
            if idx == k:
                return val
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.entries

    def scaled(self, c: RatLike) -> "FiniteSupport":
        c = frac(c)
        if c == 0:
            return FiniteSupport()
        return FiniteSupport(tuple((i, c * v) for i, v in self.entries))

    def sort_key(self) -> tuple:
        flat: list[int] = [0, len(self.entries)]
        for idx, val in self.entries:
            flat.extend((idx, val.numerator, val.denominator))
        return tuple(flat)


@dataclass(frozen=True)
class Geometric:
    """Entry k is ratio**k; square-summable because |ratio| < 1."""

    ratio: Fraction

    def __post_init__(self):
        object.__setattr__(self, "ratio", frac(self.ratio))
        if abs(self.ratio) >= 1:
            raise DomainError(f"geometric ratio must satisfy |r| < 1, got {self.ratio}")

    def entry(self, k: int) -> Fraction:
        return self.ratio**k

    def is_zero(self) -> bool:
        return self.ratio == 0

    def sort_key(self) -> tuple:
        return (1, self.ratio.numerator, self.ratio.denominator)


@dataclass(frozen=True)
class Power:
    """Entry k is coeff / k**exponent; square-summable since exponent >= 1."""

    coeff: Fraction
    exponent: int

    def __post_init__(self):
        object.__setattr__(self, "coeff", frac(self.coeff))
        if not isinstance(self.exponent, int) or self.exponent < 1:
            raise DomainError(f"power exponent must be an integer >= 1, got {self.exponent}")

    def entry(self, k: int) -> Fraction:
        return self.coeff / Fraction(k**self.exponent)

    def is_zero(self) -> bool:
        return self.coeff == 0

    def sort_key(self) -> tuple:
        return (2, self.exponent, self.coeff.numerator, self.coeff.denominator)


SeqVec = Union[FiniteSupport, Geometric, Power]


def finite(pairs: Iterable[tuple[int, RatLike]]) -> FiniteSupport:
    """Normalizing constructor: merges duplicate indices, drops zeros."""
    acc: dict[int, Fraction] = {}
    for idx, val in pairs:
        idx = int(idx)
        if idx < 1:
            raise DomainError(f"sequence indices start at 1, got {idx}")
        acc[idx] = acc.get(idx, Fraction(0)) + frac(val)
    return FiniteSupport(tuple(sorted((i, v) for i, v in acc.items() if v != 0)))


def basis(k: int) -> FiniteSupport:
    return finite([(k, 1)])


ZERO_VEC = FiniteSupport()


def dot(a: SeqVec, b: SeqVec) -> Fraction:
    """Exact inner product of two closed forms.

    Raises DomainError for the pairings whose series has no rational
    closed form (power/power sums to a zeta value, geometric/power to a
    polylogarithm).
    """
    if isinstance(b, FiniteSupport) and not isinstance(a, FiniteSupport):
        a, b = b, a
    if isinstance(a, FiniteSupport):
        return sum((val * b.entry(idx) for idx, val in a.entries), Fraction(0))
    if a.is_zero() or b.is_zero():
        return Fraction(0)
    if isinstance(a, Geometric) and isinstance(b, Geometric):
        q = a.ratio * b.ratio
        return q / (1 - q)  # geometric series from k = 1
    raise DomainError(
        f"inner product of {type(a).__name__} and {type(b).__name__} has no rational closed form"
    )


def pointwise_product(a: SeqVec, b: SeqVec) -> SeqVec:
    """Entrywise product, when the result stays in the closed-form class."""
    if isinstance(b, FiniteSupport) and not isinstance(a, FiniteSupport):
        a, b = b, a
    if isinstance(a, FiniteSupport):
        return finite((idx, val * b.entry(idx)) for idx, val in a.entries)
    if isinstance(a, Geometric) and isinstance(b, Geometric):
        return Geometric(a.ratio * b.ratio)
    if isinstance(a, Power) and isinstance(b, Power):
        return Power(a.coeff * b.coeff, a.exponent + b.exponent)
    raise DomainError(
        f"entrywise product of {type(a).__name__} and {type(b).__name__} leaves the closed-form class"
    )


def content_and_monic(v: FiniteSupport) -> tuple[Fraction, FiniteSupport]:
    """Split a nonzero finite vector as c * v_hat with leading value 1."""
    if v.is_zero():
        raise DomainError("zero vector has no monic form")
    c = v.entries[0][1]
    return c, v.scaled(1 / c)


@dataclass(frozen=True)
class VecComb:
    """Formal rational combination of closed-form vectors.

    The finite parts are merged into a single exact vector; geometric
    parts are kept per ratio and power parts per exponent (against the
    basis form with coefficient 1).  This is the smallest class closed
    under addition and scaling that contains the three vector forms.
    """

    fin: FiniteSupport = FiniteSupport()
    geo: tuple[tuple[Fraction, Fraction], ...] = ()  # (coeff, ratio), ratio-sorted
    pw: tuple[tuple[Fraction, int], ...] = ()  # (coeff, exponent), exponent-sorted

    @classmethod
    def zero(cls) -> "VecComb":
        return cls()

    @classmethod
    def of(cls, *terms: tuple[RatLike, Union[SeqVec, "VecComb"]]) -> "VecComb":
        fin_terms: list[tuple[int, Fraction]] = []
        geo_acc: dict[Fraction, Fraction] = {}
        pw_acc: dict[int, Fraction] = {}

        def add_term(c: Fraction, v: Union[SeqVec, "VecComb"]) -> None:
            if isinstance(v, VecComb):
                for cc, vv in v.components():
                    add_term(c * cc, vv)
            elif isinstance(v, FiniteSupport):
                fin_terms.extend((i, c * val) for i, val in v.entries)
            elif isinstance(v, Geometric):
                if v.ratio != 0 and c != 0:
                    geo_acc[v.ratio] = geo_acc.get(v.ratio, Fraction(0)) + c
            elif isinstance(v, Power):
                if v.coeff != 0 and c != 0:
                    pw_acc[v.exponent] = pw_acc.get(v.exponent, Fraction(0)) + c * v.coeff
            else:
                raise TypeError(f"not a vector: {v!r}")

        for coeff, vec in terms:
            add_term(frac(coeff), vec)
        geo_part = tuple(
            sorted(((c, r) for r, c in geo_acc.items() if c != 0), key=lambda t: t[1])
        )
        pw_part = tuple(sorted(((c, s) for s, c in pw_acc.items() if c != 0), key=lambda t: t[1]))
        return cls(finite(fin_terms), geo_part, pw_part)

    def components(self) -> tuple[tuple[Fraction, SeqVec], ...]:
        """Decompose into (coefficient, closed-form vector) terms."""
        out: list[tuple[Fraction, SeqVec]] = []
        if not self.fin.is_zero():
            out.append((Fraction(1), self.fin))
        out.extend((c, Geometric(r)) for c, r in self.geo)
        out.extend((c, Power(Fraction(1), s)) for c, s in self.pw)
        return tuple(out)

    def primitive_components(self) -> tuple[tuple[Fraction, SeqVec], ...]:
        """Like components(), but the finite part is split off as c * monic."""
        out: list[tuple[Fraction, SeqVec]] = []
        if not self.fin.is_zero():
            out.append(content_and_monic(self.fin))
        out.extend((c, Geometric(r)) for c, r in self.geo)
        out.extend((c, Power(Fraction(1), s)) for c, s in self.pw)
        return tuple(out)

    def add(self, other: "VecComb") -> "VecComb":
        return VecComb.of((1, self), (1, other))

    def scale(self, c: RatLike) -> "VecComb":
        return VecComb.of((c, self))

    def entry(self, k: int) -> Fraction:
        total = self.fin.entry(k)
        for c, r in self.geo:
            total += c * r**k
        for c, s in self.pw:
            total += c / Fraction(k**s)
        return total

    def is_zero(self) -> bool:
        return self.fin.is_zero() and not self.geo and not self.pw

    def dot(self, other: Union[SeqVec, "VecComb"]) -> Fraction:
        others = other.components() if isinstance(other, VecComb) else ((Fraction(1), other),)
        total = Fraction(0)
        for c1, v1 in self.components():
            for c2, v2 in others:
                total += c1 * c2 * dot(v1, v2)
        return total

    def truncated(self, n: int) -> tuple[Fraction, ...]:
        return tuple(self.entry(k) for k in range(1, n + 1))

    def __str__(self) -> str:
        return format_veccomb(self)


def comb(v: Union[SeqVec, VecComb]) -> VecComb:
    return v if isinstance(v, VecComb) else VecComb.of((1, v))


def format_vec(v: SeqVec) -> str:
    """Literal text for a single closed form, matching the input grammar."""
    if isinstance(v, FiniteSupport):
        return "[" + ",".join(f"{i}:{val}" for i, val in v.entries) + "]"
    if isinstance(v, Geometric):
        return f"geo({v.ratio})"
    if isinstance(v, Power):
        return f"pow({v.coeff},{v.exponent})"
    raise TypeError(f"not a vector: {v!r}")


def format_veccomb(vc: VecComb) -> str:
    """Display form for a combination; power coefficients fold into pow()."""
    parts: list[tuple[bool, str]] = []  # (negative, magnitude text)
    if not vc.fin.is_zero():
        parts.append((False, format_vec(vc.fin)))
    for c, r in vc.geo:
        mag = f"geo({r})" if abs(c) == 1 else f"{abs(c)}*geo({r})"
        parts.append((c < 0, mag))
    for c, s in vc.pw:
        parts.append((c < 0, f"pow({abs(c)},{s})"))
    if not parts:
        return "[]"
    pieces = []
    for i, (neg, mag) in enumerate(parts):
        if i == 0:
            pieces.append(("-" if neg else "") + mag)
        else:
            pieces.append(("-" if neg else "+") + mag)
    return "".join(pieces)
