"""Brackets built from a pair of commuting operational vector fields.

An ``OperationalField`` acts on expressions as a derivation with three
kinds of parts, each weighted by an expression coefficient: kinematic
parts (directional derivative along a vector), a d/dx part, and a queer
part (the second-order tangent vector delta_ell).  Given two fields
that commute as operators on expressions, the skew combination

    {f, g} = d1(f) * d2(g) - d2(f) * d1(g)

is bilinear, skew, a derivation in each slot, and satisfies the Jacobi
identity; commutativity of the two fields is exactly what makes Jacobi
work.  ``check_axioms`` verifies all three properties on random inputs
with exact arithmetic.

At a point where both fields are kinematic the bracket is induced by a
bivector: ``tensor_at`` builds it as a sum of wedge pairs, ``sharp``
turns a covector into the tangent vector the bivector pairs it with.
At a point where one field is queer and the fields are independent, no
bivector exists, which is what ``QueerAtPoint`` reports; the certificate
produced by ``queer_witness`` is a pair (h, f) with f critical at the
point whose bracket value is nonetheless nonzero, something no bivector
acting on first jets can produce.
"""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .errors import (
    AxiomViolation,
    DomainError,
    NonCommutingFields,
    QueerAtPoint,
    WitnessNotFound,
)
from .expr import (
    Const,
    Expression,
    Lin,
    Point,
    Prod,
    Quad,
    RHO,
    Scale,
    Sum,
    X,
    ZERO,
    _padd,
    _pmul,
    _pscale,
    canonicalize,
    eval_expr,
    eval_poly,
    expressions_equal,
    is_zero_expr,
    point,
    poly_of,
    print_expr,
)
from .jets import (
    DualVector,
    _ddx_raw,
    _delta_raw,
    _dirderiv_raw,
    gradient,
)
from .opsym import IDENTITY, op_apply, op_symmetrize, operator
from .seqvec import (
    Geometric,
    Power,
    SeqVec,
    VecComb,
    basis,
    format_vec,
)

# ---------------------------------------------------------------------------
# fields


@dataclass(frozen=True)
class OperationalField:
    """Derivation with kinematic, d/dx and queer parts.

    Each kinematic part is (coefficient expression, direction vector);
    several are allowed, which keeps the class closed under the field
    algebra that Hamiltonian fields need.  ``dx`` and ``queer`` are
    coefficient expressions or None when absent.
    """

    kin: tuple[tuple[Expression, SeqVec], ...] = ()
    dx: Union[Expression, None] = None
    queer: Union[Expression, None] = None

    def __str__(self) -> str:
        return format_field(self)


def field(
    kin=(),
    dx: Union[Expression, None] = None,
    queer: Union[Expression, None] = None,
) -> OperationalField:
    """Normalizing constructor: canonical coefficients, zero parts dropped,
    kinematic parts merged per direction and sorted."""
    acc: dict[tuple, tuple[SeqVec, Expression]] = {}
    for coeff, direction in kin:
        if direction.is_zero():
            continue
        key = direction.sort_key()
        if key in acc:
            prev_dir, prev_coeff = acc[key]
            acc[key] = (prev_dir, Sum((prev_coeff, coeff)))
        else:
            acc[key] = (direction, coeff)
    kin_norm = []
    for key in sorted(acc):
        direction, coeff = acc[key]
        coeff = canonicalize(coeff)
        if not is_zero_expr(coeff):
            kin_norm.append((coeff, direction))
    dx_norm = None if dx is None or is_zero_expr(dx) else canonicalize(dx)
    queer_norm = None if queer is None or is_zero_expr(queer) else canonicalize(queer)
    return OperationalField(tuple(kin_norm), dx_norm, queer_norm)


DELTA_ELL_FIELD = field(queer=Const(Fraction(1)))
DDX_FIELD = field(dx=Const(Fraction(1)))


def kinematic_field(direction: SeqVec, coeff: Expression = Const(Fraction(1))) -> OperationalField:
    return field(kin=((coeff, direction),))


def apply_field(d: OperationalField, f: Expression) -> Expression:
    """The derivation applied to f, as a canonical expression."""
    terms: list[Expression] = []
    for coeff, direction in d.kin:
        terms.append(Prod((coeff, _dirderiv_raw(f, direction))))
    if d.dx is not None:
        terms.append(Prod((d.dx, _ddx_raw(f))))
    if d.queer is not None:
        terms.append(Prod((d.queer, _delta_raw(f))))
    if not terms:
        return ZERO
    return canonicalize(Sum(tuple(terms)))


def field_scale(coeff: Expression, d: OperationalField) -> OperationalField:
    return field(
        kin=tuple((Prod((coeff, c)), v) for c, v in d.kin),
        dx=None if d.dx is None else Prod((coeff, d.dx)),
        queer=None if d.queer is None else Prod((coeff, d.queer)),
    )


def field_sub(a: OperationalField, b: OperationalField) -> OperationalField:
    neg = Const(Fraction(-1))

    def opt_sub(p, q):
        if p is None and q is None:
            return None
        terms = []
        if p is not None:
            terms.append(p)
        if q is not None:
            terms.append(Prod((neg, q)))
        return Sum(tuple(terms))

    return field(
        kin=tuple(a.kin) + tuple((Prod((neg, c)), v) for c, v in b.kin),
        dx=opt_sub(a.dx, b.dx),
        queer=opt_sub(a.queer, b.queer),
    )


def format_field(d: OperationalField) -> str:
    parts = [f"kin={print_expr(c)}*{format_vec(v)}" for c, v in d.kin]
    if d.dx is not None:
        parts.append(f"dx={print_expr(d.dx)}")
    if d.queer is not None:
        parts.append(f"queer={print_expr(d.queer)}")
    return "field(" + ";".join(parts) + ")"


# ---------------------------------------------------------------------------
# commutation and bracket construction

#: generator expressions used by commute_check; finite-support linear and
#: quadratic atoms keep every pairing exactly computable whatever the
#: direction forms of the fields under test
_GENERATORS: tuple[Expression, ...] = (
    X(),
    Lin(basis(1)),
    Lin(basis(2)),
    Lin(basis(5)),
    Quad(IDENTITY),
    Quad(operator(1, basis(2), [(1, basis(1), basis(3))])),
)

_RICH_GENERATORS: tuple[Expression, ...] = _GENERATORS + (
    Lin(Geometric(Fraction(1, 2))),
    Lin(Power(Fraction(1), 1)),
    Quad(operator(0, Power(Fraction(1), 2))),
)


def commute_check(
    d1: OperationalField,
    d2: OperationalField,
    samples: int = 6,
    seed: int = 0,
) -> bool:
    """True iff d1 d2 f = d2 d1 f in canonical form on the generator set
    plus ``samples`` random expressions.

    Both fields are derivations, so agreement on an algebra-generating
    set decides commutation; the random samples guard against bugs in
    the Leibniz plumbing rather than adding mathematical content.
    Generators whose pairings with the field directions have no rational
    closed form are skipped.
    """
    from .sampling import Sampler

    probes: list[Expression] = list(_RICH_GENERATORS)
    sampler = Sampler(random.Random(seed))
    probes.extend(sampler.expression(max_factors=2, support=4, rich=False) for _ in range(samples))
    for f in probes:
        try:
            fwd = apply_field(d1, apply_field(d2, f))
            bwd = apply_field(d2, apply_field(d1, f))
        except DomainError:
            continue
        if not expressions_equal(fwd, bwd):
            return False
    return True


@dataclass(frozen=True)
class BracketSpec:
    """A pair of fields accepted by commute_check.

    Commutativity is what makes the bracket formula satisfy Jacobi, so
    the factory checks it by default.  Pointwise notions (order at a
    point, the bivector, queerness certificates) only look at the
    fields' values, so a spec built with check=False is still meaningful
    for those; the bracket formula is then applied formally.
    """

    d1: OperationalField
    d2: OperationalField


# True: commutes, or the caller explicitly waived the check.
# False: checked and failed.
_COMMUTE_MEMO: dict[BracketSpec, bool] = {}


def bracket_spec(d1: OperationalField, d2: OperationalField, *, check: bool = True) -> BracketSpec:
    spec = BracketSpec(d1, d2)
    if check:
        _ensure_commuting(spec)
    else:
        _COMMUTE_MEMO[spec] = True
    return spec


def _ensure_commuting(spec: BracketSpec) -> None:
    ok = _COMMUTE_MEMO.get(spec)
    if ok is None:
        ok = commute_check(spec.d1, spec.d2)
        _COMMUTE_MEMO[spec] = ok
    if not ok:
        raise NonCommutingFields(
            "the two fields do not commute on the generator set; no bracket is defined"
        )


def bracket(spec: BracketSpec, f: Expression, g: Expression) -> Expression:
    """{f, g} = d1(f) d2(g) - d2(f) d1(g), canonical."""
    _ensure_commuting(spec)
    d1f = apply_field(spec.d1, f)
    d2g = apply_field(spec.d2, g)
    d2f = apply_field(spec.d2, f)
    d1g = apply_field(spec.d1, g)
    return canonicalize(Sum((Prod((d1f, d2g)), Scale(Fraction(-1), Prod((d2f, d1g))))))


def hamiltonian_field(spec: BracketSpec, h: Expression) -> OperationalField:
    """The field X_h with X_h(f) = {h, f}: (d1 h) d2 - (d2 h) d1."""
    _ensure_commuting(spec)
    a = apply_field(spec.d1, h)
    b = apply_field(spec.d2, h)
    return field_sub(field_scale(a, spec.d2), field_scale(b, spec.d1))


# ---------------------------------------------------------------------------
# axiom checking


@dataclass(frozen=True)
class AxiomRow:
    axiom: str
    trials: int
    failures: int


@dataclass(frozen=True)
class AxiomReport:
    rows: tuple[AxiomRow, ...]
    counterexample: Union[tuple, None] = None  # (axiom, (f, g, h), point)

    @property
    def ok(self) -> bool:
        return all(r.failures == 0 for r in self.rows)

    def raise_if_failed(self) -> None:
        if not self.ok:
            axiom, triple, m = self.counterexample
            raise AxiomViolation(
                f"{axiom} failed for ({', '.join(print_expr(e) for e in triple)}) at {m}",
                axiom,
                triple,
                m,
            )


def check_axioms(spec: BracketSpec, trials: int = 100, seed: int = 0) -> AxiomReport:
    """Exact check of skewness, Leibniz and Jacobi on random inputs.

    Each trial draws a triple (f, g, h) and 5 points; every axiom is
    checked both as a canonical-form identity and by exact evaluation at
    the points.  Tolerance plays no role anywhere.
    """
    from .sampling import Sampler

    _ensure_commuting(spec)
    sampler = Sampler(random.Random(seed))
    counts = {"skew": 0, "leibniz": 0, "jacobi": 0}
    first_bad = None

    def br(u, v):
        return bracket(spec, u, v)

    neg = Fraction(-1)
    for _ in range(trials):
        f, g, h = (sampler.expression(max_factors=3, support=5) for _ in range(3))
        points = [sampler.point(support=5) for _ in range(5)]
        fg, gf, fh = br(f, g), br(g, f), br(f, h)
        gh, hf = br(g, h), br(h, f)
        residues = {
            "skew": _padd(poly_of(fg), poly_of(gf)),
            "leibniz": _padd(
                poly_of(br(f, Prod((g, h)))),
                _padd(
                    _pscale(neg, _pmul(poly_of(fg), poly_of(h))),
                    _pscale(neg, _pmul(poly_of(g), poly_of(fh))),
                ),
            ),
            "jacobi": _padd(
                poly_of(br(fg, h)),
                _padd(poly_of(br(gh, f)), poly_of(br(hf, g))),
            ),
        }
        for axiom, residue in residues.items():
            bad = bool(residue) or any(eval_poly(residue, m) != 0 for m in points)
            if bad:
                counts[axiom] += 1
                if first_bad is None:
                    first_bad = (axiom, (f, g, h), points[0])
    rows = tuple(AxiomRow(name, trials, counts[name]) for name in ("skew", "leibniz", "jacobi"))
    return AxiomReport(rows, first_bad)


# ---------------------------------------------------------------------------
# pointwise order and the induced bivector


class Order(enum.Enum):
    """Order of a field at a point.

    ORDER1 is reserved for completeness of the classification; on this
    model space every order-one tangent vector is kinematic, so the
    engine only ever reports KINEMATIC or QUEER.
    """

    KINEMATIC = "Kinematic"
    ORDER1 = "Order1"
    QUEER = "Queer"


def order_at(d: OperationalField, m: Point) -> Order:
    if d.queer is not None and eval_expr(d.queer, m) != 0:
        return Order.QUEER
    return Order.KINEMATIC


@dataclass(frozen=True)
class FieldValue:
    """A field frozen at a point: queer weight, kinematic vector, dx weight."""

    queer: Fraction
    kin: VecComb
    dx: Fraction

    def is_zero(self) -> bool:
        return self.queer == 0 and self.kin.is_zero() and self.dx == 0


def field_value_at(d: OperationalField, m: Point) -> FieldValue:
    kin = VecComb.of(*((eval_expr(c, m), v) for c, v in d.kin))
    dxv = Fraction(0) if d.dx is None else eval_expr(d.dx, m)
    qv = Fraction(0) if d.queer is None else eval_expr(d.queer, m)
    return FieldValue(qv, kin, dxv)


def _proportional(a: FieldValue, b: FieldValue) -> bool:
    """True when a and b are linearly dependent as formal tangent values."""
    if a.is_zero() or b.is_zero():
        return True
    # find the scale from the first nonzero coordinate of a
    scale = None
    if a.queer != 0:
        scale = b.queer / a.queer
    elif a.dx != 0:
        scale = b.dx / a.dx
    else:
        # compare monic primitive vectors so the finite part's absorbed
        # scalar cannot hide a match
        c0, v0 = a.kin.primitive_components()[0]
        for cb, vb in b.kin.primitive_components():
            if vb == v0:
                scale = cb / c0
                break
        if scale is None:
            return False
    return (
        b.queer == scale * a.queer
        and b.dx == scale * a.dx
        and b.kin == a.kin.scale(scale)
    )


class DxMarker:
    """Placeholder for the d/dx direction in wedge pairs."""

    def __repr__(self) -> str:
        return "dx"

    def __str__(self) -> str:
        return "dx"


DX = DxMarker()

WedgeLeg = Union[SeqVec, DxMarker]


@dataclass(frozen=True)
class TensorAtPoint:
    """Bivector Pi_m = sum coeff * w1 /\\ w2 inducing the bracket at m."""

    pairs: tuple[tuple[Fraction, WedgeLeg, WedgeLeg], ...]

    def is_zero(self) -> bool:
        return not self.pairs

    @staticmethod
    def _pair(mu: DualVector, w: WedgeLeg) -> Fraction:
        if isinstance(w, DxMarker):
            return mu.xpart
        return mu.pair(w)

    def apply(self, mu: DualVector, nu: DualVector) -> Fraction:
        """Pi_m(mu, nu), exactly."""
        total = Fraction(0)
        for c, w1, w2 in self.pairs:
            total += c * (
                self._pair(mu, w1) * self._pair(nu, w2)
                - self._pair(mu, w2) * self._pair(nu, w1)
            )
        return total

    def __str__(self) -> str:
        if not self.pairs:
            return "0"

        def leg(w: WedgeLeg) -> str:
            return "dx" if isinstance(w, DxMarker) else format_vec(w)

        out = []
        for c, w1, w2 in self.pairs:
            body = f"{leg(w1)}^{leg(w2)}"
            out.append(body if c == 1 else f"{c}*{body}")
        return "+".join(out)


def tensor_at(spec: BracketSpec, m: Point) -> TensorAtPoint:
    """The bivector inducing the bracket at m.

    Exists when both fields are kinematic at m; also when the two field
    values are linearly dependent at m, in which case the bracket
    vanishes there and the zero tensor is returned (a queer component is
    harmless under dependence).  Otherwise a queer field value forces
    QueerAtPoint: the bracket acts on second jets and no bivector on
    first jets reproduces it.
    """
    _ensure_commuting(spec)
    v1 = field_value_at(spec.d1, m)
    v2 = field_value_at(spec.d2, m)
    if _proportional(v1, v2):
        return TensorAtPoint(())
    if v1.queer != 0 or v2.queer != 0:
        raise QueerAtPoint(
            f"a field is queer at {m} and the field values are independent; no bivector exists"
        )

    def legs(val: FieldValue) -> list[tuple[Fraction, WedgeLeg]]:
        out: list[tuple[Fraction, WedgeLeg]] = [
            (c, v) for c, v in val.kin.primitive_components()
        ]
        if val.dx != 0:
            out.append((val.dx, DX))
        return out

    pairs = []
    for c1, w1 in legs(v1):
        for c2, w2 in legs(v2):
            pairs.append((c1 * c2, w1, w2))
    return TensorAtPoint(tuple(pairs))


def sharp(tensor: TensorAtPoint, mu: DualVector) -> DualVector:
    """Contract the bivector with a covector: sharp(mu) = Pi_m(mu, .)."""
    vterms: list[tuple[Fraction, Union[SeqVec, VecComb]]] = []
    xpart = Fraction(0)
    for c, w1, w2 in tensor.pairs:
        a1 = TensorAtPoint._pair(mu, w1)
        a2 = TensorAtPoint._pair(mu, w2)
        # contributes c * (mu(w1) w2 - mu(w2) w1)
        for coeff, w in ((c * a1, w2), (-c * a2, w1)):
            if isinstance(w, DxMarker):
                xpart += coeff
            else:
                vterms.append((coeff, w))
    return DualVector(VecComb.of(*vterms), xpart)


# ---------------------------------------------------------------------------
# queerness certificates


@dataclass(frozen=True)
class Witness:
    """Certificate (h, f, value): f is critical at the point, yet {h, f}
    takes the nonzero value there, so no bivector induces the bracket."""

    h: Expression
    f: Expression
    value: Fraction


def queer_witness(spec: BracketSpec, m: Point) -> Witness:
    """Search a small family for a queerness certificate at m.

    h ranges over coordinate functions, f over quadratic forms re-centered
    to be critical at m.  For a bracket kinematic at m every candidate
    value is zero and WitnessNotFound is raised.
    """
    _ensure_commuting(spec)
    hs: list[Expression] = [
        Scale(Fraction(-1), X()),
        X(),
        Lin(basis(1)),
        Lin(basis(2)),
        RHO,
    ]
    quads = [
        IDENTITY,
        operator(1, Power(Fraction(1), 1)),
        operator(2),
    ]
    fs: list[Expression] = []
    for a in quads:
        correction = op_apply(op_symmetrize(a), m.v)
        terms: list[Expression] = [Quad(a)]
        terms.extend(Scale(-c, Lin(w)) for c, w in correction.components())
        terms.append(Const(eval_expr(Quad(a), m)))
        fs.append(Sum(tuple(terms)))
    for f in fs:
        grad = gradient(f, m)
        assert grad.is_zero(), "re-centering must make f critical at m"
    for h in hs:
        for f in fs:
            value = eval_expr(bracket(spec, h, f), m)
            if value != 0:
                return Witness(canonicalize(h), canonicalize(f), value)
    raise WitnessNotFound(
        f"no certificate in the search family: the bracket looks kinematic at {m}"
    )


def extension_obstruction_demo() -> tuple[Fraction, Fraction]:
    """The obstruction to extending the bracket calculus to second order.

    If the rank-one pairing rule B(f', g') also governed delta_ell
    through a Leibniz-type formula, then at v = 0 applying delta_ell to
    the squared norm would have to equal two pairing terms against the
    base point itself.  The left side is computed honestly from the
    engine; each right-hand term is a pairing with the zero vector, and so
    vanishes regardless of what the other leg is.
    """
    from .jets import delta_ell
    from .seqvec import ZERO_VEC, dot

    origin = point()
    lhs = eval_expr(delta_ell(RHO), origin)
    stand_ins = (Geometric(Fraction(1, 2)), basis(1))
    rhs = sum((dot(ZERO_VEC, u) for u in stand_ins), Fraction(0))
    return lhs, rhs
