"""Recursive-descent parser for the expression DSL.

Grammar (ASCII, whitespace-insensitive between tokens):

    expr     := term {('+' | '-') term}
    term     := factor {'*' factor}
    factor   := rational | 'x' | 'ip(v,' vec ')' | 'q(' oper ')' | '(' expr ')'
    rational := ['-'] digits ['/' digits]
    vec      := '[' [idx ':' rational {',' idx ':' rational}] ']'
              | 'geo(' rational ')' | 'pow(' rational ',' digits ')'
    oper     := 'op(' rational ';' [vec] ';' [pairs] ')'
    pairs    := '(' vec ',' vec ')' {',' '(' vec ',' vec ')'}
    point    := 'point(' vec ',' rational ')'          -- vec finite-support
    mu       := 'mu(' vec ',' rational ')'             -- covector (v-part, x-part)
    field    := 'field(' [part {';' part}] ')'
    part     := 'kin=' expr '*' vec | 'dx=' expr | 'queer=' expr

Malformed text raises ParseError carrying the failing offset.  A
geometric ratio with |r| >= 1 is grammatical but out of domain and
raises DomainError instead.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import ParseError
from .expr import Const, Expression, Lin, Point, Prod, Quad, Scale, Sum, X
from .opsym import OperatorSymbol, operator
from .seqvec import FiniteSupport, Geometric, Power, SeqVec, VecComb, finite


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def try_literal(self, lit: str) -> bool:
        """Consume lit if the upcoming text matches, ignoring whitespace."""
        probe = self.pos
        for ch in lit:
            while probe < len(self.text) and self.text[probe].isspace():
                probe += 1
            if probe >= len(self.text) or self.text[probe] != ch:
                return False
            probe += 1
        self.pos = probe
        return True

    def expect(self, lit: str) -> None:
        if not self.try_literal(lit):
            self.skip_ws()
            found = self.text[self.pos] if self.pos < len(self.text) else "end of input"
            raise ParseError(f"expected {lit!r}, found {found!r}", self.pos)

    def expect_end(self) -> None:
        self.skip_ws()
        if self.pos < len(self.text):
            raise ParseError(f"unexpected trailing text {self.text[self.pos]!r}", self.pos)

    def digits(self) -> int:
        self.skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            found = self.text[start] if start < len(self.text) else "end of input"
            raise ParseError(f"expected digits, found {found!r}", start)
        return int(self.text[start : self.pos])

    def rational(self) -> Fraction:
        sign = -1 if self.try_literal("-") else 1
        num = self.digits()
        if self.try_literal("/"):
            start = self.pos
            den = self.digits()
            if den == 0:
                raise ParseError("zero denominator", start)
            return Fraction(sign * num, den)
        return Fraction(sign * num)

    # -- vectors ---------------------------------------------------------

    def vec(self) -> SeqVec:
        if self.try_literal("["):
            pairs: list[tuple[int, Fraction]] = []
            if not self.try_literal("]"):
                while True:
                    self.skip_ws()
                    idx_at = self.pos
                    idx = self.digits()
                    if idx < 1:
                        raise ParseError("sequence indices start at 1", idx_at)
                    self.expect(":")
                    pairs.append((idx, self.rational()))
                    if self.try_literal("]"):
                        break
                    self.expect(",")
            return finite(pairs)
        if self.try_literal("geo("):
            r = self.rational()
            self.expect(")")
            return Geometric(r)
        if self.try_literal("pow("):
            c = self.rational()
            self.expect(",")
            s = self.digits()
            self.expect(")")
            return Power(c, s)
        found = self.peek() or "end of input"
        raise ParseError(f"expected a vector, found {found!r}", self.pos)

    def finite_vec(self) -> FiniteSupport:
        self.skip_ws()
        start = self.pos
        v = self.vec()
        if not isinstance(v, FiniteSupport):
            raise ParseError("expected a finite-support vector", start)
        return v

    # -- operators -------------------------------------------------------

    def oper(self) -> OperatorSymbol:
        self.expect("op(")
        lam = self.rational()
        self.expect(";")
        diag = None
        if self.peek() != ";":
            diag = self.vec()
        self.expect(";")
        pairs: list[tuple[Fraction, SeqVec, SeqVec]] = []
        if self.peek() != ")":
            while True:
                # optional rational coefficient, "c*(u,w)"
                coeff = Fraction(1)
                self.skip_ws()
                if self.peek() != "(":
                    coeff = self.rational()
                    self.expect("*")
                self.expect("(")
                u = self.vec()
                self.expect(",")
                w = self.vec()
                self.expect(")")
                pairs.append((coeff, u, w))
                if not self.try_literal(","):
                    break
        self.expect(")")
        return operator(lam, diag, pairs)

    # -- expressions -----------------------------------------------------

    def factor(self) -> Expression:
        if self.try_literal("("):
            e = self.expr()
            self.expect(")")
            return e
        if self.try_literal("ip("):
            self.expect("v")
            self.expect(",")
            v = self.vec()
            self.expect(")")
            return Lin(v)
        if self.try_literal("q("):
            a = self.oper()
            self.expect(")")
            return Quad(a)
        if self.try_literal("x"):
            return X()
        ch = self.peek()
        if ch == "-" or ch.isdigit():
            return Const(self.rational())
        found = ch or "end of input"
        raise ParseError(f"expected a factor, found {found!r}", self.pos)

    def term(self) -> Expression:
        factors = [self.factor()]
        while self.try_literal("*"):
            factors.append(self.factor())
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def expr(self) -> Expression:
        terms = [self.term()]
        while True:
            if self.try_literal("+"):
                terms.append(self.term())
            elif self.peek() == "-":
                self.expect("-")
                terms.append(Scale(Fraction(-1), self.term()))
            else:
                break
        return terms[0] if len(terms) == 1 else Sum(tuple(terms))


def parse_expr(text: str) -> Expression:
    sc = _Scanner(text)
    e = sc.expr()
    sc.expect_end()
    return e


def parse_vec(text: str) -> SeqVec:
    sc = _Scanner(text)
    v = sc.vec()
    sc.expect_end()
    return v


def parse_operator(text: str) -> OperatorSymbol:
    sc = _Scanner(text)
    a = sc.oper()
    sc.expect_end()
    return a


def parse_point(text: str) -> Point:
    sc = _Scanner(text)
    sc.expect("point(")
    v = sc.finite_vec()
    sc.expect(",")
    xval = sc.rational()
    sc.expect(")")
    sc.expect_end()
    return Point(v, xval)


def parse_mu(text: str):
    """Covector literal mu(vec, rational) -> DualVector."""
    from .jets import DualVector

    sc = _Scanner(text)
    sc.expect("mu(")
    v = sc.vec()
    sc.expect(",")
    xval = sc.rational()
    sc.expect(")")
    sc.expect_end()
    return DualVector(VecComb.of((1, v)), xval)


def _split_kin_part(text: str, start: int) -> tuple[int, int]:
    """Locate a kin part's span: return (last depth-0 '*', part end).

    The coefficient expression and the direction vector are separated by
    the last '*' that sits at bracket depth zero; the part ends at the
    first depth-0 ';' or at the ')' closing the field literal.
    """
    depth = 0
    star = -1
    i = start
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            if depth == 0:
                break  # the ')' closing field(
            depth -= 1
        elif ch == ";" and depth == 0:
            break
        elif ch == "*" and depth == 0:
            star = i
        i += 1
    if star < 0:
        raise ParseError("kin part must look like <expr>*<vec>", start)
    return star, i


def parse_field(text: str):
    """Field literal field(kin=...; dx=...; queer=...), parts omissible.

    kin parts may repeat, which is how a field with several kinematic
    directions is written.
    """
    from .poisson import OperationalField

    sc = _Scanner(text)
    sc.expect("field(")
    kin: list[tuple[Expression, SeqVec]] = []
    dx: Expression | None = None
    queer: Expression | None = None
    if not sc.try_literal(")"):
        while True:
            if sc.try_literal("kin="):
                sc.skip_ws()
                star, _end = _split_kin_part(sc.text, sc.pos)
                sub = _Scanner(sc.text[:star])
                sub.pos = sc.pos
                coeff = sub.expr()
                sub.expect_end()
                sc.pos = star + 1
                direction = sc.vec()
                kin.append((coeff, direction))
            elif sc.try_literal("dx="):
                if dx is not None:
                    raise ParseError("duplicate dx part", sc.pos)
                dx = sc.expr()
            elif sc.try_literal("queer="):
                if queer is not None:
                    raise ParseError("duplicate queer part", sc.pos)
                queer = sc.expr()
            else:
                found = sc.peek() or "end of input"
                raise ParseError(f"expected kin=, dx= or queer=, found {found!r}", sc.pos)
            if sc.try_literal(")"):
                break
            sc.expect(";")
    sc.expect_end()
    return OperationalField(tuple(kin), dx, queer)
