"""Seeded random generators for expressions, vectors, operators, points.

All sampling goes through a caller-supplied ``random.Random`` so that a
(seed, code path) pair always produces the same objects; byte-identical
command-line reports depend on this.  Sizes are kept small: coefficients
are rationals with small numerator and denominator, supports stay in the
first few coordinates.
"""

from __future__ import annotations

import random
from fractions import Fraction

from .expr import Const, Expression, Lin, Point, Prod, Quad, Scale, Sum, X, point
from .opsym import OperatorSymbol, operator
from .seqvec import FiniteSupport, Geometric, Power, SeqVec, finite


class Sampler:
    def __init__(self, rng: random.Random):
        self.rng = rng

    def rational(self, nonzero: bool = False) -> Fraction:
        while True:
            q = Fraction(self.rng.randint(-3, 3), self.rng.randint(1, 3))
            if q != 0 or not nonzero:
                return q

    def finite_vec(self, support: int = 5, max_terms: int = 3) -> FiniteSupport:
        n = self.rng.randint(1, max_terms)
        idxs = self.rng.sample(range(1, support + 1), min(n, support))
        return finite((i, self.rational(nonzero=True)) for i in idxs)

    def seqvec(self, support: int = 5, rich: bool = True) -> SeqVec:
        if rich:
            kind = self.rng.choice(("fin", "fin", "geo", "pow"))
        else:
            kind = "fin"
        if kind == "geo":
            return Geometric(Fraction(self.rng.choice((-1, 1)), self.rng.randint(2, 4)))
        if kind == "pow":
            return Power(self.rational(nonzero=True), self.rng.randint(1, 2))
        return self.finite_vec(support)

    def operator(self, support: int = 5, rich: bool = True) -> OperatorSymbol:
        lam = self.rational()
        diag = self.seqvec(support, rich) if self.rng.random() < 0.6 else None
        rank1 = []
        if self.rng.random() < 0.5:
            rank1.append((1, self.finite_vec(support), self.finite_vec(support)))
        return operator(lam, diag, rank1)

    def atom(self, support: int = 5, rich: bool = True) -> Expression:
        roll = self.rng.random()
        if roll < 0.3:
            return X()
        if roll < 0.65:
            return Lin(self.seqvec(support, rich))
        return Quad(self.operator(support, rich))

    def expression(self, max_factors: int = 3, support: int = 5, rich: bool = True) -> Expression:
        """Random polynomial: up to 3 monomials of up to max_factors atoms."""
        terms = []
        for _ in range(self.rng.randint(1, 3)):
            n = self.rng.randint(0, max_factors)
            if n == 0:
                terms.append(Const(self.rational()))
            else:
                factors = tuple(self.atom(support, rich) for _ in range(n))
                term = factors[0] if n == 1 else Prod(factors)
                terms.append(Scale(self.rational(nonzero=True), term))
        return Sum(tuple(terms)) if len(terms) > 1 else terms[0]

    def point(self, support: int = 5) -> Point:
        pairs = [
            (i, self.rational())
            for i in range(1, support + 1)
            if self.rng.random() < 0.6
        ]
        return point(pairs, self.rational())

    def dual_direction(self, support: int = 5) -> FiniteSupport:
        """A nonzero finite direction, for kinematic probes."""
        return self.finite_vec(support)
