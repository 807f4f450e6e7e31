"""Finite-dimensional truncations and the numerical cross-checks.

This is the only module that touches floating point.  ``truncate``
projects an expression onto the first n sequence coordinates plus x,
yielding an explicit multivariate polynomial that can be evaluated both
exactly (Fractions, for consistency tests) and in floats (for finite
differences and flows).

``fd_check`` compares the symbolic first and second jets against central
differences of the truncation.  ``ell_convergence`` tabulates the
diagonal entries of an operator symbol against their limit, exactly.
``ill_posedness_demo`` integrates the truncated Hamiltonian flow of a
bracket and reports the mismatch with the symbolic bracket rates: the
queer part of a field has no finite-dimensional shadow, so every
truncated flow of a queer Hamiltonian field is blind to the rate the
bracket prescribes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

import numpy as np

from .errors import DomainError, ToleranceExceeded
from .expr import (
    AtomLin,
    AtomQuad,
    AtomX,
    Expression,
    Lin,
    Point,
    RHO,
    Scale,
    X,
    canonicalize,
    point,
    poly_of,
    print_expr,
)
from .jets import gradient, hessian
from .opsym import OperatorSymbol
from .poisson import (
    BracketSpec,
    DDX_FIELD,
    DELTA_ELL_FIELD,
    OperationalField,
    apply_field,
    bracket,
    bracket_spec,
    field,
    hamiltonian_field,
)
from .seqvec import SeqVec, basis

ExpTuple = tuple[int, ...]  # exponents for (v1..vn, x)


@dataclass(frozen=True)
class Truncation:
    """Polynomial on R^(n+1): the expression with <.,.> cut at n terms."""

    n: int
    coeffs: tuple[tuple[ExpTuple, Fraction], ...]  # sorted, nonzero

    def eval_exact(self, values: Sequence[Fraction]) -> Fraction:
        """Exact value at (v1..vn, x) given as n+1 rationals."""
        if len(values) != self.n + 1:
            raise DomainError(f"expected {self.n + 1} coordinates, got {len(values)}")
        total = Fraction(0)
        for exps, c in self.coeffs:
            term = c
            for val, e in zip(values, exps):
                if e:
                    term *= Fraction(val) ** e
            total += term
        return total

    def as_callable(self) -> Callable[[np.ndarray], float]:
        data = [(float(c), exps) for exps, c in self.coeffs]

        def fn(z: np.ndarray) -> float:
            total = 0.0
            for c, exps in data:
                term = c
                for val, e in zip(z, exps):
                    if e:
                        term *= val**e
                total += term
            return total

        return fn

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"

        def var(i: int) -> str:
            return "x" if i == self.n else f"v{i + 1}"

        parts = []
        for i, (exps, c) in enumerate(self.coeffs):
            factors = []
            for slot, e in enumerate(exps):
                factors.extend([var(slot)] * e)
            atoms = "*".join(factors)
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = atoms
            else:
                body = f"{mag}*{atoms}"
            if i == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("-" if c < 0 else "+") + body)
        return "".join(parts)


def _atom_trunc_poly(atom, n: int) -> dict[ExpTuple, Fraction]:
    zero = (0,) * (n + 1)

    def unit(slot: int, deg: int = 1) -> ExpTuple:
        e = list(zero)
        e[slot] = deg
        return tuple(e)

    if isinstance(atom, AtomX):
        return {unit(n): Fraction(1)}
    if isinstance(atom, AtomLin):
        out: dict[ExpTuple, Fraction] = {}
        for k in range(1, n + 1):
            c = atom.vec.entry(k)
            if c != 0:
                out[unit(k - 1)] = c
        return out
    if isinstance(atom, AtomQuad):
        out = {}
        for k in range(1, n + 1):
            c = Fraction(1) if atom.diag is None else atom.diag.entry(k)
            if c != 0:
                out[unit(k - 1, 2)] = c
        return out
    raise TypeError(f"not an atom: {atom!r}")


def _mul_trunc(a: dict[ExpTuple, Fraction], b: dict[ExpTuple, Fraction]) -> dict[ExpTuple, Fraction]:
    out: dict[ExpTuple, Fraction] = {}
    for e1, c1 in a.items():
        for e2, c2 in b.items():
            key = tuple(x + y for x, y in zip(e1, e2))
            nc = out.get(key, Fraction(0)) + c1 * c2
            if nc == 0:
                out.pop(key, None)
            else:
                out[key] = nc
    return out


def truncate(f: Expression, n: int) -> Truncation:
    """Project f onto the first n sequence coordinates plus x."""
    if n < 1:
        raise DomainError(f"truncation size must be >= 1, got {n}")
    zero = (0,) * (n + 1)
    acc: dict[ExpTuple, Fraction] = {}
    for mono, coeff in poly_of(f).items():
        term = {zero: coeff}
        for atom in mono:
            term = _mul_trunc(term, _atom_trunc_poly(atom, n))
            if not term:
                break
        for exps, c in term.items():
            nc = acc.get(exps, Fraction(0)) + c
            if nc == 0:
                acc.pop(exps, None)
            else:
                acc[exps] = nc
    ordered = tuple(sorted(acc.items(), key=lambda kv: (sum(kv[0]), kv[0])))
    return Truncation(n, ordered)


def truncate_point(m: Point, n: int) -> tuple[Fraction, ...]:
    """Coordinates (v1..vn, x) of m; m must be supported within 1..n."""
    for idx, _ in m.v.entries:
        if idx > n:
            raise DomainError(f"point has support at index {idx} beyond truncation size {n}")
    return tuple(m.v.entry(k) for k in range(1, n + 1)) + (m.x,)


# ---------------------------------------------------------------------------
# finite-difference cross-check


@dataclass(frozen=True)
class FdReport:
    n: int
    step: float
    rows: tuple[tuple[str, float], ...]  # (block, max abs-relative error)

    @property
    def max_err(self) -> float:
        return max((e for _, e in self.rows), default=0.0)


def _rel_err(approx: float, exact: float) -> float:
    return abs(approx - exact) / max(1.0, abs(exact))


def fd_check(
    f: Expression,
    m: Point,
    n: int = 6,
    step: float = 1e-4,
    tol: float = 1e-5,
) -> FdReport:
    """Central differences of the truncation against the symbolic jets.

    Blocks grad_v, grad_x, hess_vv, hess_vx, hess_xx are compared
    entrywise; each row reports the worst relative error (relative to
    max(1, |exact|) so that zero entries are judged absolutely).  Raises
    ToleranceExceeded when any block is off by more than tol, which
    would mean the symbolic differentiation rules are wrong.
    """
    tr = truncate(f, n)
    fn = tr.as_callable()
    z0 = np.array([float(v) for v in truncate_point(m, n)], dtype=float)
    h = step

    def shifted(*pairs: tuple[int, float]) -> float:
        z = z0.copy()
        for slot, dz in pairs:
            z[slot] += dz
        return fn(z)

    grad = gradient(f, m)
    hess = hessian(f, m)

    errs: dict[str, float] = {k: 0.0 for k in ("grad_v", "grad_x", "hess_vv", "hess_vx", "hess_xx")}

    def update(block: str, approx: float, exact: Fraction) -> None:
        errs[block] = max(errs[block], _rel_err(approx, float(exact)))

    for k in range(n):
        fd = (shifted((k, +h)) - shifted((k, -h))) / (2 * h)
        update("grad_v", fd, grad.vpart.entry(k + 1))
    fd = (shifted((n, +h)) - shifted((n, -h))) / (2 * h)
    update("grad_x", fd, grad.xpart)

    f0 = fn(z0)
    for j in range(n):
        for k in range(j, n):
            if j == k:
                fd = (shifted((j, +h)) - 2 * f0 + shifted((j, -h))) / (h * h)
            else:
                fd = (
                    shifted((j, +h), (k, +h))
                    - shifted((j, +h), (k, -h))
                    - shifted((j, -h), (k, +h))
                    + shifted((j, -h), (k, -h))
                ) / (4 * h * h)
            update("hess_vv", fd, hess.vv.matrix_entry(j + 1, k + 1))
    for k in range(n):
        fd = (
            shifted((k, +h), (n, +h))
            - shifted((k, +h), (n, -h))
            - shifted((k, -h), (n, +h))
            + shifted((k, -h), (n, -h))
        ) / (4 * h * h)
        update("hess_vx", fd, hess.vx.entry(k + 1))
    fd = (shifted((n, +h)) - 2 * f0 + shifted((n, -h))) / (h * h)
    update("hess_xx", fd, hess.xx)

    report = FdReport(n, h, tuple(errs.items()))
    if report.max_err > tol:
        worst = max(report.rows, key=lambda r: r[1])
        raise ToleranceExceeded(
            f"finite differences disagree with the symbolic jets: block {worst[0]} "
            f"has relative error {worst[1]:.3e} > {tol:g} for {print_expr(f)}"
        )
    return report


# ---------------------------------------------------------------------------
# diagonal convergence


@dataclass(frozen=True)
class ConvergenceRow:
    """One truncation size: exact diagonal entry against the limit."""

    n: int
    ell_n: Fraction
    target: Fraction
    abs_err: Fraction

    @property
    def ell_n_float(self) -> float:
        return float(self.ell_n)

    @property
    def abs_err_float(self) -> float:
        return float(self.abs_err)


def ell_convergence(a: OperatorSymbol, ns: Sequence[int]) -> tuple[ConvergenceRow, ...]:
    """Rows (n, <A e_n, e_n>, ell(A), |difference|), all exact."""
    if not ns:
        raise DomainError("need at least one truncation size")
    if list(ns) != sorted(set(ns)) or ns[0] < 1:
        raise DomainError(f"truncation sizes must be strictly increasing and >= 1, got {list(ns)}")
    target = a.ell()
    rows = []
    for n in ns:
        entry = a.diagonal_entry(n)
        rows.append(ConvergenceRow(n, entry, target, abs(entry - target)))
    return tuple(rows)


# ---------------------------------------------------------------------------
# truncated Hamiltonian flow


@dataclass(frozen=True)
class FlowRow:
    n: int
    mean_rho_rate: float
    final_norm_sq: float
    final_x: float


@dataclass(frozen=True)
class IllPosednessReport:
    """Symbolic bracket rates against what truncated flows see.

    ``rho_rate`` is {h, rho}; ``kinematic_rho_rate`` is the rate induced
    by the kinematic and dx parts of X_h alone, the only parts a
    truncation can realize.  ``consistent`` records whether they agree;
    for a queer Hamiltonian field they cannot.
    """

    hamiltonian: OperationalField
    rho_rate: Expression
    kinematic_rho_rate: Expression
    basis_rates: tuple[tuple[SeqVec, Expression], ...]
    consistent: bool
    rows: tuple[FlowRow, ...]


def _kinematic_shadow(d: OperationalField) -> OperationalField:
    """The field with the queer part dropped: all a truncation retains."""
    return field(kin=d.kin, dx=d.dx)


def rk4_flow(
    d: OperationalField,
    n: int,
    start: Point,
    step: float = 1e-2,
    horizon: float = 1.0,
) -> np.ndarray:
    """Integrate the truncated field from start; returns the final state.

    The state is (v1..vn, x).  The queer part of the field vanishes in
    every truncation and is dropped; kinematic coefficients are
    evaluated on the truncated state.
    """
    shadow = _kinematic_shadow(d)
    coeff_fns = [
        (truncate(c, n).as_callable(), np.array([float(v.entry(k)) for k in range(1, n + 1)]))
        for c, v in shadow.kin
    ]
    dx_fn = truncate(shadow.dx, n).as_callable() if shadow.dx is not None else None

    def rhs(z: np.ndarray) -> np.ndarray:
        dz = np.zeros_like(z)
        for cf, direction in coeff_fns:
            dz[:-1] += cf(z) * direction
        if dx_fn is not None:
            dz[-1] += dx_fn(z)
        return dz

    z = np.array([float(v) for v in truncate_point(start, n)], dtype=float)
    steps = int(round(horizon / step))
    for _ in range(steps):
        k1 = rhs(z)
        k2 = rhs(z + 0.5 * step * k1)
        k3 = rhs(z + 0.5 * step * k2)
        k4 = rhs(z + step * k3)
        z = z + (step / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
    return z


def ill_posedness_demo(
    spec: Union[BracketSpec, None] = None,
    h: Union[Expression, None] = None,
    start: Union[Point, None] = None,
    ns: Sequence[int] = (2, 4, 8),
    step: float = 1e-2,
    horizon: float = 1.0,
    basis_count: int = 5,
) -> IllPosednessReport:
    """Contrast the bracket's prescribed rates with truncated flows.

    Default inputs: the bracket of (delta_ell, d/dx) with Hamiltonian
    h = -x, whose field is exactly the second-order vector.  There the
    bracket prescribes d/dt rho = 2 while every coordinate rate
    d/dt <v, w> is 0; the truncated flows all report d/dt rho = 0, which
    is the ill-posedness being demonstrated.
    """
    if spec is None:
        spec = bracket_spec(DELTA_ELL_FIELD, DDX_FIELD)
    if h is None:
        h = Scale(Fraction(-1), X())
    if start is None:
        start = point()

    xh = hamiltonian_field(spec, h)
    rho_rate = bracket(spec, h, RHO)
    kin_rate = canonicalize(apply_field(_kinematic_shadow(xh), RHO))
    basis_rates = tuple(
        (basis(k), bracket(spec, h, Lin(basis(k)))) for k in range(1, basis_count + 1)
    )
    consistent = poly_of(rho_rate) == poly_of(kin_rate)

    rows = []
    for n in ns:
        z0 = np.array([float(v) for v in truncate_point(start, n)], dtype=float)
        z1 = rk4_flow(xh, n, start, step, horizon)
        rho0 = float(np.dot(z0[:-1], z0[:-1]))
        rho1 = float(np.dot(z1[:-1], z1[:-1]))
        rows.append(
            FlowRow(n, (rho1 - rho0) / horizon, rho1, float(z1[-1]))
        )
    return IllPosednessReport(xh, rho_rate, kin_rate, basis_rates, consistent, tuple(rows))
