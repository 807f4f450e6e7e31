"""Matplotlib rendering of report data to image files.

Report verbs of the command line render a figure next to their
delimited output when asked for one.  Everything draws on the Agg
backend so no display is needed; each function writes a single PNG and
returns the path it wrote.
"""

from __future__ import annotations

import os
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)


def _save(fig, out_dir: str, name: str) -> str:
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, name)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def save_ellconv(rows: Sequence, out_dir: str, name: str = "ellconv.png") -> str:
    """Diagonal entries against the limit: absolute error on a log scale."""
    ns = [r.n for r in rows]
    errs = [max(r.abs_err_float, 1e-300) for r in rows]
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.loglog(ns, errs, "o-", color="tab:blue")
    ax.set_xlabel("n")
    ax.set_ylabel("|<A e_n, e_n> - ell(A)|")
    ax.set_title("diagonal convergence to the limit functional")
    ax.grid(True, which="both", alpha=0.3)
    return _save(fig, out_dir, name)


def save_fdcheck(report, out_dir: str, name: str = "fdcheck.png") -> str:
    """Worst relative error per jet block."""
    blocks = [b for b, _ in report.rows]
    errs = [max(e, 1e-300) for _, e in report.rows]
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.bar(blocks, errs, color="tab:green")
    ax.set_yscale("log")
    ax.set_ylabel("max relative error")
    ax.set_title(f"finite differences vs symbolic jets (n={report.n}, h={report.step:g})")
    ax.tick_params(axis="x", rotation=20)
    return _save(fig, out_dir, name)


def save_axioms(report, out_dir: str, name: str = "axioms.png") -> str:
    """Failure counts per bracket axiom."""
    names = [r.axiom for r in report.rows]
    fails = [r.failures for r in report.rows]
    trials = report.rows[0].trials if report.rows else 0
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.bar(names, fails, color="tab:red")
    ax.set_ylim(0, max(1, max(fails, default=0)))
    ax.set_ylabel("failures")
    ax.set_title(f"bracket axioms over {trials} random trials")
    return _save(fig, out_dir, name)


def save_illposed(report, out_dir: str, name: str = "illposed.png") -> str:
    """Prescribed bracket rate against what each truncated flow measures."""
    from .expr import constant_value
    from .errors import DomainError

    ns = [row.n for row in report.rows]
    measured = [row.mean_rho_rate for row in report.rows]
    fig, ax = plt.subplots(figsize=(5.0, 3.4))
    ax.plot(ns, measured, "s-", color="tab:orange", label="truncated flow")
    try:
        target = float(constant_value(report.rho_rate))
        ax.axhline(target, color="tab:blue", linestyle="--", label="bracket rate")
    except DomainError:
        pass
    ax.set_xlabel("truncation size n")
    ax.set_ylabel("mean d/dt of the squared norm")
    ax.set_title("bracket rate vs truncated flows")
    ax.legend()
    ax.grid(True, alpha=0.3)
    return _save(fig, out_dir, name)
