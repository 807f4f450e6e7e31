"""Command-line interface: golden outputs, formats, exit codes, figures."""

import subprocess
import sys

import pytest

from opbrackets.cli import main

QUEER_ARGS = ["--d1", "field(queer=1)", "--d2", "field(dx=1)"]
KIN_ARGS = ["--d1", "field(kin=1*[1:1])", "--d2", "field(kin=1*[2:1])"]
MIXED_ARGS = ["--d1", "field(kin=1*[1:1];queer=x)", "--d2", "field(dx=1)"]
HARMONIC_OP = "op(2;pow(1,1);)"


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestGoldenOutputs:
    def test_delta(self, capsys):
        code, out, err = run(["delta", "q(op(1;;))"], capsys)
        assert (code, out, err) == (0, "2\n", "")

    def test_eval(self, capsys):
        code, out, _ = run(["eval", "x*q(op(1;;))", "--at", "point([1:1],3)"], capsys)
        assert (code, out) == (0, "3\n")

    def test_grad(self, capsys):
        code, out, _ = run(["grad", "x*q(op(1;;))", "--at", "point([1:1],3)"], capsys)
        assert (code, out) == (0, "v: [1:6]\nx: 1\n")

    def test_hess(self, capsys):
        code, out, _ = run(["hess", "x*q(op(1;;))", "--at", "point([1:1],3)"], capsys)
        assert (code, out) == (0, "vv: op(6;;)\nvx: [1:2]\nxx: 0\n")

    def test_bracket(self, capsys):
        code, out, _ = run(
            ["bracket", *QUEER_ARGS, "--", "-1*x", "q(op(1;;))"], capsys
        )
        assert (code, out) == (0, "2\n")

    def test_hamfield(self, capsys):
        code, out, _ = run(["hamfield", *QUEER_ARGS, "--", "-1*x"], capsys)
        assert (code, out) == (0, "field(queer=1)\n")
        code, out, _ = run(["hamfield", *QUEER_ARGS, "--", "q(op(1;;))"], capsys)
        assert (code, out) == (0, "field(dx=2)\n")

    def test_order(self, capsys):
        code, out, _ = run(
            ["order", "--field", "field(queer=1)", "--at", "point([],0)"], capsys
        )
        assert (code, out) == (0, "Queer\n")
        code, out, _ = run(
            ["order", "--field", "field(kin=1*[1:1])", "--at", "point([],0)"], capsys
        )
        assert (code, out) == (0, "Kinematic\n")

    def test_tensor_kinematic(self, capsys):
        code, out, _ = run(["tensor", *KIN_ARGS, "--at", "point([],0)"], capsys)
        assert (code, out) == (0, "[1:1]^[2:1]\n")

    def test_tensor_mixed_at_vanishing_weight(self, capsys):
        code, out, _ = run(["tensor", *MIXED_ARGS, "--at", "point([],0)"], capsys)
        assert (code, out) == (0, "[1:1]^dx\n")

    def test_witness_origin(self, capsys):
        code, out, _ = run(["witness", *QUEER_ARGS, "--at", "point([],0)"], capsys)
        assert (code, out) == (0, "h: -1*x\nf: q(op(1;;))\nvalue: 2\n")

    def test_witness_off_origin(self, capsys):
        code, out, _ = run(["witness", *QUEER_ARGS, "--at", "point([1:1],0)"], capsys)
        assert (code, out) == (
            0,
            "h: -1*x\nf: 1-2*ip(v,[1:1])+q(op(1;;))\nvalue: 2\n",
        )

    def test_sharp(self, capsys):
        code, out, _ = run(
            ["sharp", *KIN_ARGS, "--at", "point([],0)", "--mu", "mu([1:2],3)"], capsys
        )
        assert (code, out) == (0, "v: [2:2]\nx: 0\n")
        code, out, _ = run(
            ["sharp", *MIXED_ARGS, "--at", "point([],0)", "--mu", "mu([1:2],3)"],
            capsys,
        )
        assert (code, out) == (0, "v: [1:-3]\nx: 2\n")

    def test_truncate(self, capsys):
        code, out, _ = run(["truncate", "x*q(op(1;;))", "-n", "3"], capsys)
        assert (code, out) == (0, "v3*v3*x+v2*v2*x+v1*v1*x\n")

    def test_ellconv_text(self, capsys):
        code, out, _ = run(["ellconv", "--op", HARMONIC_OP, "--ns", "10,100,1000"], capsys)
        assert code == 0
        assert out == (
            "n=10: diagonal entry 21/10 target 2 abs err 1/10\n"
            "n=100: diagonal entry 201/100 target 2 abs err 1/100\n"
            "n=1000: diagonal entry 2001/1000 target 2 abs err 1/1000\n"
        )

    def test_ellconv_csv(self, capsys):
        code, out, _ = run(
            ["ellconv", "--op", HARMONIC_OP, "--ns", "10,100,1000", "--format", "csv"],
            capsys,
        )
        assert code == 0
        assert out == (
            "n,ell_n,target,abs_err\n"
            "10,2.1,2,0.1\n"
            "100,2.01,2,0.01\n"
            "1000,2.001,2,0.001\n"
        )

    def test_axioms_text(self, capsys):
        code, out, _ = run(["axioms", *QUEER_ARGS, "--trials", "5"], capsys)
        assert code == 0
        assert out == (
            "skew: 0 failure(s) in 5 trials\n"
            "leibniz: 0 failure(s) in 5 trials\n"
            "jacobi: 0 failure(s) in 5 trials\n"
            "all axioms hold\n"
        )

    def test_axioms_csv(self, capsys):
        code, out, _ = run(
            ["axioms", *QUEER_ARGS, "--trials", "5", "--format", "csv"], capsys
        )
        assert code == 0
        assert out == "axiom,trials,failures\nskew,5,0\nleibniz,5,0\njacobi,5,0\n"

    def test_demo_no_extension(self, capsys):
        code, out, _ = run(["demo", "no-extension"], capsys)
        assert code == 0
        assert out == (
            "lhs = 2\n"
            "rhs = 0\n"
            "the derivation applied to the squared norm does not factor\n"
            "through pairings of first derivatives: 2 != 0\n"
        )

    def test_demo_ill_posed_csv(self, capsys):
        code, out, _ = run(["demo", "ill-posed", "--format", "csv"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "quantity,n,value"
        assert lines[1] == "bracket_rho_rate,,2"
        assert lines[2] == "kinematic_rho_rate,,0"
        assert lines[3] == "consistent,,no"
        assert lines[4:9] == [f"coordinate_rate,{k},0" for k in range(1, 6)]
        assert lines[9:] == [f"flow_rho_rate,{n},0" for n in (2, 4, 8)]

    def test_demo_ill_posed_text(self, capsys):
        code, out, _ = run(["demo", "ill-posed"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "hamiltonian field: field(queer=1)"
        assert lines[1] == "bracket rate for the squared norm: 2"
        assert lines[2] == "rate from the kinematic part alone: 0"
        assert "symbolically consistent: no" in lines

    def test_fdcheck_csv_small_errors(self, capsys):
        code, out, _ = run(
            ["fdcheck", "x*q(op(1;;))", "--at", "point([1:1],1)", "--format", "csv"],
            capsys,
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "block,max_rel_err"
        blocks = [ln.split(",")[0] for ln in lines[1:]]
        assert blocks == ["grad_v", "grad_x", "hess_vv", "hess_vx", "hess_xx"]
        assert all(float(ln.split(",")[1]) <= 1e-6 for ln in lines[1:])


class TestDeterminism:
    @pytest.mark.parametrize(
        "argv",
        [
            ["axioms", *QUEER_ARGS, "--trials", "5", "--format", "csv"],
            ["demo", "ill-posed", "--format", "csv"],
            ["fdcheck", "x*q(op(1;;))", "--at", "point([1:1],1)", "--format", "csv"],
        ],
    )
    def test_same_invocation_same_bytes(self, argv, capsys):
        _, first, _ = run(argv, capsys)
        _, second, _ = run(argv, capsys)
        assert first == second


class TestInputPlumbing:
    def test_file_argument(self, tmp_path, capsys):
        src = tmp_path / "expr.txt"
        src.write_text("q(op(1;;))\n")
        code, out, _ = run(["delta", "--file", str(src)], capsys)
        assert (code, out) == (0, "2\n")

    def test_file_and_positional_mix(self, tmp_path, capsys):
        # file contents append after positionals, so the pair here is
        # (q(op(1;;)), -1*x) and the bracket flips sign
        src = tmp_path / "h.txt"
        src.write_text("-1*x")
        code, out, _ = run(
            ["bracket", *QUEER_ARGS, "--file", str(src), "q(op(1;;))"], capsys
        )
        assert (code, out) == (0, "-2\n")

    def test_too_many_expressions(self, capsys):
        code, _, err = run(["delta", "x", "x"], capsys)
        assert code == 2
        assert err.startswith("SyntaxError:")


class TestExitCodes:
    def test_unknown_verb(self, capsys):
        code, _, err = run(["frobnicate"], capsys)
        assert code == 2
        assert err.startswith("SyntaxError:")
        assert err.count("\n") == 1

    def test_missing_required_flag(self, capsys):
        code, _, err = run(["eval", "x"], capsys)
        assert code == 2
        assert err.startswith("SyntaxError:")

    def test_malformed_expression(self, capsys):
        code, _, err = run(["delta", "q(op(1;"], capsys)
        assert code == 2
        assert err.startswith("SyntaxError:")

    def test_queer_tensor_is_domain_failure(self, capsys):
        code, _, err = run(["tensor", *QUEER_ARGS, "--at", "point([],0)"], capsys)
        assert code == 1
        assert err == (
            "QueerAtPoint: a field is queer at point([],0) and the field values "
            "are independent; no bivector exists\n"
        )

    def test_witness_not_found(self, capsys):
        code, _, err = run(["witness", *KIN_ARGS, "--at", "point([],0)"], capsys)
        assert code == 1
        assert err.startswith("WitnessNotFound:")

    def test_noncommuting_bracket(self, capsys):
        code, _, err = run(
            ["bracket", "--d1", "field(queer=x)", "--d2", "field(dx=1)", "--", "x", "x"],
            capsys,
        )
        assert code == 1
        assert err.startswith("NonCommutingFields:")


class TestFigures:
    def test_report_verbs_render_figures(self, tmp_path, capsys):
        jobs = [
            (["axioms", *QUEER_ARGS, "--trials", "3"], "axioms.png"),
            (
                ["ellconv", "--op", HARMONIC_OP, "--ns", "5,10"],
                "ellconv.png",
            ),
            (
                ["fdcheck", "x*q(op(1;;))", "--at", "point([1:1],1)"],
                "fdcheck.png",
            ),
            (["demo", "ill-posed"], "illposed.png"),
        ]
        for argv, name in jobs:
            out_dir = tmp_path / name.replace(".png", "")
            code, _, _ = run([*argv, "--figures", str(out_dir)], capsys)
            assert code == 0
            target = out_dir / name
            assert target.is_file() and target.stat().st_size > 0


class TestSubprocess:
    def test_module_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "opbrackets.cli", "delta", "q(op(1;;))"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout == "2\n"

    def test_invalid_log_level(self):
        proc = subprocess.run(
            [sys.executable, "-m", "opbrackets.cli", "delta", "q(op(1;;))"],
            capture_output=True,
            text=True,
            env={"PATH": "/usr/bin:/bin", "LOG_LEVEL": "bogus"},
        )
        assert proc.returncode == 1
        assert proc.stderr.startswith("EngineError:")

    def test_info_logging_keeps_stdout_clean(self, tmp_path):
        proc = subprocess.run(
            [
                sys.executable,
                "-m",
                "opbrackets.cli",
                "ellconv",
                "--op",
                HARMONIC_OP,
                "--ns",
                "5,10",
                "--figures",
                str(tmp_path),
            ],
            capture_output=True,
            text=True,
            env={"PATH": "/usr/bin:/bin", "LOG_LEVEL": "info"},
        )
        assert proc.returncode == 0
        assert proc.stdout == (
            "n=5: diagonal entry 11/5 target 2 abs err 1/5\n"
            "n=10: diagonal entry 21/10 target 2 abs err 1/10\n"
        )
        assert "INFO" in proc.stderr and "ellconv.png" in proc.stderr
