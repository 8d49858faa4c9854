"""Command-line interface: exit codes, determinism, formats."""

from __future__ import annotations

from pathlib import Path

import pytest

from itpref.cli import main
from itpref.scenario import load_scenario

SCENARIO_DIR = Path(__file__).resolve().parent.parent / "scenarios"
VILLA = str(SCENARIO_DIR / "villa.sdu")
RANDOM8 = str(SCENARIO_DIR / "random8.sdu")
BINOMIAL = str(SCENARIO_DIR / "binomial.sdu")


def run(capsys, args):
    code = main(args)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExitCodes:
    def test_no_arguments_usage(self, capsys):
        code, _, err = run(capsys, [])
        assert code == 2

    def test_unknown_subcommand(self, capsys):
        code, _, _ = run(capsys, ["frobnicate"])
        assert code == 2

    def test_missing_scenario_file(self, capsys):
        code, _, err = run(capsys, ["compare", "--scenario", "nope.sdu", "--g", "a", "--f", "b"])
        assert code == 2
        assert "no such scenario" in err

    def test_unknown_act_is_input_error(self, capsys):
        code, _, err = run(capsys, ["cce", "--scenario", VILLA, "--f", "nonesuch"])
        assert code == 2
        assert "nonesuch" in err


class TestCompare:
    def test_villa_cash_vs_terminal_villa(self, capsys):
        code, out, _ = run(
            capsys,
            ["compare", "--scenario", VILLA, "--g", "cash", "--f", "villa_t2",
             "--s", "0", "--t", "2"],
        )
        assert code == 0
        assert "verdict: PRECEQ" in out

    def test_tsv_format(self, capsys):
        code, out, _ = run(
            capsys,
            ["compare", "--scenario", VILLA, "--g", "cash", "--f", "villa_t2",
             "--s", "0", "--t", "2", "--format", "tsv"],
        )
        assert code == 0
        assert "verdict\tPRECEQ" in out


class TestSemigroup:
    def test_random8_within_bound(self, capsys):
        code, out, _ = run(capsys, ["semigroup", "--scenario", RANDOM8])
        assert code == 0
        assert "max residual" in out
        worst = float(out.split("max residual: ")[1].splitlines()[0])
        assert worst <= 1e-8

    def test_deterministic_output(self, capsys):
        _, first, _ = run(capsys, ["semigroup", "--scenario", RANDOM8])
        _, second, _ = run(capsys, ["semigroup", "--scenario", RANDOM8])
        assert first == second

    def test_explicit_triple(self, capsys):
        code, out, _ = run(
            capsys,
            ["semigroup", "--scenario", RANDOM8, "--f", "payoff_a",
             "--s", "0", "--t", "1", "--v", "3"],
        )
        assert code == 0
        assert out.count("payoff_a") == 1

    def test_partial_triple_rejected(self, capsys):
        code, _, err = run(capsys, ["semigroup", "--scenario", RANDOM8, "--s", "0"])
        assert code == 2
        assert "together" in err


class TestGridFlag:
    def test_axioms_with_custom_grid(self, capsys):
        # values starting with '-' need the '--grid=' spelling
        code, out, _ = run(
            capsys,
            ["axioms", "--scenario", VILLA, "--step", "0", "--grid=-2,-1,0,1,2"],
        )
        assert code == 0
        assert "FAIL" not in out


class TestCCE:
    def test_villa_time0(self, capsys):
        code, out, _ = run(capsys, ["cce", "--scenario", VILLA, "--f", "villa_t1", "--s", "0"])
        assert code == 0
        assert "1099900" in out


class TestAxioms:
    def test_villa_induced_oracle_passes(self, capsys):
        code, out, _ = run(capsys, ["axioms", "--scenario", VILLA, "--step", "0"])
        assert code == 0
        assert "[T.1 local-completeness @ step 0] PASS" in out
        assert "FAIL" not in out

    def test_deterministic_given_seed(self, capsys):
        args = ["axioms", "--scenario", VILLA, "--step", "0", "--seed", "7"]
        _, first, _ = run(capsys, args)
        _, second, _ = run(capsys, args)
        assert first == second


class TestRecoverUniqueness:
    def test_round_trip_document(self, capsys, tmp_path):
        out_path = str(tmp_path / "recovered.sdu")
        code, out, _ = run(
            capsys,
            ["recover", "--scenario", VILLA, "--out", out_path,
             "--allow-few-essential", "--accept-tol", "1e-3"],
        )
        assert code == 0
        assert "verdict agreement: 100/100" in out
        recovered = load_scenario(out_path)
        assert recovered.space.states == ("d1", "d2", "ok")
        code, out, _ = run(
            capsys,
            ["uniqueness", "--scenario", VILLA, "--other", out_path, "--tol", "1e-3"],
        )
        assert code == 0
        assert "ACCEPT" in out

    def test_self_uniqueness_accepts(self, capsys):
        code, out, _ = run(capsys, ["uniqueness", "--scenario", VILLA, "--other", VILLA])
        assert code == 0
        assert "max deviation: 0.0" in out

    def test_few_essential_guard(self, capsys):
        code, _, err = run(capsys, ["recover", "--scenario", VILLA])
        assert code == 2
        assert "three" in err


class TestExamples:
    @pytest.mark.parametrize("name", ["villa", "dpp", "forward"])
    def test_examples_run_clean(self, capsys, name):
        code, out, _ = run(capsys, ["example", name])
        assert code == 0 and out

    def test_villa_variant_flag(self, capsys):
        code, out, _ = run(capsys, ["example", "villa", "--variant", "paper-stated"])
        assert code == 0
        assert "1099900" in out

    def test_example_dpp_scenario_override(self, capsys):
        code, out, _ = run(capsys, ["example", "dpp", "--scenario", BINOMIAL])
        assert code == 0
        assert "optimal policy" in out

    def test_example_output_deterministic(self, capsys):
        _, first, _ = run(capsys, ["example", "villa"])
        _, second, _ = run(capsys, ["example", "villa"])
        assert first == second
