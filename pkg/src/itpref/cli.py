"""Command-line interface.

Subcommands: ``cce``, ``compare``, ``semigroup``, ``axioms``, ``recover``,
``uniqueness``, ``example {villa|dpp|forward}``.  Exit codes: 0 success,
1 check failure, 2 input error.  All output is deterministic given ``--seed``.
"""

from __future__ import annotations

import argparse
import sys

from .apps import (
    dpp_scenario,
    forward_scenario,
    run_dpp,
    run_forward_check,
    run_villa,
    VILLA_VARIANTS,
)
from .axioms import ActGrid, DEFAULT_GRID, audit_step, render_audit, TransitionReport
from .engine import cce, compare, semigroup_residual
from .filtered_space import InvariantError
from .oracles import InducedOracle
from .recovery import (
    RecoveryError,
    check_relative_uniqueness,
    recover_representation,
)
from .sampling import verdict_agreement
from .scenario import (
    ScenarioError,
    ScenarioSpec,
    load_scenario,
    parse_number,
    save_scenario,
)


def _emit(rows: list[tuple[str, str]], fmt: str) -> None:
    for key, value in rows:
        if fmt == "tsv":
            print(f"{key}\t{value}")
        else:
            print(f"{key}: {value}")


def _load(path: str) -> ScenarioSpec:
    try:
        return load_scenario(path)
    except FileNotFoundError:
        raise ScenarioError(f"no such scenario file: {path}")


def _grid(args) -> ActGrid:
    if not args.grid:
        return DEFAULT_GRID
    values = tuple(parse_number(v) for v in args.grid.split(","))
    return ActGrid(tuple(sorted(values)))


def _named_act(spec: ScenarioSpec, name: str):
    if name not in spec.acts:
        raise ScenarioError(
            f"unknown act {name!r}; scenario defines {sorted(spec.acts)}"
        )
    return spec.acts[name]


def _cmd_cce(args) -> int:
    spec = _load(args.scenario)
    rep = spec.representation()
    f = _named_act(spec, args.f)
    t = args.t if args.t is not None else f.time_index
    result = cce(rep, args.s, t, f, args.tol)
    rows = [("s", str(args.s)), ("t", str(t)), ("act", args.f)]
    for k in range(spec.space.n_atoms(args.s)):
        rows.append((f"cce {spec.space.atom_label(args.s, k)}", repr(float(result.value_on_atom(k)))))
    _emit(rows, args.format)
    return 0


def _cmd_compare(args) -> int:
    spec = _load(args.scenario)
    rep = spec.representation()
    g = _named_act(spec, args.g)
    f = _named_act(spec, args.f)
    s = args.s if args.s is not None else g.time_index
    t = args.t if args.t is not None else f.time_index
    verdict = compare(rep, s, t, g.at_time(s) if g.time_index < s else g, f, args.tol)
    rows = [
        ("verdict", verdict.tag.upper()),
        ("equivalent on", verdict.tri.A.label()),
        (f"{args.g} strictly better on", verdict.tri.B.label()),
        (f"{args.f} strictly better on", verdict.tri.C.label()),
    ]
    _emit(rows, args.format)
    return 0


def _cmd_semigroup(args) -> int:
    spec = _load(args.scenario)
    rep = spec.representation()
    last = spec.space.last_index
    given = (args.s, args.t, args.v)
    if any(x is not None for x in given) and any(x is None for x in given):
        raise ScenarioError("--s, --t and --v must be given together")
    cases = []
    if args.f is not None:
        names = [args.f]
    else:
        names = sorted(spec.acts)
    for name in names:
        f = spec.acts[name]
        for v in range(max(2, f.time_index), last + 1):
            for s in range(0, v - 1):
                for t in range(s + 1, v):
                    if args.s is not None and (s, t, v) != (args.s, args.t, args.v):
                        continue
                    cases.append((name, s, t, v))
    if not cases:
        raise ScenarioError("no admissible (s, t, v) triple for the requested acts")
    worst = 0.0
    rows = []
    for name, s, t, v in cases:
        r = semigroup_residual(rep, s, t, v, spec.acts[name], args.tol)
        worst = max(worst, r)
        rows.append((f"{name} s={s} t={t} v={v}", repr(r)))
    rows.append(("max residual", repr(worst)))
    bound = 10 * args.tol
    rows.append(("bound 10*tol", repr(bound)))
    _emit(rows, args.format)
    return 0 if worst <= bound else 1


def _cmd_axioms(args) -> int:
    spec = _load(args.scenario)
    oracle = InducedOracle(spec.representation(), tol=args.tol, grid=_grid(args))
    steps = [args.step] if args.step is not None else list(oracle.steps())
    ok = True
    blocks = []
    for i in steps:
        results = audit_step(oracle, i, _grid(args), seed=args.seed)
        blocks.append(render_audit(results, i))
        for res in results.values():
            passed = res.passed if not isinstance(res, TransitionReport) else res.passed
            ok = ok and passed
    print("\n".join(blocks))
    return 0 if ok else 1


def _cmd_recover(args) -> int:
    spec = _load(args.scenario)
    rep = spec.representation()
    oracle = InducedOracle(rep, tol=args.tol)
    result = recover_representation(
        oracle,
        rep.u0,
        _grid(args),
        require_three_essential=not args.allow_few_essential,
    )
    uniq = check_relative_uniqueness(rep, result.rep, _grid(args).values, tol=args.accept_tol)
    checked, mismatches = verdict_agreement(rep, result.rep, args.pairs, seed=args.seed)
    rows = [
        ("max Debreu residual", repr(result.max_debreu_residual)),
        ("relative uniqueness vs original", "ACCEPT" if uniq.accepted else "REJECT"),
        ("max uniqueness deviation", repr(uniq.max_deviation)),
        ("verdict agreement", f"{checked - mismatches}/{checked}"),
    ]
    if args.out:
        recovered_spec = ScenarioSpec(
            spec.space,
            result.rep.P,
            result.rep.field,
            spec.acts,
            spec.strategies,
            (spec.title or "scenario") + "-recovered",
            spec.variant,
        )
        save_scenario(recovered_spec, args.out)
        rows.append(("written", args.out))
    _emit(rows, args.format)
    return 0 if uniq.accepted and mismatches == 0 else 1


def _cmd_uniqueness(args) -> int:
    spec_a = _load(args.scenario)
    spec_b = _load(args.other)
    result = check_relative_uniqueness(
        spec_a.representation(), spec_b.representation(), _grid(args).values, args.tol
    )
    rows = [
        ("relative uniqueness", "ACCEPT" if result.accepted else "REJECT"),
        ("max deviation", repr(result.max_deviation)),
    ]
    if result.witness:
        rows.append(("witness", result.witness))
    _emit(rows, args.format)
    return 0 if result.accepted else 1


def _cmd_example(args) -> int:
    if args.name == "villa":
        variant = args.variant
        if variant is None and args.scenario:
            variant = _load(args.scenario).variant
        result = run_villa(variant or "paper-arithmetic")
    elif args.name == "dpp":
        spec = _load(args.scenario) if args.scenario else dpp_scenario()
        result = run_dpp(spec)
    else:
        spec = _load(args.scenario) if args.scenario else forward_scenario()
        result = run_forward_check(spec)
    print(result.text, end="")
    return 0 if result.passed else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="itpref",
        description="Intertemporal preference queries, axiom audits, and "
        "representation recovery on finite scenario trees.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario_required=True):
        p.add_argument("--scenario", required=scenario_required, help="scenario file path")
        p.add_argument("--tol", type=float, default=1e-9, help="tolerance (default 1e-9)")
        p.add_argument("--grid", default=None, help="comma-separated outcome grid (use --grid=-2,... for negative leads)")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
        p.add_argument("--format", choices=("text", "tsv"), default="text")

    p = sub.add_parser("cce", help="conditional certainty equivalent of a named act")
    common(p)
    p.add_argument("--f", required=True, help="act name")
    p.add_argument("--s", type=int, default=0, help="valuation time index")
    p.add_argument("--t", type=int, default=None, help="act time index (default: its own)")
    p.set_defaults(fn=_cmd_cce)

    p = sub.add_parser("compare", help="verdict between two named acts")
    common(p)
    p.add_argument("--g", required=True, help="earlier act name")
    p.add_argument("--f", required=True, help="later act name")
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p.set_defaults(fn=_cmd_compare)

    p = sub.add_parser("semigroup", help="nested-vs-direct certainty equivalent residuals")
    common(p)
    p.add_argument("--f", default=None, help="act name (default: all)")
    p.add_argument("--s", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--v", type=int, default=None)
    p.set_defaults(fn=_cmd_semigroup)

    p = sub.add_parser("axioms", help="audit the axioms of the induced oracle")
    common(p)
    p.add_argument("--step", type=int, default=None, help="single step index")
    p.set_defaults(fn=_cmd_axioms)

    p = sub.add_parser("recover", help="reconstruct the representing pair from the induced oracle")
    common(p)
    p.add_argument("--out", default=None, help="write the recovered scenario here")
    p.add_argument("--pairs", type=int, default=100, help="verdict-agreement sample size")
    p.add_argument(
        "--allow-few-essential",
        action="store_true",
        help="permit levels with fewer than three essential atoms",
    )
    p.add_argument(
        "--accept-tol",
        type=float,
        default=1e-6,
        help="relative-uniqueness acceptance tolerance; query noise is "
        "amplified by 1/mass on near-null atoms (default 1e-6)",
    )
    p.set_defaults(fn=_cmd_recover)

    p = sub.add_parser("uniqueness", help="relative-uniqueness check between two scenarios")
    common(p)
    p.add_argument("--other", required=True, help="second scenario file")
    p.set_defaults(fn=_cmd_uniqueness)

    p = sub.add_parser("example", help="run a worked demonstration")
    p.add_argument("name", choices=("villa", "dpp", "forward"))
    p.add_argument(
        "--variant",
        choices=VILLA_VARIANTS,
        default=None,
        help="villa arithmetic variant (default: the scenario file's, else paper-arithmetic)",
    )
    common(p, scenario_required=False)
    p.set_defaults(fn=_cmd_example)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (ScenarioError, InvariantError, RecoveryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


cli_dispatch = main


if __name__ == "__main__":
    sys.exit(main())
