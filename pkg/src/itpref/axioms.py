"""Brute-force axiom verification against an abstract preference oracle.

Each check enumerates simple acts over a finite value grid and atom-union
events in a deterministic order, capped at a query budget, and reports
PASS/FAIL per clause with a serialized counterexample on failure.  Null
events are derived from the oracle itself (never read off a representation),
so corrupted oracles are audited on their own terms.

Continuity is verified on constructed convergent sequences only: it is a
property test, not a proof, and the non-degeneracy clause quantifies over an
unbounded set of constants, so a clean pass is reported as "not falsified
within bounds".
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction
from typing import Sequence

from .engine import TriPartition
from .filtered_space import Act, Event, FilteredSpace, Number, paste
from .oracles import (
    BracketError,
    PreferenceOracle,
    indifference_profile,
)

QUERY_CAP = 10**6
SUBGRID = (-1, 0, 1, 2)  # value set for act pairs in the sure-thing search
# constant-act bisections must land well inside the oracle's equivalence band,
# or the slope-amplified overshoot fails legitimate equivalence queries
BISECT_TOL = 1e-12


@dataclass(frozen=True)
class ActGrid:
    """Finite outcome grid for simple acts: sorted values containing 0, and
    the maximum number of distinct values per act."""

    values: tuple[Number, ...] = (-2, -1, Fraction(-1, 2), 0, Fraction(1, 2), 1, 2)
    depth: int = 3

    def __post_init__(self) -> None:
        if 0 not in self.values:
            raise ValueError("grid must contain 0")
        if any(b <= a for a, b in zip(self.values, self.values[1:])):
            raise ValueError("grid values must be strictly sorted")

    @property
    def bound(self) -> Number:
        return max(abs(self.values[0]), abs(self.values[-1]))

    def extended(self) -> tuple[Number, ...]:
        """Grid hull extended by +-4*max|grid| for dominating constants."""
        extra = 4 * self.bound
        return tuple(sorted(set(self.values) | {-extra, extra}))


DEFAULT_GRID = ActGrid()


@dataclass
class CheckResult:
    passed: bool
    counterexample: str | None = None
    note: str = ""
    queries: int = 0


@dataclass
class TransitionReport:
    """Per-clause results for the transition axiom at one step."""

    step: int
    clauses: dict[str, CheckResult] = dataclass_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.clauses.values())

    def render(self) -> str:
        lines = []
        for name, res in self.clauses.items():
            lines.append(_render_line(f"T.{name} @ step {self.step}", res))
        return "\n".join(lines)


def _render_line(title: str, res: CheckResult) -> str:
    status = "PASS" if res.passed else "FAIL"
    line = f"[{title}] {status}"
    if res.counterexample:
        line += f" counterexample: {res.counterexample}"
    if res.note:
        line += f" ({res.note})"
    return line


def _vals(act: Act) -> str:
    return "(" + ",".join(str(v) for v in act.atom_values()) + ")"


def enumerate_simple_acts(
    space: FilteredSpace,
    level: int,
    grid: ActGrid,
    max_distinct: int | None = None,
    cap: int = 128,
) -> list[Act]:
    """Deterministic enumeration of grid simple acts at a time level:
    constants first, then products over atoms with a distinct-value cap."""
    maxd = max_distinct if max_distinct is not None else grid.depth
    acts = [Act.constant(space, level, v) for v in grid.values]
    seen = {a.values for a in acts}
    m = space.n_atoms(level)
    if m > 1:
        for combo in itertools.product(grid.values, repeat=m):
            if len(acts) >= cap:
                break
            if len(set(combo)) > maxd:
                continue
            act = Act.from_atom_values(space, level, combo)
            if act.values not in seen:
                seen.add(act.values)
                acts.append(act)
    return acts[:cap]


def derive_null_events(
    oracle: PreferenceOracle,
    i: int,
    grid: ActGrid = DEFAULT_GRID,
    max_acts: int = 8,
) -> list[Event]:
    """Atoms at time index i that the (i-1, i) relation treats as null: for
    every tested act f with certainty equivalent g, rewriting f arbitrarily
    on the atom leaves the equivalence intact.  Exhaustive over the grid up
    to the act cap; i must be at least 1."""
    space = oracle.space
    if i < 1:
        raise ValueError("null events are derived from the preceding step; need i >= 1")
    step = i - 1
    candidates = enumerate_simple_acts(space, i, grid, max_distinct=2, cap=max_acts)
    out = []
    for k in range(space.n_atoms(i)):
        A = space.atom_event(i, k)
        null = True
        for f in candidates:
            try:
                g = indifference_profile(oracle, step, f, BISECT_TOL)
            except BracketError:
                continue
            if not oracle.ask(step, g, f).equiv:
                continue
            for c in grid.values:
                pasted = paste(Act.constant(space, i, c), f, A)
                if not oracle.ask(step, g, pasted).equiv:
                    null = False
                    break
            if not null:
                break
        if null:
            out.append(A)
    return out


def _null_indices(oracle: PreferenceOracle, level: int, grid: ActGrid) -> frozenset[int]:
    if level < 1:
        return frozenset()
    nulls = derive_null_events(oracle, level, grid)
    amap = oracle.space.atom_index_map(level)
    return frozenset(amap[min(e.members)] for e in nulls)


def _essential_atom_events(
    oracle: PreferenceOracle, level: int, grid: ActGrid
) -> list[Event]:
    space = oracle.space
    nulls = _null_indices(oracle, level, grid)
    return [space.atom_event(level, k) for k in range(space.n_atoms(level)) if k not in nulls]


def _union_events(
    space: FilteredSpace, level: int, atoms: Sequence[Event], max_size: int, cap: int = 64
) -> list[Event]:
    """Nonempty unions of the given atoms, smallest first, deterministic."""
    out: list[Event] = []
    for size in range(1, min(max_size, len(atoms)) + 1):
        for combo in itertools.combinations(range(len(atoms)), size):
            members: set[int] = set()
            for idx in combo:
                members |= atoms[idx].members
            out.append(Event(space, frozenset(members), level))
            if len(out) >= cap:
                return out
    return out


class _Budget:
    def __init__(self, oracle: PreferenceOracle, cap: int) -> None:
        self.oracle = oracle
        self.start = oracle.queries
        self.cap = cap

    @property
    def spent(self) -> int:
        return self.oracle.queries - self.start

    @property
    def exhausted(self) -> bool:
        return self.spent > self.cap


def check_T(
    oracle: PreferenceOracle,
    i: int,
    grid: ActGrid = DEFAULT_GRID,
    cap: int = QUERY_CAP,
) -> TransitionReport:
    """All six transition clauses at step i (the four-clause unconditional
    form when i = 0; consistency and stability are then vacuous)."""
    space = oracle.space
    budget = _Budget(oracle, cap)
    report = TransitionReport(step=i)

    null_i = _null_indices(oracle, i, grid)
    ess_atoms = [space.atom_event(i, k) for k in range(space.n_atoms(i)) if k not in null_i]
    f_acts = enumerate_simple_acts(space, i + 1, grid, cap=160)
    if i == 0:
        g_acts = [Act.constant(space, 0, v) for v in grid.values]
    else:
        g_acts = enumerate_simple_acts(space, i, grid, max_distinct=2, cap=24)
    ext = grid.extended()

    # 1. local completeness
    res = CheckResult(True)
    for g, f in itertools.product(g_acts, f_acts):
        if budget.exhausted:
            res.note = "query cap reached"
            break
        if i == 0:
            if oracle.ask(0, g, f).undecided:
                res = CheckResult(False, f"g={_vals(g)} f={_vals(f)} undecided")
                break
        else:
            if not ess_atoms:
                res = CheckResult(False, "no essential event answers any comparison")
                break
            if all(oracle.ask(i, g, f, A).undecided for A in ess_atoms):
                res = CheckResult(
                    False, f"g={_vals(g)} f={_vals(f)} undecided on every essential atom"
                )
                break
    res.queries = budget.spent
    report.clauses["1 local-completeness"] = res

    # 2. transitivity
    res = CheckResult(True)
    for f in f_acts:
        if budget.exhausted:
            res.note = "query cap reached"
            break
        lows = [c for c in ext if oracle.ask(i, Act.constant(space, i, c), f).preceq]
        highs = [c for c in ext if oracle.ask(i, Act.constant(space, i, c), f).succeq]
        if not lows or not highs:
            continue
        a, b = max(lows), min(highs)
        if a > b:
            if i == 0:
                res = CheckResult(False, f"f={_vals(f)}: {a} preceq f, {b} succeq f, but {a} > {b}")
                break
            # {b < a} is the whole space here; it must be null
            if any(k not in null_i for k in range(space.n_atoms(i))):
                res = CheckResult(
                    False, f"f={_vals(f)}: constants {b} succeq f and {a} preceq f with {{g<h}} essential"
                )
                break
    if res.passed and i >= 1:
        null_states = {s for k in null_i for s in space.atom_members(i, k)}
        for f, g, h in itertools.product(f_acts[:32], g_acts, g_acts):
            if budget.exhausted:
                res.note = "query cap reached"
                break
            if oracle.ask(i, g, f).succeq and oracle.ask(i, h, f).preceq:
                where = {s for s in range(space.n_states) if g.values[s] < h.values[s]}
                if not where <= null_states:
                    res = CheckResult(
                        False,
                        f"g={_vals(g)} succeq f={_vals(f)}, h={_vals(h)} preceq f, "
                        f"but {{g<h}} is essential",
                    )
                    break
    res.queries = budget.spent
    report.clauses["2 transitivity"] = res

    # 3. normalization: null indicators are mutually equivalent
    res = CheckResult(True)
    null_events: list[Event] = [Event(space, frozenset(), i)]
    null_events += [space.atom_event(i, k) for k in sorted(null_i)]
    if len(null_i) > 1:
        members = {s for k in null_i for s in space.atom_members(i, k)}
        null_events.append(Event(space, frozenset(members), i))
    for A, B in itertools.product(null_events, repeat=2):
        if budget.exhausted:
            res.note = "query cap reached"
            break
        if not oracle.ask(i, A.indicator(i), B.indicator(i + 1)).equiv:
            res = CheckResult(False, f"1_{A.label()} !~ 1_{B.label()} despite both null")
            break
    res.queries = budget.spent
    report.clauses["3 normalization"] = res

    # 4. non-degeneracy: dominating/dominated constants within the extension
    res = CheckResult(True, note=f"not falsified within bounds +-{ext[-1]}")
    for f in f_acts:
        if budget.exhausted:
            res.note = "query cap reached"
            break
        g2 = next(
            (c for c in reversed(ext) if oracle.ask(i, Act.constant(space, i, c), f).succeq),
            None,
        )
        g1 = next(
            (c for c in ext if oracle.ask(i, Act.constant(space, i, c), f).preceq),
            None,
        )
        if g2 is None or g1 is None:
            side = "dominating" if g2 is None else "dominated"
            res = CheckResult(
                False,
                f"f={_vals(f)}: no {side} constant within +-{ext[-1]}",
                note="unbounded search is undecidable; failure within extension reported",
            )
            break
    res.queries = budget.spent
    report.clauses["4 non-degeneracy"] = res

    # 5 & 6: consistency under sub-events; stability under unions
    if i == 0:
        note = "vacuous at the initial time: only the trivial event conditions"
        report.clauses["5 consistency"] = CheckResult(True, note=note)
        report.clauses["6 stability"] = CheckResult(True, note=note)
    else:
        res5 = CheckResult(True)
        res6 = CheckResult(True)
        masks = _union_events(space, i, ess_atoms, max_size=len(ess_atoms), cap=32)
        for g, f in itertools.product(g_acts[:8], f_acts[:48]):
            if budget.exhausted:
                res5.note = res6.note = "query cap reached"
                break
            answers = {ev.members: oracle.ask(i, g, f, ev) for ev in masks}
            for ev in masks:
                big = answers[ev.members]
                for sub in masks:
                    if sub.members < ev.members:
                        small = answers[sub.members]
                        if res5.passed and (
                            (big.succeq and not small.succeq)
                            or (big.preceq and not small.preceq)
                        ):
                            res5 = CheckResult(
                                False,
                                f"g={_vals(g)} f={_vals(f)}: answer on {ev.label()} "
                                f"not inherited by {sub.label()}",
                            )
            for ea, eb in itertools.combinations(masks, 2):
                if ea.members & eb.members:
                    continue
                union = answers.get(frozenset(ea.members | eb.members))
                if union is None:
                    continue
                va, vb = answers[ea.members], answers[eb.members]
                if res6.passed and (
                    (va.succeq and vb.succeq and not union.succeq)
                    or (va.preceq and vb.preceq and not union.preceq)
                ):
                    res6 = CheckResult(
                        False,
                        f"g={_vals(g)} f={_vals(f)}: {ea.label()} and {eb.label()} "
                        f"agree but their union does not",
                    )
            if not res5.passed and not res6.passed:
                break
        res5.queries = res6.queries = budget.spent
        report.clauses["5 consistency"] = res5
        report.clauses["6 stability"] = res6
    return report


def check_M(
    oracle: PreferenceOracle,
    i: int,
    grid: ActGrid = DEFAULT_GRID,
    cap: int = QUERY_CAP,
) -> CheckResult:
    """Strict monotonicity: raising the pasted constant on an essential event
    must strictly improve the pasted act somewhere essential."""
    space = oracle.space
    budget = _Budget(oracle, cap)
    up_atoms = _essential_atom_events(oracle, i + 1, grid)
    ess_i = _essential_atom_events(oracle, i, grid)
    events = _union_events(space, i + 1, up_atoms, max_size=2, cap=12)
    f_acts = enumerate_simple_acts(space, i + 1, grid, max_distinct=2, cap=12)
    pairs = [(a, b) for a, b in itertools.combinations(grid.values, 2)]
    skipped = 0

    def strict_on_some_atom(c: Act, X: Act, want_prec: bool) -> bool:
        for b in ess_i:
            ans = oracle.ask(i, c, X, b)
            if want_prec and ans.preceq and not ans.equiv:
                return True
            if not want_prec and ans.succeq and not ans.equiv:
                return True
        return False

    for A, f, (g1, g2) in itertools.product(events, f_acts, pairs):
        if budget.exhausted:
            return CheckResult(True, note=f"query cap reached after {budget.spent} queries")
        X1 = paste(Act.constant(space, i + 1, g1), f, A)
        X2 = paste(Act.constant(space, i + 1, g2), f, A)
        try:
            c1 = indifference_profile(oracle, i, X1, BISECT_TOL)
        except BracketError:
            skipped += 1
            continue
        if oracle.ask(i, c1, X1).equiv:
            if not strict_on_some_atom(c1, X2, want_prec=True):
                return CheckResult(
                    False,
                    f"A={A.label()} f={_vals(f)} g1={g1} g2={g2}: equivalent of the "
                    f"g1-paste is not strictly below the g2-paste on any essential event",
                    queries=budget.spent,
                )
        try:
            c2 = indifference_profile(oracle, i, X2, BISECT_TOL)
        except BracketError:
            skipped += 1
            continue
        if oracle.ask(i, c2, X2).equiv:
            if not strict_on_some_atom(c2, X1, want_prec=False):
                return CheckResult(
                    False,
                    f"A={A.label()} f={_vals(f)} g1={g1} g2={g2}: equivalent of the "
                    f"g2-paste is not strictly above the g1-paste on any essential event",
                    queries=budget.spent,
                )
    note = f"{skipped} premises not instantiable" if skipped else ""
    return CheckResult(True, note=note, queries=budget.spent)


def check_ST(
    oracle: PreferenceOracle,
    i: int,
    grid: ActGrid = DEFAULT_GRID,
    cap: int = QUERY_CAP,
) -> CheckResult:
    """Sure-thing principle: when a bracketing constant exists for the
    (f1, f2) pair pasted with h off A, one must exist for every k off A.
    The required constant is searched by bisection and then over the
    extended grid; absence within the grid closure is the failure."""
    space = oracle.space
    budget = _Budget(oracle, cap)
    up_atoms = _essential_atom_events(oracle, i + 1, grid)
    events = _union_events(space, i + 1, up_atoms, max_size=2, cap=10)
    events.append(space.whole_event(i + 1))
    consts = list(grid.values)
    ext = grid.extended()

    for A in events:
        amap = space.atom_index_map(i + 1)
        atoms_in = sorted({amap[s] for s in A.members})
        combos = list(itertools.product(SUBGRID, repeat=len(atoms_in)))
        if len(combos) > 32:
            combos = combos[:32]
        f_cands = []
        for combo in combos:
            per_atom = [0] * space.n_atoms(i + 1)
            for idx, k in enumerate(atoms_in):
                per_atom[k] = combo[idx]
            f_cands.append(Act.from_atom_values(space, i + 1, per_atom))
        for f1, f2 in itertools.product(f_cands, repeat=2):
            if budget.exhausted:
                return CheckResult(True, note=f"query cap reached after {budget.spent} queries")
            if f1.values == f2.values:
                continue
            premise_h = None
            for h in consts:
                X1 = paste(f1, Act.constant(space, i + 1, h), A)
                X2 = paste(f2, Act.constant(space, i + 1, h), A)
                try:
                    c1 = indifference_profile(oracle, i, X1, BISECT_TOL)
                except BracketError:
                    continue
                if oracle.ask(i, c1, X1).succeq and oracle.ask(i, c1, X2).preceq:
                    premise_h = h
                    break
            if premise_h is None:
                continue
            for k in consts:
                Y1 = paste(f1, Act.constant(space, i + 1, k), A)
                Y2 = paste(f2, Act.constant(space, i + 1, k), A)
                found = False
                try:
                    g2 = indifference_profile(oracle, i, Y1, BISECT_TOL)
                    found = oracle.ask(i, g2, Y1).succeq and oracle.ask(i, g2, Y2).preceq
                except BracketError:
                    pass
                if not found:
                    for c in ext:
                        cand = Act.constant(space, i, c)
                        if oracle.ask(i, cand, Y1).succeq and oracle.ask(i, cand, Y2).preceq:
                            found = True
                            break
                if not found:
                    return CheckResult(
                        False,
                        f"A={A.label()} f1={_vals(f1)} f2={_vals(f2)} h={premise_h} k={k}: "
                        f"no bracketing act within the grid closure",
                        queries=budget.spent,
                    )
    return CheckResult(True, queries=budget.spent)


def _sequence(style: str, f: Act, n: int, seed: int) -> list[Act]:
    """Uniformly bounded sequences converging pointwise to f."""
    space = f.space
    if style == "uniform":
        return [f.shift(-Fraction(1, n)), f.shift(Fraction(1, n))]
    if style == "atomwise":
        m = space.n_atoms(f.time_index)
        k = (n - 1) % m
        A = space.atom_event(f.time_index, k)
        return [paste(f.shift(-Fraction(1, n)), f, A)]
    if style == "random":
        rng = random.Random(seed * 1_000_003 + n)
        per_atom = [
            v + rng.uniform(-1, 1) / n
            for v in f.atom_values()
        ]
        return [Act.from_atom_values(space, f.time_index, per_atom)]
    if style == "constant":
        return [f]
    raise ValueError(f"unknown sequence style {style!r}")


C_STYLES = ("uniform", "atomwise", "random")
_LADDER = (1, 2, 4, 8, 16, 32, 64, 128, 256, 512, 1024)


def check_C(
    oracle: PreferenceOracle,
    i: int,
    f: Act,
    style: str,
    grid: ActGrid = DEFAULT_GRID,
    seed: int = 0,
    deltas: tuple[float, ...] = (0.5, 0.1),
) -> CheckResult:
    """Pointwise continuity on constructed sequences: strictly dominated acts
    must eventually be dominated by every tail of the sequence, atom by atom
    (on a finite space the atoms are the finest candidate partition)."""
    space = oracle.space
    f = f if f.time_index == i + 1 else f.at_time(i + 1)
    ess_i = (
        [space.whole_event(i)]
        if i == 0
        else _essential_atom_events(oracle, i, grid)
    )
    try:
        profile = indifference_profile(oracle, i, f, BISECT_TOL)
    except BracketError:
        return CheckResult(True, note="no certainty equivalent bracketable; premise vacuous")
    samples: list[tuple[Act, str]] = []
    for delta in deltas:
        below = profile.shift(-delta)
        if oracle.ask(i, below, f).preceq and not any(
            oracle.ask(i, below, f, b).equiv for b in ess_i
        ):
            samples.append((below, "prec"))
        above = profile.shift(delta)
        if oracle.ask(i, above, f).succeq and not any(
            oracle.ask(i, above, f, b).equiv for b in ess_i
        ):
            samples.append((above, "succ"))
    if not samples:
        return CheckResult(True, note="no strictly comparable act found; premise vacuous")
    n_seq = len(_sequence(style, f, 1, seed))
    for g, direction in samples:
        for seq_idx in range(n_seq):
            for b in ess_i:
                threshold = None
                for start in range(len(_LADDER)):
                    ok = True
                    for n in _LADDER[start:]:
                        fn = _sequence(style, f, n, seed)[seq_idx]
                        ans = oracle.ask(i, g, fn, b)
                        holds = ans.preceq if direction == "prec" else ans.succeq
                        if not holds:
                            ok = False
                            break
                    if ok:
                        threshold = _LADDER[start]
                        break
                if threshold is None:
                    return CheckResult(
                        False,
                        f"style={style} atom={b.label()}: no tail of the sequence keeps "
                        f"the {'dominated' if direction == 'prec' else 'dominating'} act "
                        f"on its side (g offset from the equivalent of f)",
                    )
    return CheckResult(True, note=f"{len(samples)} strict acts x {n_seq} sequences checked")


def tri_partition(
    oracle: PreferenceOracle,
    i: int,
    g: Act,
    f: Act,
    grid: ActGrid = DEFAULT_GRID,
) -> tuple[TriPartition, list[str]]:
    """Classify every essential atom by two oracle queries; an atom answering
    neither way is reported as a local-completeness violation."""
    space = oracle.space
    nulls = _null_indices(oracle, i, grid)
    a_states: set[int] = set()
    b_states: set[int] = set()
    c_states: set[int] = set()
    violations: list[str] = []
    for k in range(space.n_atoms(i)):
        if k in nulls:
            continue
        ev = space.atom_event(i, k)
        ans = oracle.ask(i, g, f, ev)
        if ans.equiv:
            a_states.update(ev.members)
        elif ans.succeq:
            b_states.update(ev.members)
        elif ans.preceq:
            c_states.update(ev.members)
        else:
            violations.append(f"atom {ev.label()} unclassifiable (local completeness fails)")
    tri = TriPartition(
        Event(space, frozenset(a_states), i),
        Event(space, frozenset(b_states), i),
        Event(space, frozenset(c_states), i),
    )
    return tri, violations


def audit_step(
    oracle: PreferenceOracle,
    i: int,
    grid: ActGrid = DEFAULT_GRID,
    seed: int = 0,
) -> dict[str, CheckResult | TransitionReport]:
    """Run every axiom check at step i; continuity is sampled on a few grid
    acts per sequence style."""
    out: dict[str, CheckResult | TransitionReport] = {}
    out["T"] = check_T(oracle, i, grid)
    out["M"] = check_M(oracle, i, grid)
    out["ST"] = check_ST(oracle, i, grid)
    space = oracle.space
    c_acts = enumerate_simple_acts(space, i + 1, grid, max_distinct=2, cap=3)
    for style in C_STYLES:
        res = CheckResult(True)
        for f in c_acts:
            res = check_C(oracle, i, f, style, grid, seed)
            if not res.passed:
                break
        out[f"C/{style}"] = res
    return out


def render_audit(results: dict[str, CheckResult | TransitionReport], step: int) -> str:
    lines = []
    for name, res in results.items():
        if isinstance(res, TransitionReport):
            lines.append(res.render())
        else:
            lines.append(_render_line(f"{name} @ step {step}", res))
    return "\n".join(lines)
