"""Representation-side machinery for intertemporal preference queries.

A representation is a probability on the terminal states together with a
stochastic dynamic utility field.  It answers: one-step expected-utility
functionals, conditional certainty equivalents (invert the earlier curve on
the conditional expected utility of the later act), tri-partitioned verdicts
"up to null events", the semigroup identity residual, time-consistency, and
the stochastic-discount / numeraire reformulations of the same preference.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .curves import (
    ArgScaledCurve,
    GapError,
    INVERT_TOL,
    MonotoneCurve,
    RangeError,
)
from .filtered_space import (
    ACT_TOL,
    Act,
    Event,
    FilteredSpace,
    InvariantError,
    Number,
    ProbabilityMeasure,
    conditional_expectation,
)
from .utility_field import StarContinuityResult, UtilityField, is_star_continuous

NORM_TOL = 1e-12


class PreconditionError(ValueError):
    """An operation's stated precondition does not hold."""


@dataclass(frozen=True)
class Representation:
    """A (probability, stochastic dynamic utility) pair on a filtered space.

    The time-0 curve plays the role of the fixed initial utility: it must be
    continuous and vanish at 0.  Star-continuity at later times is *not* a
    construction invariant (negative controls deliberately violate it); the
    theorem-facing suites assert :meth:`star_continuity` up front.
    """

    space: FilteredSpace
    P: ProbabilityMeasure
    field: UtilityField

    def __post_init__(self) -> None:
        if self.P.space != self.space or self.field.space != self.space:
            raise InvariantError("measure/field space mismatch")
        u0 = self.field.curve_on_atom(0, 0)
        if u0.jumps():
            raise InvariantError("initial utility must be continuous")
        if abs(u0(0)) > NORM_TOL:
            raise InvariantError(f"initial utility not normalized: u0(0) = {u0(0)!r}")

    @property
    def u0(self) -> MonotoneCurve:
        return self.field.curve_on_atom(0, 0)

    def star_continuity(self, i: int | None = None) -> StarContinuityResult:
        indices = range(self.space.n_times) if i is None else [i]
        for j in indices:
            res = is_star_continuous(self.field, self.P, j)
            if not res:
                return res
        return StarContinuityResult(True)


@dataclass(frozen=True)
class TriPartition:
    """Equivalence / strictly-better / strictly-worse events covering the
    positive-probability states at the comparison time."""

    A: Event
    B: Event
    C: Event


@dataclass(frozen=True)
class Verdict:
    """Outcome of a conditional comparison, with its witnessing tri-partition.

    Tags: ``equiv`` (B and C null), ``succeq`` (C null, B essential),
    ``preceq`` (B null, C essential), ``mixed`` (both essential).
    """

    tag: str
    tri: TriPartition
    margin: Act  # u(s, g) - E[u(t, f) | F_s], per state

    @property
    def holds_succeq(self) -> bool:
        return self.tag in ("succeq", "equiv")

    @property
    def holds_preceq(self) -> bool:
        return self.tag in ("preceq", "equiv")


def _lift(act: Act, j: int) -> Act:
    if act.time_index > j:
        raise PreconditionError(
            f"act at time index {act.time_index} is not measurable at {j}"
        )
    return act if act.time_index == j else act.at_time(j)


def v_functional(rep: Representation, i: int, f: Act) -> Act:
    """One-step functional E[u(t_{i+1}, f) | F_{t_i}]."""
    rep.space.check_time_index(i + 1)
    f = _lift(f, i + 1)
    return conditional_expectation(rep.space, rep.P, rep.field.eval(i + 1, f), i)


def expected_utility_profile(rep: Representation, s: int, t: int, f: Act) -> Act:
    """E[u(t, f) | F_s] for arbitrary grid times s <= t."""
    f = _lift(f, t)
    return conditional_expectation(rep.space, rep.P, rep.field.eval(t, f), s)


def cce(rep: Representation, s: int, t: int, f: Act, tol: float = INVERT_TOL) -> Act:
    """Conditional certainty equivalent of the time-t act f, valued at time s.

    Atom-wise inversion of the time-s curve on E[u(t,f)|F_s]; zero-probability
    atoms are filled with 0 and flagged.  A target outside a curve's range is
    a hard error (the representation's side condition fails), as is a target
    inside a jump gap.
    """
    if not 0 <= s < t <= rep.space.last_index:
        raise PreconditionError(f"need time indices 0 <= s < t, got s={s}, t={t}")
    target = expected_utility_profile(rep, s, t, f)
    values: list[Number] = [0] * rep.space.n_states
    for k in rep.P.positive_atoms(s):
        members = rep.space.atom_members(s, k)
        y = target.values[members[0]]
        curve = rep.field.curve_on_atom(s, k)
        try:
            inv = curve.invert_detailed(y, tol)
        except RangeError as exc:
            raise RangeError(
                f"atom {rep.space.atom_label(s, k)} at time index {s}: {exc}"
            ) from None
        if inv.in_gap:
            raise GapError(
                f"conditional expected utility {y!r} falls in a jump gap of "
                f"{curve.spec()} on atom {rep.space.atom_label(s, k)}"
            )
        for sidx in members:
            values[sidx] = inv.x
    return Act(rep.space, s, tuple(values), frozenset(target.null_fill))


def compare(
    rep: Representation, s: int, t: int, g: Act, f: Act, tol: float = ACT_TOL
) -> Verdict:
    """Tri-partitioned verdict for "g at time s versus f at time t".

    Atoms with |margin| <= tol count as equivalent so that inversion noise
    never flips a tie; zero-probability atoms are left unclassified.
    """
    if not 0 <= s < t <= rep.space.last_index:
        raise PreconditionError(f"need time indices 0 <= s < t, got s={s}, t={t}")
    g = _lift(g, s)
    us = rep.field.eval(s, g)
    target = expected_utility_profile(rep, s, t, f)
    margin = us.minus(target)
    a_states: set[int] = set()
    b_states: set[int] = set()
    c_states: set[int] = set()
    for k in rep.P.positive_atoms(s):
        members = rep.space.atom_members(s, k)
        d = margin.values[members[0]]
        if abs(d) <= tol:
            a_states.update(members)
        elif d > tol:
            b_states.update(members)
        else:
            c_states.update(members)
    tri = TriPartition(
        Event(rep.space, frozenset(a_states), s),
        Event(rep.space, frozenset(b_states), s),
        Event(rep.space, frozenset(c_states), s),
    )
    if not b_states and not c_states:
        tag = "equiv"
    elif not c_states:
        tag = "succeq"
    elif not b_states:
        tag = "preceq"
    else:
        tag = "mixed"
    return Verdict(tag, tri, margin)


def semigroup_residual(
    rep: Representation, s: int, t: int, v: int, f: Act, tol: float = INVERT_TOL
) -> float:
    """Sup-norm gap between the direct CCE over s..v and the nested
    s..t of t..v CCE, over positive-probability states."""
    if not s < t < v:
        raise PreconditionError(f"need s < t < v, got {s}, {t}, {v}")
    direct = cce(rep, s, v, f, tol)
    nested = cce(rep, s, t, cce(rep, t, v, f, tol), tol)
    return direct.sup_dist(nested, rep.P)


def time_consistency_check(
    rep: Representation, s: int, t: int, v: int, g: Act, f: Act, tol: float = ACT_TOL
) -> bool:
    """Whether the s..v verdict between g and f survives replacing f by its
    time-t certainty equivalent.  Mixed verdicts violate the precondition."""
    if not s < t < v:
        raise PreconditionError(f"need s < t < v, got {s}, {t}, {v}")
    before = compare(rep, s, v, g, f, tol)
    if before.tag == "mixed":
        raise PreconditionError("time-consistency check needs a one-sided verdict")
    h = cce(rep, t, v, f)
    after = compare(rep, s, t, g, h, tol)
    return after.tag == before.tag


@dataclass(frozen=True)
class DiscountResult:
    betas: tuple[Act, ...]
    verified: bool
    pairs_checked: int
    flips: int


def density_process(rep: Representation, P_star: ProbabilityMeasure) -> tuple[Act, ...]:
    """beta_t = E_{P*}[dP/dP* | F_t] atom-wise: the conditional density
    P(atom)/P*(atom) per time.  Common-null atoms carry the neutral value 1,
    flagged as filled."""
    if not rep.P.is_equivalent_to(P_star):
        raise InvariantError("stochastic discount factor requires an equivalent measure")
    betas = []
    for i in range(rep.space.n_times):
        values: list[Number] = [1] * rep.space.n_states
        filled: set[int] = set()
        for k in range(rep.space.n_atoms(i)):
            members = rep.space.atom_members(i, k)
            q = P_star.mass(members)
            if q > 0:
                ratio = rep.P.mass(members) / q
                for sidx in members:
                    values[sidx] = ratio
            else:
                filled.update(members)
        betas.append(Act(rep.space, i, tuple(values), frozenset(filled)))
    return tuple(betas)


def _classify(space: FilteredSpace, P: ProbabilityMeasure, s: int, margin: Act, tol: float) -> str:
    has_b = has_c = False
    for k in P.positive_atoms(s):
        d = margin.values[space.atom_members(s, k)[0]]
        if d > tol:
            has_b = True
        elif d < -tol:
            has_c = True
    if not has_b and not has_c:
        return "equiv"
    if not has_c:
        return "succeq"
    if not has_b:
        return "preceq"
    return "mixed"


def _random_pair(rng: random.Random, space: FilteredSpace) -> tuple[int, int, Act, Act]:
    s = rng.randrange(0, space.last_index)
    t = rng.randrange(s + 1, space.last_index + 1)
    g = Act.from_atom_values(
        space, s, [rng.uniform(-2, 2) for _ in range(space.n_atoms(s))]
    )
    f = Act.from_atom_values(
        space, t, [rng.uniform(-2, 2) for _ in range(space.n_atoms(t))]
    )
    return s, t, g, f


def discount_transform(
    rep: Representation,
    P_star: ProbabilityMeasure,
    n_pairs: int = 100,
    seed: int = 0,
    tol: float = ACT_TOL,
) -> DiscountResult:
    """Stochastic discount factor for evaluating the same preference under an
    equivalent subjective measure, plus a randomized verdict-preservation
    audit of the identity  beta_s u(s,g) >= E_{P*}[beta_t u(t,f) | F_s]."""
    betas = density_process(rep, P_star)
    rng = random.Random(seed)
    flips = 0
    for _ in range(n_pairs):
        s, t, g, f = _random_pair(rng, rep.space)
        original = compare(rep, s, t, g, f, tol).tag
        lhs = rep.field.eval(s, g).times(betas[s])
        rhs = conditional_expectation(
            rep.space, P_star, rep.field.eval(t, f).times(betas[t]), s
        )
        transformed = _classify(rep.space, rep.P, s, lhs.minus(rhs), tol)
        if transformed != original:
            flips += 1
    return DiscountResult(betas, flips == 0, n_pairs, flips)


@dataclass(frozen=True)
class NumeraireResult:
    rep: Representation
    verified: bool
    pairs_checked: int
    flips: int


def _arg_scaled(curve: MonotoneCurve, b: Number) -> MonotoneCurve:
    return curve if b == 1 else ArgScaledCurve(curve, b)


def numeraire_transform(
    rep: Representation,
    numeraire: tuple[Act, ...] | list[Act],
    n_pairs: int = 100,
    seed: int = 0,
    tol: float = ACT_TOL,
) -> NumeraireResult:
    """Rebase the utility field on a strictly positive numeraire process:
    u*(t, x) = u(t, x * B_t), with verdicts on discounted acts audited against
    the original ones on a randomized test grid."""
    space = rep.space
    if len(numeraire) != space.n_times:
        raise InvariantError("one numeraire act per time label required")
    for i, b in enumerate(numeraire):
        if b.time_index > i:
            raise InvariantError(f"numeraire at time index {i} is not F_{i}-measurable")
        if min(b.values) <= 0:
            raise InvariantError("numeraire must be strictly positive")
    per_time = []
    for i in range(space.n_times):
        per_time.append(
            tuple(
                _arg_scaled(rep.field.curve_on_atom(i, k), numeraire[i].value_on_atom(k))
                for k in range(space.n_atoms(i))
            )
        )
    rep_star = Representation(space, rep.P, UtilityField.from_atom_curves(space, per_time))
    rng = random.Random(seed)
    flips = 0
    for _ in range(n_pairs):
        s, t, g, f = _random_pair(rng, space)
        original = compare(rep, s, t, g, f, tol).tag
        g_star = Act(
            space, s, tuple(a / b for a, b in zip(g.values, numeraire[s].values))
        )
        f_star = Act(
            space, t, tuple(a / b for a, b in zip(f.values, numeraire[t].values))
        )
        if compare(rep_star, s, t, g_star, f_star, tol).tag != original:
            flips += 1
    return NumeraireResult(rep_star, flips == 0, n_pairs, flips)
