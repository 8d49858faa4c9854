"""Recovery of the representing pair (probability, utility field) from a
preference oracle, and the relative-uniqueness audit.

The first step tabulates the time-0 value functional through the oracle's
certainty equivalents, audits its additive decomposability across atoms (the
Debreu residual), and splits each per-atom component canonically at the
calibration outcome x̄ into a probability mass and a normalized utility
curve.  Each inductive step builds the composite unconditional functional
f ↦ E_{P_i}[u_i(C_{i,i+1}(f))], recovers at the finer atoms, and reweights by
the conditional density so the new probability agrees with the old one on the
coarser information.

Recovered curves are tabulated on the grid and piecewise-linear interpolated,
so recovery is grid-exact only for piecewise-linear ground truth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Sequence

from .axioms import DEFAULT_GRID, ActGrid
from .curves import IdentityCurve, MonotoneCurve, PiecewiseLinearCurve
from .engine import Representation
from .filtered_space import (
    Act,
    FilteredSpace,
    Number,
    ProbabilityMeasure,
)
from .oracles import PreferenceOracle, indifference_profile
from .utility_field import UtilityField

NULL_VALUE_TOL = 1e-7   # |V_j| below this on the whole grid marks a null atom
DEBREU_TOL = 1e-6


class RecoveryError(RuntimeError):
    """The oracle does not admit the requested reconstruction."""


@dataclass(frozen=True)
class RecoveredStep:
    """Probability masses and tabulated curves for the atoms of one level."""

    level: int
    masses: tuple[Number, ...]
    curves: tuple[MonotoneCurve, ...]
    debreu_residual: float
    null_atoms: tuple[int, ...]
    normalization_offsets: tuple[float, ...]


def cce_from_oracle(
    oracle: PreferenceOracle, i: int, f: Act, tol: float = 1e-9
) -> Act:
    """Certainty equivalent of the time-(i+1) act f at time i, by per-atom
    bisection over constants; equals u_i^{-1} of the conditional expected
    utility when the oracle is induced by a representation."""
    return indifference_profile(oracle, i, f, tol)


def _recovery_xs(grid: ActGrid, x_bar: Number) -> tuple[Number, ...]:
    xs = sorted(set(grid.values) | {x_bar, 0})
    return tuple(xs)


def _debreu_candidates(
    space: FilteredSpace, level: int, xs: Sequence[Number], cap: int
) -> list[Act]:
    neg = [x for x in xs if x < 0]
    pos = [x for x in xs if x > 0]
    values = ((neg[-1] if neg else 0), 0, (pos[0] if pos else 0))
    values = tuple(dict.fromkeys(values))
    out = []
    for combo in itertools.product(values, repeat=space.n_atoms(level)):
        if all(v == 0 for v in combo):
            continue
        out.append(Act.from_atom_values(space, level, combo))
        if len(out) >= cap:
            break
    return out


def _recover_additive(
    value_fn: Callable[[Act], float],
    space: FilteredSpace,
    level: int,
    grid: ActGrid,
    x_bar: Number,
    require_three_essential: bool,
    debreu_tol: float,
    max_debreu_acts: int,
) -> RecoveredStep:
    xs = _recovery_xs(grid, x_bar)
    m = space.n_atoms(level)
    tab: list[dict[Number, float]] = []
    for k in range(m):
        A = space.atom_event(level, k)
        col = {}
        for x in xs:
            col[x] = value_fn(Act.constant(space, level, x).restrict(A))
        tab.append(col)

    null_atoms = tuple(
        k for k in range(m) if max(abs(v) for v in tab[k].values()) <= NULL_VALUE_TOL
    )
    essential = [k for k in range(m) if k not in null_atoms]
    if require_three_essential and len(essential) < 3:
        raise RecoveryError(
            f"level {level} has {len(essential)} essential atoms; the additive "
            f"decomposition needs at least three"
        )

    residual = 0.0
    for f in _debreu_candidates(space, level, xs, max_debreu_acts):
        total = value_fn(f)
        split = sum(tab[k][f.value_on_atom(k)] for k in range(m))
        residual = max(residual, abs(total - split))
    if residual > debreu_tol:
        raise RecoveryError(
            f"level {level}: additive decomposition fails, Debreu residual "
            f"{residual:.3g} exceeds {debreu_tol:.3g}"
        )

    offsets = tuple(float(tab[k][0]) for k in range(m))
    weights = []
    for k in essential:
        w = tab[k][x_bar] - tab[k][0]
        if not w > 0:
            raise RecoveryError(
                f"level {level} atom {space.atom_label(level, k)}: component value "
                f"{w!r} at the calibration outcome {x_bar} is not positive; "
                f"choose a different x_bar"
            )
        weights.append(w)
    total_weight = sum(weights)

    masses: list[Number] = [0] * m
    curves: list[MonotoneCurve] = [IdentityCurve()] * m
    for k, w in zip(essential, weights):
        p = w / total_weight
        masses[k] = p
        points = []
        for x in xs:
            y = 0 if x == 0 else (tab[k][x] - tab[k][0]) / p
            points.append((x, y))
        for (x0, y0), (x1, y1) in zip(points, points[1:]):
            if not y1 > y0:
                raise RecoveryError(
                    f"level {level} atom {space.atom_label(level, k)}: recovered values "
                    f"not strictly increasing between x={x0} and x={x1}"
                )
        curves[k] = PiecewiseLinearCurve.from_points(points)
    return RecoveredStep(
        level, tuple(masses), tuple(curves), residual, null_atoms, offsets
    )


def recover_step0(
    oracle: PreferenceOracle,
    u0: MonotoneCurve,
    grid: ActGrid = DEFAULT_GRID,
    x_bar: Number = 1,
    tol: float = 1e-10,
    require_three_essential: bool = True,
    debreu_tol: float = DEBREU_TOL,
    max_debreu_acts: int = 81,
) -> RecoveredStep:
    """Recover (P_1, u_1) on the time-1 atoms from the unconditioned step."""

    def value(f: Act) -> float:
        c = cce_from_oracle(oracle, 0, f, tol)
        return float(u0(c.values[0]))

    return _recover_additive(
        value, oracle.space, 1, grid, x_bar, require_three_essential,
        debreu_tol, max_debreu_acts,
    )


def recover_step_i(
    oracle: PreferenceOracle,
    i: int,
    prev: RecoveredStep,
    grid: ActGrid = DEFAULT_GRID,
    x_bar: Number = 1,
    tol: float = 1e-10,
    require_three_essential: bool = True,
    debreu_tol: float = DEBREU_TOL,
    max_debreu_acts: int = 64,
) -> RecoveredStep:
    """Recover (P_{i+1}, u_{i+1}) given the step-i output.

    Routes through the auxiliary unconditional functional
    f ↦ E_{P_i}[u_i(C_{i,i+1}(f))], recovers an additive pair at the
    (i+1)-atoms, then reweights by Z = dP_i/dP̃|F_i so the new probability
    agrees with P_i on the time-i atoms and the utility absorbs dP̃/dP_{i+1}.
    """
    space = oracle.space
    if prev.level != i:
        raise RecoveryError(f"previous step recovered level {prev.level}, expected {i}")

    def value(f: Act) -> float:
        c = indifference_profile(oracle, i, f, tol)
        return float(
            sum(
                prev.masses[k] * prev.curves[k](c.value_on_atom(k))
                for k in range(space.n_atoms(i))
                if prev.masses[k] > 0
            )
        )

    raw = _recover_additive(
        value, space, i + 1, grid, x_bar, require_three_essential,
        debreu_tol, max_debreu_acts,
    )

    amap_lo = space.atom_index_map(i)
    parent = {
        k: amap_lo[space.atom_members(i + 1, k)[0]]
        for k in range(space.n_atoms(i + 1))
    }
    parent_mass: dict[int, Number] = {}
    for k in range(space.n_atoms(i + 1)):
        parent_mass[parent[k]] = parent_mass.get(parent[k], 0) + raw.masses[k]
    for a in range(space.n_atoms(i)):
        if prev.masses[a] > 0 and not parent_mass.get(a, 0) > 0:
            raise RecoveryError(
                f"recovered auxiliary probability vanishes on essential atom "
                f"{space.atom_label(i, a)}; the oracle violates normalization "
                f"across the step"
            )

    masses: list[Number] = [0] * space.n_atoms(i + 1)
    curves: list[MonotoneCurve] = [IdentityCurve()] * space.n_atoms(i + 1)
    for k in range(space.n_atoms(i + 1)):
        a = parent[k]
        if raw.masses[k] == 0 or prev.masses[a] == 0:
            continue
        z = prev.masses[a] / parent_mass[a]
        masses[k] = raw.masses[k] * z
        kappa = parent_mass[a] / prev.masses[a]  # dP̃/dP_{i+1} on the child atom
        curves[k] = _scale_values(raw.curves[k], kappa)
    for a in range(space.n_atoms(i)):
        children_total = sum(
            masses[k] for k in range(space.n_atoms(i + 1)) if parent[k] == a
        )
        if abs(children_total - prev.masses[a]) > 1e-9:
            raise RecoveryError(
                f"updated probability does not agree with the step-{i} one on "
                f"atom {space.atom_label(i, a)}"
            )
    return RecoveredStep(
        i + 1, tuple(masses), tuple(curves), raw.debreu_residual,
        raw.null_atoms, raw.normalization_offsets,
    )


def _scale_values(curve: MonotoneCurve, kappa: Number) -> MonotoneCurve:
    if kappa == 1:
        return curve
    if isinstance(curve, PiecewiseLinearCurve):
        anchors = tuple(
            (x, kappa * l, kappa * v, kappa * r) for x, l, v, r in curve.anchors
        )
        return PiecewiseLinearCurve(anchors)
    if isinstance(curve, IdentityCurve):
        from .curves import LinearCurve

        return LinearCurve(kappa)
    from .curves import ValueScaledCurve

    return ValueScaledCurve(curve, kappa)


@dataclass(frozen=True)
class RecoveryResult:
    rep: Representation
    steps: tuple[RecoveredStep, ...]

    @property
    def max_debreu_residual(self) -> float:
        return max(s.debreu_residual for s in self.steps)


def recover_representation(
    oracle: PreferenceOracle,
    u0: MonotoneCurve,
    grid: ActGrid = DEFAULT_GRID,
    x_bar: Number = 1,
    tol: float = 1e-10,
    require_three_essential: bool = True,
    debreu_tol: float = DEBREU_TOL,
) -> RecoveryResult:
    """Full reconstruction across every step the oracle supports.

    State weights spread each terminal atom's mass uniformly over its states;
    acts are terminal-measurable, so the choice is preference-irrelevant.
    Recovered curves at earlier levels enter the later composite functionals,
    so for ground truth that is not piecewise linear the additivity audit
    carries the grid interpolation error; widen ``debreu_tol`` accordingly.
    """
    space = oracle.space
    steps = [
        recover_step0(
            oracle, u0, grid, x_bar, tol,
            require_three_essential=require_three_essential,
            debreu_tol=debreu_tol,
        )
    ]
    for i in range(1, space.n_times - 1):
        steps.append(
            recover_step_i(
                oracle, i, steps[-1], grid, x_bar, tol,
                require_three_essential=require_three_essential,
                debreu_tol=debreu_tol,
            )
        )
    last = steps[-1]
    weights = [0.0] * space.n_states
    for k in range(space.n_atoms(last.level)):
        members = space.atom_members(last.level, k)
        for s in members:
            weights[s] = last.masses[k] / len(members)
    P = ProbabilityMeasure(space, tuple(weights))
    per_time: list[Sequence[MonotoneCurve]] = [[u0]]
    for step in steps:
        per_time.append(step.curves)
    field = UtilityField.from_atom_curves(space, per_time)
    return RecoveryResult(Representation(space, P, field), tuple(steps))


@dataclass(frozen=True)
class UniquenessResult:
    accepted: bool
    max_deviation: float
    witness: str | None = None

    def __bool__(self) -> bool:
        return self.accepted


def check_relative_uniqueness(
    rep_a: Representation,
    rep_b: Representation,
    xs: Sequence[Number] = DEFAULT_GRID.values,
    tol: float = 1e-9,
) -> UniquenessResult:
    """Whether rep_b is the delta-rescaling of rep_a: equivalent measures and
    u_b(t_i, x) = delta_i u_a(t_i, x) with delta_i the time-i density of P_a
    with respect to P_b, for every i >= 1 and positive-probability atom."""
    space = rep_a.space
    if space != rep_b.space:
        raise RecoveryError("representations live on different spaces")
    for s, (wa, wb) in enumerate(zip(rep_a.P.weights, rep_b.P.weights)):
        if (wa > 0) != (wb > 0):
            return UniquenessResult(
                False, float("inf"),
                f"state {space.states[s]} is null under exactly one measure",
            )
    worst = 0.0
    witness = None
    for i in range(space.n_times):
        for k in rep_a.P.positive_atoms(i):
            members = space.atom_members(i, k)
            delta = rep_a.P.mass(members) / rep_b.P.mass(members) if i >= 1 else 1
            ua = rep_a.field.curve_on_atom(i, k)
            ub = rep_b.field.curve_on_atom(i, k)
            for x in xs:
                dev = abs(float(ub(x)) - float(delta) * float(ua(x)))
                if dev > worst:
                    worst = dev
                    witness = (
                        f"time index {i}, atom {space.atom_label(i, k)}, x={x}"
                    )
    return UniquenessResult(worst <= tol, worst, None if worst <= tol else witness)
