"""Stochastic dynamic utility fields.

A field attaches one strictly increasing curve to every (time, atom) pair of a
filtered space, evaluates acts through it, and locates the states where an act
sits on a discontinuity of its curve (the right/left/two-sided discontinuity
events).  On a finite space the star-continuity test collapses to "no jump on
any positive-probability atom"; the detector still reports a witness act in
the general form.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .curves import Jump, MonotoneCurve
from .filtered_space import (
    Act,
    Event,
    FilteredSpace,
    InvariantError,
    ProbabilityMeasure,
)


@dataclass(frozen=True)
class UtilityField:
    """One curve per state per time, constant across each atom.

    Build with :meth:`from_atom_curves`; the per-state constructor exists for
    negative controls that deliberately break measurability.
    """

    space: FilteredSpace
    curves_by_state: tuple[tuple[MonotoneCurve, ...], ...]

    def __post_init__(self) -> None:
        if len(self.curves_by_state) != self.space.n_times:
            raise InvariantError("one curve family per time label required")
        for row in self.curves_by_state:
            if len(row) != self.space.n_states:
                raise InvariantError("one curve per state required")

    @classmethod
    def from_atom_curves(
        cls, space: FilteredSpace, per_time: Sequence[Sequence[MonotoneCurve]]
    ) -> "UtilityField":
        if len(per_time) != space.n_times:
            raise InvariantError("one curve list per time label required")
        rows = []
        for i, curves in enumerate(per_time):
            if len(curves) != space.n_atoms(i):
                raise InvariantError(
                    f"time index {i} needs {space.n_atoms(i)} curves, got {len(curves)}"
                )
            amap = space.atom_index_map(i)
            rows.append(tuple(curves[amap[s]] for s in range(space.n_states)))
        return cls(space, tuple(rows))

    @classmethod
    def from_state_curves(
        cls,
        space: FilteredSpace,
        per_time: Sequence[Sequence[MonotoneCurve]],
        validate_measurability: bool = True,
    ) -> "UtilityField":
        field = cls(space, tuple(tuple(row) for row in per_time))
        if validate_measurability:
            for i in range(space.n_times):
                for k in range(space.n_atoms(i)):
                    members = space.atom_members(i, k)
                    first = field.curves_by_state[i][members[0]]
                    for s in members[1:]:
                        if field.curves_by_state[i][s] != first:
                            raise InvariantError(
                                f"curve assignment at time index {i} is not measurable: "
                                f"atom {space.atom_label(i, k)} mixes curves"
                            )
        return field

    def curve_at_state(self, i: int, s: int) -> MonotoneCurve:
        return self.curves_by_state[self.space.check_time_index(i)][s]

    def curve_on_atom(self, i: int, k: int) -> MonotoneCurve:
        return self.curves_by_state[i][self.space.atom_members(i, k)[0]]

    def atom_curves(self, i: int) -> tuple[MonotoneCurve, ...]:
        return tuple(self.curve_on_atom(i, k) for k in range(self.space.n_atoms(i)))

    def eval(self, j: int, f: Act) -> Act:
        """u(t_j, f): apply each state's time-j curve to the act's value.

        For a measurable field the result is measurable at j.  Fields built
        with ``validate_measurability=False`` (negative controls) can produce
        finer values; those are tagged at the first index where they are
        measurable, so downstream conditioning still runs and exposes the
        corruption instead of crashing."""
        if f.time_index > j:
            raise InvariantError(
                f"act at time index {f.time_index} is not measurable at {j}"
            )
        row = self.curves_by_state[self.space.check_time_index(j)]
        values = tuple(row[s](f.values[s]) for s in range(self.space.n_states))
        for level in range(j, self.space.n_times):
            try:
                return Act(self.space, level, values)
            except InvariantError:
                if level == self.space.n_times - 1:
                    raise
        raise AssertionError("unreachable")  # pragma: no cover

    def discontinuity_sets(self, j: int, f: Act) -> tuple[Event, Event, Event]:
        """States where f hits a right / left / any discontinuity of its curve.

        Read off the curves' jump lists exactly: a state belongs to the
        right-discontinuity event iff its value is a jump abscissa whose right
        limit exceeds the attained value, and symmetrically on the left.
        """
        self.space.check_time_index(j)
        right: set[int] = set()
        left: set[int] = set()
        for s in range(self.space.n_states):
            for jump in self.curves_by_state[j][s].jumps():
                if f.values[s] == jump.x:
                    if jump.right > jump.value:
                        right.add(s)
                    if jump.value > jump.left:
                        left.add(s)
        return (
            Event(self.space, frozenset(right), j),
            Event(self.space, frozenset(left), j),
            Event(self.space, frozenset(right | left), j),
        )


@dataclass(frozen=True)
class StarContinuityResult:
    ok: bool
    witness: Act | None = None
    atom: Event | None = None
    jump: Jump | None = None

    def __bool__(self) -> bool:
        return self.ok


def is_star_continuous(
    field: UtilityField, P: ProbabilityMeasure, j: int
) -> StarContinuityResult:
    """True iff no curve on a positive-probability atom at time j has a jump.

    On a finite space an act can sit exactly on any abscissa, so this is
    equivalent to the universally quantified definition; when it fails the
    result carries a witness act f with P(D_f) > 0 (the jump abscissa on the
    offending atom, zero elsewhere).
    """
    space = field.space
    space.check_time_index(j)
    for k in P.positive_atoms(j):
        curve = field.curve_on_atom(j, k)
        jumps = curve.jumps()
        if jumps:
            jump = jumps[0]
            atom = space.atom_event(j, k)
            witness = Act(
                space,
                j,
                tuple(jump.x if s in atom.members else 0 for s in range(space.n_states)),
            )
            return StarContinuityResult(False, witness, atom, jump)
    return StarContinuityResult(True)
