"""Finite filtered probability spaces.

States, refining partition chains, probability measures, measurable acts and
events, conditional expectation with an explicit zero-probability-atom
convention, and the paste algebra on acts.

Exact arithmetic is preserved end to end: weights and act values may be ints,
Fractions or floats, and every operation here keeps Fractions exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence, Union

Number = Union[int, float, Fraction]

MEASURE_TOL = 1e-12  # normalization and measurability absolute tolerance
ACT_TOL = 1e-9       # default sup-norm tolerance for act equality


class InvariantError(ValueError):
    """A domain-type invariant failed at construction."""


def _is_finite(x: Number) -> bool:
    return not isinstance(x, float) or math.isfinite(x)


@dataclass(frozen=True)
class FilteredSpace:
    """Finite state set with a refining chain of partitions, one per time.

    ``partitions[i]`` holds the atoms of the time-``i`` information as tuples
    of state indices.  ``partitions[0]`` must be the single atom covering the
    whole state set, and every later partition refines the previous one.
    Atom order is the order of first state occurrence, so all derived output
    is deterministic.
    """

    states: tuple[str, ...]
    times: tuple[float, ...]
    partitions: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self) -> None:
        if not self.states:
            raise InvariantError("state set is empty")
        if len(set(self.states)) != len(self.states):
            raise InvariantError("duplicate state identifiers")
        if len(self.times) != len(self.partitions):
            raise InvariantError("one partition required per time label")
        if not self.times:
            raise InvariantError("at least one time label required")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise InvariantError("times must be strictly increasing")
        n = len(self.states)
        for i, part in enumerate(self.partitions):
            seen: set[int] = set()
            for atom in part:
                if not atom:
                    raise InvariantError(f"empty atom at time index {i}")
                if tuple(sorted(atom)) != atom:
                    raise InvariantError(f"atom {atom} at time index {i} not in state order")
                if seen & set(atom):
                    raise InvariantError(f"overlapping atoms at time index {i}")
                seen |= set(atom)
            if seen != set(range(n)):
                raise InvariantError(f"partition at time index {i} does not cover the state set")
            firsts = [atom[0] for atom in part]
            if firsts != sorted(firsts):
                raise InvariantError(f"atoms at time index {i} not ordered by first state")
        if len(self.partitions[0]) != 1:
            raise InvariantError("time-0 information must be trivial (single atom)")
        for i in range(len(self.partitions) - 1):
            coarse = self.atom_index_map(i)
            for atom in self.partitions[i + 1]:
                if len({coarse[s] for s in atom}) != 1:
                    raise InvariantError(
                        f"atom {self.atom_label(i + 1, self.partitions[i + 1].index(atom))} "
                        f"at time index {i + 1} does not refine time index {i}"
                    )

    @classmethod
    def build(
        cls,
        states: Sequence[str],
        times: Sequence[float],
        partitions: Sequence[Sequence[Sequence[str]]],
    ) -> "FilteredSpace":
        """Build from state names, canonicalizing atom and state order."""
        states = tuple(states)
        index = {s: k for k, s in enumerate(states)}
        canon = []
        for part in partitions:
            atoms = []
            for atom in part:
                try:
                    atoms.append(tuple(sorted(index[s] for s in atom)))
                except KeyError as exc:
                    raise InvariantError(f"unknown state {exc.args[0]!r} in partition") from None
            atoms.sort(key=lambda a: a[0])
            canon.append(tuple(atoms))
        return cls(states, tuple(times), tuple(canon))

    @property
    def n_states(self) -> int:
        return len(self.states)

    @property
    def n_times(self) -> int:
        return len(self.times)

    @property
    def last_index(self) -> int:
        return len(self.times) - 1

    def check_time_index(self, i: int) -> int:
        if not 0 <= i <= self.last_index:
            raise IndexError(f"time index {i} out of range 0..{self.last_index}")
        return i

    def atom_index_map(self, i: int) -> tuple[int, ...]:
        """For time index ``i``, map each state index to its atom index."""
        return self._atom_maps[self.check_time_index(i)]

    @cached_property
    def _atom_maps(self) -> tuple[tuple[int, ...], ...]:
        maps = []
        for part in self.partitions:
            m = [0] * self.n_states
            for k, atom in enumerate(part):
                for s in atom:
                    m[s] = k
            maps.append(tuple(m))
        return tuple(maps)

    def n_atoms(self, i: int) -> int:
        return len(self.partitions[self.check_time_index(i)])

    def atom_members(self, i: int, k: int) -> tuple[int, ...]:
        return self.partitions[self.check_time_index(i)][k]

    def atom_label(self, i: int, k: int) -> str:
        return "{" + ",".join(self.states[s] for s in self.atom_members(i, k)) + "}"

    def atom_event(self, i: int, k: int) -> "Event":
        return Event(self, frozenset(self.atom_members(i, k)), i)

    def state_index(self, name: str) -> int:
        try:
            return self.states.index(name)
        except ValueError:
            raise KeyError(f"unknown state {name!r}") from None

    def whole_event(self, i: int | None = None) -> "Event":
        return Event(self, frozenset(range(self.n_states)), i)


@dataclass(frozen=True)
class Event:
    """Set of states, optionally pinned to a time index at which it must be
    a union of atoms."""

    space: FilteredSpace
    members: frozenset[int]
    time_index: int | None = None

    def __post_init__(self) -> None:
        if not self.members <= frozenset(range(self.space.n_states)):
            raise InvariantError("event members outside the state set")
        if self.time_index is not None:
            i = self.space.check_time_index(self.time_index)
            for atom in self.space.partitions[i]:
                inter = self.members & set(atom)
                if inter and inter != set(atom):
                    raise InvariantError(
                        f"event is not a union of atoms at time index {i}: "
                        f"splits atom {self.space.atom_label(i, self.space.atom_index_map(i)[atom[0]])}"
                    )

    @classmethod
    def of_states(
        cls, space: FilteredSpace, names: Iterable[str], time_index: int | None = None
    ) -> "Event":
        return cls(space, frozenset(space.state_index(n) for n in names), time_index)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self.space.states[s] for s in sorted(self.members))

    @property
    def is_empty(self) -> bool:
        return not self.members

    def complement(self) -> "Event":
        return Event(
            self.space,
            frozenset(range(self.space.n_states)) - self.members,
            self.time_index,
        )

    def __contains__(self, state: int) -> bool:
        return state in self.members

    def __le__(self, other: "Event") -> bool:
        return self.members <= other.members

    def label(self) -> str:
        return "{" + ",".join(self.names) + "}"

    def indicator(self, j: int) -> "Act":
        """The act 1_A, measurable at time index ``j``."""
        values = tuple(1 if s in self.members else 0 for s in range(self.space.n_states))
        return Act(self.space, j, values)


@dataclass(frozen=True)
class Act:
    """Real-valued payoff on states, measurable at ``time_index``.

    ``null_fill`` records states whose value came from the zero-probability
    convention of :func:`conditional_expectation`; it never participates in
    equality.
    """

    space: FilteredSpace
    time_index: int
    values: tuple[Number, ...]
    null_fill: frozenset[int] = field(default_factory=frozenset, compare=False)

    def __post_init__(self) -> None:
        self.space.check_time_index(self.time_index)
        if len(self.values) != self.space.n_states:
            raise InvariantError("one value per state required")
        for v in self.values:
            if not _is_finite(v):
                raise InvariantError("act values must be finite")
        for atom in self.space.partitions[self.time_index]:
            v0 = self.values[atom[0]]
            for s in atom[1:]:
                if abs(self.values[s] - v0) > MEASURE_TOL:
                    raise InvariantError(
                        f"act not measurable at time index {self.time_index}: values differ "
                        f"inside atom {self.space.atom_label(self.time_index, self.space.atom_index_map(self.time_index)[atom[0]])}"
                    )

    @classmethod
    def constant(cls, space: FilteredSpace, i: int, value: Number) -> "Act":
        return cls(space, i, (value,) * space.n_states)

    @classmethod
    def from_atom_values(cls, space: FilteredSpace, i: int, per_atom: Sequence[Number]) -> "Act":
        space.check_time_index(i)
        if len(per_atom) != space.n_atoms(i):
            raise InvariantError("one value per atom required")
        amap = space.atom_index_map(i)
        return cls(space, i, tuple(per_atom[amap[s]] for s in range(space.n_states)))

    def value_on_atom(self, k: int) -> Number:
        return self.values[self.space.atom_members(self.time_index, k)[0]]

    def atom_values(self) -> tuple[Number, ...]:
        return tuple(self.value_on_atom(k) for k in range(self.space.n_atoms(self.time_index)))

    def at_time(self, j: int) -> "Act":
        """Reinterpret at a later (finer) time index."""
        return Act(self.space, j, self.values, self.null_fill)

    def restrict(self, A: Event) -> "Act":
        """The act f·1_A (zero off ``A``)."""
        values = tuple(v if s in A.members else 0 for s, v in enumerate(self.values))
        return Act(self.space, self.time_index, values)

    def shift(self, c: Number) -> "Act":
        return Act(self.space, self.time_index, tuple(v + c for v in self.values))

    def scale(self, c: Number) -> "Act":
        return Act(self.space, self.time_index, tuple(v * c for v in self.values))

    def plus(self, other: "Act") -> "Act":
        j = max(self.time_index, other.time_index)
        return Act(self.space, j, tuple(a + b for a, b in zip(self.values, other.values)))

    def minus(self, other: "Act") -> "Act":
        j = max(self.time_index, other.time_index)
        return Act(self.space, j, tuple(a - b for a, b in zip(self.values, other.values)))

    def times(self, other: "Act") -> "Act":
        j = max(self.time_index, other.time_index)
        return Act(self.space, j, tuple(a * b for a, b in zip(self.values, other.values)))

    def sup_dist(self, other: "Act", P: "ProbabilityMeasure | None" = None) -> float:
        """Sup-norm distance, optionally restricted to P-positive states."""
        gaps = (
            abs(a - b)
            for s, (a, b) in enumerate(zip(self.values, other.values))
            if P is None or P.weights[s] > 0
        )
        return float(max(gaps, default=0))

    def equals(self, other: "Act", tol: float = ACT_TOL, P: "ProbabilityMeasure | None" = None) -> bool:
        return self.sup_dist(other, P) <= tol


@dataclass(frozen=True)
class ProbabilityMeasure:
    """Nonnegative weights on states summing to one (within 1e-12)."""

    space: FilteredSpace
    weights: tuple[Number, ...]

    def __post_init__(self) -> None:
        if len(self.weights) != self.space.n_states:
            raise InvariantError("one weight per state required")
        for w in self.weights:
            if not _is_finite(w) or w < 0:
                raise InvariantError("weights must be finite and nonnegative")
        total = sum(self.weights)
        if abs(total - 1) > MEASURE_TOL:
            raise InvariantError(f"weights sum to {total!r}, not 1")

    @classmethod
    def of(cls, space: FilteredSpace, by_state: dict[str, Number]) -> "ProbabilityMeasure":
        missing = set(space.states) - set(by_state)
        if missing:
            raise InvariantError(f"missing weights for states {sorted(missing)}")
        return cls(space, tuple(by_state[s] for s in space.states))

    @classmethod
    def uniform(cls, space: FilteredSpace) -> "ProbabilityMeasure":
        return cls(space, (Fraction(1, space.n_states),) * space.n_states)

    def mass(self, states: Iterable[int]) -> Number:
        return sum((self.weights[s] for s in states), 0)

    def atom_mass(self, i: int, k: int) -> Number:
        return self.mass(self.space.atom_members(i, k))

    def event_mass(self, A: Event) -> Number:
        return self.mass(A.members)

    def expectation(self, f: Act) -> Number:
        return sum((w * v for w, v in zip(self.weights, f.values)), 0)

    def positive_atoms(self, i: int) -> tuple[int, ...]:
        return tuple(k for k in range(self.space.n_atoms(i)) if self.atom_mass(i, k) > 0)

    def null_atoms(self, i: int) -> tuple[int, ...]:
        return tuple(k for k in range(self.space.n_atoms(i)) if self.atom_mass(i, k) == 0)

    def positive_states(self) -> tuple[int, ...]:
        return tuple(s for s, w in enumerate(self.weights) if w > 0)

    def is_equivalent_to(self, other: "ProbabilityMeasure") -> bool:
        """Same null states (mutual absolute continuity on a finite space)."""
        return all((a > 0) == (b > 0) for a, b in zip(self.weights, other.weights))

    def density_wrt(self, other: "ProbabilityMeasure") -> tuple[Number, ...]:
        """Pointwise dP/dQ on Q-positive states; 0 on common-null states."""
        if not self.is_equivalent_to(other):
            raise InvariantError("density requires equivalent measures")
        return tuple(
            (w / q if q > 0 else 0) for w, q in zip(self.weights, other.weights)
        )


def atoms(space: FilteredSpace, i: int) -> list[Event]:
    """The time-``i`` atoms as events, in deterministic order."""
    return [space.atom_event(i, k) for k in range(space.n_atoms(i))]


def is_measurable(space: FilteredSpace, i: int, obj: Act | Event) -> bool:
    """True iff ``obj`` is constant per atom (acts) / a union of atoms (events)
    of the time-``i`` partition."""
    space.check_time_index(i)
    if isinstance(obj, Event):
        for atom in space.partitions[i]:
            inter = obj.members & set(atom)
            if inter and inter != set(atom):
                return False
        return True
    for atom in space.partitions[i]:
        v0 = obj.values[atom[0]]
        if any(abs(obj.values[s] - v0) > MEASURE_TOL for s in atom[1:]):
            return False
    return True


def conditional_expectation(
    space: FilteredSpace, P: ProbabilityMeasure, f: Act, i: int
) -> Act:
    """E_P[f | F_{t_i}] computed atom by atom.

    Atoms of zero probability get the value 0; the affected states are
    recorded in the result's ``null_fill`` so callers can honour the
    "up to null events" reading of downstream identities.
    """
    space.check_time_index(i)
    if i > f.time_index:
        raise InvariantError(
            f"cannot condition a time-{f.time_index} act on later time index {i}"
        )
    values: list[Number] = [0] * space.n_states
    filled: set[int] = set()
    for atom in space.partitions[i]:
        mass = P.mass(atom)
        if mass > 0:
            avg = sum((P.weights[s] * f.values[s] for s in atom), 0) / mass
            for s in atom:
                values[s] = avg
        else:
            filled.update(atom)
    return Act(space, i, tuple(values), frozenset(filled))


def null_events(space: FilteredSpace, P: ProbabilityMeasure, i: int) -> list[Event]:
    """The zero-probability atoms at time ``i``; their union is the maximal
    null event, and an event is null iff contained in that union."""
    return [space.atom_event(i, k) for k in P.null_atoms(i)]


def maximal_null_event(space: FilteredSpace, P: ProbabilityMeasure, i: int) -> Event:
    members: set[int] = set()
    for k in P.null_atoms(i):
        members.update(space.atom_members(i, k))
    return Event(space, frozenset(members), i)


def is_null_event(P: ProbabilityMeasure, A: Event) -> bool:
    return P.event_mass(A) == 0


def paste(f: Act, g: Act, A: Event) -> Act:
    """The act equal to ``f`` on ``A`` and to ``g`` elsewhere."""
    if f.space is not g.space and f.space != g.space:
        raise InvariantError("acts live on different spaces")
    if f.time_index != g.time_index:
        raise InvariantError(
            f"paste requires a shared time index, got {f.time_index} and {g.time_index}"
        )
    values = tuple(
        f.values[s] if s in A.members else g.values[s] for s in range(f.space.n_states)
    )
    return Act(f.space, f.time_index, values)
