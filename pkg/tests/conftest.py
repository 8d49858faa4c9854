"""Shared fixtures: small canonical spaces and representations."""

from __future__ import annotations

from fractions import Fraction

import pytest

from itpref import (
    Act,
    FilteredSpace,
    IdentityCurve,
    ProbabilityMeasure,
    Representation,
    UtilityField,
)


@pytest.fixture
def four_state_space() -> FilteredSpace:
    """Four states, three times: trivial, paired, singletons."""
    return FilteredSpace.build(
        states=("w1", "w2", "w3", "w4"),
        times=(0, 1, 2),
        partitions=[
            [["w1", "w2", "w3", "w4"]],
            [["w1", "w2"], ["w3", "w4"]],
            [["w1"], ["w2"], ["w3"], ["w4"]],
        ],
    )


@pytest.fixture
def four_state_measure(four_state_space) -> ProbabilityMeasure:
    return ProbabilityMeasure(
        four_state_space,
        (Fraction(1, 10), Fraction(2, 10), Fraction(3, 10), Fraction(4, 10)),
    )


def identity_rep(space: FilteredSpace, P: ProbabilityMeasure) -> Representation:
    rows = [[IdentityCurve()] * space.n_atoms(i) for i in range(space.n_times)]
    return Representation(space, P, UtilityField.from_atom_curves(space, rows))


@pytest.fixture
def four_state_identity_rep(four_state_space, four_state_measure) -> Representation:
    return identity_rep(four_state_space, four_state_measure)


@pytest.fixture
def two_branch_space() -> FilteredSpace:
    """Two equiprobable terminal branches, two times."""
    return FilteredSpace.build(
        states=("up", "down"),
        times=(0, 1),
        partitions=[[["up", "down"]], [["up"], ["down"]]],
    )


@pytest.fixture
def staircase(four_state_space) -> Act:
    return Act(four_state_space, 2, (1, 2, 3, 4))
