"""Oracle interface: induced answers, bisection equivalents, null detection."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from itpref import (
    Act,
    BracketError,
    InducedOracle,
    ProbabilityMeasure,
    cce,
    compare,
    indifference_profile,
)
from itpref.controls import AlwaysSucceqOracle, three_atom_space, identity_representation
from itpref.oracles import atom_is_insensitive, indifference_constant
from itpref.sampling import margin_guarded_pair, random_act, random_representation

from conftest import identity_rep


class TestInducedOracle:
    def test_agrees_with_compare(self):
        rng = random.Random(3)
        for _ in range(25):
            rep = random_representation(rng)
            oracle = InducedOracle(rep)
            s, t, g, f = margin_guarded_pair(rng, rep)
            if t != s + 1:
                continue
            verdict = compare(rep, s, t, g, f)
            ans = oracle.ask(s, g, f)
            assert ans.succeq == verdict.holds_succeq
            assert ans.preceq == verdict.holds_preceq

    def test_restriction_to_event(self):
        rng = random.Random(5)
        rep = random_representation(rng, n_times=3, min_first_split=3)
        oracle = InducedOracle(rep)
        s = 1
        f = random_act(rng, rep.space, 2)
        g = cce(rep, s, 2, f)
        k = rep.P.positive_atoms(s)[0]
        bump = Act.from_atom_values(
            rep.space, s, [1 if j == k else 0 for j in range(rep.space.n_atoms(s))]
        )
        g_up = g.plus(bump)
        on_atom = oracle.ask(s, g_up, f, rep.space.atom_event(s, k))
        assert on_atom.succeq and not on_atom.preceq
        elsewhere = rep.space.atom_event(s, k).complement()
        off_atom = oracle.ask(s, g_up, f, elsewhere)
        assert off_atom.equiv

    def test_null_event_answers_vacuously(self, four_state_space):
        P = ProbabilityMeasure(four_state_space, (Fraction(1, 2), Fraction(1, 2), 0, 0))
        oracle = InducedOracle(identity_rep(four_state_space, P))
        dead = four_state_space.atom_event(1, 1)
        huge = Act.constant(four_state_space, 1, 100)
        tiny = Act.constant(four_state_space, 2, -100)
        assert oracle.ask(1, huge, tiny, dead).equiv

    def test_answers_stable(self):
        space, P = three_atom_space()
        oracle = InducedOracle(identity_representation(space, P))
        g = Act.constant(space, 0, Fraction(1, 3))
        f = Act.from_atom_values(space, 1, [1, 0, -1])
        first = oracle.ask(0, g, f)
        assert all(oracle.ask(0, g, f) == first for _ in range(5))


class TestIndifference:
    def test_profile_matches_engine_cce(self):
        rng = random.Random(7)
        for _ in range(10):
            rep = random_representation(rng, n_times=3)
            oracle = InducedOracle(rep, tol=1e-12)
            f = random_act(rng, rep.space, 2)
            got = indifference_profile(oracle, 1, f, tol=1e-10)
            want = cce(rep, 1, 2, f)
            assert got.sup_dist(want, rep.P) < 1e-9

    def test_constant_bisection_two_branches(self, two_branch_space):
        P = ProbabilityMeasure(two_branch_space, (Fraction(1, 2), Fraction(1, 2)))
        oracle = InducedOracle(identity_rep(two_branch_space, P), tol=1e-12)
        f = Act(two_branch_space, 1, (4, -1))
        c = indifference_constant(oracle, 0, f, two_branch_space.whole_event(0), tol=1e-10)
        assert c == pytest.approx(1.5, abs=1e-9)

    def test_bracket_failure_on_degenerate_oracle(self):
        oracle = AlwaysSucceqOracle(three_atom_space()[0])
        f = Act.constant(oracle.space, 1, 0)
        with pytest.raises(BracketError):
            indifference_constant(oracle, 0, f, oracle.space.whole_event(0))

    def test_insensitive_atom_detected_and_filled(self, four_state_space):
        P = ProbabilityMeasure(four_state_space, (Fraction(1, 2), Fraction(1, 2), 0, 0))
        oracle = InducedOracle(identity_rep(four_state_space, P))
        f = Act(four_state_space, 2, (1, 3, 5, 7))
        dead = four_state_space.atom_event(1, 1)
        live = four_state_space.atom_event(1, 0)
        assert atom_is_insensitive(oracle, 1, f, dead)
        assert not atom_is_insensitive(oracle, 1, f, live)
        prof = indifference_profile(oracle, 1, f)
        assert prof.null_fill == frozenset({2, 3})
        assert prof.values[2] == 0 and prof.values[3] == 0
        assert prof.values[0] == pytest.approx(2, abs=1e-8)
