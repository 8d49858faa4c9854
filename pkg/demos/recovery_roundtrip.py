"""Recovering the representing pair from preference queries alone.

Given only an oracle answering "g at t_i versus f at t_{i+1} on A", the
recovery pipeline rebuilds a probability and a utility field: certainty
equivalents by bisection, an additive decomposition across atoms (audited by
the Debreu residual), a canonical probability/utility split at the
calibration outcome 1, and a Bayesian reweighting at each inductive step so
the updated probability agrees with the previous one on coarser atoms.

The output is unique only up to an equivalent measure change that rescales
the utility by the corresponding density, so the audit at the end is the
relative-uniqueness check, not equality of the raw parts.
"""

import random

from itpref import InducedOracle
from itpref.apps import villa_scenario
from itpref.recovery import check_relative_uniqueness, recover_representation
from itpref.sampling import random_representation, verdict_agreement

rng = random.Random(2)
rep = random_representation(rng, n_times=3, kinds=("pl",), min_first_split=3)
space = rep.space
print(f"ground truth: {space.n_states} states, atom counts "
      f"{[space.n_atoms(i) for i in range(space.n_times)]}")

oracle = InducedOracle(rep, tol=1e-12)
result = recover_representation(oracle, rep.u0, tol=1e-10)

for step in result.steps:
    masses = ", ".join(f"{float(m):.4f}" for m in step.masses)
    print(f"level {step.level}: masses ({masses}); "
          f"Debreu residual {step.debreu_residual:.3g}; "
          f"null atoms {list(step.null_atoms)}")

uniq = check_relative_uniqueness(rep, result.rep, tol=1e-6)
checked, mismatches = verdict_agreement(rep, result.rep, 500, seed=1)
print(f"relative uniqueness: {'ACCEPT' if uniq.accepted else 'REJECT'} "
      f"(max deviation {uniq.max_deviation:.3g})")
print(f"verdict agreement on random pairs: {checked - mismatches}/{checked}")
print(f"oracle queries spent: {oracle.queries}")

# ---------------------------------------------------------------------------
# the villa tree: a nearly-null branch amplifies query noise by 1/mass

print()
print("villa tree (branch of mass ~1e-6):")
spec = villa_scenario()
vrep = spec.representation()
voracle = InducedOracle(vrep, tol=1e-12)
vresult = recover_representation(voracle, vrep.u0, require_three_essential=False)
vuniq = check_relative_uniqueness(vrep, vresult.rep, tol=1e-3)
vchecked, vmism = verdict_agreement(vrep, vresult.rep, 200, seed=3)
print(f"  uniqueness at 1e-3: {'ACCEPT' if vuniq.accepted else 'REJECT'} "
      f"(deviation {vuniq.max_deviation:.3g} concentrates on the tiny branch)")
print(f"  verdicts still agree: {vchecked - vmism}/{vchecked}")
