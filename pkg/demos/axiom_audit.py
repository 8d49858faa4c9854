"""Auditing the preference axioms by exhaustive search.

An induced oracle (one that answers comparisons by reading a representation)
must satisfy every axiom clause: the transition axiom's six clauses, strict
monotonicity, the sure-thing principle, and pointwise continuity on three
constructed sequence styles.  Hand-corrupted oracles are the negative
controls — each breaks exactly one axiom family, and the report pinpoints a
serialized counterexample.
"""

from itpref import Act, InducedOracle
from itpref.apps import random8_scenario
from itpref.axioms import audit_step, check_C, check_M, check_ST, check_T, render_audit
from itpref.controls import flat_segment, intransitive_band, jump_on_positive_atom

# --- a healthy oracle: every clause passes at both audited steps -----------

spec = random8_scenario()
oracle = InducedOracle(spec.representation())
for step in (0, 1):
    print(f"--- induced oracle of the random8 scenario, step {step} ---")
    print(render_audit(audit_step(oracle, step), step))
    print()

# --- corrupted oracles: each fails its own axiom ---------------------------

print("--- intransitive answers on one designated act ---")
report = check_T(intransitive_band(), 0)
print(report.clauses["2 transitivity"].counterexample)
print()

print("--- a flat utility segment breaks strict monotonicity ---")
res = check_M(flat_segment(), 0)
print(res.counterexample)
print()

print("--- a utility jump breaks pointwise continuity at the jump ---")
jump_oracle, witness = jump_on_positive_atom()
res = check_C(jump_oracle, 0, witness, "uniform")
print(res.counterexample)
print("same oracle away from the jump:",
      "PASS" if check_C(jump_oracle, 0, Act.from_atom_values(jump_oracle.space, 1, [0.25, 0, 0]), "uniform").passed else "FAIL")
print("sure-thing principle still holds for it:",
      "PASS" if check_ST(jump_oracle, 0).passed else "FAIL")
