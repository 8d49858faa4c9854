"""Forward performance conditions on a martingale market.

A utility field is a forward performance when it is increasing and concave
in outcomes, starts from the initial utility, is a supermartingale along
every admissible wealth process, and a martingale along an optimal one.  On
a fair (martingale) market the risk-neutral field passes with every strategy
optimal; deflating the terminal curves keeps the supermartingale property
but destroys attainment, which is exactly what the check reports.
"""

from fractions import Fraction

from itpref import IdentityCurve, LinearCurve, UtilityField
from itpref.apps import forward_scenario, run_forward_check
from itpref.scenario import ScenarioSpec

spec = forward_scenario()
print("--- risk-neutral field on a martingale market ---")
print(run_forward_check(spec).text)

deflated = ScenarioSpec(
    spec.space,
    spec.measure,
    UtilityField.from_atom_curves(
        spec.space,
        [
            [IdentityCurve()],
            [IdentityCurve()] * 2,
            [LinearCurve(Fraction(9, 10))] * 4,
        ],
    ),
    spec.acts,
    spec.strategies,
    "forward-deflated",
    None,
)
print("--- deflated terminal utility: attainment must fail ---")
print(run_forward_check(deflated).text)
