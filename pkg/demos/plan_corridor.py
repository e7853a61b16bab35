"""One planning run, twice: static ratings versus thermal ratings.

The shipped six-bus system has a congested corridor into its load
center.  Near 820 MW of peak demand a statically-rated robust plan runs
out of options, while rating the same wires against the weather keeps
the corridor honest for another ~80 MW and shifts where the capital
goes.  This script solves both plans at that peak and prints them side
by side, including the audit trail a thermal plan carries.

Run:  python3 demos/plan_corridor.py   (about half a minute)
"""

from __future__ import annotations

from pathlib import Path

import gridxpand
from gridxpand import (SolveConfig, apply_scenario, load_case, load_scenario,
                       plan_table, run_plan, scale_to_peak)

CASE_DIR = Path(gridxpand.__file__).parent / "cases"
PEAK_MW = 820.0
CONFIG = SolveConfig(mip_gap=1e-4, time_limit=120.0)


def main() -> None:
    case = apply_scenario(load_case(CASE_DIR / "six_bus.json"),
                          load_scenario(CASE_DIR / "six_bus_scenario.json"))
    scenario = load_scenario(CASE_DIR / "six_bus_scenario.json")
    stressed = scale_to_peak(case, PEAK_MW)
    print(f"Six-bus system scaled to a {PEAK_MW:.0f} MW peak, robust "
          f"parameters phi={scenario.robust.phi}, mu={scenario.robust.mu}, "
          f"R={scenario.robust.reliability}.\n")

    print("=== static line ratings (dc_robust) ===")
    static = run_plan(stressed, scenario.robust, "dc_robust", CONFIG)
    print(plan_table(static))

    print("\n=== weather-dependent ratings (dtlr_robust) ===")
    thermal = run_plan(stressed, scenario.robust, "dtlr_robust", CONFIG)
    print(plan_table(thermal))

    if thermal.status == "optimal":
        hbe = thermal.audit["hbe"]
        n_audited = len(hbe["residuals_w_per_m"])
        print(f"\nThermal audit: {n_audited} heat balances re-checked "
              f"against the exact physics;")
        print(f"worst line still has {hbe['worst_margin_w_per_m']:.2f} W/m "
              f"of headroom below its certified bound.")
    if static.status != "optimal" and thermal.status == "optimal":
        print("\nAt this peak only the thermally-rated plan is feasible: the")
        print("extra corridor capacity comes from the weather already priced")
        print("into the ratings, not from new wires.")


if __name__ == "__main__":
    main()
