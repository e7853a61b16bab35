"""How a conductor's ampacity emerges from its heat balance.

A line's steady temperature is where ohmic and solar gains meet convective
and radiative losses.  This script walks one conductor datasheet through
that balance: film coefficients from the Reynolds number, the loss budget
at the temperature ceiling, the resulting ampacity, and how that rating
moves with ambient temperature and wind — the whole point of rating lines
dynamically instead of stamping one static number on them.

Run:  python3 demos/thermal_ratings.py
"""

from __future__ import annotations

import numpy as np

from gridxpand import (ConductorSpec, WeatherRecord, ampacity,
                       heat_balance_breakdown, line_convection,
                       reynolds_number, steady_state_temperature)

CONDUCTOR = ConductorSpec(
    diameter=0.035, air_density=1.293, air_viscosity=1.81e-5,
    thermal_conductivity=0.028, wind_angle_coeff=1.0,
    emissivity=0.75, radiation_coeff=2.5e-9,
    resistance_ref=2.811, temperature_ref=298.0, thermal_resistivity=0.0341,
)
R_PER_M = 2.0e-4          # ohm/m at the 373 K ceiling
T_MAX = 373.0
REFERENCE = WeatherRecord(ambient_temp=298.0, wind_speed=2.23,
                          solar_gain=14.08, radiation_coeff=2.5e-9)
I_BASE = 100e6 / 132e3    # A per p.u. on a 100 MVA / 132 kV system


def main() -> None:
    re = reynolds_number(CONDUCTOR.diameter, REFERENCE.wind_speed,
                         CONDUCTOR.air_density, CONDUCTOR.air_viscosity)
    coeffs = line_convection(CONDUCTOR, REFERENCE)
    print("Reference day: 298 K ambient, 2.23 m/s wind, 14.08 W/m solar")
    print(f"  Reynolds number      {re:10.1f}")
    print(f"  film coefficient k'  {coeffs.k_prime:10.4f} W/(m*K)   "
          f"k'' {coeffs.k_double_prime:.4f} W/(m*K)  "
          f"(the larger branch carries the heat)")

    amp = ampacity(T_MAX, REFERENCE, CONDUCTOR, R_PER_M)
    print(f"  ampacity at {T_MAX:.0f} K    {amp:10.1f} A  "
          f"= {amp / I_BASE:.3f} p.u. of {I_BASE:.0f} A")

    print("\nLoss budget per meter as the current ramps up:")
    print(f"  {'I (A)':>7} {'T_ss (K)':>9} {'ohmic':>8} {'solar':>7} "
          f"{'convection':>11} {'radiation':>10}")
    for current in (0.0, 400.0, 800.0, amp):
        t_ss = steady_state_temperature(current, REFERENCE, CONDUCTOR, R_PER_M)
        hbe = heat_balance_breakdown(current, t_ss, REFERENCE, CONDUCTOR,
                                     R_PER_M)
        print(f"  {current:7.0f} {t_ss:9.2f} {hbe.ohmic:8.2f} "
              f"{hbe.solar:7.2f} {-hbe.convection:11.2f} "
              f"{-hbe.radiation:10.2f}")
    print("  (gains positive, losses negative; each row sums to ~0)")

    print("\nAmpacity across weather, as a multiple of the reference rating:")
    winds = np.array([0.5, 1.0, 2.23, 4.0, 6.0])
    ambients = np.array([278.0, 288.0, 298.0, 308.0, 318.0])
    print("  ambient\\wind " + "".join(f"{w:>8.2f}" for w in winds))
    for t_env in ambients:
        row = []
        for wind in winds:
            weather = WeatherRecord(float(t_env), float(wind),
                                    REFERENCE.solar_gain, 2.5e-9)
            row.append(ampacity(T_MAX, weather, CONDUCTOR, R_PER_M) / amp)
        print(f"  {t_env:9.0f} K  " + "".join(f"{r:8.2f}" for r in row))
    print("\nA cold, windy hour buys half again the nameplate rating; a hot,")
    print("still one takes a third of it away.  Static ratings must assume")
    print("the worst row of that table all year round.")


if __name__ == "__main__":
    main()
