"""Regenerate the packaged case files from first principles.

The two shipped systems are reconstructions: a six-bus planning exercise
with three generation buses feeding three load buses across a congested
corridor, and a 24-bus network shaped like the classic reliability test
system.  Candidate cost data in the source studies live behind paywalled
references, so the numbers here are chosen for realistic magnitudes and —
more importantly — for a reproducible story:

* six-bus, static ratings: the import cut saturates between 750 and
  800 MW peak, so the plan goes infeasible at 800;
* six-bus, thermal ratings: lines carry roughly twice their static
  rating, pushing the wall to 900 MW where total generation runs out;
* 24-bus: generation-led expansion (the network is strong), used for the
  large-model timing and audit runs.

Run this script from the repository root to rewrite
``src/gridxpand/cases/*.json`` in place; the output is deterministic.
"""

from __future__ import annotations

import json
from pathlib import Path

from gridxpand import (BusSpec, CaseSystem, ConductorSpec, GeneratorSpec,
                       LineSpec, PeriodSpec, WeatherRecord, save_case)

CASES_DIR = Path(__file__).resolve().parent.parent / "src" / "gridxpand" / "cases"

LOAD_FACTORS = (0.5, 0.65, 0.8, 0.9, 1.0)
PERIOD_HOURS = 1752.0                      # five equal slices of one year
AMBIENT_K = 298.0
WIND_MPS = 2.23
SOLAR_W_PER_M = 14.08
KR = 2.5e-9

# Overhead conductor datasheet shared by every line.
CONDUCTOR = ConductorSpec(
    diameter=0.035, air_density=1.293, air_viscosity=1.81e-5,
    thermal_conductivity=0.028, wind_angle_coeff=1.0,
    emissivity=0.75, radiation_coeff=KR,
    resistance_ref=2.811, temperature_ref=298.0, thermal_resistivity=0.0341,
)

WEATHER = WeatherRecord(ambient_temp=AMBIENT_K, wind_speed=WIND_MPS,
                        solar_gain=SOLAR_W_PER_M, radiation_coeff=KR)


def periods_with_weather(line_ids) -> tuple[PeriodSpec, ...]:
    weather = {line_id: WEATHER for line_id in line_ids}
    return tuple(
        PeriodSpec(id=f"p{k + 1}", duration=PERIOD_HOURS, load_factor=f,
                   weather=dict(weather))
        for k, f in enumerate(LOAD_FACTORS))


def scenario_doc(phi: float, mu: float, reliability: float) -> dict:
    return {
        "robust": {"phi": phi, "mu": mu, "reliability": reliability},
        "weather": {"*": {"*": {"ambient_k": AMBIENT_K, "wind_mps": WIND_MPS,
                                "solar_w_per_m": SOLAR_W_PER_M, "kr": KR}}},
    }


# ---------------------------------------------------------------------------
# Six-bus system


def six_bus_case() -> CaseSystem:
    buses = (
        BusSpec(id="1", load_weight=0.0, ev_forecast=(0.0,) * 5,
                wind_forecast=(0.0,) * 5, pv_forecast=(0.0,) * 5),
        BusSpec(id="2", load_weight=0.0, ev_forecast=(0.0,) * 5,
                wind_forecast=(0.0,) * 5, pv_forecast=(0.0,) * 5),
        BusSpec(id="3", load_weight=0.4, ev_forecast=(10.0,) * 5,
                wind_forecast=(20.0,) * 5, pv_forecast=(20.0,) * 5),
        BusSpec(id="4", load_weight=0.3, ev_forecast=(10.0,) * 5,
                wind_forecast=(20.0,) * 5, pv_forecast=(20.0,) * 5),
        BusSpec(id="5", load_weight=0.3, ev_forecast=(10.0,) * 5,
                wind_forecast=(20.0,) * 5, pv_forecast=(20.0,) * 5),
        BusSpec(id="6", load_weight=0.0, ev_forecast=(0.0,) * 5,
                wind_forecast=(0.0,) * 5, pv_forecast=(0.0,) * 5),
    )

    def internal(lid, a, b):
        # Short, low-impedance ties inside the generation and load zones.
        return LineSpec(id=lid, from_bus=a, to_bus=b, candidate=False,
                        install_cost=0.0, susceptance=50.0, conductance=2.0,
                        resistance_at_tmax=0.3, length=10.0, t_max=373.0,
                        flow_limit=3.0, conductor=CONDUCTOR)

    def corridor(lid, a, b, candidate, cost, susceptance, limit):
        return LineSpec(id=lid, from_bus=a, to_bus=b, candidate=candidate,
                        install_cost=cost, susceptance=susceptance,
                        conductance=1.024, resistance_at_tmax=10.0,
                        length=50.0, t_max=373.0, flow_limit=limit,
                        conductor=CONDUCTOR)

    # Existing corridor susceptance keeps flow_limit/susceptance equal across
    # the cut, so static ratings saturate at a common angle spread.
    b_exist = 4.099 * 0.42 / 0.81
    lines = (
        internal("T12", "1", "2"),
        internal("T26", "2", "6"),
        internal("T34", "3", "4"),
        internal("T45", "4", "5"),
        corridor("E1", "1", "3", False, 0.0, b_exist, 0.42),
        corridor("E2", "2", "4", False, 0.0, b_exist, 0.42),
        corridor("E3", "6", "5", False, 0.0, b_exist, 0.42),
        corridor("E4", "2", "3", False, 0.0, b_exist, 0.42),
        corridor("E5", "6", "4", False, 0.0, b_exist, 0.42),
        corridor("L1", "1", "3", True, 6.0e5, 4.099, 0.81),
        corridor("L2", "2", "3", True, 6.5e5, 4.099, 0.81),
        corridor("L3", "1", "4", True, 7.0e5, 4.099, 0.81),
        corridor("L4", "2", "4", True, 7.5e5, 4.099, 0.81),
        corridor("L5", "6", "4", True, 8.0e5, 4.099, 0.81),
        corridor("L6", "6", "5", True, 8.5e5, 4.099, 0.81),
        corridor("L7", "2", "5", True, 9.0e5, 4.099, 0.81),
    )

    def gen(gid, bus, p_max, op, cost=0.0):
        return GeneratorSpec(id=gid, bus=bus, candidate=cost > 0,
                             install_cost=cost, op_cost=op, p_max=p_max)

    generators = (
        gen("EG1", "1", 100.0, 12.0),
        gen("EG2", "2", 100.0, 13.0),
        gen("EG6", "6", 80.0, 14.0),
        gen("U1", "1", 70.0, 17.0, 2.8e6),
        gen("U2", "1", 65.0, 18.0, 2.6e6),
        gen("U3", "2", 60.0, 19.0, 2.4e6),
        gen("U4", "2", 55.0, 20.0, 2.2e6),
        gen("U5", "6", 50.0, 21.0, 2.0e6),
        gen("G1", "1", 40.0, 22.0, 1.6e6),
        gen("G2", "1", 38.0, 23.0, 1.5e6),
        gen("G3", "1", 36.0, 24.0, 1.4e6),
        gen("G4", "2", 34.0, 25.0, 1.3e6),
        gen("G5", "2", 32.0, 26.0, 1.2e6),
        gen("G6", "2", 30.0, 27.0, 1.1e6),
        gen("G7", "6", 26.0, 28.0, 1.0e6),
        gen("G8", "6", 24.0, 29.0, 9.0e5),
    )

    return CaseSystem(buses=buses, lines=lines, generators=generators,
                      periods=periods_with_weather([c.id for c in lines]),
                      peak_demand=400.0, s_base=100.0, v_base=132.0)


# ---------------------------------------------------------------------------
# 24-bus system

# (bus, peak-share numerator MW of a 2850 MW system)
RTS_LOADS = {
    "1": 108, "2": 97, "3": 180, "4": 74, "5": 71, "6": 136, "7": 125,
    "8": 171, "9": 175, "10": 195, "13": 265, "14": 194, "15": 317,
    "16": 100, "18": 333, "19": 181, "20": 128,
}
RES_BUSES = ("1", "6", "9", "13", "16", "20")
WIND_BUSES = ("1", "9", "16")

# (from, to, static limit in p.u. on 100 MVA)
RTS_CORRIDORS = [
    ("1", "2", 1.75), ("1", "3", 1.75), ("1", "5", 1.75), ("2", "4", 1.75),
    ("2", "6", 1.75), ("3", "9", 1.75), ("3", "24", 4.0), ("4", "9", 1.75),
    ("5", "10", 1.75), ("6", "10", 1.75), ("7", "8", 1.75), ("8", "9", 1.75),
    ("8", "10", 1.75), ("9", "11", 4.0), ("9", "12", 4.0), ("10", "11", 4.0),
    ("10", "12", 4.0), ("11", "13", 5.0), ("11", "14", 5.0), ("12", "13", 5.0),
    ("12", "23", 5.0), ("13", "23", 5.0), ("14", "16", 5.0), ("15", "16", 5.0),
    ("15", "21", 10.0), ("15", "24", 5.0), ("16", "17", 5.0), ("16", "19", 5.0),
    ("17", "18", 5.0), ("17", "22", 5.0), ("18", "21", 10.0),
    ("19", "20", 10.0), ("20", "23", 10.0), ("21", "22", 5.0),
]

# Corridors that accept a second circuit.
RTS_CANDIDATE_CORRIDORS = [
    ("3", "24"), ("15", "24"), ("14", "16"), ("16", "17"), ("16", "19"),
    ("11", "13"), ("12", "23"), ("7", "8"), ("10", "12"), ("1", "5"),
]

# (bus, unit size MW, marginal cost $/MWh, hydro flag) - 32 units.
RTS_UNITS = [
    ("1", 20.0, 18.0, False), ("1", 20.0, 18.2, False),
    ("1", 76.0, 13.0, False), ("1", 76.0, 13.1, False),
    ("2", 20.0, 18.4, False), ("2", 20.0, 18.6, False),
    ("2", 76.0, 13.2, False), ("2", 76.0, 13.3, False),
    ("7", 100.0, 20.0, False), ("7", 100.0, 20.2, False),
    ("7", 100.0, 20.4, False),
    ("13", 197.0, 20.6, False), ("13", 197.0, 20.8, False),
    ("13", 197.0, 21.0, False),
    ("15", 12.0, 25.0, False), ("15", 12.0, 25.2, False),
    ("15", 12.0, 25.4, False), ("15", 12.0, 25.6, False),
    ("15", 12.0, 25.8, False), ("15", 155.0, 11.0, False),
    ("16", 155.0, 11.2, False),
    ("18", 400.0, 5.5, False), ("21", 400.0, 5.6, False),
    ("22", 50.0, 0.5, True), ("22", 50.0, 0.5, True),
    ("22", 50.0, 0.5, True), ("22", 50.0, 0.5, True),
    ("22", 50.0, 0.5, True), ("22", 50.0, 0.5, True),
    ("23", 155.0, 11.4, False), ("23", 155.0, 11.5, False),
    ("23", 350.0, 10.8, False),
]

I_BASE = 100e6 / 132e3                 # A at 100 MVA / 132 kV
THERMAL_HEADROOM = 261.1               # W/m available at T_max minus solar
THERMAL_OVER_STATIC = 1.4              # target thermal/static capacity ratio


def rts_line(lid: str, a: str, b: str, limit: float, candidate: bool,
             cost: float) -> LineSpec:
    length_km = 80.0
    # Size the conductor so the thermal rating clears the static one.
    i_cap = THERMAL_OVER_STATIC * limit * I_BASE
    r_per_m = THERMAL_HEADROOM / (i_cap * i_cap)
    return LineSpec(id=lid, from_bus=a, to_bus=b, candidate=candidate,
                    install_cost=cost, susceptance=2.6 * limit,
                    conductance=0.65 * limit,
                    resistance_at_tmax=r_per_m * length_km * 1e3,
                    length=length_km, t_max=373.0, flow_limit=limit,
                    conductor=CONDUCTOR)


def rts24_case() -> CaseSystem:
    buses = []
    for k in range(1, 25):
        bus_id = str(k)
        weight = RTS_LOADS.get(bus_id, 0.0) / 2850.0
        ev = 5.0 if bus_id in RES_BUSES else 0.0
        wind = 30.0 if bus_id in WIND_BUSES else 0.0
        pv = 30.0 if bus_id in RES_BUSES and bus_id not in WIND_BUSES else 0.0
        buses.append(BusSpec(id=bus_id, load_weight=weight,
                             ev_forecast=(ev,) * 5, wind_forecast=(wind,) * 5,
                             pv_forecast=(pv,) * 5))

    lines = [rts_line(f"T{a}-{b}", a, b, limit, False, 0.0)
             for a, b, limit in RTS_CORRIDORS]
    limits = {(a, b): limit for a, b, limit in RTS_CORRIDORS}
    for k, (a, b) in enumerate(RTS_CANDIDATE_CORRIDORS):
        lines.append(rts_line(f"L{k + 1}", a, b, limits[a, b], True,
                              3.0e6 + 0.5e6 * k))

    generators = []
    n_candidate = 0
    for k, (bus, p_max, op, hydro) in enumerate(RTS_UNITS):
        generators.append(GeneratorSpec(id=f"EG{k + 1}", bus=bus,
                                        candidate=False, install_cost=0.0,
                                        op_cost=op, p_max=p_max))
        if not hydro:
            n_candidate += 1
            generators.append(GeneratorSpec(
                id=f"U{n_candidate}", bus=bus, candidate=True,
                install_cost=50e3 * p_max, op_cost=op + 2.0, p_max=p_max))

    return CaseSystem(buses=tuple(buses), lines=tuple(lines),
                      generators=tuple(generators),
                      periods=periods_with_weather([c.id for c in lines]),
                      peak_demand=4200.0, s_base=100.0, v_base=132.0)


def main() -> None:
    CASES_DIR.mkdir(parents=True, exist_ok=True)
    save_case(six_bus_case(), CASES_DIR / "six_bus.json")
    save_case(rts24_case(), CASES_DIR / "rts24.json")
    for name in ("six_bus_scenario.json", "rts24_scenario.json"):
        doc = scenario_doc(phi=0.05, mu=0.01, reliability=0.05)
        (CASES_DIR / name).write_text(
            json.dumps(doc, indent=2, sort_keys=True) + "\n")
    for name in ("six_bus.json", "rts24.json",
                 "six_bus_scenario.json", "rts24_scenario.json"):
        print(f"wrote {CASES_DIR / name}")


if __name__ == "__main__":
    main()
