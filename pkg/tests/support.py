"""Shared test helpers: toy cases, random instances, and gadget probes.

The gadget probes all follow the same pattern: build a minimal model with
the inputs pinned, then push the gadget's output down and up with two
oracle solves.  An exact gadget leaves no room — both probes land on the
direct nonlinear value — so any daylight between min and max, or between
either probe and the hand-evaluated definition, is a mismatch.
"""

from __future__ import annotations

import math

import numpy as np

from gridxpand import (BusSpec, CaseSystem, ConductorSpec, GeneratorSpec,
                       LineSpec, ModelIR, PeriodSpec, RobustParams,
                       SolveConfig, WeatherRecord, oracle_solve)
from gridxpand.ir import BINARY, CONTINUOUS, EQ, LE
from gridxpand.linearize import (gadget_binary_product,
                                 gadget_convection_select,
                                 gadget_flow_magnitude, gadget_max_one_abs,
                                 gadget_switched_dc_flow)

PROBE_TOL = 1e-7

# Filled by the acceptance battery; a conftest hook echoes these lines
# into the terminal summary so they survive pytest's output capture.
ACCEPTANCE_LINES: list[str] = []

DEFAULT_CONDUCTOR = ConductorSpec(
    diameter=0.035, air_density=1.293, air_viscosity=1.81e-5,
    thermal_conductivity=0.028, wind_angle_coeff=1.0, emissivity=0.75,
    radiation_coeff=2.5e-9, resistance_ref=2.811, temperature_ref=298.0,
    thermal_resistivity=0.0341)

DEFAULT_WEATHER = WeatherRecord(ambient_temp=298.0, wind_speed=2.23,
                                solar_gain=14.08, radiation_coeff=2.5e-9)

STANDARD_ROBUST = RobustParams(phi=0.05, mu=0.01, reliability=0.05)


# ---------------------------------------------------------------------------
# Toy cases


def _toy_line(line_id: str, candidate: bool, cost: float) -> LineSpec:
    return LineSpec(id=line_id, from_bus="1", to_bus="2", candidate=candidate,
                    install_cost=cost, susceptance=5.0, conductance=1.0,
                    resistance_at_tmax=2.0, length=10.0, t_max=373.0,
                    flow_limit=1.0, conductor=DEFAULT_CONDUCTOR)


def toy_case(*, with_weather: bool = True, peak: float = 100.0) -> CaseSystem:
    """Two buses, one period, one existing and one candidate of everything.

    All demand sits at bus 2; the 80 MW existing unit at bus 1 is cheap, so
    the cheapest plan ships it over the existing line and builds the
    candidate unit for the remainder.  The candidate line is never worth
    its cost at the default peak.
    """
    weather = ({"E": DEFAULT_WEATHER, "L": DEFAULT_WEATHER}
               if with_weather else {})
    return CaseSystem(
        buses=(BusSpec("1", 0.0, (0.0,), (0.0,), (0.0,)),
               BusSpec("2", 1.0, (0.0,), (0.0,), (0.0,))),
        lines=(_toy_line("E", False, 0.0), _toy_line("L", True, 5e5)),
        generators=(GeneratorSpec("EG", "1", False, 0.0, 10.0, 80.0),
                    GeneratorSpec("U1", "2", True, 1e6, 50.0, 50.0)),
        periods=(PeriodSpec("p1", 100.0, 1.0, weather),),
        peak_demand=peak, s_base=100.0, v_base=132.0)


def toy_dc_det_objective() -> float:
    """Hand-derived optimum of the toy in dc_det mode.

    Build U1 (1e6), run EG at its 80 MW cap (80 * 10 $/MWh * 100 h) and U1
    for the remaining 20 MW (20 * 50 * 100).
    """
    return 1e6 + 80 * 10.0 * 100.0 + 20 * 50.0 * 100.0


def toy_robust_objective(params: RobustParams) -> float:
    """Hand-derived optimum of the toy under the robust balance.

    Bus 2 demands ``100 + 100*phi*omega - 1`` MW; bus 1 may overship its
    80 MW by the 0.01 MW tolerance, so U1 covers the rest.
    """
    po = params.phi * params.omega
    u1 = 100.0 + 100.0 * po - 100.0 * params.mu - 80.0 - params.mu
    return 1e6 + 80 * 10.0 * 100.0 + u1 * 50.0 * 100.0


# ---------------------------------------------------------------------------
# Random planning instances for backend-agreement checks


def random_instance(rng: np.random.Generator):
    """One random small planning instance: ``(case, params, mode)``.

    Sized so the built model keeps at most 10 free binaries, which is what
    the enumeration oracle can digest quickly.  Demand is drawn wide enough
    that a fair share of instances come out infeasible on purpose.
    """
    mode = str(rng.choice(("dc_det", "dc_robust", "dtlr_robust"),
                          p=(0.4, 0.35, 0.25)))
    thermal = mode == "dtlr_robust"
    n_buses = 2 if thermal else int(rng.integers(2, 4))
    bus_ids = [str(k + 1) for k in range(n_buses)]
    weights = rng.uniform(0.1, 1.0, size=n_buses)
    weights /= weights.sum()
    n_periods = 1 if thermal else int(rng.integers(1, 3))

    buses = tuple(
        BusSpec(b, float(w),
                tuple(float(v) for v in rng.uniform(0, 8, n_periods)),
                tuple(float(v) for v in rng.uniform(0, 6, n_periods)),
                tuple(float(v) for v in rng.uniform(0, 6, n_periods)))
        for b, w in zip(bus_ids, weights))

    def line(line_id, a, b, candidate):
        return LineSpec(
            id=line_id, from_bus=a, to_bus=b, candidate=candidate,
            install_cost=float(rng.uniform(2e5, 9e5)) if candidate else 0.0,
            susceptance=float(rng.uniform(2.0, 8.0)),
            conductance=float(rng.uniform(0.2, 1.5)),
            resistance_at_tmax=float(rng.uniform(1.0, 4.0)),
            length=10.0, t_max=373.0,
            flow_limit=float(rng.uniform(0.5, 2.0)),
            conductor=DEFAULT_CONDUCTOR)

    lines = [line(f"E{k}", bus_ids[k], bus_ids[k + 1], False)
             for k in range(n_buses - 1)]
    n_cand_lines = int(rng.integers(0, 2)) if thermal else int(rng.integers(0, 3))
    for k in range(n_cand_lines):
        a, b = rng.choice(n_buses, size=2, replace=False)
        lines.append(line(f"L{k}", bus_ids[a], bus_ids[b], True))

    gens = [GeneratorSpec("EG", bus_ids[0], False, 0.0,
                          float(rng.uniform(5, 20)),
                          float(rng.uniform(30, 90)))]
    budget = 10 - (2 * len(lines) * n_periods if thermal else 0) - n_cand_lines
    n_cand_gens = int(rng.integers(0, max(1, budget) + 1))
    for k in range(n_cand_gens):
        gens.append(GeneratorSpec(
            f"U{k}", bus_ids[int(rng.integers(0, n_buses))], True,
            float(rng.uniform(3e5, 1.2e6)), float(rng.uniform(20, 80)),
            float(rng.uniform(15, 60))))

    def weather():
        return WeatherRecord(
            ambient_temp=float(rng.uniform(288, 308)),
            wind_speed=float(rng.uniform(0.5, 4.0)),
            solar_gain=float(rng.uniform(0, 25)),
            radiation_coeff=2.5e-9)

    periods = tuple(
        PeriodSpec(f"p{k}", float(rng.uniform(50, 500)),
                   float(rng.uniform(0.4, 1.0)),
                   {c.id: weather() for c in lines} if thermal else {})
        for k in range(n_periods))

    case = CaseSystem(buses=buses, lines=tuple(lines), generators=tuple(gens),
                      periods=periods, peak_demand=float(rng.uniform(40, 160)),
                      s_base=100.0, v_base=132.0)
    params = None if mode == "dc_det" else STANDARD_ROBUST
    return case, params, mode


# ---------------------------------------------------------------------------
# Gadget probes


def probe(ir: ModelIR, objective: dict[int, float]):
    """Oracle solve of ``ir`` under a replaced objective."""
    ir.objective = dict(objective)
    return oracle_solve(ir, SolveConfig(backend="oracle", time_limit=60.0))


def minmax_output(ir: ModelIR, out: int) -> tuple[float, float] | None:
    """(min, max) of one variable over the model, or None if infeasible."""
    lo = probe(ir, {out: 1.0})
    hi = probe(ir, {out: -1.0})
    if not (lo.is_optimal and hi.is_optimal):
        return None
    return lo.objective, -hi.objective


def _check_pinned(bad: list, label: str, span, want: float,
                  tol: float = PROBE_TOL):
    if span is None:
        bad.append(f"{label}: model infeasible")
    elif max(abs(span[0] - want), abs(span[1] - want)) > tol:
        bad.append(f"{label}: output in [{span[0]}, {span[1]}], "
                   f"definition gives {want}")


def scan_binary_product(rng: np.random.Generator, n: int) -> list[str]:
    """theta = y * delta with both inputs pinned must equal the product."""
    bad: list[str] = []
    for k in range(n):
        bound = float(rng.uniform(0.5, 10.0))
        delta = float(rng.uniform(-bound, bound))
        y = int(rng.integers(0, 2))
        ir = ModelIR()
        yv = ir.add_variable("y", BINARY, y, y)
        dv = ir.add_variable("delta", CONTINUOUS, -bound, bound)
        ir.add_row("pin", {dv: 1.0}, EQ, delta)
        frag = gadget_binary_product(ir, yv, dv, bound, "g")
        _check_pinned(bad, f"product #{k} (y={y}, delta={delta:.4f})",
                      minmax_output(ir, frag.output), y * delta)
    return bad


def scan_max_one_abs(rng: np.random.Generator, n: int) -> list[str]:
    bad: list[str] = []
    for k in range(n):
        hi = float(rng.uniform(0.2, 6.0))
        lo = -float(rng.uniform(0.2, 6.0))
        # Visit the kink at |delta| = 1 now and then.
        delta = (float(rng.choice((-1.0, 1.0))) if rng.random() < 0.15
                 else float(rng.uniform(lo, hi)))
        delta = min(max(delta, lo), hi)
        ir = ModelIR()
        dv = ir.add_variable("delta", CONTINUOUS, lo, hi)
        ir.add_row("pin", {dv: 1.0}, EQ, delta)
        frag = gadget_max_one_abs(ir, dv, "g")
        _check_pinned(bad, f"max1abs #{k} (delta={delta:.4f})",
                      minmax_output(ir, frag.output), max(1.0, abs(delta)))
    return bad


def scan_flow_magnitude(rng: np.random.Generator, n: int) -> list[str]:
    bad: list[str] = []
    for k in range(n):
        bound = float(rng.uniform(0.3, 5.0))
        flow = float(rng.uniform(-bound, bound))
        if rng.random() < 0.1:
            flow = 0.0
        ir = ModelIR()
        fv = ir.add_variable("pf", CONTINUOUS, -bound, bound)
        ir.add_row("pin", {fv: 1.0}, EQ, flow)
        frag = gadget_flow_magnitude(ir, fv, bound, "g")
        _check_pinned(bad, f"|pf| #{k} (pf={flow:.4f})",
                      minmax_output(ir, frag.output), abs(flow))
    return bad


def scan_switched_dc_flow(rng: np.random.Generator, n: int) -> list[str]:
    """pf must equal u * beta * (a_s - a_r) for every pinned input."""
    bad: list[str] = []
    window = 1.2
    for k in range(n):
        beta = float(rng.uniform(1.0, 8.0))
        limit = float(rng.uniform(0.5, 3.0))
        u = int(rng.integers(0, 2))
        span = min(window, limit / beta) * 0.95
        diff = float(rng.uniform(-span, span))
        a_r = float(rng.uniform(-0.2, 0.2))
        a_s = a_r + diff
        ir = ModelIR()
        uv = ir.add_variable("u", BINARY, u, u)
        pf = ir.add_variable("pf", CONTINUOUS, -limit, limit)
        av = ir.add_variable("a_s", CONTINUOUS, a_s, a_s)
        bv = ir.add_variable("a_r", CONTINUOUS, a_r, a_r)
        gadget_switched_dc_flow(ir, uv, pf, beta, av, bv, limit, "g",
                                window=window)
        _check_pinned(bad, f"switch #{k} (u={u}, beta*diff={beta * diff:.4f})",
                      minmax_output(ir, pf), u * beta * diff)
    return bad


def scan_convection_select(rng: np.random.Generator, n: int) -> list[str]:
    """Selector must hand all heat to the governing branch.

    Each instance caps the two branch variables at their film-law values
    ``k * dT`` and maximizes total convection; the gadget must allow exactly
    ``max(k1, k2) * dT`` — the value of the explicit max formulation
    ``y*Q1 + (1-y)*Q2`` with the ordering deciding ``y`` — while the losing
    branch stays gated at zero.
    """
    bad: list[str] = []
    for k in range(n):
        k1 = float(rng.uniform(0.0, 5.0))
        k2 = k1 if rng.random() < 0.1 else float(rng.uniform(0.0, 5.0))
        dt = float(rng.uniform(1.0, 60.0))
        big_m = (max(k1, k2) + 1.0) * dt * 1.2 + 1.0
        ir = ModelIR()
        q1 = ir.add_variable("q1", CONTINUOUS, 0.0, big_m)
        q2 = ir.add_variable("q2", CONTINUOUS, 0.0, big_m)
        ir.add_row("law1", {q1: 1.0}, LE, k1 * dt)
        ir.add_row("law2", {q2: 1.0}, LE, k2 * dt)
        frag = gadget_convection_select(ir, k1, k2, q1, q2, big_m, "g")

        label = f"convsel #{k} (k1={k1:.3f}, k2={k2:.3f}, dT={dt:.2f})"
        best = probe(ir, {q1: -1.0, q2: -1.0})
        if not best.is_optimal:
            bad.append(f"{label}: max-heat probe {best.status}")
            continue
        y = 1.0 if k1 >= k2 else 0.0
        direct = y * (k1 * dt) + (1.0 - y) * (k2 * dt)   # = max(k1, k2) * dT
        got = -best.objective
        scale = 1.0 + abs(direct)
        if abs(got - direct) > PROBE_TOL * scale:
            bad.append(f"{label}: passes {got}, max formulation gives {direct}")
            continue
        if k1 != k2:
            y_got = best.values[frag.output]
            if abs(y_got - y) > 1e-9:
                bad.append(f"{label}: selector {y_got}, ordering demands {y}")
                continue
            loser = q2 if k1 > k2 else q1
            top = probe(ir, {loser: -1.0})
            if not top.is_optimal or -top.objective > PROBE_TOL * scale:
                bad.append(f"{label}: losing branch passes "
                           f"{-top.objective if top.is_optimal else top.status}")
    return bad


def angle_window_span(beta: float, conductance: float,
                      half_range: float = 0.6) -> float:
    """Max |linearized AC flow| over the trig window (p.u.)."""
    return half_range * (0.95 * beta + 0.24 * conductance)


def assert_close(a: float, b: float, rel: float = 1e-9, abs_tol: float = 0.0):
    assert math.isclose(a, b, rel_tol=rel, abs_tol=abs_tol), f"{a} != {b}"


def assert_row_equivalent(det_ir, rob_ir, *, relaxed_prefix: str = "balance"):
    """Check two models agree row for row and variable for variable.

    The protected build keeps the balance rows as one-sided covers, so
    those rows may differ in sense; every coefficient, bound and objective
    term must still match exactly.
    """
    assert [(v.name, v.kind, v.lower, v.upper) for v in det_ir.variables] \
        == [(v.name, v.kind, v.lower, v.upper) for v in rob_ir.variables]
    assert det_ir.objective == rob_ir.objective
    assert len(det_ir.rows) == len(rob_ir.rows)
    for a, b in zip(det_ir.rows, rob_ir.rows):
        assert a.name == b.name
        assert a.coeffs == b.coeffs, f"coefficients differ in {a.name}"
        assert a.rhs == b.rhs, f"rhs differs in {a.name}: {a.rhs} != {b.rhs}"
        if a.sense != b.sense:
            assert a.name.startswith(relaxed_prefix), \
                f"sense differs outside the balance block: {a.name}"
