"""Expansion-planning model builders, solution extraction, and audits.

Three modes share one variable skeleton (build binaries, dispatch, flows,
angles) and differ in how line capacity is modeled:

``dc_det``
    DC power flow with a hard per-line flow limit and an exact nodal
    balance.  Existing elements enter as binaries fixed to 1 so the matrix
    shape is mode- and data-independent.
``dc_robust``
    Same network model, but each nodal balance becomes a ``>=`` row whose
    right side is tightened by the uncertainty level and quantile and
    relaxed by the infeasibility tolerance, all folded in numerically
    because forecasts are parameters.
``dtlr_robust``
    Drops the static flow limits entirely.  Line capacity comes from the
    conductor heat balance: a linearized AC flow (certified small-angle trig
    segments) feeds a current magnitude, tangent cuts bound its square, and
    robust-capped convection plus a log-domain radiation surrogate absorb
    the heat.  Every binary-continuous product goes through the exact
    product gadget and every big-M constant is logged in the model metadata
    for post-solve auditing.

Solutions come back through :func:`extract_plan`, which refuses fractional
binaries, recomputes the objective from case data, and reports big-M
relaxations that bind suspiciously.  :func:`hbe_residual_audit` closes the
loop by evaluating the true nonlinear heat balance at the plan's operating
points; :func:`hbe_certificate_bound` states how large those residuals may
legitimately be, given the certified linearization gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ExtractionError, ModelBuildError
from .ir import BINARY, CONTINUOUS, EQ, GE, LE, GadgetFragment, ModelIR
from .linearize import (TrigSegments, gadget_binary_product,
                        gadget_convection_select,
                        gadget_square_cuts, gadget_switched_dc_flow,
                        trig_segments)
from .network import CaseSystem, LineSpec, PeriodSpec, validate_case
from .thermal import RadiationLogFit, line_convection, radiation_log_fit
from .uncertainty import RobustParams, robust_margin

MODES = ("dc_det", "dc_robust", "dtlr_robust")
DEFAULT_SQUARE_CUTS = 25
DEFAULT_ANGLE_SPAN = 1.2          # rad, disjunction coverage for DC flow
TRIG_WINDOW = 0.6                 # rad, half range of the trig fits
INTEGRALITY_TOL = 1e-6
OBJECTIVE_REL_TOL = 1e-6


@dataclass
class VarMap:
    """Variable ids for every modeled quantity, plus gadget bookkeeping."""

    model: ModelIR
    mode: str
    line_built: dict[str, int] = field(default_factory=dict)
    unit_built: dict[str, int] = field(default_factory=dict)
    dispatch: dict[tuple[str, str], int] = field(default_factory=dict)
    flow: dict[tuple[str, str], int] = field(default_factory=dict)
    angle: dict[tuple[str, str], int] = field(default_factory=dict)
    angle_diff: dict[tuple[str, str], int] = field(default_factory=dict)
    temperature: dict[tuple[str, str], int] = field(default_factory=dict)
    current: dict[tuple[str, str], int] = field(default_factory=dict)
    current_sq: dict[tuple[str, str], int] = field(default_factory=dict)
    conv_primary: dict[tuple[str, str], int] = field(default_factory=dict)
    conv_secondary: dict[tuple[str, str], int] = field(default_factory=dict)
    radiation: dict[tuple[str, str], int] = field(default_factory=dict)
    conv_select: dict[tuple[str, str], int] = field(default_factory=dict)
    fragments: dict[str, GadgetFragment] = field(default_factory=dict)


def reference_bus(case: CaseSystem) -> str:
    """Lowest-numbered bus id; numeric ids sort numerically."""

    def key(bus_id: str):
        try:
            return (0, int(bus_id), bus_id)
        except ValueError:
            return (1, 0, bus_id)

    return min((b.id for b in case.buses), key=key)


def _require_valid(case: CaseSystem):
    violations = validate_case(case)
    if violations:
        listing = "; ".join(str(v) for v in violations)
        raise ModelBuildError(f"case fails validation: {listing}")


def _require_weather(case: CaseSystem):
    for d in case.periods:
        for c in case.lines:
            if c.id not in d.weather:
                raise ModelBuildError(
                    f"dtlr_robust needs weather for line {c.id!r} in "
                    f"period {d.id!r}")


def _ac_flow_bound(line: LineSpec, trig: TrigSegments) -> float:
    """Max |linearized AC flow| over the trig window, p.u."""
    h = trig.half_range
    s_sin = trig.sin.slope
    s_cos = abs(trig.cos_pos.slope)
    return h * (s_sin * line.susceptance + s_cos * line.conductance)


def build_igtep(case: CaseSystem, params: RobustParams | None, mode: str, *,
                n_square_cuts: int = DEFAULT_SQUARE_CUTS,
                angle_span: float = DEFAULT_ANGLE_SPAN,
                ) -> tuple[ModelIR, VarMap]:
    """Assemble the MILP for one case and mode.

    ``params`` may be omitted only in ``dc_det`` mode.  The returned model
    is self-contained; its metadata records the mode, the robustness
    parameters, every big-M constant with the bound it was sized from, and
    the linearization certificates the audit bound is built from.
    """
    if mode not in MODES:
        raise ModelBuildError(f"unknown mode {mode!r}, expected one of {MODES}")
    _require_valid(case)
    robust = mode in ("dc_robust", "dtlr_robust")
    if robust and params is None:
        raise ModelBuildError(f"mode {mode} requires robustness parameters")
    if mode == "dtlr_robust":
        _require_weather(case)

    ir = ModelIR(name=f"igtep-{mode}", metadata={
        "mode": mode,
        "peak_demand": case.peak_demand,
        "big_m": {},
        "relax_rows": [],
        "certificates": {},
    })
    if robust:
        ir.metadata["robust"] = {"phi": params.phi, "mu": params.mu,
                                 "reliability": params.reliability,
                                 "omega": params.omega}
    vm = VarMap(model=ir, mode=mode)
    big_m_log: dict[str, float] = ir.metadata["big_m"]

    # -- build binaries; existing elements are fixed to 1 -----------------
    for c in case.lines:
        lo = 0.0 if c.candidate else 1.0
        vm.line_built[c.id] = ir.add_variable(f"build[{c.id}]", BINARY, lo, 1.0)
        if c.candidate:
            ir.add_objective_term(vm.line_built[c.id], c.install_cost)
    for g in case.generators:
        lo = 0.0 if g.candidate else 1.0
        vm.unit_built[g.id] = ir.add_variable(f"unit[{g.id}]", BINARY, lo, 1.0)
        if g.candidate:
            ir.add_objective_term(vm.unit_built[g.id], g.install_cost)

    # -- dispatch and angles ----------------------------------------------
    ref = reference_bus(case)
    for d in case.periods:
        for g in case.generators:
            v = ir.add_variable(f"gen[{g.id},{d.id}]", CONTINUOUS, 0.0, g.p_max)
            vm.dispatch[g.id, d.id] = v
            ir.add_objective_term(v, g.op_cost * d.duration)
            if g.candidate:
                ir.add_row(f"cap[{g.id},{d.id}]",
                           {v: 1.0, vm.unit_built[g.id]: -g.p_max}, LE, 0.0)
        for b in case.buses:
            fixed = b.id == ref
            vm.angle[b.id, d.id] = ir.add_variable(
                f"angle[{b.id},{d.id}]", CONTINUOUS,
                0.0 if fixed else -math.pi / 2,
                0.0 if fixed else math.pi / 2)

    # -- line flow model ---------------------------------------------------
    if mode == "dtlr_robust":
        trig = trig_segments(TRIG_WINDOW)
        ir.metadata["certificates"]["trig"] = {
            "cos_max_rel_err": trig.cos_max_rel_err,
            "cos_max_abs_err": trig.cos_max_abs_err,
            "sin_max_rel_err": trig.sin.max_rel_err,
            "sin_max_abs_err": trig.sin.max_abs_err,
        }
        _build_thermal_flows(case, params, ir, vm, trig, n_square_cuts,
                             big_m_log)
    else:
        for d in case.periods:
            for c in case.lines:
                pf = ir.add_variable(f"flow[{c.id},{d.id}]", CONTINUOUS,
                                     -c.flow_limit, c.flow_limit)
                vm.flow[c.id, d.id] = pf
                a_s = vm.angle[c.from_bus, d.id]
                a_r = vm.angle[c.to_bus, d.id]
                if c.candidate:
                    tag = f"switch[{c.id},{d.id}]"
                    frag = gadget_switched_dc_flow(
                        ir, vm.line_built[c.id], pf, c.susceptance, a_s, a_r,
                        c.flow_limit, tag, window=angle_span)
                    vm.fragments[tag] = frag
                    big_m_log[f"{tag}.ohm_relax"] = frag.big_m["ohm_relax"]
                    ir.metadata["relax_rows"].append(
                        (f"{tag}.ohm_hi", vm.line_built[c.id]))
                    ir.metadata["relax_rows"].append(
                        (f"{tag}.ohm_lo", vm.line_built[c.id]))
                else:
                    ir.add_row(f"ohm[{c.id},{d.id}]",
                               {pf: 1.0, a_s: -c.susceptance,
                                a_r: c.susceptance}, EQ, 0.0)

    # -- nodal balance -----------------------------------------------------
    for d in case.periods:
        for b in case.buses:
            coeffs: dict[int, float] = {}
            for g in case.generators:
                if g.bus == b.id:
                    coeffs[vm.dispatch[g.id, d.id]] = 1.0
            for c in case.lines:
                pf = vm.flow[c.id, d.id]
                if c.from_bus == b.id:
                    coeffs[pf] = coeffs.get(pf, 0.0) - case.s_base
                elif c.to_bus == b.id:
                    coeffs[pf] = coeffs.get(pf, 0.0) + case.s_base
            net = case.net_demand_forecast(b.id, d.id)
            if robust:
                tighten, relax = robust_margin(net, params)
                ir.add_row(f"balance[{b.id},{d.id}]", coeffs, GE,
                           net + tighten - relax)
            else:
                ir.add_row(f"balance[{b.id},{d.id}]", coeffs, EQ, net)

    return ir, vm


def _build_thermal_flows(case: CaseSystem, params: RobustParams, ir: ModelIR,
                         vm: VarMap, trig: TrigSegments, n_square_cuts: int,
                         big_m_log: dict[str, float]):
    """Per line and period: linearized AC flow, current, heat balance."""
    phi_omega = params.phi * params.omega
    if phi_omega >= 1.0:
        raise ModelBuildError(
            f"uncertainty level times quantile is {phi_omega:.3f} >= 1; "
            "the convection caps would go negative")
    i_base = case.current_base

    # One global convection big-M: headroom over the largest possible
    # governing film coefficient times the widest temperature spread.
    k_max = 0.0
    t_env_min = math.inf
    t_max_all = 0.0
    for d in case.periods:
        for c in case.lines:
            w = d.weather[c.id]
            coeffs = line_convection(c.conductor, w)
            k_max = max(k_max, coeffs.governing)
            t_env_min = min(t_env_min, w.ambient_temp)
            t_max_all = max(t_max_all, c.t_max)
    m_conv = k_max * (t_max_all - t_env_min) * 1.5
    if m_conv <= 0:
        raise ModelBuildError("convection big-M collapsed; check t_max "
                              "against ambient temperatures")
    big_m_log["convection_gate"] = m_conv

    fits: dict[tuple[float, float, float, float], RadiationLogFit] = {}
    sq_gaps: dict[str, float] = {}
    rad_bands: dict[str, float] = {}
    ir.metadata["certificates"]["square_gap_w_per_m"] = sq_gaps
    ir.metadata["certificates"]["radiation_band_w_per_m"] = rad_bands

    for d in case.periods:
        for c in case.lines:
            weather = d.weather[c.id]
            u = vm.line_built[c.id]
            key = (c.id, d.id)
            tag = f"{c.id},{d.id}"
            a_s = vm.angle[c.from_bus, d.id]
            a_r = vm.angle[c.to_bus, d.id]

            # Angle difference variable, constrained to the trig window.
            x = ir.add_variable(f"adiff[{tag}]", CONTINUOUS,
                                -trig.half_range, trig.half_range)
            vm.angle_diff[key] = x
            ir.add_row(f"adiff_def[{tag}]",
                       {x: 1.0, a_s: -1.0, a_r: 1.0}, EQ, 0.0)
            sel = trig.attach_cos_selection(ir, x, f"trig[{tag}]")
            vm.fragments[f"trig[{tag}]"] = sel.fragment

            # Linearized AC flow G*(1 - cos) + beta*sin of the angle
            # difference; with the cosine surrogate 1 + s*x - 2s*(l*x) the
            # constant part cancels, leaving a pure-variable expression.
            s_sin = trig.sin.slope
            s_cos = abs(trig.cos_pos.slope)
            ac_coeffs = {x: s_sin * c.susceptance - s_cos * c.conductance,
                         sel.side_times_x: 2.0 * s_cos * c.conductance}
            x_ac = _ac_flow_bound(c, trig)

            pf = ir.add_variable(f"flow[{tag}]", CONTINUOUS, -x_ac, x_ac)
            vm.flow[key] = pf
            if c.candidate:
                # pf = u * ac_flow via disjunction; u=0 leaves the window
                # rows on x but makes the line electrically absent.
                hi = {pf: 1.0, u: x_ac}
                lo = {pf: 1.0, u: -x_ac}
                for var, coef in ac_coeffs.items():
                    hi[var] = hi.get(var, 0.0) - coef
                    lo[var] = lo.get(var, 0.0) - coef
                ir.add_row(f"acflow_hi[{tag}]", hi, LE, x_ac)
                ir.add_row(f"acflow_lo[{tag}]", lo, GE, -x_ac)
                ir.add_row(f"accap_hi[{tag}]", {pf: 1.0, u: -x_ac}, LE, 0.0)
                ir.add_row(f"accap_lo[{tag}]", {pf: 1.0, u: x_ac}, GE, 0.0)
                big_m_log[f"acflow[{tag}].relax"] = x_ac
                ir.metadata["relax_rows"].append((f"acflow_hi[{tag}]", u))
                ir.metadata["relax_rows"].append((f"acflow_lo[{tag}]", u))
            else:
                row = {pf: 1.0}
                for var, coef in ac_coeffs.items():
                    row[var] = row.get(var, 0.0) - coef
                ir.add_row(f"acflow[{tag}]", row, EQ, 0.0)

            # Current proxy: an envelope over |pf| is exact here because the
            # heat balance only ever pushes the current downward, so no
            # direction binary is spent on the absolute value.
            cur = ir.add_variable(f"current[{tag}]", CONTINUOUS, 0.0, x_ac)
            ir.add_row(f"cur_over_fwd[{tag}]", {cur: 1.0, pf: -1.0}, GE, 0.0)
            ir.add_row(f"cur_over_rev[{tag}]", {cur: 1.0, pf: 1.0}, GE, 0.0)
            vm.current[key] = cur
            sq = gadget_square_cuts(ir, cur, x_ac, n_square_cuts,
                                    f"cur[{tag}]")
            vm.fragments[f"cursq[{tag}]"] = sq
            vm.current_sq[key] = sq.output
            c2 = c.resistance_per_meter * i_base * i_base   # W/m per (p.u.)^2
            sq_gaps[f"{c.id},{d.id}"] = c2 * sq.big_m["square_gap"]

            # Temperature, gated by the build binary.
            t_env = weather.ambient_temp
            temp = ir.add_variable(f"temp[{tag}]", CONTINUOUS, 0.0, c.t_max)
            vm.temperature[key] = temp
            if c.candidate:
                ir.add_row(f"tcap[{tag}]", {temp: 1.0, u: -c.t_max}, LE, 0.0)
                ir.add_row(f"tfloor[{tag}]", {temp: 1.0, u: -t_env}, GE, 0.0)
                tprod = gadget_binary_product(ir, u, temp, c.t_max,
                                              f"utemp[{tag}]")
                vm.fragments[f"utemp[{tag}]"] = tprod
                u_temp = {tprod.output: 1.0, u: -t_env}   # u*(T - T_env)
            else:
                ir.add_row(f"tfloor[{tag}]", {temp: 1.0}, GE, t_env)
                u_temp = {temp: 1.0}                       # T - T_env via rhs
            u_temp_rhs = 0.0 if c.candidate else t_env

            # Convection branches with robust caps and branch selection.
            coeffs = line_convection(c.conductor, weather)
            qc1 = ir.add_variable(f"conv1[{tag}]", CONTINUOUS, 0.0, m_conv)
            qc2 = ir.add_variable(f"conv2[{tag}]", CONTINUOUS, 0.0, m_conv)
            vm.conv_primary[key] = qc1
            vm.conv_secondary[key] = qc2
            for name, q, k in ((f"conv1cap[{tag}]", qc1, coeffs.k_prime),
                               (f"conv2cap[{tag}]", qc2, coeffs.k_double_prime)):
                scale = (1.0 - phi_omega) * k
                row = {q: 1.0}
                for var, coef in u_temp.items():
                    row[var] = row.get(var, 0.0) - scale * coef
                ir.add_row(name, row, LE, params.mu - scale * u_temp_rhs)
            select = gadget_convection_select(
                ir, coeffs.k_prime, coeffs.k_double_prime, qc1, qc2, m_conv,
                f"convsel[{tag}]")
            vm.fragments[f"convsel[{tag}]"] = select
            vm.conv_select[key] = select.output

            # Radiation through the log-domain link, gated by the binary.
            eps = c.conductor.emissivity
            kr = weather.radiation_coeff
            t_lo = min(273.0, t_env)
            t_hi = max(373.0, c.t_max)
            fit_key = (eps, kr, t_lo, t_hi)
            if fit_key not in fits:
                fits[fit_key] = radiation_log_fit(eps, kr, t_lo, t_hi)
            fit = fits[fit_key]
            rad_bands[f"{c.id},{d.id}"] = fit.band
            a_rad, b_rad = fit.link_coefficients(t_env)
            qrad_cap = max(0.0, a_rad * c.t_max + b_rad) + fit.band
            qrad = ir.add_variable(f"rad[{tag}]", CONTINUOUS, 0.0, qrad_cap)
            vm.radiation[key] = qrad
            if c.candidate:
                tprod_out = vm.fragments[f"utemp[{tag}]"].output
                ir.add_row(f"radcap[{tag}]",
                           {qrad: 1.0, tprod_out: -a_rad, u: -b_rad}, LE, 0.0)
            else:
                ir.add_row(f"radcap[{tag}]",
                           {qrad: 1.0, temp: -a_rad}, LE, b_rad)

            # Robust heat balance: ohmic plus the solar margin must fit in
            # the capped losses.  The solar constant rides the build binary
            # so an unbuilt line carries no balance.
            qs = weather.solar_gain
            solar_term = (qs + phi_omega * qs
                          - params.mu * max(1.0, abs(qs)))
            hbe = {sq.output: c2, qc1: -1.0, qc2: -1.0, qrad: -1.0}
            if c.candidate:
                hbe[u] = solar_term
                ir.add_row(f"hbe[{tag}]", hbe, LE, 0.0)
            else:
                ir.add_row(f"hbe[{tag}]", hbe, LE, -solar_term)


# ---------------------------------------------------------------------------
# Extraction and audits


@dataclass
class PlanResult:
    status: str
    mode: str
    objective: float | None = None
    added_lines: tuple[str, ...] = ()
    added_units: tuple[str, ...] = ()
    dispatch: dict[tuple[str, str], float] = field(default_factory=dict)
    flows: dict[tuple[str, str], float] = field(default_factory=dict)
    temperatures: dict[tuple[str, str], float] = field(default_factory=dict)
    audit: dict = field(default_factory=dict)

    @property
    def element_count(self) -> int:
        return len(self.added_lines) + len(self.added_units)

    @property
    def has_plan(self) -> bool:
        return self.objective is not None


def extract_plan(solution, varmap: VarMap, case: CaseSystem) -> PlanResult:
    """Decode a solver result into a plan, with integrality and cost audits.

    Binaries must sit within 1e-6 of an integer; the objective is recomputed
    from the case data (install costs plus dispatch cost over period
    durations) and must match the solver's value to 1e-6 relative.
    """
    ir = varmap.model
    mode = varmap.mode
    if solution.values is None:
        return PlanResult(status=solution.status, mode=mode)

    values = solution.values
    for v in ir.binaries():
        residual = abs(values[v.index] - round(values[v.index]))
        if residual > INTEGRALITY_TOL:
            raise ExtractionError(
                f"binary {v.name} is fractional ({values[v.index]!r}); "
                "solver tolerance problem")

    def chosen(var_id: int) -> bool:
        return values[var_id] >= 0.5

    added_lines = tuple(c.id for c in case.lines
                        if c.candidate and chosen(varmap.line_built[c.id]))
    added_units = tuple(g.id for g in case.generators
                        if g.candidate and chosen(varmap.unit_built[g.id]))

    dispatch = {k: float(values[i]) for k, i in varmap.dispatch.items()}
    flows = {k: float(values[i]) for k, i in varmap.flow.items()}
    temperatures = {k: float(values[i])
                    for k, i in varmap.temperature.items()}

    recomputed = 0.0
    for c in case.lines:
        if c.candidate and c.id in added_lines:
            recomputed += c.install_cost
    for g in case.generators:
        if g.candidate and g.id in added_units:
            recomputed += g.install_cost
    for d in case.periods:
        for g in case.generators:
            recomputed += dispatch[g.id, d.id] * g.op_cost * d.duration
    if solution.objective is not None:
        scale = max(1.0, abs(recomputed))
        if abs(recomputed - solution.objective) > OBJECTIVE_REL_TOL * scale:
            raise ExtractionError(
                f"objective recomputation {recomputed!r} disagrees with "
                f"solver value {solution.objective!r}")

    audit = {
        "big_m_log": dict(ir.metadata.get("big_m", {})),
        "certificates": ir.metadata.get("certificates", {}),
        "binding_relaxations": _binding_relaxations(ir, values),
    }
    return PlanResult(status=solution.status, mode=mode,
                      objective=recomputed, added_lines=added_lines,
                      added_units=added_units, dispatch=dispatch,
                      flows=flows, temperatures=temperatures, audit=audit)


def _binding_relaxations(ir: ModelIR, values) -> list[str]:
    """Relaxation rows that bind while their gating binary is off.

    A hit means the big-M window is actually constraining a disabled
    element — the bound was chosen too small for this instance.
    """
    hits = []
    by_name = {row.name: row for row in ir.rows}
    for row_name, binary_id in ir.metadata.get("relax_rows", []):
        if values[binary_id] >= 0.5:
            continue
        row = by_name[row_name]
        activity = ir.row_activity(row, values)
        if abs(activity - row.rhs) <= 1e-6 * (1.0 + abs(row.rhs)):
            hits.append(row_name)
    return hits


def hbe_residual_audit(plan: PlanResult, case: CaseSystem) -> dict[tuple[str, str], float]:
    """Signed nonlinear heat-balance residual at the plan's operating points.

    For every built line and period, evaluates gains minus losses of the
    exact physics (quadratic ohmic term, governing forced convection,
    quartic radiation) at the reported temperature and current.  Positive
    residuals mean the linear model admitted more heat than the physics
    removes; they must stay within :func:`hbe_certificate_bound`.
    """
    if plan.mode != "dtlr_robust":
        raise ExtractionError("heat-balance audit applies to dtlr_robust plans")
    built = set(plan.added_lines)
    residuals: dict[tuple[str, str], float] = {}
    i_base = case.current_base
    for d in case.periods:
        for c in case.lines:
            if c.candidate and c.id not in built:
                continue
            key = (c.id, d.id)
            temp = plan.temperatures[key]
            amps = abs(plan.flows[key]) * i_base
            weather = d.weather[c.id]
            coeffs = line_convection(c.conductor, weather)
            t_env = weather.ambient_temp
            gains = (amps * amps * c.resistance_per_meter
                     + weather.solar_gain)
            losses = (coeffs.governing * (temp - t_env)
                      + c.conductor.emissivity * weather.radiation_coeff
                      * (temp ** 4 - t_env ** 4))
            residuals[key] = gains - losses
    return residuals


def hbe_certificate_bound(case: CaseSystem, params: RobustParams,
                          n_square_cuts: int = DEFAULT_SQUARE_CUTS,
                          ) -> dict[tuple[str, str], float]:
    """Admissible positive heat-balance residual per line and period.

    Propagates the certified linearization errors through the balance: the
    square-cut undershoot on the ohmic term, the radiation-link band, and
    the two infeasibility-tolerance relaxations (one on the governing
    convection cap, one on the solar margin).  The robust tightening terms
    only push residuals down, so they are dropped from the bound.
    """
    trig = trig_segments(TRIG_WINDOW)
    i_base = case.current_base
    fits: dict[tuple[float, float, float, float], RadiationLogFit] = {}
    bounds: dict[tuple[str, str], float] = {}
    for d in case.periods:
        for c in case.lines:
            weather = d.weather[c.id]
            x_ac = _ac_flow_bound(c, trig)
            spacing = x_ac / (n_square_cuts - 1)
            c2 = c.resistance_per_meter * i_base * i_base
            sq_gap = c2 * (spacing / 2.0) ** 2
            eps = c.conductor.emissivity
            kr = weather.radiation_coeff
            t_lo = min(273.0, weather.ambient_temp)
            t_hi = max(373.0, c.t_max)
            fit_key = (eps, kr, t_lo, t_hi)
            if fit_key not in fits:
                fits[fit_key] = radiation_log_fit(eps, kr, t_lo, t_hi)
            qs = weather.solar_gain
            bounds[c.id, d.id] = (sq_gap + fits[fit_key].band
                                  + params.mu * (1.0 + max(1.0, abs(qs))))
    return bounds
