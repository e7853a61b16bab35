"""Model assembly, plan extraction and the heat-balance audits."""

from __future__ import annotations

import dataclasses

import pytest

from gridxpand import (RobustParams, SolveConfig, build_igtep, extract_plan,
                       external_solve, hbe_certificate_bound,
                       hbe_residual_audit, oracle_solve, robust_margin)
from gridxpand.builder import MODES, reference_bus
from gridxpand.errors import ExtractionError, ModelBuildError
from gridxpand.ir import EQ, GE
from support import (STANDARD_ROBUST, assert_row_equivalent, toy_case,
                     toy_dc_det_objective, toy_robust_objective)

ZERO_PROTECTION = RobustParams(phi=0.0, mu=0.0, reliability=0.05)


def solved_plan(case, params, mode):
    ir, vm = build_igtep(case, params, mode)
    solution = external_solve(ir, SolveConfig(time_limit=60.0))
    return extract_plan(solution, vm, case), ir, vm, solution


def stressed_case(*, with_weather: bool = True):
    """Toy variant whose optimum must build the candidate line."""
    case = toy_case(with_weather=with_weather, peak=150.0)
    gens = (dataclasses.replace(case.generators[0], p_max=200.0),
            case.generators[1])
    return dataclasses.replace(case, generators=gens)


class TestReferenceBus:
    def test_numeric_ids_sort_numerically(self):
        case = toy_case()
        buses = tuple(dataclasses.replace(case.buses[0], id=i,
                                          load_weight=w)
                      for i, w in (("10", 0.5), ("2", 0.5)))
        assert reference_bus(dataclasses.replace(case, buses=buses)) == "2"

    def test_alphabetic_fallback(self):
        case = toy_case()
        buses = tuple(dataclasses.replace(case.buses[0], id=i, load_weight=w)
                      for i, w in (("beta", 0.5), ("alpha", 0.5)))
        assert reference_bus(dataclasses.replace(case, buses=buses)) == "alpha"

    def test_numbers_beat_names(self):
        case = toy_case()
        buses = tuple(dataclasses.replace(case.buses[0], id=i, load_weight=w)
                      for i, w in (("zz", 0.5), ("7", 0.5)))
        assert reference_bus(dataclasses.replace(case, buses=buses)) == "7"


class TestBuildErrors:
    def test_unknown_mode(self):
        with pytest.raises(ModelBuildError, match="unknown mode"):
            build_igtep(toy_case(), None, "ac_opf")

    def test_robust_modes_need_params(self):
        for mode in ("dc_robust", "dtlr_robust"):
            with pytest.raises(ModelBuildError, match="robustness parameters"):
                build_igtep(toy_case(), None, mode)

    def test_thermal_mode_needs_weather(self):
        with pytest.raises(ModelBuildError, match="needs weather"):
            build_igtep(toy_case(with_weather=False), STANDARD_ROBUST,
                        "dtlr_robust")

    def test_invalid_case_rejected(self):
        case = toy_case()
        buses = (case.buses[0],
                 dataclasses.replace(case.buses[1], load_weight=0.5))
        with pytest.raises(ModelBuildError, match="fails validation"):
            build_igtep(dataclasses.replace(case, buses=buses), None, "dc_det")

    def test_excessive_uncertainty_rejected(self):
        params = RobustParams(phi=0.7, mu=0.01, reliability=0.05)
        with pytest.raises(ModelBuildError, match="convection caps"):
            build_igtep(toy_case(), params, "dtlr_robust")


class TestModelShape:
    def test_free_binary_counts(self):
        case = toy_case()
        for mode, params, expected in (("dc_det", None, 2),
                                       ("dc_robust", STANDARD_ROBUST, 2),
                                       ("dtlr_robust", STANDARD_ROBUST, 6)):
            ir, _ = build_igtep(case, params, mode)
            assert len(ir.free_binaries()) == expected, mode

    def test_metadata_records_mode_and_big_m(self):
        ir, _ = build_igtep(toy_case(), None, "dc_det")
        assert ir.metadata["mode"] == "dc_det"
        assert "robust" not in ir.metadata
        assert "switch[L,p1].ohm_relax" in ir.metadata["big_m"]

    def test_metadata_records_certificates(self):
        ir, _ = build_igtep(toy_case(), STANDARD_ROBUST, "dtlr_robust")
        assert ir.metadata["robust"]["omega"] == STANDARD_ROBUST.omega
        certs = ir.metadata["certificates"]
        assert certs["trig"]["cos_max_rel_err"] < 0.05
        assert set(certs["square_gap_w_per_m"]) == {"E,p1", "L,p1"}
        assert set(certs["radiation_band_w_per_m"]) == {"E,p1", "L,p1"}

    def test_angle_diff_window(self):
        ir, vm = build_igtep(toy_case(), STANDARD_ROBUST, "dtlr_robust")
        x = ir.variables[vm.angle_diff["E", "p1"]]
        assert (x.lower, x.upper) == (-0.6, 0.6)

    def test_weather_optional_outside_thermal_mode(self):
        ir, _ = build_igtep(toy_case(with_weather=False), None, "dc_det")
        assert ir.num_variables > 0


class TestRobustReduction:
    def test_zero_protection_matches_deterministic_rows(self):
        case = toy_case()
        det_ir, _ = build_igtep(case, None, "dc_det")
        rob_ir, _ = build_igtep(case, ZERO_PROTECTION, "dc_robust")
        assert_row_equivalent(det_ir, rob_ir)

    def test_balance_sense_is_the_only_difference(self):
        case = toy_case()
        det_ir, _ = build_igtep(case, None, "dc_det")
        rob_ir, _ = build_igtep(case, ZERO_PROTECTION, "dc_robust")
        det_senses = {r.name: r.sense for r in det_ir.rows}
        for row in rob_ir.rows:
            if row.name.startswith("balance"):
                assert row.sense == GE and det_senses[row.name] == EQ
            else:
                assert row.sense == det_senses[row.name]

    def test_balance_rhs_uses_robust_margin(self):
        case = toy_case()
        ir, _ = build_igtep(case, STANDARD_ROBUST, "dc_robust")
        rows = {r.name: r for r in ir.rows}
        for bus_id in ("1", "2"):
            net = case.net_demand_forecast(bus_id, "p1")
            tighten, relax = robust_margin(net, STANDARD_ROBUST)
            assert rows[f"balance[{bus_id},p1]"].rhs == net + tighten - relax


class TestPlanExtraction:
    def test_deterministic_toy_plan(self):
        plan, _, _, _ = solved_plan(toy_case(), None, "dc_det")
        assert plan.status == "optimal"
        assert plan.objective == pytest.approx(toy_dc_det_objective(),
                                               rel=1e-9)
        assert plan.added_units == ("U1",)
        assert plan.added_lines == ()
        assert plan.element_count == 1
        assert plan.has_plan
        assert plan.dispatch["EG", "p1"] == pytest.approx(80.0)
        assert plan.flows["E", "p1"] == pytest.approx(0.8)

    def test_robust_toy_plan(self):
        plan, _, _, _ = solved_plan(toy_case(), STANDARD_ROBUST, "dc_robust")
        assert plan.objective == pytest.approx(
            toy_robust_objective(STANDARD_ROBUST), rel=1e-9)

    def test_candidate_line_built_when_needed(self):
        plan, _, _, _ = solved_plan(stressed_case(), None, "dc_det")
        assert plan.added_lines == ("L",)
        assert plan.added_units == ()
        assert plan.objective == pytest.approx(5e5 + 150.0 * 10.0 * 100.0)
        assert plan.flows["E", "p1"] == pytest.approx(0.75)
        assert plan.flows["L", "p1"] == pytest.approx(0.75)

    def test_unbuilt_candidate_is_electrically_absent(self):
        plan, _, _, _ = solved_plan(toy_case(), None, "dc_det")
        assert plan.flows["L", "p1"] == pytest.approx(0.0, abs=1e-9)

    def test_infeasible_solution_gives_empty_plan(self):
        case = toy_case(peak=1000.0)   # far beyond all capacity
        plan, _, _, _ = solved_plan(case, None, "dc_det")
        assert plan.status == "infeasible"
        assert not plan.has_plan
        assert plan.objective is None
        assert plan.dispatch == {}

    def test_fractional_binary_rejected(self):
        case = toy_case()
        ir, vm = build_igtep(case, None, "dc_det")
        solution = external_solve(ir)
        solution.values[vm.line_built["L"]] = 0.4
        with pytest.raises(ExtractionError, match="fractional"):
            extract_plan(solution, vm, case)

    def test_objective_mismatch_rejected(self):
        case = toy_case()
        ir, vm = build_igtep(case, None, "dc_det")
        solution = external_solve(ir)
        solution.objective += 50.0
        with pytest.raises(ExtractionError, match="disagrees"):
            extract_plan(solution, vm, case)

    def test_no_binding_relaxations_on_sound_toy(self):
        plan, _, _, _ = solved_plan(toy_case(), None, "dc_det")
        assert plan.audit["binding_relaxations"] == []
        assert "switch[L,p1].ohm_relax" in plan.audit["big_m_log"]


class TestThermalPlans:
    def test_toy_thermal_matches_robust_dc(self):
        plan, _, _, _ = solved_plan(toy_case(), STANDARD_ROBUST, "dtlr_robust")
        # Neither the static limit nor the thermal cap binds at this peak,
        # so the rating machinery must not move the optimum.
        assert plan.objective == pytest.approx(
            toy_robust_objective(STANDARD_ROBUST), rel=1e-8)

    def test_temperatures_within_physical_range(self):
        case = toy_case()
        plan, _, _, _ = solved_plan(case, STANDARD_ROBUST, "dtlr_robust")
        temp = plan.temperatures["E", "p1"]
        weather = case.period("p1").weather["E"]
        assert weather.ambient_temp <= temp <= case.line("E").t_max
        # the unbuilt candidate's temperature is gated to zero
        assert plan.temperatures["L", "p1"] == pytest.approx(0.0, abs=1e-7)

    def test_residuals_within_certificate(self):
        case = stressed_case()
        plan, _, _, _ = solved_plan(case, STANDARD_ROBUST, "dtlr_robust")
        assert plan.added_lines == ("L",)
        residuals = hbe_residual_audit(plan, case)
        bounds = hbe_certificate_bound(case, STANDARD_ROBUST)
        assert set(residuals) == {("E", "p1"), ("L", "p1")}
        for key, residual in residuals.items():
            assert residual <= bounds[key] + 1e-9, key

    def test_audit_skips_unbuilt_lines(self):
        case = toy_case()
        plan, _, _, _ = solved_plan(case, STANDARD_ROBUST, "dtlr_robust")
        assert set(hbe_residual_audit(plan, case)) == {("E", "p1")}

    def test_audit_requires_thermal_mode(self):
        case = toy_case()
        plan, _, _, _ = solved_plan(case, None, "dc_det")
        with pytest.raises(ExtractionError, match="dtlr_robust"):
            hbe_residual_audit(plan, case)

    def test_oracle_confirms_external_on_thermal_toy(self):
        case = toy_case()
        ir, vm = build_igtep(case, STANDARD_ROBUST, "dtlr_robust")
        ext = external_solve(ir, SolveConfig(time_limit=60.0))
        orc = oracle_solve(ir, SolveConfig(backend="oracle", time_limit=60.0))
        assert ext.status == orc.status == "optimal"
        assert orc.objective == pytest.approx(ext.objective, rel=1e-6)


class TestModes:
    def test_mode_tuple_is_public_contract(self):
        assert MODES == ("dc_det", "dc_robust", "dtlr_robust")
