"""Single planning runs and peak-demand sweeps.

A sweep evaluates every (peak, mode) pair independently — by design it
keeps going past infeasible rows, because the infeasibility onset is itself
the result being studied.  Rows run in a process pool; each worker rescales
the case, builds, solves and extracts on its own copy, so a crash or solver
failure is recorded in that row and never aborts the sweep.

Result documents are plain data with sorted keys and no timestamps or
runtimes, so identical inputs and backend give byte-identical files.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .builder import (MODES, PlanResult, build_igtep, extract_plan,
                      hbe_certificate_bound, hbe_residual_audit)
from .network import CaseSystem, scale_to_peak
from .solve import SolveConfig, solve
from .uncertainty import RobustParams

DISPLAY_COST_UNIT = 1e7            # tables print $ x 10^7


def run_plan(case: CaseSystem, params: RobustParams | None, mode: str,
             config: SolveConfig | None = None) -> PlanResult:
    """Build, solve and extract one case in one mode.

    For thermal-rating plans the nonlinear heat-balance audit runs
    automatically and lands in ``plan.audit["hbe"]`` next to the certified
    residual bound.
    """
    config = config if config is not None else SolveConfig()
    ir, vm = build_igtep(case, params, mode)
    solution = solve(ir, config)
    plan = extract_plan(solution, vm, case)
    plan.audit["backend"] = config.backend
    plan.audit["runtime_s"] = solution.runtime
    if mode == "dtlr_robust" and plan.has_plan:
        residuals = hbe_residual_audit(plan, case)
        bounds = hbe_certificate_bound(case, params)
        plan.audit["hbe"] = {
            "residuals_w_per_m": {f"{c},{d}": r
                                  for (c, d), r in sorted(residuals.items())},
            "bounds_w_per_m": {f"{c},{d}": bounds[c, d]
                               for (c, d) in sorted(residuals)},
            "max_residual_w_per_m": max(residuals.values(), default=0.0),
            "worst_margin_w_per_m": min(
                (bounds[k] - r for k, r in residuals.items()), default=0.0),
        }
    return plan


def plan_document(plan: PlanResult) -> dict:
    """JSON-ready rendering of a plan; deterministic for identical solves."""
    doc = {
        "status": plan.status,
        "mode": plan.mode,
        "objective": plan.objective,
        "added_lines": list(plan.added_lines),
        "added_units": list(plan.added_units),
        "element_count": plan.element_count,
        "dispatch_mw": {f"{g},{d}": v
                        for (g, d), v in sorted(plan.dispatch.items())},
        "flows_pu": {f"{c},{d}": v
                     for (c, d), v in sorted(plan.flows.items())},
    }
    if plan.temperatures:
        doc["temperatures_k"] = {f"{c},{d}": v
                                 for (c, d), v in sorted(plan.temperatures.items())}
    audit = {k: v for k, v in plan.audit.items() if k != "runtime_s"}
    doc["audit"] = audit
    return doc


def plan_table(plan: PlanResult) -> str:
    lines = [f"mode:       {plan.mode}",
             f"status:     {plan.status}"]
    if plan.has_plan:
        lines += [
            f"added lines: {', '.join(plan.added_lines) or '-'}",
            f"added units: {', '.join(plan.added_units) or '-'}",
            f"elements:    {plan.element_count}",
            f"objective:   {plan.objective / DISPLAY_COST_UNIT:.3f} ($ x 10^7)",
        ]
        hbe = plan.audit.get("hbe")
        if hbe is not None:
            lines.append(f"max HBE residual: "
                         f"{hbe['max_residual_w_per_m']:.4f} W/m "
                         f"(certified headroom "
                         f"{hbe['worst_margin_w_per_m']:.4f})")
        if plan.audit.get("binding_relaxations"):
            lines.append("WARNING: big-M relaxations binding: "
                         + ", ".join(plan.audit["binding_relaxations"]))
    return "\n".join(lines)


@dataclass(frozen=True)
class SweepSpec:
    """Peaks to test (strictly increasing MW) in each listed mode."""

    peaks: tuple[float, ...]
    modes: tuple[str, ...]

    def __post_init__(self):
        if not self.peaks:
            raise ValueError("sweep needs at least one peak")
        if any(b <= a for a, b in zip(self.peaks, self.peaks[1:])):
            raise ValueError(f"peaks must be strictly increasing: {self.peaks}")
        if any(p <= 0 for p in self.peaks):
            raise ValueError("peaks must be positive MW values")
        if not self.modes:
            raise ValueError("sweep needs at least one mode")
        for mode in self.modes:
            if mode not in MODES:
                raise ValueError(f"unknown mode {mode!r}, expected one of {MODES}")


def _sweep_row(case: CaseSystem, params: RobustParams | None, mode: str,
               peak: float, config: SolveConfig) -> dict:
    row = {"peak_mw": peak, "mode": mode}
    try:
        plan = run_plan(scale_to_peak(case, peak), params, mode, config)
    except Exception as exc:   # isolate failures to the row
        row.update(status="error", error=f"{type(exc).__name__}: {exc}",
                   objective=None, added_lines=[], added_units=[],
                   element_count=0)
        return row
    row.update(status=plan.status, objective=plan.objective,
               added_lines=list(plan.added_lines),
               added_units=list(plan.added_units),
               element_count=plan.element_count)
    return row


def run_sweep(case: CaseSystem, params: RobustParams | None, spec: SweepSpec,
              config: SolveConfig | None = None, *,
              parallel: bool = True) -> list[dict]:
    """One row per (peak, mode); infeasible and failed rows included.

    Rows are solved in worker processes when ``parallel`` is set; the
    returned order is always peaks-outer, modes-inner regardless.
    """
    config = config if config is not None else SolveConfig()
    jobs = [(peak, mode) for peak in spec.peaks for mode in spec.modes]
    if not parallel or len(jobs) == 1:
        return [_sweep_row(case, params, mode, peak, config)
                for peak, mode in jobs]
    workers = min(len(jobs), os.cpu_count() or 1)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_sweep_row, case, params, mode, peak, config)
                   for peak, mode in jobs]
        return [f.result() for f in futures]


def sweep_table(rows: list[dict]) -> str:
    header = (f"{'Peak MW':>8}  {'Mode':<12} {'Added lines':<22} "
              f"{'Added units':<26} {'N':>3}  {'Cost ($x10^7)':>13}")
    out = [header, "-" * len(header)]
    for row in rows:
        if row["objective"] is not None:
            cost = f"{row['objective'] / DISPLAY_COST_UNIT:.3f}"
        elif row["status"] == "infeasible":
            cost = "Infeasible"
        else:
            cost = row["status"]
        out.append(f"{row['peak_mw']:>8.0f}  {row['mode']:<12} "
                   f"{', '.join(row['added_lines']) or '-':<22} "
                   f"{', '.join(row['added_units']) or '-':<26} "
                   f"{row['element_count']:>3}  {cost:>13}")
    return "\n".join(out)


def write_document(doc, path: str | Path) -> None:
    """Stable JSON: sorted keys, fixed separators, trailing newline."""
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
