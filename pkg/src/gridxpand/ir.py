"""Solver-agnostic container for mixed-integer linear programs.

A :class:`ModelIR` is a plain in-memory description of a minimization MILP:
variables with bounds and a kind (continuous or binary), sparse linear rows
with a sense, and a sparse linear objective.  Backends in :mod:`.solve`
translate it; nothing in here knows about any particular solver.

Construction is incremental through ``add_variable`` / ``add_row``.  Once a
model has been handed to a solver it should be treated as frozen; builders
never mutate rows they have already emitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

CONTINUOUS = "continuous"
BINARY = "binary"
KINDS = (CONTINUOUS, BINARY)

LE = "<="
GE = ">="
EQ = "="
SENSES = (LE, GE, EQ)


@dataclass(frozen=True)
class Variable:
    index: int
    name: str
    kind: str
    lower: float
    upper: float

    @property
    def is_fixed(self) -> bool:
        return self.lower == self.upper


@dataclass(frozen=True)
class Row:
    index: int
    name: str
    coeffs: dict[int, float]
    sense: str
    rhs: float


class ModelIR:
    """Incrementally built MILP in sparse row form."""

    def __init__(self, name: str = "model", metadata: dict | None = None):
        self.name = name
        self.variables: list[Variable] = []
        self.rows: list[Row] = []
        self.objective: dict[int, float] = {}
        self.metadata: dict = metadata if metadata is not None else {}
        self._var_index: dict[str, int] = {}
        self._row_index: dict[str, int] = {}

    # -- construction -----------------------------------------------------

    def add_variable(self, name: str, kind: str = CONTINUOUS,
                     lower: float = -math.inf, upper: float = math.inf) -> int:
        if kind not in KINDS:
            raise ValueError(f"unknown variable kind {kind!r}")
        if name in self._var_index:
            raise ValueError(f"duplicate variable name {name!r}")
        if kind == BINARY:
            # Binary bounds may be tightened (fixed existing elements) but
            # never widened beyond the unit interval.
            if lower == -math.inf:
                lower = 0.0
            if upper == math.inf:
                upper = 1.0
            if not (0.0 <= lower <= upper <= 1.0):
                raise ValueError(
                    f"binary variable {name!r} must have bounds within [0, 1], "
                    f"got [{lower}, {upper}]")
        elif lower > upper:
            raise ValueError(f"variable {name!r} has empty bound interval "
                             f"[{lower}, {upper}]")
        index = len(self.variables)
        self.variables.append(Variable(index, name, kind, float(lower), float(upper)))
        self._var_index[name] = index
        return index

    def add_row(self, name: str, coeffs: dict[int, float], sense: str, rhs: float) -> int:
        if sense not in SENSES:
            raise ValueError(f"unknown row sense {sense!r}")
        if name in self._row_index:
            raise ValueError(f"duplicate row name {name!r}")
        clean = {}
        for var, coef in coeffs.items():
            if not (0 <= var < len(self.variables)):
                raise ValueError(f"row {name!r} references unknown variable id {var}")
            if coef != 0.0:
                clean[int(var)] = float(coef)
        index = len(self.rows)
        self.rows.append(Row(index, name, clean, sense, float(rhs)))
        self._row_index[name] = index
        return index

    def add_objective_term(self, var: int, coef: float) -> None:
        if not (0 <= var < len(self.variables)):
            raise ValueError(f"objective references unknown variable id {var}")
        if coef == 0.0:
            return
        self.objective[var] = self.objective.get(var, 0.0) + float(coef)

    # -- queries ----------------------------------------------------------

    def variable(self, name: str) -> Variable:
        return self.variables[self._var_index[name]]

    @property
    def num_variables(self) -> int:
        return len(self.variables)

    @property
    def num_rows(self) -> int:
        return len(self.rows)

    def binaries(self) -> list[Variable]:
        return [v for v in self.variables if v.kind == BINARY]

    def free_binaries(self) -> list[Variable]:
        """Binary variables whose value is not already pinned by bounds."""
        return [v for v in self.variables if v.kind == BINARY and not v.is_fixed]

    def variables_in_use(self) -> set[int]:
        used = set(self.objective)
        for row in self.rows:
            used.update(row.coeffs)
        return used

    def evaluate_objective(self, values) -> float:
        return sum(coef * values[var] for var, coef in self.objective.items())

    def row_activity(self, row: Row, values) -> float:
        return sum(coef * values[var] for var, coef in row.coeffs.items())

    # -- export -----------------------------------------------------------

    def to_lp_text(self) -> str:
        """Render the model in LP text format (CPLEX dialect subset)."""
        def ident(raw: str) -> str:
            out = []
            for ch in raw:
                out.append(ch if ch.isalnum() or ch in "_." else "_")
            text = "".join(out)
            if not text or text[0].isdigit():
                text = "v_" + text
            return text

        vnames = [ident(v.name) for v in self.variables]
        seen: dict[str, int] = {}
        for i, nm in enumerate(vnames):
            if nm in seen:
                vnames[i] = f"{nm}__{i}"
            seen[vnames[i]] = i

        def terms(coeffs: dict[int, float]) -> str:
            if not coeffs:
                return "0 " + (vnames[0] if vnames else "x0")
            parts = []
            for var in sorted(coeffs):
                coef = coeffs[var]
                sign = "-" if coef < 0 else "+"
                parts.append(f"{sign} {abs(coef):.17g} {vnames[var]}")
            text = " ".join(parts)
            return text[2:] if text.startswith("+ ") else text

        lines = [f"\\ {self.name}", "Minimize", f" obj: {terms(self.objective)}"]
        lines.append("Subject To")
        sense_txt = {LE: "<=", GE: ">=", EQ: "="}
        for row in self.rows:
            lines.append(f" {ident(row.name)}: {terms(row.coeffs)} "
                         f"{sense_txt[row.sense]} {row.rhs:.17g}")
        lines.append("Bounds")
        for v in self.variables:
            nm = vnames[v.index]
            lo = "-inf" if v.lower == -math.inf else f"{v.lower:.17g}"
            hi = "+inf" if v.upper == math.inf else f"{v.upper:.17g}"
            lines.append(f" {lo} <= {nm} <= {hi}")
        bins = [vnames[v.index] for v in self.binaries()]
        if bins:
            lines.append("Binaries")
            lines.append(" " + " ".join(bins))
        lines.append("End")
        return "\n".join(lines) + "\n"


@dataclass
class GadgetFragment:
    """What a linearization gadget added to a model.

    ``output`` is the variable that carries the gadget's value (the product,
    the magnitude, ...); gadgets that only constrain existing variables set it
    to that variable.  ``big_m`` records every bound constant the gadget baked
    into a row, keyed by a short role name, so the choice can be audited after
    a solve.
    """

    variables: tuple[int, ...]
    rows: tuple[int, ...]
    output: int
    big_m: dict = field(default_factory=dict)
