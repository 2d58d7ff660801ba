"""
Scenario files: JSON documents mirroring SynthesisProblem.

Layout (all physical quantities in shot-noise units):

    {
      "name": "...", "description": "...", "units": "SN",
      "n": 1, "m": 3,
      "U_T": {"real": [[...]], "imag": [[...]]},
      "project_unitary": false,
      "fixed_premultiplier": {"real": [...], "imag": [...]} | null,
      "input_positions": [4],                  # 1-based IN slots
      "squeezing": [{"db": -7}, {"r": 0.79}, {"variance": 0.2}],
      "target": {"symplectic": [[...]]} | null,
      "objective": {"kind": "F1" | "F1_PLUS_WEIGHTED_F2" | "F3", "weight": 0.0,
                    "graph": "linear" | [[...]]},
      "optimizer": {"population": null, "generations": 5000, "sigma0": 0.3,
                    "seed": 1, "noise_weight": 0.0},
      "restarts": 4,
      "rotation_plan": [[3, 0], ...]           # optional, 0-based mode pairs
    }
"""
import hashlib
import json
import os

import numpy as np

from mbqc.engine import ClusterGraph, SqueezingSpec, db_to_variance, r_to_variance
from mbqc.parameterization import RotationPlan
from optimizer.evolution import OptimizerConfig
from scenarios.builtins import BUILTINS, builtin_problem, project_to_unitary
from scenarios.problem import Objective, SynthesisProblem
from symplectic.core import ModeUnitary, QuadSymplectic
from utils.errors import ParseError, SynthesisError, ValidationError

SQUEEZING_UNITS = {"db": db_to_variance, "r": r_to_variance, "variance": float}


def _field(data, key, path, required=True, default=None):
    if key not in data:
        if required:
            raise ParseError("missing required field", field=f"{path}{key}")
        return default
    return data[key]


def _real_matrix(value, field):
    try:
        matrix = np.array(value, dtype=float)
    except (TypeError, ValueError):
        raise ParseError("expected a matrix of numbers", field=field)
    if matrix.ndim != 2:
        raise ParseError(f"expected a 2-D row-major matrix, got {matrix.ndim} dimensions", field=field)
    return matrix


def _complex_matrix(value, field):
    if not isinstance(value, dict):
        raise ParseError("expected an object with 'real' and 'imag' arrays", field=field)
    real = _real_matrix(_field(value, "real", f"{field}."), f"{field}.real")
    imag = value.get("imag")
    imag = np.zeros_like(real) if imag is None else _real_matrix(imag, f"{field}.imag")
    if imag.shape != real.shape:
        raise ParseError(f"real part {real.shape} and imaginary part {imag.shape} differ", field=field)
    return real + 1j * imag


def _complex_vector(value, field):
    if not isinstance(value, dict):
        raise ParseError("expected an object with 'real' and 'imag' arrays", field=field)
    try:
        real = np.array(_field(value, "real", f"{field}."), dtype=float).reshape(-1)
        imag = np.array(value.get("imag", np.zeros_like(real)), dtype=float).reshape(-1)
    except (TypeError, ValueError):
        raise ParseError("expected arrays of numbers", field=field)
    if real.shape != imag.shape:
        raise ParseError("real and imaginary parts differ in length", field=field)
    return real + 1j * imag


def _squeezing(entries):
    if not isinstance(entries, list):
        raise ParseError("expected a list of squeezing entries", field="squeezing")
    source = []
    for index, entry in enumerate(entries):
        field = f"squeezing[{index}]"
        if not isinstance(entry, dict):
            raise ParseError("expected an object such as {\"db\": -7}", field=field)
        units = [unit for unit in entry if unit in SQUEEZING_UNITS]
        if len(units) != 1 or len(entry) != 1:
            raise ParseError("give exactly one of 'db', 'r' or 'variance'", field=field)
        unit = units[0]
        try:
            source.append((unit, float(entry[unit])))
        except (TypeError, ValueError):
            raise ParseError("squeezing level must be a number", field=field)
    variances = [SQUEEZING_UNITS[unit](value) for unit, value in source]
    return SqueezingSpec(variances), tuple(source)


def _objective(data):
    if data is None:
        return Objective("F1")
    kind = _field(data, "kind", "objective.")
    weight = float(data.get("weight", 0.0))
    graph = data.get("graph")
    if graph is None:
        return Objective(kind, weight)
    if isinstance(graph, str):
        size = data.get("nodes", 4)
        return Objective(kind, weight, ClusterGraph.named(graph, int(size)))
    return Objective(kind, weight, ClusterGraph(_real_matrix(graph, "objective.graph")))


def _optimizer(data):
    data = data or {}
    known = {"population", "generations", "sigma0", "seed", "noise_weight"}
    unknown = set(data) - known
    if unknown:
        raise ParseError(f"unknown optimizer settings {sorted(unknown)}", field="optimizer")
    return OptimizerConfig(**{key: value for key, value in data.items() if value is not None})


def problem_from_dict(data):
    """
    Build a validated SynthesisProblem from a parsed scenario document.

    Raises:
        ParseError for structural problems, ValidationError for broken invariants
    """
    if not isinstance(data, dict):
        raise ParseError("scenario must be a JSON object")
    units = data.get("units", "SN")
    if units != "SN":
        raise ParseError(f"unsupported unit system {units!r}, expected 'SN'", field="units")

    n = int(_field(data, "n", ""))
    m = int(_field(data, "m", ""))
    raw = _complex_matrix(_field(data, "U_T", ""), "U_T")
    project = bool(data.get("project_unitary", False))
    residual = 0.0
    if raw.shape[0] != raw.shape[1] or raw.shape[0] != n + m:
        raise ValidationError(f"N = n + m violated: U_T is {raw.shape}, n + m = {n + m}")
    if project:
        unitary, residual = project_to_unitary(raw)
    else:
        unitary = ModeUnitary(raw)

    premultiplier = data.get("fixed_premultiplier")
    if premultiplier is not None:
        premultiplier = _complex_vector(premultiplier, "fixed_premultiplier")

    positions = _field(data, "input_positions", "", required=False, default=[])
    if not isinstance(positions, list) or not all(isinstance(p, int) for p in positions):
        raise ParseError("expected a list of 1-based integer slots", field="input_positions")
    if any(position < 1 for position in positions):
        raise ValidationError(f"input positions are 1-based, got {positions}")

    squeezing, squeezing_source = _squeezing(_field(data, "squeezing", ""))

    target = data.get("target")
    if target is not None:
        target = QuadSymplectic(_real_matrix(_field(target, "symplectic", "target."), "target.symplectic"))

    plan = data.get("rotation_plan")
    if plan is not None:
        plan = RotationPlan(n + m, tuple(tuple(pair) for pair in plan))

    return SynthesisProblem(
        name=str(data.get("name", "scenario")),
        description=str(data.get("description", "")),
        n=n,
        m=m,
        U_T=unitary,
        U_T_raw=raw if project else None,
        projection_residual=residual,
        fixed_premultiplier=premultiplier,
        input_positions=tuple(position - 1 for position in positions),
        squeezing=squeezing,
        squeezing_source=squeezing_source,
        target=target,
        objective=_objective(data.get("objective")),
        optimizer=_optimizer(data.get("optimizer")),
        restarts=int(data.get("restarts", 1)),
        plan=plan,
    )


def problem_to_dict(problem):
    """Scenario document for a problem; load(save(problem)) reproduces every entry bit for bit."""
    matrix = problem.U_T_raw if problem.U_T_raw is not None else problem.U_T.matrix
    if problem.squeezing_source is not None:
        squeezing = [{unit: value} for unit, value in problem.squeezing_source]
    else:
        squeezing = [{"variance": float(value)} for value in problem.squeezing.variances]

    objective = {"kind": problem.objective.kind, "weight": problem.objective.weight}
    if problem.objective.graph is not None:
        objective["graph"] = problem.objective.graph.V.tolist()

    document = {
        "name": problem.name,
        "description": problem.description,
        "units": "SN",
        "n": problem.n,
        "m": problem.m,
        "U_T": {"real": matrix.real.tolist(), "imag": matrix.imag.tolist()},
        "project_unitary": problem.U_T_raw is not None,
        "fixed_premultiplier": None,
        "input_positions": [position + 1 for position in problem.input_positions],
        "squeezing": squeezing,
        "target": None if problem.target is None else {"symplectic": problem.target.matrix.tolist()},
        "objective": objective,
        "optimizer": problem.optimizer.to_dict(),
        "restarts": problem.restarts,
        "rotation_plan": [list(pair) for pair in problem.plan.pairs],
    }
    if problem.fixed_premultiplier is not None:
        document["fixed_premultiplier"] = {
            "real": problem.fixed_premultiplier.real.tolist(),
            "imag": problem.fixed_premultiplier.imag.tolist(),
        }
    return document


def problem_digest(problem):
    """sha256 of the canonical scenario document."""
    canonical = json.dumps(problem_to_dict(problem), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def parse_scenario_text(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise ParseError(f"invalid JSON: {error.msg} (column {error.colno})", line=error.lineno)
    try:
        return problem_from_dict(data)
    except SynthesisError:
        raise
    except (TypeError, ValueError) as error:
        raise ParseError(str(error))


def load_scenario(path):
    """
    Load a scenario from a file path or a builtin name.

    Args:
        path: JSON file path, or the name of a builtin scenario

    Returns:
        SynthesisProblem
    """
    if path in BUILTINS and not os.path.exists(path):
        return builtin_problem(path)
    if not os.path.exists(path):
        raise ParseError(f"scenario file {path} does not exist")
    with open(path, "r", encoding="utf-8") as handle:
        return parse_scenario_text(handle.read())


def save_scenario(problem, path):
    """Write a scenario document; returns the path written."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    with open(path, "w", encoding="utf-8") as handle:
        json.dump(problem_to_dict(problem), handle, indent=2)
        handle.write("\n")
    return path
