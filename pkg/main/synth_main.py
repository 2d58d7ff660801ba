"""
Main orchestrator: runs scenarios, classifies targets and verifies reports.

Entry points print status lines; library packages stay silent and raise.
"""
import argparse
import json
import os
import traceback
from dataclasses import dataclass, replace

import numpy as np
import pandas as pd

from mbqc.engine import nullifier_variances
from mbqc.parameterization import dof_balance, dof_lower_bound
from optimizer.evolution import multistart
from oracle.gaussian_oracle import DEFAULT_SIGMA, elimination_cross_check, mc_estimate, nullifier_covariance_check
from scenarios.builtins import baseline, builtin_names, cz_target, describe_builtins, fourier_target
from scenarios.problem import Objective
from scenarios.scenario_io import load_scenario, problem_digest, problem_from_dict, problem_to_dict
from symplectic.bloch_messiah import classify_trivial, TRIVIAL_TOL
from symplectic.core import QuadSymplectic
from utils.errors import EXIT_NUMERICAL, EXIT_OK, ParseError, SynthesisError, ValidationError, exit_code_for
from utils.file_utils import read_json_report, write_json_report, write_trace_csv
from utils.settings import load_settings

TOOL_VERSION = "1.0.0"


def _say(message, quiet):
    if not quiet:
        print(message)


@dataclass(eq=False)
class RunReport:
    problem: object
    digest: str
    trace: object
    evaluation: object
    noise_weight: float
    oracle: dict
    baseline: dict

    @property
    def f1(self):
        return self.evaluation.f1

    @property
    def f2(self):
        return self.evaluation.f2

    @property
    def f3(self):
        return self.evaluation.f3

    def nullifier_rows(self):
        return [
            {"node": index + 1, "absolute": entry.absolute, "shot_noise": entry.shot_noise,
             "relative": entry.relative}
            for index, entry in enumerate(self.evaluation.nullifiers)
        ]

    def nullifier_table(self):
        return pd.DataFrame(self.nullifier_rows(), columns=["node", "absolute", "shot_noise", "relative"])

    def to_dict(self):
        angles = self.evaluation.angles
        result = self.evaluation.result
        return {
            "tool_version": TOOL_VERSION,
            "problem_digest": self.digest,
            "units": "SN",
            "scenario": problem_to_dict(self.problem),
            "seed": self.trace.seed,
            "best_angles": {
                "phi": angles.phi.tolist(),
                "theta": angles.theta.tolist(),
                "flat": angles.flat().tolist(),
            },
            "fitness": {
                "objective": self.evaluation.value,
                "noise_weight": self.noise_weight,
                "f1": self.f1,
                "f2": self.f2,
                "f3": self.f3,
            },
            "mbqc_result": None if result is None else result.to_dict(),
            "nullifiers": self.nullifier_rows(),
            "trace": {"summary": self.trace.summary(), "records": self.trace.records()},
            "oracle": self.oracle,
            "baseline": self.baseline,
            "projection_residual": self.problem.projection_residual,
        }


def _oracle_cross_check(problem, evaluation):
    U_total = problem.total_unitary(evaluation.angles)
    if problem.objective.kind == "F3":
        propagated = nullifier_covariance_check(U_total, problem.squeezing, problem.objective.graph)
        analytic = np.array([entry.absolute for entry in evaluation.nullifiers])
        return {"method": "covariance propagation", "max_deviation": float(np.max(np.abs(propagated - analytic)))}
    check = elimination_cross_check(U_total, problem.n, problem.m, problem.input_positions, problem.squeezing)
    return {"method": "precision-form conditioning", "max_deviation": check["max_deviation"]}


def run_scenario(problem, threads=None, quiet=False):
    """
    Optimize a scenario and assemble its report.

    Args:
        problem: SynthesisProblem (optimizer settings and restarts taken from it)
        threads: Worker threads for fitness evaluation (defaults to the environment setting)
        quiet: Suppress status lines

    Returns:
        RunReport
    """
    if threads is None:
        threads = load_settings()["threads"]
    config = problem.optimizer.with_overrides(threads=threads)
    noise_weight = problem.effective_noise_weight(config.noise_weight)

    _say(f"Running {problem.name}: {problem.dimension} parameters, {problem.restarts} restart(s), "
         f"{config.generations} generations, seed {config.seed}", quiet)
    trace = multistart(problem, config, problem.restarts)
    for restart, (value, components) in enumerate(zip(trace.restart_values, trace.restart_components)):
        marker = "✅" if restart == trace.restart else "  "
        noise = f", f2 {components['f2']:.4f}" if components.get("f2") is not None else ""
        _say(f"{marker} restart {restart} (seed {config.seed + restart}): fitness {value:.3e}{noise}", quiet)

    evaluation = problem.evaluate(trace.best_x, noise_weight)
    oracle = _oracle_cross_check(problem, evaluation)
    if oracle["max_deviation"] > 1e-8:
        _say(f"⚠️ Oracle cross-check deviates by {oracle['max_deviation']:.3e}", quiet)

    return RunReport(
        problem=problem,
        digest=problem_digest(problem),
        trace=trace,
        evaluation=evaluation,
        noise_weight=noise_weight,
        oracle=oracle,
        baseline=baseline(problem),
    )


def apply_overrides(problem, seed=None, generations=None, population=None, restarts=None, noise_weight=None):
    """Return a copy of the problem with command-line overrides applied."""
    config = problem.optimizer.with_overrides(seed=seed, generations=generations, population=population)
    objective = problem.objective
    if noise_weight is not None:
        if objective.kind == "F3":
            raise ValidationError("a noise weight only applies to gate objectives (F1)")
        objective = Objective("F1_PLUS_WEIGHTED_F2", float(noise_weight))
        config = config.with_overrides(noise_weight=float(noise_weight))
    return replace(
        problem,
        optimizer=config,
        objective=objective,
        restarts=problem.restarts if restarts is None else restarts,
    )


def recompute_fitness(report):
    """
    Re-evaluate a report's stored angles.

    Returns:
        Tuple (stored objective value, recomputed value, problem)
    """
    problem = problem_from_dict(report["scenario"])
    stored = report["fitness"]
    evaluation = problem.evaluate(report["best_angles"]["flat"], stored.get("noise_weight") or 0.0)
    return stored["objective"], evaluation.value, problem


def _print_result(report, quiet):
    if quiet:
        return
    evaluation = report.evaluation
    if evaluation.result is not None:
        result = evaluation.result
        frame = pd.DataFrame({
            "noise_var_x": result.noise_var_x,
            "noise_var_p": result.noise_var_p,
        }, index=[f"output {i + 1}" for i in range(result.n)])
        print(f"f1 = {report.f1:.3e}, f2 = {report.f2:.4f}")
        print(frame.to_string())
    else:
        print(f"f3 = {report.f3:.4f}")
        print(report.nullifier_table().to_string(index=False))
    if report.baseline and report.baseline.get("computed"):
        print(f"Standard construction, same squeezing: {json.dumps(report.baseline['computed'])}")


def synth_command(scenario, out, seed=None, generations=None, population=None, restarts=None,
                  noise_weight=None, quiet=False):
    problem = apply_overrides(
        load_scenario(scenario), seed=seed, generations=generations, population=population,
        restarts=restarts, noise_weight=noise_weight,
    )
    report = run_scenario(problem, quiet=quiet)
    _print_result(report, quiet)
    path, backup = write_json_report(report.to_dict(), out)
    csv_path = write_trace_csv(report.trace.to_frame(), path)
    if backup:
        _say(f"⚠️ Previous report moved to {backup}", quiet)
    _say(f"✅ Report written to {path} (run log {csv_path})", quiet)
    return report


TARGET_ALIASES = {
    "fourier": fourier_target,
    "cz": cz_target,
    "identity1": lambda: QuadSymplectic(np.eye(2)),
    "identity2": lambda: QuadSymplectic(np.eye(4)),
}


def load_target(target):
    """
    Read a target symplectic from an alias, a {"symplectic": ...} file or a scenario file.
    """
    if target in TARGET_ALIASES and not os.path.exists(target):
        return TARGET_ALIASES[target]()
    if not os.path.exists(target):
        raise ParseError(f"target file {target} does not exist")
    with open(target, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as error:
            raise ParseError(f"invalid JSON: {error.msg}", line=error.lineno)
    if isinstance(data, dict) and isinstance(data.get("target"), dict):
        data = data["target"]
    if isinstance(data, dict):
        if "symplectic" not in data:
            raise ParseError("missing required field", field="symplectic")
        data = data["symplectic"]
    try:
        matrix = np.array(data, dtype=float)
    except (TypeError, ValueError):
        raise ParseError("expected a matrix of numbers", field="symplectic")
    return QuadSymplectic(matrix)


def classify_command(target, tol=TRIVIAL_TOL, quiet=False):
    """
    Classify a target as measurement-only (trivial) or ancilla-requiring.

    Returns:
        Classification report dictionary
    """
    S = load_target(target)
    outcome = classify_trivial(S, tol)
    report = {"classification": outcome.kind, "y_norm": outcome.y_norm, "n_modes": S.n_modes, "tol": tol}
    if outcome.kind == "Trivial":
        report.update({
            "O": outcome.O.tolist(),
            "R": np.diag(outcome.R).tolist(),
            "right_X": outcome.right.X.tolist(),
            "right_Y": outcome.right.Y.tolist(),
        })
        _say(f"✅ Trivial: realizable by measurement and post-processing alone (|Y| = {outcome.y_norm:.2e})", quiet)
        _say(f"O = {outcome.O.tolist()}\nR = {np.diag(outcome.R).tolist()}", quiet)
    else:
        required, available = dof_balance(S.n_modes, dof_lower_bound(S.n_modes))
        report.update({
            "m_min": dof_lower_bound(S.n_modes),
            "squeeze": outcome.factors.squeeze.tolist(),
            "dof_required": required,
            "dof_available_at_m_min": available,
        })
        _say(f"⚠️ RequiresAncillas: |Y| = {outcome.y_norm:.6f}, at least "
             f"{report['m_min']} ancilla(s) for a general {S.n_modes}-mode operation", quiet)
    return report


def verify_command(report_path, samples, seed=0, sigma=DEFAULT_SIGMA, quiet=False):
    """
    Recompute a report's fitness from its angles and regress Monte-Carlo samples.

    The Monte-Carlo check passes when every coefficient lies within the per-element
    limit that gives the whole report the false-alarm rate of one `sigma` test.

    Returns:
        Dictionary with 'fitness_match', 'z_scores', 'z_limit' and 'passed'
    """
    report = read_json_report(report_path)
    stored, recomputed, problem = recompute_fitness(report)
    match = stored == recomputed
    outcome = {"fitness_match": match, "stored": stored, "recomputed": recomputed, "z_scores": None, "z_limit": None}
    if match:
        _say(f"✅ Stored fitness {stored:.6e} recomputes identically", quiet)
    else:
        _say(f"❌ Stored fitness {stored!r} recomputes to {recomputed!r}", quiet)

    if problem.objective.kind != "F3":
        angles = report["best_angles"]["flat"]
        estimate = mc_estimate(problem, angles, samples, seed)
        analytic = problem.evaluate(angles).result
        z_scores = estimate.z_scores(analytic)
        limit = estimate.family_limit(sigma)
        outcome["z_scores"] = z_scores
        outcome["z_limit"] = limit
        if not quiet:
            print(pd.Series(z_scores, name="max |z|").to_string())
        worst = max(z_scores.values())
        if worst > limit:
            _say(f"⚠️ Monte-Carlo estimate deviates by {worst:.2f} standard errors (limit {limit:.2f})", quiet)
        else:
            _say(f"✅ Monte-Carlo regression within {limit:.2f} standard errors "
                 f"({sigma:g}σ over {estimate.compared_elements()} coefficients, {samples} samples)", quiet)
        outcome["passed"] = match and worst <= limit
    else:
        outcome["passed"] = match
    return outcome


def list_builtins_command(quiet=False):
    frame = pd.DataFrame(describe_builtins())
    _say(frame.to_string(index=False), quiet)
    return frame


def build_parser():
    parser = argparse.ArgumentParser(description="Direct measurement-based Gaussian gate synthesis")
    commands = parser.add_subparsers(dest="command", required=True)

    synth = commands.add_parser("synth", help="Optimize a scenario and write a report")
    synth.add_argument("--scenario", required=True, help=f"Scenario file or builtin ({', '.join(builtin_names())})")
    synth.add_argument("--seed", type=int)
    synth.add_argument("--generations", type=int)
    synth.add_argument("--population", type=int)
    synth.add_argument("--restarts", type=int)
    synth.add_argument("--noise-weight", type=float)
    synth.add_argument("--out", required=True, help="Report JSON path")

    classify = commands.add_parser("classify", help="Classify a target symplectic")
    classify.add_argument("--target", required=True, help="Target file or alias (fourier, cz, identity1, identity2)")
    classify.add_argument("--tol", type=float, default=TRIVIAL_TOL)

    verify = commands.add_parser("verify", help="Re-verify a report")
    verify.add_argument("--report", required=True)
    verify.add_argument("--samples", type=int, required=True)
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--sigma", type=float, default=DEFAULT_SIGMA,
                        help="Confidence of the whole Monte-Carlo check, in standard errors of a single test")

    commands.add_parser("list-builtins", help="List builtin scenarios")
    return parser


def main(argv=None):
    """
    Command-line entry point.

    Returns:
        Process exit code (0 success, 2 validation error, 3 numerical failure)
    """
    args = build_parser().parse_args(argv)
    try:
        if args.command == "synth":
            synth_command(
                args.scenario, args.out, seed=args.seed, generations=args.generations,
                population=args.population, restarts=args.restarts, noise_weight=args.noise_weight,
            )
        elif args.command == "classify":
            classify_command(args.target, args.tol)
        elif args.command == "verify":
            outcome = verify_command(args.report, args.samples, args.seed, sigma=args.sigma)
            if not outcome["passed"]:
                return EXIT_NUMERICAL
        else:
            list_builtins_command()
    except SynthesisError as e:
        print(f"❌ {type(e).__name__}: {e}")
        return exit_code_for(e)
    except Exception as e:
        print(f"❌ Error: {e}")
        traceback.print_exc()
        return exit_code_for(e)
    return EXIT_OK
