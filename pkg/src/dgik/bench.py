"""Benchmark harness: seeded trial generation, execution, and reporting.

Protocol per trial: draw symmetric joint limits (when enabled) uniformly
from [0.2, pi] radians, sample a ground-truth configuration uniformly within
limits, take the goal from its forward kinematics (so every instance is
feasible), and start the solver from the zero-configuration point set.

The zero configuration of a chain is collinear, which is rank-deficient as a
rank-K matrix, so the start point must deviate from it slightly. A small
seeded jitter restores manifold membership; planar chains additionally get a
uniform 0.1 rad/joint bend toward the goal's winding side (the sign of its
orientation angle), which keeps the descent out of wrong-curl basins that
otherwise trap a noticeable fraction of joint-limited trials.

A trial succeeds when the recovered configuration hits the goal within the
position/rotation tolerances and respects active joint limits. Runtime
covers the solve call only, not problem construction or reporting.
"""

import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .errors import InconsistentPoints
from .robots import (
    PLANAR,
    RobotModel,
    SPHERICAL,
    attach_points,
    forward_kinematics,
    build_partial_edm,
    pose_error,
    recover_configuration,
    resolve_robot,
    with_limits,
    within_limits,
    wrap_angle,
    zero_configuration,
    Configuration,
)
from .solver import CompletionProblem, solve

LIMIT_FLOOR = 0.2
INITIAL_JITTER = 1e-4
INITIAL_BEND = 0.1
LIMIT_SLACK = 1e-6


@dataclass(frozen=True)
class TrialSpec:
    """One benchmark trial: robot, seed, and success tolerances."""

    robot_name: str
    robot: RobotModel
    seed: int
    use_limits: bool
    tol_pos: float = 0.01
    tol_rot: float = 0.01

    def __post_init__(self):
        if self.tol_pos <= 0.0 or self.tol_rot <= 0.0:
            raise ValueError("success tolerances must be positive")


@dataclass(frozen=True)
class TrialRecord:
    seed: int
    success: bool
    position_error: float
    orientation_error: float
    iterations: int
    wall_time: float
    failure_kind: str


@dataclass(frozen=True)
class TrialBatchResult:
    robot_name: str
    n_trials: int
    success_rate: float
    mean_runtime: float
    records: list


@dataclass(frozen=True)
class GeneratedTrial:
    problem: CompletionProblem
    goal: object
    truth: Configuration
    robot: RobotModel


def _sample_limits(robot, rng):
    return rng.uniform(LIMIT_FLOOR, math.pi, robot.n_joints)


def _sample_configuration(robot, rng):
    n = robot.n_joints
    bound = robot.limits if robot.limits is not None else np.full(n, math.pi)
    if robot.kind == SPHERICAL:
        azimuth = rng.uniform(-math.pi, math.pi, n)
        deviation = rng.uniform(0.0, bound)
        return Configuration(np.column_stack([azimuth, deviation]))
    return Configuration(rng.uniform(-bound, bound))


def _start_configuration(robot, goal):
    if robot.kind == PLANAR:
        sign = 1.0 if wrap_angle(float(goal.orientation)) >= 0.0 else -1.0
        return Configuration(np.full(robot.n_joints, sign * INITIAL_BEND))
    return zero_configuration(robot)


def make_problem(robot, goal, rng):
    """Standard completion problem for one goal: masks, anchors, start point.

    ``rng`` seeds the rank-restoring jitter; pass ``np.random.default_rng(s)``
    for a reproducible instance.
    """
    partial, anchors = build_partial_edm(robot, goal)
    initial = attach_points(robot, _start_configuration(robot, goal))
    initial = initial + INITIAL_JITTER * rng.standard_normal(initial.shape)
    return CompletionProblem(partial, robot.dim, anchors, initial)


def _generate(spec):
    rng = np.random.default_rng(spec.seed)
    robot = spec.robot
    if spec.use_limits:
        robot = with_limits(robot, _sample_limits(robot, rng))
    else:
        robot = with_limits(robot, None)
    truth = _sample_configuration(robot, rng)
    _, goal = forward_kinematics(robot, truth)
    problem = make_problem(robot, goal, rng)
    return GeneratedTrial(problem, goal, truth, robot)


def generate_trial(spec):
    """Deterministically build one problem instance from a trial spec.

    Returns ``(problem, goal, truth_configuration)``; the same seed always
    reproduces the same instance bit for bit.
    """
    trial = _generate(spec)
    return trial.problem, trial.goal, trial.truth


def run_trial(spec, config=None, trace=None):
    """Generate, solve, recover, and classify one trial."""
    trial = _generate(spec)
    outcome = solve(trial.problem, config, trace=trace)

    pos_err = None
    rot_err = None
    recovered = None
    try:
        recovered = recover_configuration(trial.robot, outcome.points)
        pos_err, rot_err = pose_error(trial.robot, recovered, trial.goal)
    except InconsistentPoints:
        pass

    success = (
        pos_err is not None
        and pos_err < spec.tol_pos
        and rot_err < spec.tol_rot
        and (not spec.use_limits or within_limits(trial.robot, recovered, LIMIT_SLACK))
    )
    if success:
        kind = "none"
    elif not outcome.converged:
        kind = "non_converged"
    elif recovered is None:
        kind = "inconsistent_points"
    else:
        kind = "tolerance"

    return TrialRecord(
        seed=spec.seed,
        success=bool(success),
        position_error=pos_err,
        orientation_error=rot_err,
        iterations=outcome.iterations,
        wall_time=outcome.wall_time,
        failure_kind=kind,
    )


def run_batch(
    robot_name,
    n_trials,
    base_seed,
    use_limits,
    config=None,
    tol_pos=0.01,
    tol_rot=0.01,
    robot=None,
    trace=None,
):
    """Run ``n_trials`` independent seeded trials and aggregate them.

    Seeds are ``base_seed .. base_seed + n_trials - 1``; aggregation depends
    only on the per-seed records, not on execution order.
    """
    if n_trials < 1:
        raise ValueError("need at least one trial")
    if robot is None:
        robot = resolve_robot(robot_name)
    records = []
    for k in range(n_trials):
        spec = TrialSpec(
            robot_name=robot_name,
            robot=robot,
            seed=base_seed + k,
            use_limits=use_limits,
            tol_pos=tol_pos,
            tol_rot=tol_rot,
        )
        records.append(run_trial(spec, config, trace=trace))
    successes = sum(1 for r in records if r.success)
    return TrialBatchResult(
        robot_name=robot_name,
        n_trials=n_trials,
        success_rate=successes / n_trials,
        mean_runtime=sum(r.wall_time for r in records) / n_trials,
        records=records,
    )


# ---------------------------------------------------------------------------
# Reporting
# ---------------------------------------------------------------------------

_CSV_FIELDS = (
    "seed",
    "success",
    "position_error",
    "orientation_error",
    "iterations",
    "wall_time",
    "failure_kind",
)


def format_table(result):
    header = f"{'Robot':<16}{'Success (%)':>12}{'Mean Runtime (ms)':>20}"
    row = (
        f"{result.robot_name:<16}"
        f"{100.0 * result.success_rate:>12.1f}"
        f"{1000.0 * result.mean_runtime:>20.1f}"
    )
    return header + "\n" + row + "\n"


def batch_to_dict(result):
    return {
        "robot_name": result.robot_name,
        "n_trials": result.n_trials,
        "success_rate": result.success_rate,
        "mean_runtime": result.mean_runtime,
        "records": [
            {
                "seed": r.seed,
                "success": r.success,
                "position_error": r.position_error,
                "orientation_error": r.orientation_error,
                "iterations": r.iterations,
                "wall_time": r.wall_time,
                "failure_kind": r.failure_kind,
            }
            for r in result.records
        ],
    }


def batch_from_json(text):
    data = json.loads(text)
    records = [TrialRecord(**rec) for rec in data["records"]]
    return TrialBatchResult(
        robot_name=data["robot_name"],
        n_trials=data["n_trials"],
        success_rate=data["success_rate"],
        mean_runtime=data["mean_runtime"],
        records=records,
    )


def render_report(result, fmt):
    if fmt == "table":
        return format_table(result)
    if fmt == "json":
        return json.dumps(batch_to_dict(result), indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=_CSV_FIELDS)
        writer.writeheader()
        for rec in batch_to_dict(result)["records"]:
            writer.writerow({k: ("" if rec[k] is None else rec[k]) for k in _CSV_FIELDS})
        return buf.getvalue()
    raise ValueError(f"unknown report format {fmt!r}")


def emit_report(result, fmt="table", destination=None):
    """Write a batch report as a table, csv, or json.

    ``destination`` is a path or None for stdout. IO failures propagate as
    OSError for the CLI to translate into a nonzero exit.
    """
    text = render_report(result, fmt)
    if destination is None:
        sys.stdout.write(text)
    else:
        with open(destination, "w", encoding="utf-8") as fh:
            fh.write(text)
