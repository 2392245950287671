"""Command-line interface: benchmark batches, single solves, robot listing."""

import argparse
import json
import sys

import numpy as np

from . import bench
from .errors import DgikError, InconsistentPoints
from .robots import (
    BUILTIN_ROBOTS,
    builtin_robot,
    load_goal,
    pose_error,
    recover_configuration,
    resolve_robot,
)
from .solver import SolverConfig, solve


def _solver_config(args):
    if getattr(args, "max_iters", None) is None:
        return SolverConfig()
    return SolverConfig(max_iters=args.max_iters)


def _trace_sink(enabled):
    if not enabled:
        return None

    def sink(iteration, cost, grad_norm, step):
        print(
            f"iter {iteration:5d}  cost {cost:.6e}  grad {grad_norm:.3e}  step {step:.3e}",
            file=sys.stderr,
        )

    return sink


def _cmd_bench(args):
    robot = resolve_robot(args.robot)
    result = bench.run_batch(
        robot_name=robot.name or args.robot,
        n_trials=args.trials,
        base_seed=args.seed,
        use_limits=args.limits,
        config=_solver_config(args),
        tol_pos=args.tol_pos,
        tol_rot=args.tol_rot,
        robot=robot,
        trace=_trace_sink(args.trace),
    )
    bench.emit_report(result, args.format, args.output)
    return 0


def _cmd_solve(args):
    robot = resolve_robot(args.robot)
    goal = load_goal(args.goal)
    if np.size(goal.position) != robot.dim:
        raise DgikError(
            f"goal position has {np.size(goal.position)} coordinates, "
            f"robot workspace is {robot.dim}-dimensional"
        )
    if robot.dim == 2 and np.ndim(goal.orientation) != 0:
        raise DgikError("planar robots take a scalar goal orientation")
    if robot.dim == 3 and np.ndim(goal.orientation) != 2:
        raise DgikError("spatial robots take a 3x3 goal orientation")

    problem = bench.make_problem(robot, goal, np.random.default_rng(args.seed))
    outcome = solve(problem, _solver_config(args), trace=_trace_sink(args.trace))

    report = {
        "converged": outcome.converged,
        "iterations": outcome.iterations,
        "final_cost": outcome.final_cost,
        "grad_norm": outcome.grad_norm,
        "wall_time": outcome.wall_time,
        "stop_reason": outcome.stop_reason,
        "joint_angles": None,
        "position_error": None,
        "orientation_error": None,
        "points": outcome.points.tolist(),
    }
    try:
        recovered = recover_configuration(robot, outcome.points)
        pos_err, rot_err = pose_error(robot, recovered, goal)
        report["joint_angles"] = recovered.angles.tolist()
        report["position_error"] = pos_err
        report["orientation_error"] = rot_err
    except InconsistentPoints as exc:
        report["recovery_error"] = str(exc)

    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.output is None:
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def _cmd_robots(_args):
    for name in BUILTIN_ROBOTS:
        robot = builtin_robot(name)
        print(
            f"{name:<16} kind={robot.kind:<16} joints={robot.n_joints:<4} "
            f"points={robot.n_points:<4} dim={robot.dim}"
        )
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="dgik",
        description="Inverse kinematics by low-rank distance matrix completion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_bench = sub.add_parser("bench", help="run a seeded benchmark batch")
    p_bench.add_argument("--robot", required=True, help="built-in name or description file")
    p_bench.add_argument("--trials", type=int, default=100)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--limits", action="store_true", help="draw random joint limits")
    p_bench.add_argument("--tol-pos", type=float, default=0.01, metavar="M")
    p_bench.add_argument("--tol-rot", type=float, default=0.01, metavar="RAD")
    p_bench.add_argument("--max-iters", type=int, default=None)
    p_bench.add_argument("--format", choices=("table", "csv", "json"), default="table")
    p_bench.add_argument("--output", default=None, help="report path (default stdout)")
    p_bench.add_argument("--trace", action="store_true", help="per-iteration trace on stderr")
    p_bench.set_defaults(func=_cmd_bench)

    p_solve = sub.add_parser("solve", help="solve one instance for a goal file")
    p_solve.add_argument("--robot", required=True)
    p_solve.add_argument("--goal", required=True, help="goal pose file")
    p_solve.add_argument("--seed", type=int, default=0, help="seed for the start-point jitter")
    p_solve.add_argument("--max-iters", type=int, default=None)
    p_solve.add_argument("--output", default=None)
    p_solve.add_argument("--trace", action="store_true")
    p_solve.set_defaults(func=_cmd_solve)

    p_robots = sub.add_parser("robots", help="list built-in robots")
    p_robots.set_defaults(func=_cmd_robots)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DgikError, KeyError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
