"""Inverse kinematics as low-rank Euclidean distance matrix completion,
solved by Riemannian optimization on the quotient of rank-K point matrices."""

from . import bench, edm, manifold, robots, solver
from ._kernels import BACKEND as KERNEL_BACKEND
from .bench import TrialSpec, generate_trial, run_batch, run_trial
from .edm import (
    AnchorSet,
    PartialEDM,
    align_to_anchors,
    gram,
    gram_to_edm,
    gram_to_edm_adjoint,
    points_from_edm,
)
from .robots import (
    BUILTIN_ROBOTS,
    Configuration,
    GoalPose,
    RobotModel,
    attach_points,
    build_partial_edm,
    builtin_robot,
    forward_kinematics,
    joint_limit_bound,
    load_robot,
    planar_chain,
    pose_error,
    recover_configuration,
    revolute_dh,
    spherical_chain,
)
from .solver import CompletionProblem, SolveOutcome, SolverConfig, cost, solve

__version__ = "0.1.0"
