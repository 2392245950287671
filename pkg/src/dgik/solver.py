"""Masked distance-completion cost and its Riemannian minimization.

The cost of a candidate point set ``P`` against a partial squared-distance
template ``D~`` with equality mask ``O`` and lower-bound mask ``B`` is

    1/2 ||O . (D~ - edm(P))||_F^2  +  1/2 ||max(B . (D~ - edm(P)), 0)||_F^2

with ``.`` elementwise and ``max`` elementwise against zero: known distances
are matched exactly, bounded ones are penalized only while violated. The
hinge term is C^1 but not C^2, so the solver is first order by design:
Riemannian conjugate gradient (Polak-Ribiere with restarts) with Armijo
backtracking, on the quotient geometry from :mod:`dgik.manifold`.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, manifold
from .edm import AnchorSet, PartialEDM, align_to_anchors, gram, gram_to_edm, gram_to_edm_adjoint
from .errors import DegenerateAnchors, LeftManifold, RankDeficientBase


@dataclass(frozen=True)
class CompletionProblem:
    """One distance-completion instance: data, dimension, anchors, start point."""

    partial: PartialEDM
    dim: int
    anchors: AnchorSet
    initial: np.ndarray
    _pairs: tuple = field(init=False, repr=False, compare=False, default=None)

    def __post_init__(self):
        n = self.partial.n_points
        init = np.ascontiguousarray(np.asarray(self.initial, dtype=float))
        if init.shape != (n, self.dim):
            raise ValueError(f"initial point must be {n} x {self.dim}")
        if n < self.dim + 1:
            raise ValueError("need at least dim + 1 points for a rank-dim variable")
        object.__setattr__(self, "initial", init)
        object.__setattr__(self, "_pairs", self.partial.masked_pairs())

    @property
    def n_points(self):
        return self.partial.n_points


@dataclass(frozen=True)
class LineSearchConfig:
    """Armijo backtracking with a persistent trial step.

    The accepted step is remembered across iterations and doubled whenever
    it was accepted without backtracking; that adaptivity, together with a
    fairly demanding sufficient-decrease coefficient, is what keeps
    conjugate gradient moving through the flat valleys of the quartic cost.
    """

    initial_step: float = 1.0
    backtrack_factor: float = 0.5
    sufficient_decrease_coefficient: float = 0.5
    max_backtracks: int = 30

    def validate(self):
        if not (0.0 < self.backtrack_factor < 1.0):
            raise ValueError("backtrack_factor must lie in (0, 1)")
        if not (0.0 < self.sufficient_decrease_coefficient < 1.0):
            raise ValueError("sufficient_decrease_coefficient must lie in (0, 1)")
        if self.initial_step <= 0.0 or self.max_backtracks < 1:
            raise ValueError("initial_step and max_backtracks must be positive")


@dataclass(frozen=True)
class SolverConfig:
    """Stopping rules and line-search settings.

    ``cost_tol`` is a relative decrease threshold measured over a window of
    ``cost_window`` accepted iterations; ``grad_tol`` is absolute on the
    Riemannian gradient norm. ``cg_restart_period = 0`` means the default
    of one restart every ``N * K`` iterations.
    """

    max_iters: int = 20000
    grad_tol: float = 1e-8
    cost_tol: float = 1e-14
    cost_window: int = 5
    line_search: LineSearchConfig = field(default_factory=LineSearchConfig)
    cg_restart_period: int = 0
    rank_tol: float = 1e-9

    def validate(self):
        if self.max_iters < 1 or self.grad_tol <= 0.0 or self.cost_tol <= 0.0:
            raise ValueError("iteration and tolerance settings must be positive")
        if self.rank_tol <= 0.0:
            raise ValueError("rank_tol must be positive")
        self.line_search.validate()


@dataclass
class SolveOutcome:
    """Result of one completion solve. ``points`` are anchor-aligned when
    alignment succeeded (see ``diagnostic`` otherwise)."""

    points: np.ndarray
    final_cost: float
    grad_norm: float
    iterations: int
    converged: bool
    wall_time: float
    stop_reason: str = ""
    diagnostic: str = ""


def cost(problem, p):
    """Completion cost at point matrix ``p``."""
    p = np.ascontiguousarray(p, dtype=float)
    return _kernels.cost_only(p, *problem._pairs)


def euclidean_gradient(problem, p):
    """Gradient of :func:`cost` in the flat point-coordinate space."""
    p = np.ascontiguousarray(p, dtype=float)
    _, g = _kernels.cost_and_grad(p, *problem._pairs)
    return g


def euclidean_gradient_dense(problem, p):
    """Dense-matrix route to the gradient: ``2 * adjoint(residual) @ P``.

    Kept alongside the kernel route as the readable reference form; the two
    agree to rounding and are cross-checked in the test suite.
    """
    p = np.asarray(p, dtype=float)
    part = problem.partial
    d = gram_to_edm(gram(p))
    resid = np.where(part.equality_mask, d - part.template, 0.0)
    viol = np.where(part.lower_bound_mask, part.template - d, 0.0)
    resid -= np.clip(viol, 0.0, None)
    return 2.0 * gram_to_edm_adjoint(resid) @ p


def riemannian_gradient(problem, p, rank_tol=manifold.DEFAULT_RANK_TOL):
    """Horizontal projection of the flat gradient at ``p``."""
    return manifold.project_horizontal(p, euclidean_gradient(problem, p), rank_tol)


def solve(problem, config=None, trace=None):
    """Minimize the completion cost from ``problem.initial``.

    Runs Polak-Ribiere conjugate gradient with Armijo backtracking on the
    quotient geometry. Accepted iterates never increase the cost. Stops on
    small gradient norm, stagnating cost over the configured window, or the
    iteration cap; a stalled line search or rank loss ends the solve as a
    structured non-converged outcome rather than an exception.

    ``trace``, when given, is called as ``trace(iteration, cost, grad_norm,
    step_size)`` after every accepted iterate.

    Deterministic: no internal randomness, so identical inputs reproduce the
    trajectory bit for bit.
    """
    if config is None:
        config = SolverConfig()
    config.validate()
    ls = config.line_search
    restart_period = config.cg_restart_period
    if restart_period <= 0:
        restart_period = problem.n_points * problem.dim

    start = time.perf_counter()
    p = problem.initial.copy()
    f = cost(problem, p)
    cost_log = [f]

    direction = None
    prev_grad = None
    step_memory = None
    stop_reason = ""
    diagnostic = ""
    converged = False
    grad_norm = np.inf
    iteration = 0

    def window_converged():
        w = config.cost_window
        if len(cost_log) <= w:
            return False
        ref = cost_log[-w - 1]
        return (ref - cost_log[-1]) <= config.cost_tol * max(abs(ref), 1e-300)

    try:
        while True:
            projector = manifold.HorizontalProjector(p, config.rank_tol)
            grad = projector(euclidean_gradient(problem, p))
            grad_norm = manifold.norm(grad)

            if grad_norm <= config.grad_tol:
                converged = True
                stop_reason = "grad_tol"
                break
            if window_converged():
                converged = True
                stop_reason = "cost_tol"
                break
            if iteration >= config.max_iters:
                stop_reason = "max_iters"
                break

            # Conjugate direction: restart periodically, on the first
            # iteration, and whenever conjugacy stops giving descent.
            if direction is None or iteration % restart_period == 0:
                direction = -grad
            else:
                prev_grad_t = projector(prev_grad)
                beta = max(
                    0.0,
                    manifold.inner(grad, grad - prev_grad_t)
                    / max(manifold.inner(prev_grad, prev_grad), 1e-300),
                )
                direction = -grad + beta * projector(direction)
            df = manifold.inner(grad, direction)
            if df >= 0.0:
                direction = -grad
                df = -grad_norm**2

            if step_memory is None:
                step = ls.initial_step / max(manifold.norm(direction), 1e-300)
            else:
                step = step_memory

            accepted = False
            first_try = True
            for _ in range(ls.max_backtracks):
                try:
                    trial = manifold.retract(p, step * direction, config.rank_tol)
                except LeftManifold:
                    step *= ls.backtrack_factor
                    first_try = False
                    continue
                f_trial = cost(problem, trial)
                if f_trial <= f + ls.sufficient_decrease_coefficient * step * df:
                    accepted = True
                    break
                step *= ls.backtrack_factor
                first_try = False
            if not accepted:
                converged = window_converged()
                stop_reason = "cost_tol" if converged else "line_search_stalled"
                if not converged:
                    diagnostic = "no sufficient decrease within max_backtracks"
                break
            step_memory = 2.0 * step if first_try else step

            prev_grad = grad
            p = trial
            f = f_trial
            cost_log.append(f)
            iteration += 1
            if trace is not None:
                trace(iteration, f, grad_norm, step)
    except RankDeficientBase as exc:
        stop_reason = "rank_deficient"
        diagnostic = str(exc)
        converged = False

    wall = time.perf_counter() - start
    aligned = p
    try:
        aligned = align_to_anchors(p, problem.anchors)
    except DegenerateAnchors as exc:
        diagnostic = (diagnostic + "; " if diagnostic else "") + f"alignment failed: {exc}"
        converged = False
        if not stop_reason:
            stop_reason = "degenerate_anchors"

    return SolveOutcome(
        points=aligned,
        final_cost=f,
        grad_norm=grad_norm,
        iterations=iteration,
        converged=converged,
        wall_time=wall,
        stop_reason=stop_reason,
        diagnostic=diagnostic,
    )
