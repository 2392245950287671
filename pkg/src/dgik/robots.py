"""Kinematic chain models and their distance-geometric encodings.

Three robot families are supported:

``planar_chain``
    Revolute joints in the plane, link i of length ``l_i``. Workspace
    dimension 2. Points: the base pivot, one rear base anchor at
    ``(-base_offset, 0)`` that fixes the base orientation, every interior
    joint, and the end-effector. For ``n`` joints that is ``n + 2`` points;
    the goal pose pins the last joint and the end-effector.

``spherical_chain``
    Ball joints in space, each limited by a cone half-angle about the
    straight configuration and parameterized by (azimuth, deviation).
    Points: the base pivot plus two base anchors spanning the base frame,
    every interior joint, the end-effector, and two goal-frame auxiliary
    points that encode the target orientation (``n + 5`` points total).

``revolute_dh``
    Spatial revolute arms described by standard DH rows (a, alpha, d,
    theta_offset). Each joint axis carries two points at ``axis_length``
    separation; the end-effector carries a three-point triad pinned by the
    goal pose (``2n + 3`` points total).

In every family the known squared distances are: all pairs on a common
rigid body, all pairs inside the base anchor group, all pairs inside the
goal group, and base-to-goal pairs (both at known world positions). Joint
limits become lower bounds on the squared distance between the two points
one link (or one axis) on either side of the limited joint.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

try:
    import tomllib
except ImportError:  # Python 3.10
    import tomli as tomllib

from .edm import AnchorSet, PartialEDM
from .errors import DimensionMismatch, InconsistentPoints, RobotFileError

PLANAR = "planar_chain"
SPHERICAL = "spherical_chain"
REVOLUTE = "revolute_dh"
KINDS = (PLANAR, SPHERICAL, REVOLUTE)

LIMIT_SAMPLES = 10_000


# ---------------------------------------------------------------------------
# Small rotation helpers
# ---------------------------------------------------------------------------

def rot2(angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, -s], [s, c]])


def rotation_about_axis(axis, angle):
    """Rodrigues rotation about a (not necessarily unit) axis."""
    axis = np.asarray(axis, dtype=float)
    axis = axis / np.linalg.norm(axis)
    k = np.array([
        [0.0, -axis[2], axis[1]],
        [axis[2], 0.0, -axis[0]],
        [-axis[1], axis[0], 0.0],
    ])
    return np.eye(3) + math.sin(angle) * k + (1.0 - math.cos(angle)) * (k @ k)


def frame_from_direction(u):
    """Canonical frame whose first column is the unit direction ``u``.

    The minimal rotation taking the x axis onto ``u``; the end-effector
    orientation of a ball-joint chain is defined through this map, so it is
    a function of the final link direction alone. Near ``u = -x`` the
    convention degrades to a fixed half-turn about z.
    """
    u = np.asarray(u, dtype=float)
    c = u[0]
    if c < -1.0 + 1e-12:
        return np.diag([-1.0, -1.0, 1.0])
    k = np.array([0.0, -u[2], u[1]])  # x cross u
    kx = np.array([
        [0.0, -k[2], k[1]],
        [k[2], 0.0, -k[0]],
        [-k[1], k[0], 0.0],
    ])
    return np.eye(3) + kx + (kx @ kx) / (1.0 + c)


def rotation_angle(r):
    """Absolute rotation angle of an orthogonal 3x3 matrix, in [0, pi].

    Uses atan2 of the skew part against the trace, which keeps full
    precision near zero where the plain arccos form loses half the digits.
    """
    skew = 0.5 * np.array([r[2, 1] - r[1, 2], r[0, 2] - r[2, 0], r[1, 0] - r[0, 1]])
    return math.atan2(np.linalg.norm(skew), (np.trace(r) - 1.0) / 2.0)


def wrap_angle(x):
    """Wrap to [-pi, pi)."""
    return (x + math.pi) % (2.0 * math.pi) - math.pi


def dh_transform(a, alpha, d, theta):
    """Standard DH link transform Rz(theta) Tz(d) Tx(a) Rx(alpha)."""
    ct, st = math.cos(theta), math.sin(theta)
    ca, sa = math.cos(alpha), math.sin(alpha)
    return np.array([
        [ct, -st * ca, st * sa, a * ct],
        [st, ct * ca, -ct * sa, a * st],
        [0.0, sa, ca, d],
        [0.0, 0.0, 0.0, 1.0],
    ])


# ---------------------------------------------------------------------------
# Models
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RobotModel:
    """Chain description plus the parameters of its point attachment scheme.

    ``links`` is an ``(n,)`` array of link lengths for chains, or an
    ``(n, 4)`` array of DH rows (a, alpha, d, theta_offset) for revolute
    arms. ``limits`` holds per-joint symmetric bounds in radians (``None``
    means unlimited).
    """

    kind: str
    links: np.ndarray
    limits: np.ndarray = None
    base_offset: float = 1.0
    ee_offset: float = 1.0
    axis_length: float = 1.0
    name: str = ""

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown robot kind {self.kind!r}")
        links = np.asarray(self.links, dtype=float)
        if self.kind == REVOLUTE:
            if links.ndim != 2 or links.shape[1] != 4:
                raise ValueError("revolute_dh links must be (n, 4) DH rows")
            if not np.all(np.isfinite(links)):
                raise ValueError("DH rows must be finite")
        else:
            if links.ndim != 1 or links.size == 0:
                raise ValueError("chain links must be a nonempty length vector")
            if not np.all(links > 0.0):
                raise ValueError("link lengths must be positive")
        object.__setattr__(self, "links", links)
        if self.limits is not None:
            lim = np.asarray(self.limits, dtype=float)
            if lim.shape != (links.shape[0],):
                raise ValueError("limits must give one bound per joint")
            if np.any(lim <= 0.0) or np.any(lim > math.pi):
                raise ValueError("joint limits must lie in (0, pi]")
            object.__setattr__(self, "limits", lim)
        if min(self.base_offset, self.ee_offset, self.axis_length) <= 0.0:
            raise ValueError("point scheme offsets must be positive")

    @property
    def n_joints(self):
        return self.links.shape[0]

    @property
    def dim(self):
        return 2 if self.kind == PLANAR else 3

    @property
    def n_points(self):
        n = self.n_joints
        if self.kind == PLANAR:
            return n + 2
        if self.kind == SPHERICAL:
            return n + 5
        return 3 * n + 2

    # Row layout of the attached point set, per family.

    def chain_rows(self):
        """Rows of joint 1..n and the end-effector, in chain order."""
        n = self.n_joints
        if self.kind == PLANAR:
            return [0] + list(range(2, n + 1)) + [n + 1]
        if self.kind == SPHERICAL:
            return [0] + list(range(3, n + 2)) + [n + 2]
        raise ValueError("revolute arms have axis pairs, not a point chain")

    def base_rows(self):
        if self.kind == PLANAR:
            return [0, 1]
        if self.kind == SPHERICAL:
            return [0, 1, 2]
        return [0, 1] + [2 * i for i in self._fixed_origin_frames()]

    def _fixed_origin_frames(self):
        """Frame indices i >= 1 whose origin no joint can move.

        Walking down the DH table, frame i's origin stays world-fixed while
        every preceding ``a`` is zero (origins stay on the current axis) and
        every preceding ``alpha`` keeps the axis direction unchanged. Those
        origins are axis base points, and anchoring them stiffens an
        otherwise tangentially-constrained direction of the completion.
        """
        frames = []
        z_fixed = True
        for i in range(1, self.n_joints):
            a, alpha, _d, _off = self.links[i - 1]
            if a != 0.0 or not z_fixed:
                break
            frames.append(i)
            if math.sin(alpha) != 0.0:
                z_fixed = False
        return frames

    def ee_rows(self):
        """Rows whose world positions the goal pose determines.

        Pinning only the goal-frame points would leave the next point down
        the chain a mirror ambiguity (its distances to the goal frame admit
        an antipodal twin), so the group also carries the last joint for
        chains, and the last axis pair for revolute arms whose final DH
        ``a`` vanishes (the usual wrist layout), where the goal determines
        those positions too.
        """
        n = self.n_joints
        if self.kind == PLANAR:
            rows = self.chain_rows()
            return [rows[-2], rows[-1]]
        if self.kind == SPHERICAL:
            return [self.chain_rows()[-2], n + 2, n + 3, n + 4]
        rows = []
        if abs(self.links[-1, 0]) < 1e-12:
            rows += self.axis_rows(n)
        return rows + self.triad_rows()

    def axis_rows(self, i):
        """Rows of the two points on joint axis ``i`` (1-based), revolute only."""
        return [2 * (i - 1), 2 * (i - 1) + 1]

    def triad_rows(self):
        """Rows of the goal-frame triad, revolute only."""
        n = self.n_joints
        return [2 * n, 2 * n + 1, 2 * n + 2]

    def body_aux_row(self, i):
        """Row of the off-plane auxiliary point on link body ``i`` (1-based).

        Two consecutive joint axes of common industrial arms are coplanar
        (parallel or intersecting), and a flat four-point body constrained
        only by in-plane edges is free to fold out of plane at first order.
        One rigidly-attached point off that plane per interior body removes
        the fold, which would otherwise leave the completion creeping along
        a quartic valley.
        """
        return 2 * self.n_joints + 3 + (i - 1)

    def base_positions(self):
        """World positions of the base anchor rows."""
        b = self.base_offset
        if self.kind == PLANAR:
            return np.array([[0.0, 0.0], [-b, 0.0]])
        if self.kind == SPHERICAL:
            return np.array([[0.0, 0.0, 0.0], [-b, 0.0, 0.0], [0.0, b, 0.0]])
        ref = attach_points(self, zero_configuration(self))
        return ref[self.base_rows()]

    def goal_positions(self, goal):
        """World positions of the goal-group rows implied by a goal pose."""
        p = np.asarray(goal.position, dtype=float)
        if self.kind == PLANAR:
            ang = float(goal.orientation)
            u = np.array([math.cos(ang), math.sin(ang)])
            return np.vstack([p - self.links[-1] * u, p])
        r = np.asarray(goal.orientation, dtype=float)
        if self.kind == SPHERICAL:
            return np.vstack([
                p - self.links[-1] * r[:, 0],
                p,
                p + self.ee_offset * r[:, 1],
                p + self.ee_offset * r[:, 2],
            ])
        triad = [p, p + self.ee_offset * r[:, 0], p + self.ee_offset * r[:, 1]]
        a_last, alpha_last, d_last, _ = self.links[-1]
        if abs(a_last) < 1e-12:
            # With a vanishing final DH ``a`` the goal determines the last
            # axis: its direction is fixed under the final joint rotation.
            z_prev = r @ np.array([0.0, math.sin(alpha_last), math.cos(alpha_last)])
            o_prev = p - d_last * z_prev
            return np.vstack([o_prev, o_prev + self.axis_length * z_prev] + triad)
        return np.vstack(triad)


def with_limits(robot, limits):
    """Copy of ``robot`` with the given symmetric joint limits (or None)."""
    return replace(robot, limits=limits)


def planar_chain(lengths, limits=None, name=""):
    return RobotModel(PLANAR, np.asarray(lengths, dtype=float), limits, name=name)


def spherical_chain(lengths, limits=None, name=""):
    return RobotModel(SPHERICAL, np.asarray(lengths, dtype=float), limits, name=name)


def revolute_dh(dh_rows, limits=None, name="", axis_length=1.0, ee_offset=1.0):
    return RobotModel(
        REVOLUTE,
        np.asarray(dh_rows, dtype=float),
        limits,
        axis_length=axis_length,
        ee_offset=ee_offset,
        name=name,
    )


@dataclass(frozen=True)
class Configuration:
    """Joint variables: an ``(n,)`` angle vector for planar and revolute
    robots, an ``(n, 2)`` array of (azimuth, deviation) pairs for spherical
    chains."""

    angles: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "angles", np.asarray(self.angles, dtype=float))


@dataclass(frozen=True)
class GoalPose:
    """Target end-effector pose: planar orientation is an angle, spatial
    orientation is a 3x3 rotation matrix."""

    position: np.ndarray
    orientation: object

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float))
        if np.ndim(self.orientation) == 2:
            r = np.asarray(self.orientation, dtype=float)
            if (
                np.max(np.abs(r.T @ r - np.eye(3))) > 1e-9
                or abs(np.linalg.det(r) - 1.0) > 1e-9
            ):
                raise ValueError("orientation must be a proper rotation matrix")
            object.__setattr__(self, "orientation", r)
        else:
            object.__setattr__(self, "orientation", float(self.orientation))


def zero_configuration(robot):
    n = robot.n_joints
    if robot.kind == SPHERICAL:
        return Configuration(np.zeros((n, 2)))
    return Configuration(np.zeros(n))


def _check_config(robot, config):
    n = robot.n_joints
    ang = config.angles
    want = (n, 2) if robot.kind == SPHERICAL else (n,)
    if ang.shape != want:
        raise DimensionMismatch(
            f"configuration shape {ang.shape} does not match {want} for {robot.kind}"
        )


# ---------------------------------------------------------------------------
# Forward kinematics and point attachment
# ---------------------------------------------------------------------------

def forward_kinematics(robot, config):
    """All intermediate joint frames plus the end-effector pose.

    Returns ``(frames, pose)`` where ``frames`` is a list of ``(R, origin)``
    tuples (one per joint for chains; the full DH frame sequence, base
    included, for revolute arms) and ``pose`` is a GoalPose.
    """
    _check_config(robot, config)
    n = robot.n_joints
    ang = config.angles

    if robot.kind == PLANAR:
        frames = []
        pos = np.zeros(2)
        phi = 0.0
        for i in range(n):
            phi += ang[i]
            frames.append((rot2(phi), pos.copy()))
            pos = pos + robot.links[i] * np.array([math.cos(phi), math.sin(phi)])
        return frames, GoalPose(pos, phi)

    if robot.kind == SPHERICAL:
        frames = []
        pos = np.zeros(3)
        u = np.array([1.0, 0.0, 0.0])
        for i in range(n):
            f_prev = frame_from_direction(u)
            az, dev = ang[i]
            u = (
                math.cos(dev) * u
                + math.sin(dev) * (math.cos(az) * f_prev[:, 1] + math.sin(az) * f_prev[:, 2])
            )
            u = u / np.linalg.norm(u)
            frames.append((frame_from_direction(u), pos.copy()))
            pos = pos + robot.links[i] * u
        return frames, GoalPose(pos, frame_from_direction(u))

    t = np.eye(4)
    frames = [(t[:3, :3].copy(), t[:3, 3].copy())]
    for i in range(n):
        a, alpha, d, off = robot.links[i]
        t = t @ dh_transform(a, alpha, d, ang[i] + off)
        frames.append((t[:3, :3].copy(), t[:3, 3].copy()))
    return frames, GoalPose(t[:3, 3].copy(), t[:3, :3].copy())


def attach_points(robot, config):
    """Point matrix of the attachment scheme evaluated at ``config``."""
    _check_config(robot, config)
    frames, pose = forward_kinematics(robot, config)
    n = robot.n_joints
    pts = np.zeros((robot.n_points, robot.dim))

    if robot.kind == PLANAR:
        chain = [origin for _, origin in frames] + [pose.position]
        pts[robot.chain_rows()] = chain
        pts[1] = [-robot.base_offset, 0.0]
        return pts

    if robot.kind == SPHERICAL:
        chain = [origin for _, origin in frames] + [pose.position]
        pts[robot.chain_rows()] = chain
        pts[1] = [-robot.base_offset, 0.0, 0.0]
        pts[2] = [0.0, robot.base_offset, 0.0]
        r = pose.orientation
        pts[n + 3] = pose.position + robot.ee_offset * r[:, 1]
        pts[n + 4] = pose.position + robot.ee_offset * r[:, 2]
        return pts

    for i in range(1, n + 1):
        r, o = frames[i - 1]
        rows = robot.axis_rows(i)
        pts[rows[0]] = o
        pts[rows[1]] = o + robot.axis_length * r[:, 2]
    r, o = frames[n]
    pts[2 * n] = o
    pts[2 * n + 1] = o + robot.ee_offset * r[:, 0]
    pts[2 * n + 2] = o + robot.ee_offset * r[:, 1]
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    for i in range(1, n):
        r, o = frames[i]
        pts[robot.body_aux_row(i)] = o + inv_sqrt2 * (r[:, 0] + r[:, 1])
    return pts


# ---------------------------------------------------------------------------
# Joint limits as distance lower bounds
# ---------------------------------------------------------------------------

def joint_limit_bound(l_a, l_b, theta_max):
    """Minimum squared distance across a chain joint limited to |theta| <= theta_max.

    The two points sit one link before and one link after the joint; their
    distance decreases monotonically with the deviation from straight, so
    the law-of-cosines value at ``theta_max`` is the tight lower bound.
    """
    return max(l_a * l_a + l_b * l_b + 2.0 * l_a * l_b * math.cos(theta_max), 0.0)


def _revolute_pair_bound(robot, joint, p_world, q_frame_world, theta_max):
    """Minimum squared distance between a point before and a point after
    revolute joint ``joint`` (1-based), over theta in [-max, max].

    ``p_world`` must be rigid with respect to joints >= joint, and
    ``q_frame_world`` rigid with respect to joints <= joint, both evaluated
    at the zero configuration. The distance then depends on this joint angle
    alone and is a pure sinusoid in it; the candidate set is a dense grid
    plus the sinusoid's stationary angle, so the returned bound is exact to
    rounding rather than off by the grid resolution (generated trials must
    never violate their own bounds).
    """
    a, alpha, d, off = robot.links[joint - 1]
    frames, _ = forward_kinematics(robot, zero_configuration(robot))
    r_prev, o_prev = frames[joint - 1]

    w = r_prev.T @ (p_world - o_prev)
    # Coordinates of q in the frame just after the joint rotation.
    r_joint, o_joint = frames[joint]
    q_local = r_joint.T @ (q_frame_world - o_joint)
    b = dh_transform(a, alpha, d, 0.0)
    v = b[:3, :3] @ q_local + b[:3, 3]

    cos_amp = w[0] * v[0] + w[1] * v[1]
    sin_amp = w[1] * v[0] - w[0] * v[1]
    theta = np.linspace(-theta_max, theta_max, LIMIT_SAMPLES) + off
    stationary = math.atan2(sin_amp, cos_amp)
    interior = [
        t for t in (stationary - 2 * math.pi, stationary, stationary + 2 * math.pi)
        if off - theta_max <= t <= off + theta_max
    ]
    if interior:
        theta = np.concatenate([theta, interior])
    dot = cos_amp * np.cos(theta) + sin_amp * np.sin(theta) + w[2] * v[2]
    sq = w @ w + v @ v - 2.0 * dot
    return float(max(sq.min(), 0.0))


# ---------------------------------------------------------------------------
# Partial EDM construction
# ---------------------------------------------------------------------------

def _rigid_bodies(robot):
    """Row groups that move as one rigid body (shared joint points included)."""
    n = robot.n_joints
    if robot.kind in (PLANAR, SPHERICAL):
        chain = robot.chain_rows()
        bodies = [robot.base_rows()]
        bodies += [[chain[i], chain[i + 1]] for i in range(n)]
        if robot.kind == SPHERICAL:
            bodies.append([chain[-2], chain[-1], n + 3, n + 4])
        return bodies
    bodies = []
    for i in range(1, n):
        bodies.append(robot.axis_rows(i) + robot.axis_rows(i + 1) + [robot.body_aux_row(i)])
    bodies.append(robot.axis_rows(n) + robot.triad_rows())
    return bodies


def _limit_pairs(robot):
    """(row_u, row_v, joint_index) triples whose distance a joint limit bounds."""
    n = robot.n_joints
    pairs = []
    if robot.kind in (PLANAR, SPHERICAL):
        ext = [1] + robot.chain_rows()
        for i in range(1, n + 1):
            pairs.append((ext[i - 1], ext[i + 1], i))
        return pairs
    # The base carries only on-axis points, so the first joint of a revolute
    # arm admits no distance encoding; its limit is enforced only when the
    # recovered configuration is checked.
    for i in range(2, n + 1):
        left = robot.axis_rows(i - 1) + [robot.body_aux_row(i - 1)]
        if i < n:
            right = robot.axis_rows(i + 1) + [robot.body_aux_row(i)]
        else:
            right = robot.triad_rows()
        for u in left:
            for v in right:
                pairs.append((u, v, i))
    return pairs


def build_partial_edm(robot, goal):
    """Distance template and masks for an IK instance of ``robot``.

    Known entries: pairs on a common rigid body (values from the zero
    configuration, where they are the same as at any other), pairs among the
    base anchors, pairs among the goal-group points, and base-to-goal pairs
    (all at known world positions). Limited joints contribute lower-bounded
    entries between the points one link on either side of the joint; a pair
    claimed by a limit stays a bound even when world positions would pin it
    exactly, keeping the masks disjoint.

    Returns ``(PartialEDM, AnchorSet)``.
    """
    n_pts = robot.n_points
    ref = attach_points(robot, zero_configuration(robot))
    template = np.zeros((n_pts, n_pts))
    eq = np.zeros((n_pts, n_pts), dtype=bool)
    lb = np.zeros((n_pts, n_pts), dtype=bool)

    def set_pair(mask, u, v, value):
        if u == v:
            return
        mask[u, v] = mask[v, u] = True
        template[u, v] = template[v, u] = value

    limit_pairs = _limit_pairs(robot) if robot.limits is not None else []
    bounded = {(min(u, v), max(u, v)) for u, v, _ in limit_pairs}

    for body in _rigid_bodies(robot):
        for i, u in enumerate(body):
            for v in body[i + 1:]:
                if (min(u, v), max(u, v)) in bounded:
                    raise AssertionError("rigid pair cannot carry a joint limit")
                set_pair(eq, u, v, float(np.sum((ref[u] - ref[v]) ** 2)))

    base_rows = robot.base_rows()
    ee_rows = robot.ee_rows()
    world = np.zeros((n_pts, robot.dim))
    world[base_rows] = robot.base_positions()
    world[ee_rows] = robot.goal_positions(goal)
    known_rows = list(dict.fromkeys(base_rows + ee_rows))
    for i, u in enumerate(known_rows):
        for v in known_rows[i + 1:]:
            if (min(u, v), max(u, v)) in bounded:
                continue
            set_pair(eq, u, v, float(np.sum((world[u] - world[v]) ** 2)))

    if limit_pairs:
        chain_lengths = None
        if robot.kind in (PLANAR, SPHERICAL):
            chain_lengths = np.concatenate([[robot.base_offset], robot.links])
        for u, v, joint in limit_pairs:
            theta_max = float(robot.limits[joint - 1])
            if robot.kind in (PLANAR, SPHERICAL):
                bound = joint_limit_bound(
                    chain_lengths[joint - 1], chain_lengths[joint], theta_max
                )
            else:
                bound = _revolute_pair_bound(robot, joint, ref[u], ref[v], theta_max)
            set_pair(lb, u, v, bound)

    np.fill_diagonal(eq, True)
    partial = PartialEDM(template=template, equality_mask=eq, lower_bound_mask=lb)
    partial.validate()
    anchors = AnchorSet(
        indices=np.array(known_rows, dtype=np.int64), positions=world[known_rows]
    )
    anchors.validate(n_pts)
    return partial, anchors


# ---------------------------------------------------------------------------
# Configuration recovery and pose error
# ---------------------------------------------------------------------------

def _chain_directions(robot, points, tol):
    chain = np.asarray(points, dtype=float)[robot.chain_rows()]
    seg = np.diff(chain, axis=0)
    lengths = np.linalg.norm(seg, axis=1)
    bad = np.abs(lengths - robot.links) > tol
    if np.any(bad):
        i = int(np.argmax(np.abs(lengths - robot.links)))
        raise InconsistentPoints(
            f"link {i + 1} length {lengths[i]:.6f} deviates from {robot.links[i]:.6f}"
        )
    return seg / lengths[:, None]


def recover_configuration(robot, points, tol=1e-3):
    """Joint variables implied by a world-aligned point matrix.

    Walks the chain (or DH frame sequence) and extracts each joint variable
    from consecutive point geometry. Raises InconsistentPoints when the
    points deviate from the rigid link geometry by more than ``tol``
    (meters), which is how a non-converged completion shows up here.
    """
    points = np.asarray(points, dtype=float)
    if points.shape != (robot.n_points, robot.dim):
        raise DimensionMismatch(
            f"expected {robot.n_points} x {robot.dim} points, got {points.shape}"
        )
    n = robot.n_joints

    if robot.kind == PLANAR:
        u = _chain_directions(robot, points, tol)
        phi = np.arctan2(u[:, 1], u[:, 0])
        theta = np.diff(phi, prepend=0.0)
        return Configuration(np.array([wrap_angle(t) for t in theta]))

    if robot.kind == SPHERICAL:
        u = _chain_directions(robot, points, tol)
        angles = np.zeros((n, 2))
        prev = np.array([1.0, 0.0, 0.0])
        for i in range(n):
            cur = u[i]
            cosd = min(1.0, max(-1.0, float(prev @ cur)))
            dev = math.acos(cosd)
            perp = cur - cosd * prev
            norm_perp = np.linalg.norm(perp)
            if norm_perp < 1e-12:
                az = 0.0
            else:
                f_prev = frame_from_direction(prev)
                az = math.atan2(float(perp @ f_prev[:, 2]), float(perp @ f_prev[:, 1]))
            angles[i] = (az, dev)
            prev = cur
        return Configuration(angles)

    return _recover_revolute(robot, points, tol)


def _recover_revolute(robot, points, tol):
    n = robot.n_joints
    length = robot.axis_length
    for i in range(1, n + 1):
        a_pt, b_pt = points[robot.axis_rows(i)]
        if abs(np.linalg.norm(b_pt - a_pt) - length) > tol:
            raise InconsistentPoints(f"axis {i} separation deviates from {length}")

    theta = np.zeros(n)
    t = np.eye(4)
    for i in range(1, n + 1):
        a, alpha, d, off = robot.links[i - 1]
        r_prev, o_prev = t[:3, :3], t[:3, 3]
        if i < n:
            # The next axis observes this joint: its base point when the
            # link offset ``a`` gives it a lever arm, its direction otherwise.
            rows = robot.axis_rows(i + 1)
            o_hat = r_prev.T @ (points[rows[0]] - o_prev)
            z_hat = r_prev.T @ (points[rows[1]] - points[rows[0]]) / length
            sa = math.sin(alpha)
            if abs(a) > 1e-9:
                t_prime = math.atan2(o_hat[1] / a, o_hat[0] / a)
            elif abs(sa) > 1e-9:
                sign = 1.0 if sa > 0 else -1.0
                t_prime = math.atan2(sign * z_hat[0], -sign * z_hat[1])
            else:
                raise InconsistentPoints(
                    f"joint {i} angle is unobservable from axis points"
                )
        else:
            t0 = points[2 * n]
            x_obs = (points[2 * n + 1] - t0) / robot.ee_offset
            y_obs = (points[2 * n + 2] - t0) / robot.ee_offset
            r_obs = np.column_stack([x_obs, y_obs, np.cross(x_obs, y_obs)])
            m = r_prev.T @ r_obs @ np.array([
                [1.0, 0.0, 0.0],
                [0.0, math.cos(alpha), math.sin(alpha)],
                [0.0, -math.sin(alpha), math.cos(alpha)],
            ])
            t_prime = math.atan2(m[1, 0], m[0, 0])
        theta[i - 1] = wrap_angle(t_prime - off)
        t = t @ dh_transform(a, alpha, d, t_prime)
    return Configuration(theta)


def pose_error(robot, config, goal):
    """Position (meters) and orientation (radians) error against ``goal``."""
    _, pose = forward_kinematics(robot, config)
    pos_err = float(np.linalg.norm(pose.position - np.asarray(goal.position, dtype=float)))
    if robot.kind == PLANAR:
        rot_err = abs(wrap_angle(float(pose.orientation) - float(goal.orientation)))
    else:
        rot_err = rotation_angle(np.asarray(goal.orientation).T @ pose.orientation)
    return pos_err, rot_err


def within_limits(robot, config, slack=1e-6):
    """True when every joint variable respects the model's limits."""
    if robot.limits is None:
        return True
    ang = config.angles
    dev = np.abs(ang[:, 1]) if robot.kind == SPHERICAL else np.abs(ang)
    return bool(np.all(dev <= robot.limits + slack))


# ---------------------------------------------------------------------------
# Robot description files and built-in models
# ---------------------------------------------------------------------------

BUILTIN_ROBOTS = ("planar-10", "planar-100", "spherical-10", "spherical-100", "ur10")

_TOP_FIELDS = {"name", "kind", "links", "limits", "points"}
_POINT_FIELDS = {
    PLANAR: {"base_offset", "ee_offset"},
    SPHERICAL: {"base_offset", "ee_offset"},
    REVOLUTE: {"axis_length", "ee_offset"},
}


def parse_robot(data, name=""):
    """Build a RobotModel from parsed description-file data (strict)."""
    if not isinstance(data, dict):
        raise RobotFileError("robot description must be a table")
    unknown = set(data) - _TOP_FIELDS
    if unknown:
        raise RobotFileError(f"unknown fields: {sorted(unknown)}")
    try:
        kind = data["kind"]
        links = data["links"]
    except KeyError as exc:
        raise RobotFileError(f"missing required field {exc}") from None
    if kind not in KINDS:
        raise RobotFileError(f"unknown kind {kind!r}; expected one of {KINDS}")
    scheme = data.get("points", {})
    if not isinstance(scheme, dict):
        raise RobotFileError("points must be a table of overrides")
    bad = set(scheme) - _POINT_FIELDS[kind]
    if bad:
        raise RobotFileError(f"point-scheme fields {sorted(bad)} not valid for {kind}")
    kwargs = {k: float(v) for k, v in scheme.items()}
    limits = data.get("limits")
    try:
        return RobotModel(
            kind,
            np.asarray(links, dtype=float),
            None if limits is None else np.asarray(limits, dtype=float),
            name=data.get("name", name),
            **kwargs,
        )
    except ValueError as exc:
        raise RobotFileError(str(exc)) from None


def load_robot(path):
    """Parse a robot description file (TOML, strict schema)."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise RobotFileError(f"{path}: {exc}") from None
    return parse_robot(data, name=str(path))


def load_goal(path):
    """Parse a goal pose file: ``position`` plus scalar or 3x3 ``orientation``."""
    try:
        with open(path, "rb") as fh:
            data = tomllib.load(fh)
    except tomllib.TOMLDecodeError as exc:
        raise RobotFileError(f"{path}: {exc}") from None
    unknown = set(data) - {"position", "orientation"}
    if unknown:
        raise RobotFileError(f"unknown goal fields: {sorted(unknown)}")
    try:
        return GoalPose(np.asarray(data["position"], dtype=float), data["orientation"])
    except (KeyError, ValueError) as exc:
        raise RobotFileError(f"invalid goal file: {exc}") from None


def builtin_robot(name):
    """One of the named benchmark robots."""
    if name in ("planar-10", "planar-100"):
        n = int(name.split("-")[1])
        return planar_chain(np.ones(n), name=name)
    if name in ("spherical-10", "spherical-100"):
        n = int(name.split("-")[1])
        return spherical_chain(np.ones(n), name=name)
    if name == "ur10":
        from importlib.resources import files

        robot = load_robot(files("dgik").joinpath("data/ur10.toml"))
        return replace(robot, name="ur10")
    raise KeyError(f"unknown robot {name!r}; built-ins: {BUILTIN_ROBOTS}")


def resolve_robot(spec):
    """Interpret ``spec`` as a built-in name or a description file path."""
    if spec in BUILTIN_ROBOTS:
        return builtin_robot(spec)
    import os

    if os.path.exists(spec):
        return load_robot(spec)
    raise KeyError(f"{spec!r} is neither a built-in robot nor a file")
