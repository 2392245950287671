import math

import numpy as np
import pytest

from dgik.edm import gram, gram_to_edm
from dgik.errors import DimensionMismatch, InconsistentPoints, RobotFileError
from dgik.robots import (
    BUILTIN_ROBOTS,
    Configuration,
    GoalPose,
    attach_points,
    build_partial_edm,
    builtin_robot,
    forward_kinematics,
    joint_limit_bound,
    load_goal,
    load_robot,
    parse_robot,
    planar_chain,
    pose_error,
    recover_configuration,
    resolve_robot,
    revolute_dh,
    rotation_about_axis,
    spherical_chain,
    with_limits,
    within_limits,
    zero_configuration,
)


def wrap_diff(a, b):
    return (a - b + np.pi) % (2 * np.pi) - np.pi


def random_config(robot, rng, margin=0.9):
    n = robot.n_joints
    bound = robot.limits if robot.limits is not None else np.full(n, np.pi)
    if robot.kind == "spherical_chain":
        az = rng.uniform(-np.pi, np.pi, n)
        dev = rng.uniform(0.05, margin * bound)
        return Configuration(np.column_stack([az, dev]))
    return Configuration(rng.uniform(-margin * bound, margin * bound))


class TestForwardKinematics:
    def test_planar_zero_config_exact(self):
        robot = planar_chain(np.ones(7))
        frames, pose = forward_kinematics(robot, zero_configuration(robot))
        assert np.array_equal(pose.position, [7.0, 0.0])
        assert pose.orientation == 0.0
        for i, (_, origin) in enumerate(frames):
            assert np.array_equal(origin, [float(i), 0.0])

    def test_planar_two_joint_elbow(self):
        robot = planar_chain([1.0, 1.0])
        _, pose = forward_kinematics(robot, Configuration([np.pi / 2, -np.pi / 2]))
        assert np.allclose(pose.position, [1.0, 1.0], atol=1e-12)
        assert abs(pose.orientation) < 1e-12

    def test_revolute_pure_translations(self):
        rows = [[0.3, 0.0, 0.5, 0.0], [0.2, 0.0, 0.1, 0.0], [0.4, 0.0, 0.2, 0.0]]
        robot = revolute_dh(rows)
        _, pose = forward_kinematics(robot, zero_configuration(robot))
        want = np.sum([[a, 0.0, d] for a, _, d, _ in rows], axis=0)
        assert np.allclose(pose.position, want, atol=1e-12)

    def test_spherical_zero_config_straight(self):
        robot = spherical_chain(np.ones(5))
        _, pose = forward_kinematics(robot, zero_configuration(robot))
        assert np.allclose(pose.position, [5.0, 0.0, 0.0], atol=1e-15)
        assert np.allclose(pose.orientation, np.eye(3), atol=1e-15)

    def test_dimension_mismatch(self):
        robot = planar_chain(np.ones(3))
        with pytest.raises(DimensionMismatch):
            forward_kinematics(robot, Configuration(np.zeros(4)))


class TestAttachPoints:
    def test_planar3_layout(self):
        robot = planar_chain(np.ones(3))
        pts = attach_points(robot, zero_configuration(robot))
        want = np.array([[0.0, 0.0], [-1.0, 0.0], [1.0, 0.0], [2.0, 0.0], [3.0, 0.0]])
        assert pts.shape == (5, 2)
        assert np.allclose(pts, want, atol=1e-15)

    def test_chain_link_distances(self):
        rng = np.random.default_rng(0)
        robot = planar_chain(rng.uniform(0.5, 2.0, 6))
        for _ in range(5):
            cfg = random_config(robot, rng)
            pts = attach_points(robot, cfg)
            chain = pts[robot.chain_rows()]
            lengths = np.linalg.norm(np.diff(chain, axis=0), axis=1)
            assert np.max(np.abs(lengths - robot.links)) < 1e-12

    def test_spherical_chain_distances(self):
        rng = np.random.default_rng(1)
        robot = spherical_chain(np.ones(5))
        for _ in range(5):
            cfg = random_config(robot, rng)
            pts = attach_points(robot, cfg)
            chain = pts[robot.chain_rows()]
            lengths = np.linalg.norm(np.diff(chain, axis=0), axis=1)
            assert np.max(np.abs(lengths - robot.links)) < 1e-12

    def test_revolute_axis_pairs_unit_distance(self):
        rng = np.random.default_rng(2)
        robot = builtin_robot("ur10")
        for _ in range(5):
            cfg = random_config(robot, rng)
            pts = attach_points(robot, cfg)
            for i in range(1, robot.n_joints + 1):
                a, b = pts[robot.axis_rows(i)]
                assert abs(np.linalg.norm(b - a) - 1.0) < 1e-12


class TestJointLimitBound:
    def test_full_fold_no_constraint(self):
        assert joint_limit_bound(1.0, 1.0, math.pi) == pytest.approx(0.0, abs=1e-12)

    def test_right_angle(self):
        assert joint_limit_bound(1.0, 1.0, math.pi / 2) == pytest.approx(2.0, abs=1e-12)

    def test_sampling_oracle(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            l_a, l_b = rng.uniform(0.2, 2.0, 2)
            theta_max = rng.uniform(0.05, math.pi)
            bound = joint_limit_bound(l_a, l_b, theta_max)
            theta = rng.uniform(-theta_max, theta_max, 1000)
            sq = l_a**2 + l_b**2 + 2 * l_a * l_b * np.cos(theta)
            assert np.all(sq >= bound - 1e-9)
            edge = l_a**2 + l_b**2 + 2 * l_a * l_b * math.cos(theta_max)
            assert edge == pytest.approx(bound, abs=1e-12)


class TestBuildPartialEdm:
    def test_planar2_mask_structure(self):
        robot = planar_chain([1.0, 1.0], limits=[1.0, 1.5])
        _, goal = forward_kinematics(robot, Configuration([0.4, -0.3]))
        partial, anchors = build_partial_edm(robot, goal)
        eq_pairs = set(zip(*np.nonzero(np.triu(partial.equality_mask, 1))))
        lb_pairs = set(zip(*np.nonzero(np.triu(partial.lower_bound_mask, 1))))
        assert eq_pairs == {(0, 1), (0, 2), (2, 3), (1, 3)}
        assert lb_pairs == {(1, 2), (0, 3)}
        assert partial.template[0, 2] == pytest.approx(1.0)  # first link
        assert partial.template[2, 3] == pytest.approx(1.0)  # second link
        assert partial.template[0, 1] == pytest.approx(1.0)  # base pair
        assert set(anchors.indices.tolist()) == {0, 1, 2, 3}

    def test_unlimited_robot_has_no_bounds(self):
        robot = planar_chain(np.ones(4))
        _, goal = forward_kinematics(robot, Configuration([0.2, 0.1, -0.4, 0.6]))
        partial, _ = build_partial_edm(robot, goal)
        assert not partial.lower_bound_mask.any()

    @pytest.mark.parametrize("kind", ["planar", "spherical", "revolute"])
    def test_ground_truth_consistency(self, kind):
        rng = np.random.default_rng(4)
        for trial in range(8):
            if kind == "planar":
                robot = planar_chain(np.ones(5), limits=rng.uniform(0.3, np.pi, 5))
            elif kind == "spherical":
                robot = spherical_chain(np.ones(4), limits=rng.uniform(0.3, np.pi, 4))
            else:
                robot = with_limits(builtin_robot("ur10"), rng.uniform(0.3, np.pi, 6))
            cfg = random_config(robot, rng)
            _, goal = forward_kinematics(robot, cfg)
            partial, _ = build_partial_edm(robot, goal)
            partial.validate()
            sq = gram_to_edm(gram(attach_points(robot, cfg)))
            eq = partial.equality_mask
            assert np.max(np.abs(np.where(eq, sq - partial.template, 0.0))) < 1e-10
            lb = partial.lower_bound_mask
            assert np.min(np.where(lb, sq - partial.template, 0.0)) > -1e-10

    def test_revolute_bound_matches_brute_force(self):
        rng = np.random.default_rng(5)
        robot = with_limits(builtin_robot("ur10"), rng.uniform(0.5, 2.5, 6))
        _, goal = forward_kinematics(robot, zero_configuration(robot))
        partial, _ = build_partial_edm(robot, goal)
        lb_u, lb_v = np.nonzero(np.triu(partial.lower_bound_mask, 1))
        assert lb_u.size > 0
        # Brute force: sweep each bounded joint, all other joints at zero.
        from dgik.robots import _limit_pairs

        pair_joint = {(min(u, v), max(u, v)): j for u, v, j in _limit_pairs(robot)}
        for u, v in zip(lb_u, lb_v):
            joint = pair_joint[(u, v)]
            lim = robot.limits[joint - 1]
            best = np.inf
            for theta in np.linspace(-lim, lim, 800):
                ang = np.zeros(6)
                ang[joint - 1] = theta
                pts = attach_points(robot, Configuration(ang))
                best = min(best, float(np.sum((pts[u] - pts[v]) ** 2)))
            assert partial.template[u, v] <= best + 1e-9
            assert partial.template[u, v] == pytest.approx(best, abs=1e-5)


class TestRecoverConfiguration:
    def test_planar_roundtrip(self):
        rng = np.random.default_rng(6)
        robot = planar_chain(np.ones(8))
        for _ in range(10):
            cfg = random_config(robot, rng)
            rec = recover_configuration(robot, attach_points(robot, cfg))
            assert np.max(np.abs(wrap_diff(rec.angles, cfg.angles))) < 1e-9

    def test_spherical_roundtrip(self):
        rng = np.random.default_rng(7)
        robot = spherical_chain(np.ones(6))
        for _ in range(10):
            cfg = random_config(robot, rng)
            rec = recover_configuration(robot, attach_points(robot, cfg))
            assert np.max(np.abs(rec.angles[:, 1] - cfg.angles[:, 1])) < 1e-9
            assert np.max(np.abs(wrap_diff(rec.angles[:, 0], cfg.angles[:, 0]))) < 1e-9

    def test_revolute_roundtrip(self):
        rng = np.random.default_rng(8)
        robot = builtin_robot("ur10")
        for _ in range(10):
            cfg = random_config(robot, rng)
            rec = recover_configuration(robot, attach_points(robot, cfg))
            assert np.max(np.abs(wrap_diff(rec.angles, cfg.angles))) < 1e-9

    def test_straight_line_is_zero_config(self):
        robot = planar_chain(np.ones(5))
        pts = attach_points(robot, zero_configuration(robot))
        rec = recover_configuration(robot, pts)
        assert np.max(np.abs(rec.angles)) < 1e-12

    def test_inconsistent_points_rejected(self):
        robot = planar_chain(np.ones(4))
        pts = attach_points(robot, zero_configuration(robot))
        pts[3] += [0.1, 0.0]  # stretch one link well past tolerance
        with pytest.raises(InconsistentPoints):
            recover_configuration(robot, pts)


class TestPoseError:
    def test_self_consistency(self):
        rng = np.random.default_rng(9)
        for robot in (planar_chain(np.ones(4)), spherical_chain(np.ones(4)), builtin_robot("ur10")):
            cfg = random_config(robot, rng)
            _, goal = forward_kinematics(robot, cfg)
            pos, rot = pose_error(robot, cfg, goal)
            assert pos < 1e-12
            assert rot < 1e-9

    def test_pure_translation(self):
        robot = planar_chain(np.ones(3))
        cfg = Configuration([0.3, -0.2, 0.5])
        _, goal = forward_kinematics(robot, cfg)
        shifted = GoalPose(goal.position + [0.005, 0.0], goal.orientation)
        pos, rot = pose_error(robot, cfg, shifted)
        assert pos == pytest.approx(0.005, abs=1e-12)
        assert rot < 1e-12

    def test_axis_angle_composition(self):
        rng = np.random.default_rng(10)
        robot = builtin_robot("ur10")
        cfg = random_config(robot, rng)
        _, goal = forward_kinematics(robot, cfg)
        for _ in range(5):
            axis = rng.standard_normal(3)
            angle = rng.uniform(0.01, np.pi * 0.95)
            twisted = GoalPose(
                goal.position, goal.orientation @ rotation_about_axis(axis, angle)
            )
            _, rot = pose_error(robot, cfg, twisted)
            assert rot == pytest.approx(angle, abs=1e-9)

    def test_planar_wraparound(self):
        robot = planar_chain(np.ones(2))
        cfg = Configuration([3.0, 3.0])  # orientation 6.0 rad, wraps negative
        _, goal = forward_kinematics(robot, cfg)
        pos, rot = pose_error(robot, cfg, goal)
        assert rot < 1e-12


class TestLimits:
    def test_within_limits(self):
        robot = planar_chain(np.ones(3), limits=[1.0, 1.0, 0.5])
        assert within_limits(robot, Configuration([0.9, -0.9, 0.4]))
        assert not within_limits(robot, Configuration([1.1, 0.0, 0.0]))
        assert within_limits(robot, Configuration([1.0 + 5e-7, 0.0, 0.0]))

    def test_spherical_limits_use_deviation(self):
        robot = spherical_chain(np.ones(2), limits=[0.5, 0.5])
        ok = Configuration([[2.0, 0.4], [-2.5, 0.3]])
        bad = Configuration([[0.1, 0.6], [0.0, 0.1]])
        assert within_limits(robot, ok)
        assert not within_limits(robot, bad)

    def test_limit_validation(self):
        with pytest.raises(ValueError):
            planar_chain(np.ones(2), limits=[0.5, 4.0])
        with pytest.raises(ValueError):
            planar_chain(np.ones(2), limits=[-0.1, 0.5])


class TestRobotFiles:
    def test_builtins(self):
        for name in BUILTIN_ROBOTS:
            robot = builtin_robot(name)
            assert robot.name == name
        assert builtin_robot("planar-100").n_joints == 100
        assert builtin_robot("ur10").kind == "revolute_dh"
        with pytest.raises(KeyError):
            builtin_robot("planar-7")

    def test_ur10_geometry(self):
        robot = builtin_robot("ur10")
        _, pose = forward_kinematics(robot, zero_configuration(robot))
        assert np.allclose(pose.position, [-1.1843, -0.256141, 0.0116], atol=1e-9)

    def test_chain_file_roundtrip(self, tmp_path):
        path = tmp_path / "arm.toml"
        path.write_text(
            'kind = "planar_chain"\nlinks = [1.0, 2.0, 0.5]\nlimits = [0.5, 1.0, 2.0]\n'
            "[points]\nbase_offset = 2.0\n"
        )
        robot = load_robot(path)
        assert robot.kind == "planar_chain"
        assert np.array_equal(robot.links, [1.0, 2.0, 0.5])
        assert np.array_equal(robot.limits, [0.5, 1.0, 2.0])
        assert robot.base_offset == 2.0

    def test_unknown_field_rejected(self, tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text('kind = "planar_chain"\nlinks = [1.0]\ncolor = "red"\n')
        with pytest.raises(RobotFileError):
            load_robot(path)

    def test_wrong_point_override_rejected(self):
        with pytest.raises(RobotFileError):
            parse_robot({"kind": "planar_chain", "links": [1.0], "points": {"axis_length": 2.0}})

    def test_missing_kind_rejected(self):
        with pytest.raises(RobotFileError):
            parse_robot({"links": [1.0]})

    def test_bad_toml_rejected(self, tmp_path):
        path = tmp_path / "broken.toml"
        path.write_text("kind = [unclosed")
        with pytest.raises(RobotFileError):
            load_robot(path)

    def test_resolve_robot(self, tmp_path):
        assert resolve_robot("planar-10").n_joints == 10
        path = tmp_path / "arm.toml"
        path.write_text('kind = "planar_chain"\nlinks = [1.0, 1.0]\n')
        assert resolve_robot(str(path)).n_joints == 2
        with pytest.raises(KeyError):
            resolve_robot("no-such-robot")

    def test_goal_file(self, tmp_path):
        path = tmp_path / "goal.toml"
        path.write_text("position = [1.0, 2.0]\norientation = 0.5\n")
        goal = load_goal(path)
        assert np.array_equal(goal.position, [1.0, 2.0])
        assert goal.orientation == 0.5
        bad = tmp_path / "bad_goal.toml"
        bad.write_text("position = [1.0, 2.0]\norientation = 0.5\nextra = 1\n")
        with pytest.raises(RobotFileError):
            load_goal(bad)

    def test_goal_rotation_validated(self):
        with pytest.raises(ValueError):
            GoalPose([0.0, 0.0, 0.0], np.eye(3) * 2.0)
