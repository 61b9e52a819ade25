import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import V_REF
from pipeclimb import (
    BendSegment,
    DomainError,
    DriveMode,
    PipeNetwork,
    RobotConfig,
    SpringConfig,
    StraightSegment,
    TransmissionConfig,
    TravelLimitError,
    TraversalState,
    allocate_speeds,
    initial_state,
    required_speeds,
    run_scenario,
    slip_distance,
    spring_profile,
    step,
)
from pipeclimb._kernel import BACKENDS

V = 38.89


def _state(s, roll=0.0):
    z = (0.0, 0.0, 0.0)
    return TraversalState(0.0, s, roll, z, z, z)


def _contact_speed_oracle(network, robot, s, roll, h=1e-3):
    """Track speeds from finite differences of the 3-D contact point paths."""
    out = []
    for a in robot.module_angles:
        def point(x):
            pose = network.pose(x)
            return pose.position + robot.contact_radius * pose.direction(roll + a)
        d = np.linalg.norm(point(s + h) - point(s - h)) / (2 * h)
        out.append(robot.nominal_speed * d)
    return out


def test_required_speeds_on_straight(elbow_network, robot):
    assert required_speeds(elbow_network, robot, _state(100.0)) == (V_REF,) * 3


def test_required_speeds_in_bend_inner_module_a(elbow_network):
    robot = RobotConfig(128.0, SpringConfig(4.0, 5.0), V)
    req = required_speeds(elbow_network, robot, _state(500.0, roll=math.pi))
    assert req == pytest.approx((25.83, 45.42, 45.42), abs=0.01)
    assert req == pytest.approx([V * (381 + 128 * math.cos(math.pi + k * 2 * math.pi / 3)) / 381 for k in range(3)])


def test_required_speeds_at_quarter_roll(elbow_network):
    robot = RobotConfig(128.0, SpringConfig(4.0, 5.0), V)
    req = required_speeds(elbow_network, robot, _state(500.0, roll=math.pi / 2))
    assert req[0] == pytest.approx(V, rel=1e-15)
    assert req[1] != pytest.approx(req[2])
    assert math.fsum(req) / 3 == pytest.approx(V, rel=1e-14)


@settings(max_examples=40, deadline=None)
@given(
    st.floats(0.0, 2 * math.pi),
    st.floats(-math.pi, math.pi),
    st.floats(0.05, 0.95),
    st.floats(150.0, 800.0),
)
def test_required_speeds_match_contact_path_oracle(roll, plane_roll, frac, R):
    net = PipeNetwork(120.0, [StraightSegment(50.0), BendSegment(R, 2.5, plane_roll), StraightSegment(50.0)])
    robot = RobotConfig(110.0, SpringConfig(4.0, 5.0), V)
    s = net.starts[1] + frac * (net.starts[2] - net.starts[1])
    got = required_speeds(net, robot, _state(s, roll))
    assert got == pytest.approx(_contact_speed_oracle(net, robot, s, roll), rel=1e-6)


def test_allocate_speeds():
    req = (25.83, 45.42, 45.42)
    inp = math.fsum(req) / 3
    assert allocate_speeds(DriveMode.DIFFERENTIAL, TransmissionConfig(), inp, req) == pytest.approx(req, rel=1e-15)
    assert allocate_speeds("rigid", TransmissionConfig(), V, req) == (V, V, V)
    assert allocate_speeds("differential", TransmissionConfig(), V, (V, V, V)) == (V, V, V)


def test_step_on_straight_both_modes():
    net = PipeNetwork(128.0, [StraightSegment(1000.0)])
    robot = RobotConfig(128.0, SpringConfig(4.0, 5.0), V)
    for mode in DriveMode:
        s1 = step(net, robot, initial_state(net, robot, mode), 1.0, mode)
        assert s1.arc_position == V and s1.time == 1.0
        assert s1.slips == (0.0, 0.0, 0.0)


def test_step_in_bend(elbow_network):
    robot = RobotConfig(128.0, SpringConfig(4.0, 5.0), V)
    st0 = TraversalState(0.0, 400.0, math.pi, (0,) * 3, (0,) * 3, (5,) * 3)
    diff = step(elbow_network, robot, st0, 0.01, DriveMode.DIFFERENTIAL)
    assert max(map(abs, diff.slips)) <= 1e-9
    rigid = step(elbow_network, robot, st0, 0.01, DriveMode.RIGID)
    assert rigid.slips == pytest.approx((13.06, -6.53, -6.53), abs=0.01)
    oracle = [V - V * (381 + 128 * math.cos(math.pi + k * 2 * math.pi / 3)) / 381 for k in range(3)]
    assert rigid.slips == pytest.approx(oracle, rel=1e-12)


def test_step_rejects_bad_dt(elbow_network, robot):
    with pytest.raises(DomainError):
        step(elbow_network, robot, initial_state(elbow_network, robot), 0.0)


def test_step_clamps_at_end():
    net = PipeNetwork(128.0, [StraightSegment(10.0)])
    robot = RobotConfig(128.0, SpringConfig(4.0, 5.0), V)
    assert step(net, robot, initial_state(net, robot), 5.0).arc_position == 10.0


def test_robot_invariants():
    spring = SpringConfig(4.0, 5.0)
    with pytest.raises(DomainError):
        RobotConfig(100.0, spring, V, module_angles=(0.0, 1.0))
    with pytest.raises(DomainError):
        RobotConfig(100.0, spring, V, module_angles=(0.0, 2 * math.pi, 1.0))
    with pytest.raises(DomainError):
        RobotConfig(0.0, spring, V)
    with pytest.raises(DomainError):
        run_scenario(PipeNetwork(50.0, [StraightSegment(10.0)]), RobotConfig(60.0, spring, V))


def test_vertical_climb_takes_nine_seconds():
    net = PipeNetwork(127.0, [StraightSegment(350.0)])
    robot = RobotConfig(127.0, SpringConfig(4.0, 5.0), V)
    trace = run_scenario(net, robot, dt=0.01)
    assert trace.complete
    assert trace.t[-1] == pytest.approx(9.0, abs=0.01)
    assert trace.s[-1] == 350.0


def test_time_cap_flags_incomplete(elbow_network, robot):
    trace = run_scenario(elbow_network, robot, dt=0.01, time_cap=5.0)
    assert not trace.complete
    assert trace.t[-1] == pytest.approx(5.0)


def test_decimation_keeps_first_and_last(elbow_network, robot):
    full = run_scenario(elbow_network, robot, dt=0.01)
    sparse = run_scenario(elbow_network, robot, dt=0.01, sample_every=7)
    assert sparse.t[0] == 0.0 and sparse.t[-1] == full.t[-1]
    np.testing.assert_array_equal(sparse.t[:-1], full.t[::7][: len(sparse) - 1])


def test_slip_distance_examples(elbow_network):
    robot = RobotConfig(128.0, SpringConfig(4.0, 5.0), V)
    diff = run_scenario(elbow_network, robot, "differential", roll=math.pi)
    assert max(slip_distance(diff)) <= 1e-9
    rigid = run_scenario(elbow_network, robot, "rigid", roll=math.pi)
    # constant slip v r_c / R over an arc lasting R (pi/2) / v: distance r_c pi / 2
    inner = slip_distance(rigid)[0]
    assert inner == pytest.approx(128.0 * math.pi / 2, abs=13.1 * 0.01)
    assert inner == pytest.approx(13.06 * (381 * math.pi / 2) / V, rel=1e-3)
    single = run_scenario(elbow_network, robot, "rigid", time_cap=0.0)
    assert len(single) == 1
    assert slip_distance(single) == (0.0, 0.0, 0.0)


def test_slip_distance_empty_trace(elbow_network, robot):
    trace = run_scenario(elbow_network, robot)
    empty = type(trace)(*(a[:0] for a in (trace.t, trace.s, trace.segment, trace.commanded,
                                          trace.required, trace.slip, trace.spring)))
    with pytest.raises(DomainError):
        slip_distance(empty)


def test_spring_profile(elbow_network):
    robot = RobotConfig(128.0, SpringConfig(4.0, 5.0), V)
    assert spring_profile(elbow_network, robot, _state(10.0)) == (5.0, 5.0, 5.0)
    inner_a = spring_profile(elbow_network, robot, _state(500.0, math.pi))
    assert inner_a[0] == pytest.approx(6.5)
    outer_a = spring_profile(elbow_network, robot, _state(500.0, 0.0))
    assert outer_a[0] == pytest.approx(3.5)
    tight = RobotConfig(128.0, SpringConfig(4.0, 15.5), V)
    with pytest.raises(TravelLimitError) as err:
        spring_profile(elbow_network, tight, _state(500.0, math.pi))
    assert err.value.module == "A" and err.value.s == 500.0


def test_uneven_preloads(elbow_network):
    robot = RobotConfig(128.0, SpringConfig(4.0, 5.0), V, module_preloads=(4.0, 5.0, 6.0))
    assert spring_profile(elbow_network, robot, _state(10.0)) == (4.0, 5.0, 6.0)
    with pytest.raises(TravelLimitError):
        RobotConfig(128.0, SpringConfig(4.0, 5.0), V, module_preloads=(4.0, 5.0, 17.0))


def test_run_scenario_travel_error_names_module(elbow_network):
    tight = RobotConfig(128.0, SpringConfig(4.0, 15.5), V)
    for backend in BACKENDS:
        with pytest.raises(TravelLimitError) as err:
            run_scenario(elbow_network, tight, roll=math.pi, backend=backend)
        assert err.value.module == "A"
        assert err.value.s == pytest.approx(350.0, abs=V * 0.01)


def _step_trace(network, robot, mode, dt, roll):
    state = initial_state(network, robot, mode, roll)
    rows = [state]
    while state.arc_position < network.total_length:
        state = step(network, robot, state, dt, mode)
        rows.append(state)
    return rows


@pytest.mark.parametrize("backend", sorted(BACKENDS))
@pytest.mark.parametrize("mode", list(DriveMode))
def test_kernel_matches_step_bit_for_bit(elbow_network, robot, backend, mode):
    roll = 2.0
    trace = run_scenario(elbow_network, robot, mode, dt=0.05, roll=roll, backend=backend)
    rows = _step_trace(elbow_network, robot, mode, 0.05, roll)
    assert len(rows) == len(trace)
    for st_, sample in zip(rows, trace):
        assert sample.time == st_.time
        assert sample.s == st_.arc_position
        assert sample.segment == st_.segment
        assert sample.commanded == st_.commanded_speeds
        assert sample.required == st_.required_speeds
        assert sample.slip == st_.slips
        assert sample.spring == st_.spring_compressions


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled kernel not built")
@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 2 * math.pi), st.sampled_from(list(DriveMode)), st.floats(0.005, 0.5), st.integers(1, 9))
def test_backends_agree(roll, mode, dt, every):
    net = PipeNetwork(120.0, [StraightSegment(30.0), BendSegment(300.0, 1.2, 0.4, 1.5),
                              StraightSegment(20.0), BendSegment(200.0, math.pi, -1.0, 1.5)])
    robot = RobotConfig(118.0, SpringConfig(4.0, 5.0), V)
    a = run_scenario(net, robot, mode, dt, every, roll=roll, backend="python")
    b = run_scenario(net, robot, mode, dt, every, roll=roll, backend="cython")
    assert a == b


@settings(max_examples=25, deadline=None)
@given(st.floats(0.0, 2 * math.pi), st.floats(-math.pi, math.pi), st.floats(0.01, 0.2))
def test_traversal_invariants(roll, plane_roll, dt):
    net = PipeNetwork(120.0, [StraightSegment(40.0), BendSegment(250.0, 2.0, plane_roll, 1.5), StraightSegment(40.0)])
    robot = RobotConfig(115.0, SpringConfig(4.0, 5.0), V)
    diff = run_scenario(net, robot, "differential", dt, roll=roll)
    rigid = run_scenario(net, robot, "rigid", dt, roll=roll)
    # zero slip for the differential, mean speed conserved in both modes
    assert np.abs(diff.slip).max() <= 1e-9
    for tr in (diff, rigid):
        np.testing.assert_allclose(tr.commanded.mean(axis=1), V, rtol=1e-12)
        steps = np.diff(tr.s)
        assert np.all(steps >= 0)
        np.testing.assert_allclose(steps[:-1], V * dt, rtol=1e-9)
    # total time is independent of roll
    assert diff.t[-1] == run_scenario(net, robot, "differential", dt, roll=0.0).t[-1]
    # rigid drive drags the inner tracks and overruns the outer ones
    in_bend = rigid.segment == 1
    cosines = np.cos(roll + np.array(robot.module_angles) - plane_roll)
    slips = rigid.slip[in_bend]
    for i, c in enumerate(cosines):
        if c < -1e-6:
            assert np.all(slips[:, i] > 0)
        elif c > 1e-6:
            assert np.all(slips[:, i] < 0)
    worst = np.abs(slips).max()
    assert worst >= V * robot.contact_radius / 250.0 * np.abs(cosines).max() * (1 - 1e-12)


def test_runs_are_deterministic(elbow_network, robot):
    a = run_scenario(elbow_network, robot, "rigid", roll=1.0)
    b = run_scenario(elbow_network, robot, "rigid", roll=1.0)
    assert a == b
