import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pipeclimb import (
    DomainError,
    TransmissionConfig,
    power_balance,
    solve_fixed_outputs,
    solve_unloaded,
    solve_with_ratios,
    torque_split,
)
from pipeclimb.transmission import DifferentialSolution

CFG = TransmissionConfig()


@pytest.mark.parametrize("v", [38.89, 0.0, -10.0])
def test_unloaded_outputs_equal_input(v):
    sol = solve_unloaded(CFG, v)
    assert sol.output_speeds == (v, v, v)
    assert sol.residual == 0.0


def test_unloaded_rejects_non_finite():
    with pytest.raises(DomainError):
        solve_unloaded(CFG, math.nan)


def test_ratios_from_effective_radii():
    # effective radii at psi = pi, +-pi/3 for R = 381, r_c = 128
    sol = solve_with_ratios(CFG, 38.89, (253.0, 445.0, 445.0))
    expected = [3 * 38.89 * r / (253 + 445 + 445) for r in (253, 445, 445)]
    assert sol.output_speeds == pytest.approx(expected, rel=1e-15)
    assert sol.output_speeds == pytest.approx((25.83, 45.42, 45.42), abs=0.01)
    assert abs(sol.residual) <= 1e-9
    assert len(set(sol.output_torques)) == 1


def test_ratios_simple_cases():
    assert solve_with_ratios(CFG, 7.5, (1, 1, 1)).output_speeds == (7.5, 7.5, 7.5)
    assert solve_with_ratios(CFG, 30.0, (1, 2, 3)).output_speeds == (15.0, 30.0, 45.0)


@pytest.mark.parametrize("ratios", [(0, 1, 1), (1, -2, 1), (1, 1)])
def test_ratios_must_be_positive_triple(ratios):
    with pytest.raises(DomainError):
        solve_with_ratios(CFG, 1.0, ratios)


def test_fixed_outputs():
    sol = solve_fixed_outputs(CFG, 38.89, {"B": 45.42, "C": 45.42})
    assert sol.output_speeds[0] == pytest.approx(3 * 38.89 - 2 * 45.42)
    assert sol.output_speeds[0] == pytest.approx(25.83, abs=1e-9)
    assert solve_fixed_outputs(CFG, 4.0, {}).output_speeds == (4.0, 4.0, 4.0)
    sol = solve_fixed_outputs(CFG, 10.0, {"A": 30.0, "B": 0.0})
    assert sol.output_speeds == (30.0, 0.0, 0.0)
    assert sol.residual == 0.0


def test_all_fixed_reports_violation():
    sol = solve_fixed_outputs(CFG, 10.0, {"A": 10.0, "B": 10.0, "C": 13.0})
    assert sol.output_speeds == (10.0, 10.0, 13.0)
    assert sol.residual == pytest.approx(1.0)


def test_torque_split():
    assert torque_split(CFG, 9.0) == (3.0, 3.0, 3.0)
    assert torque_split(CFG, 0.0) == (0.0, 0.0, 0.0)
    assert torque_split(TransmissionConfig(loss_factor=0.1), 10.0) == pytest.approx((3.0, 3.0, 3.0))


def test_config_validation():
    for kw in ({"overall_ratio": 0.0}, {"loss_factor": 1.0}, {"loss_factor": -0.1}):
        with pytest.raises(DomainError):
            TransmissionConfig(**kw)
    assert TransmissionConfig(overall_ratio=4.0).motor_speed(40.0) == 10.0


def test_power_balance():
    assert power_balance(solve_unloaded(CFG, 12.0, input_torque=5.0)) == 0.0
    assert power_balance(solve_with_ratios(CFG, 30.0, (1, 2, 3), input_torque=9.0)) == pytest.approx(0.0, abs=1e-12)
    sol = solve_unloaded(CFG, 12.0, input_torque=9.0)
    bumped = DifferentialSolution(
        sol.input_speed, tuple(v + 1.0 for v in sol.output_speeds), sol.input_torque, sol.output_torques, 1.0
    )
    assert power_balance(bumped) != 0.0


speeds = st.floats(-1e4, 1e4, allow_nan=False)
ratio = st.floats(1e-3, 1e3)
ratios3 = st.tuples(ratio, ratio, ratio)


@given(speeds, ratios3)
def test_sum_constraint(v, ratios):
    sol = solve_with_ratios(CFG, v, ratios)
    assert abs(math.fsum(sol.output_speeds) / 3 - v) <= 1e-9 * max(1.0, abs(v))
    assert abs(sol.residual) <= 1e-9 * max(1.0, abs(v))


@given(speeds, ratios3, st.permutations(range(3)))
def test_permutation_equivariance_is_exact(v, ratios, perm):
    base = solve_with_ratios(CFG, v, ratios).output_speeds
    permuted = solve_with_ratios(CFG, v, [ratios[i] for i in perm]).output_speeds
    assert permuted == tuple(base[i] for i in perm)


@given(speeds, ratios3, st.floats(-1e3, 1e3).filter(lambda k: abs(k) > 1e-3))
def test_scale_equivariance(v, ratios, k):
    a = solve_with_ratios(CFG, k * v, ratios).output_speeds
    b = solve_with_ratios(CFG, v, ratios).output_speeds
    for x, y in zip(a, b):
        assert x == pytest.approx(k * y, rel=1e-12, abs=1e-300)


normal_speeds = speeds.filter(lambda x: x == 0 or abs(x) > 1e-200)


@given(normal_speeds, ratios3, st.integers(-20, 20))
def test_scale_equivariance_power_of_two_is_bit_exact(v, ratios, e):
    k = 2.0 ** e
    a = solve_with_ratios(CFG, k * v, ratios).output_speeds
    assert a == tuple(k * y for y in solve_with_ratios(CFG, v, ratios).output_speeds)


@given(speeds, ratios3, st.floats(1e-3, 1e3))
def test_ratio_scale_invariance(v, ratios, c):
    a = solve_with_ratios(CFG, v, [c * r for r in ratios]).output_speeds
    b = solve_with_ratios(CFG, v, ratios).output_speeds
    assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


@given(speeds, ratios3, st.floats(-1e4, 1e4))
def test_ideal_power_balance_and_equal_torque(v, ratios, tau):
    sol = solve_with_ratios(CFG, v, ratios, input_torque=tau)
    assert max(sol.output_torques) - min(sol.output_torques) == 0.0
    assert abs(power_balance(sol)) <= 1e-9 * max(1.0, abs(v * tau))
