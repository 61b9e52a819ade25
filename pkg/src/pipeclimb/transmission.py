"""Single-input, three-output differential transmission.

The train is reduced to its two ideal junction equations:

* sum constraint: the mean of the three output speeds equals the input speed;
* equal torque: every output carries the same torque.

All speeds are at the track-contact (sprocket) scale, so with the default
``overall_ratio`` of 1 the input speed is simply the nominal track speed.
Infeasible requests (all three outputs pinned) are reported through
``residual`` rather than raised.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DomainError

TRACKS = ("A", "B", "C")


@dataclass(frozen=True)
class TransmissionConfig:
    overall_ratio: float = 1.0
    loss_factor: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.overall_ratio) and self.overall_ratio > 0):
            raise DomainError(f"overall_ratio must be > 0, got {self.overall_ratio}")
        if not (0.0 <= self.loss_factor < 1.0):
            raise DomainError(f"loss_factor must lie in [0, 1), got {self.loss_factor}")

    def motor_speed(self, input_speed: float) -> float:
        """Motor-side speed for a sprocket-scale input speed."""
        return input_speed / self.overall_ratio


@dataclass(frozen=True)
class DifferentialSolution:
    input_speed: float
    output_speeds: tuple[float, float, float]
    input_torque: float
    output_torques: tuple[float, float, float]
    residual: float


def _sum3(values: Sequence[float]) -> float:
    # order-independent so that permuting tracks permutes outputs bit for bit
    lo, mid, hi = sorted(values)
    return (lo + mid) + hi


def _residual(outputs: Sequence[float], input_speed: float) -> float:
    return _sum3(outputs) / 3.0 - input_speed


def _finite(name: str, value: float) -> None:
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")


def torque_split(cfg: TransmissionConfig, input_torque: float) -> tuple[float, float, float]:
    _finite("input_torque", input_torque)
    each = input_torque * (1.0 - cfg.loss_factor) / 3.0
    return (each, each, each)


def _solution(cfg, input_speed, outputs, input_torque) -> DifferentialSolution:
    outputs = tuple(float(v) for v in outputs)
    return DifferentialSolution(
        input_speed=input_speed,
        output_speeds=outputs,
        input_torque=input_torque,
        output_torques=torque_split(cfg, input_torque),
        residual=_residual(outputs, input_speed),
    )


def solve_unloaded(cfg: TransmissionConfig, input_speed: float, input_torque: float = 0.0) -> DifferentialSolution:
    _finite("input_speed", input_speed)
    return _solution(cfg, input_speed, (input_speed,) * 3, input_torque)


def ratio_weights(ratios: Sequence[float]) -> tuple[float, float, float]:
    """Per-track multipliers ``3 r_i / sum(r)`` applied to the input speed."""
    if len(ratios) != 3:
        raise DomainError(f"need three ratios, got {len(ratios)}")
    for r in ratios:
        if not (math.isfinite(r) and r > 0):
            raise DomainError(f"ratios must be finite and > 0, got {tuple(ratios)}")
    total = _sum3(ratios)
    return tuple((3.0 * r) / total for r in ratios)


def solve_with_ratios(
    cfg: TransmissionConfig,
    input_speed: float,
    ratios: Sequence[float],
    input_torque: float = 0.0,
) -> DifferentialSolution:
    """Split ``input_speed`` across the tracks in proportion to ``ratios``."""
    _finite("input_speed", input_speed)
    weights = ratio_weights(ratios)
    return _solution(cfg, input_speed, [input_speed * w for w in weights], input_torque)


def _track_index(key) -> int:
    if isinstance(key, int) and 0 <= key < 3:
        return key
    try:
        return TRACKS.index(str(key).upper())
    except ValueError:
        raise DomainError(f"unknown track {key!r}; expected one of {TRACKS}") from None


def solve_fixed_outputs(
    cfg: TransmissionConfig,
    input_speed: float,
    fixed: Mapping,
    input_torque: float = 0.0,
) -> DifferentialSolution:
    """Pin some outputs and let the free ones share what the sum constraint leaves.

    With all three pinned nothing is solved; ``residual`` then measures how
    far the pinned speeds are from satisfying the sum constraint.
    """
    _finite("input_speed", input_speed)
    pinned = {_track_index(k): float(v) for k, v in fixed.items()}
    for v in pinned.values():
        _finite("fixed output speed", v)
    free = [i for i in range(3) if i not in pinned]
    outputs = [0.0, 0.0, 0.0]
    for i, v in pinned.items():
        outputs[i] = v
    if free:
        share = (3.0 * input_speed - math.fsum(pinned.values())) / len(free)
        for i in free:
            outputs[i] = share
    return _solution(cfg, input_speed, outputs, input_torque)


def power_balance(sol: DifferentialSolution) -> float:
    """Input power minus summed output power, in units of speed x torque.

    Zero for any lossless solution that meets the sum constraint.
    """
    p_in = sol.input_speed * sol.input_torque
    p_out = math.fsum(v * t for v, t in zip(sol.output_speeds, sol.output_torques))
    return p_in - p_out
