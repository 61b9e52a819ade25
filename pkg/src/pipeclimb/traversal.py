"""Quasi-static traversal of a pipe network.

The robot is a point on the centerline carrying three track contacts in
one cross-section, at ``contact_radius`` from the pipe axis and at
``roll + module_angles[i]`` about it. The body always advances at the
nominal input speed; whatever the drive commands beyond what the geometry
requires is recorded as slip instead of being fed back into the pose.

``step`` is the readable reference path. ``run_scenario`` drives the same
arithmetic through the compiled (or pure-Python) kernel in
:mod:`pipeclimb._kernel`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Iterator, NamedTuple, Sequence

import numpy as np

from . import _kernel
from .contact import SpringConfig
from .errors import DomainError, TravelLimitError
from .geometry import BendSegment, PipeNetwork, effective_radius, segment_at
from .transmission import TRACKS, TransmissionConfig, solve_with_ratios

MODULE_ANGLES = (0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0)


class DriveMode(str, enum.Enum):
    DIFFERENTIAL = "differential"
    RIGID = "rigid"

    @classmethod
    def parse(cls, value) -> "DriveMode":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        if key in ("rigiddrive", "rigid_drive"):
            key = "rigid"
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown drive mode {value!r}; use 'differential' or 'rigid'") from None


@dataclass(frozen=True)
class RobotConfig:
    contact_radius: float
    spring: SpringConfig
    nominal_speed: float
    mass: float = 2.0
    friction_mu: float = 0.5
    transmission: TransmissionConfig = field(default_factory=TransmissionConfig)
    module_angles: tuple[float, float, float] = MODULE_ANGLES
    # per-module installed compression; defaults to the spring preload on all three
    module_preloads: tuple[float, float, float] | None = None

    def __post_init__(self):
        object.__setattr__(self, "module_angles", tuple(float(a) for a in self.module_angles))
        if len(self.module_angles) != 3:
            raise DomainError(f"robot needs exactly three modules, got {len(self.module_angles)}")
        wrapped = [a % (2.0 * math.pi) for a in self.module_angles]
        for i in range(3):
            for j in range(i + 1, 3):
                if math.isclose(wrapped[i], wrapped[j], abs_tol=1e-12):
                    raise DomainError("module angles must be pairwise distinct mod 2*pi")
        if not (math.isfinite(self.contact_radius) and self.contact_radius > 0):
            raise DomainError(f"contact radius must be > 0, got {self.contact_radius}")
        if not (math.isfinite(self.nominal_speed) and self.nominal_speed > 0):
            raise DomainError(f"nominal speed must be > 0, got {self.nominal_speed}")
        if not self.mass >= 0:
            raise DomainError(f"mass must be >= 0, got {self.mass}")
        if not self.friction_mu >= 0:
            raise DomainError(f"friction coefficient must be >= 0, got {self.friction_mu}")
        if self.module_preloads is not None:
            pre = tuple(float(p) for p in self.module_preloads)
            if len(pre) != 3:
                raise DomainError("module_preloads needs three values")
            for name, p in zip(TRACKS, pre):
                if not (0.0 <= p <= self.spring.max_travel):
                    raise TravelLimitError(name, p, self.spring.max_travel)
            object.__setattr__(self, "module_preloads", pre)

    @property
    def preloads(self) -> tuple[float, float, float]:
        if self.module_preloads is not None:
            return self.module_preloads
        p = self.spring.preload_compression
        return (p, p, p)

    def check_fits(self, network: PipeNetwork) -> None:
        if self.contact_radius > network.inner_radius:
            raise DomainError(
                f"contact radius {self.contact_radius} exceeds pipe inner radius {network.inner_radius}"
            )


@dataclass(frozen=True)
class TraversalState:
    time: float
    arc_position: float
    roll_angle: float
    commanded_speeds: tuple[float, float, float]
    required_speeds: tuple[float, float, float]
    spring_compressions: tuple[float, float, float]
    segment: int = 0

    @property
    def slips(self) -> tuple[float, float, float]:
        return tuple(c - r for c, r in zip(self.commanded_speeds, self.required_speeds))


class TraceSample(NamedTuple):
    time: float
    s: float
    segment: int
    commanded: tuple[float, float, float]
    required: tuple[float, float, float]
    slip: tuple[float, float, float]
    spring: tuple[float, float, float]


def _module_cosines(bend: BendSegment, robot: RobotConfig, roll: float) -> list[float]:
    return [math.cos((roll + a) - bend.plane_roll) for a in robot.module_angles]


def required_speeds(network: PipeNetwork, robot: RobotConfig, state: TraversalState) -> tuple[float, float, float]:
    """Track speeds that roll without slip at the state's arc position."""
    index, _ = segment_at(network, state.arc_position)
    seg = network.segments[index]
    v = robot.nominal_speed
    if not isinstance(seg, BendSegment):
        return (v, v, v)
    return tuple(
        v * effective_radius(seg, (state.roll_angle + a) - seg.plane_roll, robot.contact_radius) / seg.bend_radius
        for a in robot.module_angles
    )


def allocate_speeds(
    mode: DriveMode,
    transmission: TransmissionConfig,
    input_speed: float,
    required: Sequence[float],
) -> tuple[float, float, float]:
    mode = DriveMode.parse(mode)
    if mode is DriveMode.RIGID:
        return (input_speed, input_speed, input_speed)
    return solve_with_ratios(transmission, input_speed, required).output_speeds


def spring_profile(network: PipeNetwork, robot: RobotConfig, state: TraversalState) -> tuple[float, float, float]:
    """Per-module spring compression from preload plus the bend clearance model.

    In a bend each module's compression shifts by ``-clearance_delta * cos(psi)``:
    the full delta on the inner wall, its negative on the outer wall.
    """
    index, _ = segment_at(network, state.arc_position)
    seg = network.segments[index]
    preloads = robot.preloads
    if isinstance(seg, BendSegment):
        cosines = _module_cosines(seg, robot, state.roll_angle)
        comps = tuple(p - seg.clearance_delta * c for p, c in zip(preloads, cosines))
    else:
        comps = preloads
    for name, comp in zip(TRACKS, comps):
        if not (0.0 <= comp <= robot.spring.max_travel):
            raise TravelLimitError(name, comp, robot.spring.max_travel, state.arc_position)
    return comps


def initial_state(network: PipeNetwork, robot: RobotConfig, mode=DriveMode.DIFFERENTIAL, roll: float = 0.0) -> TraversalState:
    robot.check_fits(network)
    return _refresh(network, robot, TraversalState(0.0, 0.0, roll, (0.0,) * 3, (0.0,) * 3, robot.preloads), mode)


def _refresh(network, robot, state, mode) -> TraversalState:
    required = required_speeds(network, robot, state)
    commanded = allocate_speeds(mode, robot.transmission, robot.nominal_speed, required)
    springs = spring_profile(network, robot, state)
    index, _ = segment_at(network, state.arc_position)
    return replace(
        state,
        commanded_speeds=commanded,
        required_speeds=required,
        spring_compressions=springs,
        segment=index,
    )


def step(network: PipeNetwork, robot: RobotConfig, state: TraversalState, dt: float, mode=DriveMode.DIFFERENTIAL) -> TraversalState:
    if not dt > 0:
        raise DomainError(f"time step must be > 0, got {dt}")
    total = network.total_length
    s = state.arc_position + robot.nominal_speed * dt
    if s > total:
        s = total
    moved = replace(state, time=state.time + dt, arc_position=s)
    return _refresh(network, robot, moved, mode)


@dataclass(eq=False)
class Trace:
    """Sampled telemetry of one run, stored column-wise."""

    t: np.ndarray
    s: np.ndarray
    segment: np.ndarray
    commanded: np.ndarray
    required: np.ndarray
    slip: np.ndarray
    spring: np.ndarray
    complete: bool = True
    mode: DriveMode = DriveMode.DIFFERENTIAL
    roll: float = 0.0

    def __len__(self) -> int:
        return len(self.t)

    def __getitem__(self, k: int) -> TraceSample:
        return TraceSample(
            float(self.t[k]),
            float(self.s[k]),
            int(self.segment[k]),
            tuple(map(float, self.commanded[k])),
            tuple(map(float, self.required[k])),
            tuple(map(float, self.slip[k])),
            tuple(map(float, self.spring[k])),
        )

    def __iter__(self) -> Iterator[TraceSample]:
        return (self[k] for k in range(len(self)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Trace):
            return NotImplemented
        return (
            self.complete == other.complete
            and all(
                np.array_equal(getattr(self, name), getattr(other, name))
                for name in ("t", "s", "segment", "commanded", "required", "slip", "spring")
            )
        )

    @property
    def duration(self) -> float:
        return float(self.t[-1] - self.t[0]) if len(self) else 0.0

    @classmethod
    def from_samples(cls, samples: Sequence[TraceSample], **kw) -> "Trace":
        rows = list(samples)
        return cls(
            t=np.array([r.time for r in rows], dtype=float),
            s=np.array([r.s for r in rows], dtype=float),
            segment=np.array([r.segment for r in rows], dtype=np.int64),
            commanded=np.array([r.commanded for r in rows], dtype=float).reshape(-1, 3),
            required=np.array([r.required for r in rows], dtype=float).reshape(-1, 3),
            slip=np.array([r.slip for r in rows], dtype=float).reshape(-1, 3),
            spring=np.array([r.spring for r in rows], dtype=float).reshape(-1, 3),
            **kw,
        )


def _max_steps(network: PipeNetwork, robot: RobotConfig, dt: float, time_cap: float | None) -> int:
    ds = robot.nominal_speed * dt
    needed = math.ceil(network.total_length / ds) + 2
    if time_cap is None or math.isinf(time_cap):
        return needed
    return min(needed, int(math.floor(time_cap / dt + 1e-9)))


def run_scenario(
    network: PipeNetwork,
    robot: RobotConfig,
    mode=DriveMode.DIFFERENTIAL,
    dt: float = 0.01,
    sample_every: int = 1,
    *,
    roll: float = 0.0,
    time_cap: float | None = None,
    backend: str | None = None,
) -> Trace:
    """Step from s = 0 until the end of the network or ``time_cap``.

    The first and last states are always sampled. A run stopped by the time
    cap comes back with ``complete=False``.
    """
    mode = DriveMode.parse(mode)
    if not dt > 0:
        raise DomainError(f"time step must be > 0, got {dt}")
    if int(sample_every) < 1:
        raise DomainError(f"sample_every must be >= 1, got {sample_every}")
    if time_cap is not None and not time_cap >= 0:
        raise DomainError(f"time cap must be >= 0, got {time_cap}")
    robot.check_fits(network)

    segs = network.segments
    is_bend = [1 if isinstance(sg, BendSegment) else 0 for sg in segs]
    out = _kernel.get_backend(backend).run(
        list(network.starts),
        is_bend,
        [sg.bend_radius if b else 0.0 for sg, b in zip(segs, is_bend)],
        [sg.plane_roll if b else 0.0 for sg, b in zip(segs, is_bend)],
        [sg.clearance_delta if b else 0.0 for sg, b in zip(segs, is_bend)],
        list(robot.module_angles),
        float(roll),
        float(robot.contact_radius),
        float(robot.nominal_speed),
        float(dt),
        list(robot.preloads),
        float(robot.spring.max_travel),
        mode is DriveMode.RIGID,
        int(sample_every),
        _max_steps(network, robot, dt, time_cap),
    )
    if out["error"] is not None:
        module, s, comp = out["error"]
        raise TravelLimitError(TRACKS[module], comp, robot.spring.max_travel, s)
    return Trace(
        t=out["t"],
        s=out["s"],
        segment=out["segment"],
        commanded=out["commanded"],
        required=out["required"],
        slip=out["slip"],
        spring=out["spring"],
        complete=out["complete"],
        mode=mode,
        roll=float(roll),
    )


def slip_distance(trace: Trace) -> tuple[float, float, float]:
    """Per-track integral of |slip| over time (trapezoidal), in mm."""
    if len(trace) == 0:
        raise DomainError("slip_distance needs a non-empty trace")
    mag = np.abs(trace.slip)
    dt = np.diff(trace.t)[:, None]
    return tuple(float(x) for x in (0.5 * (mag[1:] + mag[:-1]) * dt).sum(axis=0))
