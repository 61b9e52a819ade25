"""Pipe networks as chains of straight and toroidal-bend segments.

Frames follow the convention (tangent, n1, n2), right-handed, so that
``n2 = tangent x n1``. A bend's plane is fixed by ``plane_roll``: the
outward direction (away from the center of curvature) is
``cos(roll) * n1 + sin(roll) * n2`` in the frame at the bend inlet. Frames
are carried through bends by rotation about the bend binormal, which is
parallel transport, so a robot that does not roll keeps a constant angle
against ``n1``.
"""
from __future__ import annotations

import bisect
import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Union

import numpy as np

from .catalog import elbow_catalog  # noqa: F401  (re-exported)
from .errors import DomainError


@dataclass(frozen=True)
class StraightSegment:
    length: float

    def __post_init__(self):
        if not (math.isfinite(self.length) and self.length > 0):
            raise DomainError(f"straight segment length must be > 0, got {self.length}")

    @property
    def arc_length(self) -> float:
        return self.length


@dataclass(frozen=True)
class BendSegment:
    """Toroidal bend; ``bend_radius`` is the centerline radius R.

    ``clearance_delta`` is the radial spring compression change (mm) a
    module sees when it sits on the inner wall of this bend; outer-wall
    modules see the negative of it.
    """

    bend_radius: float
    bend_angle: float
    plane_roll: float = 0.0
    clearance_delta: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.bend_radius) and self.bend_radius > 0):
            raise DomainError(f"bend radius must be > 0, got {self.bend_radius}")
        if not (0.0 < self.bend_angle <= math.pi):
            raise DomainError(f"bend angle must lie in (0, pi], got {self.bend_angle}")
        if not math.isfinite(self.plane_roll):
            raise DomainError("bend plane roll must be finite")
        if not math.isfinite(self.clearance_delta):
            raise DomainError("bend clearance delta must be finite")

    @property
    def arc_length(self) -> float:
        return self.bend_radius * self.bend_angle


Segment = Union[StraightSegment, BendSegment]


@dataclass(frozen=True)
class CenterlinePose:
    position: np.ndarray
    tangent: np.ndarray
    normal_frame: tuple[np.ndarray, np.ndarray]

    def direction(self, angle: float) -> np.ndarray:
        """Unit radial direction at ``angle`` about the tangent, measured from n1."""
        n1, n2 = self.normal_frame
        return math.cos(angle) * n1 + math.sin(angle) * n2


def _rotate(v: np.ndarray, axis: np.ndarray, angle: float) -> np.ndarray:
    c, s = math.cos(angle), math.sin(angle)
    return v * c + np.cross(axis, v) * s + axis * float(axis @ v) * (1.0 - c)


ORIGIN_POSE = CenterlinePose(
    position=np.zeros(3),
    tangent=np.array([0.0, 0.0, 1.0]),
    normal_frame=(np.array([1.0, 0.0, 0.0]), np.array([0.0, 1.0, 0.0])),
)


@dataclass(frozen=True)
class PipeNetwork:
    inner_radius: float
    segments: tuple[Segment, ...]
    origin: CenterlinePose = field(default=ORIGIN_POSE, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if not (math.isfinite(self.inner_radius) and self.inner_radius > 0):
            raise DomainError(f"inner radius must be > 0, got {self.inner_radius}")
        if not self.segments:
            raise DomainError("pipe network needs at least one segment")
        for i, seg in enumerate(self.segments):
            if not isinstance(seg, (StraightSegment, BendSegment)):
                raise DomainError(f"segment {i}: unsupported type {type(seg).__name__}")
            if isinstance(seg, BendSegment) and seg.bend_radius <= self.inner_radius:
                raise DomainError(
                    f"segment {i}: bend radius {seg.bend_radius} must exceed the pipe "
                    f"inner radius {self.inner_radius}"
                )

    @cached_property
    def starts(self) -> tuple[float, ...]:
        """Cumulative arc length at each segment start, plus the total at the end."""
        return tuple(itertools.accumulate((seg.arc_length for seg in self.segments), initial=0.0))

    @property
    def total_length(self) -> float:
        return self.starts[-1]

    @cached_property
    def _start_poses(self) -> tuple[CenterlinePose, ...]:
        poses = [self.origin]
        for seg in self.segments[:-1]:
            poses.append(_advance(poses[-1], seg, seg.arc_length))
        return tuple(poses)

    def segment_at(self, s: float) -> tuple[int, float]:
        return segment_at(self, s)

    def pose(self, s: float) -> CenterlinePose:
        return centerline_pose(self, s)


def total_length(network: PipeNetwork) -> float:
    return network.total_length


def _check_range(network: PipeNetwork, s: float) -> None:
    if not (0.0 <= s <= network.total_length):
        raise DomainError(f"arc position {s} outside [0, {network.total_length}]")


def segment_at(network: PipeNetwork, s: float) -> tuple[int, float]:
    """Locate arc position ``s``; a junction belongs to the later segment."""
    _check_range(network, s)
    starts = network.starts
    index = min(bisect.bisect_right(starts, s) - 1, len(network.segments) - 1)
    return index, s - starts[index]


def _advance(pose: CenterlinePose, seg: Segment, local: float) -> CenterlinePose:
    t = pose.tangent
    n1, n2 = pose.normal_frame
    if isinstance(seg, StraightSegment):
        return CenterlinePose(pose.position + local * t, t, (n1, n2))
    outward = math.cos(seg.plane_roll) * n1 + math.sin(seg.plane_roll) * n2
    center_dir = -outward
    axis = np.cross(t, center_dir)
    alpha = local / seg.bend_radius
    R = seg.bend_radius
    position = pose.position + R * math.sin(alpha) * t + R * (1.0 - math.cos(alpha)) * center_dir
    return CenterlinePose(
        position,
        _rotate(t, axis, alpha),
        (_rotate(n1, axis, alpha), _rotate(n2, axis, alpha)),
    )


def centerline_pose(network: PipeNetwork, s: float) -> CenterlinePose:
    index, local = segment_at(network, s)
    return _advance(network._start_poses[index], network.segments[index], local)


def effective_radius(bend: BendSegment, psi: float, contact_radius: float) -> float:
    """Distance from the bend's axis of curvature to a contact point.

    ``psi`` is measured from the outward direction in the bend plane, so
    psi = 0 is the outer wall and psi = pi the inner wall.
    """
    if contact_radius >= bend.bend_radius:
        raise DomainError(
            f"contact radius {contact_radius} must be smaller than bend radius {bend.bend_radius}"
        )
    return bend.bend_radius + contact_radius * math.cos(psi)
