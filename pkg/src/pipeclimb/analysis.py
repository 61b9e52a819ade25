"""Post-run analysis: APE, phase timing and the run summary."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from .contact import GRAVITY, ContactState, no_slip_margin, spring_stiffness_rule
from .errors import DomainError
from .geometry import BendSegment, PipeNetwork
from .transmission import TRACKS
from .traversal import RobotConfig, Trace, TraversalState, required_speeds, slip_distance


def ape(simulated: Sequence[float], theoretical: Sequence[float]) -> float:
    """Average percentage error: mean of |sim - theory| / |theory|, in percent."""
    sim = np.asarray(simulated, dtype=float).ravel()
    theory = np.asarray(theoretical, dtype=float).ravel()
    if sim.shape != theory.shape:
        raise DomainError(f"series lengths differ: {sim.size} vs {theory.size}")
    if sim.size == 0:
        raise DomainError("ape needs at least one sample")
    if np.any(theory == 0):
        raise DomainError("theoretical series contains zero; percentage error undefined")
    return float(np.mean(np.abs(sim - theory) / np.abs(theory)) * 100.0)


class Phase(NamedTuple):
    segment: int
    entry: float
    exit: float

    @property
    def duration(self) -> float:
        return self.exit - self.entry


@dataclass
class PhaseReport:
    phases: list[Phase]
    complete: bool

    def __iter__(self):
        return iter(self.phases)

    def __len__(self):
        return len(self.phases)

    def __getitem__(self, i):
        return self.phases[i]


def phase_report(trace: Trace, network: PipeNetwork) -> PhaseReport:
    """Entry/exit time of every segment, at sample resolution.

    Phases are contiguous: each exit is the next entry, the first entry is
    the first sample time and the last exit the last sample time. Segments
    the trace never reached are omitted and the report is flagged incomplete.
    """
    if len(trace) == 0:
        raise DomainError("phase_report needs a non-empty trace")
    seg = trace.segment
    entries: dict[int, float] = {}
    for k in range(len(network.segments)):
        hits = np.flatnonzero(seg >= k)
        if hits.size:
            entries[k] = float(trace.t[hits[0]])
    reached = sorted(entries)
    phases = []
    for i, k in enumerate(reached):
        exit_ = entries[reached[i + 1]] if i + 1 < len(reached) else float(trace.t[-1])
        phases.append(Phase(k, entries[k], exit_))
    complete = trace.complete and len(reached) == len(network.segments)
    return PhaseReport(phases, complete)


def theoretical_speeds(trace: Trace, network: PipeNetwork, robot: RobotConfig) -> np.ndarray:
    """Required track speeds recomputed from geometry at every sampled position.

    Goes through :func:`required_speeds` rather than the kernel, so APE
    against it checks the whole allocation path end to end.
    """
    out = np.empty((len(trace), 3))
    zero = (0.0, 0.0, 0.0)
    for k, s in enumerate(trace.s):
        state = TraversalState(float(trace.t[k]), float(s), trace.roll, zero, zero, zero)
        out[k] = required_speeds(network, robot, state)
    return out


def _max_vertical(network: PipeNetwork, index: int, n: int = 65) -> float:
    seg = network.segments[index]
    a, b = network.starts[index], network.starts[index + 1]
    points = [a] if not isinstance(seg, BendSegment) else np.linspace(a, b, n)
    return max(abs(float(network.pose(float(s)).tangent[2])) for s in points)


@dataclass
class SummaryReport:
    scenario: str
    mode: str
    roll: float
    complete: bool
    completion_time: float
    phases: list[dict]
    speed_envelope: dict[str, tuple[float, float]]
    ape_percent: dict[str, float]
    slip_distance: dict[str, float]
    spring_range: dict[str, tuple[float, float]]
    min_traction_margin: float
    recommended_stiffness: float
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return asdict(self)


def summarize(trace: Trace, network: PipeNetwork, robot: RobotConfig, name: str = "") -> SummaryReport:
    phases = phase_report(trace, network)
    theory = theoretical_speeds(trace, network, robot)
    slips = slip_distance(trace)

    # traction margin per segment, worst spring state against steepest incline
    margin = math.inf
    for k in np.unique(trace.segment):
        rows = trace.segment == k
        comp = trace.spring[rows].min(axis=0)
        contacts = [ContactState(robot.spring.stiffness * c, robot.friction_mu) for c in comp]
        margin = min(margin, no_slip_margin(robot.mass, _max_vertical(network, int(k)), contacts))

    # sizing rule evaluated at the normal force a vertical climb needs per module
    if robot.friction_mu > 0:
        needed_N = robot.mass * GRAVITY / (3.0 * robot.friction_mu)
        recommended = spring_stiffness_rule(robot.friction_mu, needed_N)
    else:
        recommended = math.nan

    return SummaryReport(
        scenario=name,
        mode=trace.mode.value,
        roll=trace.roll,
        complete=phases.complete,
        completion_time=float(trace.t[-1]),
        phases=[{"segment": p.segment, "entry": p.entry, "exit": p.exit} for p in phases],
        speed_envelope={
            tr: (float(trace.commanded[:, i].min()), float(trace.commanded[:, i].max()))
            for i, tr in enumerate(TRACKS)
        },
        ape_percent={tr: ape(trace.commanded[:, i], theory[:, i]) for i, tr in enumerate(TRACKS)},
        slip_distance=dict(zip(TRACKS, slips)),
        spring_range={
            tr: (float(trace.spring[:, i].min()), float(trace.spring[:, i].max()))
            for i, tr in enumerate(TRACKS)
        },
        min_traction_margin=float(margin),
        recommended_stiffness=float(recommended),
    )


def format_summary(rep: SummaryReport) -> str:
    lines = [
        f"scenario {rep.scenario}  mode={rep.mode}  roll={math.degrees(rep.roll):g} deg",
        f"  complete: {'yes' if rep.complete else 'NO'}  t_end = {rep.completion_time:.3f} s",
        "  phases:",
    ]
    for p in rep.phases:
        lines.append(f"    segment {p['segment']}: {p['entry']:8.3f} -> {p['exit']:8.3f} s")
    lines.append("  track   v_min     v_max     APE%       slip[mm]   spring[mm]")
    for tr in TRACKS:
        lo, hi = rep.speed_envelope[tr]
        slo, shi = rep.spring_range[tr]
        lines.append(
            f"    {tr}  {lo:8.3f}  {hi:8.3f}  {rep.ape_percent[tr]:9.2e}  {rep.slip_distance[tr]:10.4f}"
            f"   {slo:.2f}..{shi:.2f}"
        )
    lines.append(f"  min traction margin: {rep.min_traction_margin:.2f} N")
    return "\n".join(lines)
