"""Scenario files: YAML with three sections, ``network``, ``robot`` and ``run``.

Grammar (all lengths mm, speeds mm/s, times s; every angle may be given
in radians under its plain name or in degrees with a ``_deg`` suffix)::

    name: reference                 # required
    description: free text          # optional
    network:
      pipe: NPS 10                  # catalog key; supplies inner_radius
      inner_radius: 127.254         # optional override / required without pipe
      incline_deg: 90               # first segment direction above horizontal
      segments:
        - straight: {length: 350}
        - bend:
            angle_deg: 90
            radius: 381             # number, or "long" for the catalog LR elbow
            arc_length: 583.3       # alternative to radius: radius = arc / angle
            roll_deg: 0             # bend-plane roll about the incoming axis
            clearance_delta: 1.5    # inner-wall spring compression change
    robot:
      nominal_speed: 38.89          # required
      contact_radius: 127.254       # default: pipe inner radius
      mass: 2.0
      friction_mu: 0.5
      module_angles_deg: [0, 120, 240]
      module_preloads: [5, 5, 5]    # optional uneven installed compression
      spring: {stiffness: 4.0, preload: 5.0, max_travel: 16}
      transmission: {overall_ratio: 1.0, loss_factor: 0.0}
    run:
      mode: differential            # or rigid
      roll_deg: 0                   # module A angle from the bend outward direction
      dt: 0.01
      sample_every: 1
      time_cap: null                # seconds; null for no cap
      output_dir: out/reference
      format: csv                   # or jsonl

Every diagnostic names the offending field path and, where known, its line.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from . import catalog
from .contact import DEFAULT_MAX_TRAVEL, SpringConfig
from .errors import CatalogKeyError, DomainError, ScenarioError
from .geometry import BendSegment, CenterlinePose, PipeNetwork, StraightSegment
from .transmission import TransmissionConfig
from .traversal import DriveMode, RobotConfig


FORMATS = ("csv", "jsonl")
DEFAULT_CLEARANCE = 1.5


@dataclass(frozen=True)
class Scenario:
    name: str
    network: PipeNetwork
    robot: RobotConfig
    mode: DriveMode = DriveMode.DIFFERENTIAL
    roll: float = 0.0
    dt: float = 0.01
    sample_every: int = 1
    time_cap: float | None = None
    output_dir: str | None = None
    format: str = "csv"
    pipe: str | None = None
    incline: float = math.pi / 2
    description: str = ""

    def with_overrides(self, **changes) -> "Scenario":
        from dataclasses import replace

        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def origin_pose(incline: float) -> CenterlinePose:
    c, s = math.cos(incline), math.sin(incline)
    return CenterlinePose(
        position=np.zeros(3),
        tangent=np.array([c, 0.0, s]),
        normal_frame=(np.array([s, 0.0, -c]), np.array([0.0, 1.0, 0.0])),
    )


# -- line bookkeeping ---------------------------------------------------------

def _index_lines(node, path: str, out: dict) -> None:
    out[path] = node.start_mark.line + 1
    if isinstance(node, yaml.MappingNode):
        for key, value in node.value:
            child = f"{path}.{key.value}" if path else str(key.value)
            out[child] = key.start_mark.line + 1
            _index_lines(value, child, out)
            out[child] = key.start_mark.line + 1
    elif isinstance(node, yaml.SequenceNode):
        for i, item in enumerate(node.value):
            _index_lines(item, f"{path}[{i}]", out)


class _Reader:
    def __init__(self, lines: dict):
        self.lines = lines

    def fail(self, path: str, message: str):
        line = self.lines.get(path)
        if line is None:
            parent = path
            while line is None and ("." in parent or "[" in parent):
                parent = parent[: max(parent.rfind("."), parent.rfind("["))]
                line = self.lines.get(parent)
        raise ScenarioError(message, field=path, line=line)

    def mapping(self, value, path: str, allowed: tuple[str, ...]) -> dict:
        if value is None:
            return {}
        if not isinstance(value, dict):
            self.fail(path, "expected a mapping")
        for key in value:
            if key not in allowed:
                self.fail(f"{path}.{key}" if path else str(key), f"unknown field; expected one of {', '.join(allowed)}")
        return value

    def number(self, data: dict, key: str, path: str, *, default=None, required=False,
               lo=None, hi=None, lo_open=False, hi_open=False) -> float | None:
        field = f"{path}.{key}" if path else key
        if key not in data or data[key] is None:
            if required:
                self.fail(field, "required field missing")
            return default
        value = data[key]
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            self.fail(field, f"expected a number, got {value!r}")
        value = float(value)
        if not math.isfinite(value):
            self.fail(field, f"must be finite, got {value}")
        if lo is not None and (value < lo or (lo_open and value == lo)):
            self.fail(field, f"value {value} out of range: must be {'>' if lo_open else '>='} {lo}")
        if hi is not None and (value > hi or (hi_open and value == hi)):
            self.fail(field, f"value {value} out of range: must be {'<' if hi_open else '<='} {hi}")
        return value

    def angle(self, data: dict, key: str, path: str, *, default=None, required=False, lo=None, hi=None,
              lo_open=False):
        """Read ``key`` (radians) or ``key_deg`` (degrees); range bounds in radians."""
        deg_key = f"{key}_deg"
        if key in data and deg_key in data:
            self.fail(f"{path}.{deg_key}", f"give either {key} or {deg_key}, not both")
        if deg_key in data:
            field, raw = deg_key, self.number(data, deg_key, path)
            value = None if raw is None else math.radians(raw)
            shown = lambda b: f"{math.degrees(b):g} deg"  # noqa: E731
        else:
            field, value = key, self.number(data, key, path)
            shown = lambda b: f"{b:.6g} rad"  # noqa: E731
        if value is None:
            if required:
                self.fail(f"{path}.{key}", f"required field missing (give {key} or {deg_key})")
            return default
        if lo is not None and (value < lo or (lo_open and value == lo)):
            self.fail(f"{path}.{field}", f"angle out of range: must be {'>' if lo_open else '>='} {shown(lo)}")
        if hi is not None and value > hi + 1e-15:
            self.fail(f"{path}.{field}", f"angle out of range: must be <= {shown(hi)}")
        return min(value, hi) if hi is not None else value


# -- parsing ------------------------------------------------------------------

_TOP = ("name", "description", "network", "robot", "run")
_NETWORK = ("pipe", "inner_radius", "incline", "incline_deg", "segments")
_STRAIGHT = ("length",)
_BEND = ("angle", "angle_deg", "radius", "arc_length", "roll", "roll_deg", "clearance_delta")
_ROBOT = ("nominal_speed", "contact_radius", "mass", "friction_mu", "module_angles", "module_angles_deg",
          "module_preloads", "spring", "transmission")
_SPRING = ("stiffness", "preload", "max_travel")
_TRANSMISSION = ("overall_ratio", "loss_factor")
_RUN = ("mode", "roll", "roll_deg", "dt", "sample_every", "time_cap", "output_dir", "format")


def parse_scenario(text: str) -> Scenario:
    """Parse and validate scenario text; raises :class:`ScenarioError`."""
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        problem = getattr(exc, "problem", None) or str(exc)
        raise ScenarioError(f"syntax error: {problem}", line=None if mark is None else mark.line + 1) from None
    if node is None:
        raise ScenarioError("syntax error: scenario is empty")
    data = yaml.SafeLoader("").construct_document(node)
    lines: dict = {}
    _index_lines(node, "", lines)
    rd = _Reader(lines)
    if not isinstance(data, dict):
        raise ScenarioError("syntax error: top level must be a mapping", line=1)
    rd.mapping(data, "", _TOP)

    name = data.get("name")
    if not isinstance(name, str) or not name.strip():
        rd.fail("name", "required non-empty string")
    description = data.get("description") or ""

    pipe, network, incline = _parse_network(rd, data.get("network"))
    robot = _parse_robot(rd, data.get("robot"), network)
    run = rd.mapping(data.get("run"), "run", _RUN)

    try:
        mode = DriveMode.parse(run.get("mode", "differential"))
    except DomainError as exc:
        rd.fail("run.mode", str(exc))
    fmt = run.get("format", "csv")
    if fmt not in FORMATS:
        rd.fail("run.format", f"unknown format {fmt!r}; use one of {', '.join(FORMATS)}")
    sample_every = run.get("sample_every", 1)
    if isinstance(sample_every, bool) or not isinstance(sample_every, int) or sample_every < 1:
        rd.fail("run.sample_every", f"must be an integer >= 1, got {sample_every!r}")
    output_dir = run.get("output_dir")
    if output_dir is not None and not isinstance(output_dir, str):
        rd.fail("run.output_dir", "expected a path string")

    return Scenario(
        name=name.strip(),
        description=str(description),
        network=network,
        robot=robot,
        mode=mode,
        roll=rd.angle(run, "roll", "run", default=0.0),
        dt=rd.number(run, "dt", "run", default=0.01, lo=0.0, lo_open=True),
        sample_every=sample_every,
        time_cap=rd.number(run, "time_cap", "run", lo=0.0),
        output_dir=output_dir,
        format=fmt,
        pipe=pipe,
        incline=incline,
    )


def _parse_network(rd: _Reader, raw):
    if raw is None:
        rd.fail("network", "required section missing")
    net = rd.mapping(raw, "network", _NETWORK)
    pipe = net.get("pipe")
    size = None
    if pipe is not None:
        try:
            size = catalog.lookup(pipe)
        except CatalogKeyError as exc:
            rd.fail("network.pipe", str(exc))
        pipe = str(pipe)
    inner = rd.number(net, "inner_radius", "network", lo=0.0, lo_open=True,
                      default=None if size is None else size.inner_radius, required=size is None)
    incline = rd.angle(net, "incline", "network", default=math.pi / 2, lo=-math.pi / 2, hi=math.pi / 2)

    raw_segments = net.get("segments")
    if not isinstance(raw_segments, list) or not raw_segments:
        rd.fail("network.segments", "need a non-empty list of segments")
    segments = []
    for i, entry in enumerate(raw_segments):
        path = f"network.segments[{i}]"
        if not isinstance(entry, dict) or len(entry) != 1:
            rd.fail(path, "each segment is a mapping with a single key, 'straight' or 'bend'")
        (kind, body), = entry.items()
        path = f"{path}.{kind}"
        if kind == "straight":
            body = rd.mapping(body, path, _STRAIGHT)
            segments.append(StraightSegment(rd.number(body, "length", path, required=True, lo=0.0, lo_open=True)))
        elif kind == "bend":
            segments.append(_parse_bend(rd, body, path, inner, size))
        else:
            rd.fail(path, f"unknown segment type {kind!r}; use 'straight' or 'bend'")
    try:
        network = PipeNetwork(inner, segments, origin=origin_pose(incline))
    except DomainError as exc:
        rd.fail("network.segments", str(exc))
    return pipe, network, incline


def _parse_bend(rd: _Reader, body, path: str, inner: float, size) -> BendSegment:
    body = rd.mapping(body, path, _BEND)
    angle = rd.angle(body, "angle", path, required=True, lo=0.0, lo_open=True, hi=math.pi)
    if "radius" in body and "arc_length" in body:
        rd.fail(f"{path}.arc_length", "give either radius or arc_length, not both")
    if body.get("radius") in ("long", "LR", "long_radius"):
        if size is None:
            rd.fail(f"{path}.radius", "'long' radius needs a catalog pipe in network.pipe")
        radius = size.long_radius
    elif "arc_length" in body:
        radius = rd.number(body, "arc_length", path, lo=0.0, lo_open=True) / angle
    else:
        radius = rd.number(body, "radius", path, required=True, lo=0.0, lo_open=True)
    if radius <= inner:
        field = f"{path}.arc_length" if "arc_length" in body else f"{path}.radius"
        rd.fail(field, f"bend radius {radius:.6g} must exceed pipe inner radius {inner:.6g}")
    return BendSegment(
        bend_radius=radius,
        bend_angle=angle,
        plane_roll=rd.angle(body, "roll", path, default=0.0),
        clearance_delta=rd.number(body, "clearance_delta", path, default=DEFAULT_CLEARANCE),
    )


def _parse_robot(rd: _Reader, raw, network: PipeNetwork) -> RobotConfig:
    if raw is None:
        rd.fail("robot", "required section missing")
    rob = rd.mapping(raw, "robot", _ROBOT)
    spring_raw = rd.mapping(rob.get("spring"), "robot.spring", _SPRING)
    max_travel = rd.number(spring_raw, "max_travel", "robot.spring", default=DEFAULT_MAX_TRAVEL, lo=0.0, lo_open=True)
    spring = SpringConfig(
        stiffness=rd.number(spring_raw, "stiffness", "robot.spring", default=4.0, lo=0.0, lo_open=True),
        preload_compression=rd.number(spring_raw, "preload", "robot.spring", default=5.0, lo=0.0, hi=max_travel),
        max_travel=max_travel,
    )
    tr_raw = rd.mapping(rob.get("transmission"), "robot.transmission", _TRANSMISSION)
    transmission = TransmissionConfig(
        overall_ratio=rd.number(tr_raw, "overall_ratio", "robot.transmission", default=1.0, lo=0.0, lo_open=True),
        loss_factor=rd.number(tr_raw, "loss_factor", "robot.transmission", default=0.0, lo=0.0, hi=1.0, hi_open=True),
    )

    angles = (0.0, 2.0 * math.pi / 3.0, 4.0 * math.pi / 3.0)
    if "module_angles" in rob and "module_angles_deg" in rob:
        rd.fail("robot.module_angles_deg", "give either module_angles or module_angles_deg, not both")
    for key, conv in (("module_angles", float), ("module_angles_deg", math.radians)):
        if key in rob:
            vals = rob[key]
            if not isinstance(vals, list) or len(vals) != 3 or not all(
                isinstance(v, (int, float)) and not isinstance(v, bool) for v in vals
            ):
                rd.fail(f"robot.{key}", "need exactly three numbers")
            angles = tuple(conv(v) for v in vals)

    preloads = rob.get("module_preloads")
    if preloads is not None:
        if not isinstance(preloads, list) or len(preloads) != 3:
            rd.fail("robot.module_preloads", "need exactly three numbers")
        for i, p in enumerate(preloads):
            if isinstance(p, bool) or not isinstance(p, (int, float)) or not (0.0 <= p <= max_travel):
                rd.fail(f"robot.module_preloads[{i}]", f"must be a number in [0, {max_travel}], got {p!r}")
        preloads = tuple(float(p) for p in preloads)

    contact = rd.number(rob, "contact_radius", "robot", default=network.inner_radius, lo=0.0, lo_open=True,
                        hi=network.inner_radius)
    try:
        return RobotConfig(
            contact_radius=contact,
            spring=spring,
            nominal_speed=rd.number(rob, "nominal_speed", "robot", required=True, lo=0.0, lo_open=True),
            mass=rd.number(rob, "mass", "robot", default=2.0, lo=0.0),
            friction_mu=rd.number(rob, "friction_mu", "robot", default=0.5, lo=0.0),
            transmission=transmission,
            module_angles=angles,
            module_preloads=preloads,
        )
    except DomainError as exc:
        rd.fail("robot", str(exc))


# -- serialization ------------------------------------------------------------

def scenario_to_dict(sc: Scenario) -> dict:
    net: dict = {}
    if sc.pipe is not None:
        net["pipe"] = sc.pipe
    net["inner_radius"] = sc.network.inner_radius
    net["incline"] = sc.incline
    segs = []
    for seg in sc.network.segments:
        if isinstance(seg, StraightSegment):
            segs.append({"straight": {"length": seg.length}})
        else:
            segs.append({"bend": {
                "angle": seg.bend_angle,
                "radius": seg.bend_radius,
                "roll": seg.plane_roll,
                "clearance_delta": seg.clearance_delta,
            }})
    net["segments"] = segs
    r = sc.robot
    robot = {
        "nominal_speed": r.nominal_speed,
        "contact_radius": r.contact_radius,
        "mass": r.mass,
        "friction_mu": r.friction_mu,
        "module_angles": list(r.module_angles),
        "spring": {
            "stiffness": r.spring.stiffness,
            "preload": r.spring.preload_compression,
            "max_travel": r.spring.max_travel,
        },
        "transmission": {
            "overall_ratio": r.transmission.overall_ratio,
            "loss_factor": r.transmission.loss_factor,
        },
    }
    if r.module_preloads is not None:
        robot["module_preloads"] = list(r.module_preloads)
    run = {
        "mode": sc.mode.value,
        "roll": sc.roll,
        "dt": sc.dt,
        "sample_every": sc.sample_every,
        "time_cap": sc.time_cap,
        "format": sc.format,
    }
    if sc.output_dir is not None:
        run["output_dir"] = sc.output_dir
    out = {"name": sc.name}
    if sc.description:
        out["description"] = sc.description
    out.update(network=net, robot=robot, run=run)
    return out


def serialize_scenario(sc: Scenario) -> str:
    """Canonical text form; ``parse_scenario(serialize_scenario(sc)) == sc``."""
    return yaml.safe_dump(scenario_to_dict(sc), sort_keys=False, default_flow_style=False)


# -- files and gallery --------------------------------------------------------

def gallery() -> dict[str, Path]:
    root = resources.files("pipeclimb") / "scenarios"
    return {Path(p.name).stem: Path(str(p)) for p in root.iterdir() if p.name.endswith(".scn")}


def resolve_scenario_path(ref: str | Path) -> Path:
    path = Path(ref)
    if path.exists():
        return path
    shipped = gallery()
    if str(ref) in shipped:
        return shipped[str(ref)]
    if path.stem in shipped and not path.parent.parts:
        return shipped[path.stem]
    raise FileNotFoundError(f"scenario {str(ref)!r} not found (gallery: {', '.join(sorted(shipped))})")


def load_scenario(ref: str | Path) -> Scenario:
    """Load a scenario file, or a gallery scenario by name (e.g. ``reference``)."""
    return parse_scenario(resolve_scenario_path(ref).read_text())
