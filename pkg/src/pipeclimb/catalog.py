"""Schedule-40 pipe and long-radius elbow dimensions.

Outside diameters and schedule-40 wall thicknesses are the ASME B36.10M
values in inches; long-radius 90/180 degree elbows per ASME B16.9 have a
centerline radius of 1.5 x the nominal pipe size.

    size    OD [in]   wall [in]   ID [mm]    LR radius [mm]
    NPS 8    8.625     0.322      202.717    304.8
    NPS 10  10.750     0.365      254.508    381.0
    NPS 12  12.750     0.406      303.225    457.2
    NPS 14  14.000     0.438      333.350    533.4

There is no NPS 11; use NPS 10 or NPS 12 explicitly.
"""
from __future__ import annotations

from typing import NamedTuple

from .errors import CatalogKeyError

MM_PER_INCH = 25.4


class PipeSize(NamedTuple):
    nominal: float
    outside_diameter_in: float
    wall_in: float

    @property
    def inner_radius(self) -> float:
        return (self.outside_diameter_in - 2.0 * self.wall_in) * MM_PER_INCH / 2.0

    @property
    def long_radius(self) -> float:
        return 1.5 * self.nominal * MM_PER_INCH


SCHEDULE_40 = {
    "NPS 8": PipeSize(8, 8.625, 0.322),
    "NPS 10": PipeSize(10, 10.750, 0.365),
    "NPS 12": PipeSize(12, 12.750, 0.406),
    "NPS 14": PipeSize(14, 14.000, 0.438),
}


def _normalize(key) -> str:
    if isinstance(key, (int, float)) and not isinstance(key, bool):
        return f"NPS {int(key)}" if float(key).is_integer() else f"NPS {key}"
    text = " ".join(str(key).upper().split())
    if text.startswith("NPS") and not text.startswith("NPS "):
        text = "NPS " + text[3:]
    return text


def lookup(key) -> PipeSize:
    try:
        return SCHEDULE_40[_normalize(key)]
    except KeyError:
        raise CatalogKeyError(key, SCHEDULE_40) from None


def elbow_catalog(nominal_size) -> tuple[float, float]:
    """Return ``(inner_radius, long_radius_bend_radius)`` in mm for a catalog size.

    Accepts ``"NPS 10"``, ``"nps10"`` or the bare number ``10``.
    """
    size = lookup(nominal_size)
    return size.inner_radius, size.long_radius
