"""Track-wall contact relations and the spring suspension.

Units: mm, N, kg. The stiffness sizing rule ``K_s = mu * N / 9`` is used as
given, in N/mm; the constant 9 has no further derivation here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .errors import DomainError, TravelLimitError

GRAVITY = 9.81  # m/s^2
DEFAULT_MAX_TRAVEL = 16.0  # mm


@dataclass(frozen=True)
class SpringConfig:
    stiffness: float
    preload_compression: float = 0.0
    max_travel: float = DEFAULT_MAX_TRAVEL

    def __post_init__(self):
        if not (math.isfinite(self.stiffness) and self.stiffness > 0):
            raise DomainError(f"spring stiffness must be > 0, got {self.stiffness}")
        if not (math.isfinite(self.max_travel) and self.max_travel > 0):
            raise DomainError(f"max_travel must be > 0, got {self.max_travel}")
        if not (0.0 <= self.preload_compression <= self.max_travel):
            raise DomainError(
                f"preload {self.preload_compression} mm outside [0, {self.max_travel}] mm"
            )


@dataclass(frozen=True)
class ContactState:
    normal_force: float
    friction_mu: float
    contact_angle: float = math.pi / 2

    def __post_init__(self):
        if not self.normal_force >= 0:
            raise DomainError(f"normal force must be >= 0, got {self.normal_force}")
        if not self.friction_mu >= 0:
            raise DomainError(f"friction coefficient must be >= 0, got {self.friction_mu}")
        if not (0.0 <= self.contact_angle <= math.pi / 2):
            raise DomainError(f"contact angle must lie in [0, pi/2], got {self.contact_angle}")


def contact_angle(AO: float, OC: float) -> float:
    """Contact inclination angle ``arctan(AO / OC)``."""
    if not OC > 0:
        raise DomainError(f"OC must be > 0, got {OC}")
    if not AO >= 0:
        raise DomainError(f"AO must be >= 0, got {AO}")
    return math.atan(AO / OC)


def holding_force(N: float, mu: float, angle: float) -> float:
    """Holding force ``H = (N + mu N) sin(angle)``."""
    if not N >= 0:
        raise DomainError(f"normal force must be >= 0, got {N}")
    if not mu >= 0:
        raise DomainError(f"friction coefficient must be >= 0, got {mu}")
    if not (0.0 <= angle <= math.pi / 2):
        raise DomainError(f"angle must lie in [0, pi/2], got {angle}")
    return (N + mu * N) * math.sin(angle)


def spring_stiffness_rule(mu: float, N: float) -> float:
    """Recommended spring stiffness (N/mm) for friction ``mu`` and normal force ``N``."""
    if not (mu >= 0 and N >= 0):
        raise DomainError(f"mu and N must be >= 0, got mu={mu}, N={N}")
    return mu * N / 9.0


def normal_force(spring: SpringConfig, compression: float, module: str = "?") -> float:
    """Linear spring force at ``compression`` mm; raises past the travel stops."""
    if not (0.0 <= compression <= spring.max_travel):
        raise TravelLimitError(module, compression, spring.max_travel)
    return spring.stiffness * compression


def no_slip_margin(mass: float, gravity_axis_component: float, contacts: Iterable[ContactState]) -> float:
    """Available traction minus the axial weight the tracks must carry (N).

    ``gravity_axis_component`` is the cosine between the pipe axis and the
    vertical; positive margin means the tracks can hold a steady climb.
    """
    contacts = list(contacts)
    if not contacts:
        raise DomainError("no_slip_margin needs at least one contact")
    if not (-1.0 <= gravity_axis_component <= 1.0):
        raise DomainError(f"gravity axis component must lie in [-1, 1], got {gravity_axis_component}")
    traction = math.fsum(c.friction_mu * c.normal_force for c in contacts)
    return traction - mass * GRAVITY * abs(gravity_axis_component)
