"""Exception hierarchy shared by every pipeclimb module."""


class PipeClimbError(Exception):
    """Base class for all pipeclimb errors."""


class DomainError(PipeClimbError, ValueError):
    """An argument lies outside the domain of the operation."""


class TravelLimitError(DomainError):
    """A module's spring compression left its [0, max_travel] range."""

    def __init__(self, module: str, compression: float, max_travel: float, s: float | None = None):
        self.module = module
        self.compression = compression
        self.max_travel = max_travel
        self.s = s
        where = "" if s is None else f" at s={s:.6g} mm"
        super().__init__(
            f"module {module}: spring compression {compression:.6g} mm outside "
            f"[0, {max_travel:.6g}] mm{where}"
        )


class CatalogKeyError(PipeClimbError, KeyError):
    """Unknown pipe catalog key."""

    def __init__(self, key, available):
        self.key = key
        self.available = tuple(available)
        super().__init__(f"unknown pipe size {key!r}; available: {', '.join(self.available)}")

    def __str__(self):
        return self.args[0]


class ScenarioError(PipeClimbError, ValueError):
    """A scenario file failed to parse or validate."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        prefix = ""
        if line is not None:
            prefix += f"line {line}: "
        if field is not None:
            prefix += f"{field}: "
        super().__init__(prefix + message)
