class GeometryError(ValueError):
    """Base class for errors raised by the geometry engine."""


class DomainError(GeometryError):
    """A point or stencil falls outside the chart's domain box."""


class DegenerateMetricError(GeometryError):
    """``|det g|`` is below the degeneracy floor."""


class DegeneratePlaneError(GeometryError):
    """A tangent plane is degenerate (or fails the invariants of a null plane)."""


class SignatureError(GeometryError):
    """The metric has the wrong signature for the requested operation."""


class FlowError(GeometryError):
    """Flow integration left the domain or could not take a step."""


class ConfigError(ValueError):
    """Invalid suite configuration or space/field descriptor."""
