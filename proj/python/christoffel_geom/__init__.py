"""Christoffel symbols, coordinate transformation laws and connection uniqueness checks.

Indices are 0-based throughout; rank-3 arrays are laid out [upper, lower, lower].
"""

from ._core import (
    AsymmetricMetricError,
    CoordinateMap,
    DomainError,
    Error,
    Expression,
    GenericityError,
    InconsistentSystemError,
    InverseMismatchError,
    MetricField,
    MetricSample,
    ParseError,
    ShapeError,
    SingularMapError,
    SingularMetricError,
    TransformContext,
    UnknownIdentifierError,
    __version__,
    christoffel,
    metricity_residual,
    parse,
    parse_metric,
    random_spd_metric,
    run_cli,
    sample_metric,
    uniqueness_report,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
