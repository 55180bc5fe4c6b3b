"""Numerical verification of static and warped-product semi-Riemannian geometry."""

from .differentiation import DEFAULT_SCHEME, DerivativeScheme
from .errors import (
    ConfigError,
    DegenerateMetricError,
    DegeneratePlaneError,
    DomainError,
    FlowError,
    GeometryError,
    SignatureError,
)
from .manifold import (
    MetricField,
    ScalarField,
    VectorField,
    christoffel,
    coordinate_field,
    covariant_derivative,
    curvature_tensors,
    gaussian_curvature,
    lie_bracket,
    scalar_calculus,
    sectional_curvature,
    sectional_scan,
)
from .products import (
    DoublyWarpedSpec,
    Profile1D,
    SeparableWarpSpec,
    StaticProductSpec,
    WarpedProductSpec,
    build_doubly_warped,
    build_static,
    build_warped,
    flat_metric,
    lemma1_residuals,
)
from .report import DefectReport, sample_box
from .fields import (
    FieldDecomposition,
    dichotomy_scan,
    frobenius_defect,
    killing_defect,
    project_field,
    projection_residuals,
    proportionality_check,
)
from .flow import FlowConfig, Leaf, integrate_flow, verify_flow_decomposition
from .null import DegeneratePlane, curluz_residual, lightlike_sectional, null_curvature_scan
from .catalog import (
    CatalogSpace,
    StaticFieldFamily,
    catalog_field,
    catalog_metric,
    ode_residuals,
    ode_solution_catalog,
    tod_surface_metric,
)
from .einstein import EinsteinChainConfig, einstein_chain_residuals, einstein_defect
from .suites import SuiteConfig, SuiteReport, run_suite

__version__ = "0.1.0"
