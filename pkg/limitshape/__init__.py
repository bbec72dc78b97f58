"""
Limitshape package - limit shapes and arctic curves of planar lattice models.

Modules:
- hplane: harmonic extensions of step data on a half-plane, real Mobius maps
- elliptic: theta, Weierstrass sigma and zeta on rectangular lattices
- models: spectral data of the domino, fortress, five-vertex and lozenge models
- regions: polygonal regions, facet planes and boundary tables
- solver: rational cover parameter problem
- envelope: limit shape surface and arctic curve
- fourvertex: four-vertex arctic curves from the lozenge hexagon
- presets: named regions from config/regions.yaml
"""

__version__ = "0.1.0"

from .logger import get_logger, set_verbosity
from .errors import LimitShapeError

from .hplane import (
    AT_INFINITY,
    BoundaryData,
    Mobius,
    harmonic_eval,
    holomorphic_deriv,
    holomorphic_deriv2,
    mobius_from_three_points,
    pushforward,
)

from .elliptic import RectLattice, theta1, wsigma, wzeta

from .models import (
    FortressField,
    ModelKind,
    ModelSpec,
    domino_slopes,
    domino_w_of_z,
    fortress_field,
    fv_slopes,
    fv_theta,
    fv_w_of_z,
    model_spec,
)

from .regions import (
    BoundaryTables,
    FacetPlane,
    PolygonRegion,
    aztec_region,
    balance_check,
    boundary_tables,
    facet_planes,
    fv_hexagon_region,
    octagon_region,
    validate_region,
)

from .solver import (
    RationalMap,
    SolvedShape,
    closed_form_fv_hexagon,
    closed_form_octagon,
    critical_points,
    octagon_feasibility,
    residuals,
    rmap_deriv,
    rmap_eval,
    solve_parameters,
)

from .envelope import (
    ArcticCurve,
    SurfaceSample,
    arctic_point,
    classify_facet,
    fortress_surface_point,
    jacobian_sign,
    sample_arctic,
    sample_surface,
    surface_point,
    tangency_point,
)

from .fourvertex import (
    Conic,
    Hexagon,
    conic_from_tangent_lines,
    fourvertex_arctic,
    inscribed_conic,
    kappa_of_t,
    lozenge_facets,
    shear3d,
    sigma_transform,
    slope_map,
    unshear3d,
)

__all__ = [
    # Logging and errors
    'get_logger',
    'set_verbosity',
    'LimitShapeError',
    # Half-plane
    'AT_INFINITY',
    'BoundaryData',
    'Mobius',
    'harmonic_eval',
    'holomorphic_deriv',
    'holomorphic_deriv2',
    'mobius_from_three_points',
    'pushforward',
    # Elliptic functions
    'RectLattice',
    'theta1',
    'wsigma',
    'wzeta',
    # Models
    'FortressField',
    'ModelKind',
    'ModelSpec',
    'domino_slopes',
    'domino_w_of_z',
    'fortress_field',
    'fv_slopes',
    'fv_theta',
    'fv_w_of_z',
    'model_spec',
    # Regions
    'BoundaryTables',
    'FacetPlane',
    'PolygonRegion',
    'aztec_region',
    'balance_check',
    'boundary_tables',
    'facet_planes',
    'fv_hexagon_region',
    'octagon_region',
    'validate_region',
    # Solver
    'RationalMap',
    'SolvedShape',
    'closed_form_fv_hexagon',
    'closed_form_octagon',
    'critical_points',
    'octagon_feasibility',
    'residuals',
    'rmap_deriv',
    'rmap_eval',
    'solve_parameters',
    # Envelope
    'ArcticCurve',
    'SurfaceSample',
    'arctic_point',
    'classify_facet',
    'fortress_surface_point',
    'jacobian_sign',
    'sample_arctic',
    'sample_surface',
    'surface_point',
    'tangency_point',
    # Four-vertex
    'Conic',
    'Hexagon',
    'conic_from_tangent_lines',
    'fourvertex_arctic',
    'inscribed_conic',
    'kappa_of_t',
    'lozenge_facets',
    'shear3d',
    'sigma_transform',
    'slope_map',
    'unshear3d',
]
