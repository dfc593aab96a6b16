"""Surface virtual element method on polygonal surface meshes.

The package solves the Laplace-Beltrami equation with lowest-order
virtual elements on flat-faced polygonal approximations of smooth
surfaces.  It ships two reproducible benchmarks (a closed sphere with a
zero-mean constraint and a pasted cylinder with Dirichlet data), mesh
generators for both, a seam-pasting step that keeps hanging nodes as
polygon vertices, and error/convergence reporting.
"""

from .analysis import (
    ErrorRecord,
    attach_eoc,
    errors,
    fit_slope,
    geometric_probe,
    interpolate,
    run_cylinder_convergence,
    run_sphere_convergence,
    slopes,
)
from .assembly import (
    DirichletConstraint,
    DiscreteSystem,
    ZeroMeanConstraint,
    assemble,
    dump_system,
    solve,
)
from .errors import (
    ConstraintMismatch,
    DegenerateFace,
    DegeneratePoint,
    InvalidParameter,
    SeamMismatch,
    SingularLocalSystem,
    SingularSystem,
    SvemError,
    ToleranceAmbiguity,
)
from .generators import cylinder_half, icosahedron, sphere_hybrid
from .mesh import (
    Diagnostic,
    ElementFrame,
    RegularityReport,
    SurfaceMesh,
    build_frame,
    kernel_radius,
    read_off,
    regularity,
    validate,
    write_off,
)
from .pasting import paste
from .surface import BenchmarkProblem, Cylinder, Sphere, benchmark
from .vem import LocalVem, local_mass, local_stiffness, monomial_mass, projector

__version__ = "1.0.0"

__all__ = [
    "BenchmarkProblem",
    "ConstraintMismatch",
    "Cylinder",
    "DegenerateFace",
    "DegeneratePoint",
    "Diagnostic",
    "DirichletConstraint",
    "DiscreteSystem",
    "ElementFrame",
    "ErrorRecord",
    "InvalidParameter",
    "LocalVem",
    "RegularityReport",
    "SeamMismatch",
    "SingularLocalSystem",
    "SingularSystem",
    "Sphere",
    "SurfaceMesh",
    "SvemError",
    "ToleranceAmbiguity",
    "ZeroMeanConstraint",
    "assemble",
    "attach_eoc",
    "benchmark",
    "build_frame",
    "cylinder_half",
    "dump_system",
    "errors",
    "fit_slope",
    "geometric_probe",
    "icosahedron",
    "interpolate",
    "kernel_radius",
    "local_mass",
    "local_stiffness",
    "monomial_mass",
    "paste",
    "projector",
    "read_off",
    "regularity",
    "run_cylinder_convergence",
    "run_sphere_convergence",
    "slopes",
    "solve",
    "sphere_hybrid",
    "validate",
    "write_off",
]
