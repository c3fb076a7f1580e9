"""Galerkin boundary-operator assembly for the 2D Helmholtz equation.

Single layer, double layer, adjoint double layer and hypersingular operator
matrices over closed polygonal meshes with linear (hat) basis functions.
Singular segment-pair integrals use semi-analytical closed forms and
singularity-cancelling coordinate transforms; a brute-force oracle module
provides independent reference values for testing.
"""
from .assembly import (Method, MethodComparison, Operator, OperatorMatrix,
                       assemble, compare_methods)
from .geometry import (Mesh, MeshFormatError, NodeEnd, PairTag,
                       SegmentPairClass, adjacent_angle, basis_curl,
                       classify_pair, load_mesh, load_mesh_file, loads_mesh,
                       make_mesh, regular_polygon)
from .kernels import KernelContext, d2g_dndnp, dg_dn, dg_dnp, green
from .matrixio import read_matrix, write_matrix
from .quadrature import QuadRule, gl_rule, integrate_1d, integrate_1d_refined, integrate_2d
from .specfun import (BesselFamily, HankelKind, bessel, gamma0, gamma2,
                      hankel, hankel_reg, int_h0, int_h0_x)

__version__ = "0.1.0"

__all__ = [
    "BesselFamily",
    "HankelKind",
    "KernelContext",
    "Mesh",
    "MeshFormatError",
    "Method",
    "MethodComparison",
    "NodeEnd",
    "Operator",
    "OperatorMatrix",
    "PairTag",
    "QuadRule",
    "SegmentPairClass",
    "adjacent_angle",
    "assemble",
    "basis_curl",
    "bessel",
    "classify_pair",
    "compare_methods",
    "d2g_dndnp",
    "dg_dn",
    "dg_dnp",
    "gamma0",
    "gamma2",
    "gl_rule",
    "green",
    "hankel",
    "hankel_reg",
    "int_h0",
    "int_h0_x",
    "integrate_1d",
    "integrate_1d_refined",
    "integrate_2d",
    "load_mesh",
    "load_mesh_file",
    "loads_mesh",
    "make_mesh",
    "read_matrix",
    "regular_polygon",
    "write_matrix",
    "__version__",
]
