"""Polarization tensors of planar inclusions with imperfect interfaces.

The inclusion is described by an exterior conformal map, the interface by
the Laurent coefficients of ``h p`` on the circle ``|w| = gamma``.  The
package computes Faber-polynomial and generalized polarization tensors,
designs interface coefficients that make leading tensors vanish, and
evaluates and verifies the resulting potential.
"""
from importlib.resources import files

from .conformal import (
    ConformalMap,
    boundary_polyline,
    classify_point,
    eval_psi,
    eval_psi_prime,
    load_shape,
    save_shape,
    scale_factor,
)
from .designer import DesignProblem, DesignResult, load_design, newton_solve, residual
from .exceptions import (
    ConfigurationError,
    ConvergenceError,
    InclusionForgeError,
    NearSingularError,
    NumericalError,
)
from .faber import FaberTable, eval_faber, faber_table, grunsky_matrix
from .field import (
    boundary_residual,
    contour_paths,
    contours_to_svg,
    eval_exterior,
    eval_field,
    eval_interior,
    invert_psi,
    multipole_coefficients,
    sample_grid,
)
from .interface import InterfaceFunction, build_interface_matrices, eval_p, load_interface
from .tensors import (
    MODELS,
    MaterialParams,
    TensorSet,
    assemble_system,
    compute_fpt,
    compute_gpt,
    compute_tensors,
    disk_gpt_closed_form,
    solve_coefficients,
)

__version__ = "0.1.0"


def data_path(name):
    """Path of a bundled example file (shapes, interfaces, design specs)."""
    return files(__name__) / "data" / name
