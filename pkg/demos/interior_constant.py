"""Reduced system versus the system with an interior constant.

The reduced system expands the interior potential in Faber
polynomials of order n >= 1 only.  When the interface parameter varies along
the boundary, the jump condition also has a zero Fourier mode, which needs a
constant in the interior potential.  This script evaluates both systems at
the reference Example 1 interface and reports tensors and pointwise boundary
residuals.
"""
import numpy as np

from inclusion_forge import data_path, load_shape
from inclusion_forge.faber import faber_table
from inclusion_forge.field import boundary_residual
from inclusion_forge.interface import build_interface_matrices, load_interface
from inclusion_forge.tensors import MaterialParams, assemble_system, compute_tensors, solve_coefficients


def main():
    m = load_shape(data_path("example1.json"))
    mat = MaterialParams(5.0)
    ifn = load_interface(data_path("example1_p1.json"), 1.0)
    fab = faber_table(m, 100)
    for model in ("reduced", "full"):
        ts = compute_tensors(m, ifn, mat, 100, 2, faber=fab, model=model)
        sys = assemble_system(m, fab, build_interface_matrices(ifn, 100), mat, model=model)
        sol = solve_coefficients(sys, fab, mat, [1.0])
        rep = boundary_residual(sol, m, ifn, mat)
        row = np.array([ts.N1[0, 0], ts.N1[0, 1], ts.N2[0, 0], ts.N2[0, 1]]).real
        print(f"{model:>5}: N1_11 N1_12 N2_11 N2_12 = {np.round(row, 5)}")
        print(f"       interior constant {sol.const[0]:+.5f}, flux residual "
              f"{rep.max_flux_residual:.1e}, jump residual {rep.max_jump_residual:.1e}")


if __name__ == "__main__":
    main()
