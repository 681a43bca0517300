"""Neutral coated disk.

A disk of conductivity 5 in a unit-conductivity background becomes invisible
to uniform fields when the interface parameter equals
sigma_c sigma_m / (gamma (sigma_c - sigma_m)).  The script checks the matrix
pipeline against the separation-of-variables closed form, lets the Newton
designer find the neutral value from random seeds, and verifies the boundary
conditions of the resulting potential.
"""
import numpy as np

from inclusion_forge import ConformalMap, InterfaceFunction, MaterialParams
from inclusion_forge.designer import DesignProblem, newton_solve
from inclusion_forge.faber import faber_table
from inclusion_forge.field import boundary_residual, eval_exterior
from inclusion_forge.interface import build_interface_matrices
from inclusion_forge.tensors import (
    assemble_system,
    compute_tensors,
    disk_gpt_closed_form,
    solve_coefficients,
)


def main():
    disk = ConformalMap.disk(1.0)
    mat = MaterialParams(5.0, 1.0)

    print("N2_nn on the unit disk: pipeline vs closed form")
    for p0 in (0.5, 2.0, 10.0):
        ts = compute_tensors(disk, InterfaceFunction(1.0, [p0]), mat, 100, 4)
        _, ref = disk_gpt_closed_form(mat, 1.0, p0, 4)
        print(f"  p0 = {p0:5.2f}:", np.round(np.diag(ts.N2).real, 6), " max diff",
              f"{np.abs(ts.N2 - ref).max():.1e}")

    res = newton_solve(DesignProblem(disk, mat, (0,), 1))
    p0 = res.p_coeffs.coefficient(0).real
    print(f"\ndesigned p0 = {p0:.12f} after {res.iterations} iterations (expected 1.25)")

    fab = faber_table(disk, 100)
    ifn = res.p_coeffs
    sys = assemble_system(disk, fab, build_interface_matrices(ifn, 100), mat)
    sol = solve_coefficients(sys, fab, mat, [1.0])
    z = np.array([1.5, 2j, -3 + 1j])
    print("u - x1 outside:", eval_exterior(sol, disk, z=z) - z.real)
    rep = boundary_residual(sol, disk, ifn, mat)
    print(f"boundary residuals: flux {rep.max_flux_residual:.1e}, jump {rep.max_jump_residual:.1e}")


if __name__ == "__main__":
    main()
