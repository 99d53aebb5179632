"""Quartic anharmonic oscillator toolkit: exact perturbation series,
semiclassical terms, the variational approximant and Lagrange-mesh
reference energies.

Results come back as plain dicts with the same layout as the JSON written by
the ``anharmonic`` command-line tool.
"""

from ._core import (
    NumericalError,
    a_fit,
    b_fit,
    gb_terms,
    ground_state_ab,
    log_psi,
    mesh_energy,
    optimize,
    optimize_radial,
    radial_mesh_energy,
    rb_coefficients,
    run_acceptance,
    solve_chain,
)

__all__ = [
    "NumericalError",
    "a_fit",
    "b_fit",
    "gb_terms",
    "ground_state_ab",
    "log_psi",
    "mesh_energy",
    "optimize",
    "optimize_radial",
    "radial_mesh_energy",
    "rb_coefficients",
    "run_acceptance",
    "solve_chain",
]
