"""Right-hand sides of the Blackstock equation and its linearization.

The equation for the acoustic velocity potential is

    psi_tt - c^2 (1 - 2 k psi_t) Delta psi - b Delta psi_t
        + 2 sigma grad psi . grad psi_t = 0,

which this module rearranges as ``psi_tt = c^2 Delta psi + b Delta v + f``
with ``v = psi_t`` and the quadratic source

    f = -2 k c^2 v Delta psi - 2 sigma grad psi . grad v.

The frozen-coefficient linearization replaces ``v`` by a given coefficient
field ``alpha`` inside the products and adds a forcing ``ftilde``:

    psi_tt = c^2 Delta psi + b Delta v
             - 2 k c^2 alpha Delta psi - 2 sigma grad psi . grad alpha + ftilde.

With ``alpha = v`` and ``ftilde = 0`` the linearized operator reproduces the
nonlinear one identically.  All quadratic terms are formed pointwise on the
padded grid and projected exactly back onto the retained span.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import SimState
from .grid import (
    SpectralField,
    padded_field_values,
    padded_gradient_values,
    project_padded_to_sine,
)

__all__ = [
    "MediumParams",
    "nonlinear_acceleration",
    "assemble_f",
    "linearized_acceleration",
]


@dataclass(frozen=True)
class MediumParams:
    """Medium coefficients: sound speed ``c``, diffusivity ``b``, nonlinearity ``k``, ``sigma``."""

    c: float = 1.0
    b: float = 1.0
    k: float = 0.0
    sigma: float = 0.0

    def __post_init__(self):
        for name in ("c", "b", "k", "sigma"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"medium coefficient {name} must be finite")
        if self.c <= 0:
            raise ValueError("sound speed must be positive")
        if self.b <= 0:
            raise ValueError("sound diffusivity must be positive")


def _quadratic_source(
    psi: SpectralField, alpha: SpectralField, p: MediumParams
) -> SpectralField:
    # -2 k c^2 alpha Delta psi - 2 sigma grad psi . grad alpha, projected exactly.
    grid = psi.grid
    if p.k == 0.0 and p.sigma == 0.0:
        return grid.zeros()
    values = None
    if p.k != 0.0:
        lap_psi = psi.laplacian()
        values = (
            -2.0 * p.k * p.c**2
            * padded_field_values(alpha)
            * padded_field_values(lap_psi)
        )
    if p.sigma != 0.0:
        grad_psi = padded_gradient_values(psi)
        grad_alpha = padded_gradient_values(alpha)
        dot = grad_psi[0] * grad_alpha[0]
        for gp, ga in zip(grad_psi[1:], grad_alpha[1:]):
            dot += gp * ga
        term = -2.0 * p.sigma * dot
        values = term if values is None else values + term
    return project_padded_to_sine(grid, values)


def assemble_f(state: SimState, p: MediumParams) -> SpectralField:
    """Quadratic source ``f = -2 k c^2 psi_t Delta psi - 2 sigma grad psi . grad psi_t``."""
    return _quadratic_source(state.psi, state.v, p)


def nonlinear_acceleration(state: SimState, p: MediumParams) -> SpectralField:
    """Full Blackstock acceleration ``psi_tt = c^2 Delta psi + b Delta v + f``."""
    lam = state.grid.laplacian_eigenvalues
    linear = lam * (p.c**2 * state.psi.coeffs + p.b * state.v.coeffs)
    f = assemble_f(state, p)
    return SpectralField(state.grid, linear + f.coeffs)


def linearized_acceleration(
    state: SimState,
    alpha: SpectralField,
    ftilde: SpectralField | None,
    p: MediumParams,
) -> SpectralField:
    """Frozen-coefficient acceleration with coefficient ``alpha`` and forcing ``ftilde``."""
    grid = state.grid
    if alpha.grid.extents != grid.extents or alpha.grid.modes != grid.modes:
        raise ValueError("alpha lives on a different grid")
    if ftilde is not None and (
        ftilde.grid.extents != grid.extents or ftilde.grid.modes != grid.modes
    ):
        raise ValueError("ftilde lives on a different grid")
    lam = grid.laplacian_eigenvalues
    out = lam * (p.c**2 * state.psi.coeffs + p.b * state.v.coeffs)
    out = out + _quadratic_source(state.psi, alpha, p).coeffs
    if ftilde is not None:
        out = out + ftilde.coeffs
    return SpectralField(grid, out)
