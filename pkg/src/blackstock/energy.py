"""Energy, dissipation and Lyapunov diagnostics.

Quadratic functionals of the state ``(psi, v)``, writing ``||.||`` for the
L2 norm:

    E   = 1/2 ||v||^2 + (c^2/2) ||grad psi||^2 + (c^2/(2b)) ||Delta psi||^2
          + ||grad v||^2
    E1  = 1/2 ||v||^2 + (c^2/2) ||grad psi||^2
    E2  = (c^2/(2b)) ||Delta psi||^2
    F1  = int psi v + (b/2) ||grad psi||^2
    F2  = -int Delta psi v + (b/2) ||Delta psi||^2
    F3  = c^2 int grad psi . grad v + (b/2) ||grad v||^2
    L   = E1 + gamma1 E2 + gamma2 (F1 + F2) + gamma3 F3

The gradient terms enter squared throughout (the first derivative of
``||grad psi||^2`` is what the testing computation produces), and
``E = E1 + E2 + ||grad v||^2`` holds identically.  The cumulative dissipation

    D(t) = int_0^t ( ||grad v||^2 + ||Delta v||^2 + ||grad psi||^2
                     + ||Delta psi||^2 + ||psi_tt||^2 ) ds

and the time-weighted quantities ``sqrt(t) ||psi_tt||``, ``sqrt(t) ||Delta v||``
and the accumulated ``int_0^t s ||grad psi_tt||^2 ds`` are tracked along each
run; ``psi_tt`` is always the evaluated acceleration operator, never a finite
difference of the series.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .dynamics import MediumParams
from .fields import SimState
from .grid import Grid, SpectralField

__all__ = [
    "GammaWeights",
    "EnergySample",
    "energy_E",
    "functionals",
    "lyapunov_L",
    "equivalence_constants",
    "default_probe_states",
    "calibrated_gammas",
    "identity_residual",
    "weighted_norms",
    "instantaneous_diagnostics",
]


@dataclass(frozen=True)
class GammaWeights:
    """Lyapunov combination weights: small nonnegative constants.

    The decay machinery needs all three strictly positive (zero weights
    degenerate ``L`` to ``E1``); ``admissible`` is set by the equivalence
    scan and is True when the scanned lower constant ``C1_hat`` stayed
    positive.
    """

    gamma1: float = 0.1
    gamma2: float = 0.01
    gamma3: float = 0.05
    admissible: bool | None = None

    def __post_init__(self):
        if min(self.gamma1, self.gamma2, self.gamma3) < 0:
            raise ValueError("gamma weights must be nonnegative")


@dataclass(frozen=True)
class EnergySample:
    """One time point of the diagnostic record.

    ``grad_v_sq`` (= ``||grad v||^2``) and ``f_dot_v`` (= ``int f v``) are the
    instantaneous ingredients of the first energy identity and are kept so
    residuals can be formed from a stored series.
    """

    t: float
    E: float
    E1: float
    E2: float
    F1: float
    F2: float
    F3: float
    L: float
    D_cum: float
    w_ptt: float
    w_lap_vt: float
    w_grad_ptt: float
    grad_v_sq: float
    f_dot_v: float

    #: Column order of the series CSV written by the command-line runner.
    CSV_COLUMNS = ("t", "E", "E1", "E2", "F1", "F2", "F3", "L", "D_cum", "w_ptt", "w_lap_vt")


def _inner(a: SpectralField, b: SpectralField, weight: np.ndarray | float = 1.0) -> float:
    nu = a.grid.coeff_weight
    return float(np.sum(weight * a.coeffs * b.coeffs) * nu)


def functionals(state: SimState, p: MediumParams) -> tuple[float, float, float, float, float]:
    """The tuple ``(E1, E2, F1, F2, F3)``."""
    grid = state.grid
    lam = grid.laplacian_eigenvalues
    psi, v = state.psi, state.v
    l2v_sq = _inner(v, v)
    h1p_sq = _inner(psi, psi, -lam)
    h2p_sq = _inner(psi, psi, lam * lam)
    h1v_sq = _inner(v, v, -lam)
    cc = p.c**2
    E1 = 0.5 * l2v_sq + 0.5 * cc * h1p_sq
    E2 = cc / (2.0 * p.b) * h2p_sq
    F1 = _inner(psi, v) + 0.5 * p.b * h1p_sq
    F2 = _inner(psi, v, -lam) + 0.5 * p.b * h2p_sq
    F3 = cc * _inner(psi, v, -lam) + 0.5 * p.b * h1v_sq
    return E1, E2, F1, F2, F3


def energy_E(state: SimState, p: MediumParams) -> float:
    """Total energy ``E = E1 + E2 + ||grad v||^2``."""
    lam = state.grid.laplacian_eigenvalues
    E1, E2, *_ = functionals(state, p)
    return E1 + E2 + _inner(state.v, state.v, -lam)


def lyapunov_L(state: SimState, p: MediumParams, g: GammaWeights) -> float:
    """Weighted combination ``E1 + g1 E2 + g2 (F1 + F2) + g3 F3``."""
    E1, E2, F1, F2, F3 = functionals(state, p)
    return E1 + g.gamma1 * E2 + g.gamma2 * (F1 + F2) + g.gamma3 * F3


def equivalence_constants(
    p: MediumParams, g: GammaWeights, probe_states: Sequence[SimState]
) -> tuple[float, float]:
    """Scanned bounds of ``L / E`` over nonzero probe states.

    Returns ``(C1_hat, C2_hat)`` with ``C1_hat = min L/E`` and
    ``C2_hat = max L/E``; the weights are admissible when ``C1_hat > 0``.
    """
    if len(probe_states) == 0:
        raise ValueError("probe state list is empty")
    ratios = []
    for state in probe_states:
        E = energy_E(state, p)
        if E <= 0:
            raise ValueError("probe states must be nonzero")
        ratios.append(lyapunov_L(state, p, g) / E)
    return float(min(ratios)), float(max(ratios))


def default_probe_states(grid: Grid, seed: int = 0, n_random: int = 20) -> list[SimState]:
    """Standard probe family for the equivalence scan.

    Single-mode states across the spectrum with aligned, opposed and skewed
    ``(psi, v)`` pairs, plus seeded random coefficient pairs.
    """
    probes: list[SimState] = []
    mode_list = [tuple(1 for _ in grid.modes), tuple(grid.modes)]
    mid = tuple(max(1, N // 2) for N in grid.modes)
    if mid not in mode_list:
        mode_list.append(mid)
    for mode in mode_list:
        e = grid.basis_field(mode)
        z = grid.zeros()
        for psi_amp, v_amp in ((1.0, 0.0), (0.0, 1.0), (1.0, 1.0), (1.0, -1.0), (1.0, -4.0), (4.0, -1.0)):
            psi = e * psi_amp if psi_amp else z
            v = e * v_amp if v_amp else z
            if psi_amp == 0.0 and v_amp == 0.0:
                continue
            probes.append(SimState(psi=psi, v=v, time=0.0))
    rng = np.random.default_rng(seed)
    for _ in range(n_random):
        psi = SpectralField(grid, rng.standard_normal(grid.modes))
        v = SpectralField(grid, rng.standard_normal(grid.modes))
        probes.append(SimState(psi=psi, v=v, time=0.0))
    return probes


def calibrated_gammas(
    p: MediumParams,
    grid: Grid,
    start: GammaWeights | None = None,
    max_halvings: int = 20,
) -> GammaWeights:
    """Shrink ``gamma2, gamma3`` geometrically until the equivalence scan passes."""
    g = start or GammaWeights()
    probes = default_probe_states(grid)
    for _ in range(max_halvings):
        c1, _c2 = equivalence_constants(p, g, probes)
        if c1 > 0:
            return replace(g, admissible=True)
        g = replace(g, gamma2=g.gamma2 / 2.0, gamma3=g.gamma3 / 2.0)
    return replace(g, admissible=False)


def weighted_norms(state: SimState, accel: SpectralField) -> tuple[float, float]:
    """Time-weighted norms ``(sqrt(t) ||psi_tt||, sqrt(t) ||Delta v||)``.

    ``accel`` must be the evaluated acceleration of ``state``.
    """
    from .fields import norm

    w = np.sqrt(state.time)
    return w * norm(accel, "L2"), w * norm(state.v, "H2lap")


def instantaneous_diagnostics(
    state: SimState,
    p: MediumParams,
    g: GammaWeights,
    f: SpectralField,
    accel: SpectralField,
) -> dict[str, float]:
    """Pointwise-in-time diagnostic values feeding one EnergySample.

    ``d_integrand`` is the integrand of the cumulative dissipation,
    ``wgp_integrand`` the integrand ``t ||grad psi_tt||^2``; both are
    accumulated by the caller with a trapezoid rule over sample times.
    """
    grid = state.grid
    lam = grid.laplacian_eigenvalues
    psi, v = state.psi, state.v
    E1, E2, F1, F2, F3 = functionals(state, p)
    grad_v_sq = _inner(v, v, -lam)
    E = E1 + E2 + grad_v_sq
    L = E1 + g.gamma1 * E2 + g.gamma2 * (F1 + F2) + g.gamma3 * F3
    acc_sq = _inner(accel, accel)
    d_integrand = (
        grad_v_sq
        + _inner(v, v, lam * lam)
        + _inner(psi, psi, -lam)
        + _inner(psi, psi, lam * lam)
        + acc_sq
    )
    w_ptt = np.sqrt(state.time) * np.sqrt(acc_sq)
    w_lap_vt = np.sqrt(state.time) * np.sqrt(_inner(v, v, lam * lam))
    wgp_integrand = state.time * _inner(accel, accel, -lam)
    return {
        "E": E,
        "E1": E1,
        "E2": E2,
        "F1": F1,
        "F2": F2,
        "F3": F3,
        "L": L,
        "grad_v_sq": grad_v_sq,
        "f_dot_v": _inner(f, v),
        "d_integrand": d_integrand,
        "w_ptt": w_ptt,
        "w_lap_vt": w_lap_vt,
        "wgp_integrand": wgp_integrand,
    }


def identity_residual(series, p: MediumParams) -> np.ndarray:
    """Per-interval residuals of ``d/dt E1 + b ||grad v||^2 = int f v``.

    The derivative is a forward difference of sampled ``E1`` and the
    right-hand terms are trapezoid averages of the sampled integrands, so the
    residual of an exact solution vanishes at second order in the sample
    spacing.  Requires at least 3 samples at uniform spacing.
    """
    samples: Iterable[EnergySample] = series.samples
    samples = list(samples)
    if len(samples) < 3:
        raise ValueError("need at least 3 samples to form identity residuals")
    t = np.array([s.t for s in samples])
    dt = np.diff(t)
    if np.max(np.abs(dt - dt[0])) > 1e-9 * dt[0]:
        raise ValueError("identity residual requires uniform sample spacing")
    E1 = np.array([s.E1 for s in samples])
    G = np.array([s.grad_v_sq for s in samples])
    S = np.array([s.f_dot_v for s in samples])
    return np.diff(E1) / dt + p.b * 0.5 * (G[1:] + G[:-1]) - 0.5 * (S[1:] + S[:-1])
