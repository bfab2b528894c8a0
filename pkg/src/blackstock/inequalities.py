"""Numerical exercise of the interpolation inequalities and the nonlinear Gronwall bound.

The two interpolation ratios are

    agmon:          ||u||_inf / ( ||u||_H2^(d/4) ||u||_L2^(1-d/4) )
    interpolation:  ||u||_Lq  / ( ||u||_H1^theta ||u||_L2^(1-theta) ),
                    theta = d/2 - d/q,  q in {3, 4}

both invariant under scaling of ``u``; empirical constants are calibrated as
the observed maximum over a seeded family of random trigonometric polynomials
times a 1.1 safety factor.

The Gronwall check concerns continuous ``u >= 0`` satisfying

    u(t) <= c1 e^(a t) u(0) + c2 int_0^t e^(a (t-s)) u(s)^(1+kappa) ds

with ``c1 > 1``, ``c2, kappa > 0``, ``a < 0``.  Under the smallness condition

    a + (1 + 1/kappa) c2 2^kappa c1^kappa u(0)^kappa < 0

the conclusion is

    u(t) <= (1 + c2 c1^kappa u0^kappa
                 / (a kappa + (1+kappa) c2 2^kappa c1^kappa u0^kappa))
            c1 e^(a t) u0.

The verification trace is the extremal candidate starting from ``u0`` itself:
the solution of the Volterra equation with equality and unit homogeneous
factor, equivalently the Bernoulli equation ``u' = a u + c2 u^(1+kappa)``,
``u(0) = u0``.  That trace satisfies the hypothesis for any ``c1 >= 1``, so
the stated bound must dominate it.  (Starting the equality trace at
``c1 u0`` instead would place it above the bound at ``t = 0`` by
construction, which checks nothing.)
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .fields import norm
from .grid import Grid, SpectralField

__all__ = [
    "GronwallParams",
    "GronwallCheck",
    "agmon_ratio",
    "interpolation_ratio",
    "gronwall_verify",
    "random_trig_fields",
    "empirical_max_ratio",
    "random_admissible_gronwall",
]


def agmon_ratio(u: SpectralField) -> float:
    """Observed constant of the sup-norm interpolation bound for one field."""
    l2 = norm(u, "L2")
    if l2 == 0.0:
        raise ValueError("agmon ratio is undefined for the zero field")
    from .fields import full_h_norm

    d = u.grid.dim
    h2 = full_h_norm(u, 2)
    return norm(u, "Linf") / (h2 ** (d / 4.0) * l2 ** (1.0 - d / 4.0))


def interpolation_ratio(u: SpectralField, q: int) -> float:
    """Observed constant of the Lq interpolation bound, ``q`` in {3, 4}."""
    if q not in (3, 4):
        raise ValueError("q must be 3 or 4")
    l2 = norm(u, "L2")
    if l2 == 0.0:
        raise ValueError("interpolation ratio is undefined for the zero field")
    from .fields import full_h_norm

    d = u.grid.dim
    theta = d / 2.0 - d / float(q)
    h1 = full_h_norm(u, 1)
    return norm(u, f"L{q}") / (h1**theta * l2 ** (1.0 - theta))


def random_trig_fields(
    grid: Grid, count: int, seed: int, max_mode: int = 32
):
    """Seeded stream of random fields with i.i.d. standard-normal coefficients.

    Coefficients beyond ``max_mode`` per axis stay zero so the family matches
    the calibration population regardless of grid size.
    """
    rng = np.random.default_rng(seed)
    cut = tuple(min(N, max_mode) for N in grid.modes)
    for _ in range(count):
        coeffs = np.zeros(grid.modes)
        block = tuple(slice(0, c) for c in cut)
        coeffs[block] = rng.standard_normal(cut)
        yield SpectralField(grid, coeffs)


def empirical_max_ratio(
    grid: Grid,
    kind: str,
    count: int,
    seed: int = 1234,
    q: int = 4,
    safety: float = 1.1,
) -> tuple[float, float]:
    """Max observed ratio over the random family and the safety-inflated constant.

    ``kind`` is ``"agmon"`` or ``"interpolation"``.
    """
    best = 0.0
    for u in random_trig_fields(grid, count, seed):
        r = agmon_ratio(u) if kind == "agmon" else interpolation_ratio(u, q)
        best = max(best, r)
    return best, best * safety


@dataclass(frozen=True)
class GronwallParams:
    """Parameters of the nonlinear Gronwall lemma; ``smallness < 0`` required."""

    c1: float
    c2: float
    kappa: float
    a: float
    u0: float

    def __post_init__(self):
        if self.c1 <= 1:
            raise ValueError("c1 must exceed 1")
        if self.c2 < 0:
            raise ValueError("c2 must be nonnegative")
        if self.kappa <= 0:
            raise ValueError("kappa must be positive")
        if self.a >= 0:
            raise ValueError("a must be negative")
        if self.u0 < 0:
            raise ValueError("u0 must be nonnegative")

    @property
    def smallness(self) -> float:
        """``a + (1 + 1/kappa) c2 2^kappa c1^kappa u0^kappa``; admissible iff < 0."""
        return self.a + (1.0 + 1.0 / self.kappa) * self.c2 * 2.0**self.kappa * (
            self.c1**self.kappa
        ) * self.u0**self.kappa

    @property
    def admissible(self) -> bool:
        return self.smallness < 0

    @property
    def bound_coefficient(self) -> float:
        """Constant multiplying ``e^(a t) u0`` in the conclusion."""
        denom = self.a * self.kappa + (1.0 + self.kappa) * self.c2 * (
            2.0**self.kappa
        ) * self.c1**self.kappa * self.u0**self.kappa
        return (1.0 + self.c2 * self.c1**self.kappa * self.u0**self.kappa / denom) * self.c1


@dataclass(frozen=True)
class GronwallCheck:
    times: np.ndarray
    trace: np.ndarray
    bound: np.ndarray
    ok: bool


def gronwall_verify(g: GronwallParams, T: float, dt: float = 1e-4) -> GronwallCheck:
    """Integrate the extremal trace on ``[0, T]`` and compare with the bound.

    The Volterra equality is integrated through the substitution
    ``u = e^(a t) (u0 + c2 w)``, ``w' = e^(-a t) u^(1+kappa)`` with a
    left-endpoint (explicit Euler) rule at step ``dt``; the rule's error is
    far below the comparison slack plus the gap of the bound.
    """
    if not g.admissible:
        raise ValueError(
            f"inadmissible Gronwall parameters: smallness value {g.smallness:.6g} >= 0"
        )
    n = int(round(T / dt))
    times = np.linspace(0.0, n * dt, n + 1)
    u = np.empty(n + 1)
    u[0] = g.u0
    w = 0.0
    for i in range(n):
        t = times[i]
        w += dt * np.exp(-g.a * t) * u[i] ** (1.0 + g.kappa)
        u[i + 1] = np.exp(g.a * times[i + 1]) * (g.u0 + g.c2 * w)
    bound = g.bound_coefficient * np.exp(g.a * times) * g.u0
    ok = bool(np.all(u <= bound + 1e-9))
    return GronwallCheck(times=times, trace=u, bound=bound, ok=ok)


def random_admissible_gronwall(count: int, seed: int = 7) -> list[GronwallParams]:
    """Seeded admissible parameter draws, comfortably inside the smallness regime.

    ``u0`` is drawn as a fraction beta <= 0.4 of the critical amplitude
    ``u* = (|a| / ((1 + 1/kappa) c2 2^kappa c1^kappa))^(1/kappa)`` with
    ``c1 >= 1.5`` and ``kappa >= 1``; near the smallness boundary (and for
    ``c1`` close to 1 or small ``kappa``) the stated conclusion constant
    degenerates and asserts nothing.
    """
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        c1 = rng.uniform(1.5, 4.0)
        c2 = rng.uniform(0.25, 4.0)
        kappa = rng.uniform(1.0, 2.0)
        a = -rng.uniform(0.25, 4.0)
        beta = rng.uniform(0.05, 0.4)
        u_crit = (
            -a / ((1.0 + 1.0 / kappa) * c2 * 2.0**kappa * c1**kappa)
        ) ** (1.0 / kappa)
        out.append(GronwallParams(c1=c1, c2=c2, kappa=kappa, a=a, u0=beta * u_crit))
    return out
