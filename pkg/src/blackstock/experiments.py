"""Decay-rate fitting, blow-up threshold mapping and the rough-data study.

``fit_decay`` turns a sampled energy series into a rate: the least-squares
slope of ``log E(t)`` over a window.  A run is classified ``decays`` when the
fitted rate is positive and the fit is sharply log-linear (``r^2 > 0.99``),
``diverges`` when the underlying run hit the blow-up cutoff, and
``stagnates`` otherwise.

``threshold_bisection`` brackets the amplitude ``delta*`` separating decaying
from diverging runs for a given medium and initial-data shape; blow-up is
operationalized by the simulator's divergence classifier, so ``delta*`` is an
empirical, scheme-level quantity reported with its bracket.

``weighted_regularity_study`` probes the parabolic smoothing of rough initial
velocity: for data whose ``||Delta psi_1||`` diverges under refinement, the
unweighted supremum ``sup_t ||Delta psi_t||`` grows with resolution while the
time-weighted supremum ``sup_t sqrt(t) ||Delta psi_t||`` stays put.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import MediumParams
from .fields import InitialDataSpec, build_initial, norm
from .grid import Grid
from .integrate import StepConfig, TimeSeries, simulate

__all__ = [
    "DecayFit",
    "ThresholdReport",
    "RegularityStudy",
    "fit_decay",
    "default_window",
    "threshold_bisection",
    "weighted_regularity_study",
]

#: Rates below this are treated as stagnation.
MIN_DECAY_RATE = 1e-3

#: Minimal fit quality for the ``decays`` classification.
MIN_DECAY_R2 = 0.99


@dataclass(frozen=True)
class DecayFit:
    """Fitted exponential rate of an energy series.

    ``c_factor`` is the fitted intercept ratio ``exp(intercept) / E(first
    sample)``, the empirical constant in front of the decay law.
    """

    zeta: float
    window: tuple[float, float]
    r_squared: float
    classification: str
    c_factor: float = float("nan")


def default_window(T: float) -> tuple[float, float]:
    """Default fit window ``(T/4, 3T/4)``: skips the initial transient."""
    return (T / 4.0, 3.0 * T / 4.0)


def fit_decay(series: TimeSeries, window: tuple[float, float] | None = None) -> DecayFit:
    """Least-squares fit of ``log E(t)`` over a window of a completed series."""
    if series.termination.kind == "diverged":
        t_end = series.termination.time or 0.0
        return DecayFit(
            zeta=0.0,
            window=(0.0, t_end),
            r_squared=0.0,
            classification="diverges",
        )
    t = series.column("t")
    if window is None:
        window = default_window(float(t[-1]))
    lo, hi = float(window[0]), float(window[1])
    if lo >= hi:
        raise ValueError("fit window must have positive length")
    if lo < t[0] - 1e-12 or hi > t[-1] + 1e-12:
        raise ValueError(
            f"fit window ({lo}, {hi}) lies outside the sampled range ({t[0]}, {t[-1]})"
        )
    mask = (t >= lo) & (t <= hi)
    if np.count_nonzero(mask) < 3:
        raise ValueError("fit window contains fewer than 3 samples")
    E = series.column("E")[mask]
    if np.any(E <= 0):
        raise ValueError("energy must be positive inside the fit window")
    tt = t[mask]
    logE = np.log(E)
    design = np.vstack([tt, np.ones_like(tt)]).T
    (slope, intercept), *_ = np.linalg.lstsq(design, logE, rcond=None)
    resid = logE - design @ np.array([slope, intercept])
    ss_res = float(np.sum(resid**2))
    ss_tot = float(np.sum((logE - logE.mean()) ** 2))
    r2 = 1.0 if ss_tot <= 1e-28 else 1.0 - ss_res / ss_tot
    zeta = -float(slope)
    E0 = float(series.column("E")[0])
    c_factor = float(np.exp(intercept) / E0) if E0 > 0 else float("nan")
    if zeta > MIN_DECAY_RATE and r2 > MIN_DECAY_R2:
        classification = "decays"
    else:
        classification = "stagnates"
    return DecayFit(
        zeta=max(zeta, 0.0) if classification != "decays" else zeta,
        window=(lo, hi),
        r_squared=r2,
        classification=classification,
        c_factor=c_factor,
    )


@dataclass(frozen=True)
class ThresholdReport:
    """Bisection bracket of the empirical small-data threshold."""

    params: MediumParams
    amplitude_lo: float
    amplitude_hi: float
    delta_star: float
    runs: tuple[tuple[float, str], ...] = field(default_factory=tuple)


def _classify_amplitude(
    amplitude: float,
    specs: tuple[InitialDataSpec, InitialDataSpec],
    grid: Grid,
    p: MediumParams,
    T: float,
    cfg: StepConfig,
    sample_every: int,
    window: tuple[float, float] | None,
) -> str:
    spec0 = _scaled_spec(specs[0], amplitude)
    spec1 = _scaled_spec(specs[1], amplitude)
    state = build_initial(spec0, spec1, grid)
    series = simulate(state, T, cfg, p, sample_every=sample_every)
    if series.termination.kind != "completed":
        return "diverges"
    return fit_decay(series, window).classification


def _scaled_spec(spec: InitialDataSpec, multiplier: float) -> InitialDataSpec:
    amps = tuple(a * multiplier for a in spec.amplitudes)
    return InitialDataSpec(
        kind=spec.kind, modes=spec.modes, amplitudes=amps, exponent=spec.exponent
    )


def threshold_bisection(
    p: MediumParams,
    specs: tuple[InitialDataSpec, InitialDataSpec],
    lo: float,
    hi: float,
    iters: int,
    *,
    grid: Grid,
    T: float = 20.0,
    cfg: StepConfig | None = None,
    sample_every: int = 10,
    window: tuple[float, float] | None = None,
) -> ThresholdReport:
    """Bisect the amplitude multiplier between decay and divergence.

    The shape specs carry unit-scale amplitudes; each probe scales them by
    the trial multiplier and runs a full simulation plus decay fit.  The
    endpoints must straddle the dichotomy or the bracketing precondition
    fails (for a linear medium every amplitude decays, and the error says so).
    """
    if not (0 < lo < hi):
        raise ValueError("need 0 < lo < hi")
    cfg = cfg or StepConfig(dt=1e-3, scheme="imex2")
    runs: list[tuple[float, str]] = []

    def classify(amplitude: float) -> str:
        c = _classify_amplitude(amplitude, specs, grid, p, T, cfg, sample_every, window)
        runs.append((amplitude, c))
        return c

    c_lo = classify(lo)
    c_hi = classify(hi)
    if not (c_lo == "decays" and c_hi == "diverges"):
        raise ValueError(
            "unbracketed endpoints: "
            f"classification(lo={lo}) = {c_lo}, classification(hi={hi}) = {c_hi}"
        )
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if classify(mid) == "decays":
            lo = mid
        else:
            hi = mid
    return ThresholdReport(
        params=p,
        amplitude_lo=lo,
        amplitude_hi=hi,
        delta_star=0.5 * (lo + hi),
        runs=tuple(runs),
    )


@dataclass(frozen=True)
class RegularityStudy:
    """Resolution scan of the unweighted and time-weighted ``||Delta psi_t||`` suprema."""

    resolutions: tuple[int, ...]
    sup_lap_v: tuple[float, ...]
    sup_weighted_lap_v: tuple[float, ...]
    unweighted_growth: float
    weighted_change: float
    passed: bool


def weighted_regularity_study(
    p: MediumParams,
    resolutions,
    T: float,
    dt: float,
    *,
    extent: float = np.pi,
    spec0: InitialDataSpec | None = None,
    spec1: InitialDataSpec | None = None,
    scheme: str = "imex1",
    sample_every: int = 1,
    unweighted_growth_min: float = 1.5,
    weighted_change_max: float = 0.1,
) -> RegularityStudy:
    """Run the rough-data refinement study in one dimension.

    Defaults: ``psi_0 = 0`` and ``psi_1`` a power-law field with exponent 2
    (in H1 but not H2) of small amplitude.  The L-stable first-order scheme is
    the default here because the trapezoidal rule rings through the stiff
    startup layer that this study watches.

    The study passes when the unweighted supremum grows by at least
    ``unweighted_growth_min`` from the coarsest to the finest resolution
    while the weighted supremum changes by at most ``weighted_change_max``.
    """
    spec0 = spec0 or InitialDataSpec.zero()
    spec1 = spec1 or InitialDataSpec.power_law(2.0, 0.01)
    resolutions = tuple(int(N) for N in resolutions)
    sup_u: list[float] = []
    sup_w: list[float] = []
    for N in resolutions:
        grid = Grid(extents=(extent,), modes=(N,))
        state = build_initial(spec0, spec1, grid)
        cfg = StepConfig(dt=dt, scheme=scheme)
        series = simulate(state, T, cfg, p, sample_every=sample_every)
        if series.termination.kind != "completed":
            raise RuntimeError(
                f"study run diverged at resolution N={N} "
                f"(t={series.termination.time})"
            )
        t = series.column("t")
        w_lap = series.column("w_lap_vt")
        with np.errstate(divide="ignore", invalid="ignore"):
            unweighted = np.where(t > 0, w_lap / np.sqrt(np.where(t > 0, t, 1.0)), 0.0)
        unweighted[0] = norm(state.v, "H2lap")
        sup_u.append(float(np.max(unweighted)))
        sup_w.append(float(np.max(w_lap)))
    growth = sup_u[-1] / sup_u[0]
    change = abs(sup_w[-1] - sup_w[0]) / sup_w[0]
    passed = growth >= unweighted_growth_min and change <= weighted_change_max
    return RegularityStudy(
        resolutions=resolutions,
        sup_lap_v=tuple(sup_u),
        sup_weighted_lap_v=tuple(sup_w),
        unweighted_growth=float(growth),
        weighted_change=float(change),
        passed=passed,
    )
