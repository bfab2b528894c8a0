"""Independent oracles for the test suite.

Everything here is deliberately written the slow, obvious way (direct
summation, dense quadrature, closed forms) and never calls back into the
transform or integrator code paths it checks.
"""

from __future__ import annotations

import numpy as np
from scipy.integrate import simpson

from blackstock.energy import EnergySample
from blackstock.integrate import Termination, TimeSeries


def naive_to_physical(extents, coeffs):
    """Direct multi-loop evaluation of a sine series on the collocation nodes."""
    coeffs = np.asarray(coeffs)
    modes = coeffs.shape
    dim = len(modes)
    axes_nodes = [
        np.arange(1, N + 1) * L / (N + 1) for L, N in zip(extents, modes)
    ]
    out = np.zeros(modes)
    for j_idx in np.ndindex(*modes):
        x = [axes_nodes[i][j_idx[i]] for i in range(dim)]
        total = 0.0
        for m_idx in np.ndindex(*modes):
            term = coeffs[m_idx]
            for i in range(dim):
                term *= np.sin((m_idx[i] + 1) * np.pi * x[i] / extents[i])
            total += term
        out[j_idx] = total
    return out


def naive_to_spectral(extents, samples):
    """Direct multi-loop discrete sine analysis of node values."""
    samples = np.asarray(samples)
    modes = samples.shape
    dim = len(modes)
    out = np.zeros(modes)
    for m_idx in np.ndindex(*modes):
        total = 0.0
        for j_idx in np.ndindex(*modes):
            term = samples[j_idx]
            for i in range(dim):
                P = modes[i] + 1
                term *= np.sin((m_idx[i] + 1) * np.pi * (j_idx[i] + 1) / P)
            total += term
        scale = 1.0
        for N in modes:
            scale *= 2.0 / (N + 1)
        out[m_idx] = total * scale
    return out


def sine_projection_oracle(L, func, n_modes, n_quad=200001):
    """High-resolution quadrature of ``(2/L) int_0^L f(x) sin(m pi x / L) dx``."""
    x = np.linspace(0.0, L, n_quad)
    fx = func(x)
    out = np.empty(n_modes)
    for m in range(1, n_modes + 1):
        out[m - 1] = (2.0 / L) * simpson(fx * np.sin(m * np.pi * x / L), x=x)
    return out


def quadrature_norm_oracle(L, func, q, n_quad=200001):
    """High-resolution ``L^q`` norm of a function on ``(0, L)``."""
    x = np.linspace(0.0, L, n_quad)
    return simpson(np.abs(func(x)) ** q, x=x) ** (1.0 / q)


def modal_solution(lam, c, b, psi0, v0, t):
    """Closed-form solution of ``w'' = c^2 lam w + b lam w'`` with data (psi0, v0).

    Returns ``(w, w')`` at the requested times.  Handles the oscillatory,
    overdamped and critically damped branches of the characteristic roots
    ``s = (b lam +- sqrt(b^2 lam^2 + 4 c^2 lam)) / 2``.
    """
    t = np.asarray(t, dtype=float)
    disc = (b * lam) ** 2 + 4.0 * c * c * lam
    if abs(disc) < 1e-12 * max((b * lam) ** 2, 1.0):
        s = b * lam / 2.0
        alpha = psi0
        beta = v0 - s * psi0
        w = np.exp(s * t) * (alpha + beta * t)
        wp = np.exp(s * t) * (s * alpha + beta + s * beta * t)
        return w, wp
    if disc > 0:
        root = np.sqrt(disc)
        s1 = (b * lam + root) / 2.0
        s2 = (b * lam - root) / 2.0
        a1 = (v0 - s2 * psi0) / (s1 - s2)
        a2 = psi0 - a1
        w = a1 * np.exp(s1 * t) + a2 * np.exp(s2 * t)
        wp = a1 * s1 * np.exp(s1 * t) + a2 * s2 * np.exp(s2 * t)
        return w, wp
    sig = b * lam / 2.0
    om = np.sqrt(-disc) / 2.0
    A = psi0
    B = (v0 - sig * psi0) / om
    env = np.exp(sig * t)
    w = env * (A * np.cos(om * t) + B * np.sin(om * t))
    wp = env * (
        (sig * A + om * B) * np.cos(om * t) + (sig * B - om * A) * np.sin(om * t)
    )
    return w, wp


def gronwall_closed_form(g, t):
    """Exact Bernoulli solution of ``u' = a u + c2 u^(1+kappa)``, ``u(0) = u0``."""
    t = np.asarray(t, dtype=float)
    if g.u0 == 0.0:
        return np.zeros_like(t)
    bracket = 1.0 + (g.c2 / g.a) * g.u0**g.kappa * (1.0 - np.exp(g.kappa * g.a * t))
    return np.exp(g.a * t) * g.u0 * bracket ** (-1.0 / g.kappa)


def series_from_energy(t, E):
    """Minimal TimeSeries carrying only times and the E column (for fit tests)."""
    series = TimeSeries(termination=Termination("completed"))
    for ti, Ei in zip(t, E):
        series.times.append(float(ti))
        series.samples.append(
            EnergySample(
                t=float(ti),
                E=float(Ei),
                E1=0.0,
                E2=0.0,
                F1=0.0,
                F2=0.0,
                F3=0.0,
                L=0.0,
                D_cum=0.0,
                w_ptt=0.0,
                w_lap_vt=0.0,
                w_grad_ptt=0.0,
                grad_v_sq=0.0,
                f_dot_v=0.0,
            )
        )
    return series
