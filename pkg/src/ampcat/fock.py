"""Truncated number-basis backend used as an independent cross-check.

Density matrices are built by brute-force trapezoidal integration of
``P(beta) |beta><beta|`` over a Cartesian grid.  Observables come from matrix
algebra and Hermite functions, so none of the Gaussian-quadrature machinery
in the rest of the package is shared.  Intended for ``|g alpha| <= 4``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidSpecError, TruncationError, ZeroProbabilityError
from .phasespace import SQRT2, Grid1D, Grid2D, as_amplitude
from .states import (AmplifiedCoherentState, CoherentState, ThermalCoherentState,
                     amplified_p, p_form, p_thermal)

TRACE_DEFICIT = 1e-6
MAX_DIM = 200
MAX_AMPLITUDE = 4.0


@dataclass(frozen=True)
class FockDensity:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError("density matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("density matrix must be Hermitian")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def coherent_vector(beta, dim: int) -> np.ndarray:
    """Number-basis amplitudes ``<n|beta>`` for ``n < dim`` (vectorised over ``beta``)."""
    beta = np.asarray(beta, dtype=complex)
    out = np.empty(beta.shape + (dim,), dtype=complex)
    out[..., 0] = np.exp(-0.5 * np.abs(beta) ** 2)
    for n in range(1, dim):
        out[..., n] = out[..., n - 1] * beta / math.sqrt(n)
    return out


def _p_grid(state, spacing):
    if isinstance(state, AmplifiedCoherentState):
        centre = state.spec.g * state.alpha
        s = state.spec.width
        reach = (9.0 + 2.0 * len(state.spec.lambdas)) * math.sqrt(s)
        density = lambda b: amplified_p(state, b)  # noqa: E731
    elif isinstance(state, ThermalCoherentState):
        centre = state.d
        s = 0.5 * (state.v - 1.0)
        reach = 11.0 * math.sqrt(s)
        density = lambda b: p_thermal(state, b)  # noqa: E731
    else:
        raise InvalidSpecError(f"unsupported state type {type(state).__name__}")
    h = spacing if spacing is not None else min(0.05, math.sqrt(s) / 10.0)
    axis = Grid1D.centered(0.0, reach, h).points
    return centre, axis, h, density


def fock_from_p_mixture(state, dim: int, *, spacing: float | None = None) -> FockDensity:
    """Number-basis density matrix of a coherent, thermal or amplified state.

    Raises :class:`TruncationError` if more than ``1e-6`` of the trace falls
    outside ``dim`` levels; otherwise the matrix is renormalised to unit trace.
    """
    if not 1 <= dim <= MAX_DIM:
        raise ValueError(f"dim must lie in [1, {MAX_DIM}]")
    centre = abs(complex(p_form(state).center))
    if centre > MAX_AMPLITUDE:
        raise InvalidSpecError(f"oracle limited to |g alpha| <= {MAX_AMPLITUDE}, got {centre:.3g}")
    if isinstance(state, CoherentState):
        v = coherent_vector(state.alpha, dim)
        rho = np.outer(v, v.conj())
    else:
        centre, axis, h, density = _p_grid(state, spacing)
        rho = np.zeros((dim, dim), dtype=complex)
        for re in axis:
            betas = centre + re + 1j * axis
            w = density(betas) * h * h
            V = coherent_vector(betas, dim)
            rho += (V * w[:, None]).T @ V.conj()
        rho = 0.5 * (rho + rho.conj().T)
    tr = float(np.trace(rho).real)
    if tr < 1.0 - TRACE_DEFICIT:
        raise TruncationError(f"truncated trace {tr:.8f} at dim={dim}; increase dim")
    return FockDensity(rho / tr)


def fock_project_parity(rho: FockDensity, sign) -> tuple[FockDensity, float]:
    """Apply ``E = (1 +- (-1)^n)/2`` and renormalise; returns the state and its probability."""
    sgn = 1 if sign in (1, "+") else -1 if sign in (-1, "-") else None
    if sgn is None:
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")
    keep = (1 + sgn * (-1.0) ** np.arange(rho.dim)) / 2
    m = rho.matrix * keep[:, None] * keep[None, :]
    p = float(np.trace(m).real)
    if p < 1e-14:
        raise ZeroProbabilityError(f"parity outcome {sign} has probability {p:.3g}")
    return FockDensity(m / p), p


def hermite_functions(x, dim: int) -> np.ndarray:
    """Oscillator eigenfunctions ``<x|n>``, shape ``x.shape + (dim,)``.

    Upward three-term recurrence on ``phi_n * exp(x^2/2)`` with a running log
    scale, so large ``|x|`` neither overflows nor loses the small factor.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty(x.shape + (dim,))
    logscale = -0.5 * x * x
    prev = np.zeros_like(x)
    cur = np.full_like(x, math.pi ** -0.25)
    out[..., 0] = cur * np.exp(logscale)
    for n in range(1, dim):
        prev, cur = cur, math.sqrt(2.0 / n) * x * cur - math.sqrt((n - 1) / n) * prev
        big = np.maximum(np.abs(cur), np.abs(prev))
        rescale = big > 1e100
        if np.any(rescale):
            f = np.where(rescale, big, 1.0)
            cur, prev = cur / f, prev / f
            logscale = logscale + np.log(f)
        with np.errstate(under="ignore"):
            out[..., n] = cur * np.exp(logscale)
    return out


def fock_purity(rho: FockDensity) -> float:
    m = rho.matrix
    return float(np.real(np.sum(m * m.T)))


def fock_pr_x(rho: FockDensity, grid: Grid1D) -> np.ndarray:
    phi = hermite_functions(grid.points, rho.dim)
    return np.real(np.einsum("km,mn,kn->k", phi, rho.matrix, phi))


def fock_pr_p(rho: FockDensity, grid: Grid1D) -> np.ndarray:
    phase = (-1j) ** np.arange(rho.dim)
    phi = hermite_functions(grid.points, rho.dim) * phase
    return np.real(np.einsum("km,mn,kn->k", phi, rho.matrix, phi.conj()))


def fock_wigner(rho: FockDensity, grid: Grid2D, *, dy: float = 0.04) -> np.ndarray:
    """Wigner function on a grid over ``(Re alpha, Im alpha)``, unit integral over ``d^2 alpha``.

    Uses ``W(x, p) = (1/pi) int <x+y|rho|x-y> exp(-2ipy) dy`` evaluated by the
    trapezoidal rule, then rescales from quadratures to amplitudes.
    """
    xs = SQRT2 * grid.x.points
    ps = SQRT2 * grid.p.points
    ymax = math.sqrt(2.0 * rho.dim + 1.0) + 8.0
    y = Grid1D.centered(0.0, ymax, dy).points
    phase = np.exp(-2j * np.outer(y, ps))
    out = np.empty((len(xs), len(ps)))
    for i, x in enumerate(xs):
        left = hermite_functions(x + y, rho.dim)
        right = hermite_functions(x - y, rho.dim)
        kernel = np.einsum("km,mn,kn->k", left, rho.matrix, right)
        out[i] = np.real(kernel @ phase) * dy / math.pi
    return 2.0 * out


def _lowering(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


def fock_macroscopicity(rho: FockDensity) -> float:
    """Lee-Jeong measure in operator form, ``(-Tr([a^dag, rho][a, rho]) - Tr rho^2) / 2``."""
    a = _lowering(rho.dim)
    m = rho.matrix
    ca = a @ m - m @ a
    cad = a.conj().T @ m - m @ a.conj().T
    return float(np.real(-np.trace(cad @ ca) - np.trace(m @ m)) / 2.0)


def fock_observables(rho: FockDensity, x_grid: Grid1D, p_grid: Grid1D, w_grid: Grid2D) -> dict:
    """Purity, quadrature densities, Wigner field and macroscopicity of ``rho``."""
    return {
        "purity": fock_purity(rho),
        "pr_x": fock_pr_x(rho, x_grid),
        "pr_p": fock_pr_p(rho, p_grid),
        "wigner": fock_wigner(rho, w_grid),
        "macroscopicity": fock_macroscopicity(rho),
    }


def parity_probabilities(rho: FockDensity) -> tuple[float, float]:
    even = float(np.sum(np.diag(rho.matrix).real[::2]))
    return even, 1.0 - even


__all__ = [
    "FockDensity", "coherent_vector", "fock_from_p_mixture", "fock_project_parity",
    "hermite_functions", "fock_purity", "fock_pr_x", "fock_pr_p", "fock_wigner",
    "fock_macroscopicity", "fock_observables", "parity_probabilities", "as_amplitude",
]
