r"""Parity projection of P-represented states and their quadrature distributions.

A qubit prepared in ``|+>`` and coupled to the mode through ``c a^dag a |up><up|``
for ``t = pi / c`` applies the parity ``U = exp(i pi a^dag a)`` conditionally.
Measuring the qubit in the ``|+>, |->`` basis leaves the mode in
``E rho E / p`` with ``E = (1 +- U)/2``.  Because ``U |beta> = |-beta>``,

.. math::

    E_\pm \rho E_\pm = \tfrac14 \int d^2\beta\, P(\beta)
        (|\beta\rangle \pm |{-\beta}\rangle)(\langle\beta| \pm \langle{-\beta}|),

and ``p = (1 +- Re T)/2`` with ``T = Tr(U rho) = int P(beta) exp(-2|beta|^2)``.
The qubit itself is never represented.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoverageError, ResolutionError, ZeroProbabilityError
from .phasespace import SQRT2, Grid1D
from .states import State, mixture_integral, p_form

#: Cross-term magnitudes below this are treated as suppressed beyond double precision.
UNDERFLOW = 1e-300
#: Probability mass allowed to fall outside a distribution grid.
COVERAGE_TOL = 1e-3
MIN_POINTS_PER_FRINGE = 20

_HALF_LOG_PI = 0.5 * math.log(math.pi)


def _sign(sign) -> int:
    if sign in (1, "+", "plus", "even"):
        return 1
    if sign in (-1, "-", "minus", "odd"):
        return -1
    raise ValueError(f"sign must be '+' or '-', got {sign!r}")


@dataclass(frozen=True)
class ProjectedSuperposition:
    """Mode state after the qubit is found in ``|+>`` (sign +1) or ``|->`` (sign -1)."""

    base: State
    sign: int
    p_sign: float

    @property
    def symbol(self) -> str:
        return "+" if self.sign > 0 else "-"


@dataclass(frozen=True)
class Distribution1D:
    """Sampled quadrature density.

    ``norm`` is the trapezoidal integral of ``values``.  ``interference_suppressed``
    is set when every cross term underflowed and was flushed to zero.
    """

    grid: Grid1D
    values: np.ndarray
    norm: float
    interference_suppressed: bool = False

    @property
    def coords(self) -> np.ndarray:
        return self.grid.points


def parity_trace(state: State, *, checked: bool = True) -> float:
    """``Re Tr(U rho)`` with ``U`` the photon-number parity."""
    form = p_form(state)
    T = mixture_integral([form], 2.0 * np.eye(2), np.zeros(2), 0.0, checked=checked)
    return float(np.real(T))


def project(state: State, sign) -> ProjectedSuperposition:
    """Project ``state`` onto the even (``'+'``) or odd (``'-'``) parity sector."""
    sgn = _sign(sign)
    T = parity_trace(state)
    p = 0.5 * (1.0 + sgn * T)
    if p < 1e-14:
        raise ZeroProbabilityError(f"outcome {'+' if sgn > 0 else '-'} has probability {p:.3g}")
    return ProjectedSuperposition(state, sgn, p)


def _components(state, coords, axis: str):
    """Return (D+, D-, X) sampled at ``coords``.

    ``D+-`` are the densities of ``|+-beta>`` and ``X`` the cross term
    ``<q|beta><-beta|q>``, each integrated against P.
    """
    form = p_form(state)
    q = np.asarray(coords, dtype=float)
    k = 2.0 * SQRT2 * q
    C = -q * q - _HALF_LOG_PI
    zero = np.zeros_like(q)
    if axis == "x":
        A = np.diag([2.0, 0.0])
        Bp = np.stack([k, zero], axis=-1)
        Bx = np.stack([zero, 1j * k], axis=-1)
    else:
        A = np.diag([0.0, 2.0])
        Bp = np.stack([zero, k], axis=-1)
        Bx = np.stack([-1j * k, zero], axis=-1)
    d_plus = mixture_integral([form], A, Bp, C).real
    d_minus = mixture_integral([form], A, -Bp, C).real
    cross = mixture_integral([form], A, Bx, C)
    return d_plus, d_minus, cross


def _distribution(ps: ProjectedSuperposition, grid: Grid1D, axis: str, check_coverage: bool):
    d_plus, d_minus, cross = _components(ps.base, grid.points, axis)
    suppressed = bool(np.max(np.abs(cross)) < UNDERFLOW)
    if suppressed:
        cross = np.zeros_like(cross)
    values = (d_plus + d_minus + 2.0 * ps.sign * cross.real) / (4.0 * ps.p_sign)
    norm = float(np.trapezoid(values, grid.points))
    if check_coverage and abs(1.0 - norm) > COVERAGE_TOL:
        raise CoverageError(
            f"grid [{grid.lo}, {grid.hi}] holds probability {norm:.6f}; widen or refine it"
        )
    return Distribution1D(grid, values, norm, suppressed)


def pr_x(ps: ProjectedSuperposition, grid: Grid1D, *, check_coverage: bool = True) -> Distribution1D:
    """Position density of the projected state."""
    return _distribution(ps, grid, "x", check_coverage)


def pr_p(ps: ProjectedSuperposition, grid: Grid1D, *, check_coverage: bool = True) -> Distribution1D:
    """Momentum density of the projected state; raises if fringes are undersampled."""
    form = p_form(ps.base)
    if abs(form.center) > 0:
        period = fringe_period(form.center)
        if grid.spacing > period / MIN_POINTS_PER_FRINGE:
            # fringes only matter if the cross term survives
            _, _, cross = _components(ps.base, np.array([0.0]), "p")
            if abs(cross[0]) >= UNDERFLOW:
                raise ResolutionError(
                    f"p spacing {grid.spacing:.3g} exceeds fringe period {period:.3g} / "
                    f"{MIN_POINTS_PER_FRINGE}"
                )
    return _distribution(ps, grid, "p", check_coverage)


def quadrature_density(state: State, grid: Grid1D, axis: str = "x") -> np.ndarray:
    """Unprojected density ``<q|rho|q>`` of a P-represented state (``axis`` is ``'x'`` or ``'p'``)."""
    d_plus, _, _ = _components(state, grid.points, axis)
    return d_plus


def fringe_period(center) -> float:
    """Momentum fringe period ``pi / (sqrt2 |c|)`` of a superposition of ``|c>`` and ``|-c>``."""
    return math.pi / (SQRT2 * abs(complex(center)))


def _extrema(y: np.ndarray) -> np.ndarray:
    s = np.sign(np.diff(y))
    # carry signs across flat steps so plateaus count once
    nz = np.nonzero(s)[0]
    if len(nz) == 0:
        return nz
    fill = np.maximum.accumulate(np.where(s != 0, np.arange(len(s)), 0))
    s = s[fill]
    return np.nonzero(s[1:] * s[:-1] < 0)[0] + 1


def fringe_visibility(dist: Distribution1D, center: float = 0.0) -> float:
    """Contrast ``(max - min)/(max + min)`` over the central fringe period.

    The window runs between the two extrema flanking the extremum closest to
    ``center``.  A density with no flanking extrema (flat, single hump) has
    visibility 0.
    """
    y = np.asarray(dist.values, dtype=float)
    x = dist.coords
    scale = float(np.max(np.abs(y)))
    if scale == 0:
        return 0.0
    # rounding ripple in the tails must not register as fringes
    idx = _extrema(np.round(y / (scale * 1e-12)))
    if len(idx) < 3:
        return 0.0
    k = int(np.argmin(np.abs(x[idx] - center)))
    if k == 0 or k == len(idx) - 1:
        return 0.0
    lo, hi = idx[k - 1], idx[k + 1]
    if hi - lo < MIN_POINTS_PER_FRINGE:
        raise ResolutionError(
            f"central fringe spans {hi - lo} samples, need at least {MIN_POINTS_PER_FRINGE}"
        )
    window = y[lo:hi + 1]
    top, bottom = float(window.max()), max(float(window.min()), 0.0)
    if top + bottom <= 0:
        return 0.0
    return (top - bottom) / (top + bottom)
