r"""Purity, Wigner functions, the Lee-Jeong macroscopicity and purity matching.

Wigner functions are sampled on :class:`~ampcat.phasespace.Grid2D` grids whose
axes are ``Re alpha`` and ``Im alpha`` and are normalised so that
``int W d^2 alpha = 1`` (a coherent state peaks at ``2/pi``).  With that
normalisation the macroscopicity of a single mode reads

.. math::

    S = \frac{\pi}{2} \int d^2\alpha\, W
        \Big[-\tfrac14 (\partial_X^2 + \partial_Y^2) - 1\Big] W,
    \qquad \alpha = X + iY,

which vanishes for every coherent state.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from .errors import ConvergenceError, CoverageError, InvalidSpecError
from .phasespace import Grid1D, Grid2D
from .projection import UNDERFLOW, ProjectedSuperposition
from .states import AmplifiedCoherentState, SmearingSpec, mixture_integral, p_form

FIELD_NORM_TOL = 1e-3
REFINEMENT_RTOL = 0.01
REFINEMENT_ATOL = 1e-3

_LOG_2_PI = math.log(2.0 / math.pi)

# quadratic forms over w = (Re b, Im b, Re b', Im b')
_DIFF = np.array([[1, 0, -1, 0], [0, 1, 0, -1], [-1, 0, 1, 0], [0, -1, 0, 1]], dtype=float)
_SUM = np.array([[1, 0, 1, 0], [0, 1, 0, 1], [1, 0, 1, 0], [0, 1, 0, 1]], dtype=float)
# <b|b'><-b'|b> = exp(-|b|^2 - |b'|^2 + 2i Im(b* b'))
_CROSS = np.eye(4, dtype=complex)
_CROSS[0, 3] = _CROSS[3, 0] = -1j
_CROSS[1, 2] = _CROSS[2, 1] = 1j


@dataclass(frozen=True)
class WignerField:
    """Wigner function sampled on a grid over ``(Re alpha, Im alpha)``."""

    grid: Grid2D
    values: np.ndarray
    integral: float


def _unpack(state):
    if isinstance(state, ProjectedSuperposition):
        return p_form(state.base), state.sign, state.p_sign
    return p_form(state), 0, 1.0


def purity(state, *, checked: bool = True) -> float:
    """``Tr(rho^2)`` from the double P-function integral with the coherent-state overlap kernel."""
    form, sign, p = _unpack(state)
    zero = np.zeros(4)
    pair = [form, form]
    direct = mixture_integral(pair, _DIFF, zero, 0.0, checked=checked).real
    if not sign:
        return float(direct)
    mirrored = mixture_integral(pair, _SUM, zero, 0.0, checked=checked).real
    cross = mixture_integral(pair, _CROSS, zero, 0.0, checked=checked).real
    if abs(cross) < UNDERFLOW:
        cross = 0.0
    return float((direct + mirrored + 2.0 * sign * cross) / (4.0 * p * p))


def _wigner_terms(form, X, Y):
    Bd = 4.0 * np.stack([X, Y], axis=-1)
    Cd = -2.0 * (X * X + Y * Y) + _LOG_2_PI
    A = 2.0 * np.eye(2)
    plus = mixture_integral([form], A, Bd, Cd).real
    minus = mixture_integral([form], A, -Bd, Cd).real
    Bx = 4j * np.stack([-Y, X], axis=-1)
    cross = mixture_integral([form], np.zeros((2, 2)), Bx, Cd)
    return plus, minus, cross


def wigner_values(state, X, Y) -> np.ndarray:
    """Wigner function at the points ``alpha = X + iY`` (arrays of equal shape)."""
    form, sign, p = _unpack(state)
    X = np.asarray(X, dtype=float)
    Y = np.asarray(Y, dtype=float)
    if not sign:
        Bd = 4.0 * np.stack([X, Y], axis=-1)
        Cd = -2.0 * (X * X + Y * Y) + _LOG_2_PI
        return mixture_integral([form], 2.0 * np.eye(2), Bd, Cd).real
    plus, minus, cross = _wigner_terms(form, X, Y)
    cross = np.where(np.abs(cross) < UNDERFLOW, 0.0, cross)
    return (plus + minus + 2.0 * sign * cross.real) / (4.0 * p)


def wigner(state, grid: Grid2D) -> WignerField:
    """Sample the Wigner function of ``state`` on ``grid``."""
    X, Y = grid.mesh()
    values = wigner_values(state, X, Y)
    return WignerField(grid, values, _integrate2d(values, grid))


def _integrate2d(values, grid: Grid2D) -> float:
    return float(np.trapezoid(np.trapezoid(values, dx=grid.p.spacing, axis=1), dx=grid.x.spacing))


def _laplacian(W: np.ndarray, hx: float, hy: float) -> np.ndarray:
    # centred second differences, zero outside the grid
    P = np.pad(W, 1)
    return ((P[2:, 1:-1] - 2 * W + P[:-2, 1:-1]) / hx ** 2
            + (P[1:-1, 2:] - 2 * W + P[1:-1, :-2]) / hy ** 2)


def _raw_measure(W: np.ndarray, hx: float, hy: float) -> float:
    lap = _laplacian(W, hx, hy)
    return 0.5 * math.pi * float(np.sum(W * (-0.25 * lap - W))) * hx * hy


def _field_measure(field: WignerField) -> tuple[float, float]:
    hx, hy = field.grid.x.spacing, field.grid.p.spacing
    fine = _raw_measure(field.values, hx, hy)
    coarse = _raw_measure(field.values[::2, ::2], 2 * hx, 2 * hy)
    return fine, coarse


def macroscopicity(*fields: WignerField, check: bool = True) -> float:
    """Lee-Jeong macroscopicity from one or more Wigner fields.

    Several fields may be passed when the state's Wigner function lives on
    disjoint patches (e.g. two distant lobes and a narrow interference region);
    the measure is local, so the patch contributions add.  The Laplacian uses
    centred second differences; the value returned is the Richardson
    combination of spacings ``h`` and ``2h``.  With ``check`` the fields must
    carry unit total weight and the raw values at ``h`` and ``2h`` must agree
    to 1% (or 1e-3 absolute).
    """
    if not fields:
        raise ValueError("need at least one field")
    _calibrate()
    total = sum(f.integral for f in fields)
    if check and abs(total - 1.0) > FIELD_NORM_TOL:
        raise CoverageError(f"Wigner fields integrate to {total:.6f}, expected 1")
    fine = coarse = 0.0
    for f in fields:
        a, b = _field_measure(f)
        fine += a
        coarse += b
    if check and abs(fine - coarse) > max(REFINEMENT_RTOL * abs(fine), REFINEMENT_ATOL):
        raise ConvergenceError(
            f"macroscopicity not converged: S(h)={fine:.6g}, S(2h)={coarse:.6g}; refine the grid"
        )
    return (4.0 * fine - coarse) / 3.0


@functools.lru_cache(maxsize=1)
def _calibrate() -> None:
    # the operator convention must give zero for a coherent state
    axis = Grid1D(-5.0, 5.0, 201)
    grid = Grid2D(axis, axis)
    X, Y = grid.mesh()
    W = 2.0 / math.pi * np.exp(-2.0 * ((X - 0.7) ** 2 + (Y + 0.3) ** 2))
    fine = _raw_measure(W, axis.spacing, axis.spacing)
    coarse = _raw_measure(W[::2, ::2], 2 * axis.spacing, 2 * axis.spacing)
    s = (4.0 * fine - coarse) / 3.0
    if abs(s) > 1e-4:
        raise AssertionError(f"macroscopicity calibration failed: S(coherent) = {s:.3g}")


def wigner_patches(state, *, points_per_fringe: int = 40, lobe_points: int = 20,
                   envelope_points: int = 10, _central_only: bool = False) -> list[Grid2D]:
    """Disjoint grids that together cover the support of the state's Wigner function.

    Lobes sit at ``+c`` (and ``-c`` for projected states) with the spread of
    the P function plus vacuum noise.  Projected states add a patch at the
    origin resolving the interference pattern, whose wave vector is ``4|c|``
    and whose envelope narrows like ``exp(-(2 + 4 s)|alpha|^2)``.  Lobe patches
    are clipped at the interference patch when at least six lobe widths
    separate them; otherwise a single grid covers everything.
    """
    form, sign, _ = _unpack(state)
    c = complex(form.center)
    sigma = math.sqrt(0.5 * form.normal_variance + 0.25)
    reach = (7.0 + form.degree) * sigma
    h_lobe = sigma / lobe_points
    if not sign:
        return [Grid2D(Grid1D.centered(c.real, reach, h_lobe), Grid1D.centered(c.imag, reach, h_lobe))]

    sig_c = 1.0 / math.sqrt(2.0 * (2.0 + 4.0 * form.s))
    half = (7.0 + form.degree) * sig_c
    wave = 2.0 * math.pi / points_per_fringe
    hx = min(sig_c / envelope_points, wave / (4.0 * abs(c.imag)) if c.imag else math.inf)
    hy = min(sig_c / envelope_points, wave / (4.0 * abs(c.real)) if c.real else math.inf)
    central = Grid2D(Grid1D.centered(0.0, half, hx), Grid1D.centered(0.0, half, hy))
    if _central_only:
        return [central]

    axis = 0 if abs(c.real) >= abs(c.imag) else 1
    dist = abs(c.real if axis == 0 else c.imag)
    edge = (central.x.hi if axis == 0 else central.p.hi)
    if dist - edge < 6.0 * sigma:
        x_reach = abs(c.real) + reach
        y_reach = abs(c.imag) + reach
        return [Grid2D(Grid1D.centered(0.0, max(x_reach, half), min(hx, h_lobe)),
                       Grid1D.centered(0.0, max(y_reach, half), min(hy, h_lobe)))]

    patches = [central]
    for centre in (c, -c):
        along = centre.real if axis == 0 else centre.imag
        n_out = int(math.ceil(reach / h_lobe))
        n_in = int(math.floor((abs(along) - edge) / h_lobe)) - 1
        n_in = min(n_in, n_out)
        lo, hi = (along - n_in * h_lobe, along + n_out * h_lobe) if along > 0 else \
            (along - n_out * h_lobe, along + n_in * h_lobe)
        clipped = Grid1D(lo, hi, n_in + n_out + 1)
        across = Grid1D.centered(centre.imag if axis == 0 else centre.real, reach, h_lobe)
        patches.append(Grid2D(clipped, across) if axis == 0 else Grid2D(across, clipped))
    return patches


def _bilinear(U: np.ndarray, V: np.ndarray, hx: float, hy: float) -> float:
    # (pi/2) sum U [-lap/4 - 1] V; V must vanish at the grid edge
    return 0.5 * math.pi * float(np.sum(U * (-0.25 * _laplacian(V, hx, hy) - V))) * hx * hy


def _split_macroscopicity(state, central: Grid2D, lobe_points: int) -> float:
    # W = D + C with D the two smooth lobes and C the interference term, so
    # S = Q(D, D) + 2 Q(D, C) + Q(C, C); D needs only lobe resolution and C
    # lives on the narrow central grid.
    form, sign, p = _unpack(state)
    c = complex(form.center)
    sigma = math.sqrt(0.5 * form.normal_variance + 0.25)
    reach = (7.0 + form.degree) * sigma
    h = sigma / lobe_points
    outer = Grid2D(Grid1D.centered(0.0, abs(c.real) + reach, h), Grid1D.centered(0.0, abs(c.imag) + reach, h))

    X, Y = outer.mesh()
    plus, minus, _ = _wigner_terms(form, X, Y)
    D = (plus + minus) / (4.0 * p)
    X, Y = central.mesh()
    plus, minus, cross = _wigner_terms(form, X, Y)
    Dc = (plus + minus) / (4.0 * p)
    C = np.where(np.abs(cross) < UNDERFLOW, 0.0, cross).real * (2.0 * sign / (4.0 * p))

    total = _integrate2d(D, outer) + _integrate2d(C, central)
    if abs(total - 1.0) > FIELD_NORM_TOL:
        raise CoverageError(f"Wigner fields integrate to {total:.6f}, expected 1")

    def at(k):
        hx, hy = k * outer.x.spacing, k * outer.p.spacing
        cx, cy = k * central.x.spacing, k * central.p.spacing
        d, dc, cc = D[::k, ::k], Dc[::k, ::k], C[::k, ::k]
        return (_raw_measure(d, hx, hy) + 2.0 * _bilinear(dc, cc, cx, cy)
                + 0.5 * math.pi * float(np.sum(cc * (-0.25 * _laplacian(cc, cx, cy) - cc))) * cx * cy)

    fine, coarse = at(1), at(2)
    if abs(fine - coarse) > max(REFINEMENT_RTOL * abs(fine), REFINEMENT_ATOL):
        raise ConvergenceError(
            f"macroscopicity not converged: S(h)={fine:.6g}, S(2h)={coarse:.6g}; refine the grid"
        )
    return (4.0 * fine - coarse) / 3.0


def state_macroscopicity(state, **patch_options) -> float:
    """Macroscopicity of ``state`` on automatically chosen Wigner patches.

    When the lobes of a projected state sit too close to the interference
    region for disjoint patches, the measure is split into lobe, interference
    and mixed terms, each evaluated on its own grid.
    """
    _calibrate()
    patches = wigner_patches(state, **patch_options)
    if len(patches) == 1 and isinstance(state, ProjectedSuperposition):
        # the central grid is small here, so sample the fringes twice as finely
        options = dict(patch_options)
        options["points_per_fringe"] = 2 * options.get("points_per_fringe", 40)
        central = wigner_patches(state, _central_only=True, **options)[0]
        return _split_macroscopicity(state, central, patch_options.get("lobe_points", 20))
    return macroscopicity(*[wigner(state, grid) for grid in patches])


def purity_matched_gain(lambdas, target_purity: float, *, alpha=0.0,
                        g_range: tuple[float, float] = (1.0 + 1e-6, 1e3), xtol: float = 1e-10) -> float:
    """Gain at which the amplified coherent state has the requested purity.

    Purity falls monotonically with gain, so a bisection over ``g_range``
    suffices.  Raises :class:`ConvergenceError` if the target is not bracketed.
    """
    if not 0.0 < target_purity < 1.0:
        raise InvalidSpecError(f"target purity must lie in (0, 1), got {target_purity}")
    lambdas = tuple(lambdas)
    SmearingSpec(2.0, lambdas)

    def gap(g):
        return purity(AmplifiedCoherentState(alpha, SmearingSpec(g, lambdas)), checked=False) - target_purity

    lo, hi = g_range
    if gap(lo) * gap(hi) > 0:
        raise ConvergenceError(
            f"purity {target_purity} not reachable for g in [{lo}, {hi}] with lambdas {lambdas}"
        )
    return bisect(gap, lo, hi, xtol=xtol)
