r"""Equal-weight mixtures of coherent states filling one coarse-grained slot.

A slot of radius ``r`` around ``abar`` holds ``N`` coherent amplitudes laid out
on a sunflower lattice.  Paired with its parity image (the slot around
``-abar``) the two-slot mixture can be rewritten in the rotated basis

.. math::

    \rho^\pm = \frac{1}{2N} \sum_j (|\alpha_j\rangle \pm |{-\alpha_j}\rangle)
               (\langle\alpha_j| \pm \langle{-\alpha_j}|),

with ``(rho+ + rho-)/2`` equal to the two-slot mixture.  The Wigner functions
of ``rho+-`` differ from it only by the interference term
``+-(2/(pi N)) exp(-2|alpha|^2) sum_j cos(4 Im(alpha_j^* alpha))``, which is
negligible wherever the slots are.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoverageError, InvalidSpecError
from .measures import WignerField, _integrate2d
from .phasespace import Grid1D, Grid2D, as_amplitude, xwave

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
NORM_TOL = 1e-3
_LOG_2_PI = math.log(2.0 / math.pi)


@dataclass(frozen=True)
class ClassicalMixture:
    """``rho = (1/N) sum_j |alpha_j><alpha_j|`` with every ``alpha_j`` inside the slot."""

    amplitudes: tuple[complex, ...]
    slot_center: complex
    slot_radius: float

    def __post_init__(self):
        amps = tuple(as_amplitude(a) for a in self.amplitudes)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "slot_center", as_amplitude(self.slot_center))
        if not amps:
            raise InvalidSpecError("a mixture needs at least one amplitude")
        if not self.slot_radius > 0:
            raise InvalidSpecError(f"slot radius must be positive, got {self.slot_radius}")
        far = max(abs(a - self.slot_center) for a in amps)
        if far > self.slot_radius * (1 + 1e-12):
            raise InvalidSpecError(f"amplitude {far:.3g} from the slot centre exceeds radius {self.slot_radius}")

    @property
    def n(self) -> int:
        return len(self.amplitudes)

    def mirrored(self) -> "ClassicalMixture":
        """The parity image: every amplitude and the slot centre negated."""
        return ClassicalMixture(tuple(-a for a in self.amplitudes), -self.slot_center, self.slot_radius)


def make_slot_mixture(center, radius: float, n: int) -> ClassicalMixture:
    """Fill a disc of ``radius`` around ``center`` with ``n`` amplitudes (sunflower lattice)."""
    if not radius > 0:
        raise InvalidSpecError(f"radius must be positive, got {radius}")
    if int(n) != n or n < 1:
        raise InvalidSpecError(f"need n >= 1 amplitudes, got {n}")
    center = as_amplitude(center)
    k = np.arange(int(n))
    r = radius * np.sqrt(k / n)
    amps = center + r * np.exp(1j * GOLDEN_ANGLE * k)
    return ClassicalMixture(tuple(complex(a) for a in amps), center, float(radius))


def _amps(mix: ClassicalMixture) -> np.ndarray:
    return np.asarray(mix.amplitudes, dtype=complex)


def _coherent_sum(amps, X, Y) -> np.ndarray:
    out = np.zeros(np.shape(X))
    for a in amps:
        out += np.exp(-2.0 * ((X - a.real) ** 2 + (Y - a.imag) ** 2))
    return 2.0 / math.pi * out / len(amps)


def _field(values, grid, check) -> WignerField:
    total = _integrate2d(values, grid)
    if check and abs(total - 1.0) > NORM_TOL:
        raise CoverageError(f"Wigner field integrates to {total:.6f} on the grid; widen it")
    return WignerField(grid, values, total)


def wigner_classical(mix: ClassicalMixture, grid: Grid2D, *, check: bool = True) -> WignerField:
    """Wigner function of the mixture, a mean of Gaussians ``(2/pi) exp(-2|alpha - alpha_j|^2)``."""
    X, Y = grid.mesh()
    return _field(_coherent_sum(_amps(mix), X, Y), grid, check)


def two_slot_wigner(mix: ClassicalMixture, grid: Grid2D, *, check: bool = True) -> WignerField:
    """Wigner function of the equal mixture of ``mix`` and its parity image."""
    X, Y = grid.mesh()
    amps = _amps(mix)
    values = 0.5 * (_coherent_sum(amps, X, Y) + _coherent_sum(-amps, X, Y))
    return _field(values, grid, check)


def rotated_basis_wigner(mix: ClassicalMixture, grid: Grid2D) -> tuple[np.ndarray, np.ndarray]:
    """Wigner functions of ``rho+`` and ``rho-`` built term by term.

    Each ``rho+-`` carries trace ``1 +- mean_j exp(-2|alpha_j|^2)``, so their
    plain average is the two-slot mixture.
    """
    X, Y = grid.mesh()
    amps = _amps(mix)
    plus = np.zeros(X.shape)
    minus = np.zeros(X.shape)
    for a in amps:
        diag = (np.exp(-2.0 * ((X - a.real) ** 2 + (Y - a.imag) ** 2))
                + np.exp(-2.0 * ((X + a.real) ** 2 + (Y + a.imag) ** 2)))
        cross = 2.0 * np.exp(-2.0 * (X * X + Y * Y)) * np.cos(4.0 * (a.real * Y - a.imag * X))
        plus += diag + cross
        minus += diag - cross
    scale = 2.0 / math.pi / (2 * len(amps))
    return plus * scale, minus * scale


@dataclass(frozen=True)
class InterferenceReport:
    """Interference-to-diagonal ratio inside the slots.

    ``log10_ratio`` is computed in log space and is always finite;
    ``ratio`` is ``10**log10_ratio`` and is reported as 0 with ``suppressed``
    set once it drops below double-precision resolution.
    """

    ratio: float
    log10_ratio: float
    suppressed: bool


def _slot_points(mix: ClassicalMixture, grid: Grid2D) -> tuple[np.ndarray, np.ndarray]:
    X, Y = grid.mesh()
    z = (X + 1j * Y).ravel()
    inside = (np.abs(z - mix.slot_center) <= mix.slot_radius) | (np.abs(z + mix.slot_center) <= mix.slot_radius)
    amps = _amps(mix)
    pts = np.concatenate([z[inside], amps, -amps])
    return pts.real, pts.imag


def basis_interference(mix: ClassicalMixture, grid: Grid2D) -> InterferenceReport:
    """Largest interference term over the two slots relative to the diagonal peak.

    The term is evaluated at the grid points that fall inside either slot
    (and at the lattice amplitudes themselves); the diagonal peak is the
    largest value of the two-slot Wigner function there.
    """
    X, Y = _slot_points(mix, grid)
    amps = _amps(mix)
    diag = 0.5 * (_coherent_sum(amps, X, Y) + _coherent_sum(-amps, X, Y))
    phase = np.abs(sum(np.cos(4.0 * (a.real * Y - a.imag * X)) for a in amps)) / len(amps)
    with np.errstate(divide="ignore"):
        log_term = _LOG_2_PI - 2.0 * (X * X + Y * Y) + np.log(phase)
    log_ratio = float(np.max(log_term)) - math.log(float(np.max(diag)))
    log10_ratio = log_ratio / math.log(10.0)
    ratio = 10.0 ** log10_ratio
    suppressed = ratio < np.finfo(float).eps
    return InterferenceReport(0.0 if suppressed else ratio, log10_ratio, bool(suppressed))


def mixture_pr_x(mix: ClassicalMixture, grid: Grid1D) -> np.ndarray:
    """Position density ``(1/N) sum_j |<x|alpha_j>|^2``."""
    x = grid.points
    return np.mean([np.abs(xwave(a, x)) ** 2 for a in mix.amplitudes], axis=0)


def plateau_flatness(values: np.ndarray, grid: Grid1D, center: float, halfwidth: float) -> float:
    """Relative spread (std/mean) of a density over ``|x - center| <= halfwidth``."""
    x = grid.points
    window = np.asarray(values)[np.abs(x - center) <= halfwidth]
    if len(window) < 3:
        raise CoverageError("plateau window holds fewer than three grid points")
    return float(np.std(window) / np.mean(window))


def field_moments(field: WignerField) -> tuple[complex, float]:
    """Centroid and rms radius of a (non-negative) Wigner field."""
    X, Y = field.grid.mesh()
    w = field.values / field.values.sum()
    cx, cy = float(np.sum(w * X)), float(np.sum(w * Y))
    rms = math.sqrt(float(np.sum(w * ((X - cx) ** 2 + (Y - cy) ** 2))))
    return complex(cx, cy), rms
