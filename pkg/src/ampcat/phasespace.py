r"""Coherent-state primitives and uniform sampling grids.

Quadrature convention: :math:`\hbar = 1`, :math:`\hat x = (a + a^\dagger)/\sqrt{2}`,
:math:`\hat p = (a - a^\dagger)/(i\sqrt{2})`.  A coherent state :math:`|\beta\rangle`
therefore has its position density centred at :math:`x = \sqrt{2}\,\mathrm{Re}\,\beta`
and its momentum density centred at :math:`p = \sqrt{2}\,\mathrm{Im}\,\beta`.

Complex amplitudes are plain Python/numpy complex numbers.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import GridError

SQRT2 = math.sqrt(2.0)
_PI_QUARTER = math.pi ** -0.25


def as_amplitude(value) -> complex:
    """Coerce ``value`` to a finite complex amplitude."""
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"amplitude must be finite, got {value!r}")
    return z


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid of ``n`` points from ``lo`` to ``hi`` inclusive."""

    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise GridError("grid endpoints must be finite")
        if not self.lo < self.hi:
            raise GridError(f"need lo < hi, got lo={self.lo}, hi={self.hi}")
        if int(self.n) != self.n or self.n < 2:
            raise GridError(f"need an integer n >= 2, got {self.n}")

    @property
    def spacing(self) -> float:
        return (self.hi - self.lo) / (self.n - 1)

    @property
    def points(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, int(self.n))

    @classmethod
    def centered(cls, center: float, halfwidth: float, spacing: float) -> "Grid1D":
        """Grid symmetric about ``center`` with at most the given spacing and odd ``n``."""
        half = int(math.ceil(halfwidth / spacing))
        return cls(center - half * spacing, center + half * spacing, 2 * half + 1)

    def as_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "n": int(self.n)}


@dataclass(frozen=True)
class Grid2D:
    """Tensor product of two uniform axes.

    For position/momentum data the axes are the quadratures ``x`` and ``p``;
    Wigner fields use the same type with axes ``Re alpha`` and ``Im alpha``.
    """

    x: Grid1D
    p: Grid1D

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """Return ``(X, P)`` arrays of shape ``(x.n, p.n)`` (``ij`` indexing)."""
        return np.meshgrid(self.x.points, self.p.points, indexing="ij")

    @property
    def cell_area(self) -> float:
        return self.x.spacing * self.p.spacing

    def as_dict(self) -> dict:
        return {"x": self.x.as_dict(), "p": self.p.as_dict()}


def coherent_overlap(beta, gamma) -> complex:
    r"""Overlap :math:`\langle\gamma|\beta\rangle = \exp(-|\beta|^2/2 - |\gamma|^2/2 + \gamma^*\beta)`."""
    b = as_amplitude(beta)
    g = as_amplitude(gamma)
    # same exponent split into -|beta - gamma|^2/2 + i Im(gamma^* beta), so |overlap| <= 1 exactly
    return cmath.exp(complex(-0.5 * abs(b - g) ** 2, (g.conjugate() * b).imag))


def xwave(beta, x):
    r"""Position wavefunction :math:`\langle x|\beta\rangle`.

    Uses the phase convention
    ``pi**-0.25 * exp(-(x - sqrt2*Re b)**2/2 + 1j*sqrt2*Im b*x - 1j*Re b*Im b)``,
    which is the one generated by the displacement operator acting on vacuum.
    Vectorised over ``x``.
    """
    b = as_amplitude(beta)
    x = np.asarray(x, dtype=float)
    a, c = b.real, b.imag
    return _PI_QUARTER * np.exp(-0.5 * (x - SQRT2 * a) ** 2 + 1j * (SQRT2 * c * x - a * c))


def pwave(beta, p):
    r"""Momentum wavefunction :math:`\langle p|\beta\rangle`.

    Fourier transform of :func:`xwave` with kernel ``exp(-i p x)/sqrt(2 pi)``.
    """
    b = as_amplitude(beta)
    p = np.asarray(p, dtype=float)
    a, c = b.real, b.imag
    return _PI_QUARTER * np.exp(-0.5 * (p - SQRT2 * c) ** 2 + 1j * (a * c - SQRT2 * a * p))
