r"""Coherent, thermal coherent and amplified coherent states in P-representation.

All three are mixtures of coherent states with a non-negative Glauber-Sudarshan
weight of the common form

.. math::

    P(\beta) = \sum_n \lambda_n \frac{e^{-|\delta|^2/s}\,|\delta|^{2n}}{\pi s^{n+1} n!},
    \qquad \delta = \beta - c,

which :class:`PForm` captures: a coherent state is the ``s -> 0`` limit, a
thermal coherent state has ``s = (v - 1)/2`` and ``lambdas = (1,)``, and an
amplified coherent state has ``c = g * alpha`` and ``s = g**2 - 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.special import gammaln, logsumexp

from .errors import InvalidSpecError
from .phasespace import as_amplitude
from .quadrature import checked_integral, gaussian_integral

LAMBDA_SUM_TOL = 1e-9

#: Ancilla spectra used in the reproduced figures.
PRESETS: dict[str, tuple[float, ...]] = {
    "ideal": (1.0,),
    "two_term": (0.3, 0.7),
    "three_term": (0.2, 0.3, 0.5),
    "decreasing": (0.5, 0.3, 0.2),
    "uniform": (1 / 3, 1 / 3, 1 / 3),
}


@dataclass(frozen=True)
class SmearingSpec:
    """Amplitude gain ``g > 1`` and ancilla eigenvalues ``lambdas`` (non-negative, unit sum)."""

    g: float
    lambdas: tuple[float, ...] = (1.0,)

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(float(x) for x in self.lambdas))
        if not math.isfinite(self.g) or self.g <= 1.0:
            raise InvalidSpecError(f"gain must satisfy g > 1, got {self.g}")
        if not self.lambdas:
            raise InvalidSpecError("need at least one ancilla eigenvalue")
        if any(not math.isfinite(x) or x < 0 for x in self.lambdas):
            raise InvalidSpecError(f"ancilla eigenvalues must be non-negative: {self.lambdas}")
        total = math.fsum(self.lambdas)
        if abs(total - 1.0) > LAMBDA_SUM_TOL:
            raise InvalidSpecError(f"ancilla eigenvalues must sum to 1, got {total!r}")

    @property
    def width(self) -> float:
        """Smearing scale ``g**2 - 1``."""
        return self.g * self.g - 1.0

    @property
    def ancilla_mean(self) -> float:
        """Mean ancilla photon number ``sum n * lambda_n``."""
        return math.fsum(n * x for n, x in enumerate(self.lambdas))


@dataclass(frozen=True)
class CoherentState:
    alpha: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_amplitude(self.alpha))


@dataclass(frozen=True)
class ThermalCoherentState:
    """Displaced thermal state with variance parameter ``v > 1`` (purity ``1/v``)."""

    v: float
    d: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "d", as_amplitude(self.d))
        if not math.isfinite(self.v) or self.v <= 1.0:
            raise InvalidSpecError(f"thermal variance must satisfy v > 1, got {self.v}")


@dataclass(frozen=True)
class AmplifiedCoherentState:
    """Output of the phase-preserving amplifier for coherent input ``alpha``."""

    alpha: complex
    spec: SmearingSpec

    def __post_init__(self):
        object.__setattr__(self, "alpha", as_amplitude(self.alpha))
        if not isinstance(self.spec, SmearingSpec):
            raise InvalidSpecError("spec must be a SmearingSpec")


State = Union[CoherentState, ThermalCoherentState, AmplifiedCoherentState]


def _log_smearing(lambdas, s: float, r2: np.ndarray) -> np.ndarray:
    # log of sum_n lambda_n exp(-r2/s) (r2/s)^n / (pi s n!), accumulated in log space
    r2 = np.asarray(r2, dtype=float)
    lam = np.asarray(lambdas, dtype=float)
    n = np.arange(len(lam))
    keep = lam > 0
    x = r2[..., None] / s
    with np.errstate(divide="ignore", invalid="ignore"):
        logx = np.log(x)
        terms = np.where(n == 0, 0.0, n * logx) - gammaln(n + 1) + np.log(np.where(keep, lam, 1.0))
    terms = np.where(keep, terms, -np.inf)
    return logsumexp(terms, axis=-1) - r2 / s - math.log(math.pi * s)


def smearing_value(spec: SmearingSpec, delta) -> np.ndarray:
    """Smearing function of the amplifier at offset ``delta`` (vectorised, complex input)."""
    if not isinstance(spec, SmearingSpec):
        raise InvalidSpecError("spec must be a SmearingSpec")
    r2 = np.abs(np.asarray(delta, dtype=complex)) ** 2
    return np.exp(_log_smearing(spec.lambdas, spec.width, r2))


def p_thermal(state: ThermalCoherentState, beta) -> np.ndarray:
    """Glauber-Sudarshan P function of a thermal coherent state."""
    if not isinstance(state, ThermalCoherentState):
        raise InvalidSpecError("expected a ThermalCoherentState")
    v = state.v
    r2 = np.abs(np.asarray(beta, dtype=complex) - state.d) ** 2
    return 2.0 / (math.pi * (v - 1.0)) * np.exp(-2.0 * r2 / (v - 1.0))


def amplified_p(state: AmplifiedCoherentState, beta) -> np.ndarray:
    """P function of an amplified coherent state: the smearing function centred at ``g * alpha``."""
    return smearing_value(state.spec, np.asarray(beta, dtype=complex) - state.spec.g * state.alpha)


@dataclass(frozen=True)
class PForm:
    """Gaussian-Laguerre P function: centre ``c``, scale ``s`` (0 means a point mass) and weights."""

    center: complex
    s: float
    lambdas: tuple[float, ...] = (1.0,)

    @property
    def degree(self) -> int:
        return len(self.lambdas) - 1

    @property
    def normal_variance(self) -> float:
        """``<|beta - c|^2>`` under P, i.e. the normally ordered variance."""
        return self.s * math.fsum((n + 1) * x for n, x in enumerate(self.lambdas))

    def density(self, beta) -> np.ndarray:
        if self.s == 0:
            raise ValueError("a point mass has no density")
        r2 = np.abs(np.asarray(beta, dtype=complex) - self.center) ** 2
        return np.exp(_log_smearing(self.lambdas, self.s, r2))

    def _poly(self, z: np.ndarray) -> np.ndarray:
        # polynomial factor of P in the centred, unscaled variables (u, v)
        q = (z[..., 0] ** 2 + z[..., 1] ** 2) / self.s
        total = np.zeros(z.shape[:-1], dtype=complex)
        term = np.ones(z.shape[:-1], dtype=complex)
        for n, lam in enumerate(self.lambdas):
            if n:
                term = term * q / n
            if lam:
                total = total + lam * term
        return total / (math.pi * self.s)


def p_form(state: State) -> PForm:
    """Common P-function description of any supported state."""
    if isinstance(state, PForm):
        return state
    if isinstance(state, CoherentState):
        return PForm(state.alpha, 0.0)
    if isinstance(state, ThermalCoherentState):
        return PForm(state.d, 0.5 * (state.v - 1.0))
    if isinstance(state, AmplifiedCoherentState):
        return PForm(state.spec.g * state.alpha, state.spec.width, state.spec.lambdas)
    raise InvalidSpecError(f"unsupported state type {type(state).__name__}")


def mixture_integral(forms, A, B, C, order: int | None = None, extra=None,
                     checked: bool = False) -> np.ndarray:
    r"""Integrate ``exp(-w^T A w + B^T w + C)`` against a product of P functions.

    ``w`` stacks ``(Re beta_j, Im beta_j)`` for each form in ``forms``, so ``A``
    is ``(2m, 2m)`` and ``B`` has trailing dimension ``2m``.  Point-mass forms
    are substituted directly.  The polynomial part of each P function is
    integrated exactly by :func:`~ampcat.quadrature.gaussian_integral`.

    ``extra``, if given, is an additional polynomial factor evaluated at ``w``
    (trailing dimension ``2m``); raise ``order`` to cover its degree.
    ``checked`` cross-checks the rule against ``order + 2`` and raises
    :class:`~ampcat.errors.QuadratureError` on disagreement.
    """
    forms = list(forms)
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    C = np.asarray(C, dtype=complex)
    cv = np.array([[f.center.real, f.center.imag] for f in forms]).reshape(-1)
    h = B - 2.0 * cv @ A
    c0 = C - cv @ A @ cv + B @ cv

    active = np.array([f.s > 0 for f in forms for _ in range(2)])
    if not active.any():
        return np.exp(c0) * (extra(cv) if extra is not None else 1.0)
    live = [f for f in forms if f.s > 0]
    M = A[np.ix_(active, active)] + np.diag([1.0 / f.s for f in live for _ in range(2)])
    if order is None:
        order = max(f.degree for f in live) * len(live) + 4

    def poly(z):
        out = live[0]._poly(z[..., 0:2])
        for j, f in enumerate(live[1:], start=1):
            out = out * f._poly(z[..., 2 * j:2 * j + 2])
        if extra is not None:
            w = np.broadcast_to(cv.astype(complex), z.shape[:-1] + cv.shape).copy()
            w[..., active] += z
            out = out * extra(w)
        return out

    integrate = checked_integral if checked else gaussian_integral
    return integrate(M, h[..., active], c0, poly, order)
