r"""Gauss-Hermite quadrature for Gaussian-times-polynomial integrands.

Every phase-space integral in this package has the form

.. math::

    I = \int_{\mathbb{R}^d} \exp(-z^T M z + h^T z + c)\, f(z)\, d^d z

with ``M`` complex symmetric (positive-definite real part), complex linear
coefficients ``h`` and a low-degree polynomial ``f``.  Completing the square
gives ``mu = M^{-1} h / 2`` and, with ``R = M^{-1/2}``,

.. math::

    I = \pi^{d/2} \det(M)^{-1/2} e^{c + h^T M^{-1} h / 4}
        \; \mathbb{E}[f(\mu + R t)]

where the expectation runs over a tensor Gauss-Hermite rule.  The rule is
exact once ``2 * order - 1`` exceeds the total degree of ``f``, including for
complex ``mu`` (the identity is analytic in ``M`` and ``h``).
"""
from __future__ import annotations

import functools
import math

import numpy as np
from scipy.linalg import sqrtm

from .errors import QuadratureError

# points * nodes per evaluation batch
_BATCH = 1 << 21


@functools.lru_cache(maxsize=64)
def hermite_rule(order: int, dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Tensor Gauss-Hermite nodes ``(order**dim, dim)`` and weights normalised to sum 1."""
    t, w = np.polynomial.hermite.hermgauss(order)
    w = w / math.sqrt(math.pi)
    grids = np.meshgrid(*([t] * dim), indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    wgrids = np.meshgrid(*([w] * dim), indexing="ij")
    weights = functools.reduce(np.multiply, [g.ravel() for g in wgrids])
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _inverse_sqrt(M: np.ndarray) -> np.ndarray:
    if not np.count_nonzero(M - np.diag(np.diag(M))):
        return np.diag(1.0 / np.sqrt(np.diag(M)))
    return np.asarray(sqrtm(np.linalg.inv(M)))


def gaussian_integral(M, h, c, f, order: int) -> np.ndarray:
    """Evaluate the integral above for a batch of linear/constant coefficients.

    Parameters
    ----------
    M : (d, d) array
        Quadratic coefficient, shared by the whole batch.
    h : (..., d) array
        Linear coefficients per batch entry.
    c : (...) array
        Constant term of the exponent per batch entry.
    f : callable
        Maps an array ``z`` of shape ``(n, k, d)`` to values of shape ``(n, k)``.
    order : int
        Gauss-Hermite points per axis.

    Returns
    -------
    Complex array with the broadcast batch shape of ``h[..., 0]`` and ``c``.
    """
    M = np.asarray(M, dtype=complex)
    d = M.shape[0]
    h = np.asarray(h, dtype=complex)
    c = np.asarray(c, dtype=complex)
    shape = np.broadcast_shapes(h.shape[:-1], c.shape)
    h = np.broadcast_to(h, shape + (d,)).reshape(-1, d)
    c = np.broadcast_to(c, shape).reshape(-1)

    Minv = np.linalg.inv(M)
    R = _inverse_sqrt(M)
    mu = 0.5 * h @ Minv
    half_logdet = 0.5 * np.sum(np.log(np.linalg.eigvals(M)))
    logpref = c + 0.5 * np.einsum("ij,ij->i", h, mu) + 0.5 * d * math.log(math.pi) - half_logdet

    nodes, weights = hermite_rule(order, d)
    offsets = nodes @ R.T
    out = np.empty(h.shape[0], dtype=complex)
    step = max(1, _BATCH // len(weights))
    with np.errstate(under="ignore"):
        for i in range(0, h.shape[0], step):
            z = mu[i:i + step, None, :] + offsets[None, :, :]
            out[i:i + step] = f(z) @ weights
        out *= np.exp(logpref)
    return out.reshape(shape)


def checked_integral(M, h, c, f, order: int, *, rtol: float = 1e-10, atol: float = 1e-300):
    """:func:`gaussian_integral` plus a comparison against ``order + 2``.

    Raises :class:`QuadratureError` if the two rules disagree beyond
    ``atol + rtol * |I|``.
    """
    lo = gaussian_integral(M, h, c, f, order)
    hi = gaussian_integral(M, h, c, f, order + 2)
    err = np.abs(hi - lo)
    if np.any(err > atol + rtol * np.abs(hi)):
        worst = float(np.max(err))
        raise QuadratureError(
            f"Gauss-Hermite order {order} vs {order + 2} differ by {worst:.3g}"
        )
    return hi
