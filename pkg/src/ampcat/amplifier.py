"""Phase-preserving linear amplification of coherent inputs.

The amplifier map scales the input amplitude by the gain and then smears the
result with the gain- and ancilla-dependent smearing function.  For a coherent
input the output is fully described by the input amplitude and the
:class:`~ampcat.states.SmearingSpec`, so the map is kept symbolic.
"""
from __future__ import annotations

import numpy as np

from .errors import InvalidSpecError
from .states import AmplifiedCoherentState, SmearingSpec, mixture_integral, p_form

#: Symmetrised quadrature variance of any coherent state.
COHERENT_VARIANCE = 0.5


def amplify(alpha, spec: SmearingSpec) -> AmplifiedCoherentState:
    """Amplify the coherent state ``|alpha>`` with the gain and ancilla of ``spec``."""
    if not isinstance(spec, SmearingSpec):
        raise InvalidSpecError("spec must be a SmearingSpec")
    return AmplifiedCoherentState(alpha, spec)


def output_moments(state) -> tuple[complex, float]:
    """Mean amplitude and symmetrised variance ``<|da|^2>`` of a P-represented state.

    Both are moment integrals over the P function; the symmetrised variance is
    the normally ordered one plus one half.
    """
    form = p_form(state)
    zero = np.zeros(2)
    order = form.degree + 4
    norm = mixture_integral([form], np.zeros((2, 2)), zero, 0.0, order,
                            extra=lambda w: np.ones(w.shape[:-1])).real
    mean = mixture_integral([form], np.zeros((2, 2)), zero, 0.0, order,
                            extra=lambda w: w[..., 0] + 1j * w[..., 1]) / norm
    mr, mi = mean.real, mean.imag
    spread = mixture_integral([form], np.zeros((2, 2)), zero, 0.0, order,
                              extra=lambda w: (w[..., 0] - mr) ** 2 + (w[..., 1] - mi) ** 2)
    return complex(mean), float(spread.real / norm) + COHERENT_VARIANCE


def caves_bound(g: float, input_variance: float = COHERENT_VARIANCE) -> float:
    """Smallest output variance a phase-preserving amplifier of gain ``g`` allows."""
    return g * g * input_variance + 0.5 * (g * g - 1.0)


def added_noise(state: AmplifiedCoherentState) -> float:
    """Output noise referred to the input, minus the coherent input variance."""
    _, var = output_moments(state)
    return var / state.spec.g ** 2 - COHERENT_VARIANCE
