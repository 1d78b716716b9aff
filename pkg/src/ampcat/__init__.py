"""Parity-projected amplified coherent states: purity, fringes and macroscopicity."""

__version__ = "0.1.0"

from .amplifier import added_noise, amplify, caves_bound, output_moments
from .errors import (ConvergenceError, CoverageError, GridError, InvalidSpecError,
                     QuadratureError, ResolutionError, TruncationError, ZeroProbabilityError)
from .measures import (WignerField, macroscopicity, purity, purity_matched_gain,
                       state_macroscopicity, wigner, wigner_patches)
from .phasespace import Grid1D, Grid2D
from .projection import (Distribution1D, ProjectedSuperposition, fringe_visibility,
                         parity_trace, pr_p, pr_x, project)
from .states import (PRESETS, AmplifiedCoherentState, CoherentState, SmearingSpec,
                     ThermalCoherentState, p_form, smearing_value)
