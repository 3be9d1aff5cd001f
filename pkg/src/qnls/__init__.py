"""Numerical laboratory for the 1D quintic nonlinear Schrodinger equation.

i u_t + u_xx = mu |u|^4 u on a periodic box standing in for the line, with
mu = +1 defocusing and mu = -1 focusing.  The package provides the
pseudospectral evolution, conserved functionals, Littlewood-Paley and
low-pass frequency truncations, scaling/Galilean symmetries, interaction
Morawetz actions, concentration trackers, Strichartz constant estimation,
and a scenario runner with CSV diagnostics.
"""

from .spectral import (Field, Grid, ProjectorSpec, SpectralError, bump,
                       forward_transform, free_propagate, inverse_transform,
                       make_grid, project)
from .functionals import SpaceTimeNorm, energy, h_s_norm, mass, momentum, spacetime_norm
from .integrator import IntegratorConfig, Trajectory, duhamel_residual, solve, strang_step
from .symmetries import GalileanBoost, ScalingMap, apply_boost, apply_scaling, boost_trajectory_check
from .morawetz import (IOperator, MorawetzKernel, apply_I, interaction_action,
                       kernel_admissibility, kernel_eval, l8_bound_monitor,
                       truncated_action)
from .concentration import (ConcentrationParams, SmallInterval, TrackerSample,
                            bookkeeping, partition_small_intervals, track)
from .strichartz import AdmissiblePair, bilinear_decay, interp_bilinear, is_admissible, linear_constant
from .config import ConfigError, ScenarioConfig, echo_config, parse_config
from .presets import ground_state, ground_state_residual, preset_initial

__version__ = "0.1.0"
