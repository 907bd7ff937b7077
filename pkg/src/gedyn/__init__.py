"""Global-entanglement dynamics of GHZ and W states under local decoherence."""

from .channels import ChannelKind, apply_local_channel, apply_uniform_channel, kraus_for, lindblad_generator
from .closed_form import ghz_density, ghz_ge_dephasing_closed, t_sep_noisy_w, w_ge_closed, w_pair_density
from .integrator import IntegrationConfig, evolve
from .measures import (
    concurrence_2q,
    ge_ghz_tangle_route,
    ge_w_tangle_route,
    information_budget,
    mw_global_entanglement,
    n_concurrence,
)
from .qmatrix import partial_trace, tensor_product
from .runner import SweepConfig, detect_t_sep, emit_csv, fit_decay_rate, run_sweep
from .states import density_from_pure, ghz_state, w_state

__version__ = "0.1.0"

__all__ = [
    "ChannelKind",
    "IntegrationConfig",
    "SweepConfig",
    "apply_local_channel",
    "apply_uniform_channel",
    "concurrence_2q",
    "density_from_pure",
    "detect_t_sep",
    "emit_csv",
    "evolve",
    "fit_decay_rate",
    "ge_ghz_tangle_route",
    "ge_w_tangle_route",
    "ghz_density",
    "ghz_ge_dephasing_closed",
    "ghz_state",
    "information_budget",
    "kraus_for",
    "lindblad_generator",
    "mw_global_entanglement",
    "n_concurrence",
    "partial_trace",
    "run_sweep",
    "t_sep_noisy_w",
    "tensor_product",
    "w_ge_closed",
    "w_pair_density",
    "w_state",
]
