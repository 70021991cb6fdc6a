"""Uplink C-RAN with hybrid RF/FSO fronthaul: channel models, fronthaul
capacities, rate expressions, the alpha0 / distortion optimizer, FSO-only
baselines and a seeded simulation harness."""

from .baselines import BaselineResult, fso_sq, fso_vq
from .capacity import LinkCapacities, fso_capacity, link_capacities, waterfill_rf_capacity
from .channel import ChannelRealization, GeometryConfig, SystemConfig, generate_realization, trial_seed
from .config import build_config, load_config
from .errors import ConfigError, ConsistencyError, DomainError, InfeasibleError, ProbeError
from .harness import ExperimentSpec, TrialRecord, emit_results, run_experiment
from .optimizer import (SolverSettings, SumRateResult, aco_inner, golden_section_search,
                        optimize_sum_rate, recover_alpha)

__version__ = "0.1.0"
