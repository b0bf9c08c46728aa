"""Rumor spreading by mobile random walks on grids, tori and rings.

Simulation engine with frog-style broadcast and all-mobile gossip,
exact distributional oracles for single and paired walks, spatial
diagnostics (islands, frontier, cell conquest) and sweep/fit tooling.
"""

from .analysis import (
    IslandDecomposition,
    IslandSeries,
    cell_diagnostics,
    frontier_series,
    frontier_window_stats,
    initial_max_distance,
    islands,
    max_island_over_time,
)
from .engine import (
    ScenarioConfig,
    SimState,
    TrialResult,
    default_horizon,
    init_state,
    run_broadcast,
    run_gossip,
    run_trial,
    step,
)
from .experiments import (
    ModelComparison,
    PowerLawFit,
    SweepPlan,
    SweepRow,
    compare_models,
    fit_power_law,
    read_sweep_csv,
    run_sweep,
    summarize,
    write_sweep_csv,
)
from .oracles import (
    collision_count_exact,
    cover_time_mc,
    meeting_probability_exact,
    meeting_probability_mc,
    visit_probability_exact,
    walk_statistics_mc,
)
from .placement import Placement, PlacementModel, place, realized_count_concentration
from .rng import Stream, mix64, substream_seed, trial_seed
from .topology import Topology, default_lazy_prob

__version__ = "0.1.0"

__all__ = [
    "IslandDecomposition",
    "IslandSeries",
    "ModelComparison",
    "Placement",
    "PlacementModel",
    "PowerLawFit",
    "ScenarioConfig",
    "SimState",
    "Stream",
    "SweepPlan",
    "SweepRow",
    "Topology",
    "TrialResult",
    "cell_diagnostics",
    "collision_count_exact",
    "compare_models",
    "cover_time_mc",
    "default_horizon",
    "default_lazy_prob",
    "fit_power_law",
    "frontier_series",
    "frontier_window_stats",
    "init_state",
    "initial_max_distance",
    "islands",
    "max_island_over_time",
    "meeting_probability_exact",
    "meeting_probability_mc",
    "mix64",
    "place",
    "read_sweep_csv",
    "realized_count_concentration",
    "run_broadcast",
    "run_gossip",
    "run_sweep",
    "run_trial",
    "step",
    "substream_seed",
    "summarize",
    "trial_seed",
    "visit_probability_exact",
    "walk_statistics_mc",
    "write_sweep_csv",
]
