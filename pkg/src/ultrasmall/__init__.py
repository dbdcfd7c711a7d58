"""Ultrasmall random networks: generators for five scale-free models,
compact-graph distance queries, Monte Carlo distance experiments, and a
truncated first-moment engine that turns the short-path lower-bound
machinery into checkable numerics."""

from .errors import ConsistencyError, GraphFileError, InputError, ParameterError
from .graph import (
    CompactGraph,
    ComponentLabeling,
    bfs_distance,
    bfs_distances,
    build_graph,
    components,
    load_graph,
    save_graph,
)
from .models import (
    AttachmentRule,
    ChungLu,
    ConfigModel,
    NorrosReittu,
    PaFixed,
    PaVariable,
    degree_histogram,
    gen_chung_lu,
    gen_config_model,
    gen_norros_reittu,
    gen_pa_fixed,
    gen_pa_fixed_m1,
    gen_pa_variable,
    generate,
)
from .seeding import RngSeed

__version__ = "0.1.0"

__all__ = [
    "AttachmentRule",
    "ChungLu",
    "CompactGraph",
    "ComponentLabeling",
    "ConfigModel",
    "ConsistencyError",
    "GraphFileError",
    "InputError",
    "NorrosReittu",
    "PaFixed",
    "PaVariable",
    "ParameterError",
    "RngSeed",
    "bfs_distance",
    "bfs_distances",
    "build_graph",
    "components",
    "degree_histogram",
    "gen_chung_lu",
    "gen_config_model",
    "gen_norros_reittu",
    "gen_pa_fixed",
    "gen_pa_fixed_m1",
    "gen_pa_variable",
    "generate",
    "load_graph",
    "save_graph",
]
