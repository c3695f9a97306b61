"""Seeded local community detection on undirected graphs.

Walk, PageRank, and heat-kernel diffusions with local push solvers, adaptive
PageRank subgraph extraction, conductance sweep cuts, a locally-biased
Fiedler solver, iterative seed-stack expansion, and a benchmark harness for
ground-truth community experiments.

Node ids are plain dense integers in ``[0, n)``; :class:`~localcd.graph.IdMap`
tracks raw dataset labels.
"""

from ._kernels import BACKEND as kernel_backend
from .diffusion import (
    DiffusionSpec,
    SeedDistribution,
    SparseVec,
    degree_normalize,
    hk_push,
    kwalk_vector,
    ppr_push,
    top_k,
)
from .extract import (
    ExtractionResult,
    ExtractionSpec,
    adaptive_ppr_params,
    escape_probability,
    extract,
    recall,
)
from .graph import (
    CommunityTable,
    Graph,
    IdMap,
    community_diameter,
    extract_lcc,
    induced_subgraph,
    load_edge_list,
    process_communities,
)
from .lemoneasy import SeedStack, augment_step, lemoneasy
from .mov import MovSeedVector, MovSolution, mov_cluster, mov_seed_vector, mov_solve
from .sweep import SweepResult, conductance, f1, precision, sweep, sweep_in_parent

__version__ = "0.1.0"

__all__ = [
    "kernel_backend",
    "Graph",
    "IdMap",
    "CommunityTable",
    "load_edge_list",
    "extract_lcc",
    "induced_subgraph",
    "process_communities",
    "community_diameter",
    "SeedDistribution",
    "DiffusionSpec",
    "SparseVec",
    "kwalk_vector",
    "ppr_push",
    "hk_push",
    "degree_normalize",
    "top_k",
    "ExtractionSpec",
    "ExtractionResult",
    "adaptive_ppr_params",
    "extract",
    "recall",
    "escape_probability",
    "SweepResult",
    "conductance",
    "sweep",
    "sweep_in_parent",
    "precision",
    "f1",
    "MovSeedVector",
    "MovSolution",
    "mov_seed_vector",
    "mov_solve",
    "mov_cluster",
    "SeedStack",
    "augment_step",
    "lemoneasy",
    "__version__",
]
