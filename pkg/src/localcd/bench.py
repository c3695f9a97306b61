"""Experiment harness: dataset bundles, per-seed runs, aggregation, emission.

Implements the evaluation protocol used throughout: every community member
serves as an individual seed (optionally capped per community), per-seed
metrics are averaged within each community, and community scores are
averaged across communities. Error bars are RMS one-sided (upper/lower)
semideviations of the community scores around their mean.

Record schema (version 1) columns, in order: dataset, algorithm, params,
community_id, seed_raw_id, recall, precision, f1, size, conductance, seconds.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import json
import logging
import os
import time
from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csgraph

from .diffusion import (
    DiffusionSpec,
    SeedDistribution,
    SparseVec,
    compute_diffusion,
    degree_normalize,
    top_k,
)
from .errors import AlgorithmError, DataError, LocalCdError
from .extract import ExtractionSpec, extract, recall as recall_score
from .graph import (
    CommunityStats,
    CommunityTable,
    Graph,
    IdMap,
    extract_lcc,
    induced_subgraph,
    load_edge_list,
    process_communities,
)
from .lemoneasy import lemoneasy
from .mov import mov_cluster
from .sweep import conductance, f1 as f1_score, precision as precision_score, sweep, sweep_in_parent

log = logging.getLogger("localcd")

SCHEMA_VERSION = 1
SEMIDEVIATION_DEFINITION = "rms of one-sided deviations from the mean over community scores"

RECORD_COLUMNS = (
    "dataset",
    "algorithm",
    "params",
    "community_id",
    "seed_raw_id",
    "recall",
    "precision",
    "f1",
    "size",
    "conductance",
    "seconds",
)

AGGREGATE_COLUMNS = (
    "dataset",
    "algorithm",
    "metric",
    "mean",
    "upper_semideviation",
    "lower_semideviation",
    "n_communities",
)

METRIC_NAMES = ("recall", "precision", "f1", "size", "conductance", "seconds")


# ---------------------------------------------------------------------------
# Dataset bundles


@dataclass
class DatasetBundle:
    name: str
    graph: Graph
    idmap: IdMap
    communities: CommunityTable

    def stats_report(self) -> dict:
        report = {"name": self.name, "n": self.graph.n, "m": self.graph.m}
        report.update(self.communities.summary())
        return report


def preprocess_dataset(edge_path, community_path, out_dir, name=None, min_size=10) -> DatasetBundle:
    """Load raw files, extract the LCC, process communities, save the bundle."""
    raw_graph, raw_map = load_edge_list(edge_path)
    graph, idmap = extract_lcc(raw_graph, raw_map)
    table = process_communities(graph, idmap, community_path, min_size=min_size)
    if name is None:
        name = os.path.basename(os.path.normpath(out_dir))
    bundle = DatasetBundle(name, graph, idmap, table)
    save_bundle(bundle, out_dir)
    return bundle


def save_bundle(bundle: DatasetBundle, out_dir) -> None:
    os.makedirs(out_dir, exist_ok=True)
    np.savez_compressed(
        os.path.join(out_dir, "graph.npz"),
        indptr=bundle.graph.indptr,
        indices=bundle.graph.indices,
        dense_to_raw=bundle.idmap.dense_to_raw,
    )
    payload = {
        "schema_version": SCHEMA_VERSION,
        "name": bundle.name,
        "min_size": bundle.communities.min_size,
        "dropped_members": bundle.communities.dropped_members,
        "communities": [c.tolist() for c in bundle.communities.communities],
        "stats": [
            {
                "size": s.size,
                "avg_within_degree": s.avg_within_degree,
                "avg_within_ratio": s.avg_within_ratio,
                "diameter": s.diameter,
            }
            for s in bundle.communities.stats
        ],
    }
    with open(os.path.join(out_dir, "communities.json"), "w") as fh:
        json.dump(payload, fh)
    with open(os.path.join(out_dir, "stats.json"), "w") as fh:
        json.dump(bundle.stats_report(), fh, indent=2)


def load_bundle(dataset_dir) -> DatasetBundle:
    graph_path = os.path.join(dataset_dir, "graph.npz")
    comm_path = os.path.join(dataset_dir, "communities.json")
    if not (os.path.exists(graph_path) and os.path.exists(comm_path)):
        raise DataError(f"no preprocessed dataset in {dataset_dir}")
    arrays = np.load(graph_path)
    graph = Graph(arrays["indptr"], arrays["indices"])
    idmap = IdMap(arrays["dense_to_raw"])
    with open(comm_path) as fh:
        payload = json.load(fh)
    stats = [CommunityStats(**s) for s in payload["stats"]]
    table = CommunityTable(
        [np.array(c, dtype=np.int64) for c in payload["communities"]],
        stats,
        dropped_members=payload.get("dropped_members", 0),
        min_size=payload.get("min_size", 10),
    )
    return DatasetBundle(payload["name"], graph, idmap, table)


# ---------------------------------------------------------------------------
# Records and aggregation


@dataclass
class ExperimentRecord:
    dataset: str
    algorithm: str
    params: str
    community_id: int
    seed_raw_id: int
    recall: float | None = None
    precision: float | None = None
    f1: float | None = None
    size: int | None = None
    conductance: float | None = None
    seconds: float | None = None


@dataclass
class AggregateRecord:
    dataset: str
    algorithm: str
    metric: str
    mean: float
    upper_semideviation: float
    lower_semideviation: float
    n_communities: int


def _semideviations(values: np.ndarray, mean: float) -> tuple[float, float]:
    above = np.maximum(values - mean, 0.0)
    below = np.maximum(mean - values, 0.0)
    upper = float(np.sqrt(np.mean(above**2)))
    lower = float(np.sqrt(np.mean(below**2)))
    return upper, lower


def aggregate_records(records, metrics=METRIC_NAMES) -> list[AggregateRecord]:
    """Per-seed -> per-community mean -> across-community mean and semidevs."""
    groups: dict[tuple[str, str], dict[int, list[ExperimentRecord]]] = {}
    for rec in records:
        by_comm = groups.setdefault((rec.dataset, rec.algorithm), {})
        by_comm.setdefault(rec.community_id, []).append(rec)

    out = []
    for (dataset, algorithm), by_comm in sorted(groups.items()):
        for metric in metrics:
            comm_means = []
            for _, recs in sorted(by_comm.items()):
                vals = [getattr(r, metric) for r in recs if getattr(r, metric) is not None]
                if vals:
                    comm_means.append(float(np.mean(vals)))
            if not comm_means:
                continue
            arr = np.array(comm_means)
            mean = float(arr.mean())
            upper, lower = _semideviations(arr, mean)
            out.append(
                AggregateRecord(dataset, algorithm, metric, mean, upper, lower, len(arr))
            )
    return out


def _fmt(value, column: str) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)  # shortest exact representation, lossless round trip
    return str(value)


def records_to_csv(records) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RECORD_COLUMNS)
    for rec in records:
        writer.writerow([_fmt(getattr(rec, col), col) for col in RECORD_COLUMNS])
    return buf.getvalue()


def aggregates_to_csv(aggregates) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(AGGREGATE_COLUMNS)
    for agg in aggregates:
        writer.writerow([_fmt(getattr(agg, col), col) for col in AGGREGATE_COLUMNS])
    return buf.getvalue()


def csv_to_records(text: str) -> list[ExperimentRecord]:
    reader = csv.DictReader(io.StringIO(text))
    out = []
    for row in reader:
        out.append(
            ExperimentRecord(
                dataset=row["dataset"],
                algorithm=row["algorithm"],
                params=row["params"],
                community_id=int(row["community_id"]),
                seed_raw_id=int(row["seed_raw_id"]),
                recall=float(row["recall"]) if row["recall"] else None,
                precision=float(row["precision"]) if row["precision"] else None,
                f1=float(row["f1"]) if row["f1"] else None,
                size=int(row["size"]) if row["size"] else None,
                conductance=float(row["conductance"]) if row["conductance"] else None,
                seconds=float(row["seconds"]) if row["seconds"] else None,
            )
        )
    return out


def results_to_json(records, aggregates) -> str:
    payload = {
        "schema_version": SCHEMA_VERSION,
        "semideviation": SEMIDEVIATION_DEFINITION,
        "records": [
            {col: getattr(rec, col) for col in RECORD_COLUMNS} for rec in records
        ],
        "aggregates": [
            {col: getattr(agg, col) for col in AGGREGATE_COLUMNS} for agg in aggregates
        ],
    }
    return json.dumps(payload, indent=1)


def json_to_records(text: str) -> list[ExperimentRecord]:
    payload = json.loads(text)
    return [ExperimentRecord(**rec) for rec in payload["records"]]


# ---------------------------------------------------------------------------
# Seed sampling and the parallel cell runner


def sample_seeds(members: np.ndarray, sample: int | None, rng_seed: int, community_id: int) -> np.ndarray:
    """Deterministically cap the per-community seed list."""
    if sample is None or sample >= len(members):
        return members
    rng = np.random.default_rng([rng_seed, community_id])
    chosen = rng.choice(members, size=sample, replace=False)
    return np.sort(chosen)


def _run_cells(cells, worker, threads: int, timing: bool):
    """Run per-seed cells, possibly across threads; timing forces serial."""
    if timing or threads <= 1:
        return [worker(cell) for cell in cells]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(worker, cells))


def _sorted_records(records) -> list[ExperimentRecord]:
    return sorted(
        records,
        key=lambda r: (r.dataset, r.algorithm, r.community_id, r.seed_raw_id),
    )


# ---------------------------------------------------------------------------
# Experiment: subgraph extraction recall


def _extraction_spec(name: str, target_nodes: int, alpha: float, degree_estimate) -> ExtractionSpec:
    return ExtractionSpec.parse(
        name,
        target_nodes=target_nodes,
        alpha=alpha,
        degree_estimate=degree_estimate,
    )


def run_extract_bench(
    bundle: DatasetBundle,
    methods=("kwalk2", "kwalk3", "kwalk4", "ppr", "ppr-d"),
    sample=None,
    rng_seed=0,
    threads=1,
    timing=False,
    target_nodes=3000,
    alpha=0.99,
    degree_estimate=None,
) -> list[ExperimentRecord]:
    g = bundle.graph
    cells = []
    for method in methods:
        spec = _extraction_spec(method, target_nodes, alpha, degree_estimate)
        for cid, members in enumerate(bundle.communities.communities):
            for seed in sample_seeds(members, sample, rng_seed, cid):
                cells.append((method, spec, cid, int(seed)))

    def worker(cell):
        method, spec, cid, seed = cell
        raw_seed = bundle.idmap.to_raw(seed)
        members = bundle.communities.communities[cid]
        try:
            start = time.perf_counter()
            result = extract(g, seed, spec)
            elapsed = time.perf_counter() - start
        except LocalCdError as exc:
            log.warning("extract %s failed on seed %d: %s", method, seed, exc)
            return ExperimentRecord(bundle.name, spec.label(), _spec_params(spec), cid, raw_seed)
        return ExperimentRecord(
            dataset=bundle.name,
            algorithm=spec.label(),
            params=_spec_params(spec),
            community_id=cid,
            seed_raw_id=raw_seed,
            recall=recall_score(result.nodes, members),
            size=len(result.nodes),
            seconds=elapsed,
        )

    return _sorted_records(_run_cells(cells, worker, threads, timing))


def _spec_params(spec: ExtractionSpec) -> str:
    if spec.method == "kwalk":
        return f"k={spec.k}"
    if spec.method == "ppr":
        return f"alpha={spec.alpha:g},eps={spec.epsilon:g}"
    d_est = "auto" if spec.degree_estimate is None else f"{spec.degree_estimate:g}"
    return f"alpha={spec.alpha:g},target={spec.target_nodes},deg_est={d_est}"


# ---------------------------------------------------------------------------
# Experiment: seed-set augmentation precision


def _augment_diffusion(name: str, alpha: float, eps: float, t: float) -> DiffusionSpec:
    name = name.strip().lower()
    if name.startswith("kwalk"):
        return DiffusionSpec.kwalk(int(name[len("kwalk"):]), normalized=True)
    if name == "ppr":
        return DiffusionSpec.ppr(alpha, eps)
    if name == "hk":
        return DiffusionSpec.hk(t, eps)
    raise ValueError(f"unknown diffusion method {name!r}")


def run_augment_bench(
    bundle: DatasetBundle,
    methods=("ppr", "hk", "kwalk2", "kwalk3", "kwalk4"),
    tau=3,
    sample=None,
    rng_seed=0,
    threads=1,
    timing=False,
    alpha=0.99,
    epsilon=1e-4,
    t=4.0,
) -> list[ExperimentRecord]:
    """Precision of the top-tau degree-normalized diffusion scores.

    The diffusion runs from each single seed, scores are divided by degree,
    the seed itself is dropped from the ranking, and the tau best remaining
    nodes are scored against the seed's community.
    """
    if tau < 1:
        raise ValueError("tau must be >= 1")
    g = bundle.graph
    cells = []
    for method in methods:
        spec = _augment_diffusion(method, alpha, epsilon, t)
        for cid, members in enumerate(bundle.communities.communities):
            for seed in sample_seeds(members, sample, rng_seed, cid):
                cells.append((spec, cid, int(seed)))

    def worker(cell):
        spec, cid, seed = cell
        raw_seed = bundle.idmap.to_raw(seed)
        members = bundle.communities.communities[cid]
        if spec.kind == "kwalk":
            seeds = SeedDistribution.uniform([seed])
        else:
            seeds = SeedDistribution.degree_weighted(g, [seed])
        start = time.perf_counter()
        vec = compute_diffusion(g, seeds, spec)
        normalized = degree_normalize(g, vec)
        keep = normalized.indices != seed
        candidates = SparseVec(normalized.indices[keep], normalized.values[keep])
        guesses = top_k(candidates, tau) if len(candidates) else np.array([], dtype=np.int64)
        elapsed = time.perf_counter() - start
        prec = precision_score(guesses, members) if len(guesses) else None
        return ExperimentRecord(
            dataset=bundle.name,
            algorithm=spec.label(),
            params=f"tau={tau}",
            community_id=cid,
            seed_raw_id=raw_seed,
            precision=prec,
            size=len(guesses),
            seconds=elapsed,
        )

    return _sorted_records(_run_cells(cells, worker, threads, timing))


# ---------------------------------------------------------------------------
# Experiment: ground-truth community recovery


DETECT_ALGORITHMS = ("hk", "ppr", "hks", "pprs", "movs", "lemoneasy")


@dataclass(frozen=True)
class DetectOptions:
    """Knobs for the detection benchmark (defaults match the experiments)."""

    hk_t: float = 4.0
    hk_epsilon: float = 1e-4
    ppr_alpha: float = 0.99
    ppr_epsilon: float = 1e-4
    extraction: ExtractionSpec = field(default_factory=ExtractionSpec)
    gamma: float = 0.0
    mov_tol: float = 1e-8
    r: int = 10
    f: int = 5
    parent_sweep: bool = False


def _ranked_order(g: Graph, vec: SparseVec) -> np.ndarray:
    return top_k(degree_normalize(g, vec), max(len(vec), 1))


def _diffusion_for(algorithm: str, opts: DetectOptions) -> DiffusionSpec:
    if algorithm.startswith("hk"):
        return DiffusionSpec.hk(opts.hk_t, opts.hk_epsilon)
    return DiffusionSpec.ppr(opts.ppr_alpha, opts.ppr_epsilon)


def detect_once(g: Graph, seed: int, algorithm: str, opts: DetectOptions) -> np.ndarray:
    """Detect a community for one seed; returns parent-graph node ids."""
    algorithm = algorithm.lower()
    if algorithm in ("hk", "ppr"):
        spec = _diffusion_for(algorithm, opts)
        vec = compute_diffusion(g, SeedDistribution.degree_weighted(g, [seed]), spec)
        order = _ranked_order(g, vec)
        if len(order) >= g.n:  # cannot sweep past n-1 nodes
            order = order[: g.n - 1] if g.n > 1 else order
        return sweep(g, order).best_prefix

    if algorithm in ("hks", "pprs"):
        ext = extract(g, seed, opts.extraction)
        g_s, to_parent = ext.subgraph, ext.id_map.dense_to_raw
        sub_seed = ext.parent_to_sub(seed)
        if g_s.degrees[sub_seed] == 0:
            return np.array([seed], dtype=np.int64)
        spec = _diffusion_for(algorithm, opts)
        vec = compute_diffusion(g_s, SeedDistribution.degree_weighted(g_s, [sub_seed]), spec)
        order = _ranked_order(g_s, vec)
        if opts.parent_sweep:
            return sweep_in_parent(g, to_parent[order]).best_prefix
        if len(order) >= g_s.n and g_s.n > 1:
            order = order[: g_s.n - 1]
        return to_parent[sweep(g_s, order).best_prefix]

    if algorithm == "movs":
        ext = extract(g, seed, opts.extraction)
        g_s, to_parent = ext.subgraph, ext.id_map.dense_to_raw
        sub_seed = ext.parent_to_sub(seed)
        # The spectral solve needs a connected graph: restrict the extracted
        # subgraph to the seed's component.
        _, labels = csgraph.connected_components(g_s.to_csr(), directed=False)
        comp_nodes = np.flatnonzero(labels == labels[sub_seed])
        if len(comp_nodes) < 2:
            return np.array([seed], dtype=np.int64)
        comp, comp_map = induced_subgraph(g_s, comp_nodes)
        comp_seed = comp_map.to_dense(sub_seed)
        result = mov_cluster(comp, [comp_seed], gamma=opts.gamma, tol=opts.mov_tol)
        return to_parent[comp_map.dense_to_raw[result.best_prefix]]

    if algorithm == "lemoneasy":
        result, _ = lemoneasy(
            g, seed, r=opts.r, f=opts.f, spec=opts.extraction,
            parent_sweep=opts.parent_sweep,
        )
        return result.best_prefix

    raise ValueError(f"unknown detection algorithm {algorithm!r}")


def _detect_params(algorithm: str, opts: DetectOptions) -> str:
    parts = []
    if algorithm.startswith("hk"):
        parts.append(f"t={opts.hk_t:g},eps={opts.hk_epsilon:g}")
    elif algorithm.startswith("ppr"):
        parts.append(f"alpha={opts.ppr_alpha:g},eps={opts.ppr_epsilon:g}")
    elif algorithm == "movs":
        parts.append(f"gamma={opts.gamma:g}")
    elif algorithm == "lemoneasy":
        parts.append(f"r={opts.r},f={opts.f}")
    if algorithm in ("hks", "pprs", "movs", "lemoneasy"):
        parts.append(f"extract={opts.extraction.label()}")
        if opts.parent_sweep:
            parts.append("parent_sweep")
    return ",".join(parts)


def run_detect_bench(
    bundle: DatasetBundle,
    algorithms=DETECT_ALGORITHMS,
    opts: DetectOptions | None = None,
    sample=None,
    rng_seed=0,
    threads=1,
    timing=False,
) -> list[ExperimentRecord]:
    if opts is None:
        opts = DetectOptions()
    g = bundle.graph
    cells = []
    for algorithm in algorithms:
        for cid, members in enumerate(bundle.communities.communities):
            for seed in sample_seeds(members, sample, rng_seed, cid):
                cells.append((algorithm, cid, int(seed)))

    def worker(cell):
        algorithm, cid, seed = cell
        raw_seed = bundle.idmap.to_raw(seed)
        members = bundle.communities.communities[cid]
        params = _detect_params(algorithm, opts)
        try:
            start = time.perf_counter()
            out = detect_once(g, seed, algorithm, opts)
            elapsed = time.perf_counter() - start
        except LocalCdError as exc:
            log.warning("%s failed on seed %d: %s", algorithm, seed, exc)
            return ExperimentRecord(bundle.name, algorithm, params, cid, raw_seed)
        cond = conductance(g, out) if 0 < len(out) < g.n else None
        return ExperimentRecord(
            dataset=bundle.name,
            algorithm=algorithm,
            params=params,
            community_id=cid,
            seed_raw_id=raw_seed,
            recall=recall_score(out, members),
            precision=precision_score(out, members),
            f1=f1_score(out, members),
            size=len(out),
            conductance=cond,
            seconds=elapsed,
        )

    records = _sorted_records(_run_cells(cells, worker, threads, timing))
    failed = sum(1 for r in records if r.seconds is None)
    if cells and failed == len(cells):
        raise AlgorithmError("every (algorithm, community, seed) cell failed")
    return records
