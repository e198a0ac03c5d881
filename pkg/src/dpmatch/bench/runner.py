"""Scenario runners emitting deterministic CSV.

Each repetition derives its seed from a content hash of (base seed,
scenario, setting, repetition), so methods within a repetition share the
sampled pair, repetition order never matters, and reruns are
byte-identical. Wall times are never written into the results CSV; they
go to a separate timings file outside the determinism contract.
"""

from __future__ import annotations

import hashlib
import os
import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from ..community import community_match_all, community_match_refined, select_best_mu
from ..generators import ErdosRenyi, make_pair, sample_bernoulli, sbm_from_rate
from ..graphs import (
    Graph,
    induced_subgraph,
    permute,
    read_edge_list,
    read_matrix,
    threshold_to_graph,
)
from ..matchers import dp_match, ee_match, ee_post, ee_pre
from ..profiles import distance_matrix
from .config import ExperimentConfig, validate_config
from .metrics import recovery_rate

CSV_FIELDS = [
    "scenario", "n", "K", "q", "rho", "s", "t1", "t2", "m", "mode",
    "method", "d", "n_rep", "tau", "repetition", "seed",
    "n_a", "n_b", "truth_size",
    "matched_a", "converged_a",
    "recovery_all_a", "recovery_matched_a", "recovery_converged_a", "containment_a",
    "matched_b", "converged_b",
    "recovery_all_b", "recovery_matched_b", "recovery_converged_b", "containment_b",
]

TIMING_FIELDS = ["setting", "method", "d", "side", "repetition", "seconds"]

NA = "NA"


def derive_seed(base: int, *parts) -> int:
    """Content-addressed per-repetition seed via a counter hash.

    blake2b over "dpmatch|<base>|<part>|..." with an 8-byte digest, read
    big-endian. Independent of method and enumeration order.
    """
    key = "|".join(str(p) for p in ("dpmatch", base) + parts)
    return int.from_bytes(hashlib.blake2b(key.encode(), digest_size=8).digest(), "big")


def _fmt(v) -> str:
    if v is None:
        return NA
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _method_metrics(ga: Graph, gb: Graph, truth, method: str, d, n_rep, tau, w,
                    k=None):
    """Run one method in one direction; returns (metrics dict, seconds)."""
    t0 = time.perf_counter()
    cand = None
    result = None
    if method == "dp":
        result = dp_match(ga, gb, w=w)
    elif method == "ee":
        cand = ee_match(ga, gb, d, w=w)
    elif method == "ee-pre":
        cand = ee_pre(ga, gb, d, w=w)
    elif method == "ee-post":
        result = ee_post(ga, gb, d, n_rep, tau, w=w)
    elif method == "comm-dp":
        outcomes = community_match_all(ga, gb, k, "dp")
        result = select_best_mu(outcomes, "dp")[1]
    elif method == "comm-ee-post":
        outcomes = community_match_all(ga, gb, k, "ee-post", d=d, n_rep=n_rep, tau=tau)
        result = select_best_mu(outcomes, "ee-post")[1]
    elif method == "comm-refine-dp":
        result = community_match_refined(ga, gb, k, 1, n_rep, tau, "dp").global_result
    elif method == "comm-refine-ee-post":
        result = community_match_refined(ga, gb, k, d, n_rep, tau, "ee-post").global_result
    else:
        raise ValueError(f"unknown method {method!r}")
    seconds = time.perf_counter() - t0
    metrics = {
        "matched": None, "converged": None, "recovery_all": None,
        "recovery_matched": None, "recovery_converged": None, "containment": None,
    }
    if cand is not None:
        if truth:
            metrics["containment"] = recovery_rate(cand, truth, "candidate")
    else:
        metrics["matched"] = len(result.assignment)
        metrics["converged"] = sum(result.flags.values())
        if truth:
            metrics["recovery_all"] = recovery_rate(result, truth, "all")
            metrics["recovery_matched"] = recovery_rate(result, truth, "matched")
            metrics["recovery_converged"] = recovery_rate(result, truth, "converged")
    return metrics, seconds


def _method_d_list(method: str, d_list):
    # dp and the dp-flavored community methods take no candidate depth
    if method in ("dp", "comm-dp", "comm-refine-dp"):
        return [None]
    return list(d_list)


def _blank_row(cfg: ExperimentConfig):
    return {f: None for f in CSV_FIELDS} | {"scenario": cfg.scenario, "n_rep": cfg.n_rep}


def _fill_sides(row, metrics_a, metrics_b):
    for suffix, metrics in (("a", metrics_a), ("b", metrics_b)):
        if metrics is None:
            continue
        row[f"matched_{suffix}"] = metrics["matched"]
        row[f"converged_{suffix}"] = metrics["converged"]
        row[f"recovery_all_{suffix}"] = metrics["recovery_all"]
        row[f"recovery_matched_{suffix}"] = metrics["recovery_matched"]
        row[f"recovery_converged_{suffix}"] = metrics["recovery_converged"]
        row[f"containment_{suffix}"] = metrics["containment"]


def _resolved_tau(cfg: ExperimentConfig) -> float:
    return cfg.tau if cfg.tau is not None else cfg.n_rep / 10


def _run_er_task(task):
    """One (q, rho, s, repetition): all methods, both directions."""
    cfg, q, rho, s, rep = task
    tau = _resolved_tau(cfg)
    seed = derive_seed(cfg.seed, "er", cfg.n, q, rho, s, rep)
    ss = np.random.SeedSequence(seed)
    seed_parent, seed_pair = ss.spawn(2)
    parent = sample_bernoulli(ErdosRenyi(cfg.n, q), seed_parent)
    pair = make_pair(parent, s, rho, seed_pair)
    ga, gb, truth = pair.a.graph, pair.b.graph, pair.truth
    truth_inv = {j: i for i, j in truth.items()}
    w_ab = distance_matrix(ga, gb)
    w_ba = np.ascontiguousarray(w_ab.T)
    setting = f"q={q!r},rho={rho!r},s={s!r}"
    rows, timings = [], []
    for method in cfg.methods:
        for d in _method_d_list(method, cfg.d):
            ma, sec_a = _method_metrics(ga, gb, truth, method, d, cfg.n_rep, tau, w_ab)
            mb, sec_b = _method_metrics(gb, ga, truth_inv, method, d, cfg.n_rep, tau, w_ba)
            row = _blank_row(cfg)
            row.update(n=cfg.n, K=None, q=q, rho=rho, s=s, method=method, d=d,
                       tau=tau, repetition=rep, seed=seed,
                       n_a=ga.n, n_b=gb.n, truth_size=len(truth))
            _fill_sides(row, ma, mb)
            rows.append(row)
            timings.append({"setting": setting, "method": method, "d": d,
                            "side": "a", "repetition": rep, "seconds": sec_a})
            timings.append({"setting": setting, "method": method, "d": d,
                            "side": "b", "repetition": rep, "seconds": sec_b})
    return rows, timings


def _run_sbm_task(task):
    """One (q, rho, repetition) on perfectly-overlapping SBM children."""
    cfg, q, rho, rep = task
    tau = _resolved_tau(cfg)
    seed = derive_seed(cfg.seed, "sbm", cfg.n, cfg.K, q, rho, rep)
    ss = np.random.SeedSequence(seed)
    seed_parent, seed_pair = ss.spawn(2)
    parent = sample_bernoulli(sbm_from_rate(cfg.n, cfg.K, q), seed_parent)
    pair = make_pair(parent, 1.0, rho, seed_pair)  # s forced to 1 here
    ga, gb, truth = pair.a.graph, pair.b.graph, pair.truth
    w_ab = distance_matrix(ga, gb)
    setting = f"q={q!r},rho={rho!r}"
    rows, timings = [], []
    for method in cfg.methods:
        for d in _method_d_list(method, cfg.d):
            shared_w = w_ab if method in ("dp", "ee", "ee-pre", "ee-post") else None
            ma, sec = _method_metrics(ga, gb, truth, method, d, cfg.n_rep, tau,
                                      shared_w, k=cfg.K)
            row = _blank_row(cfg)
            row.update(n=cfg.n, K=cfg.K, q=q, rho=rho, s=1.0, method=method, d=d,
                       tau=tau, repetition=rep, seed=seed,
                       n_a=ga.n, n_b=gb.n, truth_size=len(truth))
            _fill_sides(row, ma, None)
            rows.append(row)
            timings.append({"setting": setting, "method": method, "d": d,
                            "side": "a", "repetition": rep, "seconds": sec})
    return rows, timings


def _prune_isolated(g: Graph, orig):
    keep = [i for i in range(g.n) if g.degree(i) > 0]
    sub, _ = induced_subgraph(g, keep)
    return sub, [orig[i] for i in keep]


def _run_threshold_task(task):
    """One (t1, m, s, repetition) of the correlation-threshold pipeline."""
    cfg, w_full, t1, m, s, rep = task
    tau = _resolved_tau(cfg)
    t2 = t1 + 0.1 if cfg.mode == "different" else t1
    seed = derive_seed(cfg.seed, "threshold", t1, t2, cfg.mode, m, s, rep)
    rng_a, rng_b, rng_rel = (np.random.default_rng(c)
                             for c in np.random.SeedSequence(seed).spawn(3))
    ga_full = threshold_to_graph(w_full, t1)
    gb_full = threshold_to_graph(w_full, t2)
    ga0, _ = induced_subgraph(ga_full, range(m))
    gb0, _ = induced_subgraph(gb_full, range(m))
    # independent vertex keeping, then isolated-vertex pruning
    kept_a = [int(i) for i in np.nonzero(rng_a.random(m) < s)[0]]
    kept_b = [int(i) for i in np.nonzero(rng_b.random(m) < s)[0]]
    ga1, _ = induced_subgraph(ga0, kept_a)
    gb1, _ = induced_subgraph(gb0, kept_b)
    ga, orig_a = _prune_isolated(ga1, kept_a)
    gb2, orig_b = _prune_isolated(gb1, kept_b)
    # random relabeling of B raises the difficulty; truth tracks it
    pi = rng_rel.permutation(gb2.n).tolist()
    gb = permute(gb2, pi)
    orig_of_b = {}
    for j, o in enumerate(orig_b):
        orig_of_b[pi[j]] = o
    pos_b = {o: j for j, o in orig_of_b.items()}
    truth = {i: pos_b[o] for i, o in enumerate(orig_a) if o in pos_b}
    w_ab = distance_matrix(ga, gb)
    w_ba = np.ascontiguousarray(w_ab.T)
    truth_inv = {j: i for i, j in truth.items()}
    setting = f"t1={t1!r},m={m},s={s!r}"
    rows, timings = [], []
    for method in cfg.methods:
        for d in _method_d_list(method, cfg.d):
            ma, sec_a = _method_metrics(ga, gb, truth, method, d, cfg.n_rep, tau, w_ab)
            mb, sec_b = _method_metrics(gb, ga, truth_inv, method, d, cfg.n_rep, tau, w_ba)
            row = _blank_row(cfg)
            row.update(t1=t1, t2=t2, m=m, mode=cfg.mode, s=s, method=method, d=d,
                       tau=tau, repetition=rep, seed=seed,
                       n_a=ga.n, n_b=gb.n, truth_size=len(truth))
            _fill_sides(row, ma, mb)
            rows.append(row)
            timings.append({"setting": setting, "method": method, "d": d,
                            "side": "a", "repetition": rep, "seconds": sec_a})
            timings.append({"setting": setting, "method": method, "d": d,
                            "side": "b", "repetition": rep, "seconds": sec_b})
    return rows, timings


def _run_file_pair_task(task):
    cfg, rep = task
    tau = _resolved_tau(cfg)
    ga = read_edge_list(cfg.a)
    gb = read_edge_list(cfg.b)
    truth = {}
    if cfg.truth:
        with open(cfg.truth) as f:
            for line in f:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                i, j = (int(tok) for tok in line.split())
                truth[i] = j
    w_ab = distance_matrix(ga, gb)
    rows, timings = [], []
    for method in cfg.methods:
        for d in _method_d_list(method, cfg.d):
            ma, sec = _method_metrics(ga, gb, truth, method, d, cfg.n_rep, tau, w_ab)
            row = _blank_row(cfg)
            row.update(method=method, d=d, tau=tau, repetition=rep, seed=cfg.seed,
                       n_a=ga.n, n_b=gb.n, truth_size=len(truth))
            _fill_sides(row, ma, None)
            rows.append(row)
            timings.append({"setting": "file-pair", "method": method, "d": d,
                            "side": "a", "repetition": rep, "seconds": sec})
    return rows, timings


def _tasks_for(cfg: ExperimentConfig):
    if cfg.scenario == "er":
        return _run_er_task, [
            (cfg, q, rho, s, rep)
            for q in cfg.q
            for rho, s in zip(cfg.rho, cfg.s)
            for rep in range(cfg.repetitions)
        ]
    if cfg.scenario == "sbm":
        return _run_sbm_task, [
            (cfg, q, rho, rep)
            for q in cfg.q
            for rho in cfg.rho
            for rep in range(cfg.repetitions)
        ]
    if cfg.scenario == "threshold-pipeline":
        w_full = read_matrix(cfg.matrix)
        n_w = w_full.shape[0]
        for m in cfg.m:
            if m > n_w:
                raise ValueError(f"m={m} exceeds the matrix size {n_w}")
        return _run_threshold_task, [
            (cfg, w_full, t1, m, s, rep)
            for t1 in cfg.t1
            for m in cfg.m
            for s in cfg.s
            for rep in range(cfg.repetitions)
        ]
    if cfg.scenario == "file-pair":
        return _run_file_pair_task, [(cfg, 0)]
    raise ValueError(f"unknown scenario {cfg.scenario!r}")


def run_er_grid(cfg: ExperimentConfig, jobs: int = 1):
    """Correlated Erdos-Renyi grid; per-graph rates in _a/_b columns."""
    return _execute(cfg, jobs)


def run_sbm_grid(cfg: ExperimentConfig, jobs: int = 1):
    """Six-method comparison on perfectly-overlapping SBM pairs."""
    return _execute(cfg, jobs)


def run_threshold_pipeline(cfg: ExperimentConfig, jobs: int = 1):
    """Correlation-matrix thresholding pipeline."""
    return _execute(cfg, jobs)


def _execute(cfg: ExperimentConfig, jobs: int = 1):
    validate_config(cfg)
    worker, tasks = _tasks_for(cfg)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outputs = list(pool.map(worker, tasks))
    else:
        outputs = [worker(t) for t in tasks]
    rows = [r for out, _ in outputs for r in out]
    timings = [t for _, out in outputs for t in out]
    return rows, timings


def write_results_csv(path, cfg: ExperimentConfig, rows) -> None:
    """Deterministic results CSV: '#' config echo, header, data rows."""
    with open(path, "w", newline="\n") as f:
        for line in cfg.echo_lines():
            f.write(f"# {line}\n")
        f.write(",".join(CSV_FIELDS) + "\n")
        for row in rows:
            f.write(",".join(_fmt(row[k]) for k in CSV_FIELDS) + "\n")


def write_timings_csv(path, timings) -> None:
    """Wall times; excluded from the determinism guarantees."""
    with open(path, "w", newline="\n") as f:
        f.write(",".join(TIMING_FIELDS) + "\n")
        for t in timings:
            f.write(",".join(_fmt(t[k]) for k in TIMING_FIELDS) + "\n")


def run_scenario(cfg: ExperimentConfig, jobs: int = 1, out_dir=None):
    """Run the configured scenario and write results.csv + timings.csv.

    Returns the path of the results CSV.
    """
    rows, timings = _execute(cfg, jobs)
    out_dir = out_dir or cfg.out
    os.makedirs(out_dir, exist_ok=True)
    results_path = os.path.join(out_dir, "results.csv")
    write_results_csv(results_path, cfg, rows)
    write_timings_csv(os.path.join(out_dir, "timings.csv"), timings)
    return results_path
