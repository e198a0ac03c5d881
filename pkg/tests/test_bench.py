import math
import os

import numpy as np
import pytest

from dpmatch import CandidateMatrix, MatchResult, from_edge_list, permute, write_edge_list, write_matrix
from dpmatch.bench import ExperimentConfig, emit_plots, load_config, parse_config, run_scenario
from dpmatch.bench.config import validate_config
from dpmatch.bench.metrics import is_successful, recovery_rate
from dpmatch.bench.runner import derive_seed, _execute

RIGID6 = [(0, 2), (0, 4), (1, 2), (2, 3), (2, 4), (3, 5), (4, 5)]


def perfect_result(n):
    return MatchResult({i: i for i in range(n)}, {i: 1 for i in range(n)},
                       {i: 5 for i in range(n)})


def read_csv_rows(path):
    with open(path) as f:
        lines = [line.rstrip("\n") for line in f if not line.startswith("#")]
    header = lines[0].split(",")
    return [dict(zip(header, line.split(","))) for line in lines[1:]]


def test_recovery_perfect_every_mode():
    truth = {i: i for i in range(4)}
    res = perfect_result(4)
    assert recovery_rate(res, truth, "all") == 1.0
    assert recovery_rate(res, truth, "matched") == 1.0
    assert recovery_rate(res, truth, "converged") == 1.0
    cand = CandidateMatrix(4, 4, 2, [(i, (i + 1) % 4) for i in range(4)])
    assert recovery_rate(cand, truth, "candidate") == 1.0


def test_recovery_empty_matching_sentinels():
    truth = {0: 0, 1: 1}
    res = MatchResult({}, {}, {})
    assert recovery_rate(res, truth, "all") == 0.0
    assert recovery_rate(res, truth, "matched") is None
    assert recovery_rate(res, truth, "converged") is None


def test_recovery_candidate_full_row():
    truth = {i: i for i in range(3)}
    cand = CandidateMatrix(3, 3, 3, [tuple(range(3))] * 3)
    assert recovery_rate(cand, truth, "candidate") == 1.0


def test_recovery_partial_counts():
    truth = {0: 0, 1: 1, 2: 2, 3: 3}
    res = MatchResult({0: 0, 1: 2, 3: 3}, {0: 1, 1: 0, 3: 1}, {0: 9, 1: 0, 3: 9})
    # correct pairs: (0,0) and (3,3); (1,2) is wrong
    assert recovery_rate(res, truth, "all") == 0.5
    assert recovery_rate(res, truth, "matched") == pytest.approx(2 / 3)
    assert recovery_rate(res, truth, "converged") == 1.0  # flagged {0,3} both right


def test_recovery_requires_truth_and_known_mode():
    res = perfect_result(2)
    with pytest.raises(ValueError):
        recovery_rate(res, {}, "all")
    with pytest.raises(ValueError):
        recovery_rate(res, {0: 0}, "bogus")


def test_is_successful_strict_majority():
    res = MatchResult({i: i for i in range(4)}, {0: 1, 1: 1, 2: 0, 3: 0}, {})
    assert not is_successful(res, 4)  # exactly half is not success
    res2 = MatchResult({i: i for i in range(4)}, {0: 1, 1: 1, 2: 1, 3: 0}, {})
    assert is_successful(res2, 4)


def test_config_parse_round_trip():
    cfg = ExperimentConfig(scenario="er", n=40, q=[0.2, 0.1], rho=[0.9], s=[0.8],
                           d=[2, 5], n_rep=7, repetitions=3, seed=11, methods=["dp", "ee"])
    text = "\n".join(cfg.echo_lines())
    cfg2 = parse_config(text)
    assert cfg2 == cfg


def test_config_rejects_unknown_and_duplicate_keys():
    with pytest.raises(ValueError):
        parse_config("bogus_key=1")
    with pytest.raises(ValueError):
        parse_config("n=3\nn=4")


def test_config_list_keys_accumulate():
    cfg = parse_config("scenario=er\nq=0.1\nq=0.05\nrho=1.0\ns=1.0")
    assert cfg.q == [0.1, 0.05]


def test_config_validation_errors():
    with pytest.raises(ValueError):
        validate_config(ExperimentConfig(scenario="nope"))
    with pytest.raises(ValueError):
        validate_config(ExperimentConfig(scenario="er", rho=[1.0, 0.9], s=[1.0]))
    with pytest.raises(ValueError):
        validate_config(ExperimentConfig(scenario="er", d=[0]))
    with pytest.raises(ValueError):
        validate_config(ExperimentConfig(scenario="er", methods=["comm-dp"]))
    with pytest.raises(ValueError):
        validate_config(ExperimentConfig(scenario="threshold-pipeline"))
    with pytest.raises(ValueError):
        validate_config(ExperimentConfig(scenario="file-pair", a="x.txt"))


def test_config_defaults_methods_per_scenario():
    cfg = ExperimentConfig(scenario="er")
    validate_config(cfg)
    assert cfg.methods == ["dp", "ee", "ee-pre", "ee-post"]
    cfg2 = ExperimentConfig(scenario="sbm")
    validate_config(cfg2)
    assert "comm-refine-ee-post" in cfg2.methods


def test_derive_seed_stable_and_distinct():
    a = derive_seed(7, "er", 300, 0.1, 0)
    assert a == derive_seed(7, "er", 300, 0.1, 0)
    assert a != derive_seed(7, "er", 300, 0.1, 1)
    assert a != derive_seed(8, "er", 300, 0.1, 0)


def small_er_cfg(**overrides):
    base = dict(scenario="er", n=30, q=[0.2], rho=[0.9], s=[0.9], d=[2],
                n_rep=3, repetitions=2, seed=5, methods=["dp"])
    base.update(overrides)
    return ExperimentConfig(**base)


def test_er_row_accounting():
    rows, _ = _execute(small_er_cfg())
    assert len(rows) == 2  # repetitions x settings x methods
    rows2, _ = _execute(small_er_cfg(q=[0.2, 0.3], repetitions=3))
    assert len(rows2) == 6


def test_er_reports_both_sides():
    rows, _ = _execute(small_er_cfg(methods=["dp", "ee-post"]))
    for row in rows:
        assert row["recovery_all_a"] is not None
        assert row["recovery_all_b"] is not None
        assert 0.0 <= row["recovery_all_a"] <= 1.0


def test_er_candidate_methods_report_containment():
    rows, _ = _execute(small_er_cfg(methods=["ee"]))
    for row in rows:
        assert row["containment_a"] is not None
        assert row["recovery_all_a"] is None


def test_sbm_forces_full_overlap_single_side():
    cfg = ExperimentConfig(scenario="sbm", n=40, K=2, q=[0.3], rho=[0.9],
                           s=[0.5], d=[2], n_rep=3, repetitions=1,
                           seed=3, methods=["dp", "comm-dp"])
    rows, _ = _execute(cfg)
    assert len(rows) == 2
    for row in rows:
        assert row["s"] == 1.0
        assert row["recovery_all_b"] is None
        assert row["n_a"] == 40 and row["n_b"] == 40


def test_scenario_rerun_is_byte_identical(tmp_path):
    cfg = small_er_cfg(methods=["dp", "ee", "ee-post"], out=str(tmp_path / "o1"))
    path1 = run_scenario(cfg)
    cfg2 = small_er_cfg(methods=["dp", "ee", "ee-post"], out=str(tmp_path / "o2"))
    path2 = run_scenario(cfg2)
    with open(path1, "rb") as f1, open(path2, "rb") as f2:
        assert f1.read() == f2.read()


def test_jobs_parallel_matches_serial(tmp_path):
    cfg = small_er_cfg(repetitions=3, out=str(tmp_path / "serial"))
    path1 = run_scenario(cfg, jobs=1)
    cfg2 = small_er_cfg(repetitions=3, out=str(tmp_path / "par"))
    path2 = run_scenario(cfg2, jobs=2)
    with open(path1, "rb") as f1, open(path2, "rb") as f2:
        assert f1.read() == f2.read()


def test_timings_written_but_separate(tmp_path):
    cfg = small_er_cfg(out=str(tmp_path / "out"))
    results = run_scenario(cfg)
    timings = os.path.join(os.path.dirname(results), "timings.csv")
    assert os.path.exists(timings)
    with open(timings) as f:
        lines = f.read().strip().splitlines()
    assert lines[0].startswith("setting,method")
    assert len(lines) > 1
    with open(results) as f:
        assert "seconds" not in f.readline()


def rigid_matrix():
    w = np.full((6, 6), 0.1)
    for u, v in RIGID6:
        w[u, v] = w[v, u] = 0.9
    np.fill_diagonal(w, 0.0)
    return w


def test_threshold_pipeline_identity_recovery(tmp_path):
    path = tmp_path / "w.txt"
    write_matrix(rigid_matrix(), path)
    cfg = ExperimentConfig(scenario="threshold-pipeline", matrix=str(path),
                           mode="same", t1=[0.5], m=[6], s=[1.0], d=[2],
                           n_rep=3, repetitions=2, seed=9, methods=["dp"],
                           out=str(tmp_path / "out"))
    rows, _ = _execute(cfg)
    assert len(rows) == 2
    for row in rows:
        assert row["t2"] == 0.5
        assert row["n_a"] == 6 and row["n_b"] == 6
        assert row["recovery_all_a"] == 1.0
        assert row["recovery_all_b"] == 1.0


def test_threshold_pipeline_different_mode_subgraph(tmp_path):
    w = rigid_matrix()
    w[0, 2] = w[2, 0] = 0.55  # survives t=0.5 only
    path = tmp_path / "w.txt"
    write_matrix(w, path)
    cfg = ExperimentConfig(scenario="threshold-pipeline", matrix=str(path),
                           mode="different", t1=[0.5], m=[6], s=[1.0], d=[2],
                           n_rep=2, repetitions=1, seed=4, methods=["dp"],
                           out=str(tmp_path / "out"))
    rows, _ = _execute(cfg)
    row = rows[0]
    assert row["t1"] == 0.5 and row["t2"] == pytest.approx(0.6)
    assert row["truth_size"] <= 6


def test_threshold_pipeline_rejects_oversized_m(tmp_path):
    path = tmp_path / "w.txt"
    write_matrix(rigid_matrix(), path)
    cfg = ExperimentConfig(scenario="threshold-pipeline", matrix=str(path),
                           mode="same", t1=[0.5], m=[10], s=[1.0],
                           methods=["dp"], out=str(tmp_path / "out"))
    with pytest.raises(ValueError):
        _execute(cfg)


def test_file_pair_scenario(tmp_path):
    g = from_edge_list(6, RIGID6)
    sigma = [2, 0, 5, 1, 4, 3]
    h = permute(g, sigma)
    a_path, b_path, t_path = tmp_path / "a.txt", tmp_path / "b.txt", tmp_path / "t.txt"
    write_edge_list(g, a_path)
    write_edge_list(h, b_path)
    t_path.write_text("".join(f"{i} {sigma[i]}\n" for i in range(6)))
    cfg = ExperimentConfig(scenario="file-pair", a=str(a_path), b=str(b_path),
                           truth=str(t_path), d=[2], n_rep=3,
                           methods=["dp", "ee-post"], out=str(tmp_path / "out"))
    rows, _ = _execute(cfg)
    assert len(rows) == 2
    assert all(row["recovery_all_a"] == 1.0 for row in rows)


def test_emit_plots_writes_svg(tmp_path):
    cfg = small_er_cfg(methods=["dp", "ee", "ee-post"], out=str(tmp_path / "out"))
    results = run_scenario(cfg)
    written = emit_plots(results, str(tmp_path / "plots"))
    assert written, "no plots produced"
    for path in written:
        assert path.endswith(".svg")
        with open(path) as f:
            assert "<svg" in f.read()


def test_emit_plots_single_row(tmp_path):
    cfg = small_er_cfg(repetitions=1, out=str(tmp_path / "out"))
    results = run_scenario(cfg)
    written = emit_plots(results, str(tmp_path / "plots"))
    assert len(written) >= 1


def test_emit_plots_rejects_empty_csv(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("# scenario=er\nscenario,method\n")
    with pytest.raises(ValueError):
        emit_plots(str(path), str(tmp_path / "plots"))


def test_cli_runs_config(tmp_path):
    from dpmatch.bench.cli import main

    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text(
        "scenario=er\nn=25\nq=0.2\nrho=0.9\ns=0.9\nd=2\nn_rep=2\n"
        "repetitions=1\nseed=2\nmethod=dp\n"
    )
    out = tmp_path / "out"
    assert main(["--config", str(cfg_path), "--out", str(out)]) == 0
    assert (out / "results.csv").exists()
    assert (out / "timings.csv").exists()


def test_cli_plot_flag(tmp_path):
    from dpmatch.bench.cli import main

    cfg_path = tmp_path / "run.cfg"
    cfg_path.write_text(
        "scenario=er\nn=25\nq=0.2\nrho=0.9\ns=0.9\nd=2\nn_rep=2\n"
        "repetitions=1\nseed=2\nmethod=dp\n"
    )
    out = tmp_path / "out"
    assert main(["--config", str(cfg_path), "--out", str(out), "--plot"]) == 0
    assert any(name.endswith(".svg") for name in os.listdir(out))


def test_cli_rejects_bad_scenario(tmp_path):
    from dpmatch.bench.cli import main

    assert main(["--scenario", "bogus", "--out", str(tmp_path / "x")]) == 2


def test_csv_seed_column_content_addressed(tmp_path):
    cfg = small_er_cfg(out=str(tmp_path / "out"))
    results = run_scenario(cfg)
    rows = read_csv_rows(results)
    assert len(rows) == 2
    expected = derive_seed(5, "er", 30, 0.2, 0.9, 0.9, 0)
    assert rows[0]["seed"] == str(expected)
    assert rows[0]["seed"] != rows[1]["seed"]
