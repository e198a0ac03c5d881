"""Grouped-bar SVG summaries of a results CSV.

One figure per (setting, side): a bar per method/candidate-depth combo.
Point-estimate bars are stacked so the lower block is the strict
all-vertices recovery rate and the translucent block on top is the
surplus of the conditional rate (matched-only for the plain profile
matcher, converged-only for the refined ones). Candidate methods plot
their containment rate as a single bar. Whiskers are standard errors
across repetitions.
"""

from __future__ import annotations

import csv
import math
import os

import matplotlib

matplotlib.use("Agg", force=True)

import matplotlib.pyplot as plt  # noqa: E402

NA = "NA"

# columns that identify one plotted figure, in filename order
_ER_KEYS = ("q", "rho", "s")
_SBM_KEYS = ("q", "rho", "K")
_THRESHOLD_KEYS = ("t1", "m", "s")


def _read_rows(csv_path):
    rows = []
    with open(csv_path) as f:
        data_lines = [line for line in f if not line.startswith("#")]
    for row in csv.DictReader(data_lines):
        rows.append(row)
    if not rows:
        raise ValueError(f"no data rows in {csv_path}")
    return rows


def _mean_stderr(values):
    xs = [float(v) for v in values if v not in (None, "", NA)]
    if not xs:
        return 0.0, 0.0
    mean = sum(xs) / len(xs)
    if len(xs) < 2:
        return mean, 0.0
    var = sum((x - mean) ** 2 for x in xs) / (len(xs) - 1)
    return mean, math.sqrt(var) / math.sqrt(len(xs))


def _setting_keys(scenario: str):
    if scenario == "er":
        return _ER_KEYS
    if scenario == "sbm":
        return _SBM_KEYS
    if scenario == "threshold-pipeline":
        return _THRESHOLD_KEYS
    return ()


def _bar_label(method: str, d: str) -> str:
    return method if d in (None, "", NA) else f"{method} d={d}"


def _collect_bars(rows, side: str):
    """Aggregate repetitions into (label, base, top, err) per method/d."""
    by_combo: dict[tuple, dict[str, list]] = {}
    order: list[tuple] = []
    for row in rows:
        combo = (row["method"], row["d"])
        if combo not in by_combo:
            by_combo[combo] = {"all": [], "cond": [], "cont": []}
            order.append(combo)
        acc = by_combo[combo]
        acc["all"].append(row[f"recovery_all_{side}"])
        if row["method"] == "dp":
            acc["cond"].append(row[f"recovery_matched_{side}"])
        else:
            acc["cond"].append(row[f"recovery_converged_{side}"])
        acc["cont"].append(row[f"containment_{side}"])
    bars = []
    for combo in order:
        acc = by_combo[combo]
        label = _bar_label(*combo)
        cont_mean, cont_err = _mean_stderr(acc["cont"])
        if any(v not in (None, "", NA) for v in acc["cont"]):
            bars.append((label, cont_mean, 0.0, cont_err, True))
            continue
        base, base_err = _mean_stderr(acc["all"])
        cond, _ = _mean_stderr(acc["cond"])
        bars.append((label, base, max(0.0, cond - base), base_err, False))
    return bars


def _draw(bars, title, out_path):
    fig, ax = plt.subplots(figsize=(max(4.0, 1.1 * len(bars)), 3.2))
    xs = range(len(bars))
    base_vals = [b[1] for b in bars]
    top_vals = [b[2] for b in bars]
    colors = ["#bbbbbb" if b[4] else "#4878d0" for b in bars]
    ax.bar(xs, base_vals, color=colors, yerr=[b[3] for b in bars], capsize=3)
    ax.bar(xs, top_vals, bottom=base_vals, color="#85a8e0", alpha=0.7)
    ax.set_xticks(list(xs))
    ax.set_xticklabels([b[0] for b in bars], rotation=30, ha="right", fontsize=8)
    ax.set_ylim(0.0, 1.05)
    ax.set_ylabel("recovery rate")
    ax.set_title(title, fontsize=9)
    fig.tight_layout()
    fig.savefig(out_path, format="svg")
    plt.close(fig)


def emit_plots(csv_path, out_dir) -> list:
    """Render one SVG per (setting, side) found in the results CSV.

    Returns the list of written paths.
    """
    rows = _read_rows(csv_path)
    os.makedirs(out_dir, exist_ok=True)
    scenario = rows[0]["scenario"]
    keys = _setting_keys(scenario)
    groups: dict[tuple, list] = {}
    order: list[tuple] = []
    for row in rows:
        g = tuple(row[k] for k in keys)
        if g not in groups:
            groups[g] = []
            order.append(g)
        groups[g].append(row)
    written = []
    for g in order:
        group_rows = groups[g]
        for side in ("a", "b"):
            has_side = any(
                r.get(f"recovery_all_{side}") not in (None, "", NA)
                or r.get(f"containment_{side}") not in (None, "", NA)
                or r.get(f"matched_{side}") not in (None, "", NA)
                for r in group_rows
            )
            if not has_side:
                continue
            bars = _collect_bars(group_rows, side)
            stem = "_".join([scenario] + [f"{k}{v}" for k, v in zip(keys, g)
                                          if v not in (None, "", NA)])
            title = ", ".join(f"{k}={v}" for k, v in zip(keys, g)
                              if v not in (None, "", NA)) or scenario
            out_path = os.path.join(out_dir, f"{stem}_side{side}.svg")
            _draw(bars, f"{scenario}: {title} (side {side})", out_path)
            written.append(out_path)
    return written
