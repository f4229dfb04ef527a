"""Render a run's outputs to a report directory.

Writes the delimited per-update output (``output.txt``), the maintained
value trajectory (``trajectory.png``), and a counters bar chart
(``counters.png``).
"""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .runner import RunResult


def write_report(result: RunResult, mode: str, directory: str) -> list[str]:
    """Render the report files; returns the paths written."""
    os.makedirs(directory, exist_ok=True)
    paths = []

    out_path = os.path.join(directory, "output.txt")
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(result.lines) + ("\n" if result.lines else ""))
    paths.append(out_path)

    fig, ax = plt.subplots(figsize=(8, 4))
    ax.step(range(1, len(result.values) + 1), result.values, where="post")
    ax.set_xlabel("update")
    ax.set_ylabel("maintained value")
    ax.set_title(f"{mode}: value per update")
    fig.tight_layout()
    traj_path = os.path.join(directory, "trajectory.png")
    fig.savefig(traj_path)
    plt.close(fig)
    paths.append(traj_path)

    flat = _flatten(result.stats)
    if flat:
        fig, ax = plt.subplots(figsize=(8, 4))
        keys = sorted(flat)
        ax.bar(range(len(keys)), [flat[k] for k in keys])
        ax.set_xticks(range(len(keys)))
        ax.set_xticklabels(keys, rotation=30, ha="right")
        ax.set_title(f"{mode}: counters")
        fig.tight_layout()
        ctr_path = os.path.join(directory, "counters.png")
        fig.savefig(ctr_path)
        plt.close(fig)
        paths.append(ctr_path)
    return paths


def _flatten(stats: dict, prefix: str = "") -> dict[str, float]:
    out: dict[str, float] = {}
    for key, val in stats.items():
        name = f"{prefix}{key}"
        if isinstance(val, dict):
            out.update(_flatten(val, f"{name}."))
        elif isinstance(val, (int, float)):
            out[name] = float(val)
    return out
