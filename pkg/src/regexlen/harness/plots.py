"""Cactus plot of solved instances against cumulative time."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def cactus(report, path: str, title: str = "solved instances"):
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for name in report.configs:
        times = sorted(r.time_ms / 1000 for r in report.by_config(name) if r.verdict in ("sat", "unsat"))
        total, xs = 0.0, []
        for t in times:
            total += t
            xs.append(total)
        ax.step(range(1, len(xs) + 1), xs, where="post", label=name)
    ax.set_xlabel("instances solved")
    ax.set_ylabel("cumulative time (s)")
    ax.set_title(title)
    ax.grid(alpha=0.3)
    ax.legend(fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
