"""Band figures for simulated epidemics (median with a 5-95% envelope)."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

# fixed look so reruns produce the same bytes
_STYLE = {"figure.figsize": (6.0, 3.6), "figure.dpi": 100, "font.size": 9,
          "axes.spines.top": False, "axes.spines.right": False, "svg.hashsalt": "hubsim"}


def plot_bands(bands, path, labels=None, title=None):
    """Draw one or more ``(days, median, p5, p95)`` bands and save to ``path``.

    ``bands`` is a list of objects with ``days``, ``i_median``, ``i_p5`` and
    ``i_p95`` attributes (e.g. :class:`hubsim.experiment.ReplicationSummary`).
    """
    labels = labels or [None] * len(bands)
    tmp = f"{path}.tmp{os.path.splitext(str(path))[1]}"
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
        for k, (b, label) in enumerate(zip(bands, labels)):
            color = f"C{k}"
            ax.fill_between(b.days, b.i_p5, b.i_p95, color=color, alpha=0.25, linewidth=0)
            ax.plot(b.days, b.i_median, color=color, linewidth=1.2, label=label)
        ax.set_xlabel("day")
        ax.set_ylabel("infected agents (I)")
        ax.set_xlim(left=0)
        ax.set_ylim(bottom=0)
        if title:
            ax.set_title(title)
        if any(labels):
            ax.legend(frameon=False)
        fig.tight_layout()
        fig.savefig(tmp, metadata={"Software": None})
        plt.close(fig)
    os.replace(tmp, path)
    return path
