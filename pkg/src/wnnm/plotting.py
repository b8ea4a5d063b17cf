"""Static SVG charts for J(tau) curves and phase sweeps.

matplotlib is imported lazily; the SVG output is made byte-reproducible by
fixing the hash salt and dropping the date metadata.
"""

from __future__ import annotations

import io
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

_RC = {"svg.hashsalt": "wnnm", "svg.fonttype": "none"}


def _render(fig) -> str:
    buf = io.StringIO()
    fig.savefig(buf, format="svg", metadata={"Date": None})
    plt.close(fig)
    return buf.getvalue()


def jtau_chart(taus, values, shape, marker=None) -> str:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.plot(taus, values, color="C0")
        ax.axhline(shape.d, color="0.6", lw=0.8, ls="--")
        if marker is not None:
            ax.plot([marker.tau_star], [marker.delta_hat], "o", color="C3")
            half = marker.window_constant * math.sqrt(shape.d)
            ax.axhspan(marker.delta_hat - half, marker.delta_hat + half, color="C3", alpha=0.15)
        ax.set_xlabel("tau")
        ax.set_ylabel("J(tau)")
        ax.set_title(f"m={shape.m}, n={shape.n}, r={shape.r}")
        return _render(fig)


def phase_chart(result, crossing) -> str:
    with plt.rc_context(_RC):
        fig, ax = plt.subplots(figsize=(6, 4))
        ax.axvspan(crossing.window_low, crossing.window_high, color="C3", alpha=0.15)
        if result.predicted is not None:
            ax.axvline(result.predicted.delta_hat, color="C3", lw=1)
        ax.plot(result.p_values, result.rates, marker=".", color="C0")
        ax.axhline(0.5, color="0.6", lw=0.8, ls="--")
        ax.set_ylim(-0.05, 1.05)
        ax.set_xlabel("measurements p")
        ax.set_ylabel("success rate")
        s = result.shape
        ax.set_title(f"m={s.m}, n={s.n}, r={s.r}")
        return _render(fig)
