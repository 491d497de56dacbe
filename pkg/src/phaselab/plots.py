"""Figure rendering for analysis reports and sweeps.

Every CLI command that writes structured output can render a companion
figure next to it.  Rendering is headless and deterministic: fixed sizes,
no timestamps, data taken verbatim from the result objects.
"""

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_META = {"Software": "phaselab"}


def _save(fig, path):
    fig.savefig(path, dpi=120, bbox_inches="tight", metadata=_META)
    plt.close(fig)


def sweep_figure(result, path):
    """One panel per sweep kind: fitted growth for the dimension sweep,
    normalized constants for the oversampling sweep, the tau trend for the
    fixed-dimension sweep."""
    params = np.array([r.param for r in result.rows])
    taus = np.array([r.tau_lower for r in result.rows])
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if result.kind == "dimension":
        y = np.log2(taus)
        ax.plot(params, y, "o-", label="log2 tau_lower")
        if result.growth_fit is not None and len(params) >= 2:
            coef = np.polyfit(params, y, 1)
            ax.plot(
                params,
                np.polyval(coef, params),
                "--",
                label="fit, slope %.2f" % result.growth_fit,
            )
        ax.set_xlabel("m")
        ax.set_ylabel("log2 tau_lower")
        ax.legend()
    elif result.kind == "oversample":
        ax.plot(params, taus, "o-", label="tau_lower")
        sig = np.array([r.sigma / r.B if r.B > 0 else np.nan for r in result.rows])
        ax2 = ax.twinx()
        ax2.plot(params, sig, "s--", color="tab:orange", label="sigma / B")
        ax.set_xlabel("q")
        ax.set_ylabel("tau_lower")
        ax2.set_ylabel("sigma / B")
        lines = ax.get_lines() + ax2.get_lines()
        ax.legend(lines, [l.get_label() for l in lines])
    else:
        ax.plot(params, taus, "o-")
        ax.set_xlabel(result.param_name)
        ax.set_ylabel("tau_lower")
    ax.set_title("%s sweep" % result.kind)
    _save(fig, path)


def report_figure(report, interval, path):
    """Constant summary of one frame: the measured norm and robustness
    constants on a log scale, with the condition interval printed."""
    names = ["A", "B", "sigma", "alpha_upper", "beta"]
    vals = [report.A, report.B, report.sigma, report.alpha_upper, report.beta]
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    xs = np.arange(len(names))
    pos = [max(v, 1e-300) for v in vals]
    ax.bar(xs, pos, color="tab:blue")
    ax.set_xticks(xs)
    ax.set_xticklabels(names)
    posvals = [v for v in vals if v > 0]
    if posvals and max(posvals) / min(posvals) > 50:
        ax.set_yscale("log")
    if interval.infinite:
        note = "tau = infinity (sigma = 0)"
    else:
        note = "tau in [%.4g, %.4g]" % (interval.low, interval.high)
    ax.set_title("%s frame, d=%d, N=%d: %s" % (report.field, report.d, report.n, note))
    _save(fig, path)


def density_figure(sampling_set, verdict, path):
    """The point set on its window with the computed density against the
    decision threshold."""
    fig, (ax0, ax1) = plt.subplots(
        2, 1, figsize=(6.0, 4.0), height_ratios=[1, 2]
    )
    pts = sampling_set.points
    ax0.vlines(pts, 0, 1, colors="tab:blue", lw=0.8)
    ax0.set_xlim(*sampling_set.window)
    ax0.set_yticks([])
    ax0.set_title("%d points on [%g, %g]" % (len(pts), *sampling_set.window))
    ax1.bar([0, 1], [verdict.density, verdict.threshold], color=["tab:blue", "tab:red"])
    ax1.set_xticks([0, 1])
    ax1.set_xticklabels(["density", "threshold"])
    ax1.set_title("verdict: %s" % verdict.verdict)
    _save(fig, path)


def recon_figure(result, path):
    """Residual trajectory of the winning restart."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    traj = np.array(result.trajectory)
    ax.semilogy(np.arange(len(traj)), np.maximum(traj, 1e-300), "o-")
    ax.set_xlabel("iteration")
    ax.set_ylabel("l2 magnitude residual")
    ax.set_title(
        "best of %d restarts: residual %.3g, %s"
        % (
            result.restarts,
            result.residual,
            "converged" if result.converged else "not converged",
        )
    )
    _save(fig, path)
