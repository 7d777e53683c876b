"""Matplotlib figures written next to the CSV output."""
import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _finish(fig, ax, path):
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return path


def plot_spectra(curves, path, title=None, peaks=None):
    """Overlay spectra. ``curves`` maps a legend label to a Spectrum."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, s in curves.items():
        ax.plot(s.omega, s.values, lw=1.2, label=label)
    if peaks is not None:
        for pk in peaks.peaks:
            ax.axvline(pk.center, color="k", ls=":", lw=0.8)
    ax.set_xlabel(r"$\omega$ (GHz, drive frame)")
    ax.set_ylabel(r"$S_V(\omega)$ (arb. units)")
    if len(curves) > 1:
        ax.legend(frameon=False)
    if title:
        ax.set_title(title)
    return _finish(fig, ax, path)


def plot_correlation(series, path, title=None):
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(series.tau, series.values.real, lw=0.8, label="Re")
    ax.plot(series.tau, series.values.imag, lw=0.8, label="Im")
    ax.set_xlabel(r"$\tau$ (ns)")
    ax.set_ylabel(r"$\langle V(\tau)V(0)\rangle$")
    ax.legend(frameon=False)
    if title:
        ax.set_title(title)
    return _finish(fig, ax, path)
