"""Optional matplotlib output shared by the figure scripts."""
from pathlib import Path


def maybe_plot(draw, path: Path):
    """Call ``draw(plt)`` and save to ``path`` if matplotlib is installed."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        print(f"matplotlib not installed; skipped {path.name}")
        return
    fig = draw(plt)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    print(f"wrote {path}")
