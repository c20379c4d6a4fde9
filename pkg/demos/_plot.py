"""Optional plotting for the demo scripts; silently skipped without matplotlib."""
from pathlib import Path

OUT = Path(__file__).resolve().parent / "output"

try:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt
except ImportError:  # pragma: no cover
    plt = None


def save(fig, name):
    OUT.mkdir(exist_ok=True)
    fig.savefig(OUT / name, dpi=110, bbox_inches="tight")
    plt.close(fig)
    print(f"  figure -> {OUT / name}")
