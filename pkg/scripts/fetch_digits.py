"""Write the handwritten-digits dataset (1,797 items, 8x8 pixels) as CSV.

The data comes from scikit-learn's bundled copy of the UCI optical
recognition of handwritten digits test set, so no network access is needed.

    python scripts/fetch_digits.py --out data/digits.csv [--rows 200]
"""

from pathlib import Path
from typing import Optional

import pandas as pd
import typer
from rich.console import Console
from sklearn.datasets import load_digits

console = Console()


def digits_frame(rows: Optional[int] = None) -> pd.DataFrame:
    """64 pixel columns p0..p63 plus an integer `label` column, in dataset order."""
    digits = load_digits()
    frame = pd.DataFrame(digits.data, columns=[f"p{i}" for i in range(digits.data.shape[1])])
    frame["label"] = digits.target
    return frame.head(rows) if rows else frame


def main(
    out: Path = typer.Option(Path("data/digits.csv"), "--out", "-o", help="CSV file to write"),
    rows: Optional[int] = typer.Option(None, "--rows", help="Keep only the first N rows"),
):
    out.parent.mkdir(parents=True, exist_ok=True)
    frame = digits_frame(rows)
    frame.to_csv(out, index=False)
    console.print(f"[green]Wrote {len(frame)} digits x {frame.shape[1] - 1} features to {out}")


if __name__ == "__main__":
    typer.run(main)
