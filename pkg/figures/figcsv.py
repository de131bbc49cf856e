"""Shared loaders for the CSV/manifest artifacts the plotting scripts consume.

The plotting layer never recomputes statistics: every number drawn or
annotated comes straight out of the artifact files.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path


def read_rows(path: Path, required: list[str]) -> list[dict[str, str]]:
    """DictReader with an explicit named error for absent columns."""
    if not path.exists():
        raise FileNotFoundError(f"missing input {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        have = reader.fieldnames or []
        missing = [c for c in required if c not in have]
        if missing:
            raise ValueError(f"{path}: missing column(s) {', '.join(missing)}")
        return list(reader)


def read_manifest(in_dir: Path) -> dict:
    path = in_dir / "manifest.json"
    if not path.exists():
        raise FileNotFoundError(f"missing input {path}")
    return json.loads(path.read_text())


def manifest_gamma(manifest: dict) -> float:
    """Closed-form long-run reward of the manifest's parameters (the dotted
    reference line; a formula evaluation, not a sample statistic)."""
    p = manifest["params"]
    if p["lambda_plus"] != p["lambda_minus"]:
        raise ValueError("manifest parameters are asymmetric; no closed-form reference")
    lam, eta = p["lambda_plus"], p["eta_mean"]
    return (
        2.0 * p["r"] * lam * eta * p["s0"]
        - lam * eta**2 * p["b"]
        - 2.0 * lam * eta**2 * (p["k"] * p["phi"]) ** 0.5
    )
