"""Read and schema-check the campaign outputs this package consumes.

Only the published file formats are touched here; no physics is ever
recomputed from raw amplitudes.
"""
from __future__ import annotations

import json
from pathlib import Path

SUPPORTED_SCHEMA = 1


class SchemaMismatch(ValueError):
    """Input file carries an unsupported schema_version."""


class MissingSeries(KeyError):
    """The summary lacks a series this figure needs."""


def load_summary(path: str | Path) -> dict:
    summary = json.loads(Path(path).read_text(encoding="utf-8"))
    version = summary.get("schema_version")
    if version != SUPPORTED_SCHEMA:
        raise SchemaMismatch(
            f"{path}: schema_version {version!r}, supported {SUPPORTED_SCHEMA}")
    if "points" not in summary:
        raise MissingSeries(f"{path}: no points series in summary")
    return summary


def points_by_qubits(summary: dict) -> dict[int, dict]:
    """Haar-mode points keyed by N (depth -1 rows only, or all-depth-free)."""
    out = {}
    for point in summary["points"]:
        if point["depth"] < 0:
            out[point["n_qubits"]] = point
    if not out:
        raise MissingSeries("summary has no Haar-ensemble points (depth -1)")
    return out


def points_by_depth(summary: dict) -> dict[int, dict]:
    """Brick-wall sweep points keyed by depth, including the -1 reference."""
    depths = {p["depth"]: p for p in summary["points"]}
    if len(depths) < 2 or -1 not in depths:
        raise MissingSeries("summary is not a depth sweep with a Haar reference")
    return depths


def ks_table(summary: dict) -> list[dict]:
    if "ks_table" not in summary:
        raise MissingSeries("summary has no ks_table (not a convergence run)")
    return summary["ks_table"]


def scaling_fits(summary: dict) -> dict:
    fits = summary.get("fits")
    if not fits:
        raise MissingSeries("summary has no scaling fits (not a scaling run)")
    return fits
