"""File formats: edge lists, feature/label files, signals, sample files."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .graph import Graph, build_from_edges


def _parse_float(token: str, path, lineno: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ValueError(f"{path}:{lineno}: unparseable number {token!r}") from None


def _parse_int(token: str, path, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ValueError(f"{path}:{lineno}: unparseable integer {token!r}") from None


def read_edgelist(path) -> Graph:
    """Read a graph from a text file: first line "n", then "i j w" triples."""
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty edge-list file")
    n = _parse_int(lines[0].strip(), path, 1)
    edges = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 3:
            raise ValueError(f"{path}:{lineno}: expected 'i j w', got {line!r}")
        i = _parse_int(parts[0], path, lineno)
        j = _parse_int(parts[1], path, lineno)
        w = _parse_float(parts[2], path, lineno)
        edges.append((i, j, w))
    return build_from_edges(n, edges)


def write_edgelist(g: Graph, path) -> None:
    lines = [str(g.n)]
    lines.extend(f"{i} {j} {w!r}" for i, j, w in g.edges)
    Path(path).write_text("\n".join(lines) + "\n")


def read_features(path) -> np.ndarray:
    """Read a feature matrix from headerless CSV, one row per data point."""
    rows = []
    width = None
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            values = [_parse_float(tok, path, lineno) for tok in line.split(",")]
            if width is None:
                width = len(values)
            elif len(values) != width:
                raise ValueError(
                    f"{path}:{lineno}: expected {width} columns, got {len(values)}"
                )
            rows.append(values)
    if not rows:
        raise ValueError(f"{path}: empty feature file")
    return np.asarray(rows, dtype=float)


def read_labels(path) -> np.ndarray:
    """Read integer class ids, one per line."""
    labels = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            labels.append(_parse_int(line, path, lineno))
    if not labels:
        raise ValueError(f"{path}: empty label file")
    return np.asarray(labels, dtype=int)


def read_signal(path) -> np.ndarray:
    """Read a signal stored as single-column CSV."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            values.append(_parse_float(line, path, lineno))
    if not values:
        raise ValueError(f"{path}: empty signal file")
    return np.asarray(values, dtype=float)


def write_signal(values, path) -> None:
    Path(path).write_text("\n".join(repr(float(v)) for v in values) + "\n")


def read_samples(path) -> tuple[np.ndarray, np.ndarray]:
    """Read observed samples as "index,value" lines; returns (indices, values).

    Lines are sorted by node index; duplicate indices are an error.
    """
    indices = []
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'index,value', got {line!r}")
            indices.append(_parse_int(parts[0], path, lineno))
            values.append(_parse_float(parts[1], path, lineno))
    if not indices:
        raise ValueError(f"{path}: no samples found")
    idx = np.asarray(indices, dtype=int)
    if len(np.unique(idx)) != len(idx):
        raise ValueError(f"{path}: duplicate sample indices")
    order = np.argsort(idx)
    return idx[order], np.asarray(values, dtype=float)[order]


def read_node_list(path) -> np.ndarray:
    """Read node indices, one per line; blank lines and '#' comments skipped."""
    nodes = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            nodes.append(_parse_int(line, path, lineno))
    if not nodes:
        raise ValueError(f"{path}: no node indices found")
    return np.asarray(nodes, dtype=int)
