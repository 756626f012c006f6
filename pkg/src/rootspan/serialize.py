"""JSON / CSV helpers: complex values travel as [re, im] pairs and all
numeric text is rendered with 17 significant digits."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np


def fmt(x) -> str:
    return format(float(x), ".17g")


def complex_to_pair(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def pair_to_complex(pair) -> complex:
    return complex(float(pair[0]), float(pair[1]))


def vector_to_pairs(v) -> list:
    return [complex_to_pair(z) for z in np.asarray(v, dtype=complex)]


def pairs_to_vector(pairs) -> np.ndarray:
    return np.array([pair_to_complex(p) for p in pairs], dtype=complex)


def matrix_to_pairs(m) -> list:
    """Row-major list of rows, each a list of [re, im] pairs."""
    return [vector_to_pairs(row) for row in np.asarray(m, dtype=complex)]


def pairs_to_matrix(rows) -> np.ndarray:
    return np.array([[pair_to_complex(p) for p in row] for row in rows], dtype=complex)


def matrix_to_flat_pairs(m) -> list:
    """Row-major flat list of [re, im] pairs."""
    return vector_to_pairs(np.asarray(m, dtype=complex).ravel())


def flat_pairs_to_matrix(pairs, n: int) -> np.ndarray:
    return pairs_to_vector(pairs).reshape(n, n)


def _stringify(node):
    if isinstance(node, dict):
        return {k: _stringify(v) for k, v in node.items()}
    if isinstance(node, (list, tuple)):
        return [_stringify(v) for v in node]
    if isinstance(node, bool) or node is None:
        return node
    if isinstance(node, (int, np.integer)):
        return int(node)
    if isinstance(node, (float, np.floating)):
        return fmt(node)
    if isinstance(node, (complex, np.complexfloating)):
        return [fmt(node.real), fmt(node.imag)]
    return node


def dump_report(obj: dict, path) -> None:
    """Write a deterministic JSON document: sorted keys, 17-digit decimals."""
    text = json.dumps(_stringify(obj), sort_keys=True, indent=2)
    Path(path).write_text(text + "\n")


def load_report(path) -> dict:
    return json.loads(Path(path).read_text())


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in rows:
            writer.writerow([cell if isinstance(cell, str) else fmt(cell) for cell in row])


def read_complex_csv(path) -> np.ndarray:
    """Matrix import: n rows of 2n columns with alternating re, im."""
    rows = []
    with open(path, newline="") as handle:
        for record in csv.reader(handle):
            if not record:
                continue
            vals = [float(c) for c in record]
            if len(vals) % 2:
                raise ValueError("complex CSV rows need an even column count")
            rows.append([complex(vals[2 * k], vals[2 * k + 1]) for k in range(len(vals) // 2)])
    mat = np.array(rows, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError("complex CSV must describe a square matrix")
    return mat
