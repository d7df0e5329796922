"""JSON framework files.

Layout::

    {
      "label": "S_i",
      "dim": 2,
      "initial": [[1.0, 0.0], [0.0, 0.0]],
      "steps": [
        {"label": "t1",
         "projectors": [{"label": "P1_1", "generating_vector": [[1, 0], [0, 0]]},
                        {"label": "P1_2", "matrix": [[[0, 0], [0, 0]], [[0, 0], [1, 0]]]}]},
        ...
      ],
      "evolutions": [ <matrix>, ... ]        (optional, one per step)
    }

Every complex number is an ``[re, im]`` pair.  A projector entry carries
either a full ``matrix`` or a ``generating_vector`` (rank-1, any scale).
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import HistoriesError
from .hilbert import Decomposition, Projector, StateVector, projector_from_vector
from .histories import HistoryFramework


class FrameworkFileError(HistoriesError, ValueError):
    """Malformed or invalid framework file."""


def _complex(x, where: str) -> complex:
    if (
        not isinstance(x, (list, tuple))
        or len(x) != 2
        or not all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in x)
    ):
        raise FrameworkFileError(f"{where}: expected an [re, im] pair, got {x!r}")
    return complex(float(x[0]), float(x[1]))


def parse_vector(data, where: str = "vector") -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise FrameworkFileError(f"{where}: expected a non-empty list of [re, im] pairs")
    return np.array([_complex(x, f"{where}[{k}]") for k, x in enumerate(data)], dtype=complex)


def parse_matrix(data, where: str = "matrix") -> np.ndarray:
    if not isinstance(data, list) or not data:
        raise FrameworkFileError(f"{where}: expected a non-empty list of rows")
    rows = [parse_vector(r, f"{where}[{k}]") for k, r in enumerate(data)]
    if len({r.size for r in rows}) != 1:
        raise FrameworkFileError(f"{where}: rows have different lengths")
    return np.array(rows)


def vector_to_json(v) -> list:
    return [[float(c.real), float(c.imag)] for c in np.asarray(v, dtype=complex)]


def matrix_to_json(m) -> list:
    return [vector_to_json(row) for row in np.asarray(m, dtype=complex)]


def parse_projector(entry, dim: int, where: str) -> Projector:
    if not isinstance(entry, dict):
        raise FrameworkFileError(f"{where}: projector entry must be an object")
    label = str(entry.get("label", ""))
    has_m, has_v = "matrix" in entry, "generating_vector" in entry
    if has_m == has_v:
        raise FrameworkFileError(f"{where}: give exactly one of 'matrix' or 'generating_vector'")
    try:
        if has_v:
            v = parse_vector(entry["generating_vector"], f"{where}.generating_vector")
            if v.size != dim:
                raise FrameworkFileError(f"{where}: generating vector has dimension {v.size}, expected {dim}")
            return projector_from_vector(v, label)
        m = parse_matrix(entry["matrix"], f"{where}.matrix")
        if m.shape != (dim, dim):
            raise FrameworkFileError(f"{where}: matrix has shape {m.shape}, expected {(dim, dim)}")
        return Projector(m, label)
    except FrameworkFileError:
        raise
    except HistoriesError as exc:
        raise FrameworkFileError(f"{where}: {exc}") from exc


def parse_framework(data: dict) -> HistoryFramework:
    """Build and validate a framework from decoded JSON."""
    if not isinstance(data, dict):
        raise FrameworkFileError("framework file must contain a JSON object")
    for key in ("dim", "initial", "steps"):
        if key not in data:
            raise FrameworkFileError(f"missing required field {key!r}")
    dim = data["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise FrameworkFileError(f"'dim' must be a positive integer, got {dim!r}")
    initial = parse_vector(data["initial"], "initial")
    if initial.size != dim:
        raise FrameworkFileError(f"initial state has dimension {initial.size}, expected {dim}")
    steps_data = data["steps"]
    if not isinstance(steps_data, list) or not steps_data:
        raise FrameworkFileError("'steps' must be a non-empty list")
    steps = []
    for k, sd in enumerate(steps_data):
        if not isinstance(sd, dict) or "projectors" not in sd:
            raise FrameworkFileError(f"step {k}: expected an object with 'projectors'")
        name = str(sd.get("label", ""))
        where = f"step {k} ({name!r})" if name else f"step {k}"
        projs = sd["projectors"]
        if not isinstance(projs, list) or not projs:
            raise FrameworkFileError(f"{where}: 'projectors' must be a non-empty list")
        ps = [parse_projector(p, dim, f"{where} projector {j}") for j, p in enumerate(projs)]
        try:
            steps.append(Decomposition(tuple(ps), name))
        except HistoriesError as exc:
            raise FrameworkFileError(f"{where}: incomplete or overlapping decomposition: {exc}") from exc
    evolutions = None
    if data.get("evolutions") is not None:
        evs = data["evolutions"]
        if not isinstance(evs, list):
            raise FrameworkFileError("'evolutions' must be a list of matrices")
        evolutions = [parse_matrix(m, f"evolutions[{k}]") for k, m in enumerate(evs)]
    try:
        return HistoryFramework(
            StateVector(initial, "i"), tuple(steps), evolutions, str(data.get("label", ""))
        )
    except FrameworkFileError:
        raise
    except HistoriesError as exc:
        raise FrameworkFileError(str(exc)) from exc


def framework_to_dict(fw: HistoryFramework) -> dict:
    """Lossless encoding; projectors are always written as full matrices."""
    out = {
        "label": fw.label,
        "dim": fw.dim,
        "initial": vector_to_json(fw.initial.v),
        "steps": [
            {
                "label": dec.label,
                "projectors": [{"label": p.label, "matrix": matrix_to_json(p.matrix)} for p in dec],
            }
            for dec in fw.steps
        ],
    }
    if fw.evolutions is not None:
        out["evolutions"] = [matrix_to_json(u) for u in fw.evolutions]
    return out


def dumps_framework(fw: HistoryFramework) -> str:
    return json.dumps(framework_to_dict(fw), indent=1)


def loads_framework(text: str) -> HistoryFramework:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FrameworkFileError(f"invalid JSON: {exc}") from exc
    return parse_framework(data)


def load_framework(path) -> HistoryFramework:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FrameworkFileError(f"cannot read {path}: {exc}") from exc
    return loads_framework(text)


def save_framework(fw: HistoryFramework, path) -> None:
    Path(path).write_text(dumps_framework(fw) + "\n")
