"""Mesh and report writers.

Numbers are written with 17 significant digits so a CSV round trip is
exact; JSON uses Python's shortest round-trip float repr.  Output is fully
determined by the inputs (fixed key order, no timestamps).
"""
from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

import numpy as np

from .frames import FrontGrid

MODELS = ("poincare", "raw")
FORMATS = ("obj", "csv")


def _g(x: float) -> str:
    return format(float(x), ".17g")


def vertex_coordinates(front: FrontGrid, model: str = "poincare") -> np.ndarray:
    """``(nu, nv, 3)`` vertex positions.

    ``poincare`` maps the hyperboloid point to ``(y1, y2, y3) / (1 + y0)`` in
    the unit ball; ``raw`` keeps the spatial hyperboloid components.
    """
    f = np.asarray(front.f, dtype=float)
    if model == "poincare":
        return f[..., 1:] / (1.0 + f[..., :1])
    if model == "raw":
        return f[..., 1:].copy()
    raise ValueError(f"unknown model {model!r}; expected one of {MODELS}")


def obj_text(front: FrontGrid, model: str = "poincare") -> str:
    dom = front.domain
    nu, nv = dom.nu, dom.nv
    X = vertex_coordinates(front, model).reshape(-1, 3)
    lines = [f"# flat front, {nu} x {nv} grid, lambda = {_g(front.lam)}, model = {model}"]
    if front.singular is not None:
        idx = np.flatnonzero(np.asarray(front.singular).ravel()) + 1
        lines.append(f"# singular vertex count: {idx.size}")
        for k in range(0, idx.size, 16):
            lines.append("# singular-vertices " + " ".join(str(int(i)) for i in idx[k:k + 16]))
    lines.extend(f"v {_g(x)} {_g(y)} {_g(z)}" for x, y, z in X)
    for i in range(nu - 1):
        for j in range(nv - 1):
            a = i * nv + j + 1
            lines.append(f"f {a} {a + nv} {a + nv + 1} {a + 1}")
    return "\n".join(lines) + "\n"


CSV_COLUMNS = ("u", "v", "f0", "f1", "f2", "f3", "t0", "t1", "t2", "t3",
               "E", "G", "kappa1", "kappa2", "singular")


def csv_text(front: FrontGrid) -> str:
    """One row per gridpoint (row-major in ``u``), header first."""
    U, V = front.domain.mesh()
    n = U.size
    cols = [U.ravel(), V.ravel()]
    cols += [front.f.reshape(n, 4)[:, k] for k in range(4)]
    cols += [front.t.reshape(n, 4)[:, k] for k in range(4)]
    for a in (front.E, front.G, front.kappa1, front.kappa2):
        cols.append(np.full(n, np.nan) if a is None else np.asarray(a).ravel())
    sing = (np.zeros(n, dtype=bool) if front.singular is None
            else np.asarray(front.singular).ravel())
    lines = [",".join(CSV_COLUMNS)]
    for r in range(n):
        vals = [_g(c[r]) for c in cols]
        vals.append("1" if sing[r] else "0")
        lines.append(",".join(vals))
    return "\n".join(lines) + "\n"


def export_mesh(front: FrontGrid, path: str | Path, fmt: str = "obj",
                model: str = "poincare") -> Path:
    """Write ``front`` as OBJ or CSV.  I/O errors propagate as ``OSError``."""
    path = Path(path)
    if fmt == "obj":
        text = obj_text(front, model)
    elif fmt == "csv":
        text = csv_text(front)
    else:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    path.write_text(text, encoding="utf-8")
    return path


def read_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Inverse of :func:`csv_text`: column name to array."""
    rows = Path(path).read_text(encoding="utf-8").splitlines()
    head = rows[0].split(",")
    data = np.array([[float(x) for x in r.split(",")] for r in rows[1:]])
    return {h: data[:, k] for k, h in enumerate(head)}


# ---------------------------------------------------------------- report

def clean(obj):
    """JSON-ready copy: numpy scalars to Python, non-finite floats to None."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def report_text(report: dict) -> str:
    return json.dumps(clean(report), indent=2, allow_nan=False) + "\n"


def write_report(report: dict, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(report_text(report), encoding="utf-8")
    return path


def report_schema() -> dict:
    """The JSON schema report.json conforms to."""
    text = resources.files("flatfront").joinpath("report.schema.json").read_text("utf-8")
    return json.loads(text)
