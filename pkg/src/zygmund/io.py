"""Plain-text serialization of signals, kernels, scale fields and reports.

CSV files carry metadata as ``# key=value`` comment lines ahead of the
header row; numbers are written with 17 significant digits so that every
float survives a round trip.  JSON uses Python's shortest round-trip float
representation, which is exact as well.
"""
from __future__ import annotations

import json
import os
import tempfile
from typing import Any, Dict, Iterable, List, Tuple

import numpy as np

from .kernels import Kernel
from .signals import ConstantLeftRight, GroundTruth, Periodic, PolynomialExtension, Signal, Zero
from .transform import ScaleField

__all__ = [
    "FORMATS",
    "fmt",
    "atomic_write",
    "extension_to_dict",
    "extension_from_dict",
    "signal_to_text",
    "signal_from_text",
    "write_signal",
    "read_signal",
    "kernel_to_text",
    "kernel_from_text",
    "scalefield_to_text",
    "groundtruth_to_dict",
    "to_json",
]

FORMATS = ("csv", "json", "ndjson")


def fmt(v: float) -> str:
    return "%.17g" % v


def atomic_write(path: str, text: str) -> None:
    """Write ``text`` to ``path`` through a temporary file and a rename."""
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _plain(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    return obj


def to_json(obj: Any) -> str:
    """Deterministic JSON (sorted keys, non-finite floats as strings)."""
    return json.dumps(_plain(obj), sort_keys=True, indent=1) + "\n"


# extensions


def extension_to_dict(ext) -> Dict[str, Any]:
    if isinstance(ext, ConstantLeftRight):
        return {"type": "constant", "left": ext.left, "right": ext.right}
    if isinstance(ext, Periodic):
        return {"type": "periodic"}
    if isinstance(ext, PolynomialExtension):
        return {"type": "polynomial", "coeffs": list(ext.coeffs)}
    if isinstance(ext, Zero):
        return {"type": "zero"}
    raise TypeError(f"unknown extension {ext!r}")


def extension_from_dict(d: Dict[str, Any]):
    kind = d["type"]
    if kind == "constant":
        return ConstantLeftRight(float(d["left"]), float(d["right"]))
    if kind == "periodic":
        return Periodic()
    if kind == "polynomial":
        return PolynomialExtension(tuple(float(c) for c in d["coeffs"]))
    if kind == "zero":
        return Zero()
    raise ValueError(f"unknown extension type {kind!r}")


# comment-header CSV


def _header(meta: Dict[str, Any]) -> List[str]:
    return [f"# {k}={json.dumps(_plain(v), sort_keys=True)}" for k, v in meta.items()]


def _parse_csv(text: str) -> Tuple[Dict[str, Any], List[str], np.ndarray]:
    meta: Dict[str, Any] = {}
    cols: List[str] = []
    rows: List[List[float]] = []
    for line in text.splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            k, _, v = line[1:].strip().partition("=")
            meta[k.strip()] = json.loads(v)
        elif not cols:
            cols = [c.strip() for c in line.split(",")]
        else:
            rows.append([float(c) for c in line.split(",")])
    return meta, cols, np.array(rows, dtype=float).reshape(-1, len(cols))


def _csv(meta: Dict[str, Any], cols: Iterable[str], rows: np.ndarray) -> str:
    lines = _header(meta) + [",".join(cols)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


# signals


def _signal_meta(s: Signal) -> Dict[str, Any]:
    return {"x0": s.x0, "dx": s.dx, "n": s.n, "extension": extension_to_dict(s.extension), "info": s.info}


def signal_to_text(s: Signal, form: str = "csv") -> str:
    """Serialize a signal; ``form`` is ``csv``, ``json`` or ``ndjson``."""
    meta = _signal_meta(s)
    if form == "csv":
        return _csv(meta, ["x", "value"], np.column_stack([s.x, s.samples]))
    if form == "json":
        return to_json({**meta, "samples": s.samples})
    if form == "ndjson":
        lines = [json.dumps(_plain(meta), sort_keys=True)]
        lines += [json.dumps({"x": float(x), "value": float(v)}) for x, v in zip(s.x, s.samples)]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {form!r}")


def _signal_from_meta(meta, samples) -> Signal:
    return Signal(
        np.asarray(samples, dtype=float),
        float(meta["x0"]),
        float(meta["dx"]),
        extension_from_dict(meta.get("extension", {"type": "zero"})),
        dict(meta.get("info", {})),
    )


def signal_from_text(text: str, form: str = "csv") -> Signal:
    if form == "csv":
        meta, cols, data = _parse_csv(text)
        if "value" not in cols:
            raise ValueError("signal CSV needs a 'value' column")
        vals = data[:, cols.index("value")]
        if "x0" not in meta:
            x = data[:, cols.index("x")]
            meta["x0"], meta["dx"] = float(x[0]), float(x[1] - x[0])
        return _signal_from_meta(meta, vals)
    if form == "json":
        d = json.loads(text)
        return _signal_from_meta(d, d["samples"])
    if form == "ndjson":
        lines = [json.loads(l) for l in text.splitlines() if l.strip()]
        return _signal_from_meta(lines[0], [r["value"] for r in lines[1:]])
    raise ValueError(f"unknown format {form!r}")


def _form_from_path(path: str) -> str:
    ext = os.path.splitext(path)[1].lstrip(".").lower()
    if ext not in FORMATS:
        raise ValueError(f"cannot infer format from {path!r}; use one of {FORMATS}")
    return ext


def write_signal(s: Signal, path: str, form: str = None) -> None:
    atomic_write(path, signal_to_text(s, form or _form_from_path(path)))


def read_signal(path: str, form: str = None) -> Signal:
    with open(path) as fh:
        return signal_from_text(fh.read(), form or _form_from_path(path))


def groundtruth_to_dict(gt: GroundTruth) -> Dict[str, Any]:
    return {"exponent": gt.exponent, "description": gt.description}


# kernels


def _kernel_meta(k: Kernel) -> Dict[str, Any]:
    return {
        "kind": k.kind,
        "moment_order": k.moment_order,
        "x0": k.x0,
        "dx": k.dx,
        "support_radius": k.support_radius,
        "tail_bound": k.tail_bound,
        "feature_length": k.feature_length,
        "meta": k.meta,
    }


def kernel_to_text(k: Kernel, form: str = "csv") -> str:
    meta = _kernel_meta(k)
    if form == "csv":
        return _csv(meta, ["x", "value"], np.column_stack([k.x, k.samples]))
    if form == "json":
        return to_json({**meta, "samples": k.samples})
    if form == "ndjson":
        lines = [json.dumps(_plain(meta), sort_keys=True)]
        lines += [json.dumps({"x": float(x), "value": float(v)}) for x, v in zip(k.x, k.samples)]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {form!r}")


def kernel_from_text(text: str, form: str = "csv") -> Kernel:
    if form == "csv":
        meta, cols, data = _parse_csv(text)
        samples = data[:, cols.index("value")]
    elif form == "json":
        meta = json.loads(text)
        samples = meta.pop("samples")
    elif form == "ndjson":
        lines = [json.loads(l) for l in text.splitlines() if l.strip()]
        meta, samples = lines[0], [r["value"] for r in lines[1:]]
    else:
        raise ValueError(f"unknown format {form!r}")
    return Kernel(
        np.asarray(samples, dtype=float),
        float(meta["x0"]),
        float(meta["dx"]),
        meta["kind"],
        int(meta["moment_order"]),
        meta.get("support_radius"),
        float(meta.get("tail_bound", 0.0)),
        meta.get("feature_length"),
        dict(meta.get("meta", {})),
    )


# scale fields


def scalefield_to_text(fld: ScaleField, form: str = "ndjson") -> str:
    """``ndjson``: one record per scale with its sup-norm and row of values.

    ``csv``: a position-by-scale matrix whose header names each scale.
    """
    meta = {
        "method": fld.method,
        "interior_margin": fld.interior_margin,
        "scale_floor": fld.scale_floor,
        "reference_norm": fld.reference_norm,
    }
    if form == "ndjson":
        lines = [json.dumps(_plain({**meta, "positions": fld.positions}), sort_keys=True)]
        for j, r in enumerate(fld.scales):
            rec = {"r": float(r), "S": float(fld.sup_per_scale[j]), "row": _plain(fld.values[:, j])}
            lines.append(json.dumps(rec, sort_keys=True))
        return "\n".join(lines) + "\n"
    if form == "csv":
        cols = ["x"] + ["r=" + fmt(r) for r in fld.scales]
        return _csv(meta, cols, np.column_stack([fld.positions, fld.values]))
    if form == "json":
        return to_json(
            {
                **meta,
                "positions": fld.positions,
                "scales": fld.scales,
                "sup_per_scale": fld.sup_per_scale,
                "values": fld.values,
            }
        )
    raise ValueError(f"unknown format {form!r}")


def table_to_csv(cols: List[str], rows, meta: Dict[str, Any] = None) -> str:
    """CSV for a numeric table, with optional comment metadata."""
    return _csv(meta or {}, cols, np.asarray(rows, dtype=float).reshape(-1, len(cols)))
