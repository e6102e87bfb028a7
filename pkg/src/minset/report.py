"""File formats: curve files, JSON reports and SVG rendering."""

from __future__ import annotations

import dataclasses
import datetime as _dt
import enum
import hashlib
import json
import math
from importlib import resources
from pathlib import Path
from typing import Any, Optional

import numpy as np

from . import __version__
from .koch import SampledCurve

SVG_MARGIN = 0.05


class CurveFileError(ValueError):
    pass


# ---------------------------------------------------------------- JSON text


def _float(x: float) -> str:
    if math.isfinite(x):
        return format(x, ".17g")
    return json.dumps("inf" if x > 0 else "-inf" if x < 0 else "nan")


def dumps(obj: Any, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits.

    Non-finite floats become the strings "inf", "-inf", "nan".
    """
    parts: list[str] = []

    def emit(o, depth):
        pad = "\n" + " " * (indent * (depth + 1))
        end = "\n" + " " * (indent * depth)
        if isinstance(o, dict):
            if not o:
                parts.append("{}")
                return
            parts.append("{")
            for n, (k, v) in enumerate(o.items()):
                parts.append(("," if n else "") + pad + json.dumps(str(k)) + ": ")
                emit(v, depth + 1)
            parts.append(end + "}")
        elif isinstance(o, (list, tuple)):
            if not o:
                parts.append("[]")
                return
            if all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in o) and len(o) <= 2:
                parts.append("[" + ", ".join(_scalar(v) for v in o) + "]")
                return
            parts.append("[")
            for n, v in enumerate(o):
                parts.append(("," if n else "") + pad)
                emit(v, depth + 1)
            parts.append(end + "]")
        else:
            parts.append(_scalar(o))

    emit(to_jsonable(obj), 0)
    return "".join(parts) + "\n"


def _scalar(o) -> str:
    if o is None or isinstance(o, (bool, str)):
        return json.dumps(o)
    if isinstance(o, int):
        return str(o)
    if isinstance(o, float):
        return _float(o)
    raise TypeError(f"cannot serialize {type(o).__name__}")


def to_jsonable(o: Any) -> Any:
    """Recursively convert dataclasses, numpy values and complex points to JSON types."""
    if isinstance(o, enum.Enum):
        return o.value
    if dataclasses.is_dataclass(o) and not isinstance(o, type):
        return {f.name: to_jsonable(getattr(o, f.name)) for f in dataclasses.fields(o)}
    if isinstance(o, dict):
        return {str(k): to_jsonable(v) for k, v in o.items()}
    if isinstance(o, np.ndarray):
        return [to_jsonable(v) for v in o.tolist()]
    if isinstance(o, (list, tuple)):
        return [to_jsonable(v) for v in o]
    if isinstance(o, (complex, np.complexfloating)):
        return [float(o.real), float(o.imag)]
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    return o


# ---------------------------------------------------------------- curve files


def curve_to_dict(curve: SampledCurve, metadata: Optional[dict] = None) -> dict:
    return {
        "samples": [{"t": float(t), "z": [float(z.real), float(z.imag)]} for t, z in zip(curve.t, curve.z)],
        "closed": bool(curve.closed),
        "metadata": {str(k): str(v) for k, v in (metadata or {}).items()},
    }


def curve_from_dict(doc: dict) -> tuple[SampledCurve, dict]:
    try:
        samples = doc["samples"]
        t = [float(s["t"]) for s in samples]
        z = [complex(float(s["z"][0]), float(s["z"][1])) for s in samples]
        closed = doc.get("closed", False)
        if not isinstance(closed, bool):
            raise CurveFileError("'closed' must be a boolean")
        meta = doc.get("metadata", {}) or {}
        curve = SampledCurve(t, z, closed)
    except CurveFileError:
        raise
    except (KeyError, TypeError, IndexError, ValueError) as exc:
        raise CurveFileError(f"invalid curve file: {exc}") from exc
    return curve, {str(k): str(v) for k, v in meta.items()}


def write_curve(curve: SampledCurve, path, metadata: Optional[dict] = None) -> str:
    text = dumps(curve_to_dict(curve, metadata))
    Path(path).write_text(text, encoding="utf-8")
    return text


def read_curve(path) -> tuple[SampledCurve, dict]:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CurveFileError(f"cannot read curve file {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise CurveFileError("curve file must hold a JSON object")
    return curve_from_dict(doc)


# -------------------------------------------------------------------- reports


def digest(args: dict, extra: bytes = b"") -> str:
    h = hashlib.sha256(dumps(args).encode("utf-8"))
    h.update(extra)
    return "sha256:" + h.hexdigest()


def new_report(command: str, args: dict, seed: Optional[int], input_bytes: bytes = b"") -> dict:
    return {
        "tool": "minset",
        "version": __version__,
        "command": command,
        "args": to_jsonable(args),
        "input_digest": digest(args, input_bytes),
        "seed": seed,
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
    }


def strip_timestamp(doc: dict) -> dict:
    return {k: v for k, v in doc.items() if k != "timestamp"}


def load_schema(name: str = "report") -> dict:
    text = resources.files("minset").joinpath("schemas", f"{name}.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


# ------------------------------------------------------------------------ SVG


def to_svg(curve: SampledCurve, stroke_width: float) -> str:
    """SVG 1.1 document with the curve as a single unfilled polyline (polygon if closed).

    The y axis is flipped so the picture has mathematical orientation.
    """
    x = curve.z.real
    y = -curve.z.imag
    x0, x1, y0, y1 = x.min(), x.max(), y.min(), y.max()
    pad = SVG_MARGIN * max(x1 - x0, y1 - y0, 1e-12)
    vb = (x0 - pad, y0 - pad, (x1 - x0) + 2 * pad, (y1 - y0) + 2 * pad)
    pts = " ".join(f"{a:.17g},{b:.17g}" for a, b in zip(x, y))
    tag = "polygon" if curve.closed else "polyline"
    return (
        '<?xml version="1.0" encoding="UTF-8"?>\n'
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'viewBox="{" ".join(f"{v:.17g}" for v in vb)}">\n'
        f'  <{tag} points="{pts}" fill="none" stroke="black" stroke-width="{stroke_width:.17g}"/>\n'
        "</svg>\n"
    )
