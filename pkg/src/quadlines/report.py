"""JSON encoding of every result record.

Records are frozen dataclasses. Each is written as an object with a
``"type"`` tag plus its fields, complex numbers as ``{"re": .., "im": ..}``
and tuples as lists. Decoding reverses this exactly, so
``from_dict(to_dict(x)) == x`` for every record type registered below.
Documents carry a top-level ``"schema": 1``.
"""

import dataclasses
import json
import math

import numpy as np

from .certify import RealnessCertificate
from .line import ComplexLine, MuCandidate
from .quadrics import QuadricParams
from .scan import BasePoint, Direction, Hit, IntersectingLine, IntersectionReport, SearchResult, SearchSpec
from .smoothness import BSolution, ChartVerdict, SmoothnessReport, Verdict
from .tolerances import Tolerances

SCHEMA = 1

RECORD_TYPES = {
    cls.__name__: cls
    for cls in (
        QuadricParams, Tolerances, Verdict, BSolution, ChartVerdict, SmoothnessReport,
        ComplexLine, MuCandidate, RealnessCertificate, SearchSpec, Hit, SearchResult,
        Direction, IntersectingLine, BasePoint, IntersectionReport,
    )
}


def to_dict(value):
    """Plain JSON-ready structure for a record, scalar or container."""
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        name = type(value).__name__
        if name not in RECORD_TYPES:
            raise TypeError(f"unregistered record type {name}")
        out = {"type": name}
        for f in dataclasses.fields(value):
            out[f.name] = to_dict(getattr(value, f.name))
        return out
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            raise ValueError(f"non-finite float {value!r} cannot be encoded")
        return value
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        return {"re": value.real, "im": value.imag}
    if isinstance(value, np.ndarray):
        return [to_dict(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [to_dict(v) for v in value]
    if isinstance(value, dict):
        return {str(k): to_dict(v) for k, v in value.items()}
    if value is None or isinstance(value, str):
        return value
    raise TypeError(f"cannot encode {type(value).__name__}")


def from_dict(data):
    """Inverse of :func:`to_dict`; lists come back as tuples."""
    if isinstance(data, dict):
        if set(data) == {"re", "im"}:
            return complex(data["re"], data["im"])
        if "type" in data and data["type"] in RECORD_TYPES:
            cls = RECORD_TYPES[data["type"]]
            kwargs = {k: from_dict(v) for k, v in data.items() if k != "type"}
            if cls is SearchSpec:
                kwargs["ranges"] = {k: tuple(v) for k, v in kwargs["ranges"].items()}
            return cls(**kwargs)
        return {k: from_dict(v) for k, v in data.items()}
    if isinstance(data, list):
        return tuple(from_dict(v) for v in data)
    return data


def document(kind, payload, **extra):
    """Top-level report: schema version, kind, payload and extra fields."""
    doc = {"schema": SCHEMA, "kind": kind}
    doc.update({k: to_dict(v) for k, v in extra.items()})
    doc["result"] = to_dict(payload)
    return doc


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def loads(text):
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA:
        raise ValueError(f"unsupported schema {doc.get('schema')!r}")
    return doc
