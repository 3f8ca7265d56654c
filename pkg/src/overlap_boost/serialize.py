"""Canonical JSON emission shared by every artifact writer.

Floats are emitted in shortest round-trip decimal form (Python's repr), which
is value-exact on reload and byte-stable across runs, so artifacts written
under the same seed compare equal byte-for-byte.  Keys are sorted for the same
reason.
"""

from __future__ import annotations

import hashlib
import json

import numpy as np


def jsonable(obj):
    """Recursively convert numpy scalars/arrays into plain Python values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def canonical_json(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, separators=(",", ": "), indent=1)


def write_artifact(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(canonical_json(obj))
        fh.write("\n")


def identity_hash(obj) -> str:
    """Short stable hash of an object's canonical JSON form."""
    digest = hashlib.sha256(canonical_json(obj).encode("utf-8")).hexdigest()
    return digest[:16]
