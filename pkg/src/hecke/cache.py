"""Content-addressed on-disk cache of continued-fraction expansions.

Entries live at ``<root>/<first two hex digits>/<sha256>.json`` where the
hash covers ``q`` and the canonical element serialization. Only finished
expansions (finite or preperiodic) are stored; a stored result is returned
only when the caller's step budget would have reached it, so hits and fresh
runs agree exactly.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import warnings

from .field import FieldElement
from .rosen import DEFAULT_MAX_STEPS, CFExpansion, Status

ENTRY_FORMAT = 1


def expansion_to_json(e: CFExpansion):
    return {"digits": list(e.digits), "status": e.status.value, "preperiod": e.preperiod, "period": list(e.period)}


def expansion_from_json(data) -> CFExpansion:
    return CFExpansion(tuple(data["digits"]), Status(data["status"]), data["preperiod"], tuple(data["period"]))


def cache_key(x: FieldElement) -> str:
    payload = json.dumps({"q": x.ctx.q, "x": x.to_json()}, separators=(",", ":"))
    return hashlib.sha256(payload.encode()).hexdigest()


def _steps_needed(e: CFExpansion):
    # a repeat is noticed one loop iteration after the last digit
    return len(e.digits) + (e.status is Status.PREPERIODIC)


class ExpansionCache:
    def __init__(self, root):
        self.root = root
        os.makedirs(root, exist_ok=True)
        self.hits = 0
        self.misses = 0

    def _path(self, key):
        return os.path.join(self.root, key[:2], key + ".json")

    def get(self, x: FieldElement, max_steps=None):
        if max_steps is None:
            max_steps = DEFAULT_MAX_STEPS
        key = cache_key(x)
        path = self._path(key)
        if not os.path.exists(path):
            self.misses += 1
            return None
        try:
            with open(path) as fh:
                data = json.load(fh)
            if data.get("format") != ENTRY_FORMAT or data.get("key") != key:
                raise ValueError("key mismatch")
            e = expansion_from_json(data["expansion"])
        except (OSError, ValueError, KeyError, TypeError) as exc:
            warnings.warn(f"ignoring corrupt cache entry {path}: {exc}")
            self.misses += 1
            return None
        if _steps_needed(e) > max_steps:
            self.misses += 1
            return None
        self.hits += 1
        return e

    def put(self, x: FieldElement, e: CFExpansion):
        if e.status is Status.UNDETERMINED:
            return
        key = cache_key(x)
        path = self._path(key)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
        with os.fdopen(fd, "w") as fh:
            json.dump({"format": ENTRY_FORMAT, "key": key, "expansion": expansion_to_json(e)}, fh)
        os.replace(tmp, path)
