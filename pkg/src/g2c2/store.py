"""Content-addressed on-disk store for the derived invariant tables.

The construction of the characteristic-0 invariants and the reduced
table takes a few seconds; the CLI therefore persists both, keyed by a
hash of the construction recipe.  A payload checksum is stored inside
the file, so a stale or corrupted cache is detected and silently
rebuilt, never silently used.  Writes go through a temporary file and
an atomic rename.
"""

import hashlib
import json
import os
import tempfile

from . import igusa0, char2inv

# Bump whenever the derivation or the serialization format changes.
RECIPE = {"format": 1, "tables": "igusa+k", "derivation": 3}


def cache_dir():
    return os.environ.get("G2C2_CACHE", os.path.join(".", ".g2c2-cache"))


def _recipe_hash():
    blob = json.dumps(RECIPE, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def _cache_path():
    return os.path.join(cache_dir(), "tables-%s.json" % _recipe_hash())


def _payload_checksum(payload):
    blob = json.dumps(payload, sort_keys=True).encode()
    return hashlib.sha256(blob).hexdigest()


def _serialize():
    jt = igusa0.build_igusa_invariants()
    kt = char2inv.build_k_table()
    notes = igusa0.build_notes()
    meta = {k: v for k, v in notes.items() if k != "expected_k8"}
    mode, combo = char2inv.j6_reduction_mode()
    meta["j6_reduction_mode"] = mode
    meta["j6_reduction_combination"] = list(combo) if combo else None
    payload = {
        "jtable": {n: inv.to_json_obj() for n, inv in jt.items()},
        "ktable": {n: rec.to_json_obj() for n, rec in kt.items()},
        "meta": meta,
    }
    return payload


def _deserialize(payload):
    jt = {n: igusa0.ScaledInvariant.from_json_obj(obj)
          for n, obj in payload["jtable"].items()}
    kt = {n: char2inv.InvariantRecord.from_json_obj(obj)
          for n, obj in payload["ktable"].items()}
    return jt, kt, payload["meta"]


def load_tables():
    """Load the cached tables, or None when absent/stale/corrupt."""
    path = _cache_path()
    try:
        with open(path) as f:
            wrapper = json.load(f)
        payload = wrapper["payload"]
        if wrapper.get("checksum") != _payload_checksum(payload):
            return None
        return _deserialize(payload)
    except (OSError, ValueError, KeyError):
        return None


def save_tables():
    payload = _serialize()
    wrapper = {"checksum": _payload_checksum(payload), "payload": payload}
    path = _cache_path()
    os.makedirs(os.path.dirname(path), exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as f:
            json.dump(wrapper, f, sort_keys=True)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return _deserialize(payload)


def get_tables(use_cache=True):
    """(jtable, ktable, meta), from the cache when valid."""
    if use_cache:
        loaded = load_tables()
        if loaded is not None:
            return loaded
    return save_tables()
