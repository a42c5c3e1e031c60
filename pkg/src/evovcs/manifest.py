"""JSON manifests that persist dealer state between sessions.

Layout (version 1)::

    {
      "version": 1,
      "scheme": "kgrouped-evolving" | "better2" | "better3",
      "k": 3, "n": 4, "next_t": 5, "seed": 42, "dims": [h, w],
      "shadows": [<base64 P4>, ...],        # base shadows used as copy source
      "secret": <base64 P4>,                 # better2 only, stored in the clear
      "q_table": <base64>,                   # used-index masks / table P
      "issued": {"1": "<crc32 hex>", ...},   # optional, share file checksums
      "checksum": "<crc32 hex>"
    }

``q_table`` for the grouped schemes is a little-endian raster of
``ceil(k / 8)``-byte masks; for better2 it is table P as a P4 payload.
The checksum covers the scalar fields and every payload section.
"""

from __future__ import annotations

import base64
import json
import zlib

import numpy as np

from .better import Better2State, Better3State
from .evolving import MAX_K, EvolvingDealerState
from .exceptions import ManifestError, PBMParseError, StateError
from .image import BinaryImage, load_pbm, save_pbm

__all__ = ["MANIFEST_VERSION", "dealer_save", "dealer_load", "scheme_of"]

MANIFEST_VERSION = 1

SCHEMES = {
    EvolvingDealerState: "kgrouped-evolving",
    Better2State: "better2",
    Better3State: "better3",
}


def scheme_of(state):
    try:
        return SCHEMES[type(state)]
    except KeyError:
        raise StateError(f"not a dealer state: {type(state).__name__}") from None


def _b64(data):
    return base64.b64encode(data).decode("ascii")


def _unb64(text, what):
    try:
        return base64.b64decode(text.encode("ascii"), validate=True)
    except (ValueError, AttributeError) as exc:
        raise ManifestError(f"{what} is not valid base64") from exc


def _mask_bytes(k):
    return (k + 7) // 8


def _pack_masks(q, k):
    width = _mask_bytes(k)
    raw = q.astype("<u8").reshape(-1).view(np.uint8).reshape(-1, 8)
    return raw[:, :width].tobytes()


def _unpack_masks(data, k, shape):
    width = _mask_bytes(k)
    count = shape[0] * shape[1]
    if len(data) != width * count:
        raise ManifestError(f"q_table holds {len(data)} bytes, expected {width * count}")
    raw = np.zeros((count, 8), dtype=np.uint8)
    raw[:, :width] = np.frombuffer(data, dtype=np.uint8).reshape(count, width)
    return raw.reshape(-1).view("<u8").astype(np.uint64).reshape(shape)


def _checksum(doc, sections):
    header = json.dumps(
        [doc["version"], doc["scheme"], doc["k"], doc["n"], doc["next_t"], doc["seed"], doc["dims"]],
        separators=(",", ":"),
    ).encode("ascii")
    crc = zlib.crc32(header)
    for blob in sections:
        crc = zlib.crc32(blob, crc)
    return f"{crc & 0xFFFFFFFF:08x}"


def dealer_save(state, issued=None):
    """Serialise a dealer state to manifest bytes (UTF-8 JSON)."""
    scheme = scheme_of(state)
    state.validate()
    h, w = state.shape
    shadows = []
    secret = None
    if scheme == "kgrouped-evolving":
        k, n = state.k, state.n
        shadows = [save_pbm(img, "P4") for img in state.base]
        q = _pack_masks(state.q_table, k)
    elif scheme == "better3":
        k, n = 3, 4
        shadows = [save_pbm(img, "P4") for img in state.base]
        q = _pack_masks(state.p_table, 4)
    else:
        k, n = 2, 1
        secret = save_pbm(state.secret, "P4")
        q = save_pbm(BinaryImage(state.p_table), "P4")
    doc = {
        "version": MANIFEST_VERSION,
        "scheme": scheme,
        "k": k,
        "n": n,
        "next_t": state.next_t,
        "seed": state.seed,
        "dims": [h, w],
    }
    sections = list(shadows) + ([secret] if secret is not None else []) + [q]
    doc["shadows"] = [_b64(s) for s in shadows]
    if secret is not None:
        doc["secret"] = _b64(secret)
    doc["q_table"] = _b64(q)
    if issued:
        doc["issued"] = {str(i): c for i, c in sorted(issued.items(), key=lambda kv: int(kv[0]))}
    doc["checksum"] = _checksum(doc, sections)
    return (json.dumps(doc, indent=1) + "\n").encode("utf-8")


def _require(doc, key, kind):
    if key not in doc:
        raise ManifestError(f"manifest is missing field {key!r}")
    value = doc[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ManifestError(f"field {key!r} must be an integer")
    if kind is not int and not isinstance(value, kind):
        raise ManifestError(f"field {key!r} has the wrong type")
    return value


def _image(blob, shape, what):
    try:
        img = load_pbm(blob)
    except PBMParseError as exc:
        raise ManifestError(f"{what}: {exc}") from exc
    if img.shape != shape:
        raise ManifestError(f"{what} has shape {img.shape}, expected {shape}")
    return img


def dealer_load(data):
    """Parse manifest bytes back into a dealer state. Returns ``(state, issued)``."""
    try:
        doc = json.loads(data)
    except (ValueError, UnicodeDecodeError) as exc:
        raise ManifestError(f"manifest is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ManifestError("manifest must be a JSON object")
    version = _require(doc, "version", int)
    if version != MANIFEST_VERSION:
        raise ManifestError(f"unsupported manifest version {version} (expected {MANIFEST_VERSION})")
    scheme = _require(doc, "scheme", str)
    if scheme not in SCHEMES.values():
        raise ManifestError(f"unknown scheme {scheme!r}")
    k = _require(doc, "k", int)
    n = _require(doc, "n", int)
    next_t = _require(doc, "next_t", int)
    seed = _require(doc, "seed", int)
    dims = _require(doc, "dims", list)
    if len(dims) != 2 or not all(isinstance(v, int) and v >= 1 for v in dims):
        raise ManifestError("dims must be two positive integers")
    if not 0 <= seed < 2**64:
        raise ManifestError("seed must be a 64-bit unsigned integer")
    shape = (dims[0], dims[1])
    if scheme == "kgrouped-evolving" and not 2 <= k <= MAX_K:
        raise ManifestError(f"k must be in [2, {MAX_K}], got {k}")
    if scheme == "better2" and k != 2:
        raise ManifestError("better2 manifests must have k = 2")
    if scheme == "better3" and k != 3:
        raise ManifestError("better3 manifests must have k = 3")

    shadows = [_unb64(s, "shadow") for s in _require(doc, "shadows", list)]
    secret = _unb64(_require(doc, "secret", str), "secret") if scheme == "better2" else None
    q = _unb64(_require(doc, "q_table", str), "q_table")
    sections = shadows + ([secret] if secret is not None else []) + [q]
    if _require(doc, "checksum", str) != _checksum(doc, sections):
        raise ManifestError("checksum mismatch: manifest was modified or corrupted")

    try:
        if scheme == "kgrouped-evolving":
            state = EvolvingDealerState(
                k=k,
                n=n,
                next_t=next_t,
                base=tuple(_image(s, shape, f"shadow {i + 1}") for i, s in enumerate(shadows)),
                q_table=_unpack_masks(q, k, shape),
                seed=seed,
                shape=shape,
            )
        elif scheme == "better3":
            state = Better3State(
                base=tuple(_image(s, shape, f"shadow {i + 1}") for i, s in enumerate(shadows)),
                p_table=_unpack_masks(q, 4, shape),
                next_t=next_t,
                seed=seed,
            )
        else:
            state = Better2State(
                secret=_image(secret, shape, "secret"),
                p_table=_image(q, shape, "table P").pixels,
                next_t=next_t,
                seed=seed,
            )
        state.validate()
    except StateError as exc:
        if isinstance(exc, ManifestError):
            raise
        raise ManifestError(f"manifest describes an invalid state: {exc}") from exc
    issued = doc.get("issued") or {}
    if not isinstance(issued, dict):
        raise ManifestError("issued must be an object")
    return state, {int(i): str(c) for i, c in issued.items()}
