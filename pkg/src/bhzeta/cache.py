"""On-disk cache for expensive per-prime tables.

Binary layout: magic, version, three u64 header fields (p, precision, k_max),
then length-prefixed little-endian integer arrays, then a sha256 trailer over
everything before it.  Corrupt or mismatched files are ignored and rebuilt.
"""

from __future__ import annotations

import hashlib
import os
import struct
from pathlib import Path

MAGIC = b"BHZC"
VERSION = 1

ENV_VAR = "BHZETA_CACHE_DIR"


def cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "bhzeta"


def _encode_int(x: int) -> bytes:
    if x == 0:
        return struct.pack("<I", 0)
    raw = x.to_bytes((x.bit_length() + 7) // 8, "little")
    return struct.pack("<I", len(raw)) + raw


def _encode_array(values) -> bytes:
    parts = [struct.pack("<Q", len(values))]
    parts.extend(_encode_int(v) for v in values)
    return b"".join(parts)


class _Reader:
    def __init__(self, data: bytes, offset: int):
        self.data = data
        self.offset = offset

    def u64(self) -> int:
        (v,) = struct.unpack_from("<Q", self.data, self.offset)
        self.offset += 8
        return v

    def int_(self) -> int:
        (ln,) = struct.unpack_from("<I", self.data, self.offset)
        self.offset += 4
        raw = self.data[self.offset : self.offset + ln]
        self.offset += ln
        return int.from_bytes(raw, "little")

    def array(self) -> list[int]:
        count = self.u64()
        return [self.int_() for _ in range(count)]


def save(name: str, header: tuple[int, int, int], arrays) -> Path:
    """Write arrays under the given header key; atomic replace."""
    d = cache_dir()
    d.mkdir(parents=True, exist_ok=True)
    payload = MAGIC + struct.pack("<H", VERSION) + struct.pack("<QQQ", *header)
    payload += struct.pack("<I", len(arrays))
    for arr in arrays:
        payload += _encode_array(arr)
    digest = hashlib.sha256(payload).digest()
    path = d / name
    tmp = path.with_suffix(".tmp")
    tmp.write_bytes(payload + digest)
    tmp.replace(path)
    return path


def load(name: str, expected_header: tuple[int, int, int] | None = None):
    """Return (header, arrays) or None on miss/corruption/mismatch."""
    path = cache_dir() / name
    if not path.exists():
        return None
    data = path.read_bytes()
    if len(data) < 4 + 2 + 24 + 32:
        return None
    payload, digest = data[:-32], data[-32:]
    if hashlib.sha256(payload).digest() != digest:
        return None
    if payload[:4] != MAGIC:
        return None
    (version,) = struct.unpack_from("<H", payload, 4)
    if version != VERSION:
        return None
    header = struct.unpack_from("<QQQ", payload, 6)
    if expected_header is not None and tuple(header) != tuple(expected_header):
        return None
    reader = _Reader(payload, 6 + 24)
    (narrays,) = struct.unpack_from("<I", payload, reader.offset)
    reader.offset += 4
    try:
        arrays = [reader.array() for _ in range(narrays)]
    except (struct.error, IndexError):
        return None
    return tuple(header), arrays
