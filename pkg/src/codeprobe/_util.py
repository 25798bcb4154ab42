"""Shared helpers: stable hashing and error types."""

from __future__ import annotations

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


def fnv1a64(data: bytes | str) -> int:
    """64-bit FNV-1a hash, used for all stable identifiers."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    h = _FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * _FNV_PRIME) & _MASK64
    return h


def mix64(*parts: int) -> int:
    """Combine integers into one 64-bit key (for seeded sub-generators)."""
    h = _FNV_OFFSET
    for p in parts:
        for _ in range(8):
            h ^= p & 0xFF
            h = (h * _FNV_PRIME) & _MASK64
            p >>= 8
    return h


class CodeProbeError(Exception):
    """Data or validation error; the CLI maps this to exit code 2."""
