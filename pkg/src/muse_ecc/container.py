"""Binary container for files encoded with a MUSE code.

Layout, all integers little-endian::

    magic      8 bytes  b"MUSEECC1"
    spec hash 32 bytes  sha256 of the code spec text
    count      8 bytes  number of codewords
    codewords  count * ceil(n/8) bytes
    length     8 bytes  original payload length
"""

from __future__ import annotations

import struct

from .code import CodeError, CodeSpec, spec_fingerprint

MAGIC = b"MUSEECC1"
_HEADER = struct.Struct("<8s32sQ")
_FOOTER = struct.Struct("<Q")


class ContainerError(CodeError):
    pass


def word_bytes(spec: CodeSpec) -> int:
    return (spec.n + 7) // 8


def payload_bytes(spec: CodeSpec) -> int:
    return spec.k // 8


def frame(data: bytes, spec: CodeSpec) -> list[int]:
    """Split ``data`` into payload integers, zero-padding the last block."""
    step = payload_bytes(spec)
    if step == 0:
        raise ContainerError("code carries less than one byte per codeword")
    return [int.from_bytes(data[i:i + step].ljust(step, b"\0"), "little")
            for i in range(0, len(data), step)]


def pack(codewords: list[int], spec: CodeSpec, length: int) -> bytes:
    size = word_bytes(spec)
    body = b"".join(int(c).to_bytes(size, "little") for c in codewords)
    return _HEADER.pack(MAGIC, spec_fingerprint(spec), len(codewords)) + body + _FOOTER.pack(length)


def unpack(blob: bytes, spec: CodeSpec) -> tuple[list[int], int]:
    """Codewords and original length.

    Raises:
        ContainerError: bad magic, truncated data or a different code.
    """
    if len(blob) < _HEADER.size + _FOOTER.size:
        raise ContainerError("container is truncated")
    magic, fingerprint, count = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise ContainerError("not a MUSE container")
    if fingerprint != spec_fingerprint(spec):
        raise ContainerError("container was written with a different code")
    size = word_bytes(spec)
    if len(blob) != _HEADER.size + count * size + _FOOTER.size:
        raise ContainerError("container length does not match its codeword count")
    body = blob[_HEADER.size:_HEADER.size + count * size]
    words = [int.from_bytes(body[i:i + size], "little") for i in range(0, len(body), size)]
    (length,) = _FOOTER.unpack_from(blob, len(blob) - _FOOTER.size)
    if length > count * payload_bytes(spec) or length <= (count - 1) * payload_bytes(spec) and count:
        raise ContainerError("original length is inconsistent with the codeword count")
    return words, length


def codeword_offset(index: int, spec: CodeSpec) -> int:
    """Byte offset of codeword ``index`` inside the container."""
    return _HEADER.size + index * word_bytes(spec)


def is_container(blob: bytes) -> bool:
    return blob[:len(MAGIC)] == MAGIC
