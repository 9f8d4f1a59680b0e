"""Token ingestion: text lines and fixed-width binary records → 64-bit tokens.

Formats
-------
text    newline-delimited UTF-8.  The trailing ``\\n`` (and a ``\\r`` before it)
        is removed, blank lines are skipped, and each line's bytes are hashed
        with MurmurHash3 x64-128, seed 0, keeping the first (low) unsigned 64-bit
        half: ``mmh3.hash64(line, 0, signed=False)[0]``.  Two distinct lines
        share a token with probability about n²/2⁶⁵ — negligible at desk scale.
binary  consecutive 8-byte little-endian unsigned integers, used as tokens
        as-is.  A trailing partial record is an error.

Estimates depend only on which tokens are equal, so a text stream and a
binary stream carrying any injective encoding of the same lines agree.
"""

from __future__ import annotations

import sys
from contextlib import contextmanager
from typing import BinaryIO, Iterator, Optional

import mmh3
import numpy as np

from .core import UsageError

#: Records read per chunk from binary input.
CHUNK_RECORDS = 1 << 16

_RECORD = np.dtype("<u8")


def hash_token(text: str | bytes) -> int:
    """Pinned 64-bit token of one text symbol."""
    return mmh3.hash64(text, 0, signed=False)[0]


def iter_text_tokens(stream: BinaryIO) -> Iterator[int]:
    for line in stream:
        line = line.rstrip(b"\n")
        if line.endswith(b"\r"):
            line = line[:-1]
        if line:
            yield hash_token(line)


def iter_binary_tokens(stream: BinaryIO, chunk_records: int = CHUNK_RECORDS) -> Iterator[int]:
    width = _RECORD.itemsize
    while True:
        buf = stream.read(chunk_records * width)
        if not buf:
            return
        while len(buf) % width:
            more = stream.read(width - len(buf) % width)
            if not more:
                raise UsageError(
                    f"binary input ends with a partial record ({len(buf) % width} bytes)"
                )
            buf += more
        yield from np.frombuffer(buf, dtype=_RECORD).tolist()


def iter_tokens(stream: BinaryIO, binary: bool = False) -> Iterator[int]:
    """Lazy token iterator over *stream* in the selected format."""
    return iter_binary_tokens(stream) if binary else iter_text_tokens(stream)


def read_token_array(stream: BinaryIO, binary: bool = False) -> np.ndarray:
    """Whole stream as a ``uint64`` array (8 bytes per token)."""
    if binary:
        data = stream.read()
        if len(data) % _RECORD.itemsize:
            raise UsageError(
                f"binary input ends with a partial record "
                f"({len(data) % _RECORD.itemsize} bytes)"
            )
        return np.frombuffer(data, dtype=_RECORD).astype(np.uint64)
    return np.fromiter(iter_text_tokens(stream), dtype=np.uint64)


def encode_binary(tokens) -> bytes:
    """Fixed-width little-endian records for *tokens*."""
    return np.asarray(tokens, dtype=np.uint64).astype(_RECORD).tobytes()


@contextmanager
def open_input(path: Optional[str]) -> Iterator[BinaryIO]:
    """Binary handle for *path*; ``None`` or ``"-"`` is standard input."""
    if path is None or path == "-":
        yield sys.stdin.buffer
        return
    try:
        fh = open(path, "rb")
    except OSError as exc:
        raise UsageError(f"cannot open input {path!r}: {exc.strerror}") from exc
    with fh:
        yield fh
