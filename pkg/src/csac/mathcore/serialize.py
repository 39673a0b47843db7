"""Checkpoint codec: explicit little-endian layout, bit-exact round-trips.

Every blob starts with the magic ``CSAC`` and a u32 format version. An Mlp
blob carries its layer count and widths in the header, then each tensor as
(rank u32, dims u32..., raw f64 payload). Adam state and whole-agent
checkpoints reuse the same tensor encoding inside their own sections.
"""

from __future__ import annotations

import struct
import zlib
from typing import BinaryIO

import numpy as np

from .adam import AdamState
from .nets import ACTIVATIONS, Mlp
from .tensor import Tensor

MAGIC = b"CSAC"
FORMAT_VERSION = 1


class CheckpointError(ValueError):
    """Malformed or incompatible checkpoint bytes."""


class _Reader:
    def __init__(self, buf: bytes):
        self.buf = buf
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.buf):
            raise CheckpointError("truncated checkpoint")
        out = self.buf[self.pos:self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        return struct.unpack("<I", self.take(4))[0]

    def u64(self) -> int:
        return struct.unpack("<Q", self.take(8))[0]

    def f64(self) -> float:
        return struct.unpack("<d", self.take(8))[0]

    def string(self) -> str:
        return self.take(self.u32()).decode("utf-8")

    def done(self) -> bool:
        return self.pos == len(self.buf)


def _pack_string(s: str) -> bytes:
    raw = s.encode("utf-8")
    return struct.pack("<I", len(raw)) + raw


def _pack_tensor(data: np.ndarray) -> bytes:
    arr = np.ascontiguousarray(data, dtype="<f8")
    head = struct.pack("<I", arr.ndim) + struct.pack(f"<{arr.ndim}I", *arr.shape)
    return head + arr.tobytes()


def _read_tensor(r: _Reader) -> np.ndarray:
    rank = r.u32()
    dims = struct.unpack(f"<{rank}I", r.take(4 * rank)) if rank else ()
    count = int(np.prod(dims)) if dims else 1
    flat = np.frombuffer(r.take(8 * count), dtype="<f8")
    return flat.reshape(dims).astype(np.float64)


def _check_header(r: _Reader) -> None:
    if r.take(4) != MAGIC:
        raise CheckpointError("bad magic; not a CSAC checkpoint")
    version = r.u32()
    if version != FORMAT_VERSION:
        raise CheckpointError(f"unsupported format version {version}")


def dump_mlp(net: Mlp) -> bytes:
    parts = [MAGIC, struct.pack("<I", FORMAT_VERSION),
             struct.pack("<I", len(net.widths)),
             struct.pack(f"<{len(net.widths)}I", *net.widths),
             struct.pack("<B", ACTIVATIONS.index(net.activation))]
    for p in net.parameters():
        parts.append(_pack_tensor(p.data))
    return b"".join(parts)


def load_mlp(blob: bytes) -> Mlp:
    r = _Reader(blob)
    net = _read_mlp(r)
    if not r.done():
        raise CheckpointError("trailing bytes after Mlp payload")
    return net


def _read_mlp(r: _Reader) -> Mlp:
    _check_header(r)
    n_widths = r.u32()
    widths = struct.unpack(f"<{n_widths}I", r.take(4 * n_widths))
    act_idx = r.u8()
    if act_idx >= len(ACTIVATIONS):
        raise CheckpointError(f"unknown activation tag {act_idx}")
    net = Mlp(widths, ACTIVATIONS[act_idx])
    for p in net.parameters():
        data = _read_tensor(r)
        if data.shape != p.data.shape:
            raise CheckpointError(f"tensor shape {data.shape} != expected {p.data.shape}")
        p.data[...] = data
    return net


def dump_adam(state: AdamState) -> bytes:
    parts = [MAGIC, struct.pack("<I", FORMAT_VERSION),
             struct.pack("<Q", state.step_count),
             struct.pack("<4d", state.lr, state.beta1, state.beta2, state.eps),
             struct.pack("<I", len(state.params))]
    for m, v in zip(state.m, state.v):
        parts.append(_pack_tensor(m))
        parts.append(_pack_tensor(v))
    return b"".join(parts)


def load_adam_into(blob: bytes, params: list[Tensor]) -> AdamState:
    """Rebuild optimizer state against the given (already-loaded) parameters."""
    r = _Reader(blob)
    _check_header(r)
    step = r.u64()
    lr, b1, b2, eps = (r.f64() for _ in range(4))
    count = r.u32()
    if count != len(params):
        raise CheckpointError(f"adam state for {count} params, got {len(params)}")
    state = AdamState(params, lr=lr, beta1=b1, beta2=b2, eps=eps)
    state.step_count = step
    for i in range(count):
        state.m[i] = _read_tensor(r)
        state.v[i] = _read_tensor(r)
        if state.m[i].shape != params[i].data.shape:
            raise CheckpointError("adam moment shape mismatch")
    if not r.done():
        raise CheckpointError("trailing bytes after Adam payload")
    return state


def dump_sections(kind: str, sections: list[tuple[str, bytes]],
                  scalars: dict[str, float] | None = None) -> bytes:
    """Container: named blobs plus a scalar map, CRC-guarded."""
    scalars = scalars or {}
    body = [_pack_string(kind), struct.pack("<I", len(sections))]
    for name, blob in sections:
        body.append(_pack_string(name))
        body.append(struct.pack("<Q", len(blob)))
        body.append(blob)
    body.append(struct.pack("<I", len(scalars)))
    for name in sorted(scalars):
        body.append(_pack_string(name))
        body.append(struct.pack("<d", scalars[name]))
    payload = b"".join(body)
    head = MAGIC + struct.pack("<I", FORMAT_VERSION)
    return head + payload + struct.pack("<I", zlib.crc32(payload))


def load_sections(blob: bytes) -> tuple[str, dict[str, bytes], dict[str, float]]:
    r = _Reader(blob)
    _check_header(r)
    payload = blob[r.pos:-4]
    (crc,) = struct.unpack("<I", blob[-4:])
    if zlib.crc32(payload) != crc:
        raise CheckpointError("checksum mismatch; checkpoint corrupted")
    kind = r.string()
    sections: dict[str, bytes] = {}
    for _ in range(r.u32()):
        name = r.string()
        (length,) = struct.unpack("<Q", r.take(8))
        sections[name] = r.take(length)
    scalars: dict[str, float] = {}
    for _ in range(r.u32()):
        scalars[r.string()] = r.f64()
    return kind, sections, scalars


def write_file(path, blob: bytes) -> None:
    with open(path, "wb") as fh:
        fh.write(blob)


def read_file(path) -> bytes:
    with open(path, "rb") as fh:
        return fh.read()
