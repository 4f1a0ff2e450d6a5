from __future__ import annotations

from pathlib import Path
from typing import TypeVar

import msgspec

from lorentzgas.errors import MalformedFileError

from ._serialization import Codec, CodecId

TStruct = TypeVar("TStruct", bound=msgspec.Struct)


def encode_json(value: msgspec.Struct) -> bytes:
    """Pretty-printed JSON with a fixed key order and a trailing newline."""
    return msgspec.json.format(msgspec.json.encode(value, order="deterministic"), indent=2) + b"\n"


def decode_json(data: bytes, type_: type[TStruct]) -> TStruct:
    try:
        return msgspec.json.decode(data, type=type_)
    except msgspec.DecodeError as e:
        msg = f"Cannot read {type_.__name__}: {e}"
        raise MalformedFileError(msg) from e


def read_json(path: Path, type_: type[TStruct]) -> TStruct:
    return decode_json(path.read_bytes(), type_)


JsonCodec: Codec[msgspec.Struct] = Codec(
    id=CodecId("json"),
    instance_of=msgspec.Struct,
    serialize=encode_json,
    deserialize=msgspec.json.decode,
)
