from __future__ import annotations

import dataclasses
from collections.abc import Callable, Mapping
from pathlib import Path
from typing import Any, Generic, NewType

import msgspec

from lorentzgas._types import TResult
from lorentzgas._version import VERSION

Deserializer = Callable[[bytes], TResult]
Serializer = Callable[[TResult], bytes]

CodecId = NewType("CodecId", str)


@dataclasses.dataclass(kw_only=True, slots=True, frozen=True)
class Codec(Generic[TResult]):
    id: CodecId
    instance_of: type[TResult]
    serialize: Serializer[TResult]
    deserialize: Deserializer[TResult]


def encode(
    value: object,
    default_codec: Codec[Any],
    codecs: Mapping[CodecId, Codec[Any]],
) -> tuple[CodecId, bytes]:
    for codec in codecs.values():
        if isinstance(value, codec.instance_of):
            return codec.id, codec.serialize(value)

    return default_codec.id, default_codec.serialize(value)


def write_output(
    path: Path,
    value: object,
    default_codec: Codec[Any],
    codecs: Mapping[CodecId, Codec[Any]],
) -> CodecId:
    codec_id, payload = encode(value, default_codec, codecs)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(payload)
    return codec_id


class RunHeader(msgspec.Struct, kw_only=True, frozen=True):
    """Library version and the full parameter set of the run that wrote a file."""

    command: str
    params: dict[str, Any]
    version: str = VERSION
