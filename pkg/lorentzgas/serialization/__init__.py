from ._serialization import Codec, CodecId, RunHeader, encode, write_output
from .csv import CurveCsvCodec, curve_from_csv, curve_to_csv, read_curve, read_table, write_table
from .json import JsonCodec, decode_json, encode_json, read_json

CODECS = {codec.id: codec for codec in (CurveCsvCodec, JsonCodec)}

__all__ = [
    "CODECS",
    "Codec",
    "CodecId",
    "CurveCsvCodec",
    "JsonCodec",
    "RunHeader",
    "curve_from_csv",
    "curve_to_csv",
    "decode_json",
    "encode",
    "encode_json",
    "read_curve",
    "read_json",
    "read_table",
    "write_output",
    "write_table",
]
