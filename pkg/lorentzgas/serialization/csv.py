from __future__ import annotations

import csv
import io
from collections.abc import Iterable, Sequence
from pathlib import Path

import msgspec

from lorentzgas._version import VERSION
from lorentzgas.ensemble import SurvivalCurve
from lorentzgas.errors import MalformedFileError

from ._serialization import Codec, CodecId

CURVE_COLUMNS = ("t", "survival", "std_err")

Cell = float | int | str


def _format(value: Cell) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_table(
    columns: Sequence[str],
    rows: Iterable[Sequence[Cell]],
    comments: Iterable[str] = (),
) -> bytes:
    """CSV text with ``#`` comment lines before the header; floats in repr form."""
    buffer = io.StringIO()
    buffer.write(f"# lorentzgas {VERSION}\n")
    for comment in comments:
        buffer.write(f"# {comment}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows([_format(value) for value in row] for row in rows)
    return buffer.getvalue().encode()


def read_table(data: bytes) -> tuple[list[str], list[str], list[list[str]]]:
    """Splits a CSV file into comment lines, header and rows."""
    try:
        text = data.decode()
    except UnicodeDecodeError as e:
        msg = "CSV file is not valid UTF-8"
        raise MalformedFileError(msg) from e
    lines = text.splitlines()
    comments = [line[1:].strip() for line in lines if line.startswith("#")]
    body = [line for line in lines if line and not line.startswith("#")]
    if not body:
        msg = "CSV file has no header row"
        raise MalformedFileError(msg)
    header, *rows = list(csv.reader(body))
    return comments, header, rows


def _metadata(comments: Iterable[str]) -> dict[str, str]:
    fields: dict[str, str] = {}
    for comment in comments:
        for token in comment.split():
            key, sep, value = token.partition("=")
            if sep:
                fields[key] = value
    return fields


def curve_to_csv(curve: SurvivalCurve, extra_comments: Iterable[str] = ()) -> bytes:
    comments = [
        f"D={curve.dimension} r={curve.radius!r} n={curve.n_samples} seed={curve.seed} "
        f"t_max={curve.t_max!r} censored_frac={curve.censored_fraction!r}",
        f"kind={curve.kind}"
        + (f" intensity={curve.intensity!r}" if curve.intensity is not None else ""),
    ]
    comments.extend(extra_comments)
    rows = zip(curve.times, curve.survival, curve.std_err, strict=True)
    return write_table(CURVE_COLUMNS, rows, comments)


def curve_from_csv(data: bytes) -> SurvivalCurve:
    comments, header, rows = read_table(data)
    if tuple(header) != CURVE_COLUMNS:
        msg = f"Expected columns {','.join(CURVE_COLUMNS)}, got {','.join(header)}"
        raise MalformedFileError(msg)
    if any(len(row) != len(CURVE_COLUMNS) for row in rows):
        msg = "Every row needs three values"
        raise MalformedFileError(msg)
    meta = _metadata(comments)
    try:
        columns = [[float(cell) for cell in row] for row in rows]
        intensity = meta.get("intensity")
        return msgspec.convert(
            {
                "times": [row[0] for row in columns],
                "survival": [row[1] for row in columns],
                "std_err": [row[2] for row in columns],
                "n_samples": int(meta["n"]),
                "t_max": float(meta["t_max"]),
                "radius": float(meta["r"]),
                "dimension": int(meta["D"]),
                "seed": int(meta["seed"]),
                "censored_fraction": float(meta.get("censored_frac", "0.0")),
                "kind": meta.get("kind", "periodic"),
                "intensity": float(intensity) if intensity is not None else None,
            },
            SurvivalCurve,
        )
    except (KeyError, ValueError, msgspec.ValidationError) as e:
        msg = f"Malformed survival curve: {e}"
        raise MalformedFileError(msg) from e


def read_curve(path: Path) -> SurvivalCurve:
    return curve_from_csv(path.read_bytes())


CurveCsvCodec: Codec[SurvivalCurve] = Codec(
    id=CodecId("curve-csv"),
    instance_of=SurvivalCurve,
    serialize=curve_to_csv,
    deserialize=curve_from_csv,
)
