"""File formats: CTCB field-map container, flat config files, manifests.

The map container is self-describing and lossless: magic "CTCB", a u32
version, u32 row/column counts, then row-major little-endian float64.
Config files and manifests are flat key=value text with dotted keys,
'#' comments and blank lines allowed.
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .errors import ConfigParseError

MAGIC = b"CTCB"
VERSION = 1

# CSV emission is meant for eyeballing small grids, not bulk transport.
CSV_MAX_CELLS = 2_000_000


def write_field_map(path: str | Path, values: np.ndarray) -> None:
    """Write a 2D real map (time, space) to the CTCB container."""
    arr = np.ascontiguousarray(values, dtype="<f8")
    if arr.ndim != 2:
        raise ValueError(f"field map must be 2D, got shape {arr.shape}")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<III", VERSION, arr.shape[0], arr.shape[1]))
        fh.write(arr.tobytes())


def read_field_map(path: str | Path) -> np.ndarray:
    with open(path, "rb") as fh:
        magic = fh.read(4)
        if magic != MAGIC:
            raise ValueError(f"{path}: not a CTCB container (magic {magic!r})")
        version, rows, cols = struct.unpack("<III", fh.read(12))
        if version != VERSION:
            raise ValueError(f"{path}: unsupported CTCB version {version}")
        data = np.frombuffer(fh.read(rows * cols * 8), dtype="<f8")
    if data.size != rows * cols:
        raise ValueError(f"{path}: truncated CTCB container")
    return data.reshape(rows, cols).copy()


def write_field_map_csv(path: str | Path, values: np.ndarray) -> bool:
    """CSV twin of the container for small grids; returns False if too large."""
    arr = np.asarray(values)
    if arr.size > CSV_MAX_CELLS:
        return False
    np.savetxt(path, arr, delimiter=",", fmt="%.17g")
    return True


def format_value(value: object) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def format_config(cfg: dict[str, object]) -> str:
    lines = [f"{key}={format_value(cfg[key])}" for key in sorted(cfg)]
    return "\n".join(lines) + "\n"


def write_manifest(path: str | Path, cfg: dict[str, object]) -> None:
    Path(path).write_text(format_config(cfg))


def parse_config_text(text: str) -> dict[str, str]:
    """Parse key=value lines into raw string values (types resolved later)."""
    raw: dict[str, str] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigParseError("expected 'key=value'", line=lineno)
        key, _, value = stripped.partition("=")
        key = key.strip()
        if not key:
            raise ConfigParseError("empty key", line=lineno)
        if key in raw:
            raise ConfigParseError("duplicate key", line=lineno, key=key)
        raw[key] = value.strip()
    return raw


def parse_config_file(path: str | Path) -> dict[str, str]:
    return parse_config_text(Path(path).read_text())
