"""Series CSV, report JSON and state checkpoints.

The series CSV carries the fixed column set
``t,E,E1,E2,F1,F2,F3,L,D_cum,w_ptt,w_lap_vt`` with ``.``-decimal values at 17
significant digits, so identical runs produce bit-identical files.

Checkpoints are a versioned binary format: an 8-byte magic, a little-endian
uint32 header length, a JSON header (grid geometry, time, dtype) and the raw
coefficient arrays of ``psi`` and ``v`` as little-endian 64-bit floats.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .energy import EnergySample
from .fields import SimState
from .grid import Grid, SpectralField
from .integrate import Termination, TimeSeries

__all__ = [
    "write_series_csv",
    "read_series_csv",
    "LoadedSeries",
    "write_json",
    "save_checkpoint",
    "load_checkpoint",
]

CHECKPOINT_MAGIC = b"BLKSTCK1"


def write_series_csv(path: str | Path, series: TimeSeries) -> None:
    columns = EnergySample.CSV_COLUMNS
    lines = [",".join(columns)]
    for sample in series.samples:
        lines.append(",".join(f"{getattr(sample, c):.17g}" for c in columns))
    Path(path).write_text("\n".join(lines) + "\n")


@dataclass(frozen=True)
class LoadedSeries:
    """Columns read back from a series CSV; duck-typed for the decay fit."""

    data: dict
    termination: Termination = Termination("completed")

    def column(self, name: str) -> np.ndarray:
        if name not in self.data:
            raise KeyError(f"column {name!r} not present in loaded series")
        return self.data[name]


def read_series_csv(path: str | Path) -> LoadedSeries:
    text = Path(path).read_text().strip().splitlines()
    header = text[0].split(",")
    rows = np.array([[float(v) for v in line.split(",")] for line in text[1:]])
    if rows.ndim != 2 or rows.shape[1] != len(header):
        raise ValueError(f"malformed series CSV {path}")
    return LoadedSeries(data={name: rows[:, i] for i, name in enumerate(header)})


def write_json(path: str | Path, payload: dict) -> None:
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def save_checkpoint(path: str | Path, state: SimState) -> None:
    grid = state.grid
    header = {
        "version": 1,
        "dim": grid.dim,
        "extents": list(grid.extents),
        "modes": list(grid.modes),
        "time": state.time,
        "dtype": "<f8",
    }
    header_bytes = json.dumps(header, sort_keys=True).encode()
    with open(path, "wb") as fh:
        fh.write(CHECKPOINT_MAGIC)
        fh.write(struct.pack("<I", len(header_bytes)))
        fh.write(header_bytes)
        fh.write(np.ascontiguousarray(state.psi.coeffs, dtype="<f8").tobytes())
        fh.write(np.ascontiguousarray(state.v.coeffs, dtype="<f8").tobytes())


def load_checkpoint(path: str | Path) -> SimState:
    with open(path, "rb") as fh:
        magic = fh.read(len(CHECKPOINT_MAGIC))
        if magic != CHECKPOINT_MAGIC:
            raise ValueError(f"not a checkpoint file: {path}")
        (header_len,) = struct.unpack("<I", fh.read(4))
        header = json.loads(fh.read(header_len).decode())
        if header.get("version") != 1:
            raise ValueError(f"unsupported checkpoint version {header.get('version')}")
        grid = Grid(extents=tuple(header["extents"]), modes=tuple(header["modes"]))
        count = int(np.prod(grid.modes))
        psi = np.frombuffer(fh.read(8 * count), dtype="<f8").reshape(grid.modes)
        v = np.frombuffer(fh.read(8 * count), dtype="<f8").reshape(grid.modes)
    return SimState(
        psi=SpectralField(grid, psi.copy()),
        v=SpectralField(grid, v.copy()),
        time=float(header["time"]),
    )
