"""Raw sensor exports to density-ready feature vectors.

Covers the usual preprocessing for 1-D transport analysis: tri-axis energy
traces, zero-padding ragged recordings, histogramming into densities, and the
plain-text CSV formats everything rides in on.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .classify import LabeledDataset
from .density import DiscreteDensity, from_samples
from .errors import EmptyInput, LabelMissing, ParseError

__all__ = [
    "RawSignalSet",
    "energy",
    "zero_pad",
    "histogram",
    "load_csv",
    "save_csv",
    "load_triaxis_csv",
]


@dataclass(frozen=True)
class RawSignalSet:
    """Variable-length signals with one class id per signal.

    ``signals`` holds 1-D arrays, or (n, 3) arrays for tri-axis recordings.
    """

    signals: tuple
    labels: np.ndarray

    def __post_init__(self):
        signals = tuple(np.asarray(s, dtype=np.float64) for s in self.signals)
        labels = np.asarray(self.labels)
        if labels.ndim != 1 or labels.size != len(signals):
            raise ValueError("labels must align with signals")
        for s in signals:
            if not np.all(np.isfinite(s)):
                raise ValueError("signals must be finite")
        object.__setattr__(self, "signals", signals)
        object.__setattr__(self, "labels", labels)

    def __len__(self) -> int:
        return len(self.signals)


def energy(signal) -> np.ndarray:
    """Per-sample energy of a tri-axis recording: x^2 + y^2 + z^2."""
    arr = np.asarray(signal, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError("expected a sequence of (x, y, z) triples")
    return np.sum(arr**2, axis=1)


def zero_pad(signal_set: RawSignalSet) -> RawSignalSet:
    """Right-pad every signal with zeros to the length of the longest."""
    if len(signal_set) == 0:
        raise EmptyInput("no signals to pad")
    longest = max(s.shape[0] for s in signal_set.signals)
    padded = []
    for s in signal_set.signals:
        pad = longest - s.shape[0]
        width = ((0, pad),) if s.ndim == 1 else ((0, pad), (0, 0))
        padded.append(np.pad(s, width))
    return RawSignalSet(tuple(padded), signal_set.labels)


def histogram(values, bins: int, value_range: tuple[float, float], epsilon_floor: float = 1e-8) -> DiscreteDensity:
    """Equal-width histogram of scalar samples as a discrete density.

    Samples outside the range are clipped onto the end bins so no mass is
    dropped; counts are floored and normalized like any other density.

    Raises
    ------
    EmptyInput
        If there are no samples.
    """
    arr = np.asarray(values, dtype=np.float64).ravel()
    if arr.size == 0:
        raise EmptyInput("no values to histogram")
    if bins < 2:
        raise ValueError("bins must be at least 2")
    lo, hi = float(value_range[0]), float(value_range[1])
    if not hi > lo:
        raise ValueError("empty histogram range")
    clipped = np.clip(arr, lo, hi)
    counts, _ = np.histogram(clipped, bins=bins, range=(lo, hi))
    spacing = (hi - lo) / bins
    return from_samples(counts.astype(np.float64), lo + 0.5 * spacing, spacing, epsilon_floor)


def _parse_cell(cell: str, line_no: int) -> float:
    try:
        return float(cell)
    except ValueError:
        raise ParseError(line_no, f"non-numeric cell {cell!r}") from None


def _parse_label(cell: str, line_no: int):
    cell = cell.strip()
    if cell == "":
        raise LabelMissing(f"line {line_no}: empty label")
    try:
        return int(cell)
    except ValueError:
        raise ParseError(line_no, f"label {cell!r} is not an integer") from None


def load_csv(path, labeled: bool = True, header: bool = False, kind: str = "dataset"):
    """Load a signal CSV.

    ``kind="dataset"`` requires fixed-width rows and returns a
    :class:`LabeledDataset` (or a :class:`RawSignalSet` when unlabeled, since
    a labeled dataset needs class ids); ``kind="signals"`` allows ragged rows
    and returns a :class:`RawSignalSet`. With ``labeled`` the first column is
    an integer class id.

    Raises
    ------
    ParseError
        Malformed cell or ragged rows where fixed width is required, with the
        offending 1-based line number.
    LabelMissing
        If a label cell is empty or absent.
    """
    if kind not in ("dataset", "signals"):
        raise ValueError("kind must be 'dataset' or 'signals'")
    rows, labels = [], []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        for line_no, row in enumerate(reader, start=1):
            if header and line_no == 1:
                continue
            if not row or all(c.strip() == "" for c in row):
                continue
            if labeled:
                if len(row) < 2:
                    raise LabelMissing(f"line {line_no}: row has no value columns")
                labels.append(_parse_label(row[0], line_no))
                cells = row[1:]
            else:
                labels.append(0)
                cells = row
            rows.append(np.array([_parse_cell(c, line_no) for c in cells]))
    if not rows:
        raise EmptyInput(f"{path}: no data rows")
    if kind == "signals":
        return RawSignalSet(tuple(rows), np.array(labels))
    widths = {r.size for r in rows}
    if len(widths) != 1:
        bad = next(
            i + 1 for i, r in enumerate(rows) if r.size != rows[0].size
        )
        raise ParseError(bad, "ragged row in fixed-width dataset")
    if not labeled:
        return RawSignalSet(tuple(rows), np.array(labels))
    return LabeledDataset(np.vstack(rows), np.array(labels))


def load_triaxis_csv(path, labeled: bool = True, header: bool = False) -> RawSignalSet:
    """Load tri-axis recordings: ``label, x1, y1, z1, x2, y2, z2, ...``.

    Raises
    ------
    ParseError
        If a row's value count is not a multiple of three.
    """
    flat = load_csv(path, labeled=labeled, header=header, kind="signals")
    signals = []
    for i, s in enumerate(flat.signals):
        if s.size % 3 != 0:
            raise ParseError(i + 1, f"{s.size} values is not a whole number of triples")
        signals.append(s.reshape(-1, 3))
    return RawSignalSet(tuple(signals), flat.labels)


def save_csv(path, features, labels=None) -> None:
    """Write rows (optionally label-prefixed) with round-trip-exact floats."""
    features = [np.asarray(row, dtype=np.float64) for row in features]
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        for i, row in enumerate(features):
            cells = [repr(float(v)) for v in row]
            if labels is not None:
                cells = [str(labels[i])] + cells
            writer.writerow(cells)
