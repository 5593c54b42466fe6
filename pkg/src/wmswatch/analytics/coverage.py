"""Spatial coverage rasterization of layer bounding boxes."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..model.types import LayerRecord


@dataclass
class CoverageGrid:
    """Counts of layers touching each cell of a regular lon/lat grid.

    ``counts`` has shape (180/cell_deg, 360/cell_deg): rows run south to
    north from -90, columns west to east from -180.  ``skipped`` tallies
    layers whose bbox was absent or unusable.
    """

    cell_deg: float
    counts: np.ndarray
    skipped: int = 0

    @property
    def n_rows(self) -> int:
        return self.counts.shape[0]

    @property
    def n_cols(self) -> int:
        return self.counts.shape[1]

    def to_dict(self) -> dict:
        return {"cell_deg": self.cell_deg, "skipped": self.skipped,
                "counts": self.counts.tolist()}


def split_antimeridian(bbox: tuple[float, float, float, float]
                       ) -> list[tuple[float, float, float, float]]:
    """Boxes with west > east wrap the antimeridian; split them in two."""
    w, s, e, n = bbox
    if w > e:
        return [(w, s, 180.0, n), (-180.0, s, e, n)]
    return [bbox]


def _cell_span(lo: float, hi: float, offset: float, cell: float,
               n_cells: int) -> tuple[int, int]:
    """Half-open index range of cells a [lo, hi] interval overlaps with
    positive measure; degenerate intervals take their containing cell."""
    first = math.floor((lo + offset) / cell)
    last = math.ceil((hi + offset) / cell)
    if last <= first:  # zero-extent interval
        last = first + 1
    return max(first, 0), min(last, n_cells)


def coverage_grid(layers: Iterable[LayerRecord],
                  cell_deg: float = 1.0) -> CoverageGrid:
    """Rasterize layer bboxes: each layer increments every grid cell its
    bbox overlaps.  Antimeridian-crossing boxes are split; layers without a
    usable bbox are skipped and tallied."""
    if cell_deg <= 0 or 360.0 % cell_deg or 180.0 % cell_deg:
        raise ValueError("cell_deg must evenly divide 180 and 360")
    n_rows = int(180.0 / cell_deg)
    n_cols = int(360.0 / cell_deg)
    counts = np.zeros((n_rows, n_cols), dtype=np.int64)
    skipped = 0

    for layer in layers:
        bbox = layer.geographic_bbox
        if bbox is None:
            skipped += 1
            continue
        w, s, e, n = bbox
        if s > n or not (-90.0 <= s <= 90.0 and -90.0 <= n <= 90.0
                         and -180.0 <= w <= 180.0 and -180.0 <= e <= 180.0):
            skipped += 1
            continue
        row0, row1 = _cell_span(s, n, 90.0, cell_deg, n_rows)
        for piece_w, piece_s, piece_e, piece_n in split_antimeridian(bbox):
            col0, col1 = _cell_span(piece_w, piece_e, 180.0, cell_deg, n_cols)
            counts[row0:row1, col0:col1] += 1
    return CoverageGrid(cell_deg=cell_deg, counts=counts, skipped=skipped)
