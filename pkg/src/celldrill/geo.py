"""Geographic helpers: bounding extents, rectangle areas in km²,
sample-density grids, and an automated seed rectangle for the manual
deployment-area demarcation.

Areas use the equirectangular approximation (longitude spans scaled by
the cosine of the rectangle's mid-latitude). At the city scales this
toolkit targets (tens of km²) it stays well within half a percent of a
geodesic computation, and the math stays auditable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .ndd import UniqueCell

KM_PER_DEGREE = 111.32


class GeoError(ValueError):
    pass


@dataclass(slots=True, frozen=True)
class GeoRect:
    """Axis-aligned lat/lon rectangle. Antimeridian-wrapping extents are
    rejected rather than handled."""

    lat_min: float
    lat_max: float
    lon_min: float
    lon_max: float

    def __post_init__(self) -> None:
        if not (-90.0 <= self.lat_min <= self.lat_max <= 90.0):
            raise GeoError(
                f"invalid latitude extent [{self.lat_min}, {self.lat_max}]")
        if not (-180.0 <= self.lon_min <= self.lon_max <= 180.0):
            raise GeoError(
                f"invalid longitude extent [{self.lon_min}, {self.lon_max}]")

    def contains(self, lat: float, lon: float) -> bool:
        return (self.lat_min <= lat <= self.lat_max
                and self.lon_min <= lon <= self.lon_max)


@dataclass(slots=True, frozen=True)
class DemarcationRect:
    """A candidate or chosen 5G deployment rectangle with its area and
    the top-cell traffic it encloses."""

    mnc: int
    rect: GeoRect
    area_km2: float
    source: str  # "manual" | "suggested"
    contained_cells: int
    contained_samples: int


@dataclass(slots=True)
class DensityGrid:
    rect: GeoRect
    rows: int
    cols: int
    cell_samples: list[list[int]]  # [row][col], row 0 at lat_min
    overflow_samples: int
    binned_cells: int


def bounding_box(cells: Sequence[UniqueCell]) -> GeoRect:
    """Smallest axis-aligned rectangle containing every cell position."""
    if not cells:
        raise GeoError("cannot bound an empty cell list")
    return GeoRect(
        lat_min=min(c.lat for c in cells),
        lat_max=max(c.lat for c in cells),
        lon_min=min(c.lon for c in cells),
        lon_max=max(c.lon for c in cells),
    )


def rect_area_km2(rect: GeoRect) -> float:
    """Equirectangular area: height is Δlat degrees at 111.32 km each,
    width is Δlon degrees scaled by cos(mid-latitude)."""
    dlat = rect.lat_max - rect.lat_min
    dlon = rect.lon_max - rect.lon_min
    lat_mid = 0.5 * (rect.lat_min + rect.lat_max)
    height_km = dlat * KM_PER_DEGREE
    width_km = dlon * KM_PER_DEGREE * math.cos(math.radians(lat_mid))
    return height_km * width_km


def density_grid(
    cells: Iterable[UniqueCell], rect: GeoRect, rows: int, cols: int
) -> DensityGrid:
    """Bin each cell's samples into the rows×cols grid over `rect`.

    Bins are half-open except the last row/column, which owns the top
    and right edges; cells outside the rectangle go to the overflow
    counter so mass is conserved either way.
    """
    if rows < 1 or cols < 1:
        raise GeoError("grid must have at least one row and one column")
    grid = [[0] * cols for _ in range(rows)]
    dlat = rect.lat_max - rect.lat_min
    dlon = rect.lon_max - rect.lon_min
    overflow = 0
    binned = 0
    for c in cells:
        if not rect.contains(c.lat, c.lon):
            overflow += c.samples
            continue
        r = min(int((c.lat - rect.lat_min) / dlat * rows), rows - 1) if dlat else 0
        k = min(int((c.lon - rect.lon_min) / dlon * cols), cols - 1) if dlon else 0
        grid[r][k] += c.samples
        binned += 1
    return DensityGrid(rect=rect, rows=rows, cols=cols, cell_samples=grid,
                       overflow_samples=overflow, binned_cells=binned)


def demarcate(
    mnc: int, rect: GeoRect, cells: Sequence[UniqueCell], source: str = "manual"
) -> DemarcationRect:
    """Evaluate a rectangle against an operator's top cells."""
    inside = [c for c in cells if rect.contains(c.lat, c.lon)]
    return DemarcationRect(
        mnc=mnc,
        rect=rect,
        area_km2=rect_area_km2(rect),
        source=source,
        contained_cells=len(inside),
        contained_samples=sum(c.samples for c in inside),
    )


def suggest_5gda(
    cells: Sequence[UniqueCell], mass_fraction: float, mnc: int = 0
) -> DemarcationRect:
    """Smallest-area rectangle aligned to cell coordinates holding at
    least `mass_fraction` of the total samples.

    Exhaustive over latitude bands spanned by cell coordinates; within a
    band the longitude window is shrunk with a sliding scan, so the
    result is exact over the finite candidate set.
    """
    if not cells:
        raise GeoError("cannot suggest a rectangle for no cells")
    if not 0.0 < mass_fraction <= 1.0:
        raise GeoError(f"mass_fraction out of (0, 1]: {mass_fraction}")
    total = sum(c.samples for c in cells)
    need = mass_fraction * total
    lats = sorted({c.lat for c in cells})
    lons = sorted({c.lon for c in cells})

    best: GeoRect | None = None
    best_area = math.inf
    for i, lat_lo in enumerate(lats):
        for lat_hi in lats[i:]:
            band = [c for c in cells if lat_lo <= c.lat <= lat_hi]
            # samples per candidate longitude within this band
            by_lon = {lon: 0 for lon in lons}
            for c in band:
                by_lon[c.lon] += c.samples
            # shrinking-window scan over sorted longitudes
            lo = 0
            mass = 0
            for hi, lon_hi in enumerate(lons):
                mass += by_lon[lon_hi]
                while lo < hi and mass - by_lon[lons[lo]] >= need:
                    mass -= by_lon[lons[lo]]
                    lo += 1
                if mass >= need:
                    cand = GeoRect(lat_min=lat_lo, lat_max=lat_hi,
                                   lon_min=lons[lo], lon_max=lon_hi)
                    area = rect_area_km2(cand)
                    if area < best_area - 1e-12 or (
                            abs(area - best_area) <= 1e-12 and best is not None
                            and _rect_key(cand) < _rect_key(best)):
                        best, best_area = cand, area
    assert best is not None  # mass_fraction <= 1 always satisfiable
    out = demarcate(mnc, best, cells, source="suggested")
    return out


def _rect_key(r: GeoRect) -> tuple[float, float, float, float]:
    return (r.lat_min, r.lat_max, r.lon_min, r.lon_max)
