#!/usr/bin/env python
"""
Photo and location ingestion plus the great-circle radius join.

Photo files carry one geo-tagged photo's social metadata per row and location files carry
one rated attraction per row. Both are UTF-8 CSV with a mandatory header; rows are
validated strictly and every problem is reported with its 1-based line number (the header
is line 1).

The join assigns a photo to every location whose closed disk of the given radius contains
it. Distances come from the haversine formula on a sphere of mean Earth radius.
"""

import io
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import BinaryIO, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from scenic_rating.core.logger import get_logger
from scenic_rating.exceptions.exceptions import IngestError

logger = get_logger("ingest")

EARTH_RADIUS_M = 6_371_000.0

RATING_SCALE: Tuple[float, ...] = (2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0)

PHOTO_COLUMNS = ["photo_id", "owner_id", "latitude", "longitude", "views", "favorites", "comments"]
LOCATION_COLUMNS = ["location_id", "name", "latitude", "longitude", "rating"]

# vectorized prefilter slack; the final decision always uses haversine_m
_PREFILTER_SLACK = 1e-6


@dataclass(frozen=True)
class GeoPoint:
    """A WGS84 coordinate in degrees."""

    lat: float
    lon: float

    def __post_init__(self):
        if not (math.isfinite(self.lat) and math.isfinite(self.lon)):
            raise ValueError(f"coordinates must be finite, got ({self.lat}, {self.lon})")
        if not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"latitude {self.lat} outside [-90, 90]")
        if not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"longitude {self.lon} outside [-180, 180]")


@dataclass(frozen=True, order=True)
class ClassLabel:
    """An aesthetic rating on the half-point grid between 2.0 and 5.0."""

    rating: float

    def __post_init__(self):
        if self.rating not in RATING_SCALE:
            raise ValueError(f"rating {self.rating} is not one of {', '.join(str(r) for r in RATING_SCALE)}")

    def __str__(self) -> str:
        return f"{self.rating:.1f}"


@dataclass(frozen=True)
class PhotoMeta:
    """Social metadata of one geo-tagged photo."""

    photo_id: str
    owner_id: str
    point: GeoPoint
    views: int
    favorites: int
    comments: int


@dataclass(frozen=True)
class LocationRecord:
    """A named, geocoded location with its rating class."""

    location_id: str
    name: str
    point: GeoPoint
    label: ClassLabel


@dataclass(frozen=True)
class JoinSummary:
    """Counts describing one spatial join."""

    photos: int
    locations: int
    pairs: int
    unassigned_photos: int
    multi_assigned_photos: int


def parse_rating(raw: str) -> ClassLabel:
    """
    Parse a rating string into a ClassLabel.

    Arguments:
        raw: Text such as "5", "4.5" or "2.0"

    Returns:
        ClassLabel: The validated label

    Raises:
        ValueError: If the text is not a number on the rating grid
    """
    value = float(raw)
    return ClassLabel(value)


def _scan_records(text: str) -> List[Tuple[int, int]]:
    """
    Locate the CSV records of a text.

    Returns:
        List[Tuple[int, int]]: (physical start line, field count) per record. Empty lines
        outside quotes are skipped, matching what pandas does with them.
    """
    records: List[Tuple[int, int]] = []
    in_quotes = False
    line = 1
    start = 1
    fields = 1
    empty = True
    for char in text:
        if char == '"':
            in_quotes = not in_quotes
        elif char == "," and not in_quotes:
            fields += 1
        elif char == "\n":
            if not in_quotes:
                if not empty:
                    records.append((start, fields))
                start, fields, empty = line + 1, 1, True
            line += 1
            continue
        if char != "\r":
            empty = False
    if not empty:
        records.append((start, fields))
    return records


def _read_frame(stream: BinaryIO, columns: List[str], source: str) -> Tuple[pd.DataFrame, List[int]]:
    """
    Read a CSV stream into an all-string frame and validate the header and field counts.

    Returns:
        Tuple[pd.DataFrame, List[int]]: The frame and the physical line of each frame row
    """
    try:
        text = stream.read().decode("utf-8-sig")
    except UnicodeDecodeError as e:
        raise IngestError(f"not valid UTF-8: {e}", source=source) from e

    records = _scan_records(text)
    if not records:
        raise IngestError("missing header row", line=1, source=source)

    def read(**kwargs) -> pd.DataFrame:
        try:
            return pd.read_csv(
                io.StringIO(text), dtype=str, keep_default_na=False, na_filter=False, skip_blank_lines=True, **kwargs
            )
        except pd.errors.ParserError as e:
            raise IngestError(f"malformed CSV: {e}", source=source) from e

    header = [str(c).strip() for c in read(nrows=0).columns]
    if header != columns:
        raise IngestError(
            f"expected header {','.join(columns)}, got {','.join(header)}", line=records[0][0], source=source
        )
    for line, fields in records[1:]:
        if fields != len(columns):
            raise IngestError(f"expected {len(columns)} fields, got {fields}", line=line, source=source)

    frame = read()
    lines = [line for line, _ in records[1:]]
    if len(lines) != len(frame):
        raise IngestError(f"expected {len(lines)} rows, parsed {len(frame)}", source=source)
    return frame, lines


def _row_values(frame: pd.DataFrame, position: int, line: int, width: int, source: str) -> List[str]:
    """Return one row's fields, rejecting rows with missing fields."""
    values = frame.iloc[position].tolist()
    if len(values) != width or any(not isinstance(v, str) for v in values):
        raise IngestError(f"expected {width} fields", line=line, source=source)
    return [v.strip() for v in values]


def _parse_point(lat_raw: str, lon_raw: str, line: int, source: str) -> GeoPoint:
    try:
        return GeoPoint(float(lat_raw), float(lon_raw))
    except ValueError as e:
        raise IngestError(f"invalid coordinates: {e}", line=line, source=source) from e


def _parse_count(raw: str, field: str, line: int, source: str) -> int:
    try:
        value = int(raw)
    except ValueError as e:
        raise IngestError(f"{field} must be an integer, got {raw!r}", line=line, source=source) from e
    if value < 0:
        raise IngestError(f"{field} must be non-negative, got {value}", line=line, source=source)
    return value


def parse_photos(stream: BinaryIO, source: str = "photos") -> List[PhotoMeta]:
    """
    Parse a photo metadata CSV stream.

    Arguments:
        stream: Binary stream holding UTF-8 CSV with the photo header
        source: Name used in diagnostics

    Returns:
        List[PhotoMeta]: One photo per data row, in file order

    Raises:
        IngestError: On malformed rows or duplicate photo ids
    """
    frame, lines = _read_frame(stream, PHOTO_COLUMNS, source)
    photos: List[PhotoMeta] = []
    seen: Dict[str, int] = {}

    for position in range(len(frame)):
        line = lines[position]
        photo_id, owner_id, lat_raw, lon_raw, views, favorites, comments = _row_values(
            frame, position, line, len(PHOTO_COLUMNS), source
        )
        if not photo_id:
            raise IngestError("empty photo_id", line=line, source=source)
        if photo_id in seen:
            raise IngestError(f"duplicate photo_id {photo_id!r} (first on line {seen[photo_id]})", line=line, source=source)
        seen[photo_id] = line

        photos.append(
            PhotoMeta(
                photo_id=photo_id,
                owner_id=owner_id,
                point=_parse_point(lat_raw, lon_raw, line, source),
                views=_parse_count(views, "views", line, source),
                favorites=_parse_count(favorites, "favorites", line, source),
                comments=_parse_count(comments, "comments", line, source),
            )
        )

    logger.info("Parsed %d photo rows from %s", len(photos), source)
    return photos


def parse_locations(stream: BinaryIO, source: str = "locations") -> List[LocationRecord]:
    """
    Parse a location CSV stream.

    Arguments:
        stream: Binary stream holding UTF-8 CSV with the location header
        source: Name used in diagnostics

    Returns:
        List[LocationRecord]: One location per data row, in file order

    Raises:
        IngestError: On malformed rows, off-grid ratings or duplicate location ids
    """
    frame, lines = _read_frame(stream, LOCATION_COLUMNS, source)
    locations: List[LocationRecord] = []
    seen: Dict[str, int] = {}

    for position in range(len(frame)):
        line = lines[position]
        location_id, name, lat_raw, lon_raw, rating_raw = _row_values(
            frame, position, line, len(LOCATION_COLUMNS), source
        )
        if not location_id:
            raise IngestError("empty location_id", line=line, source=source)
        if location_id in seen:
            raise IngestError(
                f"duplicate location_id {location_id!r} (first on line {seen[location_id]})", line=line, source=source
            )
        seen[location_id] = line

        try:
            label = parse_rating(rating_raw)
        except ValueError as e:
            raise IngestError(f"invalid rating {rating_raw!r}: {e}", line=line, source=source) from e

        locations.append(
            LocationRecord(
                location_id=location_id,
                name=name,
                point=_parse_point(lat_raw, lon_raw, line, source),
                label=label,
            )
        )

    logger.info("Parsed %d location rows from %s", len(locations), source)
    return locations


def _open_input(path: Union[str, Path]):
    try:
        return open(path, "rb")
    except OSError as e:
        raise IngestError(f"cannot read {path}: {e.strerror or e}") from e


def parse_photos_file(path: Union[str, Path]) -> List[PhotoMeta]:
    """Parse a photo CSV file, naming the file in diagnostics."""
    with _open_input(path) as f:
        return parse_photos(f, source=str(path))


def parse_locations_file(path: Union[str, Path]) -> List[LocationRecord]:
    """Parse a location CSV file, naming the file in diagnostics."""
    with _open_input(path) as f:
        return parse_locations(f, source=str(path))


def _haversine_arrays(lat1, lon1, lat2, lon2):
    """Vectorized haversine distance in meters; accepts scalars or numpy arrays in degrees."""
    phi1 = np.radians(lat1)
    phi2 = np.radians(lat2)
    dphi = phi2 - phi1
    dlmb = np.radians(lon2) - np.radians(lon1)
    a = np.sin(dphi / 2.0) ** 2 + np.cos(phi1) * np.cos(phi2) * np.sin(dlmb / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * np.arcsin(np.sqrt(np.clip(a, 0.0, 1.0)))


def haversine_m(a: GeoPoint, b: GeoPoint) -> float:
    """
    Great-circle distance between two points in meters.

    Arguments:
        a: First point
        b: Second point

    Returns:
        float: Distance on a sphere of radius 6,371,000 m
    """
    phi1 = math.radians(a.lat)
    phi2 = math.radians(b.lat)
    dphi = phi2 - phi1
    dlmb = math.radians(b.lon) - math.radians(a.lon)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlmb / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_M * math.asin(math.sqrt(min(1.0, max(0.0, h))))


def assign_photos(
    photos: Sequence[PhotoMeta], locations: Sequence[LocationRecord], radius: float
) -> Dict[str, List[PhotoMeta]]:
    """
    Assign each photo to every location within `radius` meters of it.

    A vectorized distance pass selects candidates; each candidate is then confirmed with
    haversine_m, so the result is exactly the brute-force closed-disk join.

    Arguments:
        photos: Photos to assign
        locations: Locations to assign to
        radius: Join radius in meters, must be positive

    Returns:
        Dict[str, List[PhotoMeta]]: location_id to photos, in input photo order, for every location

    Raises:
        ValueError: If radius is not positive
    """
    if not radius > 0:
        raise ValueError(f"radius must be positive, got {radius}")

    assignments: Dict[str, List[PhotoMeta]] = {loc.location_id: [] for loc in locations}
    if not photos:
        return assignments

    lats = np.fromiter((p.point.lat for p in photos), dtype=np.float64, count=len(photos))
    lons = np.fromiter((p.point.lon for p in photos), dtype=np.float64, count=len(photos))
    cutoff = radius * (1.0 + _PREFILTER_SLACK) + 1e-6

    for location in locations:
        distances = _haversine_arrays(location.point.lat, location.point.lon, lats, lons)
        candidates = np.nonzero(distances <= cutoff)[0]
        assignments[location.location_id] = [
            photos[i] for i in candidates if haversine_m(photos[i].point, location.point) <= radius
        ]

    return assignments


def summarize_join(
    photos: Sequence[PhotoMeta], assignments: Dict[str, List[PhotoMeta]], locations: Optional[int] = None
) -> JoinSummary:
    """
    Summarize a join result.

    Arguments:
        photos: The photos that were joined
        assignments: Output of assign_photos
        locations: Location count, defaults to the number of keys in assignments

    Returns:
        JoinSummary: Pair, unassigned and multi-assigned counts
    """
    per_photo = Counter(p.photo_id for assigned in assignments.values() for p in assigned)
    return JoinSummary(
        photos=len(photos),
        locations=len(assignments) if locations is None else locations,
        pairs=sum(per_photo.values()),
        unassigned_photos=sum(1 for p in photos if per_photo[p.photo_id] == 0),
        multi_assigned_photos=sum(1 for count in per_photo.values() if count > 1),
    )
