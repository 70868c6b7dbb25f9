#!/usr/bin/env python
"""Tests for photo and location parsing and the radius join."""

import io
import math

import numpy as np
import pytest

from scenic_rating.exceptions.exceptions import IngestError
from scenic_rating.geo.ingest import (
    ClassLabel,
    GeoPoint,
    LocationRecord,
    PhotoMeta,
    assign_photos,
    haversine_m,
    parse_locations,
    parse_locations_file,
    parse_photos,
    parse_rating,
    summarize_join,
)

PHOTO_HEADER = b"photo_id,owner_id,latitude,longitude,views,favorites,comments\n"
LOCATION_HEADER = b"location_id,name,latitude,longitude,rating\n"


def photo(photo_id, lat, lon, owner="o1", views=10, favorites=1, comments=0):
    return PhotoMeta(photo_id, owner, GeoPoint(lat, lon), views, favorites, comments)


def location(location_id, lat, lon, rating=4.0):
    return LocationRecord(location_id, location_id.title(), GeoPoint(lat, lon), ClassLabel(rating))


class TestParsePhotos:
    """Test cases for parse_photos."""

    def test_parses_rows_in_file_order(self):
        """Rows become PhotoMeta values with integer counts."""
        stream = io.BytesIO(PHOTO_HEADER + b"p1,alice,41.89,12.49,100,5,2\np2,bob,41.90,12.50,0,0,0\n")

        photos = parse_photos(stream)

        assert [p.photo_id for p in photos] == ["p1", "p2"]
        assert photos[0].owner_id == "alice"
        assert photos[0].point == GeoPoint(41.89, 12.49)
        assert (photos[0].views, photos[0].favorites, photos[0].comments) == (100, 5, 2)

    def test_header_only_gives_no_photos(self):
        """An empty photo file is valid."""
        assert parse_photos(io.BytesIO(PHOTO_HEADER)) == []

    def test_wrong_header_reports_line_one(self):
        """A foreign header is rejected on line 1."""
        with pytest.raises(IngestError) as exc_info:
            parse_photos(io.BytesIO(b"id,lat,lon\n1,2,3\n"))
        assert exc_info.value.line == 1

    def test_empty_file_reports_missing_header(self):
        """A file without any header line is rejected."""
        with pytest.raises(IngestError) as exc_info:
            parse_photos(io.BytesIO(b""))
        assert exc_info.value.line == 1

    def test_negative_count_reports_line(self):
        """Negative views are rejected with the data line number."""
        stream = io.BytesIO(PHOTO_HEADER + b"p1,a,41.0,12.0,1,1,1\np2,a,41.0,12.0,-4,1,1\n")
        with pytest.raises(IngestError) as exc_info:
            parse_photos(stream, source="photos.csv")
        assert exc_info.value.line == 3
        assert "photos.csv" in str(exc_info.value)

    def test_non_integer_count(self):
        """Counts must be integers."""
        with pytest.raises(IngestError, match="favorites"):
            parse_photos(io.BytesIO(PHOTO_HEADER + b"p1,a,41.0,12.0,1,1.5,1\n"))

    def test_out_of_range_latitude(self):
        """Coordinates are validated."""
        with pytest.raises(IngestError) as exc_info:
            parse_photos(io.BytesIO(PHOTO_HEADER + b"p1,a,91.0,12.0,1,1,1\n"))
        assert exc_info.value.line == 2

    def test_duplicate_photo_id(self):
        """Photo ids are unique."""
        stream = io.BytesIO(PHOTO_HEADER + b"p1,a,41.0,12.0,1,1,1\np1,b,41.0,12.0,1,1,1\n")
        with pytest.raises(IngestError, match="duplicate photo_id") as exc_info:
            parse_photos(stream)
        assert exc_info.value.line == 3

    def test_missing_fields(self):
        """Short rows are rejected on their own line."""
        stream = io.BytesIO(PHOTO_HEADER + b"p1,a,41.0\n")
        with pytest.raises(IngestError) as exc_info:
            parse_photos(stream)
        assert exc_info.value.line == 2

    def test_blank_lines_keep_physical_line_numbers(self):
        """Blank lines are skipped but still counted."""
        stream = io.BytesIO(PHOTO_HEADER + b"\np1,a,41.0,12.0,1,1,1\np2,a,41.0,12.0,-1,1,1\n")
        with pytest.raises(IngestError) as exc_info:
            parse_photos(stream)
        assert exc_info.value.line == 4

    def test_blank_lines_are_ignored(self):
        stream = io.BytesIO(PHOTO_HEADER + b"\r\np1,a,41.0,12.0,1,1,1\r\n\r\n")
        assert [p.photo_id for p in parse_photos(stream)] == ["p1"]

    def test_surplus_fields_report_line(self):
        """A later row with too many fields carries its line number."""
        stream = io.BytesIO(PHOTO_HEADER + b"p1,a,41.0,12.0,1,1,1\n\np2,a,41.0,12.0,1,1,1,9\n")
        with pytest.raises(IngestError, match="expected 7 fields, got 8") as exc_info:
            parse_photos(stream)
        assert exc_info.value.line == 4


class TestParseLocations:
    """Test cases for parse_locations."""

    def test_parses_ratings(self):
        """Integral ratings parse onto the grid."""
        stream = io.BytesIO(LOCATION_HEADER + b"l1,Colosseum,41.89,12.49,5\nl2,Forum,41.89,12.48,4.5\n")

        locations = parse_locations(stream)

        assert [loc.label for loc in locations] == [ClassLabel(5.0), ClassLabel(4.5)]
        assert locations[0].name == "Colosseum"

    def test_off_grid_rating(self):
        """Ratings must sit on the half-point grid."""
        with pytest.raises(IngestError, match="invalid rating") as exc_info:
            parse_locations(io.BytesIO(LOCATION_HEADER + b"l1,X,41.0,12.0,4.2\n"))
        assert exc_info.value.line == 2

    def test_quoted_names(self):
        """Quoted names may hold commas and line breaks; lines are counted physically."""
        stream = io.BytesIO(
            LOCATION_HEADER + b'l1,"Trevi, Fountain",41.9,12.48,5\nl2,"Piazza\nNavona",41.9,12.47,4\nl3,X,41.9,12.4,4.2\n'
        )
        with pytest.raises(IngestError, match="invalid rating") as exc_info:
            parse_locations(stream)
        assert exc_info.value.line == 5

        locations = parse_locations(io.BytesIO(LOCATION_HEADER + b'l1,"Trevi, Fountain",41.9,12.48,5\n'))
        assert locations[0].name == "Trevi, Fountain"

    def test_duplicate_location_id(self):
        """Location ids are unique."""
        stream = io.BytesIO(LOCATION_HEADER + b"l1,X,41.0,12.0,4\nl1,Y,41.0,12.0,3\n")
        with pytest.raises(IngestError, match="duplicate location_id"):
            parse_locations(stream)

    def test_file_wrapper_names_the_file(self, location_csv):
        """Diagnostics of the file wrapper carry the path."""
        path = location_csv(["l1,X,41.0,12.0,9"])
        with pytest.raises(IngestError, match="locations.csv"):
            parse_locations_file(path)


class TestParseRating:
    """Test cases for parse_rating."""

    def test_equivalent_spellings(self):
        assert parse_rating("5") == parse_rating("5.0") == ClassLabel(5.0)

    def test_rejects_text(self):
        with pytest.raises(ValueError):
            parse_rating("great")

    def test_label_text(self):
        assert str(ClassLabel(3.0)) == "3.0"


class TestHaversine:
    """Test cases for haversine_m."""

    def test_one_degree_of_latitude(self):
        """One degree along a meridian is R * pi / 180."""
        distance = haversine_m(GeoPoint(0.0, 0.0), GeoPoint(1.0, 0.0))
        assert distance == pytest.approx(6_371_000.0 * math.pi / 180.0, rel=1e-12)

    def test_same_point(self):
        assert haversine_m(GeoPoint(41.9, 12.5), GeoPoint(41.9, 12.5)) == 0.0

    def test_symmetric(self):
        a, b = GeoPoint(48.8584, 2.2945), GeoPoint(48.8606, 2.3376)
        assert haversine_m(a, b) == pytest.approx(haversine_m(b, a))

    def test_antimeridian(self):
        """Points across the antimeridian are close."""
        assert haversine_m(GeoPoint(0.0, 179.9995), GeoPoint(0.0, -179.9995)) < 120.0

    def test_antipodal_points(self):
        """Antipodes are half a circumference apart."""
        assert haversine_m(GeoPoint(0.0, 0.0), GeoPoint(0.0, 180.0)) == pytest.approx(math.pi * 6_371_000.0, abs=1.0)

    def test_triangle_inequality(self):
        """d(a, c) <= d(a, b) + d(b, c) on random triples."""
        rng = np.random.default_rng(5)
        for _ in range(500):
            lats = rng.uniform(-90.0, 90.0, size=3)
            lons = rng.uniform(-180.0, 180.0, size=3)
            a, b, c = (GeoPoint(float(lat), float(lon)) for lat, lon in zip(lats, lons))

            direct = haversine_m(a, c)
            detour = haversine_m(a, b) + haversine_m(b, c)

            assert direct <= detour * (1 + 1e-6) + 1e-6


class TestAssignPhotos:
    """Test cases for assign_photos and summarize_join."""

    def test_closed_disk(self):
        """Photos within the radius are assigned, farther ones are not."""
        photos = [
            photo("p1", 45.0, 9.0),
            photo("p2", 45.0005, 9.0),  # about 56 m north
            photo("p3", 45.002, 9.0),  # about 222 m north
        ]
        locations = [location("l1", 45.0, 9.0)]

        assignments = assign_photos(photos, locations, 100.0)

        assert [p.photo_id for p in assignments["l1"]] == ["p1", "p2"]

    def test_photo_on_the_boundary_is_included(self):
        """A photo exactly at the radius belongs to the location."""
        photos = [photo("p1", 0.0, 1.0)]
        locations = [location("l1", 0.0, 0.0)]
        radius = haversine_m(photos[0].point, locations[0].point)

        assert len(assign_photos(photos, locations, radius)["l1"]) == 1

    def test_photo_in_several_locations(self):
        """Overlapping disks each receive the photo."""
        photos = [photo("p1", 45.0, 9.0), photo("p2", 10.0, 10.0)]
        locations = [location("l1", 45.0, 9.0), location("l2", 45.0001, 9.0)]

        assignments = assign_photos(photos, locations, 50.0)
        summary = summarize_join(photos, assignments)

        assert [p.photo_id for p in assignments["l2"]] == ["p1"]
        assert summary.photos == 2
        assert summary.locations == 2
        assert summary.pairs == 2
        assert summary.unassigned_photos == 1
        assert summary.multi_assigned_photos == 1

    def test_every_location_has_an_entry(self):
        """Locations without photos map to an empty list."""
        assignments = assign_photos([], [location("l1", 1.0, 1.0)], 100.0)
        assert assignments == {"l1": []}

    def test_radius_properties(self):
        """Assigned photos lie within the radius, and a larger radius only adds photos."""
        rng = np.random.default_rng(8)
        for _ in range(30):
            photos = [
                photo(f"p{i}", 45.0 + float(dlat), 9.0 + float(dlon))
                for i, (dlat, dlon) in enumerate(rng.uniform(-0.01, 0.01, size=(40, 2)))
            ]
            locations = [
                location(f"l{j}", 45.0 + float(dlat), 9.0 + float(dlon))
                for j, (dlat, dlon) in enumerate(rng.uniform(-0.01, 0.01, size=(5, 2)))
            ]
            small, large = sorted(rng.uniform(10.0, 1500.0, size=2))

            narrow = assign_photos(photos, locations, small)
            wide = assign_photos(photos, locations, large)

            for loc in locations:
                for assigned in narrow[loc.location_id]:
                    assert haversine_m(assigned.point, loc.point) <= small
                narrow_ids = {p.photo_id for p in narrow[loc.location_id]}
                assert narrow_ids <= {p.photo_id for p in wide[loc.location_id]}

    def test_rejects_non_positive_radius(self):
        with pytest.raises(ValueError):
            assign_photos([], [], 0.0)
