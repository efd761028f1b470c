// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <optional>

namespace afar {

inline constexpr double kEarthRadiusM = 6371000.0;

/// WGS-84 position. Altitude is meters above ground level.
struct GeoPoint {
    double lat = 0.0;  // degrees, [-90, 90]
    double lon = 0.0;  // degrees, [-180, 180]
    double alt = 0.0;  // meters AGL, >= 0
};

/// Local east/north/up offset from some origin, in meters.
struct EnuPoint {
    double x = 0.0;  // east
    double y = 0.0;  // north
    double z = 0.0;  // up

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    double norm2d() const { return std::hypot(x, y); }
};

inline EnuPoint operator+(const EnuPoint& a, const EnuPoint& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline EnuPoint operator-(const EnuPoint& a, const EnuPoint& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline EnuPoint operator*(const EnuPoint& a, double s) { return {a.x * s, a.y * s, a.z * s}; }

/// Axis-aligned geographic rectangle with an altitude band.
/// Boundaries are closed: points on an edge or corner are inside.
struct GeoRect {
    double south = 0.0, west = 0.0;   // degrees
    double north = 0.0, east = 0.0;   // degrees
    double alt_min = 0.0, alt_max = 0.0;  // meters
};

/// 2D line segment in a local ENU frame (z ignored).
struct Segment {
    EnuPoint a;
    EnuPoint b;
};

inline double deg2rad(double d) { return d * 0.017453292519943295; }
inline double rad2deg(double r) { return r * 57.29577951308232; }

/// Equirectangular projection into the tangent plane at `origin`.
/// Accurate to well under a centimeter for the sub-kilometer working areas
/// this simulator uses; keeps all downstream geometry linear.
EnuPoint to_enu(const GeoPoint& p, const GeoPoint& origin);

/// Exact inverse of to_enu under the same projection.
GeoPoint to_geo(const EnuPoint& e, const GeoPoint& origin);

/// Ground (2D) distance in meters. Uses the midpoint latitude for the
/// longitude scale so the result is exactly symmetric in its arguments.
double horizontal_distance(const GeoPoint& a, const GeoPoint& b);

/// 3D separation in meters (equirectangular ground component plus altitude).
double distance_3d(const GeoPoint& a, const GeoPoint& b);

/// Intersection point of two closed 2D segments, or nullopt when they are
/// disjoint, parallel, or collinear (collinear overlap is degenerate for the
/// chord-crossing use case and deliberately reports no intersection).
std::optional<EnuPoint> segment_intersection(const Segment& s1, const Segment& s2);

bool contains(const GeoRect& r, const GeoPoint& p, bool check_alt);

/// Per-axis clamp of lat, lon and altitude into the closed rectangle.
GeoPoint clamp_to_rect(const GeoRect& r, const GeoPoint& p);

/// Corner indexing is SW=0, SE=1, NE=2, NW=3 (counter-clockwise). Returned
/// points carry alt = alt_min.
GeoPoint rect_corner(const GeoRect& r, int corner_index);
GeoPoint rect_center(const GeoRect& r);

/// Quarter-rectangle whose outer corner is the named corner and whose inner
/// corner is the center of r. Altitude band preserved.
GeoRect rect_quadrant(const GeoRect& r, int corner_index);

/// Intersection of the lat/lon footprints; altitude band taken from a.
/// Returns nullopt when the footprints do not overlap.
std::optional<GeoRect> rect_overlap(const GeoRect& a, const GeoRect& b);

} // namespace afar
