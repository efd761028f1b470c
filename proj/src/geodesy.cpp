// Copyright (c) 2026 afarsim contributors
// SPDX-License-Identifier: Apache-2.0

#include "afar/geodesy.hpp"

#include <algorithm>
#include <stdexcept>

namespace afar {

EnuPoint to_enu(const GeoPoint& p, const GeoPoint& origin) {
    const double x = kEarthRadiusM * deg2rad(p.lon - origin.lon) * std::cos(deg2rad(origin.lat));
    const double y = kEarthRadiusM * deg2rad(p.lat - origin.lat);
    return {x, y, p.alt - origin.alt};
}

GeoPoint to_geo(const EnuPoint& e, const GeoPoint& origin) {
    const double lat = origin.lat + rad2deg(e.y / kEarthRadiusM);
    const double lon = origin.lon + rad2deg(e.x / (kEarthRadiusM * std::cos(deg2rad(origin.lat))));
    return {lat, lon, e.z + origin.alt};
}

double horizontal_distance(const GeoPoint& a, const GeoPoint& b) {
    const double coslat = std::cos(deg2rad(0.5 * (a.lat + b.lat)));
    const double x = kEarthRadiusM * deg2rad(b.lon - a.lon) * coslat;
    const double y = kEarthRadiusM * deg2rad(b.lat - a.lat);
    return std::hypot(x, y);
}

double distance_3d(const GeoPoint& a, const GeoPoint& b) {
    return std::hypot(horizontal_distance(a, b), b.alt - a.alt);
}

std::optional<EnuPoint> segment_intersection(const Segment& s1, const Segment& s2) {
    const double d1x = s1.b.x - s1.a.x, d1y = s1.b.y - s1.a.y;
    const double d2x = s2.b.x - s2.a.x, d2y = s2.b.y - s2.a.y;
    const double cross = d1x * d2y - d1y * d2x;
    const double scale = std::hypot(d1x, d1y) * std::hypot(d2x, d2y);
    if (std::abs(cross) <= 1e-12 * scale) return std::nullopt;  // parallel or collinear

    const double qpx = s2.a.x - s1.a.x, qpy = s2.a.y - s1.a.y;
    const double t = (qpx * d2y - qpy * d2x) / cross;
    const double u = (qpx * d1y - qpy * d1x) / cross;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
    return EnuPoint{s1.a.x + t * d1x, s1.a.y + t * d1y, 0.0};
}

bool contains(const GeoRect& r, const GeoPoint& p, bool check_alt) {
    if (p.lat < r.south || p.lat > r.north || p.lon < r.west || p.lon > r.east) return false;
    if (check_alt && (p.alt < r.alt_min || p.alt > r.alt_max)) return false;
    return true;
}

GeoPoint clamp_to_rect(const GeoRect& r, const GeoPoint& p) {
    return {std::clamp(p.lat, r.south, r.north),
            std::clamp(p.lon, r.west, r.east),
            std::clamp(p.alt, r.alt_min, r.alt_max)};
}

GeoPoint rect_corner(const GeoRect& r, int corner_index) {
    switch (corner_index) {
        case 0: return {r.south, r.west, r.alt_min};
        case 1: return {r.south, r.east, r.alt_min};
        case 2: return {r.north, r.east, r.alt_min};
        case 3: return {r.north, r.west, r.alt_min};
        default: throw std::out_of_range("rect_corner: corner_index must be 0..3");
    }
}

GeoPoint rect_center(const GeoRect& r) {
    return {0.5 * (r.south + r.north), 0.5 * (r.west + r.east), 0.5 * (r.alt_min + r.alt_max)};
}

GeoRect rect_quadrant(const GeoRect& r, int corner_index) {
    const double mid_lat = 0.5 * (r.south + r.north);
    const double mid_lon = 0.5 * (r.west + r.east);
    GeoRect q = r;
    switch (corner_index) {
        case 0: q.north = mid_lat; q.east = mid_lon; break;  // SW
        case 1: q.north = mid_lat; q.west = mid_lon; break;  // SE
        case 2: q.south = mid_lat; q.west = mid_lon; break;  // NE
        case 3: q.south = mid_lat; q.east = mid_lon; break;  // NW
        default: throw std::out_of_range("rect_quadrant: corner_index must be 0..3");
    }
    return q;
}

std::optional<GeoRect> rect_overlap(const GeoRect& a, const GeoRect& b) {
    GeoRect o = a;
    o.south = std::max(a.south, b.south);
    o.north = std::min(a.north, b.north);
    o.west = std::max(a.west, b.west);
    o.east = std::min(a.east, b.east);
    if (o.south >= o.north || o.west >= o.east) return std::nullopt;
    return o;
}

} // namespace afar
