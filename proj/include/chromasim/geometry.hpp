#pragma once

#include <cmath>
#include <vector>

namespace chromasim {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
inline Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
inline Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }

/// Closed polygon stored with first vertex == last vertex.
using Polygon = std::vector<Point>;

struct BoundingBox {
    double x0, y0, x1, y1;
};

bool is_closed(const Polygon& p);
/// Appends the first vertex if missing.
Polygon close_polygon(Polygon p);
/// Vertices without the closing duplicate.
std::vector<Point> open_vertices(const Polygon& p);

double signed_area(const Polygon& p);
double polygon_area(const Polygon& p);
double arc_length(const Polygon& p);
Point polygon_centroid(const Polygon& p);
BoundingBox bounding_box(const Polygon& p);

Polygon translate(const Polygon& p, Point d);
Polygon scale_about(const Polygon& p, Point c, double s);

/// No two non-adjacent edges intersect (O(n^2) sweep).
bool is_simple(const Polygon& p);

double point_segment_distance(Point p, Point a, Point b);
double segment_distance(Point a, Point b, Point c, Point d);

/// Exact minimum distance between two polygon boundaries (0 if they cross).
/// Edges farther than `cutoff` from the other shape's hull box are skipped, so
/// results above cutoff are only lower-bounded by it.
double boundary_clearance(const Polygon& a, const Polygon& b, double cutoff = 1e300);

bool point_in_polygon(const Polygon& p, Point q);

/// Max distance from `c` to any vertex; min distance from `c` to the boundary.
double circumradius(const Polygon& p, Point c);
double inradius(const Polygon& p, Point c);

/// Points at equal arc-length spacing, starting at vertex 0; open output.
std::vector<Point> resample_arc_length(const Polygon& p, int n);

}  // namespace chromasim
