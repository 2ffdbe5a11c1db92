#include <algorithm>
#include <cmath>

#include "chromasim/common.hpp"
#include "chromasim/geometry.hpp"

namespace chromasim {

bool is_closed(const Polygon& p) {
    return p.size() >= 2 && p.front().x == p.back().x && p.front().y == p.back().y;
}

Polygon close_polygon(Polygon p) {
    if (!p.empty() && !is_closed(p)) p.push_back(p.front());
    return p;
}

std::vector<Point> open_vertices(const Polygon& p) {
    if (is_closed(p)) return {p.begin(), p.end() - 1};
    return p;
}

double signed_area(const Polygon& p) {
    const auto v = open_vertices(p);
    const std::size_t n = v.size();
    double a = 0.0;
    for (std::size_t i = 0; i < n; ++i) a += cross(v[i], v[(i + 1) % n]);
    return 0.5 * a;
}

double polygon_area(const Polygon& p) { return std::abs(signed_area(p)); }

double arc_length(const Polygon& p) {
    const auto v = open_vertices(p);
    double len = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) len += norm(v[(i + 1) % v.size()] - v[i]);
    return len;
}

Point polygon_centroid(const Polygon& p) {
    const auto v = open_vertices(p);
    const std::size_t n = v.size();
    double a = 0.0;
    double cx = 0.0;
    double cy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p0 = v[i];
        const Point& p1 = v[(i + 1) % n];
        const double c = cross(p0, p1);
        a += c;
        cx += (p0.x + p1.x) * c;
        cy += (p0.y + p1.y) * c;
    }
    if (std::abs(a) < 1e-12) throw GeometryError("centroid of a zero-area polygon");
    return {cx / (3.0 * a), cy / (3.0 * a)};
}

BoundingBox bounding_box(const Polygon& p) {
    if (p.empty()) throw GeometryError("bounding box of an empty polygon");
    BoundingBox b{p[0].x, p[0].y, p[0].x, p[0].y};
    for (const auto& q : p) {
        b.x0 = std::min(b.x0, q.x);
        b.y0 = std::min(b.y0, q.y);
        b.x1 = std::max(b.x1, q.x);
        b.y1 = std::max(b.y1, q.y);
    }
    return b;
}

Polygon translate(const Polygon& p, Point d) {
    Polygon out(p);
    for (auto& q : out) q = q + d;
    return out;
}

Polygon scale_about(const Polygon& p, Point c, double s) {
    Polygon out(p);
    for (auto& q : out) q = c + s * (q - c);
    return out;
}

namespace {

int orientation(Point a, Point b, Point c) {
    const double v = cross(b - a, c - a);
    return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
}

bool on_segment(Point a, Point b, Point q) {
    return std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= q.y &&
           q.y <= std::max(a.y, b.y);
}

bool segments_intersect(Point a, Point b, Point c, Point d) {
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

}  // namespace

bool is_simple(const Polygon& p) {
    const auto v = open_vertices(p);
    const std::size_t n = v.size();
    if (n < 3) return false;
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = v[i];
        const Point b = v[(i + 1) % n];
        if (a.x == b.x && a.y == b.y) return false;
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;  // adjacent through the closing edge
            if (segments_intersect(a, b, v[j], v[(j + 1) % n])) return false;
        }
    }
    return true;
}

double point_segment_distance(Point p, Point a, Point b) {
    const Point ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) return norm(p - a);
    const double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return norm(p - (a + t * ab));
}

double segment_distance(Point a, Point b, Point c, Point d) {
    if (segments_intersect(a, b, c, d)) return 0.0;
    return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d), point_segment_distance(c, a, b),
                     point_segment_distance(d, a, b)});
}

bool point_in_polygon(const Polygon& p, Point q) {
    const auto v = open_vertices(p);
    const std::size_t n = v.size();
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point a = v[i];
        const Point b = v[j];
        if ((a.y > q.y) != (b.y > q.y)) {
            const double x = a.x + (q.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (q.x < x) inside = !inside;
        }
    }
    return inside;
}

namespace {

struct Edge {
    Point a, b;
};

std::vector<Edge> edges_near(const std::vector<Point>& v, const BoundingBox& box, double cutoff) {
    std::vector<Edge> out;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point a = v[i];
        const Point b = v[(i + 1) % n];
        if (std::max(a.x, b.x) < box.x0 - cutoff || std::min(a.x, b.x) > box.x1 + cutoff ||
            std::max(a.y, b.y) < box.y0 - cutoff || std::min(a.y, b.y) > box.y1 + cutoff) {
            continue;
        }
        out.push_back({a, b});
    }
    return out;
}

}  // namespace

double boundary_clearance(const Polygon& a, const Polygon& b, double cutoff) {
    const auto va = open_vertices(a);
    const auto vb = open_vertices(b);
    if (point_in_polygon(a, vb.front()) || point_in_polygon(b, va.front())) return 0.0;
    const auto ea = edges_near(va, bounding_box(b), cutoff);
    const auto eb = edges_near(vb, bounding_box(a), cutoff);
    double best = cutoff;
    for (const auto& e : ea) {
        for (const auto& f : eb) {
            best = std::min(best, segment_distance(e.a, e.b, f.a, f.b));
            if (best == 0.0) return 0.0;
        }
    }
    return best;
}

double circumradius(const Polygon& p, Point c) {
    double r = 0.0;
    for (const auto& q : p) r = std::max(r, norm(q - c));
    return r;
}

double inradius(const Polygon& p, Point c) {
    const auto v = open_vertices(p);
    double r = 1e300;
    for (std::size_t i = 0; i < v.size(); ++i) r = std::min(r, point_segment_distance(c, v[i], v[(i + 1) % v.size()]));
    return r;
}

std::vector<Point> resample_arc_length(const Polygon& p, int n) {
    const auto v = open_vertices(p);
    const std::size_t m = v.size();
    if (m < 2 || n < 1) throw GeometryError("cannot resample a degenerate polygon");
    std::vector<double> cum(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) cum[i + 1] = cum[i] + norm(v[(i + 1) % m] - v[i]);
    const double total = cum[m];
    if (!(total > 0.0)) throw GeometryError("cannot resample a zero-length polygon");
    std::vector<Point> out;
    out.reserve(static_cast<std::size_t>(n));
    std::size_t seg = 0;
    for (int i = 0; i < n; ++i) {
        const double s = total * i / n;
        while (seg + 1 < m && cum[seg + 1] <= s) ++seg;
        const double len = cum[seg + 1] - cum[seg];
        const double t = len > 0.0 ? (s - cum[seg]) / len : 0.0;
        out.push_back(v[seg] + t * (v[(seg + 1) % m] - v[seg]));
    }
    return out;
}

}  // namespace chromasim
