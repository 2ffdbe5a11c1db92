#include <cmath>

#include "chromasim/nucleus_geometry.hpp"

namespace chromasim {

Polygon smooth_boundary_bspline(const Polygon& points, double knot_spacing) {
    if (!(knot_spacing > 0.0)) throw ParameterError("knot_spacing must be positive");
    const auto v = open_vertices(points);
    if (v.size() < 4) throw GeometryError("B-spline smoothing needs at least 4 vertices");
    const double length = arc_length(points);
    if (!(length > 1e-9)) throw GeometryError("B-spline smoothing of a zero-length boundary");

    const int m = std::max(4, static_cast<int>(std::lround(length / knot_spacing)));
    const std::vector<Point> q = resample_arc_length(points, m);

    // Interpolation conditions (P[j-1] + 4 P[j] + P[j+1]) / 6 = Q[j] form a
    // cyclic, strictly diagonally dominant system; Gauss-Seidel halves the
    // error each sweep.
    std::vector<Point> p(q);
    const auto mm = static_cast<std::size_t>(m);
    for (int sweep = 0; sweep < 200; ++sweep) {
        double change = 0.0;
        for (std::size_t j = 0; j < mm; ++j) {
            const Point& prev = p[(j + mm - 1) % mm];
            const Point& next = p[(j + 1) % mm];
            const Point np = 0.25 * (6.0 * q[j] - prev - next);
            change = std::max(change, norm(np - p[j]));
            p[j] = np;
        }
        if (change < 1e-13) break;
    }

    constexpr int kSamplesPerSpan = 16;
    Polygon dense;
    dense.reserve(mm * kSamplesPerSpan + 1);
    for (std::size_t j = 0; j < mm; ++j) {
        const Point& p0 = p[(j + mm - 1) % mm];
        const Point& p1 = p[j];
        const Point& p2 = p[(j + 1) % mm];
        const Point& p3 = p[(j + 2) % mm];
        for (int s = 0; s < kSamplesPerSpan; ++s) {
            const double t = static_cast<double>(s) / kSamplesPerSpan;
            const double t2 = t * t;
            const double t3 = t2 * t;
            const double b0 = (1.0 - t) * (1.0 - t) * (1.0 - t) / 6.0;
            const double b1 = (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0;
            const double b2 = (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0;
            const double b3 = t3 / 6.0;
            dense.push_back(b0 * p0 + b1 * p1 + b2 * p2 + b3 * p3);
        }
    }
    dense = close_polygon(std::move(dense));
    const int n_out = std::max(64, static_cast<int>(std::lround(arc_length(dense))));
    return close_polygon(resample_arc_length(dense, n_out));
}

}  // namespace chromasim
