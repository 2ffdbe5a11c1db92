#include <array>
#include <cmath>
#include <numbers>

#include "chromasim/biomarkers.hpp"
#include "chromasim/kernels.hpp"

namespace chromasim {
namespace {

// Clockwise on screen (y down): E, SE, S, SW, W, NW, N, NE.
constexpr std::array<int, 8> kDx{1, 1, 0, -1, -1, -1, 0, 1};
constexpr std::array<int, 8> kDy{0, 1, 1, 1, 0, -1, -1, -1};

int direction_of(int dx, int dy) {
    for (int d = 0; d < 8; ++d) {
        if (kDx[d] == dx && kDy[d] == dy) return d;
    }
    throw GeometryError("boundary trace: non-adjacent step");
}

// Local binary grid with a one-pixel background frame.
struct LocalGrid {
    int x0 = 0, y0 = 0, w = 0, h = 0;
    std::vector<std::uint8_t> on;
    bool at(int x, int y) const { return x >= 0 && y >= 0 && x < w && y < h && on[static_cast<std::size_t>(y * w + x)]; }
};

// Moore-neighbour trace of the component containing `start` (its top-left
// pixel). Returns pixel centres in local coordinates, not repeated at the end.
std::vector<Point> moore_trace(const LocalGrid& g, int sx, int sy) {
    std::vector<std::pair<int, int>> path{{sx, sy}};
    int cx = sx, cy = sy;
    int bx = sx - 1, by = sy;  // west of the top-left pixel is background
    const std::size_t guard = 4 * g.on.size() + 16;
    for (std::size_t it = 0; it < guard; ++it) {
        const int bdir = direction_of(bx - cx, by - cy);
        int nx = -1, ny = -1;
        int prevx = bx, prevy = by;
        for (int k = 1; k <= 8; ++k) {
            const int d = (bdir + k) % 8;
            const int tx = cx + kDx[d];
            const int ty = cy + kDy[d];
            if (g.at(tx, ty)) {
                nx = tx;
                ny = ty;
                break;
            }
            prevx = tx;
            prevy = ty;
        }
        if (nx < 0) break;  // isolated pixel
        if (cx == sx && cy == sy && path.size() > 1 && nx == path[1].first && ny == path[1].second) break;
        bx = prevx;
        by = prevy;
        cx = nx;
        cy = ny;
        path.emplace_back(cx, cy);
    }
    if (path.size() > 1 && path.back() == path.front()) path.pop_back();
    std::vector<Point> pts;
    pts.reserve(path.size());
    for (auto [x, y] : path) pts.push_back({static_cast<double>(x), static_cast<double>(y)});
    return pts;
}

double smoothed_length(const std::vector<Point>& pts) {
    const std::size_t n = pts.size();
    if (n < 2) return 0.0;
    const auto taps = kernels::gaussian_taps(1.0);
    const int r = static_cast<int>(taps.size() / 2);
    std::vector<Point> sm(n);
    for (std::size_t i = 0; i < n; ++i) {
        Point acc{};
        for (int k = -r; k <= r; ++k) {
            const auto j = static_cast<std::size_t>(((static_cast<long>(i) + k) % static_cast<long>(n) + static_cast<long>(n)) %
                                                    static_cast<long>(n));
            acc = acc + taps[static_cast<std::size_t>(k + r)] * pts[j];
        }
        sm[i] = acc;
    }
    double len = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Point d = sm[(i + 1) % n] - sm[i];
        len += std::hypot(d.x, d.y);
    }
    return len;
}

}  // namespace

Morphometrics morphometrics(const InstanceMask& mask, std::uint16_t label) {
    int xmin = mask.width(), ymin = mask.height(), xmax = -1, ymax = -1;
    double sx = 0, sy = 0;
    std::size_t n = 0;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (mask(x, y) != label) continue;
            xmin = std::min(xmin, x), xmax = std::max(xmax, x);
            ymin = std::min(ymin, y), ymax = std::max(ymax, y);
            sx += x, sy += y;
            ++n;
        }
    }
    if (n < 8) throw DegenerateError("region has fewer than 8 pixels");

    Morphometrics m;
    m.area = static_cast<double>(n);
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double cxx = 0, cyy = 0, cxy = 0;
    for (int y = ymin; y <= ymax; ++y) {
        for (int x = xmin; x <= xmax; ++x) {
            if (mask(x, y) != label) continue;
            cxx += (x - mx) * (x - mx);
            cyy += (y - my) * (y - my);
            cxy += (x - mx) * (y - my);
        }
    }
    cxx /= static_cast<double>(n), cyy /= static_cast<double>(n), cxy /= static_cast<double>(n);
    const double tr = 0.5 * (cxx + cyy);
    const double disc = std::sqrt(0.25 * (cxx - cyy) * (cxx - cyy) + cxy * cxy);
    const double l1 = tr + disc;
    const double l2 = std::max(0.0, tr - disc);
    m.eccentricity = l1 > 0.0 ? std::sqrt(std::max(0.0, 1.0 - l2 / l1)) : 0.0;

    LocalGrid g;
    g.x0 = xmin - 1, g.y0 = ymin - 1;
    g.w = xmax - xmin + 3, g.h = ymax - ymin + 3;
    g.on.assign(static_cast<std::size_t>(g.w) * static_cast<std::size_t>(g.h), 0);
    for (int y = ymin; y <= ymax; ++y) {
        for (int x = xmin; x <= xmax; ++x) {
            if (mask(x, y) == label) g.on[static_cast<std::size_t>((y - g.y0) * g.w + (x - g.x0))] = 1;
        }
    }
    // Each 8-connected piece contributes its own outer boundary.
    std::vector<std::uint8_t> seen(g.on.size(), 0);
    m.components = 0;
    for (int y = 0; y < g.h; ++y) {
        for (int x = 0; x < g.w; ++x) {
            const auto idx = static_cast<std::size_t>(y * g.w + x);
            if (!g.on[idx] || seen[idx]) continue;
            ++m.components;
            m.perimeter += smoothed_length(moore_trace(g, x, y)) + std::numbers::pi;
            std::vector<std::pair<int, int>> stack{{x, y}};
            seen[idx] = 1;
            while (!stack.empty()) {
                auto [px, py] = stack.back();
                stack.pop_back();
                for (int d = 0; d < 8; ++d) {
                    const int qx = px + kDx[d], qy = py + kDy[d];
                    if (!g.at(qx, qy)) continue;
                    const auto q = static_cast<std::size_t>(qy * g.w + qx);
                    if (!seen[q]) seen[q] = 1, stack.emplace_back(qx, qy);
                }
            }
        }
    }
    m.circularity = 4.0 * std::numbers::pi * m.area / (m.perimeter * m.perimeter);
    return m;
}

}  // namespace chromasim
