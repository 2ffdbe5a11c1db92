#include <algorithm>
#include <cmath>
#include <set>

#include "chromasim/kernels.hpp"
#include "chromasim/nucleus_geometry.hpp"

namespace chromasim {

void rasterize_polygon(InstanceMask& mask, const Polygon& poly, std::uint16_t label) {
    const auto v = open_vertices(poly);
    const std::size_t n = v.size();
    if (n < 3) return;
    const BoundingBox box = bounding_box(poly);
    const int y_begin = std::max(0, static_cast<int>(std::floor(box.y0 - 0.5)));
    const int y_end = std::min(mask.height() - 1, static_cast<int>(std::ceil(box.y1)));
    std::vector<double> xs;
    for (int y = y_begin; y <= y_end; ++y) {
        const double yc = y + 0.5;
        xs.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const Point a = v[i];
            const Point b = v[(i + 1) % n];
            // Half-open in y so a vertex on the scanline is counted once.
            if ((a.y <= yc && yc < b.y) || (b.y <= yc && yc < a.y)) {
                xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
            }
        }
        std::sort(xs.begin(), xs.end());
        for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
            // Pixel x is inside when its centre x + 0.5 lies in [xs[k], xs[k+1]).
            const int x0 = std::max(0, static_cast<int>(std::ceil(xs[k] - 0.5)));
            const int x1 = std::min(mask.width() - 1, static_cast<int>(std::ceil(xs[k + 1] - 0.5)) - 1);
            for (int x = x0; x <= x1; ++x) {
                if (mask(x, y) == 0) mask(x, y) = label;
            }
        }
    }
}

InstanceMask rasterize_mask(const FieldLayout& layout) {
    InstanceMask mask(layout.width, layout.height);
    for (const auto& n : layout.nuclei) rasterize_polygon(mask, n.boundary, static_cast<std::uint16_t>(n.id));
    return mask;
}

std::vector<std::uint16_t> mask_labels(const InstanceMask& mask) {
    std::vector<bool> seen(65536, false);
    for (auto v : mask.values()) seen[v] = true;
    std::vector<std::uint16_t> out;
    for (std::size_t l = 1; l < seen.size(); ++l) {
        if (seen[l]) out.push_back(static_cast<std::uint16_t>(l));
    }
    return out;
}

std::size_t label_area(const InstanceMask& mask, std::uint16_t label) {
    return static_cast<std::size_t>(std::count(mask.values().begin(), mask.values().end(), label));
}

bool is_four_connected(const InstanceMask& mask, std::uint16_t label) {
    const std::size_t total = label_area(mask, label);
    if (total == 0) return false;
    const auto it = std::find(mask.values().begin(), mask.values().end(), label);
    const auto start = static_cast<std::size_t>(it - mask.values().begin());
    std::vector<bool> seen(mask.size(), false);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    std::size_t reached = 0;
    const int w = mask.width();
    while (!stack.empty()) {
        const std::size_t i = stack.back();
        stack.pop_back();
        ++reached;
        const int x = static_cast<int>(i % static_cast<std::size_t>(w));
        const int y = static_cast<int>(i / static_cast<std::size_t>(w));
        const int nb[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}};
        for (const auto& q : nb) {
            if (!mask.contains(q[0], q[1])) continue;
            const std::size_t j = mask.index(q[0], q[1]);
            if (!seen[j] && mask.values()[j] == label) {
                seen[j] = true;
                stack.push_back(j);
            }
        }
    }
    return reached == total;
}

namespace {

struct Window {
    int x0, y0, x1, y1;  // inclusive, may extend past the image
};

std::vector<Window> label_windows(const InstanceMask& mask, int pad) {
    std::vector<Window> win(65536, Window{1 << 30, 1 << 30, -(1 << 30), -(1 << 30)});
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            const auto l = mask(x, y);
            if (l == 0) continue;
            Window& w = win[l];
            w.x0 = std::min(w.x0, x);
            w.y0 = std::min(w.y0, y);
            w.x1 = std::max(w.x1, x);
            w.y1 = std::max(w.y1, y);
        }
    }
    for (auto& w : win) {
        w.x0 -= pad;
        w.y0 -= pad;
        w.x1 += pad;
        w.y1 += pad;
    }
    return win;
}

InstanceMask erode(const InstanceMask& mask, int radius) {
    InstanceMask out(mask.width(), mask.height());
    const auto labels = mask_labels(mask);
    const auto windows = label_windows(mask, radius + 1);
    const double r2 = static_cast<double>(radius) * radius;
    for (auto l : labels) {
        const Window& w = windows[l];
        const int ww = w.x1 - w.x0 + 1;
        const int wh = w.y1 - w.y0 + 1;
        // Features: every window pixel not carrying this label, including
        // virtual pixels beyond the image edge.
        BinaryMask other(ww, wh);
        for (int y = 0; y < wh; ++y) {
            for (int x = 0; x < ww; ++x) {
                const int ix = x + w.x0;
                const int iy = y + w.y0;
                other(x, y) = !mask.contains(ix, iy) || mask(ix, iy) != l;
            }
        }
        const auto dist = kernels::distance_transform(other);
        for (int y = 0; y < wh; ++y) {
            for (int x = 0; x < ww; ++x) {
                const int ix = x + w.x0;
                const int iy = y + w.y0;
                if (mask.contains(ix, iy) && mask(ix, iy) == l && dist.dist2(x, y) > r2) out(ix, iy) = l;
            }
        }
    }
    return out;
}

InstanceMask dilate(const InstanceMask& mask, int radius) {
    BinaryMask features(mask.width(), mask.height());
    for (std::size_t i = 0; i < mask.size(); ++i) features.values()[i] = mask.values()[i] != 0;
    const auto dist = kernels::distance_transform(features);
    InstanceMask out(mask);
    const double r2 = static_cast<double>(radius) * radius;
    for (std::size_t i = 0; i < mask.size(); ++i) {
        if (mask.values()[i] != 0 || dist.nearest[i] < 0) continue;
        if (dist.dist2.values()[i] <= r2) out.values()[i] = mask.values()[static_cast<std::size_t>(dist.nearest[i])];
    }
    return out;
}

}  // namespace

PerturbResult perturb_mask(const InstanceMask& mask, int offset) {
    if (offset == 0 || std::abs(offset) > 5) throw ParameterError("perturb offset must satisfy 1 <= |offset| <= 5");
    PerturbResult res{offset > 0 ? dilate(mask, offset) : erode(mask, -offset), {}};
    if (offset < 0) {
        const auto before = mask_labels(mask);
        const auto after = mask_labels(res.mask);
        std::set_difference(before.begin(), before.end(), after.begin(), after.end(),
                            std::back_inserter(res.annihilated));
    }
    return res;
}

double min_label_clearance(const InstanceMask& mask, double cap) {
    const int pad = static_cast<int>(std::ceil(cap)) + 1;
    const auto windows = label_windows(mask, pad);
    double best2 = cap * cap;
    for (auto l : mask_labels(mask)) {
        const Window& w = windows[l];
        const int x0 = std::max(0, w.x0);
        const int y0 = std::max(0, w.y0);
        const int x1 = std::min(mask.width() - 1, w.x1);
        const int y1 = std::min(mask.height() - 1, w.y1);
        BinaryMask mine(x1 - x0 + 1, y1 - y0 + 1);
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) mine(x - x0, y - y0) = mask(x, y) == l;
        }
        const auto dist = kernels::distance_transform(mine);
        for (int y = y0; y <= y1; ++y) {
            for (int x = x0; x <= x1; ++x) {
                const auto v = mask(x, y);
                if (v != 0 && v != l) best2 = std::min(best2, dist.dist2(x - x0, y - y0));
            }
        }
    }
    return std::sqrt(best2);
}

}  // namespace chromasim
