#include <algorithm>
#include <cmath>

#include "chromasim/biomarkers.hpp"
#include "chromasim/kernels.hpp"

namespace chromasim {
namespace {

const std::vector<double>& highpass() {
    static const std::vector<double> g = [] {
        const auto& h = db4_lowpass();
        std::vector<double> out(h.size());
        for (std::size_t k = 0; k < h.size(); ++k) out[k] = (k % 2 ? -1.0 : 1.0) * h[h.size() - 1 - k];
        return out;
    }();
    return g;
}

void analyze(const double* x, std::size_t stride, std::size_t n, double* a, double* d, std::size_t ostride) {
    const auto& h = db4_lowpass();
    const auto& g = highpass();
    for (std::size_t k = 0; k < n / 2; ++k) {
        double sa = 0.0, sd = 0.0;
        for (std::size_t m = 0; m < h.size(); ++m) {
            const double v = x[((2 * k + m) % n) * stride];
            sa += h[m] * v;
            sd += g[m] * v;
        }
        a[k * ostride] = sa;
        d[k * ostride] = sd;
    }
}

void synthesize(const double* a, const double* d, std::size_t istride, std::size_t n, double* x, std::size_t stride) {
    const auto& h = db4_lowpass();
    const auto& g = highpass();
    for (std::size_t i = 0; i < n; ++i) x[i * stride] = 0.0;
    for (std::size_t k = 0; k < n / 2; ++k) {
        for (std::size_t m = 0; m < h.size(); ++m) {
            x[((2 * k + m) % n) * stride] += a[k * istride] * h[m] + d[k * istride] * g[m];
        }
    }
}

double pooled_variance(const DwtLevel& lv) {
    double s = 0.0, s2 = 0.0;
    std::size_t n = 0;
    for (const ScalarField* f : {&lv.lh, &lv.hl, &lv.hh}) {
        for (double v : f->values()) s += v, s2 += v * v, ++n;
    }
    const double mean = s / static_cast<double>(n);
    return s2 / static_cast<double>(n) - mean * mean;
}

}  // namespace

const std::vector<double>& db4_lowpass() {
    static const std::vector<double> h{0.23037781330885523, 0.7148465705525415,   0.6308807679295904,
                                       -0.02798376941698385, -0.18703481171888114, 0.030841381835986965,
                                       0.032883011666982945, -0.010597401784997278};
    return h;
}

DwtLevel dwt2_db4(const ScalarField& in) {
    const int w = in.width();
    const int h = in.height();
    if (w < 2 || h < 2 || w % 2 || h % 2) throw DimensionError("DWT needs even dimensions");
    // Rows: [L | H] side by side.
    ScalarField rows(w, h);
    for (int y = 0; y < h; ++y) {
        const double* src = &in(0, y);
        double* dst = &rows(0, y);
        analyze(src, 1, static_cast<std::size_t>(w), dst, dst + w / 2, 1);
    }
    ScalarField cols(w, h);
    for (int x = 0; x < w; ++x) {
        analyze(&rows(x, 0), static_cast<std::size_t>(w), static_cast<std::size_t>(h), &cols(x, 0), &cols(x, h / 2),
                static_cast<std::size_t>(w));
    }
    DwtLevel lv{ScalarField(w / 2, h / 2), ScalarField(w / 2, h / 2), ScalarField(w / 2, h / 2), ScalarField(w / 2, h / 2)};
    for (int y = 0; y < h / 2; ++y) {
        for (int x = 0; x < w / 2; ++x) {
            lv.ll(x, y) = cols(x, y);
            lv.hl(x, y) = cols(x + w / 2, y);
            lv.lh(x, y) = cols(x, y + h / 2);
            lv.hh(x, y) = cols(x + w / 2, y + h / 2);
        }
    }
    return lv;
}

ScalarField idwt2_db4(const DwtLevel& lv) {
    const int w = 2 * lv.ll.width();
    const int h = 2 * lv.ll.height();
    ScalarField cols(w, h);
    for (int y = 0; y < h / 2; ++y) {
        for (int x = 0; x < w / 2; ++x) {
            cols(x, y) = lv.ll(x, y);
            cols(x + w / 2, y) = lv.hl(x, y);
            cols(x, y + h / 2) = lv.lh(x, y);
            cols(x + w / 2, y + h / 2) = lv.hh(x, y);
        }
    }
    ScalarField rows(w, h);
    for (int x = 0; x < w; ++x) {
        synthesize(&cols(x, 0), &cols(x, h / 2), static_cast<std::size_t>(w), static_cast<std::size_t>(h), &rows(x, 0),
                   static_cast<std::size_t>(w));
    }
    ScalarField out(w, h);
    for (int y = 0; y < h; ++y) {
        synthesize(&rows(0, y), &rows(w / 2, y), 1, static_cast<std::size_t>(w), &out(0, y), 1);
    }
    return out;
}

double variance_slope_field(const ScalarField& patch) {
    if (patch.width() != patch.height() || !is_power_of_two(patch.width()) || patch.width() < 32) {
        throw DimensionError("variance_slope needs a dyadic square of side >= 32");
    }
    ScalarField cur = patch;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int j = 1; j <= 4; ++j) {
        DwtLevel lv = dwt2_db4(cur);
        const double var = pooled_variance(lv);
        if (!(var > 1e-24)) throw DegenerateError("detail variance vanishes");
        const double lx = std::log(std::ldexp(1.0, j));
        const double ly = std::log(var);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
        cur = std::move(lv.ll);
    }
    return (4.0 * sxy - sx * sy) / (4.0 * sxx - sx * sx);
}

ScalarField nucleus_patch(const ScalarField& plane, const InstanceMask& mask, std::uint16_t label) {
    if (plane.width() != mask.width() || plane.height() != mask.height()) {
        throw InputError("image and mask dimensions differ");
    }
    int xmin = mask.width(), ymin = mask.height(), xmax = -1, ymax = -1;
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (mask(x, y) != label) continue;
            xmin = std::min(xmin, x), xmax = std::max(xmax, x);
            ymin = std::min(ymin, y), ymax = std::max(ymax, y);
        }
    }
    if (xmax < 0) throw MeasurementError("label not present in mask");
    const int bw = xmax - xmin + 1;
    const int bh = ymax - ymin + 1;
    const int side = next_power_of_two(std::max({bw, bh, 32}));
    const int ox = xmin - (side - bw) / 2;
    const int oy = ymin - (side - bh) / 2;

    ScalarField patch(side, side);
    BinaryMask inside(side, side);
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            const int gx = ox + x, gy = oy + y;
            if (gx < 0 || gy < 0 || gx >= mask.width() || gy >= mask.height() || mask(gx, gy) != label) continue;
            inside(x, y) = 1;
            patch(x, y) = plane(gx, gy);
        }
    }
    const auto dm = kernels::distance_transform(inside);
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            if (inside(x, y)) continue;
            const auto q = dm.nearest[static_cast<std::size_t>(y) * static_cast<std::size_t>(side) + static_cast<std::size_t>(x)];
            const int qx = static_cast<int>(q % side), qy = static_cast<int>(q / side);
            const int mx = 2 * qx - x, my = 2 * qy - y;
            const bool mirrored = mx >= 0 && my >= 0 && mx < side && my < side && inside(mx, my);
            patch(x, y) = mirrored ? patch(mx, my) : patch(qx, qy);
        }
    }
    return patch;
}

double variance_slope(const ScalarField& plane, const InstanceMask& mask, std::uint16_t label) {
    return variance_slope_field(nucleus_patch(plane, mask, label));
}

}  // namespace chromasim
