#include <algorithm>
#include <array>
#include <cmath>

#include "chromasim/biomarkers.hpp"

namespace chromasim {
namespace {

constexpr int kOtsuBins = 256;
constexpr int kEntropyBins = 16;

int otsu_bin(double v) { return std::clamp(static_cast<int>(std::floor(std::clamp(v, 0.0, 1.0) * kOtsuBins)), 0, kOtsuBins - 1); }

}  // namespace

double otsu_threshold(const std::vector<double>& values) {
    std::array<double, kOtsuBins> hist{};
    for (double v : values) hist[static_cast<std::size_t>(otsu_bin(v))] += 1.0;
    const double total = static_cast<double>(values.size());
    double sum_all = 0.0;
    for (int i = 0; i < kOtsuBins; ++i) sum_all += i * hist[static_cast<std::size_t>(i)];

    double w0 = 0.0, sum0 = 0.0, best = 0.0;
    int best_t = -1;
    for (int t = 0; t < kOtsuBins - 1; ++t) {
        w0 += hist[static_cast<std::size_t>(t)];
        sum0 += t * hist[static_cast<std::size_t>(t)];
        const double w1 = total - w0;
        if (w0 <= 0.0 || w1 <= 0.0) continue;
        const double m0 = sum0 / w0;
        const double m1 = (sum_all - sum0) / w1;
        const double between = w0 * w1 * (m0 - m1) * (m0 - m1);
        if (between > best) {  // strict: ties keep the lower threshold
            best = between;
            best_t = t;
        }
    }
    if (best_t < 0) throw DegenerateError("Otsu: histogram has a single occupied bin");
    return static_cast<double>(best_t + 1) / kOtsuBins;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw MeasurementError("percentile of an empty set");
    std::sort(values.begin(), values.end());
    const double pos = std::clamp(q, 0.0, 100.0) / 100.0 * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

IntensityContext intensity_context(const ScalarField& plane, const InstanceMask& mask) {
    if (plane.width() != mask.width() || plane.height() != mask.height()) {
        throw InputError("image and mask dimensions differ");
    }
    IntensityContext ctx;
    ctx.p1 = percentile(plane.values(), 1.0);
    ctx.p99 = percentile(plane.values(), 99.0);
    std::vector<double> extra;
    for (std::size_t i = 0; i < plane.size(); ++i) {
        if (mask.values()[i] == 0) extra.push_back(plane.values()[i]);
    }
    if (extra.empty()) throw MeasurementError("no extranuclear pixels");
    double mean = 0.0;
    for (double v : extra) mean += v;
    mean /= static_cast<double>(extra.size());
    try {
        const double t = otsu_threshold(extra);
        double s = 0.0;
        std::size_t n = 0;
        for (double v : extra) {
            if (otsu_bin(v) < static_cast<int>(std::lround(t * kOtsuBins))) s += v, ++n;
        }
        ctx.background = n ? s / static_cast<double>(n) : mean;
        ctx.background_fallback = n == 0;
    } catch (const DegenerateError&) {
        ctx.background = mean;
        ctx.background_fallback = true;
    }
    return ctx;
}

double sigma_intensity(const ScalarField& plane, const InstanceMask& mask, std::uint16_t label,
                       const IntensityContext& ctx) {
    double s = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < plane.size(); ++i) {
        if (mask.values()[i] == label) s += plane.values()[i], ++n;
    }
    if (n == 0) throw MeasurementError("empty nucleus");
    const double span = ctx.p99 - ctx.p1;
    if (span <= 0.0) throw DegenerateError("percentile span is zero");
    return std::clamp((s / static_cast<double>(n) - ctx.background) / span, 0.0, 1.0);
}

double entropy_bits(const std::vector<double>& values) {
    if (values.empty()) throw MeasurementError("entropy of an empty set");
    std::array<std::size_t, kEntropyBins> hist{};
    for (double v : values) {
        const int b = std::min(kEntropyBins - 1, static_cast<int>(std::floor(16.0 * std::clamp(v, 0.0, 1.0))));
        ++hist[static_cast<std::size_t>(b)];
    }
    const double n = static_cast<double>(values.size());
    double h = 0.0;
    for (std::size_t c : hist) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / n;
        h -= p * std::log2(p);
    }
    return h;
}

double chromatin_entropy(const ScalarField& plane, const InstanceMask& mask, std::uint16_t label,
                         const IntensityContext& ctx) {
    const double span = ctx.p99 - ctx.p1;
    std::vector<double> v;
    for (std::size_t i = 0; i < plane.size(); ++i) {
        if (mask.values()[i] != label) continue;
        v.push_back(span > 0.0 ? (plane.values()[i] - ctx.p1) / span : 0.0);
    }
    return entropy_bits(v);
}

}  // namespace chromasim
