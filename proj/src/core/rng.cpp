#include "chromasim/rng.hpp"

#include <cmath>
#include <numbers>

#include "chromasim/common.hpp"

namespace chromasim {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t index) {
    return mix64(mix64(master_seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

SeededRng::SeededRng(std::uint64_t master_seed, std::uint64_t stream_id)
    : master_seed_(master_seed),
      stream_id_(stream_id),
      engine_(mix64(master_seed ^ mix64(stream_id ^ 0xd1b54a32d192ed03ULL))) {}

SeededRng SeededRng::derive(std::uint64_t tag) const {
    return SeededRng(master_seed_, mix64(stream_id_ ^ mix64(tag + 0x8cb92ba72f3d8dd7ULL)));
}

double SeededRng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::uint64_t SeededRng::below(std::uint64_t n) {
    if (n == 0) throw ParameterError("below(0) has an empty range");
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
}

double SeededRng::normal() {
    // Box-Muller; one value per call so the stream position is a function of
    // the number of draws alone.
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double SeededRng::lognormal(double mu, double sigma) { return std::exp(mu + sigma * normal()); }

double SeededRng::gamma(double shape, double scale) {
    if (shape <= 0.0 || scale <= 0.0) throw ParameterError("gamma shape and scale must be positive");
    if (shape < 1.0) {
        // Boost: Gamma(a) = Gamma(a + 1) * U^(1/a).
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    // Marsaglia & Tsang (2000).
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
        double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = uniform();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
    }
}

double SeededRng::beta(double a, double b) {
    const double x = gamma(a, 1.0);
    const double y = gamma(b, 1.0);
    return x / (x + y);
}

}  // namespace chromasim
