#include <algorithm>
#include <cmath>
#include <numbers>

#include "chromasim/field_synthesis.hpp"
#include "chromasim/geometry.hpp"

namespace chromasim {
namespace {

double fade(double t) { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

// Unit gradient for lattice node (i, j); hashed rather than drawn so a layer
// can be evaluated in any pixel order.
Point lattice_gradient(std::int64_t i, std::int64_t j, std::uint64_t seed) {
    const std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(i) * 0x9e3779b97f4a7c15ULL ^
                                               static_cast<std::uint64_t>(j) * 0xc2b2ae3d27d4eb4fULL));
    const double a = 2.0 * std::numbers::pi * (static_cast<double>(h >> 11) * 0x1.0p-53);
    return {std::cos(a), std::sin(a)};
}

double gradient_noise(double u, double v, std::uint64_t seed) {
    const double fu = std::floor(u);
    const double fv = std::floor(v);
    const auto i = static_cast<std::int64_t>(fu);
    const auto j = static_cast<std::int64_t>(fv);
    const double tx = u - fu;
    const double ty = v - fv;
    const Point g00 = lattice_gradient(i, j, seed);
    const Point g10 = lattice_gradient(i + 1, j, seed);
    const Point g01 = lattice_gradient(i, j + 1, seed);
    const Point g11 = lattice_gradient(i + 1, j + 1, seed);
    const double n00 = g00.x * tx + g00.y * ty;
    const double n10 = g10.x * (tx - 1.0) + g10.y * ty;
    const double n01 = g01.x * tx + g01.y * (ty - 1.0);
    const double n11 = g11.x * (tx - 1.0) + g11.y * (ty - 1.0);
    const double sx = fade(tx);
    const double sy = fade(ty);
    const double a = n00 + sx * (n10 - n00);
    const double b = n01 + sx * (n11 - n01);
    return a + sy * (b - a);
}

}  // namespace

ScalarField perlin_layer(int width, int height, int k, double base_scale, std::uint64_t seed) {
    ScalarField out(width, height);
    const double period = base_scale / std::ldexp(1.0, k);
    const std::uint64_t layer_seed = mix64(seed ^ mix64(static_cast<std::uint64_t>(k) + 1));
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            out(x, y) = gradient_noise((x + 0.5) / period, (y + 0.5) / period, layer_seed);
        }
    }
    return out;
}

double perlin_normalizer(int octaves, double persistence) {
    // |2D gradient noise| <= sqrt(2)/2 with unit gradients.
    const double weight_sum = persistence < 1.0 ? 1.0 / (1.0 - persistence) : static_cast<double>(octaves);
    return std::sqrt(0.5) * weight_sum;
}

ScalarField perlin_field(int width, int height, const PerlinOptions& opt, SeededRng& rng) {
    return perlin_field(width, height, opt.octaves, opt.persistence, opt.base_scale, rng);
}

ScalarField perlin_field(int width, int height, int octaves, double persistence, double base_scale, SeededRng& rng) {
    if (width <= 0 || height <= 0) throw DimensionError("perlin_field needs a non-empty field");
    if (octaves < 1) throw ParameterError("perlin_field needs octaves >= 1");
    if (!(persistence > 0.0 && persistence <= 1.0)) throw ParameterError("perlin persistence must lie in (0, 1]");
    if (!(base_scale >= 2.0)) throw ParameterError("perlin base_scale must be >= 2");

    const std::uint64_t seed = rng.next_u64();
    ScalarField sum(width, height);
    double w = 1.0;
    for (int k = 0; k < octaves; ++k, w *= persistence) {
        const ScalarField layer = perlin_layer(width, height, k, base_scale, seed);
        for (std::size_t i = 0; i < sum.size(); ++i) sum.values()[i] += w * layer.values()[i];
    }
    const double norm = perlin_normalizer(octaves, persistence);
    for (auto& v : sum.values()) v = std::clamp(v / norm, -1.0, 1.0);
    return sum;
}

std::vector<double> periodic_noise_1d(int n, int cells, int octaves, SeededRng& rng) {
    if (n <= 0 || cells <= 0 || octaves <= 0) throw ParameterError("periodic_noise_1d needs positive sizes");
    const std::uint64_t seed = rng.next_u64();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    double weight = 1.0;
    for (int o = 0; o < octaves; ++o, weight *= 0.5) {
        const int m = cells << o;
        std::vector<double> slope(static_cast<std::size_t>(m));
        for (int i = 0; i < m; ++i) {
            const std::uint64_t h = mix64(seed ^ mix64((static_cast<std::uint64_t>(o) << 32) | static_cast<std::uint64_t>(i)));
            slope[static_cast<std::size_t>(i)] = 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;
        }
        for (int s = 0; s < n; ++s) {
            const double t = static_cast<double>(s) * m / n;
            const int i = static_cast<int>(std::floor(t));
            const double f = t - i;
            const double a = slope[static_cast<std::size_t>(i % m)] * f;
            const double b = slope[static_cast<std::size_t>((i + 1) % m)] * (f - 1.0);
            out[static_cast<std::size_t>(s)] += weight * (a + fade(f) * (b - a));
        }
    }
    double peak = 0.0;
    for (double v : out) peak = std::max(peak, std::abs(v));
    if (peak > 0.0) {
        for (auto& v : out) v /= peak;
    }
    return out;
}

}  // namespace chromasim
