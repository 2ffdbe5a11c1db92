#include <algorithm>
#include <cmath>

#include "chromasim/field_synthesis.hpp"
#include "chromasim/kernels.hpp"

namespace chromasim {

void standardize(ScalarField& f) {
    const auto& v = f.values();
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (double x : v) var += (x - mean) * (x - mean);
    var /= static_cast<double>(v.size());
    if (!(var > 1e-300)) throw DegenerateError("cannot standardize a constant field");
    const double inv = 1.0 / std::sqrt(var);
    for (auto& x : f.values()) x = (x - mean) * inv;
}

void rescale(ScalarField& f, double lo, double hi) {
    const auto [mn, mx] = std::minmax_element(f.values().begin(), f.values().end());
    const double a = *mn;
    const double span = *mx - a;
    for (auto& x : f.values()) x = span > 0.0 ? lo + (hi - lo) * (x - a) / span : 0.5 * (lo + hi);
}

ScalarField gaussian_random_field(int width, int height, double correlation_length, SeededRng& rng) {
    if (width <= 0 || height <= 0) throw DimensionError("gaussian_random_field needs a non-empty field");
    if (!(correlation_length > 0.0)) throw ParameterError("correlation_length must be positive");
    if (correlation_length > std::min(width, height) / 2.0) {
        throw ParameterError("correlation_length exceeds half the field size");
    }
    ScalarField noise(width, height);
    for (auto& v : noise.values()) v = rng.normal();
    ScalarField out = kernels::gaussian_blur(noise, correlation_length, kernels::Boundary::Periodic);
    standardize(out);
    return out;
}

}  // namespace chromasim
