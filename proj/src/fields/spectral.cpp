#include <cmath>

#include "chromasim/fft.hpp"
#include "chromasim/field_synthesis.hpp"

namespace chromasim {

ScalarField power_law_field(int width, int height, double beta, SeededRng& rng) {
    if (width <= 0 || height <= 0) throw DimensionError("power_law_field needs a non-empty field");
    std::vector<fft::Complex> spec(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (int v = 0; v < height; ++v) {
        const double fy = fft::frequency(v, height);
        for (int u = 0; u < width; ++u) {
            const double fx = fft::frequency(u, width);
            const double re = rng.normal();
            const double im = rng.normal();
            const double k = std::hypot(fx, fy);
            const double amp = k > 0.0 ? std::pow(k, -0.5 * beta) : 0.0;
            spec[static_cast<std::size_t>(v) * static_cast<std::size_t>(width) + static_cast<std::size_t>(u)] =
                fft::Complex(amp * re, amp * im);
        }
    }
    const auto r = fft::inverse_2d(spec, width, height);
    ScalarField out(width, height);
    for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = r[i].real();
    standardize(out);
    return out;
}

ScalarField fbm_field(int width, int height, double hurst, SeededRng& rng) {
    if (!(hurst > 0.0 && hurst < 1.0)) throw ParameterError("hurst exponent must lie in (0, 1)");
    if (!is_power_of_two(width) || !is_power_of_two(height)) {
        throw DimensionError("fbm_field needs power-of-two dimensions");
    }
    return power_law_field(width, height, 2.0 * hurst + 2.0, rng);
}

}  // namespace chromasim
