#include <cmath>
#include <numbers>

#include "chromasim/fft.hpp"
#include "chromasim/field_synthesis.hpp"

namespace chromasim {
namespace {

std::vector<fft::Complex> embed(const ScalarField& taps, int radius, int width, int height) {
    std::vector<fft::Complex> out(static_cast<std::size_t>(width) * static_cast<std::size_t>(height));
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            const int x = ((dx % width) + width) % width;
            const int y = ((dy % height) + height) % height;
            out[static_cast<std::size_t>(y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(x)] +=
                taps(dx + radius, dy + radius);
        }
    }
    return out;
}

std::vector<fft::Complex> to_complex(const ScalarField& f) {
    std::vector<fft::Complex> out(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) out[i] = f.values()[i];
    return out;
}

}  // namespace

std::vector<GaborKernel> gabor_bank(int n_orientations, int n_scales) {
    if (n_orientations < 1 || n_scales < 1) throw ParameterError("gabor bank needs at least one orientation and scale");
    std::vector<GaborKernel> bank;
    bank.reserve(static_cast<std::size_t>(n_orientations) * static_cast<std::size_t>(n_scales));
    for (int s = 0; s < n_scales; ++s) {
        const double lambda = 4.0 * std::ldexp(1.0, s);
        const double sigma = 0.56 * lambda;
        const int r = static_cast<int>(std::ceil(3.0 * sigma));
        for (int o = 0; o < n_orientations; ++o) {
            const double theta = std::numbers::pi * o / n_orientations;
            const double c = std::cos(theta);
            const double sn = std::sin(theta);
            ScalarField taps(2 * r + 1, 2 * r + 1);
            ScalarField env(2 * r + 1, 2 * r + 1);
            double sum_g = 0.0;
            double sum_e = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                for (int dx = -r; dx <= r; ++dx) {
                    const double xr = dx * c + dy * sn;
                    const double e = std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
                    const double g = e * std::cos(2.0 * std::numbers::pi * xr / lambda);
                    taps(dx + r, dy + r) = g;
                    env(dx + r, dy + r) = e;
                    sum_g += g;
                    sum_e += e;
                }
            }
            // Remove the DC response, then unit L2 norm so scales contribute
            // comparable variance.
            const double k = sum_g / sum_e;
            double energy = 0.0;
            for (std::size_t i = 0; i < taps.size(); ++i) {
                taps.values()[i] -= k * env.values()[i];
                energy += taps.values()[i] * taps.values()[i];
            }
            const double inv = 1.0 / std::sqrt(energy);
            for (auto& v : taps.values()) v *= inv;
            bank.push_back({theta, lambda, sigma, r, std::move(taps)});
        }
    }
    return bank;
}

ScalarField gabor_response(const ScalarField& field, const GaborKernel& kernel) {
    const int w = field.width();
    const int h = field.height();
    auto f = fft::forward_2d(to_complex(field), w, h);
    const auto k = fft::forward_2d(embed(kernel.taps, kernel.radius, w, h), w, h);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= k[i];
    const auto r = fft::inverse_2d(f, w, h);
    ScalarField out(w, h);
    const double n = static_cast<double>(out.size());
    for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = r[i].real() / n;
    return out;
}

ScalarField gabor_texture(int width, int height, int n_orientations, int n_scales, SeededRng& rng) {
    if (width <= 0 || height <= 0) throw DimensionError("gabor_texture needs a non-empty field");
    const auto bank = gabor_bank(n_orientations, n_scales);
    ScalarField noise(width, height);
    for (auto& v : noise.values()) v = rng.normal();

    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < bank.size(); ++i) {
        if (rng.bernoulli(0.5)) chosen.push_back(i);
    }
    if (chosen.empty()) chosen.push_back(static_cast<std::size_t>(rng.below(bank.size())));

    // Responses are linear in the kernel, so sum the kernel spectra first.
    std::vector<fft::Complex> kernel_sum(noise.size());
    for (std::size_t i : chosen) {
        const auto k = fft::forward_2d(embed(bank[i].taps, bank[i].radius, width, height), width, height);
        for (std::size_t j = 0; j < k.size(); ++j) kernel_sum[j] += k[j];
    }
    auto f = fft::forward_2d(to_complex(noise), width, height);
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= kernel_sum[i];
    const auto r = fft::inverse_2d(f, width, height);
    ScalarField out(width, height);
    for (std::size_t i = 0; i < out.size(); ++i) out.values()[i] = r[i].real();
    rescale(out, 0.0, 1.0);
    return out;
}

}  // namespace chromasim
