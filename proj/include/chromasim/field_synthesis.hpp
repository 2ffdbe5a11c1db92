#pragma once

#include <cstdint>
#include <vector>

#include "chromasim/common.hpp"
#include "chromasim/rng.hpp"

namespace chromasim {

struct PerlinOptions {
    int octaves = 6;
    double persistence = 0.5;
    double base_scale = 64.0;  // lattice period of octave 0, pixels
};

/// Gradient noise summed over octaves (layer k weighted persistence^k,
/// lattice frequency doubled per layer), then divided by the worst-case
/// amplitude so the result lies in [-1, 1]. The divisor depends on the
/// persistence only, so adding octaves adds exactly the new weighted layers.
ScalarField perlin_field(int width, int height, const PerlinOptions& opt, SeededRng& rng);
ScalarField perlin_field(int width, int height, int octaves, double persistence, double base_scale, SeededRng& rng);

/// One unweighted octave: quintic-interpolated gradient noise with lattice
/// period base_scale / 2^k. `seed` is the value perlin_field draws from rng.
ScalarField perlin_layer(int width, int height, int k, double base_scale, std::uint64_t seed);

/// Linear map perlin_field applies to the weighted layer sum.
double perlin_normalizer(int octaves, double persistence);

/// Periodic 1D gradient noise sampled at n equally spaced points of a circle
/// with `cells` lattice cells; scaled so max |value| = 1.
std::vector<double> periodic_noise_1d(int n, int cells, int octaves, SeededRng& rng);

/// White Gaussian noise convolved (periodically) with an isotropic Gaussian of
/// standard deviation correlation_length, standardized to mean 0, variance 1.
ScalarField gaussian_random_field(int width, int height, double correlation_length, SeededRng& rng);

struct GaborKernel {
    double theta;       // radians, [0, pi)
    double wavelength;  // pixels
    double sigma;       // envelope sd, 0.56 * wavelength
    int radius;
    ScalarField taps;   // (2 radius + 1)^2, zero mean
};

/// n_orientations x n_scales kernels; wavelengths 4 * 2^s.
std::vector<GaborKernel> gabor_bank(int n_orientations, int n_scales);

/// Periodic convolution of a field with one kernel.
ScalarField gabor_response(const ScalarField& field, const GaborKernel& kernel);

/// White noise filtered by a random non-empty subset of the bank, summed and
/// min-max rescaled to [0, 1].
ScalarField gabor_texture(int width, int height, int n_orientations, int n_scales, SeededRng& rng);

/// Spectral synthesis with power spectrum k^-beta (DC removed), standardized.
ScalarField power_law_field(int width, int height, double beta, SeededRng& rng);

/// power_law_field with beta = 2 hurst + 2; dimensions must be powers of two.
ScalarField fbm_field(int width, int height, double hurst, SeededRng& rng);

/// Mean 0, variance 1 in place. Throws DegenerateError on a constant field.
void standardize(ScalarField& f);

/// Affine map of [min, max] onto [lo, hi]; constant fields map to the midpoint.
void rescale(ScalarField& f, double lo, double hi);

}  // namespace chromasim
