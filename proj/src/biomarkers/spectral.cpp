#include <cmath>
#include <numbers>

#include "chromasim/biomarkers.hpp"
#include "chromasim/fft.hpp"

namespace chromasim {

SpectralFit spectral_fit(const ScalarField& patch) {
    const int n = patch.width();
    if (patch.height() != n || !is_power_of_two(n) || n < 32) {
        throw DimensionError("packing_dimension needs a dyadic square of side >= 32");
    }
    double mean = 0.0;
    for (double v : patch.values()) mean += v;
    mean /= static_cast<double>(patch.size());

    std::vector<double> hann(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) hann[static_cast<std::size_t>(i)] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / n));
    std::vector<fft::Complex> buf(patch.size());
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            buf[static_cast<std::size_t>(y * n + x)] =
                (patch(x, y) - mean) * hann[static_cast<std::size_t>(x)] * hann[static_cast<std::size_t>(y)];
        }
    }
    const auto spec = fft::forward_2d(buf, n, n);

    const int r_lo = static_cast<int>(std::ceil(kPsdBandLowCycles));
    const int r_hi = static_cast<int>(std::floor(kPsdBandHigh * n));
    std::vector<double> sum(static_cast<std::size_t>(r_hi + 1), 0.0);
    std::vector<std::size_t> cnt(static_cast<std::size_t>(r_hi + 1), 0);
    for (int y = 0; y < n; ++y) {
        const int fy = y <= n / 2 ? y : y - n;
        for (int x = 0; x < n; ++x) {
            const int fx = x <= n / 2 ? x : x - n;
            const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(fx * fx + fy * fy))));
            if (r < r_lo || r > r_hi) continue;
            sum[static_cast<std::size_t>(r)] += std::norm(spec[static_cast<std::size_t>(y * n + x)]);
            ++cnt[static_cast<std::size_t>(r)];
        }
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (int r = r_lo; r <= r_hi; ++r) {
        const auto i = static_cast<std::size_t>(r);
        if (cnt[i] == 0 || !(sum[i] > 0.0)) continue;
        const double lx = std::log(static_cast<double>(r) / n);
        const double ly = std::log(sum[i] / static_cast<double>(cnt[i]));
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
        ++m;
    }
    if (m < 4) throw MeasurementError("fewer than 4 populated radial bins in the fit band");
    SpectralFit fit;
    fit.beta = -(m * sxy - sx * sy) / (m * sxx - sx * sx);
    fit.dimension = (6.0 - fit.beta) / 2.0;
    fit.bins = m;
    fit.k_min = static_cast<double>(r_lo) / n;
    fit.k_max = static_cast<double>(r_hi) / n;
    return fit;
}

SpectralFit packing_dimension(const ScalarField& plane, const InstanceMask& mask, std::uint16_t label) {
    return spectral_fit(nucleus_patch(plane, mask, label));
}

}  // namespace chromasim
