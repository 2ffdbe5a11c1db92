#pragma once

#include <complex>
#include <vector>

namespace chromasim::fft {

using Complex = std::complex<double>;

/// Unnormalized 2D DFT of a row-major width x height array (FFTW backend).
std::vector<Complex> forward_2d(const std::vector<Complex>& data, int width, int height);

/// Unnormalized inverse 2D DFT; divide by width*height to invert forward_2d.
std::vector<Complex> inverse_2d(const std::vector<Complex>& data, int width, int height);

/// Signed frequency in cycles per sample for DFT index i of an n-point transform.
inline double frequency(int i, int n) {
    return static_cast<double>(i <= n / 2 ? i : i - n) / static_cast<double>(n);
}

}  // namespace chromasim::fft
