#pragma once

// Per-line building blocks shared by the serial and OpenMP kernels. Keeping a
// single copy of the arithmetic is what makes the two variants bit-identical.

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "chromasim/kernels.hpp"

namespace chromasim::kernels::detail {

inline int wrap_index(int i, int n, Boundary b) {
    if (b == Boundary::Periodic) {
        i %= n;
        return i < 0 ? i + n : i;
    }
    return i < 0 ? 0 : (i >= n ? n - 1 : i);
}

/// Convolve n samples read at src[i * stride] into dst[i * stride].
inline void blur_line(const double* src, double* dst, int n, std::ptrdiff_t stride, const std::vector<double>& taps,
                      Boundary b) {
    const int r = static_cast<int>(taps.size() / 2);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = -r; k <= r; ++k) {
            acc += taps[static_cast<std::size_t>(k + r)] * src[wrap_index(i + k, n, b) * stride];
        }
        dst[i * stride] = acc;
    }
}

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Felzenszwalb-Huttenlocher lower envelope. f[i] is the squared distance
/// carried in from the previous pass; label[i] the feature it refers to.
/// Scratch vectors are caller-owned so the parallel version can reuse them.
inline void edt_line(const double* f, const std::int64_t* label, double* d, std::int64_t* out_label, int n,
                     std::vector<int>& v, std::vector<double>& z) {
    v.assign(static_cast<std::size_t>(n), 0);
    z.assign(static_cast<std::size_t>(n) + 1, 0.0);
    int k = -1;
    for (int q = 0; q < n; ++q) {
        if (!std::isfinite(f[q])) continue;
        if (k < 0) {
            k = 0;
            v[0] = q;
            z[0] = -kInf;
            z[1] = kInf;
            continue;
        }
        for (;;) {
            const int p = v[static_cast<std::size_t>(k)];
            const double s = ((f[q] + static_cast<double>(q) * q) - (f[p] + static_cast<double>(p) * p)) /
                             (2.0 * q - 2.0 * p);
            if (s <= z[static_cast<std::size_t>(k)]) {
                if (--k < 0) {
                    k = 0;
                    v[0] = q;
                    z[0] = -kInf;
                    z[1] = kInf;
                    break;
                }
                continue;
            }
            ++k;
            v[static_cast<std::size_t>(k)] = q;
            z[static_cast<std::size_t>(k)] = s;
            z[static_cast<std::size_t>(k) + 1] = kInf;
            break;
        }
    }
    if (k < 0) {
        for (int q = 0; q < n; ++q) {
            d[q] = kInf;
            out_label[q] = -1;
        }
        return;
    }
    int j = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(j) + 1] < q) ++j;
        const int p = v[static_cast<std::size_t>(j)];
        d[q] = static_cast<double>(q - p) * (q - p) + f[p];
        out_label[q] = label[p];
    }
}

inline double sample_bilinear(const ScalarField& in, double x, double y) {
    const int w = in.width();
    const int h = in.height();
    x = x < 0.0 ? 0.0 : (x > w - 1 ? w - 1 : x);
    y = y < 0.0 ? 0.0 : (y > h - 1 ? h - 1 : y);
    const int x0 = static_cast<int>(std::floor(x));
    const int y0 = static_cast<int>(std::floor(y));
    const int x1 = x0 + 1 < w ? x0 + 1 : x0;
    const int y1 = y0 + 1 < h ? y0 + 1 : y0;
    const double fx = x - x0;
    const double fy = y - y0;
    const double top = in(x0, y0) * (1.0 - fx) + in(x1, y0) * fx;
    const double bot = in(x0, y1) * (1.0 - fx) + in(x1, y1) * fx;
    return top * (1.0 - fy) + bot * fy;
}

inline std::uint16_t sample_nearest(const InstanceMask& in, double x, double y) {
    const int xi = static_cast<int>(std::lround(x));
    const int yi = static_cast<int>(std::lround(y));
    return in.contains(xi, yi) ? in(xi, yi) : std::uint16_t{0};
}

inline void check_maps(int w, int h, const ScalarField& sx, const ScalarField& sy) {
    if (sx.width() != w || sx.height() != h || !sx.same_shape(sy)) {
        throw DimensionError("warp coordinate maps must match the output shape");
    }
}

}  // namespace chromasim::kernels::detail
