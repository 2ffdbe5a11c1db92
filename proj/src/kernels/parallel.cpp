#include <omp.h>

#include "lines.hpp"

namespace chromasim::kernels::omp {

ScalarField gaussian_blur(const ScalarField& in, double sigma, Boundary boundary) {
    const auto taps = gaussian_taps(sigma);
    const int w = in.width();
    const int h = in.height();
    ScalarField tmp(w, h);
    ScalarField out(w, h);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        detail::blur_line(&in.values()[in.index(0, y)], &tmp.values()[tmp.index(0, y)], w, 1, taps, boundary);
    }
#pragma omp parallel for schedule(static)
    for (int x = 0; x < w; ++x) {
        detail::blur_line(&tmp.values()[static_cast<std::size_t>(x)], &out.values()[static_cast<std::size_t>(x)], h, w,
                          taps, boundary);
    }
    return out;
}

DistanceMap distance_transform(const BinaryMask& features) {
    const int w = features.width();
    const int h = features.height();
    DistanceMap out{ScalarField(w, h), std::vector<std::int64_t>(features.size(), -1)};
    ScalarField colpass(w, h);
    std::vector<std::int64_t> collabel(features.size(), -1);
#pragma omp parallel
    {
        std::vector<double> f(static_cast<std::size_t>(h));
        std::vector<std::int64_t> lab(static_cast<std::size_t>(h));
        std::vector<double> d(static_cast<std::size_t>(h));
        std::vector<std::int64_t> dl(static_cast<std::size_t>(h));
        std::vector<int> v;
        std::vector<double> z;
#pragma omp for schedule(static)
        for (int x = 0; x < w; ++x) {
            for (int y = 0; y < h; ++y) {
                const bool on = features(x, y) != 0;
                f[static_cast<std::size_t>(y)] = on ? 0.0 : detail::kInf;
                lab[static_cast<std::size_t>(y)] = on ? static_cast<std::int64_t>(features.index(x, y)) : -1;
            }
            detail::edt_line(f.data(), lab.data(), d.data(), dl.data(), h, v, z);
            for (int y = 0; y < h; ++y) {
                colpass(x, y) = d[static_cast<std::size_t>(y)];
                collabel[colpass.index(x, y)] = dl[static_cast<std::size_t>(y)];
            }
        }
#pragma omp for schedule(static)
        for (int y = 0; y < h; ++y) {
            const std::size_t off = colpass.index(0, y);
            detail::edt_line(&colpass.values()[off], &collabel[off], &out.dist2.values()[off], &out.nearest[off], w, v,
                             z);
        }
    }
    return out;
}

ScalarField warp_bilinear(const ScalarField& in, const ScalarField& src_x, const ScalarField& src_y) {
    detail::check_maps(in.width(), in.height(), src_x, src_y);
    ScalarField out(in.width(), in.height());
    const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out.values()[k] = detail::sample_bilinear(in, src_x.values()[k], src_y.values()[k]);
    }
    return out;
}

InstanceMask warp_nearest(const InstanceMask& in, const ScalarField& src_x, const ScalarField& src_y) {
    detail::check_maps(in.width(), in.height(), src_x, src_y);
    InstanceMask out(in.width(), in.height());
    const auto n = static_cast<std::int64_t>(out.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out.values()[k] = detail::sample_nearest(in, src_x.values()[k], src_y.values()[k]);
    }
    return out;
}

}  // namespace chromasim::kernels::omp
