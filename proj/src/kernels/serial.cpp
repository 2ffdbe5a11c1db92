#include <cmath>

#include "lines.hpp"

namespace chromasim::kernels {

std::vector<double> gaussian_taps(double sigma) {
    if (!(sigma > 0.0)) throw ParameterError("gaussian sigma must be positive");
    const int r = static_cast<int>(std::ceil(4.0 * sigma));
    std::vector<double> taps(static_cast<std::size_t>(2 * r + 1));
    double sum = 0.0;
    for (int k = -r; k <= r; ++k) {
        const double v = std::exp(-0.5 * (k * k) / (sigma * sigma));
        taps[static_cast<std::size_t>(k + r)] = v;
        sum += v;
    }
    for (auto& t : taps) t /= sum;
    return taps;
}

namespace serial {

ScalarField gaussian_blur(const ScalarField& in, double sigma, Boundary boundary) {
    const auto taps = gaussian_taps(sigma);
    const int w = in.width();
    const int h = in.height();
    ScalarField tmp(w, h);
    ScalarField out(w, h);
    for (int y = 0; y < h; ++y) {
        detail::blur_line(&in.values()[in.index(0, y)], &tmp.values()[tmp.index(0, y)], w, 1, taps, boundary);
    }
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
    std::vector<double> f(static_cast<std::size_t>(h));
    std::vector<std::int64_t> lab(static_cast<std::size_t>(h));
    std::vector<double> d(static_cast<std::size_t>(h));
    std::vector<std::int64_t> dl(static_cast<std::size_t>(h));
    std::vector<int> v;
    std::vector<double> z;
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
    for (int y = 0; y < h; ++y) {
        const std::size_t off = colpass.index(0, y);
        detail::edt_line(&colpass.values()[off], &collabel[off], &out.dist2.values()[off], &out.nearest[off], w, v, z);
    }
    return out;
}

ScalarField warp_bilinear(const ScalarField& in, const ScalarField& src_x, const ScalarField& src_y) {
    detail::check_maps(in.width(), in.height(), src_x, src_y);
    ScalarField out(in.width(), in.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.values()[i] = detail::sample_bilinear(in, src_x.values()[i], src_y.values()[i]);
    }
    return out;
}

InstanceMask warp_nearest(const InstanceMask& in, const ScalarField& src_x, const ScalarField& src_y) {
    detail::check_maps(in.width(), in.height(), src_x, src_y);
    InstanceMask out(in.width(), in.height());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.values()[i] = detail::sample_nearest(in, src_x.values()[i], src_y.values()[i]);
    }
    return out;
}

}  // namespace serial
}  // namespace chromasim::kernels
