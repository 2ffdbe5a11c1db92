#include <cmath>
#include <numbers>

#include "chromasim/field_synthesis.hpp"
#include "chromasim/nucleus_geometry.hpp"

namespace chromasim {

std::string_view to_string(TissueClass c) { return c == TissueClass::Normal ? "normal" : "dysplasia"; }

TissueClass parse_tissue_class(std::string_view s) {
    if (s == "normal") return TissueClass::Normal;
    if (s == "dysplasia") return TissueClass::Dysplasia;
    throw InputError("unknown tissue class '" + std::string(s) + "'");
}

double sample_axis_ratio(SeededRng& rng) {
    const double mu = std::log(kAxisRatioMean) - 0.5 * kAxisRatioSigma * kAxisRatioSigma;
    return rng.lognormal(mu, kAxisRatioSigma);
}

Polygon sample_nucleus_boundary(SeededRng& rng, double target_area, double perturb_amplitude,
                                const ShapeOptions& opt) {
    if (!(target_area >= kMinNucleusArea && target_area <= kMaxNucleusArea)) {
        throw ParameterError("target_area must lie in [500, 3000] px^2");
    }
    if (!(perturb_amplitude >= 0.0 && perturb_amplitude <= 5.0)) {
        throw ParameterError("perturb_amplitude must lie in [0, 5] px");
    }
    constexpr int kVertices = 128;
    for (int attempt = 0; attempt < 16; ++attempt) {
        const double ratio = opt.axis_ratio ? *opt.axis_ratio : sample_axis_ratio(rng);
        if (!(ratio > 0.0)) throw ParameterError("axis ratio must be positive");
        const double theta = rng.uniform(0.0, std::numbers::pi);
        const double a = std::sqrt(target_area * ratio / std::numbers::pi);
        const double b = std::sqrt(target_area / (ratio * std::numbers::pi));
        const auto noise = periodic_noise_1d(kVertices, 4, 2, rng);
        const double c = std::cos(theta);
        const double s = std::sin(theta);

        Polygon raw;
        raw.reserve(kVertices + 1);
        for (int i = 0; i < kVertices; ++i) {
            const double t = 2.0 * std::numbers::pi * i / kVertices;
            Point p{a * std::cos(t), b * std::sin(t)};
            const double rho = norm(p);
            p = ((rho + perturb_amplitude * noise[static_cast<std::size_t>(i)]) / rho) * p;
            raw.push_back({c * p.x - s * p.y, s * p.x + c * p.y});
        }
        raw = close_polygon(std::move(raw));

        Polygon smooth = smooth_boundary_bspline(raw, opt.knot_spacing);
        const Point centroid = polygon_centroid(smooth);
        smooth = translate(scale_about(smooth, centroid, std::sqrt(target_area / polygon_area(smooth))),
                           Point{-centroid.x, -centroid.y});
        if (is_simple(smooth)) return smooth;
    }
    throw GeometryError("could not sample a simple nucleus boundary");
}

}  // namespace chromasim
