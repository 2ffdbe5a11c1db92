#pragma once

#include <cstdint>
#include <vector>

#include "chromasim/common.hpp"

// Pixel kernels shared by the generators and the biomarker pipeline. Every
// kernel exists twice: a plain serial reference (used by the tests as the
// ground truth) and an OpenMP version that must agree with it bit for bit.
namespace chromasim::kernels {

enum class Boundary { Periodic, Clamp };

/// Result of a Euclidean distance transform: squared distance to the nearest
/// feature pixel and that pixel's linear index (-1 when there is no feature).
struct DistanceMap {
    ScalarField dist2;
    std::vector<std::int64_t> nearest;
};

namespace serial {
ScalarField gaussian_blur(const ScalarField& in, double sigma, Boundary boundary);
DistanceMap distance_transform(const BinaryMask& features);
ScalarField warp_bilinear(const ScalarField& in, const ScalarField& src_x, const ScalarField& src_y);
InstanceMask warp_nearest(const InstanceMask& in, const ScalarField& src_x, const ScalarField& src_y);
}  // namespace serial

namespace omp {
ScalarField gaussian_blur(const ScalarField& in, double sigma, Boundary boundary);
DistanceMap distance_transform(const BinaryMask& features);
ScalarField warp_bilinear(const ScalarField& in, const ScalarField& src_x, const ScalarField& src_y);
InstanceMask warp_nearest(const InstanceMask& in, const ScalarField& src_x, const ScalarField& src_y);
}  // namespace omp

/// Normalized 1D Gaussian taps, radius ceil(4 sigma).
std::vector<double> gaussian_taps(double sigma);

/// Library-internal entry points; they dispatch to the OpenMP kernels.
inline ScalarField gaussian_blur(const ScalarField& in, double sigma, Boundary b) { return omp::gaussian_blur(in, sigma, b); }
inline DistanceMap distance_transform(const BinaryMask& f) { return omp::distance_transform(f); }
inline ScalarField warp_bilinear(const ScalarField& in, const ScalarField& sx, const ScalarField& sy) {
    return omp::warp_bilinear(in, sx, sy);
}
inline InstanceMask warp_nearest(const InstanceMask& in, const ScalarField& sx, const ScalarField& sy) {
    return omp::warp_nearest(in, sx, sy);
}

}  // namespace chromasim::kernels
