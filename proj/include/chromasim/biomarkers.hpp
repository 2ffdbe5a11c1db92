#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "chromasim/common.hpp"
#include "chromasim/modality_render.hpp"
#include "chromasim/nucleus_geometry.hpp"

namespace chromasim {

struct PixelCalibration {
    double pixel_size = 0.5;  // um per pixel
};

struct Morphometrics {
    double area = 0.0;         // px^2
    double perimeter = 0.0;    // px
    double circularity = 0.0;
    double eccentricity = 0.0;
    int components = 1;        // 8-connected pieces traced
};

/// Shape descriptors of the pixels of `mask` equal to `label`.
/// Perimeter: Moore-traced outer boundary through pixel centres, smoothed with
/// a circular Gaussian (sigma 1 px), Euclidean length, plus pi for the half
/// pixel between centre trace and region edge. Summed over 8-connected pieces.
Morphometrics morphometrics(const InstanceMask& mask, std::uint16_t label);

/// 256 bins on [0, 1]; returns the upper edge of the last bin of the lower
/// class. Ties go to the lower threshold.
double otsu_threshold(const std::vector<double>& values);

/// Linear-interpolated percentile, q in [0, 100].
double percentile(std::vector<double> values, double q);

/// Image-wide context for intensity biomarkers.
struct IntensityContext {
    double p1 = 0.0;
    double p99 = 1.0;
    double background = 0.0;
    bool background_fallback = false;  // Otsu failed; extranuclear mean used
};

/// `plane` is single-channel; labels > 0 are nuclear.
IntensityContext intensity_context(const ScalarField& plane, const InstanceMask& mask);
double sigma_intensity(const ScalarField& plane, const InstanceMask& mask, std::uint16_t label,
                       const IntensityContext& ctx);

/// Shannon entropy (bits) of values in [0, 1] over 16 uniform bins.
double entropy_bits(const std::vector<double>& values);
/// Entropy of the nucleus after mapping [p1, p99] onto [0, 1].
double chromatin_entropy(const ScalarField& plane, const InstanceMask& mask, std::uint16_t label,
                         const IntensityContext& ctx);

/// Dyadic square (side >= 32) holding the nucleus's bounding box, exterior
/// pixels filled by mirroring interior values through the nearest nuclear pixel.
ScalarField nucleus_patch(const ScalarField& plane, const InstanceMask& mask, std::uint16_t label);

/// One level of the periodic orthonormal Daubechies-4 (8-tap) 2D DWT.
struct DwtLevel {
    ScalarField ll, lh, hl, hh;
};
DwtLevel dwt2_db4(const ScalarField& in);
ScalarField idwt2_db4(const DwtLevel& level);
const std::vector<double>& db4_lowpass();

/// Slope of log Var(detail_j) vs log 2^j, j = 1..4, on a dyadic square field.
double variance_slope_field(const ScalarField& patch);
double variance_slope(const ScalarField& plane, const InstanceMask& mask, std::uint16_t label);

struct SpectralFit {
    double beta = 0.0;
    double dimension = 0.0;   // (6 - beta) / 2
    int bins = 0;
    double k_min = 0.0;       // cycles/pixel
    double k_max = 0.0;
};
inline constexpr double kPsdBandHigh = 0.45;
inline constexpr double kPsdBandLowCycles = 4.0;  // k_min = 4 / N

/// Radially averaged PSD slope of a dyadic square field (mean removed, Hann window).
SpectralFit spectral_fit(const ScalarField& patch);
SpectralFit packing_dimension(const ScalarField& plane, const InstanceMask& mask, std::uint16_t label);

struct BiomarkerVector {
    std::string image_id;
    int nucleus_id = 0;
    std::string tissue_class = "normal";
    double area = 0.0;
    double area_um2 = 0.0;
    double perimeter = 0.0;
    double circularity = 0.0;
    double eccentricity = 0.0;
    double sigma_mean_intensity = 0.0;
    double variance_slope = 0.0;
    double packing_dimension = 0.0;
    double entropy = 0.0;
    std::vector<std::string> flags;  // failed or approximate measurements

    bool ok() const { return flags.empty(); }
};

inline constexpr int kBiomarkerCount = 8;
/// Metric names in CSV column order (without units).
const std::vector<std::string>& biomarker_names();
/// Value of metric `index` (order of biomarker_names()).
double biomarker_value(const BiomarkerVector& v, int index);
bool biomarker_valid(const BiomarkerVector& v, int index);

/// One vector per label, ascending. Per-nucleus failures become flags.
std::vector<BiomarkerVector> extract_all(const Image& image, const InstanceMask& mask,
                                         const std::vector<NucleusInstance>& nuclei,
                                         const PixelCalibration& cal = {}, const std::string& image_id = "");
std::vector<BiomarkerVector> extract_all(const FieldSample& sample, const PixelCalibration& cal = {},
                                         const std::string& image_id = "");

std::string biomarker_csv_header();
std::string biomarker_csv_row(const BiomarkerVector& v);
/// "%.6f"; non-finite values print as "nan".
std::string format_fixed(double v);

}  // namespace chromasim
