#pragma once

#include <string>
#include <vector>

#include "chromasim/biomarkers.hpp"
#include "chromasim/common.hpp"

namespace chromasim {

struct OverlapMetrics {
    double dice = 0.0;
    double iou = 0.0;
    double precision = 0.0;
    double recall = 0.0;
};

/// Nonzero pixels are foreground. A ratio with an empty denominator is 1 when
/// both masks are empty and 0 otherwise.
OverlapMetrics overlap_metrics(const BinaryMask& prediction, const BinaryMask& truth);
BinaryMask binarize(const InstanceMask& mask);

/// 1 - (2 sum p g + eps) / (sum p^2 + sum g^2 + eps).
double dice_loss(const ScalarField& probs, const BinaryMask& truth, double epsilon = 1.0);

struct LovaszResult {
    double loss = 0.0;
    bool complement = false;  // truth had no foreground; background class used
};
LovaszResult lovasz_hinge(const ScalarField& probs, const BinaryMask& truth);
double lovasz_loss(const ScalarField& probs, const BinaryMask& truth);
double combined_loss(const ScalarField& probs, const BinaryMask& truth);

struct SensitivityRow {
    int offset = 0;
    std::size_t n_nuclei = 0;       // nuclei compared (surviving, present in both)
    std::size_t n_annihilated = 0;
    std::vector<double> mean;       // per biomarker, mean |rel. error|
    std::vector<double> median;
};

struct SensitivityTable {
    std::vector<SensitivityRow> rows;  // control (0) first, then -max..-1, 1..max
};

/// Offsets are magnitudes; each contributes an erosion and a dilation row.
SensitivityTable sensitivity_analysis(const std::vector<FieldSample>& samples, const std::vector<int>& offsets,
                                      const PixelCalibration& cal = {});
std::string sensitivity_csv(const SensitivityTable& t);

}  // namespace chromasim
