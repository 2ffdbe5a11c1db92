#include "chromasim/seg_metrics.hpp"

namespace chromasim {
namespace {

double ratio(double num, double den, bool both_empty) {
    if (den == 0.0) return both_empty ? 1.0 : 0.0;
    return num / den;
}

}  // namespace

BinaryMask binarize(const InstanceMask& mask) {
    BinaryMask b(mask.width(), mask.height());
    for (std::size_t i = 0; i < b.size(); ++i) b.values()[i] = mask.values()[i] != 0;
    return b;
}

OverlapMetrics overlap_metrics(const BinaryMask& prediction, const BinaryMask& truth) {
    if (prediction.width() != truth.width() || prediction.height() != truth.height()) {
        throw InputError("prediction and truth dimensions differ");
    }
    std::size_t tp = 0, fp = 0, fn = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const bool p = prediction.values()[i] != 0;
        const bool g = truth.values()[i] != 0;
        tp += p && g;
        fp += p && !g;
        fn += !p && g;
    }
    const bool both_empty = tp + fp + fn == 0;
    const auto TP = static_cast<double>(tp), FP = static_cast<double>(fp), FN = static_cast<double>(fn);
    OverlapMetrics m;
    m.dice = ratio(2.0 * TP, 2.0 * TP + FP + FN, both_empty);
    m.iou = ratio(TP, TP + FP + FN, both_empty);
    m.precision = ratio(TP, TP + FP, both_empty);
    m.recall = ratio(TP, TP + FN, both_empty);
    return m;
}

}  // namespace chromasim
