#include <algorithm>
#include <numeric>

#include "chromasim/seg_metrics.hpp"

namespace chromasim {
namespace {

void check(const ScalarField& probs, const BinaryMask& truth) {
    if (probs.width() != truth.width() || probs.height() != truth.height()) {
        throw InputError("probability map and truth dimensions differ");
    }
    for (double p : probs.values()) {
        if (!(p >= 0.0 && p <= 1.0)) throw InputError("probabilities must lie in [0, 1]");
    }
}

// Binary Lovasz hinge on the foreground class of (p, g).
double lovasz_foreground(const std::vector<double>& p, const std::vector<std::uint8_t>& g) {
    const std::size_t n = p.size();
    std::vector<double> err(n);
    for (std::size_t i = 0; i < n; ++i) err[i] = g[i] ? 1.0 - p[i] : p[i];
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return err[a] > err[b]; });

    double gts = 0.0;
    for (auto v : g) gts += v ? 1.0 : 0.0;
    // loss = sum_i m_(i) (J(i) - J(i-1)) = sum_i (m_(i) - m_(i+1)) J(i).
    double loss = 0.0;
    double cum_fg = 0.0, cum_bg = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (g[order[i]]) cum_fg += 1.0;
        else cum_bg += 1.0;
        const double inter = gts - cum_fg;
        const double uni = gts + cum_bg;
        const double jac = 1.0 - inter / uni;
        const double next = i + 1 < n ? err[order[i + 1]] : 0.0;
        const double step = err[order[i]] - next;
        if (step != 0.0) loss += step * jac;
    }
    return loss;
}

}  // namespace

double dice_loss(const ScalarField& probs, const BinaryMask& truth, double epsilon) {
    check(probs, truth);
    double pg = 0.0, pp = 0.0, gg = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const double p = probs.values()[i];
        const double g = truth.values()[i] ? 1.0 : 0.0;
        pg += p * g;
        pp += p * p;
        gg += g * g;
    }
    return 1.0 - (2.0 * pg + epsilon) / (pp + gg + epsilon);
}

LovaszResult lovasz_hinge(const ScalarField& probs, const BinaryMask& truth) {
    check(probs, truth);
    if (truth.size() == 0) throw InputError("lovasz loss needs at least one pixel");
    std::vector<double> p(probs.values());
    std::vector<std::uint8_t> g(truth.size());
    bool any = false;
    for (std::size_t i = 0; i < g.size(); ++i) any |= (g[i] = truth.values()[i] != 0) != 0;
    LovaszResult r;
    if (!any) {
        r.complement = true;
        for (auto& v : p) v = 1.0 - v;
        for (auto& v : g) v = 1;
    }
    r.loss = lovasz_foreground(p, g);
    return r;
}

double lovasz_loss(const ScalarField& probs, const BinaryMask& truth) { return lovasz_hinge(probs, truth).loss; }

double combined_loss(const ScalarField& probs, const BinaryMask& truth) {
    return dice_loss(probs, truth) + lovasz_loss(probs, truth);
}

}  // namespace chromasim
