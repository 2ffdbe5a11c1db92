#include <algorithm>
#include <cmath>

#include "chromasim/rng.hpp"
#include "chromasim/stats.hpp"

namespace chromasim::stats {

double mean(const std::vector<double>& v) {
    if (v.empty()) throw InputError("mean of an empty set");
    // Anchored at the first value so constant inputs come back exactly.
    const double x0 = v.front();
    double s = 0.0;
    for (double x : v) s += x - x0;
    return x0 + s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double median(std::vector<double> v) {
    if (v.empty()) throw InputError("median of an empty set");
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

double cohens_d(double mean_a, double sd_a, double mean_b, double sd_b) {
    if (sd_a == 0.0 && sd_b == 0.0) throw DegenerateError("Cohen's d: both standard deviations are zero");
    return (mean_b - mean_a) / std::sqrt((sd_a * sd_a + sd_b * sd_b) / 2.0);
}

double cohens_d(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.empty() || b.empty()) throw InputError("both groups must be non-empty");
    return cohens_d(mean(a), sample_sd(a), mean(b), sample_sd(b));
}

double bonferroni(double alpha, int k) {
    if (k < 1) throw InputError("Bonferroni needs at least one comparison");
    return alpha / k;
}

std::pair<double, double> bootstrap_ci(const std::vector<double>& values, std::uint64_t seed, std::size_t resamples,
                                       double level) {
    if (values.size() < 2) throw InputError("bootstrap needs at least two values");
    if (resamples < 1 || !(level > 0.0 && level < 1.0)) throw ParameterError("invalid bootstrap settings");
    constexpr std::size_t kBlock = 500;
    const std::size_t n = values.size();
    const std::size_t blocks = (resamples + kBlock - 1) / kBlock;
    std::vector<double> stat(resamples);
    const double x0 = values.front();
#pragma omp parallel for schedule(static)
    for (std::size_t blk = 0; blk < blocks; ++blk) {
        SeededRng rng(seed, derive_stream(seed, blk));
        const std::size_t end = std::min(resamples, (blk + 1) * kBlock);
        for (std::size_t r = blk * kBlock; r < end; ++r) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += values[rng.below(n)] - x0;
            stat[r] = x0 + s / static_cast<double>(n);
        }
    }
    const double tail = (1.0 - level) / 2.0;
    return {percentile(stat, 100.0 * tail), percentile(stat, 100.0 * (1.0 - tail))};
}

}  // namespace chromasim::stats
