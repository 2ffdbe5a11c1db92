#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "chromasim/biomarkers.hpp"

namespace chromasim::stats {

enum class MwMode { Exact, NormalApprox, Auto };

struct MannWhitney {
    double u = 0.0;      // min(u_a, u_b)
    double u_a = 0.0;    // pairs with a > b, ties counted 1/2
    double u_b = 0.0;    // pairs with b > a, ties counted 1/2
    double p_two_sided = 1.0;
    bool exact = false;
};

inline constexpr std::size_t kExactLimit = 16;

/// Midranks for ties. Exact p enumerates every split of the pooled ranks.
MannWhitney mann_whitney_u(const std::vector<double>& a, const std::vector<double>& b, MwMode mode = MwMode::Auto);

/// (mu2 - mu1) / sqrt((s1^2 + s2^2) / 2); group b minus group a.
double cohens_d(double mean_a, double sd_a, double mean_b, double sd_b);
/// Sample SDs (n - 1).
double cohens_d(const std::vector<double>& a, const std::vector<double>& b);

struct RocResult {
    double auc = 0.5;
    double youden_threshold = 0.0;  // predict positive when score > threshold
    double sensitivity = 0.0;
    double specificity = 0.0;
    double youden_j = 0.0;
};

/// labels: 1 = positive (group b).
RocResult roc_auc_youden(const std::vector<double>& scores, const std::vector<int>& labels);

double ks_statistic(const std::vector<double>& a, const std::vector<double>& b);

/// Percentile interval of the bootstrap mean. Resamples are drawn in blocks,
/// each block from its own derived stream.
std::pair<double, double> bootstrap_ci(const std::vector<double>& values, std::uint64_t seed,
                                       std::size_t resamples = 10000, double level = 0.95);

double bonferroni(double alpha, int k);

double mean(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);
double median(std::vector<double> v);

struct MetricSummary {
    std::string metric;
    std::size_t n_a = 0, n_b = 0;
    double mean_a = 0, sd_a = 0, mean_b = 0, sd_b = 0;
    MannWhitney mw;
    bool significant = false;  // p below the Bonferroni-corrected level
    double d = 0.0;
    RocResult roc;
    std::pair<double, double> ci_a{0, 0}, ci_b{0, 0};
};

struct PopulationReport {
    std::string group_a = "normal";
    std::string group_b = "dysplasia";
    double alpha = 0.05;
    double alpha_corrected = 0.05;
    std::size_t resamples = 10000;
    std::uint64_t seed = 0;
    std::vector<MetricSummary> metrics;
};

struct ReportOptions {
    double alpha = 0.05;
    std::size_t resamples = 10000;
    std::uint64_t seed = 0;
};

/// Rows classed "normal" form group a, "dysplasia" group b; each metric uses
/// only the nuclei where it is finite.
PopulationReport population_report(const std::vector<BiomarkerVector>& rows, const ReportOptions& opt = {});
std::string report_csv(const PopulationReport& r);
nlohmann::ordered_json report_json(const PopulationReport& r);

}  // namespace chromasim::stats
