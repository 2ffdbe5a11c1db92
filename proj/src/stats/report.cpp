#include <cmath>
#include <cstdio>

#include "chromasim/stats.hpp"

namespace chromasim::stats {

PopulationReport population_report(const std::vector<BiomarkerVector>& rows, const ReportOptions& opt) {
    PopulationReport rep;
    rep.alpha = opt.alpha;
    rep.resamples = opt.resamples;
    rep.seed = opt.seed;
    rep.alpha_corrected = bonferroni(opt.alpha, kBiomarkerCount);
    for (int k = 0; k < kBiomarkerCount; ++k) {
        std::vector<double> a, b;
        for (const auto& r : rows) {
            if (!biomarker_valid(r, k)) continue;
            if (r.tissue_class == rep.group_a) a.push_back(biomarker_value(r, k));
            else if (r.tissue_class == rep.group_b) b.push_back(biomarker_value(r, k));
        }
        if (a.empty() || b.empty()) throw InputError("population report needs both classes for every metric");
        MetricSummary m;
        m.metric = biomarker_names()[static_cast<std::size_t>(k)];
        m.n_a = a.size(), m.n_b = b.size();
        m.mean_a = mean(a), m.sd_a = sample_sd(a);
        m.mean_b = mean(b), m.sd_b = sample_sd(b);
        m.mw = mann_whitney_u(a, b);
        m.significant = m.mw.p_two_sided < rep.alpha_corrected;
        m.d = (m.sd_a == 0.0 && m.sd_b == 0.0) ? 0.0 : cohens_d(m.mean_a, m.sd_a, m.mean_b, m.sd_b);
        std::vector<double> scores(a);
        scores.insert(scores.end(), b.begin(), b.end());
        std::vector<int> labels(a.size(), 0);
        labels.resize(scores.size(), 1);
        m.roc = roc_auc_youden(scores, labels);
        // Separate streams per metric and group.
        const auto s = static_cast<std::uint64_t>(k);
        m.ci_a = a.size() >= 2 ? bootstrap_ci(a, derive_stream(opt.seed, 2 * s), opt.resamples) : std::pair{m.mean_a, m.mean_a};
        m.ci_b = b.size() >= 2 ? bootstrap_ci(b, derive_stream(opt.seed, 2 * s + 1), opt.resamples) : std::pair{m.mean_b, m.mean_b};
        rep.metrics.push_back(m);
    }
    return rep;
}

namespace {

std::string sci(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

}  // namespace

std::string report_csv(const PopulationReport& r) {
    std::string out =
        "metric,n_normal,mean_normal,sd_normal,n_dysplasia,mean_dysplasia,sd_dysplasia,u,p_value,significant,"
        "cohens_d,auc,youden_threshold,sensitivity,specificity,ci_normal_lo,ci_normal_hi,ci_dysplasia_lo,ci_dysplasia_hi\n";
    for (const auto& m : r.metrics) {
        out += m.metric + "," + std::to_string(m.n_a) + "," + format_fixed(m.mean_a) + "," + format_fixed(m.sd_a) + "," +
               std::to_string(m.n_b) + "," + format_fixed(m.mean_b) + "," + format_fixed(m.sd_b) + "," +
               format_fixed(m.mw.u) + "," + sci(m.mw.p_two_sided) + "," + (m.significant ? "1" : "0") + "," +
               format_fixed(m.d) + "," + format_fixed(m.roc.auc) + "," + format_fixed(m.roc.youden_threshold) + "," +
               format_fixed(m.roc.sensitivity) + "," + format_fixed(m.roc.specificity) + "," + format_fixed(m.ci_a.first) +
               "," + format_fixed(m.ci_a.second) + "," + format_fixed(m.ci_b.first) + "," + format_fixed(m.ci_b.second) + "\n";
    }
    return out;
}

nlohmann::ordered_json report_json(const PopulationReport& r) {
    nlohmann::ordered_json j;
    j["group_a"] = r.group_a;
    j["group_b"] = r.group_b;
    j["alpha"] = r.alpha;
    j["alpha_corrected"] = r.alpha_corrected;
    j["comparisons"] = kBiomarkerCount;
    j["bootstrap_resamples"] = r.resamples;
    j["seed"] = r.seed;
    j["cohens_d_sign"] = "group_b minus group_a";
    j["psd_fit_band_cycles_per_px"] = {{"low", "4/N"}, {"high", kPsdBandHigh}};
    auto& rows = j["metrics"] = nlohmann::ordered_json::array();
    for (const auto& m : r.metrics) {
        nlohmann::ordered_json e;
        e["metric"] = m.metric;
        e[r.group_a] = {{"n", m.n_a}, {"mean", m.mean_a}, {"sd", m.sd_a}, {"ci95", {m.ci_a.first, m.ci_a.second}}};
        e[r.group_b] = {{"n", m.n_b}, {"mean", m.mean_b}, {"sd", m.sd_b}, {"ci95", {m.ci_b.first, m.ci_b.second}}};
        e["mann_whitney"] = {{"u", m.mw.u}, {"u_a", m.mw.u_a}, {"u_b", m.mw.u_b}, {"p_two_sided", m.mw.p_two_sided},
                             {"exact", m.mw.exact}, {"significant", m.significant}};
        e["cohens_d"] = m.d;
        e["roc"] = {{"auc", m.roc.auc}, {"youden_threshold", m.roc.youden_threshold},
                    {"sensitivity", m.roc.sensitivity}, {"specificity", m.roc.specificity}, {"youden_j", m.roc.youden_j}};
        rows.push_back(e);
    }
    return j;
}

}  // namespace chromasim::stats
