#include <algorithm>
#include <cmath>
#include <map>

#include "chromasim/seg_metrics.hpp"

namespace chromasim {
namespace {

struct Partial {
    std::size_t n_nuclei = 0;
    std::size_t n_annihilated = 0;
    std::vector<std::vector<double>> errors;  // per biomarker
};

Partial compare(const FieldSample& s, const std::vector<BiomarkerVector>& base, int offset, const PixelCalibration& cal) {
    Partial out;
    out.errors.resize(kBiomarkerCount);
    InstanceMask mask = s.mask;
    if (offset != 0) {
        PerturbResult pr = perturb_mask(s.mask, offset);
        mask = std::move(pr.mask);
        out.n_annihilated = pr.annihilated.size();
    }
    const auto perturbed = extract_all(s.image, mask, s.layout.nuclei, cal);
    std::map<int, const BiomarkerVector*> by_id;
    for (const auto& v : perturbed) by_id[v.nucleus_id] = &v;
    for (const auto& b : base) {
        const auto it = by_id.find(b.nucleus_id);
        if (it == by_id.end()) continue;
        ++out.n_nuclei;
        for (int k = 0; k < kBiomarkerCount; ++k) {
            if (!biomarker_valid(b, k) || !biomarker_valid(*it->second, k)) continue;
            const double ref = biomarker_value(b, k);
            if (std::abs(ref) < 1e-12) continue;
            out.errors[static_cast<std::size_t>(k)].push_back(std::abs(biomarker_value(*it->second, k) - ref) / std::abs(ref));
        }
    }
    return out;
}

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

SensitivityTable sensitivity_analysis(const std::vector<FieldSample>& samples, const std::vector<int>& offsets,
                                      const PixelCalibration& cal) {
    std::vector<int> signed_offsets{0};
    std::vector<int> mags(offsets);
    for (int m : mags) {
        if (m < 1 || m > 5) throw ParameterError("sensitivity offsets must lie in 1..5");
    }
    std::sort(mags.begin(), mags.end());
    mags.erase(std::unique(mags.begin(), mags.end()), mags.end());
    for (auto it = mags.rbegin(); it != mags.rend(); ++it) signed_offsets.push_back(-*it);
    for (int m : mags) signed_offsets.push_back(m);

    const std::size_t ns = samples.size();
    const std::size_t no = signed_offsets.size();
    std::vector<Partial> parts(ns * no);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < ns; ++i) {
        const auto base = extract_all(samples[i], cal);
        for (std::size_t j = 0; j < no; ++j) parts[i * no + j] = compare(samples[i], base, signed_offsets[j], cal);
    }

    SensitivityTable t;
    for (std::size_t j = 0; j < no; ++j) {
        SensitivityRow row;
        row.offset = signed_offsets[j];
        std::vector<std::vector<double>> errs(kBiomarkerCount);
        for (std::size_t i = 0; i < ns; ++i) {
            const Partial& p = parts[i * no + j];
            row.n_nuclei += p.n_nuclei;
            row.n_annihilated += p.n_annihilated;
            for (int k = 0; k < kBiomarkerCount; ++k) {
                auto& dst = errs[static_cast<std::size_t>(k)];
                const auto& src = p.errors[static_cast<std::size_t>(k)];
                dst.insert(dst.end(), src.begin(), src.end());
            }
        }
        for (const auto& e : errs) {
            double s = 0.0;
            for (double v : e) s += v;
            row.mean.push_back(e.empty() ? 0.0 : s / static_cast<double>(e.size()));
            row.median.push_back(median_of(e));
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

std::string sensitivity_csv(const SensitivityTable& t) {
    std::string out = "offset,n_nuclei,n_annihilated";
    for (const auto& n : biomarker_names()) out += "," + n + "_mean," + n + "_median";
    out += "\n";
    for (const auto& r : t.rows) {
        out += std::to_string(r.offset) + "," + std::to_string(r.n_nuclei) + "," + std::to_string(r.n_annihilated);
        for (std::size_t k = 0; k < r.mean.size(); ++k) out += "," + format_fixed(r.mean[k]) + "," + format_fixed(r.median[k]);
        out += "\n";
    }
    return out;
}

}  // namespace chromasim
