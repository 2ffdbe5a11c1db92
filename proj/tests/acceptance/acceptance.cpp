// End-to-end acceptance run. One PASS/FAIL line per criterion; the exit code
// is non-zero if any criterion fails. Wall-clock limits are part of each check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "chromasim/biomarkers.hpp"
#include "chromasim/dataset.hpp"
#include "chromasim/field_synthesis.hpp"
#include "chromasim/seg_metrics.hpp"
#include "chromasim/stats.hpp"
#include "cli.hpp"
#include "oracles.hpp"

using namespace chromasim;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

class Check {
public:
    void require(bool cond, const std::string& what) {
        if (!cond) {
            out_.ok = false;
            note("violated: " + what);
        }
    }
    void note(const std::string& s) {
        if (!out_.detail.empty()) out_.detail += "; ";
        out_.detail += s;
    }
    Outcome result() const { return out_; }

private:
    Outcome out_;
};

std::string fmt(double v, int prec = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    return buf;
}

fs::path scratch(const std::string& name) {
    const auto p = fs::temp_directory_path() / ("chromasim_acceptance_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double sd_of(const std::vector<double>& v) {
    const double m = mean_of(v);
    double s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// Image i of a synthetic run, exactly as the dataset generator seeds it.
FieldSample generated_cspws(std::uint64_t seed, int i, double class_mix) {
    SeededRng rng(seed, derive_stream(seed, static_cast<std::uint64_t>(i)));
    LayoutOptions lo;
    lo.class_mix = class_mix;
    SeededRng lrng = rng.derive(1);
    const auto layout = generate_layout(256, 256, lrng, lo);
    SeededRng rrng = rng.derive(2);
    return render_cspws(layout, rrng, RenderParams{});
}

int cli(std::vector<std::string> args) { return cli::run(args); }

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(oracle::file_bytes(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

// --- criteria ---------------------------------------------------------------

Outcome c1_composition() {
    Check c;
    for (auto m : {Modality::Adversarial, Modality::Cspws, Modality::He}) {
        dataset::DatasetConfig cfg;
        cfg.modality = m;
        int n[3] = {0, 0, 0};
        for (int i = 0; i < cfg.total(); ++i) {
            const auto s = dataset::split_of(cfg, i);
            n[s == "train" ? 0 : s == "val" ? 1 : 2]++;
        }
        c.require(n[0] == 1200 && n[1] == 200 && n[2] == 200, std::string(to_string(m)) + " default split 1200/200/200");
    }
    const auto root = scratch("c1");
    for (const std::string m : {"adversarial", "cspws", "he"}) {
        const int rc = cli({"--seed", "1", "--workers", "4", "--out", root.string(), "generate", "--modality", m, "--counts",
                            "12,2,2", "--image-size", "128"});
        c.require(rc == 0, m + " generate exit 0");
        int n[3] = {0, 0, 0};
        const char* splits[3] = {"train", "val", "test"};
        for (int k = 0; k < 3; ++k)
            for (const auto& e : fs::directory_iterator(root / m / splits[k]))
                n[k] += e.path().filename().string().rfind("img_", 0) == 0;
        c.require(n[0] == 12 && n[1] == 2 && n[2] == 2, m + " desk split 12/2/2");
        c.note(m + " " + std::to_string(n[0]) + "/" + std::to_string(n[1]) + "/" + std::to_string(n[2]));
    }
    fs::remove_all(root);
    return c.result();
}

Outcome c2_snr() {
    Check c;
    std::vector<double> snr;
    for (int i = 0; i < 100; ++i) {
        const auto s = generated_cspws(2024, i, 0.5);
        snr.push_back(measure_snr(s.image, s.mask));
    }
    const double m = mean_of(snr), sd = sd_of(snr);
    c.note("mean " + fmt(m, 2) + " dB, sd " + fmt(sd, 2) + " dB");
    c.require(m >= 6.8 && m <= 9.6, "mean SNR in [6.8, 9.6]");
    c.require(sd <= 2.5, "SNR sd <= 2.5");
    return c.result();
}

Outcome c3_nuclear_statistics() {
    Check c;
    std::vector<double> counts;
    double amin = 1e9, amax = 0;
    for (int i = 0; i < 200; ++i) {
        SeededRng rng(3030, derive_stream(3030, static_cast<std::uint64_t>(i)));
        const auto l = generate_layout(256, 256, rng);
        const auto mask = rasterize_mask(l);
        counts.push_back(static_cast<double>(l.nuclei.size()));
        c.require(l.nuclei.size() >= 15 && l.nuclei.size() <= 85, "count in [15, 85] (layout " + std::to_string(i) + ")");
        for (const auto& n : l.nuclei) {
            const double a = static_cast<double>(label_area(mask, static_cast<std::uint16_t>(n.id)));
            amin = std::min(amin, a), amax = std::max(amax, a);
        }
    }
    const double m = mean_of(counts);
    c.note("mean count " + fmt(m, 2) + " (sd " + fmt(sd_of(counts), 2) + "), min " +
           fmt(*std::min_element(counts.begin(), counts.end()), 0) + ", max " +
           fmt(*std::max_element(counts.begin(), counts.end()), 0) + "; areas [" + fmt(amin, 0) + ", " + fmt(amax, 0) + "]");
    c.require(m >= 36 && m <= 48, "mean count in [36, 48]");
    c.require(amin >= 500 && amax <= 3000, "areas in [500, 3000]");
    return c.result();
}

Outcome c4_morphometric_fixtures() {
    Check c;
    const auto disk = morphometrics(oracle::disk(64, 32, 32, 20), 1);
    const auto sq = morphometrics(oracle::rect(64, 10, 10, 30, 30), 1);
    c.note("disk circ " + fmt(disk.circularity) + " ecc " + fmt(disk.eccentricity) + "; square circ " + fmt(sq.circularity) +
           " (pi/4 = " + fmt(std::numbers::pi / 4) + ")");
    c.require(disk.circularity >= 0.92 && disk.circularity <= 1.02, "disk circularity in [0.92, 1.02]");
    c.require(disk.eccentricity <= 0.1, "disk eccentricity <= 0.1");
    c.require(std::abs(sq.circularity - std::numbers::pi / 4) <= 0.06, "square circularity within 0.06 of pi/4");
    return c.result();
}

Outcome c5_spectral() {
    Check c;
    // Full-field nucleus: packing_dimension goes through the same patch path
    // the extractor uses.
    const InstanceMask all(256, 256, 1);
    for (double beta : {1.0, 2.0, 3.0}) {
        double sum = 0;
        for (int s = 0; s < 20; ++s) {
            SeededRng rng(5050 + static_cast<std::uint64_t>(beta), static_cast<std::uint64_t>(s));
            const auto f = power_law_field(256, 256, beta, rng);
            const auto fit = packing_dimension(f, all, 1);
            c.require(fit.dimension == (6.0 - fit.beta) / 2.0, "D = (6 - beta) / 2 exactly");
            sum += fit.beta;
        }
        c.note("beta " + fmt(beta, 0) + " -> " + fmt(sum / 20, 3));
        c.require(std::abs(sum / 20 - beta) <= 0.2, "beta " + fmt(beta, 0) + " recovered within 0.2");
    }
    SeededRng rng(5055, 0);
    const auto fb = packing_dimension(fbm_field(256, 256, 0.7, rng), all, 1);
    c.note("fbm(H=0.7) beta " + fmt(fb.beta, 3));
    c.require(fb.beta >= 3.1 && fb.beta <= 3.7, "fbm(H=0.7) beta in [3.1, 3.7]");
    return c.result();
}

Outcome c6_wavelet() {
    Check c;
    const InstanceMask all(128, 128, 1);
    double lo = 1e9, hi = -1e9;
    for (int s = 0; s < 50; ++s) {
        SeededRng rng(6060, static_cast<std::uint64_t>(s));
        ScalarField f(128, 128);
        for (auto& v : f.values()) v = rng.normal();
        const double a = variance_slope(f, all, 1);
        lo = std::min(lo, a), hi = std::max(hi, a);
    }
    c.note("white [" + fmt(lo, 3) + ", " + fmt(hi, 3) + "]");
    c.require(lo >= -0.15 && hi <= 0.15, "white-noise alpha in [-0.15, 0.15] for every seed");
    for (double h : {0.3, 0.7}) {
        double wlo = 1e9, whi = -1e9, fbm_mean = 0;
        for (int s = 0; s < 50; ++s) {
            SeededRng rng(6161 + static_cast<std::uint64_t>(10 * h), static_cast<std::uint64_t>(s));
            // Synthesized so Var(l) ~ l^(2H) under the orthonormal DWT.
            const double a = variance_slope(power_law_field(128, 128, 2 * h, rng), all, 1);
            wlo = std::min(wlo, a), whi = std::max(whi, a);
            fbm_mean += variance_slope(fbm_field(128, 128, h, rng), all, 1) / 50;
        }
        c.note("H " + fmt(h, 1) + " [" + fmt(wlo, 3) + ", " + fmt(whi, 3) + "], fbm_field alpha mean " + fmt(fbm_mean, 3));
        c.require(wlo >= 2 * h - 0.3 && whi <= 2 * h + 0.3, "alpha within 0.3 of 2H for every seed");
    }
    return c.result();
}

Outcome c7_entropy() {
    Check c;
    std::vector<double> uni, two(64, 0.2);
    for (int b = 0; b < 16; ++b)
        for (int k = 0; k < 4; ++k) uni.push_back((b + 0.25 + 0.125 * k) / 16.0);
    two.insert(two.end(), 64, 0.7);
    const double h0 = entropy_bits(std::vector<double>(50, 0.4)), h4 = entropy_bits(uni), h1 = entropy_bits(two);
    c.require(std::abs(h0) <= 1e-12, "constant -> 0 bits");
    c.require(std::abs(h4 - 4) <= 1e-12, "uniform -> 4 bits");
    c.require(std::abs(h1 - 1) <= 1e-12, "two bins -> 1 bit");
    c.note(fmt(h0, 12) + " / " + fmt(h4, 12) + " / " + fmt(h1, 12));
    return c.result();
}

Outcome c8_loss_oracles() {
    Check c;
    auto pattern = [](unsigned bits) {
        BinaryMask m(3, 3, 0);
        for (int i = 0; i < 9; ++i) m.values()[static_cast<std::size_t>(i)] = (bits >> i) & 1u;
        return m;
    };
    long overlap_bad = 0, lovasz_bad = 0;
    for (unsigned p = 0; p < 512; ++p)
        for (unsigned t = 0; t < 512; ++t) {
            const auto pm = pattern(p), tm = pattern(t);
            const auto r = overlap_metrics(pm, tm);
            const auto k = oracle::confusion(pm, tm);
            overlap_bad += r.dice != oracle::dice(k) || r.iou != oracle::iou(k) || r.precision != oracle::precision(k) ||
                           r.recall != oracle::recall(k);
            if (t == 0) continue;
            ScalarField probs(3, 3);
            for (std::size_t i = 0; i < 9; ++i) probs.values()[i] = pm.values()[i];
            lovasz_bad += lovasz_loss(probs, tm) != 1.0 - oracle::iou(k);
        }
    c.require(overlap_bad == 0, "overlap_metrics equals counting oracle on all 262144 pairs");
    c.require(lovasz_bad == 0, "lovasz_loss equals 1 - IoU on all binary vertices");
    BinaryMask t(2, 1, 0);
    t(0, 0) = 1;
    ScalarField p(2, 1);
    p(0, 0) = 0.5, p(1, 0) = 1.0;
    c.require(std::abs(dice_loss(p, t) - (1 - 2 / 3.25)) <= 1e-12, "dice_loss (0.5, 1) vs (1, 0)");
    ScalarField pt(2, 1);
    pt(0, 0) = 1;
    c.require(std::abs(dice_loss(pt, t)) <= 1e-12, "dice_loss perfect");
    c.require(std::abs(dice_loss(ScalarField(2, 1, 0.0), BinaryMask(2, 1, 0))) <= 1e-12, "dice_loss empty/empty");
    c.note("overlap mismatches " + std::to_string(overlap_bad) + ", lovasz mismatches " + std::to_string(lovasz_bad));
    return c.result();
}

Outcome c9_stats_oracles() {
    Check c;
    // Every split of every tie pattern would be excessive; every (n_a, n_b)
    // with n_a + n_b <= 10 over several value draws including ties.
    long cases = 0, bad = 0;
    SeededRng rng(9090, 0);
    for (int na = 1; na <= 9; ++na)
        for (int nb = 1; na + nb <= 10; ++nb)
            for (int rep = 0; rep < 6; ++rep) {
                std::vector<double> a(na), b(nb);
                const std::uint64_t levels = rep % 2 ? 4 : 1000;
                for (auto& v : a) v = static_cast<double>(rng.below(levels));
                for (auto& v : b) v = static_cast<double>(rng.below(levels));
                const auto r = stats::mann_whitney_u(a, b, stats::MwMode::Exact);
                ++cases;
                bad += std::abs(r.p_two_sided - oracle::enumerate_mw_p(a, b)) > 1e-12;
            }
    c.require(bad == 0, "exact Mann-Whitney equals enumeration");
    long auc_bad = 0;
    for (int f = 0; f < 1000; ++f) {
        const int n = 4 + static_cast<int>(rng.below(30));
        std::vector<double> s(static_cast<std::size_t>(n)), a, b;
        std::vector<int> l(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            s[i] = std::round(rng.normal() * 3) / 3;
            l[i] = i < 2 ? i : static_cast<int>(rng.below(2));
            (l[i] ? b : a).push_back(s[i]);
        }
        const double expect = oracle::pairwise_u(a, b) / static_cast<double>(a.size() * b.size());
        auc_bad += std::abs(stats::roc_auc_youden(s, l).auc - expect) > 1e-12;
        auc_bad += std::abs(stats::mann_whitney_u(a, b).u_b / static_cast<double>(a.size() * b.size()) - expect) > 1e-12;
    }
    c.require(auc_bad == 0, "AUC = U / (n_a n_b) on 1000 fixtures");
    c.require(stats::bonferroni(0.05, 8) == 0.00625, "bonferroni(0.05, 8) = 0.00625");
    c.note(std::to_string(cases) + " exact cases, " + std::to_string(bad) + " mismatches; AUC mismatches " +
           std::to_string(auc_bad));
    return c.result();
}

Outcome c10_cohens_d() {
    Check c;
    const double hand = 601.0 / std::sqrt((156.0 * 156.0 + 224.0 * 224.0) / 2.0);
    const double d = stats::cohens_d(1201, 156, 1802, 224);
    c.require(std::abs(d - hand) <= 1e-9, "d equals hand arithmetic");
    c.note("d = " + fmt(d, 6) + " (reference value 2.98; difference " + fmt(d - 2.98, 3) + " logged)");
    return c.result();
}

Outcome c11_population_direction() {
    Check c;
    std::vector<double> normal, dysplasia;
    for (int i = 0; (normal.size() < 500 || dysplasia.size() < 500) && i < 400; ++i) {
        const auto s = generated_cspws(1111, i, 0.5);
        for (const auto& r : extract_all(s)) {
            if (!std::isfinite(r.sigma_mean_intensity)) continue;
            auto& dst = r.tissue_class == "dysplasia" ? dysplasia : normal;
            if (dst.size() < 500) dst.push_back(r.sigma_mean_intensity);
        }
    }
    c.require(normal.size() == 500 && dysplasia.size() == 500, "500 nuclei per class");
    const auto mw = stats::mann_whitney_u(normal, dysplasia);
    const double d = stats::cohens_d(normal, dysplasia);
    c.note("sigma mean normal " + fmt(mean_of(normal)) + " dysplasia " + fmt(mean_of(dysplasia)) + "; p " +
           std::to_string(mw.p_two_sided) + "; d " + fmt(d, 3));
    c.require(mean_of(dysplasia) > mean_of(normal), "dysplasia sigma higher");
    c.require(mw.p_two_sided < 1e-6, "p < 1e-6");
    c.require(d > 0.8, "d > 0.8");
    return c.result();
}

// Pipeline outputs of one run, path -> bytes.
std::vector<std::pair<std::string, std::string>> pipeline(const fs::path& root, int workers) {
    const auto w = std::to_string(workers);
    const auto data = root / "data";
    cli({"--seed", "77", "--workers", w, "--out", data.string(), "generate", "--counts", "12,2,2"});
    cli({"--workers", w, "--out", (root / "bio.csv").string(), "extract", "--data", data.string()});
    cli({"--seed", "77", "--workers", w, "--out", (root / "report").string(), "report", "--in", (root / "bio.csv").string(),
         "--resamples", "2000"});
    std::vector<std::pair<std::string, std::string>> files;
    for (const auto& e : fs::recursive_directory_iterator(root))
        if (e.is_regular_file()) files.emplace_back(fs::relative(e.path(), root).string(), oracle::file_bytes(e.path()));
    std::sort(files.begin(), files.end());
    return files;
}

Outcome c12_determinism() {
    Check c;
    const auto a = scratch("c12a"), b = scratch("c12b"), d = scratch("c12c");
    const auto ra = pipeline(a, 1), rb = pipeline(b, 1), rd = pipeline(d, 4);
    c.require(ra.size() >= 16 * 3 + 3, "pipeline produced its files");
    c.require(ra == rb, "two runs byte-identical");
    c.require(ra == rd, "workers 1 and 4 byte-identical");
    c.note(std::to_string(ra.size()) + " files compared");
    fs::remove_all(a), fs::remove_all(b), fs::remove_all(d);
    return c.result();
}

Outcome c13_self_evaluation() {
    Check c;
    const auto root = scratch("c13");
    cli({"--seed", "13", "--out", (root / "data").string(), "generate", "--counts", "4,0,0", "--image-size", "128"});
    const auto masks = (root / "data" / "cspws" / "train").string();
    const int rc = cli({"--seed", "13", "--out", (root / "eval.csv").string(), "evaluate", "--pred", masks, "--truth", masks,
                        "--resamples", "200"});
    c.require(rc == 0, "evaluate exit 0");
    const auto rows = read_csv(root / "eval.csv");
    c.require(rows.size() == 5, "one row per mask");
    for (std::size_t i = 1; i < rows.size(); ++i)
        for (std::size_t k = 1; k < rows[i].size(); ++k) c.require(rows[i][k] == "1.000000", "per-image metric = 1");
    const auto res = dataset::evaluate_dirs(masks, masks, 13, 200);
    c.require(res.mean_dice == 1.0 && res.mean_iou == 1.0 && res.mean_precision == 1.0 && res.mean_recall == 1.0,
              "mean Dice = IoU = P = R = 1 exactly");
    c.note(std::to_string(rows.size() - 1) + " masks, every metric 1.000000");
    fs::remove_all(root);
    return c.result();
}

Outcome c14_sensitivity() {
    Check c;
    const auto root = scratch("c14");
    cli({"--seed", "14", "--workers", "4", "--out", (root / "data").string(), "generate", "--counts", "50,0,0"});
    const int rc = cli({"--out", (root / "sens.csv").string(), "sensitivity", "--data", (root / "data").string()});
    c.require(rc == 0, "sensitivity exit 0");
    const auto rows = read_csv(root / "sens.csv");
    c.require(rows.size() == 12, "header + control + 10 offset rows");
    if (rows.size() != 12) return c.result();
    const auto& head = rows[0];
    c.require(head.size() == 3 + 2 * 8, "8 metrics x (mean, median)");
    std::vector<int> offsets;
    std::vector<double> area;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        offsets.push_back(std::stoi(rows[r][0]));
        for (std::size_t k = 3; k < rows[r].size(); ++k) {
            const double v = std::stod(rows[r][k]);
            c.require(std::isfinite(v), "finite cell");
            if (r == 1) c.require(v == 0.0, "control row zero");
        }
        area.push_back(std::stod(rows[r][3]));
    }
    c.require(offsets == std::vector<int>({0, -5, -4, -3, -2, -1, 1, 2, 3, 4, 5}), "offset rows 0, -5..-1, 1..5");
    bool mono = true;
    for (int k = 1; k <= 4; ++k) {
        mono &= area[static_cast<std::size_t>(6 + k)] >= area[static_cast<std::size_t>(5 + k)];   // +k+1 vs +k
        mono &= area[static_cast<std::size_t>(5 - k)] >= area[static_cast<std::size_t>(6 - k)];   // -(k+1) vs -k
    }
    c.require(mono, "area error monotone in |offset|");
    std::string line;
    for (std::size_t r = 1; r < area.size(); ++r) line += std::to_string(offsets[r]) + ":" + fmt(area[r], 3) + " ";
    c.note("area mean rel. error " + line);
    fs::remove_all(root);
    return c.result();
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;  // 0 = no limit
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "dataset composition", 10, c1_composition},
        {2, "csPWS SNR", 60, c2_snr},
        {3, "nuclear statistics", 60, c3_nuclear_statistics},
        {4, "morphometric fixtures", 1, c4_morphometric_fixtures},
        {5, "spectral estimator", 120, c5_spectral},
        {6, "wavelet estimator", 120, c6_wavelet},
        {7, "entropy exactness", 0, c7_entropy},
        {8, "loss and metric oracles", 30, c8_loss_oracles},
        {9, "statistics oracles", 60, c9_stats_oracles},
        {10, "Cohen's d formula", 0, c10_cohens_d},
        {11, "population direction", 300, c11_population_direction},
        {12, "determinism and parallel safety", 120, c12_determinism},
        {13, "self-evaluation", 0, c13_self_evaluation},
        {14, "sensitivity table", 0, c14_sensitivity},
    };
    int failed = 0;
    for (const auto& cr : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.run();
        } catch (const std::exception& e) {
            o.ok = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (cr.limit_s > 0 && secs > cr.limit_s) {
            o.ok = false;
            o.detail += "; over time limit " + fmt(cr.limit_s, 0) + " s";
        }
        failed += !o.ok;
        std::cout << (o.ok ? "PASS" : "FAIL") << " criterion " << cr.id << " (" << cr.name << ", " << fmt(secs, 2)
                  << " s): " << o.detail << std::endl;
    }
    std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
    return failed ? 1 : 0;
}
