#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>

#include "chromasim/dataset.hpp"
#include "chromasim/png_io.hpp"
#include "chromasim/seg_metrics.hpp"
#include "chromasim/stats.hpp"

namespace chromasim::dataset {
namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_number(const std::string& s) {
    if (s == "nan" || s.empty()) return std::numeric_limits<double>::quiet_NaN();
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw InputError("bad number '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw InputError("bad number '" + s + "'");
    }
}

// Masks keyed by path relative to the directory: mask_*.png anywhere below,
// or every top-level *.png when there are none.
std::map<std::string, fs::path> collect_masks(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw InputError("not a directory: " + dir.string());
    std::map<std::string, fs::path> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (e.is_regular_file() && name.rfind("mask_", 0) == 0 && e.path().extension() == ".png") {
            out[fs::relative(e.path(), dir).generic_string()] = e.path();
        }
    }
    if (!out.empty()) return out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().extension() == ".png") out[e.path().filename().string()] = e.path();
    }
    return out;
}

}  // namespace

ExtractResult extract_dataset(const fs::path& dataset_dir, int workers, const PixelCalibration& cal) {
    if (workers < 1) throw InputError("workers must be at least 1");
    const auto images = list_images(dataset_dir);
    std::vector<std::vector<BiomarkerVector>> per(images.size());
    std::vector<std::uint8_t> failed(images.size(), 0);
    const auto t0 = std::chrono::steady_clock::now();
#pragma omp parallel for num_threads(workers) schedule(dynamic)
    for (std::size_t i = 0; i < images.size(); ++i) {
        const auto& rec = images[i];
        const std::string id = fs::path(rec.image_path).replace_extension().generic_string();
        try {
            per[i] = extract_all(load_sample(dataset_dir, rec), cal, id);
        } catch (const std::exception& e) {
            BiomarkerVector v;
            v.image_id = id;
            v.tissue_class = "unknown";
            const double nan = std::numeric_limits<double>::quiet_NaN();
            v.area = v.area_um2 = v.perimeter = v.circularity = v.eccentricity = nan;
            v.sigma_mean_intensity = v.variance_slope = v.packing_dimension = v.entropy = nan;
            v.flags.push_back(std::string("image:") + e.what());
            per[i] = {v};
            failed[i] = 1;
        }
    }
    ExtractResult res;
    for (std::size_t i = 0; i < per.size(); ++i) {
        res.failed_images += failed[i];
        res.rows.insert(res.rows.end(), per[i].begin(), per[i].end());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cerr << "extract: " << images.size() << " images, " << res.rows.size() << " nuclei in " << secs << " s ("
              << (secs > 0 ? static_cast<double>(res.rows.size()) / secs : 0.0) << " nuclei/s)\n";
    return res;
}

std::vector<BiomarkerVector> read_biomarker_csv(const fs::path& path) {
    std::istringstream in(read_text(path));
    std::string line;
    if (!std::getline(in, line)) throw InputError("empty biomarker CSV");
    const auto header = split_csv_line(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;
    for (const char* need : {"tissue_class", "image_id", "nucleus_id", "area_px2", "perimeter_px", "circularity",
                             "eccentricity", "sigma_intensity", "variance_slope", "packing_D", "entropy_bits"}) {
        if (!col.count(need)) throw InputError(std::string("biomarker CSV lacks column '") + need + "'");
    }
    std::vector<BiomarkerVector> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() < header.size() - (col.count("flags") ? 1 : 0)) {
            throw InputError("biomarker CSV line " + std::to_string(lineno) + " is short");
        }
        auto num = [&](const char* c) { return parse_number(f[col.at(c)]); };
        BiomarkerVector v;
        v.image_id = f[col.at("image_id")];
        v.nucleus_id = static_cast<int>(num("nucleus_id"));
        v.tissue_class = f[col.at("tissue_class")];
        v.area = num("area_px2");
        v.area_um2 = col.count("area_um2") ? num("area_um2") : std::numeric_limits<double>::quiet_NaN();
        v.perimeter = num("perimeter_px");
        v.circularity = num("circularity");
        v.eccentricity = num("eccentricity");
        v.sigma_mean_intensity = num("sigma_intensity");
        v.variance_slope = num("variance_slope");
        v.packing_dimension = num("packing_D");
        v.entropy = num("entropy_bits");
        if (col.count("flags") && col.at("flags") < f.size() && !f[col.at("flags")].empty()) v.flags.push_back(f[col.at("flags")]);
        rows.push_back(v);
    }
    return rows;
}

EvaluateResult evaluate_dirs(const fs::path& pred, const fs::path& truth, std::uint64_t seed, std::size_t resamples) {
    const auto p = collect_masks(pred);
    const auto t = collect_masks(truth);
    std::string diff;
    for (const auto& [k, _] : p) {
        if (!t.count(k)) diff += " pred-only:" + k;
    }
    for (const auto& [k, _] : t) {
        if (!p.count(k)) diff += " truth-only:" + k;
    }
    if (!diff.empty()) throw InputError("prediction and truth file sets differ:" + diff);
    if (t.empty()) throw InputError("no masks found in " + truth.string());

    EvaluateResult res;
    std::vector<double> cols[4];
    res.per_image_csv = "image_id,dice,iou,precision,recall\n";
    for (const auto& [k, tpath] : t) {
        const auto m = overlap_metrics(binarize(io::read_mask(p.at(k))), binarize(io::read_mask(tpath)));
        res.per_image_csv += fs::path(k).replace_extension().generic_string() + "," + format_fixed(m.dice) + "," +
                             format_fixed(m.iou) + "," + format_fixed(m.precision) + "," + format_fixed(m.recall) + "\n";
        cols[0].push_back(m.dice), cols[1].push_back(m.iou), cols[2].push_back(m.precision), cols[3].push_back(m.recall);
    }
    res.mean_dice = stats::mean(cols[0]);
    res.mean_iou = stats::mean(cols[1]);
    res.mean_precision = stats::mean(cols[2]);
    res.mean_recall = stats::mean(cols[3]);
    res.summary_csv = "metric,mean,sd,median,ci95_lo,ci95_hi\n";
    const char* names[4] = {"dice", "iou", "precision", "recall"};
    for (int k = 0; k < 4; ++k) {
        const auto& v = cols[k];
        std::pair<double, double> ci{v.front(), v.front()};
        if (v.size() >= 2) ci = stats::bootstrap_ci(v, derive_stream(seed, static_cast<std::uint64_t>(k)), resamples);
        res.summary_csv += std::string(names[k]) + "," + format_fixed(stats::mean(v)) + "," +
                           format_fixed(stats::sample_sd(v)) + "," + format_fixed(stats::median(v)) + "," +
                           format_fixed(ci.first) + "," + format_fixed(ci.second) + "\n";
    }
    return res;
}

}  // namespace chromasim::dataset
