#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

#include "chromasim/dataset.hpp"
#include "chromasim/seg_metrics.hpp"
#include "chromasim/serialization.hpp"
#include "chromasim/stats.hpp"

namespace chromasim::cli {
namespace {

namespace fs = std::filesystem;
using dataset::DatasetConfig;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kPartial = 2;

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(tok, &used));
            if (used != tok.size()) throw InputError("");
        } catch (const std::exception&) {
            throw InputError("bad integer list '" + s + "'");
        }
    }
    return out;
}

// key=value with a JSON value, falling back to a bare string.
nlohmann::json parse_assignment(const std::string& kv, std::string& key) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw InputError("expected key=value, got '" + kv + "'");
    key = kv.substr(0, eq);
    const std::string val = kv.substr(eq + 1);
    try {
        return nlohmann::json::parse(val);
    } catch (const nlohmann::json::parse_error&) {
        return val;
    }
}

std::string join_rows(const std::vector<BiomarkerVector>& rows) {
    std::string out = biomarker_csv_header() + "\n";
    for (const auto& r : rows) out += biomarker_csv_row(r) + "\n";
    return out;
}

void emit_plot_data(const fs::path& dir, const std::vector<BiomarkerVector>& rows) {
    constexpr int kBins = 20;
    for (int k = 0; k < kBiomarkerCount; ++k) {
        std::vector<double> a, b;
        for (const auto& r : rows) {
            if (!biomarker_valid(r, k)) continue;
            if (r.tissue_class == "normal") a.push_back(biomarker_value(r, k));
            else if (r.tissue_class == "dysplasia") b.push_back(biomarker_value(r, k));
        }
        const std::string name = biomarker_names()[static_cast<std::size_t>(k)];
        std::vector<double> all(a);
        all.insert(all.end(), b.begin(), b.end());
        std::sort(all.begin(), all.end());
        std::string hist = "bin_lo,bin_hi,count_normal,count_dysplasia\n";
        std::string cdf = "value,cdf_normal,cdf_dysplasia\n";
        if (!all.empty()) {
            const double lo = all.front();
            const double hi = all.back() > lo ? all.back() : lo + 1.0;
            std::vector<int> ca(kBins, 0), cb(kBins, 0);
            auto bin = [&](double v) { return std::clamp(static_cast<int>((v - lo) / (hi - lo) * kBins), 0, kBins - 1); };
            for (double v : a) ++ca[static_cast<std::size_t>(bin(v))];
            for (double v : b) ++cb[static_cast<std::size_t>(bin(v))];
            for (int i = 0; i < kBins; ++i) {
                hist += format_fixed(lo + (hi - lo) * i / kBins) + "," + format_fixed(lo + (hi - lo) * (i + 1) / kBins) + "," +
                        std::to_string(ca[static_cast<std::size_t>(i)]) + "," + std::to_string(cb[static_cast<std::size_t>(i)]) + "\n";
            }
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            all.erase(std::unique(all.begin(), all.end()), all.end());
            for (double x : all) {
                const auto fa = a.empty() ? 0.0 : static_cast<double>(std::upper_bound(a.begin(), a.end(), x) - a.begin()) / static_cast<double>(a.size());
                const auto fb = b.empty() ? 0.0 : static_cast<double>(std::upper_bound(b.begin(), b.end(), x) - b.begin()) / static_cast<double>(b.size());
                cdf += format_fixed(x) + "," + format_fixed(fa) + "," + format_fixed(fb) + "\n";
            }
        }
        dataset::write_atomic(dir / ("plot_" + name + "_hist.csv"), hist);
        dataset::write_atomic(dir / ("plot_" + name + "_cdf.csv"), cdf);
    }
}

struct Globals {
    std::optional<std::uint64_t> seed;
    int workers = 1;
    std::string out;
    std::string config;
    bool emit_plot_data = false;
};

DatasetConfig base_config(const Globals& g) {
    DatasetConfig cfg = g.config.empty() ? DatasetConfig{} : dataset::load_config(g.config);
    if (g.seed) cfg.master_seed = *g.seed;
    return cfg;
}

int run_parsed(CLI::App& app, const std::map<std::string, std::function<int()>>& handlers) {
    for (const auto& [name, fn] : handlers) {
        if (app.got_subcommand(name)) return fn();
    }
    std::cerr << app.help();
    return kInputError;
}

}  // namespace

int run(int argc, const char* const* argv) {
    CLI::App app{"Synthetic chromatin microscopy datasets, biomarkers and statistics"};
    app.set_version_flag("--version", CHROMASIM_VERSION);
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "master seed");
    app.add_option("--workers", g.workers, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--out", g.out, "output path");
    app.add_option("--config", g.config, "JSON config file")->check(CLI::ExistingFile);
    app.add_flag("--emit-plot-data", g.emit_plot_data, "write histogram/CDF CSVs for plotting");

    // generate
    auto* gen = app.add_subcommand("generate", "render a dataset with masks, sidecars and manifest");
    std::string modality, counts, dump_dir;
    std::optional<int> image_size;
    std::optional<double> class_mix;
    std::vector<std::string> sets;
    gen->add_option("--modality", modality, "adversarial | cspws | he");
    gen->add_option("--counts", counts, "train,val,test");
    gen->add_option("--image-size", image_size, "square image side in pixels");
    gen->add_option("--class-mix", class_mix, "fraction of dysplasia nuclei");
    gen->add_option("--set", sets, "render parameter override key=value (repeatable)");
    gen->add_option("--dump-fields", dump_dir, "write intermediate fields as 16-bit PNGs");

    auto* ver = app.add_subcommand("verify", "re-hash every file listed in a manifest");
    std::string verify_dir;
    ver->add_option("dir", verify_dir, "dataset directory")->required();

    auto* ext = app.add_subcommand("extract", "per-nucleus biomarkers to CSV");
    std::string ext_data;
    ext->add_option("--data", ext_data, "dataset directory")->required();

    auto* eva = app.add_subcommand("evaluate", "overlap metrics of predicted vs truth masks");
    std::string pred_dir, truth_dir;
    std::size_t eval_resamples = 10000;
    eva->add_option("--pred", pred_dir, "predicted mask directory")->required();
    eva->add_option("--truth", truth_dir, "ground-truth mask directory")->required();
    eva->add_option("--resamples", eval_resamples, "bootstrap resamples")->check(CLI::PositiveNumber);

    auto* rep = app.add_subcommand("report", "population statistics from a biomarker CSV");
    std::string rep_in;
    double alpha = 0.05;
    std::size_t resamples = 10000;
    rep->add_option("--in", rep_in, "biomarker CSV")->required()->check(CLI::ExistingFile);
    rep->add_option("--alpha", alpha, "family-wise significance level");
    rep->add_option("--resamples", resamples, "bootstrap resamples")->check(CLI::PositiveNumber);

    auto* sen = app.add_subcommand("sensitivity", "biomarker error under mask dilation/erosion");
    std::string sen_data, offsets = "1,2,3,4,5";
    int limit = 0;
    sen->add_option("--data", sen_data, "dataset directory")->required();
    sen->add_option("--offsets", offsets, "comma-separated magnitudes in 1..5");
    sen->add_option("--limit", limit, "use only the first N images (0 = all)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }
    if (seed_opt->count()) g.seed = seed_value;

    const std::map<std::string, std::function<int()>> handlers{
        {"generate",
         [&] {
             DatasetConfig cfg = base_config(g);
             if (!modality.empty()) {
                 try {
                     cfg.modality = parse_modality(modality);
                 } catch (const ParameterError& e) {
                     throw InputError(e.what());
                 }
             }
             if (!counts.empty()) {
                 const auto c = parse_int_list(counts);
                 if (c.size() != 3) throw InputError("--counts needs train,val,test");
                 cfg.train = c[0], cfg.val = c[1], cfg.test = c[2];
             }
             if (image_size) cfg.image_size = *image_size;
             if (class_mix) cfg.class_mix = *class_mix;
             for (const auto& kv : sets) {
                 std::string key;
                 nlohmann::json v = parse_assignment(kv, key);
                 apply_overrides(cfg.render, nlohmann::json{{key, v}});
             }
             dataset::GenerateOptions opt;
             opt.workers = g.workers;
             if (!dump_dir.empty()) opt.dump_fields = fs::path(dump_dir);
             const auto res = dataset::generate_dataset(cfg, g.out.empty() ? fs::path("data") : fs::path(g.out), opt);
             std::cerr << "generate: " << res.generated << " images in " << res.dataset_dir.string() << "\n";
             for (const auto& f : res.failures) std::cerr << "failed: " << f << "\n";
             return res.failures.empty() ? kOk : kPartial;
         }},
        {"verify",
         [&] {
             const auto issues = dataset::verify_manifest(verify_dir);
             for (const auto& i : issues) std::cout << i.problem << ": " << i.path << "\n";
             if (issues.empty()) std::cout << "ok\n";
             return issues.empty() ? kOk : kPartial;
         }},
        {"extract",
         [&] {
             const fs::path dir = dataset::resolve_dataset_dir(ext_data);
             DatasetConfig cfg = base_config(g);
             PixelCalibration cal{cfg.pixel_size};
             const auto res = dataset::extract_dataset(dir, g.workers, cal);
             const fs::path out = g.out.empty() ? dir / "biomarkers.csv" : fs::path(g.out);
             dataset::write_atomic(out, join_rows(res.rows));
             if (g.emit_plot_data) emit_plot_data(out.parent_path().empty() ? fs::path(".") : out.parent_path(), res.rows);
             return res.failed_images ? kPartial : kOk;
         }},
        {"evaluate",
         [&] {
             const auto res = dataset::evaluate_dirs(pred_dir, truth_dir, g.seed.value_or(0), eval_resamples);
             const fs::path out = g.out.empty() ? fs::path("evaluation.csv") : fs::path(g.out);
             dataset::write_atomic(out, res.per_image_csv);
             fs::path summary = out;
             summary.replace_filename(out.stem().string() + "_summary.csv");
             dataset::write_atomic(summary, res.summary_csv);
             std::cout << "dice " << format_fixed(res.mean_dice) << " iou " << format_fixed(res.mean_iou) << " precision "
                       << format_fixed(res.mean_precision) << " recall " << format_fixed(res.mean_recall) << "\n";
             return kOk;
         }},
        {"report",
         [&] {
             const auto rows = dataset::read_biomarker_csv(rep_in);
             stats::ReportOptions opt;
             opt.alpha = alpha;
             opt.resamples = resamples;
             opt.seed = g.seed.value_or(0);
             const auto r = stats::population_report(rows, opt);
             const fs::path dir = g.out.empty() ? fs::path("report") : fs::path(g.out);
             dataset::write_atomic(dir / "population_report.csv", stats::report_csv(r));
             dataset::write_atomic(dir / "population_report.json", stats::report_json(r).dump(2) + "\n");
             if (g.emit_plot_data) emit_plot_data(dir, rows);
             return kOk;
         }},
        {"sensitivity",
         [&] {
             const fs::path dir = dataset::resolve_dataset_dir(sen_data);
             auto images = dataset::list_images(dir);
             if (limit > 0 && static_cast<std::size_t>(limit) < images.size()) images.resize(static_cast<std::size_t>(limit));
             std::vector<FieldSample> samples;
             for (const auto& rec : images) samples.push_back(dataset::load_sample(dir, rec));
             DatasetConfig cfg = base_config(g);
             const auto table = sensitivity_analysis(samples, parse_int_list(offsets), PixelCalibration{cfg.pixel_size});
             const fs::path out = g.out.empty() ? fs::path("sensitivity.csv") : fs::path(g.out);
             dataset::write_atomic(out, sensitivity_csv(table));
             return kOk;
         }},
    };

    try {
        return run_parsed(app, handlers);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const ParameterError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kPartial;
    }
}

int run(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"chromasim"};
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data());
}

}  // namespace chromasim::cli
