#include <cstdlib>
#include <ctime>
#include <map>
#include <utility>

#include "chromasim/dataset.hpp"
#include "chromasim/png_io.hpp"
#include "chromasim/serialization.hpp"
#include "chromasim/sha256.hpp"

#ifndef CHROMASIM_VERSION
#define CHROMASIM_VERSION "0.0.0"
#endif

namespace chromasim::dataset {
namespace {

struct IndexOutcome {
    bool ok = false;
    std::string error;
    nlohmann::ordered_json records = nlohmann::ordered_json::array();
};

// Reproducible builds convention; absent means no timestamp.
nlohmann::ordered_json creation_time() {
    const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
    if (!epoch || !*epoch) return nullptr;
    char* end = nullptr;
    const long long t = std::strtoll(epoch, &end, 10);
    if (*end != '\0') return nullptr;
    const std::time_t tt = static_cast<std::time_t>(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
}

IndexOutcome generate_one(const DatasetConfig& cfg, const fs::path& dir, int index, const std::string& hash,
                          const GenerateOptions& opt) {
    IndexOutcome out;
    const std::string split = split_of(cfg, index);
    try {
        SeededRng rng(cfg.master_seed, derive_stream(cfg.master_seed, static_cast<std::uint64_t>(index)));
        LayoutOptions lo = cfg.layout;
        lo.class_mix = cfg.effective_class_mix();
        SeededRng layout_rng = rng.derive(1);
        const FieldLayout layout = generate_layout(cfg.image_size, cfg.image_size, layout_rng, lo);
        RenderParams rp = cfg.render;
        rp.capture_fields = opt.dump_fields.has_value();
        SeededRng render_rng = rng.derive(2);
        FieldSample s = render(cfg.modality, layout, render_rng, rp);

        const fs::path sub = dir / split;
        fs::create_directories(sub);
        const std::string img = split + "/" + image_name(index);
        const std::string msk = split + "/" + mask_name(index);
        const std::string meta = split + "/" + meta_name(index);
        if (cfg.modality == Modality::Cspws) io::write_gray16(dir / img, s.image.channel(0));
        else io::write_rgb8(dir / img, s.image);
        io::write_mask(dir / msk, s.mask);
        auto side = sidecar_json(s, hash);
        side["index"] = index;
        side["split"] = split;
        write_atomic(dir / meta, side.dump(2) + "\n");

        if (opt.dump_fields) {
            fs::create_directories(*opt.dump_fields);
            for (const auto& [name, field] : s.fields) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%05d", index);
                io::write_gray16_autoscale(*opt.dump_fields / (split + "_" + buf + "_" + name + ".png"), field);
            }
        }

        for (const auto& [kind, rel] : {std::pair{"image", img}, {"mask", msk}, {"meta", meta}}) {
            nlohmann::ordered_json r;
            r["path"] = rel;
            r["split"] = split;
            r["kind"] = kind;
            r["index"] = index;
            r["sha256"] = sha256_file(dir / rel);
            r["nucleus_count"] = s.meta.nucleus_count;
            if (std::string(kind) == "image" && s.meta.measured_snr_db) r["measured_snr_db"] = *s.meta.measured_snr_db;
            out.records.push_back(r);
        }
        out.ok = true;
    } catch (const std::exception& e) {
        out.error = e.what();
    }
    return out;
}

}  // namespace

GenerateResult generate_dataset(const DatasetConfig& cfg, const fs::path& root, const GenerateOptions& opt) {
    cfg.validate();
    if (opt.workers < 1) throw InputError("workers must be at least 1");
    GenerateResult res;
    res.dataset_dir = root / std::string(to_string(cfg.modality));
    try {
        fs::create_directories(res.dataset_dir);
    } catch (const fs::filesystem_error& e) {
        throw InputError(std::string("cannot create output directory: ") + e.what());
    }
    const std::string hash = params_hash(cfg.render);
    const int n = cfg.total();
    std::vector<IndexOutcome> outcomes(static_cast<std::size_t>(n));
#pragma omp parallel for num_threads(opt.workers) schedule(dynamic)
    for (int i = 0; i < n; ++i) outcomes[static_cast<std::size_t>(i)] = generate_one(cfg, res.dataset_dir, i, hash, opt);

    nlohmann::ordered_json manifest;
    manifest["tool"] = "chromasim";
    manifest["version"] = CHROMASIM_VERSION;
    manifest["created_utc"] = creation_time();
    manifest["config"] = config_json(cfg);
    manifest["params_hash"] = hash;
    auto& files = manifest["files"] = nlohmann::ordered_json::array();
    auto& failures = manifest["failures"] = nlohmann::ordered_json::array();
    for (int i = 0; i < n; ++i) {
        const auto& o = outcomes[static_cast<std::size_t>(i)];
        if (o.ok) {
            ++res.generated;
            for (const auto& r : o.records) files.push_back(r);
        } else {
            failures.push_back({{"index", i}, {"split", split_of(cfg, i)}, {"error", o.error}});
            res.failures.push_back("image " + std::to_string(i) + ": " + o.error);
        }
    }
    manifest["generated"] = res.generated;
    manifest["failed"] = static_cast<int>(res.failures.size());
    write_atomic(res.dataset_dir / "manifest.json", manifest.dump(2) + "\n");
    return res;
}

fs::path resolve_dataset_dir(const fs::path& dir) {
    if (fs::exists(dir / "manifest.json")) return dir;
    std::vector<fs::path> found;
    if (fs::is_directory(dir)) {
        for (const auto& e : fs::directory_iterator(dir)) {
            if (e.is_directory() && fs::exists(e.path() / "manifest.json")) found.push_back(e.path());
        }
    }
    if (found.size() == 1) return found.front();
    if (found.empty()) throw InputError("no manifest.json under " + dir.string());
    throw InputError("several datasets under " + dir.string() + "; pass one modality directory");
}

namespace {
nlohmann::json load_manifest(const fs::path& dir) {
    try {
        return nlohmann::json::parse(read_text(dir / "manifest.json"));
    } catch (const nlohmann::json::exception& e) {
        throw InputError("manifest.json: " + std::string(e.what()));
    }
}
}  // namespace

std::vector<VerifyIssue> verify_manifest(const fs::path& dir_in) {
    const fs::path dir = resolve_dataset_dir(dir_in);
    const auto manifest = load_manifest(dir);
    std::vector<VerifyIssue> issues;
    for (const auto& r : manifest.at("files")) {
        const std::string rel = r.at("path").get<std::string>();
        const fs::path p = dir / rel;
        if (!fs::exists(p)) {
            issues.push_back({rel, "missing"});
        } else if (sha256_file(p) != r.at("sha256").get<std::string>()) {
            issues.push_back({rel, "sha256 mismatch"});
        }
    }
    return issues;
}

std::vector<ImageRecord> list_images(const fs::path& dataset_dir) {
    const auto manifest = load_manifest(dataset_dir);
    std::map<int, ImageRecord> by_index;
    for (const auto& r : manifest.at("files")) {
        const int idx = r.at("index").get<int>();
        auto& rec = by_index[idx];
        rec.index = idx;
        rec.split = r.at("split").get<std::string>();
        const std::string kind = r.at("kind").get<std::string>();
        const std::string path = r.at("path").get<std::string>();
        if (kind == "image") rec.image_path = path;
        else if (kind == "mask") rec.mask_path = path;
        else if (kind == "meta") rec.meta_path = path;
    }
    std::vector<ImageRecord> out;
    for (auto& [i, rec] : by_index) {
        if (rec.image_path.empty() || rec.mask_path.empty()) throw InputError("manifest lacks image or mask for index " + std::to_string(i));
        out.push_back(rec);
    }
    return out;
}

FieldSample load_sample(const fs::path& dir, const ImageRecord& rec) {
    FieldSample s;
    s.image = io::read_image(dir / rec.image_path);
    s.mask = io::read_mask(dir / rec.mask_path);
    if (s.image.width() != s.mask.width() || s.image.height() != s.mask.height()) {
        throw InputError("image and mask dimensions differ for index " + std::to_string(rec.index));
    }
    s.layout.width = s.image.width();
    s.layout.height = s.image.height();
    if (!rec.meta_path.empty() && fs::exists(dir / rec.meta_path)) {
        nlohmann::json meta;
        try {
            meta = nlohmann::json::parse(read_text(dir / rec.meta_path));
            for (const auto& n : meta.at("nuclei")) {
                NucleusInstance inst;
                inst.id = n.at("id").get<int>();
                inst.tissue_class = parse_tissue_class(n.at("class").get<std::string>());
                s.layout.nuclei.push_back(inst);
            }
        } catch (const nlohmann::json::exception& e) {
            throw InputError("sidecar " + rec.meta_path + ": " + e.what());
        }
    }
    return s;
}

}  // namespace chromasim::dataset
