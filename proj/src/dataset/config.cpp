#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "chromasim/dataset.hpp"
#include "chromasim/serialization.hpp"

namespace chromasim::dataset {
namespace {

std::map<std::string, double LayoutOptions::*> layout_fields() {
    return {{"count_target_mean", &LayoutOptions::count_target_mean},
            {"count_sd", &LayoutOptions::count_sd},
            {"count_min", &LayoutOptions::count_min},
            {"count_max", &LayoutOptions::count_max},
            {"area_mean", &LayoutOptions::area_mean},
            {"area_sd", &LayoutOptions::area_sd},
            {"area_floor", &LayoutOptions::area_floor},
            {"area_ceiling", &LayoutOptions::area_ceiling},
            {"packing_budget", &LayoutOptions::packing_budget},
            {"perturb_min", &LayoutOptions::perturb_min},
            {"perturb_max", &LayoutOptions::perturb_max}};
}

template <typename T>
T get_as(const nlohmann::json& v, const std::string& key) {
    try {
        return v.get<T>();
    } catch (const nlohmann::json::exception&) {
        throw InputError("config key '" + key + "' has the wrong type");
    }
}

}  // namespace

double DatasetConfig::effective_class_mix() const {
    if (class_mix) return *class_mix;
    return modality == Modality::Cspws ? 0.5 : 0.0;
}

void DatasetConfig::validate() const {
    if (train < 0 || val < 0 || test < 0) throw InputError("split counts must be non-negative");
    if (total() > 99999) throw InputError("at most 99999 images per dataset");
    if (image_size < 64) throw InputError("image_size must be at least 64");
    if (!(pixel_size > 0.0)) throw InputError("pixel_size must be positive");
    const double mix = effective_class_mix();
    if (!(mix >= 0.0 && mix <= 1.0)) throw InputError("class_mix must lie in [0, 1]");
}

void apply_config(DatasetConfig& cfg, const nlohmann::json& j) {
    if (!j.is_object()) throw InputError("config must be a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "modality") {
            try {
                cfg.modality = parse_modality(get_as<std::string>(v, key));
            } catch (const ParameterError& e) {
                throw InputError(e.what());
            }
        } else if (key == "counts") {
            if (!v.is_object()) throw InputError("counts must be an object");
            for (const auto& [split, n] : v.items()) {
                if (split == "train") cfg.train = get_as<int>(n, "counts.train");
                else if (split == "val") cfg.val = get_as<int>(n, "counts.val");
                else if (split == "test") cfg.test = get_as<int>(n, "counts.test");
                else throw InputError("unknown split '" + split + "'");
            }
        } else if (key == "image_size") {
            cfg.image_size = get_as<int>(v, key);
        } else if (key == "pixel_size") {
            cfg.pixel_size = get_as<double>(v, key);
        } else if (key == "seed" || key == "master_seed") {
            cfg.master_seed = get_as<std::uint64_t>(v, key);
        } else if (key == "class_mix") {
            cfg.class_mix = v.is_null() ? std::nullopt : std::optional<double>(get_as<double>(v, key));
        } else if (key == "render") {
            try {
                apply_overrides(cfg.render, v);
            } catch (const nlohmann::json::exception& e) {
                throw InputError(std::string("render overrides: ") + e.what());
            }
        } else if (key == "layout") {
            if (!v.is_object()) throw InputError("layout must be an object");
            const auto fields = layout_fields();
            for (const auto& [lk, lv] : v.items()) {
                if (lk == "min_clearance") {
                    cfg.layout.placement.min_clearance = get_as<double>(lv, "layout.min_clearance");
                    continue;
                }
                const auto it = fields.find(lk);
                if (it == fields.end()) throw InputError("unknown layout key '" + lk + "'");
                cfg.layout.*(it->second) = get_as<double>(lv, "layout." + lk);
            }
        } else {
            throw InputError("unknown config key '" + key + "'");
        }
    }
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

DatasetConfig load_config(const fs::path& path) {
    DatasetConfig cfg;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("config " + path.string() + ": " + e.what());
    }
    apply_config(cfg, j);
    return cfg;
}

nlohmann::ordered_json config_json(const DatasetConfig& cfg) {
    nlohmann::ordered_json j;
    j["modality"] = std::string(to_string(cfg.modality));
    j["counts"] = {{"train", cfg.train}, {"val", cfg.val}, {"test", cfg.test}};
    j["image_size"] = cfg.image_size;
    j["pixel_size"] = cfg.pixel_size;
    j["seed"] = cfg.master_seed;
    j["class_mix"] = cfg.effective_class_mix();
    j["render"] = to_json(cfg.render);
    nlohmann::ordered_json lay;
    for (const auto& [k, member] : layout_fields()) lay[k] = cfg.layout.*member;
    lay["min_clearance"] = cfg.layout.placement.min_clearance;
    j["layout"] = lay;
    return j;
}

std::string split_of(const DatasetConfig& cfg, int index) {
    if (index < 0 || index >= cfg.total()) throw ParameterError("image index out of range");
    if (index < cfg.train) return "train";
    if (index < cfg.train + cfg.val) return "val";
    return "test";
}

namespace {
std::string numbered(const char* prefix, int index, const char* ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%05d.%s", prefix, index, ext);
    return buf;
}
}  // namespace

std::string image_name(int index) { return numbered("img", index, "png"); }
std::string mask_name(int index) { return numbered("mask", index, "png"); }
std::string meta_name(int index) { return numbered("meta", index, "json"); }

void write_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw InputError("write failed: " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace chromasim::dataset
