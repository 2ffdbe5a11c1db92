#include <algorithm>
#include <cmath>
#include <functional>
#include <map>

#include "chromasim/modality_render.hpp"
#include "chromasim/serialization.hpp"
#include "chromasim/sha256.hpp"

namespace chromasim {

std::string_view to_string(Modality m) {
    switch (m) {
        case Modality::Adversarial: return "adversarial";
        case Modality::Cspws: return "cspws";
        case Modality::He: return "he";
    }
    return "cspws";
}

Modality parse_modality(std::string_view s) {
    if (s == "adversarial") return Modality::Adversarial;
    if (s == "cspws") return Modality::Cspws;
    if (s == "he") return Modality::He;
    throw InputError("unknown modality '" + std::string(s) + "'");
}

double scatter_intensity(double phi, double i_max) {
    if (!(phi > 0.0 && phi < 1.0)) throw ParameterError("packing fraction must lie in (0, 1)");
    return i_max * phi;
}

double sample_packing_fraction(TissueClass c, const RenderParams& p, SeededRng& rng) {
    const double phi = c == TissueClass::Normal ? rng.normal(p.packing_mean_normal, p.packing_sd_normal)
                                                : rng.normal(p.packing_mean_dysplasia, p.packing_sd_dysplasia);
    return std::clamp(phi, 0.01, 0.99);
}

double sample_speckle(double shape, double scale, SeededRng& rng) { return rng.gamma(shape, scale) / (shape * scale); }

double measure_snr(const Image& image, const InstanceMask& mask) {
    if (image.channels() != 1) throw MeasurementError("SNR is defined on single-channel images");
    if (image.width() != mask.width() || image.height() != mask.height()) {
        throw MeasurementError("image and mask shapes differ");
    }
    const auto& v = image.channel(0).values();
    double fg = 0.0;
    std::size_t nf = 0;
    double bg = 0.0;
    std::size_t nb = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (mask.values()[i] != 0) {
            fg += v[i];
            ++nf;
        } else {
            bg += v[i];
            ++nb;
        }
    }
    if (nf == 0 || nb == 0) throw MeasurementError("SNR needs both nuclear and background pixels");
    fg /= static_cast<double>(nf);
    bg /= static_cast<double>(nb);
    double var = 0.0;
    double bmin = 1e300, bmax = -1e300;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (mask.values()[i] != 0) continue;
        var += (v[i] - bg) * (v[i] - bg);
        bmin = std::min(bmin, v[i]);
        bmax = std::max(bmax, v[i]);
    }
    var /= static_cast<double>(nb);
    // Rounding in the mean leaves a tiny variance on a flat background.
    if (bmin == bmax || !(var > 0.0)) throw MeasurementError("background variance is zero");
    return 10.0 * std::log10(fg * fg / var);
}

namespace {

// Single table of named fields so serialization and overrides cannot drift.
struct FieldTable {
    std::map<std::string, double*> reals;
    std::map<std::string, int*> ints;
    std::map<std::string, bool*> flags;
    std::map<std::string, std::array<double, 3>*> triples;
};

FieldTable table(RenderParams& p) {
    FieldTable t;
    t.reals = {{"contrast_min", &p.contrast_min},
               {"contrast_max", &p.contrast_max},
               {"beta_alpha", &p.beta_alpha},
               {"beta_beta", &p.beta_beta},
               {"texture_gain", &p.texture_gain},
               {"channel_gain", &p.channel_gain},
               {"perlin_persistence", &p.perlin_persistence},
               {"perlin_base_scale", &p.perlin_base_scale},
               {"grf_length_min", &p.grf_length_min},
               {"grf_length_max", &p.grf_length_max},
               {"packing_mean_normal", &p.packing_mean_normal},
               {"packing_sd_normal", &p.packing_sd_normal},
               {"packing_mean_dysplasia", &p.packing_mean_dysplasia},
               {"packing_sd_dysplasia", &p.packing_sd_dysplasia},
               {"packing_heterogeneity", &p.packing_heterogeneity},
               {"hurst", &p.hurst},
               {"scatter_max", &p.scatter_max},
               {"background_min", &p.background_min},
               {"background_max", &p.background_max},
               {"speckle_shape", &p.speckle_shape},
               {"speckle_scale", &p.speckle_scale},
               {"read_noise_sd", &p.read_noise_sd},
               {"hematoxylin_od_min", &p.hematoxylin_od_min},
               {"hematoxylin_od_max", &p.hematoxylin_od_max},
               {"eosin_od_min", &p.eosin_od_min},
               {"eosin_od_max", &p.eosin_od_max},
               {"stain_texture", &p.stain_texture},
               {"cytoplasm_min", &p.cytoplasm_min},
               {"cytoplasm_max", &p.cytoplasm_max},
               {"psf_sigma", &p.psf_sigma},
               {"hue_jitter", &p.hue_jitter},
               {"saturation_jitter", &p.saturation_jitter},
               {"value_jitter", &p.value_jitter}};
    t.ints = {{"perlin_octaves", &p.perlin_octaves},
              {"gabor_orientations", &p.gabor_orientations},
              {"gabor_scales", &p.gabor_scales}};
    t.flags = {{"speckle", &p.speckle}, {"read_noise", &p.read_noise}, {"jitter", &p.jitter}};
    t.triples = {{"hematoxylin_rgb_mean", &p.hematoxylin_rgb_mean},
                 {"hematoxylin_rgb_sd", &p.hematoxylin_rgb_sd},
                 {"eosin_rgb_mean", &p.eosin_rgb_mean},
                 {"eosin_rgb_sd", &p.eosin_rgb_sd}};
    return t;
}

}  // namespace

nlohmann::ordered_json to_json(const RenderParams& params) {
    RenderParams p = params;
    const FieldTable t = table(p);
    nlohmann::ordered_json j;
    for (const auto& [k, v] : t.reals) j[k] = *v;
    for (const auto& [k, v] : t.ints) j[k] = *v;
    for (const auto& [k, v] : t.flags) j[k] = *v;
    for (const auto& [k, v] : t.triples) j[k] = *v;
    j["force_od"] = p.force_od ? nlohmann::ordered_json(*p.force_od) : nlohmann::ordered_json(nullptr);
    return j;
}

void apply_overrides(RenderParams& p, const nlohmann::json& overrides) {
    if (!overrides.is_object()) throw InputError("render overrides must be a JSON object");
    const FieldTable t = table(p);
    for (const auto& [k, v] : overrides.items()) {
        try {
            if (auto it = t.reals.find(k); it != t.reals.end()) {
                *it->second = v.get<double>();
            } else if (auto it2 = t.ints.find(k); it2 != t.ints.end()) {
                *it2->second = v.get<int>();
            } else if (auto it3 = t.flags.find(k); it3 != t.flags.end()) {
                *it3->second = v.get<bool>();
            } else if (auto it4 = t.triples.find(k); it4 != t.triples.end()) {
                *it4->second = v.get<std::array<double, 3>>();
            } else if (k == "force_od") {
                p.force_od = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
            } else {
                throw InputError("unknown render parameter '" + k + "'");
            }
        } catch (const nlohmann::json::exception& e) {
            throw InputError("bad value for render parameter '" + k + "': " + e.what());
        }
    }
}

std::string params_hash(const RenderParams& p) { return sha256_hex(to_json(p).dump()); }

nlohmann::ordered_json to_json(const AugmentRecord& r) {
    nlohmann::ordered_json j;
    j["applied"] = r.applied;
    j["rotation_deg"] = r.rotation_deg;
    j["hflip"] = r.hflip;
    j["vflip"] = r.vflip;
    j["elastic"] = r.elastic;
    j["noise_sd"] = r.noise_sd;
    j["intensity_scale"] = r.intensity_scale;
    j["speckle_shape"] = r.speckle_shape;
    return j;
}

nlohmann::ordered_json sidecar_json(const FieldSample& s, const std::string& hash) {
    nlohmann::ordered_json j;
    j["modality"] = std::string(to_string(s.meta.modality));
    j["master_seed"] = s.meta.master_seed;
    j["stream_id"] = s.meta.stream_id;
    j["params_hash"] = hash;
    j["width"] = s.image.width();
    j["height"] = s.image.height();
    j["channels"] = s.image.channels();
    j["nucleus_count"] = s.meta.nucleus_count;
    j["target_count"] = s.layout.target_count;
    j["density_capped"] = s.meta.density_capped;
    j["dysplasia_fraction"] = s.meta.dysplasia_fraction;
    j["measured_snr_db"] =
        s.meta.measured_snr_db ? nlohmann::ordered_json(*s.meta.measured_snr_db) : nlohmann::ordered_json(nullptr);
    j["snr_definition"] = "10*log10(mean(nuclear)^2 / var(background))";
    if (s.meta.modality == Modality::Cspws) {
        j["speckle_order"] = "speckle applied before read noise";
        j["background_level"] = s.meta.background_level;
    }
    if (s.meta.modality == Modality::Adversarial) {
        j["background_kind"] = s.meta.background_kind;
        j["contrast"] = s.meta.contrast;
        j["realized_contrast"] = s.meta.realized_contrast;
    }
    j["augment"] = to_json(s.meta.augment);
    nlohmann::ordered_json nuclei = nlohmann::ordered_json::array();
    for (const auto& n : s.layout.nuclei) {
        nlohmann::ordered_json row;
        row["id"] = n.id;
        row["class"] = std::string(to_string(n.tissue_class));
        row["center"] = {n.center.x, n.center.y};
        row["packing_fraction"] = n.packing_fraction;
        row["equivalent_radius"] = n.equivalent_radius;
        nuclei.push_back(row);
    }
    j["nuclei"] = nuclei;
    return j;
}

}  // namespace chromasim
