#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chromasim/common.hpp"
#include "chromasim/nucleus_geometry.hpp"
#include "chromasim/rng.hpp"

namespace chromasim {

enum class Modality { Adversarial, Cspws, He };

std::string_view to_string(Modality m);
Modality parse_modality(std::string_view s);

struct RenderParams {
    // adversarial
    double contrast_min = 0.3;
    double contrast_max = 0.8;
    double beta_alpha = 2.0;
    double beta_beta = 5.0;
    double texture_gain = 0.5;     // spread of the Beta texture around the nucleus mean
    double channel_gain = 0.10;    // +- per-channel tint
    int perlin_octaves = 6;
    double perlin_persistence = 0.5;
    double perlin_base_scale = 64.0;
    double grf_length_min = 15.0;
    double grf_length_max = 45.0;
    int gabor_orientations = 8;
    int gabor_scales = 4;

    // csPWS
    double packing_mean_normal = 0.35;
    double packing_sd_normal = 0.12;
    double packing_mean_dysplasia = 0.52;
    double packing_sd_dysplasia = 0.18;
    double packing_heterogeneity = 0.25;  // fBm modulation amplitude, fraction of phi
    double hurst = 0.7;
    double scatter_max = 0.9;
    double background_min = 0.15;   // extranuclear Sigma baseline, drawn log-uniformly per image
    double background_max = 0.27;
    bool speckle = true;
    double speckle_shape = 2.0;
    double speckle_scale = 0.15;
    bool read_noise = true;
    double read_noise_sd = 0.02;

    // H&E
    std::array<double, 3> hematoxylin_rgb_mean{0.30, 0.20, 0.65};
    std::array<double, 3> hematoxylin_rgb_sd{0.08, 0.06, 0.12};
    std::array<double, 3> eosin_rgb_mean{0.85, 0.45, 0.55};
    std::array<double, 3> eosin_rgb_sd{0.10, 0.12, 0.10};
    double hematoxylin_od_min = 0.8;
    double hematoxylin_od_max = 1.5;
    double eosin_od_min = 0.3;
    double eosin_od_max = 0.8;
    double stain_texture = 0.15;    // Perlin modulation of OD inside regions
    double cytoplasm_min = 5.0;
    double cytoplasm_max = 15.0;
    double psf_sigma = 1.2;
    bool jitter = true;
    double hue_jitter = 0.05;
    double saturation_jitter = 0.2;
    double value_jitter = 0.15;
    std::optional<double> force_od; // overrides every sampled OD

    // Keep intermediate fields on the sample (for --dump-fields).
    bool capture_fields = false;
};

/// Stable SHA-256 (hex) over the canonical JSON form of the parameters.
std::string params_hash(const RenderParams& p);

struct AugmentRecord {
    bool applied = false;
    double rotation_deg = 0.0;
    bool hflip = false;
    bool vflip = false;
    bool elastic = false;
    double noise_sd = 0.0;
    double intensity_scale = 1.0;
    double speckle_shape = 0.0;  // 0 = not applied
};

struct SampleMeta {
    Modality modality = Modality::Cspws;
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
    int nucleus_count = 0;
    double dysplasia_fraction = 0.0;
    std::optional<double> measured_snr_db;
    bool density_capped = false;
    std::string background_kind;     // adversarial: perlin | grf | gabor
    double contrast = 0.0;           // adversarial: drawn c
    double realized_contrast = 0.0;  // adversarial: |nuclear mean - background mean| before clipping
    double background_level = 0.0;   // csPWS baseline
    AugmentRecord augment;
};

struct FieldSample {
    Image image;
    InstanceMask mask;
    FieldLayout layout;  // nuclei carry the phi actually rendered
    SampleMeta meta;
    std::vector<double> precontrast;  // adversarial: mean Beta texture per nucleus
    std::vector<std::pair<std::string, ScalarField>> fields;
};

FieldSample render_adversarial(const FieldLayout& layout, SeededRng& rng, const RenderParams& params);
FieldSample render_cspws(const FieldLayout& layout, SeededRng& rng, const RenderParams& params);
FieldSample render_he(const FieldLayout& layout, SeededRng& rng, const RenderParams& params);
FieldSample render(Modality m, const FieldLayout& layout, SeededRng& rng, const RenderParams& params);

/// Backscatter surrogate proportional to packing: I(phi) = I_max * phi.
/// Strictly increasing, so denser chromatin always scatters more.
double scatter_intensity(double phi, double i_max = 0.9);

/// Class-conditional packing fraction, clipped to [0.01, 0.99].
double sample_packing_fraction(TissueClass c, const RenderParams& p, SeededRng& rng);

/// Unit-mean speckle factor Gamma(shape, scale) / (shape * scale).
double sample_speckle(double shape, double scale, SeededRng& rng);

/// 10 log10(mean(nuclear)^2 / var(background)). Single-channel image.
double measure_snr(const Image& image, const InstanceMask& mask);

struct AugmentConfig {
    bool rotation = false;
    std::optional<double> rotation_deg;  // fixed angle instead of U(-180, 180)
    bool hflip = false;
    bool vflip = false;
    double flip_probability = 0.5;
    bool elastic = false;
    double elastic_alpha = 50.0;
    double elastic_sigma = 5.0;
    int elastic_grid = 32;
    bool noise = false;
    double noise_min = 0.01;
    double noise_max = 0.05;
    bool intensity_scale = false;
    double scale_min = 0.85;
    double scale_max = 1.15;
    bool speckle = false;
    double speckle_shape_min = 1.5;
    double speckle_shape_max = 3.5;
};

/// Geometric ops share one coordinate map for image (bilinear) and mask
/// (nearest); photometric ops touch the image only.
FieldSample augment(const FieldSample& sample, SeededRng& rng, const AugmentConfig& config);

/// Where the rigid part (flip, then rotation about the image centre) of an
/// augmentation sends pixel-index coordinate p.
Point augment_map_point(const AugmentRecord& rec, Point p, int width, int height);

}  // namespace chromasim
