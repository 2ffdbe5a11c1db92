#include <algorithm>
#include <cmath>

#include "chromasim/field_synthesis.hpp"
#include "chromasim/modality_render.hpp"

namespace chromasim {

FieldSample render_adversarial(const FieldLayout& layout, SeededRng& rng, const RenderParams& p) {
    const int w = layout.width;
    const int h = layout.height;
    FieldSample s;
    s.layout = layout;
    s.mask = rasterize_mask(layout);
    s.meta.modality = Modality::Adversarial;
    s.meta.master_seed = rng.master_seed();
    s.meta.stream_id = rng.stream_id();

    SeededRng bg_rng = rng.derive(1);
    ScalarField bg;
    switch (rng.below(3)) {
        case 0:
            s.meta.background_kind = "perlin";
            bg = perlin_field(w, h, p.perlin_octaves, p.perlin_persistence, p.perlin_base_scale, bg_rng);
            for (auto& v : bg.values()) v = 0.5 * (v + 1.0);
            break;
        case 1: {
            s.meta.background_kind = "grf";
            const double cap = std::min(w, h) / 2.0;
            const double len = rng.uniform(std::min(p.grf_length_min, cap), std::min(p.grf_length_max, cap));
            bg = gaussian_random_field(w, h, len, bg_rng);
            rescale(bg, 0.0, 1.0);
            break;
        }
        default:
            s.meta.background_kind = "gabor";
            bg = gabor_texture(w, h, p.gabor_orientations, p.gabor_scales, bg_rng);
            break;
    }
    const double contrast = rng.uniform(p.contrast_min, p.contrast_max);
    const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
    s.meta.contrast = contrast;

    // Background mean over extranuclear pixels.
    double bg_sum = 0.0;
    std::size_t bg_n = 0;
    for (std::size_t i = 0; i < bg.size(); ++i) {
        if (s.mask.values()[i] == 0) {
            bg_sum += bg.values()[i];
            ++bg_n;
        }
    }
    const double bg_mean = bg_n ? bg_sum / static_cast<double>(bg_n) : 0.5;

    // Beta texture per nuclear pixel; each nucleus is then shifted so its
    // mean sits exactly `contrast` away from the background mean.
    SeededRng tex_rng = rng.derive(2);
    ScalarField texture(w, h);
    const std::size_t n_nuclei = layout.nuclei.size();
    std::vector<double> tex_sum(n_nuclei + 1, 0.0);
    std::vector<std::size_t> tex_n(n_nuclei + 1, 0);
    for (std::size_t i = 0; i < texture.size(); ++i) {
        const auto l = s.mask.values()[i];
        if (l == 0) continue;
        texture.values()[i] = tex_rng.beta(p.beta_alpha, p.beta_beta);
        tex_sum[l] += texture.values()[i];
        ++tex_n[l];
    }
    s.precontrast.resize(n_nuclei);
    for (std::size_t k = 1; k <= n_nuclei; ++k) {
        s.precontrast[k - 1] = tex_n[k] ? tex_sum[k] / static_cast<double>(tex_n[k]) : 0.0;
    }

    ScalarField lum(bg);
    double nuc_sum = 0.0;
    std::size_t nuc_n = 0;
    for (std::size_t i = 0; i < lum.size(); ++i) {
        const auto l = s.mask.values()[i];
        if (l == 0) continue;
        lum.values()[i] = bg_mean + sign * contrast + p.texture_gain * (texture.values()[i] - s.precontrast[l - 1]);
        nuc_sum += lum.values()[i];
        ++nuc_n;
    }
    s.meta.realized_contrast = nuc_n ? std::abs(nuc_sum / static_cast<double>(nuc_n) - bg_mean) : 0.0;

    s.image = Image(3, w, h);
    for (int c = 0; c < 3; ++c) {
        const double gain = 1.0 + rng.uniform(-p.channel_gain, p.channel_gain);
        auto& out = s.image.channel(c).values();
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = gain * lum.values()[i];
    }
    s.image.clip01();

    s.meta.nucleus_count = static_cast<int>(n_nuclei);
    s.meta.density_capped = layout.density_capped;
    if (p.capture_fields) {
        s.fields.emplace_back("background", bg);
        s.fields.emplace_back("texture", texture);
    }
    return s;
}

}  // namespace chromasim
