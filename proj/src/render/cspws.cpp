#include <algorithm>
#include <cmath>

#include "chromasim/field_synthesis.hpp"
#include "chromasim/modality_render.hpp"

namespace chromasim {

FieldSample render_cspws(const FieldLayout& layout, SeededRng& rng, const RenderParams& p) {
    const int w = layout.width;
    const int h = layout.height;
    FieldSample s;
    s.layout = layout;
    s.mask = rasterize_mask(layout);
    s.meta.modality = Modality::Cspws;
    s.meta.master_seed = rng.master_seed();
    s.meta.stream_id = rng.stream_id();

    SeededRng phi_rng = rng.derive(2);
    std::vector<double> phi(layout.nuclei.size() + 1, 0.0);
    std::size_t dysplastic = 0;
    for (std::size_t k = 0; k < layout.nuclei.size(); ++k) {
        auto& n = s.layout.nuclei[k];
        n.packing_fraction = sample_packing_fraction(n.tissue_class, p, phi_rng);
        phi[static_cast<std::size_t>(n.id)] = n.packing_fraction;
        dysplastic += n.tissue_class == TissueClass::Dysplasia;
    }

    // One fBm texture per image on the enclosing dyadic square.
    SeededRng fbm_rng = rng.derive(1);
    const int side = next_power_of_two(std::max(w, h));
    const ScalarField fbm_full = fbm_field(side, side, p.hurst, fbm_rng);
    ScalarField fbm(w, h);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) fbm(x, y) = fbm_full(x, y);
    }

    const double lo = std::log(p.background_min);
    const double hi = std::log(p.background_max);
    const double baseline = std::exp(rng.uniform(lo, hi));
    s.meta.background_level = baseline;

    // Centre the texture inside each nucleus so its mean packing is the sampled phi.
    std::vector<double> fbm_mean(phi.size(), 0.0);
    std::vector<std::size_t> fbm_n(phi.size(), 0);
    for (std::size_t i = 0; i < fbm.size(); ++i) {
        if (const auto l = s.mask.values()[i]) fbm_mean[l] += fbm.values()[i], ++fbm_n[l];
    }
    for (std::size_t l = 1; l < phi.size(); ++l) {
        if (fbm_n[l]) fbm_mean[l] /= static_cast<double>(fbm_n[l]);
    }

    ScalarField packing(w, h);
    ScalarField sigma(w, h, baseline);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const auto l = s.mask.values()[i];
        if (l == 0) continue;
        const double f = phi[l];
        const double local =
            std::clamp(f + p.packing_heterogeneity * f * (fbm.values()[i] - fbm_mean[l]), 1e-3, 1.0 - 1e-3);
        packing.values()[i] = local;
        sigma.values()[i] = scatter_intensity(local, p.scatter_max);
    }

    ScalarField out(sigma);
    if (p.speckle) {
        SeededRng sp_rng = rng.derive(3);
        for (auto& v : out.values()) v *= sample_speckle(p.speckle_shape, p.speckle_scale, sp_rng);
    }
    if (p.read_noise) {
        SeededRng rn_rng = rng.derive(4);
        for (auto& v : out.values()) v += rn_rng.normal(0.0, p.read_noise_sd);
    }
    s.image = Image(1, w, h);
    s.image.channel(0) = std::move(out);
    s.image.clip01();

    s.meta.nucleus_count = static_cast<int>(layout.nuclei.size());
    s.meta.dysplasia_fraction =
        layout.nuclei.empty() ? 0.0 : static_cast<double>(dysplastic) / static_cast<double>(layout.nuclei.size());
    s.meta.density_capped = layout.density_capped;
    if (!layout.nuclei.empty()) {
        try {
            s.meta.measured_snr_db = measure_snr(s.image, s.mask);
        } catch (const MeasurementError&) {
            s.meta.measured_snr_db.reset();
        }
    }
    if (p.capture_fields) {
        s.fields.emplace_back("fbm", fbm);
        s.fields.emplace_back("packing", packing);
        s.fields.emplace_back("sigma_clean", sigma);
    }
    return s;
}

}  // namespace chromasim
