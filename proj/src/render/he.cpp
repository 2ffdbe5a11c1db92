#include <algorithm>
#include <array>
#include <cmath>

#include "chromasim/field_synthesis.hpp"
#include "chromasim/kernels.hpp"
#include "chromasim/modality_render.hpp"

namespace chromasim {
namespace {

using Rgb = std::array<double, 3>;

// Per-image stain colour; rejection keeps hematoxylin blue-dominant and eosin red-dominant.
Rgb sample_stain(const Rgb& mean, const Rgb& sd, bool blue_dominant, SeededRng& rng) {
    for (int attempt = 0; attempt < 100; ++attempt) {
        Rgb c;
        for (int k = 0; k < 3; ++k) c[k] = std::clamp(rng.normal(mean[k], sd[k]), 0.02, 0.98);
        if (blue_dominant ? c[2] > c[0] : c[0] > c[2]) return c;
    }
    return mean;
}

void rgb_to_hsv(double r, double g, double b, double& h, double& s, double& v) {
    const double mx = std::max({r, g, b});
    const double mn = std::min({r, g, b});
    const double d = mx - mn;
    v = mx;
    s = mx > 0.0 ? d / mx : 0.0;
    if (d <= 0.0) {
        h = 0.0;
        return;
    }
    if (mx == r) h = std::fmod((g - b) / d, 6.0);
    else if (mx == g) h = (b - r) / d + 2.0;
    else h = (r - g) / d + 4.0;
    h /= 6.0;
    if (h < 0.0) h += 1.0;
}

void hsv_to_rgb(double h, double s, double v, double& r, double& g, double& b) {
    const double hh = h * 6.0;
    const int i = static_cast<int>(std::floor(hh)) % 6;
    const double f = hh - std::floor(hh);
    const double p = v * (1.0 - s);
    const double q = v * (1.0 - s * f);
    const double t = v * (1.0 - s * (1.0 - f));
    switch (i) {
        case 0: r = v, g = t, b = p; break;
        case 1: r = q, g = v, b = p; break;
        case 2: r = p, g = v, b = t; break;
        case 3: r = p, g = q, b = v; break;
        case 4: r = t, g = p, b = v; break;
        default: r = v, g = p, b = q; break;
    }
}

}  // namespace

FieldSample render_he(const FieldLayout& layout, SeededRng& rng, const RenderParams& p) {
    const int w = layout.width;
    const int h = layout.height;
    FieldSample s;
    s.layout = layout;
    s.mask = rasterize_mask(layout);
    s.meta.modality = Modality::He;
    s.meta.master_seed = rng.master_seed();
    s.meta.stream_id = rng.stream_id();
    const std::size_t n_nuclei = layout.nuclei.size();

    SeededRng region_rng = rng.derive(1);
    std::vector<double> cyto_width(n_nuclei + 1, 0.0);
    std::vector<double> od_nuc(n_nuclei + 1, 0.0);
    std::vector<double> od_cyto(n_nuclei + 1, 0.0);
    for (std::size_t k = 1; k <= n_nuclei; ++k) {
        cyto_width[k] = region_rng.uniform(p.cytoplasm_min, p.cytoplasm_max);
        od_nuc[k] = region_rng.uniform(p.hematoxylin_od_min, p.hematoxylin_od_max);
        od_cyto[k] = region_rng.uniform(p.eosin_od_min, p.eosin_od_max);
        if (p.force_od) od_nuc[k] = od_cyto[k] = *p.force_od;
    }

    SeededRng stain_rng = rng.derive(2);
    const Rgb hema = sample_stain(p.hematoxylin_rgb_mean, p.hematoxylin_rgb_sd, true, stain_rng);
    const Rgb eosin = sample_stain(p.eosin_rgb_mean, p.eosin_rgb_sd, false, stain_rng);

    // Cytoplasm: extranuclear pixels within the owning nucleus's annulus width.
    BinaryMask nuclear(w, h);
    for (std::size_t i = 0; i < nuclear.size(); ++i) nuclear.values()[i] = s.mask.values()[i] != 0;
    InstanceMask cyto(w, h);
    if (n_nuclei > 0) {
        const auto dm = kernels::distance_transform(nuclear);
        for (std::size_t i = 0; i < cyto.size(); ++i) {
            if (s.mask.values()[i] != 0 || dm.nearest[i] < 0) continue;
            const auto owner = s.mask.values()[static_cast<std::size_t>(dm.nearest[i])];
            if (std::sqrt(dm.dist2.values()[i]) <= cyto_width[owner]) cyto.values()[i] = owner;
        }
    }

    SeededRng tex_rng = rng.derive(3);
    const ScalarField texture = perlin_field(w, h, 4, 0.5, 16.0, tex_rng);

    s.image = Image(3, w, h, 1.0);
    for (std::size_t i = 0; i < nuclear.size(); ++i) {
        const Rgb* stain = nullptr;
        double od = 0.0;
        if (const auto l = s.mask.values()[i]) {
            stain = &hema;
            od = od_nuc[l];
        } else if (const auto c = cyto.values()[i]) {
            stain = &eosin;
            od = od_cyto[c];
        } else {
            continue;
        }
        od *= 1.0 + p.stain_texture * texture.values()[i];
        for (int c = 0; c < 3; ++c) {
            s.image.channel(c).values()[i] = std::pow(10.0, -od * (1.0 - (*stain)[static_cast<std::size_t>(c)]));
        }
    }

    if (p.jitter) {
        SeededRng jit = rng.derive(4);
        const double dh = jit.uniform(-p.hue_jitter, p.hue_jitter);
        const double ds = jit.uniform(-p.saturation_jitter, p.saturation_jitter);
        const double dv = jit.uniform(-p.value_jitter, p.value_jitter);
        auto& r = s.image.channel(0).values();
        auto& g = s.image.channel(1).values();
        auto& b = s.image.channel(2).values();
        for (std::size_t i = 0; i < r.size(); ++i) {
            double hh, ss, vv;
            rgb_to_hsv(std::clamp(r[i], 0.0, 1.0), std::clamp(g[i], 0.0, 1.0), std::clamp(b[i], 0.0, 1.0), hh, ss, vv);
            hh = std::fmod(hh + dh + 1.0, 1.0);
            ss = std::clamp(ss * (1.0 + ds), 0.0, 1.0);
            vv = std::clamp(vv * (1.0 + dv), 0.0, 1.0);
            hsv_to_rgb(hh, ss, vv, r[i], g[i], b[i]);
        }
    }

    if (p.psf_sigma > 0.0) {
        for (int c = 0; c < 3; ++c) {
            s.image.channel(c) = kernels::gaussian_blur(s.image.channel(c), p.psf_sigma, kernels::Boundary::Clamp);
        }
    }
    s.image.clip01();

    s.meta.nucleus_count = static_cast<int>(n_nuclei);
    s.meta.density_capped = layout.density_capped;
    if (p.capture_fields) {
        ScalarField cf(w, h);
        for (std::size_t i = 0; i < cf.size(); ++i) cf.values()[i] = cyto.values()[i] ? 1.0 : 0.0;
        s.fields.emplace_back("cytoplasm", cf);
        s.fields.emplace_back("stain_texture", texture);
    }
    return s;
}

FieldSample render(Modality m, const FieldLayout& layout, SeededRng& rng, const RenderParams& params) {
    switch (m) {
        case Modality::Adversarial: return render_adversarial(layout, rng, params);
        case Modality::Cspws: return render_cspws(layout, rng, params);
        case Modality::He: return render_he(layout, rng, params);
    }
    throw ParameterError("unknown modality");
}

}  // namespace chromasim
