#include <algorithm>
#include <cmath>
#include <numbers>

#include "chromasim/kernels.hpp"
#include "chromasim/modality_render.hpp"

namespace chromasim {
namespace {

// cos/sin that are exact at multiples of 90 degrees.
void exact_rotation(double deg, double& c, double& s) {
    const double quarter = deg / 90.0;
    if (std::abs(quarter - std::round(quarter)) < 1e-12) {
        const int q = ((static_cast<int>(std::lround(quarter)) % 4) + 4) % 4;
        static constexpr double kc[4] = {1.0, 0.0, -1.0, 0.0};
        static constexpr double ks[4] = {0.0, 1.0, 0.0, -1.0};
        c = kc[q];
        s = ks[q];
        return;
    }
    const double rad = deg * std::numbers::pi / 180.0;
    c = std::cos(rad);
    s = std::sin(rad);
}

// Smooth displacement field: blurred U(-1, 1) noise scaled by alpha, sampled
// on a coarse grid and bilinearly interpolated back to full resolution.
ScalarField elastic_component(int w, int h, const AugmentConfig& cfg, SeededRng& rng) {
    ScalarField noise(w, h);
    for (auto& v : noise.values()) v = rng.uniform(-1.0, 1.0);
    // Periodic: clamping would pile the edge pixel into border nodes and inflate them.
    ScalarField smooth = kernels::gaussian_blur(noise, cfg.elastic_sigma, kernels::Boundary::Periodic);
    const int g = std::max(1, cfg.elastic_grid);
    const int gx = (w - 1) / g + 2;
    const int gy = (h - 1) / g + 2;
    ScalarField nodes(gx, gy);
    // Decimating to the control grid: average over the node's cell rather than
    // point-sample, otherwise the field aliases into steep node-to-node jumps.
    const int half = g / 2;
    for (int j = 0; j < gy; ++j) {
        for (int i = 0; i < gx; ++i) {
            double acc = 0.0;
            for (int dy = -half; dy < g - half; ++dy) {
                const int yy = ((std::min(j * g, h - 1) + dy) % h + h) % h;
                for (int dx = -half; dx < g - half; ++dx) acc += smooth(((std::min(i * g, w - 1) + dx) % w + w) % w, yy);
            }
            nodes(i, j) = cfg.elastic_alpha * acc / (static_cast<double>(g) * g);
        }
    }
    ScalarField out(w, h);
    for (int y = 0; y < h; ++y) {
        const int j = y / g;
        const double fy = static_cast<double>(y - j * g) / g;
        for (int x = 0; x < w; ++x) {
            const int i = x / g;
            const double fx = static_cast<double>(x - i * g) / g;
            out(x, y) = (1 - fy) * ((1 - fx) * nodes(i, j) + fx * nodes(i + 1, j)) +
                        fy * ((1 - fx) * nodes(i, j + 1) + fx * nodes(i + 1, j + 1));
        }
    }
    return out;
}

}  // namespace

Point augment_map_point(const AugmentRecord& rec, Point p, int width, int height) {
    const double cx = (width - 1) / 2.0;
    const double cy = (height - 1) / 2.0;
    if (rec.hflip) p.x = (width - 1) - p.x;
    if (rec.vflip) p.y = (height - 1) - p.y;
    double c, s;
    exact_rotation(rec.rotation_deg, c, s);
    const double dx = p.x - cx;
    const double dy = p.y - cy;
    return {cx + c * dx - s * dy, cy + s * dx + c * dy};
}

FieldSample augment(const FieldSample& in, SeededRng& rng, const AugmentConfig& cfg) {
    FieldSample out = in;
    AugmentRecord& rec = out.meta.augment;
    rec = AugmentRecord{};
    rec.applied = true;
    const int w = in.image.width();
    const int h = in.image.height();

    if (cfg.rotation) rec.rotation_deg = cfg.rotation_deg ? *cfg.rotation_deg : rng.uniform(-180.0, 180.0);
    if (cfg.hflip) rec.hflip = rng.bernoulli(cfg.flip_probability);
    if (cfg.vflip) rec.vflip = rng.bernoulli(cfg.flip_probability);
    rec.elastic = cfg.elastic;

    const bool geometric = rec.rotation_deg != 0.0 || rec.hflip || rec.vflip || rec.elastic;
    if (geometric) {
        ScalarField ex, ey;
        if (rec.elastic) {
            SeededRng erng = rng.derive(1);
            ex = elastic_component(w, h, cfg, erng);
            ey = elastic_component(w, h, cfg, erng);
        }
        // Inverse map: destination p -> p + d(p) -> undo rotation -> undo flip.
        double c, s;
        exact_rotation(rec.rotation_deg, c, s);
        const double cx = (w - 1) / 2.0;
        const double cy = (h - 1) / 2.0;
        ScalarField sx(w, h), sy(w, h);
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                double qx = x, qy = y;
                if (rec.elastic) {
                    qx += ex(x, y);
                    qy += ey(x, y);
                }
                const double dx = qx - cx;
                const double dy = qy - cy;
                double rx = cx + c * dx + s * dy;
                double ry = cy - s * dx + c * dy;
                if (rec.hflip) rx = (w - 1) - rx;
                if (rec.vflip) ry = (h - 1) - ry;
                sx(x, y) = rx;
                sy(x, y) = ry;
            }
        }
        for (int ch = 0; ch < out.image.channels(); ++ch) {
            out.image.channel(ch) = kernels::warp_bilinear(in.image.channel(ch), sx, sy);
        }
        out.mask = kernels::warp_nearest(in.mask, sx, sy);
        for (auto& n : out.layout.nuclei) {
            n.center = augment_map_point(rec, n.center, w, h);
            for (auto& v : n.boundary) v = augment_map_point(rec, v, w, h);
        }
    }

    if (cfg.intensity_scale) {
        rec.intensity_scale = rng.uniform(cfg.scale_min, cfg.scale_max);
        for (int ch = 0; ch < out.image.channels(); ++ch) {
            for (auto& v : out.image.channel(ch).values()) v *= rec.intensity_scale;
        }
    }
    if (cfg.speckle) {
        rec.speckle_shape = rng.uniform(cfg.speckle_shape_min, cfg.speckle_shape_max);
        SeededRng srng = rng.derive(2);
        for (int ch = 0; ch < out.image.channels(); ++ch) {
            for (auto& v : out.image.channel(ch).values()) v *= srng.gamma(rec.speckle_shape, 1.0 / rec.speckle_shape);
        }
    }
    if (cfg.noise) {
        rec.noise_sd = rng.uniform(cfg.noise_min, cfg.noise_max);
        SeededRng nrng = rng.derive(3);
        for (int ch = 0; ch < out.image.channels(); ++ch) {
            for (auto& v : out.image.channel(ch).values()) v += nrng.normal(0.0, rec.noise_sd);
        }
    }
    out.image.clip01();
    return out;
}

}  // namespace chromasim
