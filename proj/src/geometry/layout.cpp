#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "chromasim/nucleus_geometry.hpp"

namespace chromasim {
namespace {

constexpr int kProfileBins = 64;
constexpr double kGrowthStart = 0.6;
constexpr double kGrowthStep = 0.05;
constexpr int kGrowthIterations = 60;
constexpr int kSettleIterations = 300;

struct Shape {
    Polygon poly;  // centred at the origin
    double area = 0.0;
    double r_eq = 0.0;
    double r_out = 0.0;
    double r_in = 0.0;
    BoundingBox box{};
    std::vector<double> profile;  // max vertex radius per angular sector
};

Shape make_shape(Polygon poly) {
    Shape s;
    s.area = polygon_area(poly);
    s.r_eq = std::sqrt(s.area / std::numbers::pi);
    s.r_out = circumradius(poly, {0.0, 0.0});
    s.r_in = inradius(poly, {0.0, 0.0});
    s.box = bounding_box(poly);
    s.profile.assign(kProfileBins, 0.0);
    for (const auto& q : poly) {
        double a = std::atan2(q.y, q.x);
        if (a < 0.0) a += 2.0 * std::numbers::pi;
        const int bin = std::min(kProfileBins - 1, static_cast<int>(a / (2.0 * std::numbers::pi) * kProfileBins));
        s.profile[static_cast<std::size_t>(bin)] = std::max(s.profile[static_cast<std::size_t>(bin)], norm(q));
    }
    s.poly = std::move(poly);
    return s;
}

// Radial extent in direction `angle`, taken over the sector and its two
// neighbours so the estimate is not fooled by a vertex just across a seam.
double extent(const Shape& s, double angle) {
    double a = std::fmod(angle, 2.0 * std::numbers::pi);
    if (a < 0.0) a += 2.0 * std::numbers::pi;
    const int bin = std::min(kProfileBins - 1, static_cast<int>(a / (2.0 * std::numbers::pi) * kProfileBins));
    double r = 0.0;
    for (int d = -1; d <= 1; ++d) {
        r = std::max(r, s.profile[static_cast<std::size_t>((bin + d + kProfileBins) % kProfileBins)]);
    }
    return r;
}

struct Bounds {
    double x0, x1, y0, y1;
};

Bounds centre_bounds(const Shape& s, int width, int height, double margin) {
    return {margin - s.box.x0, width - margin - s.box.x1, margin - s.box.y0, height - margin - s.box.y1};
}

bool exact_clear(const Shape& a, Point pa, const Shape& b, Point pb, double c) {
    return boundary_clearance(translate(a.poly, pa), translate(b.poly, pb), c + 1.0) > c;
}

// Clearance test used by dart throwing: equivalent-radius circles first, then
// outer/inner radius shortcuts, then the exact polygon distance.
bool compatible(const Shape& a, Point pa, const Shape& b, Point pb, double c) {
    const double d = norm(pa - pb);
    if (d - a.r_eq - b.r_eq <= c) return false;
    if (d - a.r_out - b.r_out > c) return true;
    if (d - a.r_in - b.r_in <= c) return false;
    return exact_clear(a, pa, b, pb, c);
}

class SpatialGrid {
public:
    SpatialGrid(int width, int height, double cell)
        : cell_(cell),
          nx_(std::max(1, static_cast<int>(std::ceil(width / cell)))),
          ny_(std::max(1, static_cast<int>(std::ceil(height / cell)))),
          cells_(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_)) {}

    void insert(Point p, std::size_t id) { cells_[cell_of(p)].push_back(id); }

    template <class F>
    bool all_neighbours(Point p, F&& ok) const {
        const int cx = std::clamp(static_cast<int>(p.x / cell_), 0, nx_ - 1);
        const int cy = std::clamp(static_cast<int>(p.y / cell_), 0, ny_ - 1);
        for (int y = std::max(0, cy - 1); y <= std::min(ny_ - 1, cy + 1); ++y) {
            for (int x = std::max(0, cx - 1); x <= std::min(nx_ - 1, cx + 1); ++x) {
                for (std::size_t id : cells_[static_cast<std::size_t>(y) * static_cast<std::size_t>(nx_) +
                                             static_cast<std::size_t>(x)]) {
                    if (!ok(id)) return false;
                }
            }
        }
        return true;
    }

private:
    std::size_t cell_of(Point p) const {
        const int cx = std::clamp(static_cast<int>(p.x / cell_), 0, nx_ - 1);
        const int cy = std::clamp(static_cast<int>(p.y / cell_), 0, ny_ - 1);
        return static_cast<std::size_t>(cy) * static_cast<std::size_t>(nx_) + static_cast<std::size_t>(cx);
    }

    double cell_;
    int nx_;
    int ny_;
    std::vector<std::vector<std::size_t>> cells_;
};

struct Placed {
    std::size_t slot;
    Point pos;
};

// Overlap-resolving relaxation. Every active nucleus is pushed apart from any
// neighbour closer than the pair's required centre distance; persistent
// overlap sheds the most-overlapped nucleus. Pair requirements grow whenever
// the exact polygon check disagrees with the radial estimate.
std::vector<Placed> relax(const std::vector<Shape>& shapes, std::vector<Placed> active, int width, int height,
                          const PlacementOptions& opt, SeededRng& rng) {
    const double c = opt.min_clearance;
    std::vector<std::vector<double>> extra;
    auto reset_extra = [&] {
        extra.assign(active.size(), std::vector<double>(active.size(), 0.5));
    };
    reset_extra();
    auto required = [&](std::size_t i, std::size_t j, Point dir) {
        const Shape& a = shapes[active[i].slot];
        const Shape& b = shapes[active[j].slot];
        const double ang = std::atan2(dir.y, dir.x);
        const double radial = extent(a, ang) + extent(b, ang + std::numbers::pi);
        return std::max(a.r_eq + b.r_eq, radial) + c + extra[i][j];
    };
    auto clamp_all = [&] {
        for (auto& p : active) {
            const Bounds bd = centre_bounds(shapes[p.slot], width, height, opt.edge_margin);
            p.pos.x = std::clamp(p.pos.x, bd.x0, bd.x1);
            p.pos.y = std::clamp(p.pos.y, bd.y0, bd.y1);
        }
    };
    auto drop = [&](std::size_t k) {
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(k));
        extra.erase(extra.begin() + static_cast<std::ptrdiff_t>(k));
        for (auto& row : extra) row.erase(row.begin() + static_cast<std::ptrdiff_t>(k));
    };

    for (int round = 0; round < 12; ++round) {
        // Inflate the required distances gradually (growth from a dilute
        // state jams far less than resolving full-size overlaps at once).
        double growth = round == 0 ? kGrowthStart : 1.0;
        for (;;) {
            growth = std::min(1.0, growth);
            double worst = 0.0;
            const int iterations = growth < 1.0 ? kGrowthIterations : kSettleIterations;
            for (int it = 0; it < iterations; ++it) {
                worst = 0.0;
                for (std::size_t i = 0; i < active.size(); ++i) {
                    for (std::size_t j = i + 1; j < active.size(); ++j) {
                        Point dir = active[j].pos - active[i].pos;
                        double d = norm(dir);
                        const double reach = shapes[active[i].slot].r_out + shapes[active[j].slot].r_out + c + extra[i][j];
                        if (d >= growth * reach) continue;
                        if (d < 1e-9) {
                            const double a = rng.uniform(0.0, 2.0 * std::numbers::pi);
                            dir = {std::cos(a), std::sin(a)};
                            d = 0.0;
                        } else {
                            dir = (1.0 / d) * dir;
                        }
                        const double need = growth * required(i, j, dir);
                        if (d >= need) continue;
                        worst = std::max(worst, need - d);
                        const double step = 0.5 * (need - d) + 1e-3;
                        active[i].pos = active[i].pos - step * dir;
                        active[j].pos = active[j].pos + step * dir;
                    }
                }
                clamp_all();
                if (worst == 0.0) break;
            }
            if (growth < 1.0) {
                growth += kGrowthStep;
                continue;
            }
            if (worst == 0.0) break;
            // Still jammed: shed the nucleus carrying the most overlap.
            std::vector<double> load(active.size(), 0.0);
            for (std::size_t i = 0; i < active.size(); ++i) {
                for (std::size_t j = i + 1; j < active.size(); ++j) {
                    Point dir = active[j].pos - active[i].pos;
                    const double d = norm(dir);
                    if (d > 0.0) dir = (1.0 / d) * dir;
                    const double over = std::max(0.0, required(i, j, dir) - d);
                    load[i] += over;
                    load[j] += over;
                }
            }
            std::size_t victim = 0;
            for (std::size_t k = 1; k < load.size(); ++k) {
                if (load[k] >= load[victim]) victim = k;
            }
            drop(victim);
        }

        bool violated = false;
        for (std::size_t i = 0; i < active.size(); ++i) {
            for (std::size_t j = i + 1; j < active.size(); ++j) {
                const Shape& a = shapes[active[i].slot];
                const Shape& b = shapes[active[j].slot];
                const double d = norm(active[i].pos - active[j].pos);
                if (d - a.r_out - b.r_out > c) continue;
                const double gap =
                    boundary_clearance(translate(a.poly, active[i].pos), translate(b.poly, active[j].pos), c + 1.0);
                if (gap > c) continue;
                violated = true;
                extra[i][j] += (c - gap) + 0.5;
            }
        }
        if (!violated) return active;
    }

    // Give up on stubborn pairs: drop the smaller partner until clear.
    for (;;) {
        bool dropped = false;
        for (std::size_t i = 0; i < active.size() && !dropped; ++i) {
            for (std::size_t j = i + 1; j < active.size() && !dropped; ++j) {
                const Shape& a = shapes[active[i].slot];
                const Shape& b = shapes[active[j].slot];
                if (compatible(a, active[i].pos, b, active[j].pos, c)) continue;
                drop(a.area < b.area ? i : j);
                dropped = true;
            }
        }
        if (!dropped) return active;
    }
}

// n sites of the sparsest hexagonal lattice that still offers n points inside
// [inset, size - inset], each jittered by up to 10% of the spacing.
std::vector<Point> hex_sites(int width, int height, double inset, std::size_t n, SeededRng& rng) {
    auto lattice = [&](double a) {
        std::vector<Point> pts;
        const double dy = a * std::sqrt(3.0) / 2.0;
        int row = 0;
        for (double y = inset; y <= height - inset; y += dy, ++row) {
            for (double x = inset + (row % 2 ? 0.5 * a : 0.0); x <= width - inset; x += a) pts.push_back({x, y});
        }
        return pts;
    };
    double lo = 1.0;
    double hi = std::max(width, height);
    for (int it = 0; it < 50; ++it) {
        const double mid = 0.5 * (lo + hi);
        (lattice(mid).size() >= n ? lo : hi) = mid;
    }
    std::vector<Point> pts = lattice(lo);
    for (std::size_t i = pts.size(); i > 1; --i) std::swap(pts[i - 1], pts[rng.below(i)]);
    if (pts.size() > n) pts.resize(n);
    for (auto& p : pts) p = p + Point{rng.uniform(-0.1, 0.1) * lo, rng.uniform(-0.1, 0.1) * lo};
    return pts;
}

}  // namespace

FieldLayout poisson_disk_layout(int width, int height, int target_count, SeededRng& rng, const ShapeSampler& sampler,
                                const PlacementOptions& opt) {
    if (width <= 0 || height <= 0) throw DimensionError("layout needs a non-empty field");
    if (target_count < 0) throw ParameterError("target_count must be non-negative");
    const double scale = static_cast<double>(width) * height / 65536.0;
    if (target_count > static_cast<int>(std::ceil(85.0 * scale))) {
        throw ParameterError("target_count " + std::to_string(target_count) + " exceeds the density bound");
    }
    FieldLayout layout;
    layout.width = width;
    layout.height = height;
    layout.target_count = target_count;
    if (target_count == 0) return layout;

    std::vector<Shape> shapes;
    shapes.reserve(static_cast<std::size_t>(target_count));
    for (int i = 0; i < target_count; ++i) {
        SeededRng shape_rng = rng.derive(static_cast<std::uint64_t>(i));
        shapes.push_back(make_shape(sampler(shape_rng, static_cast<std::size_t>(i))));
    }
    std::vector<std::size_t> order(shapes.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return shapes[a].area > shapes[b].area; });

    double r_max = 0.0;
    for (const auto& s : shapes) r_max = std::max(r_max, s.r_out);
    const double c = opt.min_clearance;
    SpatialGrid grid(width, height, 2.0 * r_max + c);

    const std::int64_t budget = opt.attempt_budget > 0 ? opt.attempt_budget : std::int64_t{30} * target_count * 50;
    // A slot that cannot be placed after a few hundred darts signals a jammed
    // field; the rest of the budget is better spent on relaxation.
    const std::int64_t per_slot = std::clamp<std::int64_t>(budget / target_count, 1, 300);
    int consecutive_misses = 0;
    std::int64_t used = 0;
    std::vector<Placed> placed;
    std::vector<std::size_t> missed;
    for (std::size_t slot : order) {
        const Shape& s = shapes[slot];
        const Bounds bd = centre_bounds(s, width, height, opt.edge_margin);
        bool ok = false;
        if (bd.x0 <= bd.x1 && bd.y0 <= bd.y1 && !(opt.relax && consecutive_misses >= 3)) {
            for (std::int64_t a = 0; a < per_slot && used < budget; ++a) {
                ++used;
                const Point p{rng.uniform(bd.x0, bd.x1), rng.uniform(bd.y0, bd.y1)};
                ok = grid.all_neighbours(p, [&](std::size_t k) {
                    return compatible(s, p, shapes[placed[k].slot], placed[k].pos, c);
                });
                if (ok) {
                    grid.insert(p, placed.size());
                    placed.push_back({slot, p});
                    break;
                }
            }
        }
        if (!ok) missed.push_back(slot);
        consecutive_misses = ok ? 0 : consecutive_misses + 1;
    }

    if (!missed.empty() && opt.relax) {
        // Dense fields: relaxing from random positions jams well below the
        // attainable density, so restart every slot from a jittered
        // hexagonal arrangement and let relaxation settle the shapes.
        double r_mean = 0.0;
        for (const auto& s : shapes) r_mean += s.r_out;
        r_mean /= static_cast<double>(shapes.size());
        const std::vector<Point> sites = hex_sites(width, height, r_mean + opt.edge_margin, shapes.size(), rng);
        std::vector<std::size_t> perm(order);
        for (std::size_t i = perm.size(); i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        std::vector<Placed> active;
        for (std::size_t i = 0; i < perm.size() && i < sites.size(); ++i) active.push_back({perm[i], sites[i]});
        active = relax(shapes, std::move(active), width, height, opt, rng);

        // Relaxation leaves holes where it shed nuclei; offer the shed slots
        // (smallest first) another round of darts.
        std::vector<bool> in_use(shapes.size(), false);
        for (const auto& p : active) in_use[p.slot] = true;
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const std::size_t slot = *it;
            if (in_use[slot]) continue;
            const Shape& s = shapes[slot];
            const Bounds bd = centre_bounds(s, width, height, opt.edge_margin);
            if (bd.x0 > bd.x1 || bd.y0 > bd.y1) continue;
            for (int a = 0; a < 300; ++a) {
                const Point p{rng.uniform(bd.x0, bd.x1), rng.uniform(bd.y0, bd.y1)};
                const bool ok = std::all_of(active.begin(), active.end(), [&](const Placed& q) {
                    return compatible(s, p, shapes[q.slot], q.pos, c);
                });
                if (ok) {
                    active.push_back({slot, p});
                    break;
                }
            }
        }
        if (active.size() > placed.size()) placed = std::move(active);
        std::stable_sort(placed.begin(), placed.end(), [&](const Placed& a, const Placed& b) {
            return shapes[a.slot].area > shapes[b.slot].area;
        });
    }

    int id = 1;
    for (const auto& p : placed) {
        const Shape& s = shapes[p.slot];
        NucleusInstance n;
        n.id = id++;
        n.center = p.pos;
        n.boundary = translate(s.poly, p.pos);
        n.equivalent_radius = s.r_eq;
        layout.nuclei.push_back(std::move(n));
    }
    layout.density_capped = static_cast<int>(placed.size()) < target_count;
    if (static_cast<double>(placed.size()) < 0.8 * target_count) {
        throw PlacementError("placed " + std::to_string(placed.size()) + " of " + std::to_string(target_count) +
                                 " nuclei before the attempt budget ran out",
                             std::move(layout));
    }
    return layout;
}

namespace {

double exclusion_area(double area, double clearance) {
    const double r = std::sqrt(area / std::numbers::pi) + 0.5 * clearance;
    return std::numbers::pi * r * r;
}

// Scale planned areas down (never below the floor) until the clearance disks
// fit the packing budget. Returns the plan unchanged when it already fits.
void fit_area_plan(std::vector<double>& areas, double floor, double clearance, double budget) {
    auto total = [&](double f) {
        double t = 0.0;
        for (double a : areas) t += exclusion_area(std::max(floor, f * a), clearance);
        return t;
    };
    if (total(1.0) <= budget) return;
    double lo = 0.0;
    double hi = 1.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (total(mid) <= budget ? lo : hi) = mid;
    }
    for (auto& a : areas) a = std::max(floor, lo * a);
}

bool layout_verified(const FieldLayout& layout, double clearance) {
    const InstanceMask mask = rasterize_mask(layout);
    for (const auto& n : layout.nuclei) {
        const auto label = static_cast<std::uint16_t>(n.id);
        const std::size_t a = label_area(mask, label);
        if (a < kMinNucleusArea || a > kMaxNucleusArea) return false;
        if (!is_four_connected(mask, label)) return false;
    }
    return layout.nuclei.size() < 2 || min_label_clearance(mask, clearance + 2.0) > clearance;
}

}  // namespace

FieldLayout generate_layout(int width, int height, SeededRng& rng, const LayoutOptions& opt) {
    if (width <= 0 || height <= 0) throw DimensionError("layout needs a non-empty field");
    if (!(opt.class_mix >= 0.0 && opt.class_mix <= 1.0)) throw ParameterError("class_mix must lie in [0, 1]");
    const double scale = static_cast<double>(width) * height / 65536.0;
    const int lo = static_cast<int>(std::ceil(opt.count_min * scale));
    const int hi = static_cast<int>(std::floor(opt.count_max * scale));

    for (int attempt = 0; attempt < 4; ++attempt) {
        SeededRng r = rng.derive(static_cast<std::uint64_t>(attempt));
        const int target =
            std::clamp(static_cast<int>(std::lround(r.normal(opt.count_target_mean * scale, opt.count_sd * scale))), lo, hi);

        const double s2 = std::log(1.0 + (opt.area_sd * opt.area_sd) / (opt.area_mean * opt.area_mean));
        const double mu = std::log(opt.area_mean) - 0.5 * s2;
        std::vector<double> areas(static_cast<std::size_t>(target));
        std::vector<double> amps(static_cast<std::size_t>(target));
        for (int i = 0; i < target; ++i) {
            areas[static_cast<std::size_t>(i)] = std::clamp(r.lognormal(mu, std::sqrt(s2)), opt.area_floor, opt.area_ceiling);
            amps[static_cast<std::size_t>(i)] = r.uniform(opt.perturb_min, opt.perturb_max);
        }
        const double m = opt.placement.edge_margin;
        const double usable = (width - 2.0 * m) * (height - 2.0 * m);
        fit_area_plan(areas, opt.area_floor, opt.placement.min_clearance, opt.packing_budget * usable);

        const ShapeSampler sampler = [&](SeededRng& sr, std::size_t slot) {
            return sample_nucleus_boundary(sr, areas[slot], amps[slot]);
        };
        FieldLayout layout;
        try {
            layout = poisson_disk_layout(width, height, target, r, sampler, opt.placement);
        } catch (const PlacementError& e) {
            if (e.achieved() < lo) continue;
            layout = e.layout();
            layout.density_capped = true;
        }
        if (!layout_verified(layout, opt.placement.min_clearance)) continue;

        for (auto& n : layout.nuclei) {
            n.tissue_class = r.bernoulli(opt.class_mix) ? TissueClass::Dysplasia : TissueClass::Normal;
            n.packing_fraction = n.tissue_class == TissueClass::Normal ? 0.35 : 0.52;
        }
        return layout;
    }
    throw GeometryError("no layout passed verification after 4 attempts");
}

}  // namespace chromasim
