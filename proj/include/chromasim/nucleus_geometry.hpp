#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "chromasim/common.hpp"
#include "chromasim/geometry.hpp"
#include "chromasim/rng.hpp"

namespace chromasim {

enum class TissueClass { Normal, Dysplasia };

std::string_view to_string(TissueClass c);
TissueClass parse_tissue_class(std::string_view s);

struct NucleusInstance {
    int id = 0;
    Point center;
    Polygon boundary;  // closed, absolute image coordinates
    TissueClass tissue_class = TissueClass::Normal;
    double packing_fraction = 0.35;
    double equivalent_radius = 0.0;
};

struct FieldLayout {
    int width = 0;
    int height = 0;
    std::vector<NucleusInstance> nuclei;
    int target_count = 0;
    bool density_capped = false;  // fewer nuclei than targeted fit
};

// Axis ratio ~ LogNormal(mu, 0.3) with mu chosen so E[ratio] = 1.4.
inline constexpr double kAxisRatioMean = 1.4;
inline constexpr double kAxisRatioSigma = 0.3;
inline constexpr double kMinNucleusArea = 500.0;
inline constexpr double kMaxNucleusArea = 3000.0;
inline constexpr double kMinClearance = 10.0;

double sample_axis_ratio(SeededRng& rng);

struct ShapeOptions {
    std::optional<double> axis_ratio;  // overrides the log-normal draw
    double knot_spacing = 8.0;
};

/// Ellipse with random orientation, radial periodic-noise perturbation of the
/// given amplitude, B-spline smoothing, isotropic rescale to target_area.
/// Returned polygon is closed and centred on its centroid at the origin.
Polygon sample_nucleus_boundary(SeededRng& rng, double target_area, double perturb_amplitude,
                                const ShapeOptions& opt = {});

/// Interpolating periodic cubic B-spline through points resampled every
/// knot_spacing of arc length; output resampled to max(64, length) vertices.
Polygon smooth_boundary_bspline(const Polygon& points, double knot_spacing);

/// Shape for placement slot `slot`, centred at the origin.
using ShapeSampler = std::function<Polygon(SeededRng& rng, std::size_t slot)>;

struct PlacementOptions {
    double min_clearance = kMinClearance;
    std::int64_t attempt_budget = 0;  // 0 -> 30 * target * 50
    bool relax = true;                // relaxation pass when dart throwing stalls
    double edge_margin = 1.0;         // boundary stays this far inside the field
};

/// Thrown when fewer than 0.8 * target nuclei could be placed; carries the
/// partial layout.
class PlacementError : public GeometryError {
public:
    PlacementError(const std::string& what, FieldLayout partial)
        : GeometryError(what), layout_(std::move(partial)) {}
    const FieldLayout& layout() const { return layout_; }
    int achieved() const { return static_cast<int>(layout_.nuclei.size()); }

private:
    FieldLayout layout_;
};

FieldLayout poisson_disk_layout(int width, int height, int target_count, SeededRng& rng, const ShapeSampler& sampler,
                                const PlacementOptions& opt = {});

/// Per-image scene statistics, quoted per 256 x 256 field and scaled by area.
///
/// A 256 x 256 field holds at most about 47 nuclei under the clearance rule,
/// so draws above that are capped. The target mean sits above 42 so that the
/// realized counts centre on 42.
struct LayoutOptions {
    double count_target_mean = 54.0;
    double count_sd = 18.0;
    double count_min = 15.0;
    double count_max = 85.0;
    double area_mean = 1200.0;
    double area_sd = 450.0;
    double area_floor = 520.0;    // planned areas keep a margin over 500 for rasterization
    double area_ceiling = 2950.0;
    double packing_budget = 0.62; // max fraction of the field the exclusion disks may cover
    double perturb_min = 2.0;
    double perturb_max = 5.0;
    double class_mix = 0.0;       // P(dysplasia)
    PlacementOptions placement;
};

/// Count draw, area plan, shape sampling, placement, class assignment and a
/// post-rasterization check of areas, connectivity and clearance.
FieldLayout generate_layout(int width, int height, SeededRng& rng, const LayoutOptions& opt = {});

/// Pixel-centre-in-polygon fill; earlier ids are never overwritten.
InstanceMask rasterize_mask(const FieldLayout& layout);
void rasterize_polygon(InstanceMask& mask, const Polygon& poly, std::uint16_t label);

struct PerturbResult {
    InstanceMask mask;
    std::vector<std::uint16_t> annihilated;
};

/// Per-label dilation (offset > 0) or erosion (offset < 0) by a Euclidean disk
/// of radius |offset|. Contested dilation pixels go to the nearest label.
PerturbResult perturb_mask(const InstanceMask& mask, int offset);

/// Sorted distinct non-zero labels.
std::vector<std::uint16_t> mask_labels(const InstanceMask& mask);
std::size_t label_area(const InstanceMask& mask, std::uint16_t label);
bool is_four_connected(const InstanceMask& mask, std::uint16_t label);

/// Smallest Euclidean distance between pixel centres of different labels
/// (capped at `cap`).
double min_label_clearance(const InstanceMask& mask, double cap = 64.0);

}  // namespace chromasim
