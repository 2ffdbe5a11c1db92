#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "chromasim/biomarkers.hpp"

namespace chromasim {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename F>
void guarded(BiomarkerVector& v, const char* name, double& slot, F&& f) {
    try {
        slot = f();
    } catch (const Error& e) {
        slot = kNaN;
        v.flags.push_back(std::string(name) + ":" + e.what());
    }
}

}  // namespace

const std::vector<std::string>& biomarker_names() {
    static const std::vector<std::string> names{"area",           "perimeter",      "circularity",       "eccentricity",
                                                "sigma_intensity", "variance_slope", "packing_dimension", "entropy"};
    return names;
}

double biomarker_value(const BiomarkerVector& v, int index) {
    switch (index) {
        case 0: return v.area;
        case 1: return v.perimeter;
        case 2: return v.circularity;
        case 3: return v.eccentricity;
        case 4: return v.sigma_mean_intensity;
        case 5: return v.variance_slope;
        case 6: return v.packing_dimension;
        case 7: return v.entropy;
        default: throw ParameterError("biomarker index out of range");
    }
}

bool biomarker_valid(const BiomarkerVector& v, int index) { return std::isfinite(biomarker_value(v, index)); }

std::vector<BiomarkerVector> extract_all(const Image& image, const InstanceMask& mask,
                                         const std::vector<NucleusInstance>& nuclei, const PixelCalibration& cal,
                                         const std::string& image_id) {
    if (image.width() != mask.width() || image.height() != mask.height()) {
        throw InputError("image and mask dimensions differ");
    }
    if (!(cal.pixel_size > 0.0)) throw ParameterError("pixel_size must be positive");
    const ScalarField plane = image.channels() == 1 ? image.channel(0) : image.luminance();
    const auto labels = mask_labels(mask);
    std::vector<BiomarkerVector> out(labels.size());
    if (labels.empty()) return out;

    std::map<int, TissueClass> classes;
    for (const auto& n : nuclei) classes[n.id] = n.tissue_class;

    IntensityContext ctx;
    bool ctx_ok = true;
    std::string ctx_error;
    try {
        ctx = intensity_context(plane, mask);
    } catch (const MeasurementError& e) {
        ctx_ok = false;
        ctx_error = e.what();
    }

#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const std::uint16_t label = labels[i];
        BiomarkerVector& v = out[i];
        v.image_id = image_id;
        v.nucleus_id = label;
        if (auto it = classes.find(label); it != classes.end()) v.tissue_class = std::string(to_string(it->second));
        v.area = static_cast<double>(label_area(mask, label));
        v.area_um2 = v.area * cal.pixel_size * cal.pixel_size;
        try {
            const Morphometrics m = morphometrics(mask, label);
            v.perimeter = m.perimeter;
            v.circularity = m.circularity;
            v.eccentricity = m.eccentricity;
            if (m.components > 1) v.flags.push_back("morphometrics:split_region");
        } catch (const Error& e) {
            v.perimeter = v.circularity = v.eccentricity = kNaN;
            v.flags.push_back(std::string("morphometrics:") + e.what());
        }
        if (ctx_ok) {
            guarded(v, "sigma_intensity", v.sigma_mean_intensity, [&] { return sigma_intensity(plane, mask, label, ctx); });
            if (ctx.background_fallback) v.flags.push_back("sigma_intensity:background_fallback");
            guarded(v, "entropy", v.entropy, [&] { return chromatin_entropy(plane, mask, label, ctx); });
        } else {
            v.sigma_mean_intensity = v.entropy = kNaN;
            v.flags.push_back("intensity:" + ctx_error);
        }
        try {
            const ScalarField patch = nucleus_patch(plane, mask, label);
            guarded(v, "variance_slope", v.variance_slope, [&] { return variance_slope_field(patch); });
            guarded(v, "packing_dimension", v.packing_dimension, [&] { return spectral_fit(patch).dimension; });
        } catch (const Error& e) {
            v.variance_slope = v.packing_dimension = kNaN;
            v.flags.push_back(std::string("patch:") + e.what());
        }
    }
    return out;
}

std::vector<BiomarkerVector> extract_all(const FieldSample& sample, const PixelCalibration& cal,
                                         const std::string& image_id) {
    return extract_all(sample.image, sample.mask, sample.layout.nuclei, cal, image_id);
}

std::string format_fixed(double v) {
    if (!std::isfinite(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    std::string s(buf);
    if (s == "-0.000000") s = "0.000000";
    return s;
}

std::string biomarker_csv_header() {
    return "image_id,nucleus_id,tissue_class,area_px2,area_um2,perimeter_px,circularity,eccentricity,"
           "sigma_intensity,variance_slope,packing_D,entropy_bits,flags";
}

std::string biomarker_csv_row(const BiomarkerVector& v) {
    std::string flags;
    for (const auto& f : v.flags) {
        if (!flags.empty()) flags += ';';
        for (char c : f) flags += (c == ',' || c == '\n') ? ' ' : c;
    }
    std::string row = v.image_id + "," + std::to_string(v.nucleus_id) + "," + v.tissue_class;
    for (double x : {v.area, v.area_um2, v.perimeter, v.circularity, v.eccentricity, v.sigma_mean_intensity,
                     v.variance_slope, v.packing_dimension, v.entropy}) {
        row += "," + format_fixed(x);
    }
    return row + "," + flags;
}

}  // namespace chromasim
