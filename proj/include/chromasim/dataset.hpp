#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chromasim/biomarkers.hpp"
#include "chromasim/modality_render.hpp"
#include "chromasim/nucleus_geometry.hpp"

namespace chromasim::dataset {

namespace fs = std::filesystem;

struct DatasetConfig {
    Modality modality = Modality::Cspws;
    int train = 1200;
    int val = 200;
    int test = 200;
    int image_size = 256;
    double pixel_size = 0.5;
    std::uint64_t master_seed = 0;
    std::optional<double> class_mix;  // default: 0.5 for cspws, 0 otherwise
    RenderParams render;
    LayoutOptions layout;

    int total() const { return train + val + test; }
    double effective_class_mix() const;
    /// Throws InputError on invalid values.
    void validate() const;
};

/// Keys: modality, counts{train,val,test}, image_size, pixel_size, seed,
/// class_mix, render{...}, layout{...}. Unknown keys raise InputError.
void apply_config(DatasetConfig& cfg, const nlohmann::json& j);
DatasetConfig load_config(const fs::path& path);
nlohmann::ordered_json config_json(const DatasetConfig& cfg);

std::string split_of(const DatasetConfig& cfg, int index);
std::string image_name(int index);
std::string mask_name(int index);
std::string meta_name(int index);

/// Writes to a temporary sibling, then renames over `path`.
void write_atomic(const fs::path& path, const std::string& content);
std::string read_text(const fs::path& path);

struct GenerateOptions {
    int workers = 1;
    std::optional<fs::path> dump_fields;
};

struct GenerateResult {
    fs::path dataset_dir;   // <root>/<modality>
    int generated = 0;
    std::vector<std::string> failures;
};

GenerateResult generate_dataset(const DatasetConfig& cfg, const fs::path& root, const GenerateOptions& opt = {});

/// Accepts a dataset directory or a root holding exactly one dataset.
fs::path resolve_dataset_dir(const fs::path& dir);

struct VerifyIssue {
    std::string path;
    std::string problem;  // "missing" | "sha256 mismatch"
};
std::vector<VerifyIssue> verify_manifest(const fs::path& dir);

/// One image of a dataset as listed in its manifest.
struct ImageRecord {
    int index = 0;
    std::string split;
    std::string image_path;  // relative to the dataset directory
    std::string mask_path;
    std::string meta_path;
};
std::vector<ImageRecord> list_images(const fs::path& dataset_dir);

/// Image, mask and nucleus classes from disk.
FieldSample load_sample(const fs::path& dataset_dir, const ImageRecord& rec);

struct ExtractResult {
    std::vector<BiomarkerVector> rows;
    int failed_images = 0;
};
ExtractResult extract_dataset(const fs::path& dataset_dir, int workers, const PixelCalibration& cal = {});
std::vector<BiomarkerVector> read_biomarker_csv(const fs::path& path);

struct EvaluateResult {
    std::string per_image_csv;
    std::string summary_csv;
    double mean_dice = 0.0, mean_iou = 0.0, mean_precision = 0.0, mean_recall = 0.0;
};
EvaluateResult evaluate_dirs(const fs::path& pred, const fs::path& truth, std::uint64_t seed, std::size_t resamples = 10000);

}  // namespace chromasim::dataset
