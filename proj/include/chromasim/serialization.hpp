#pragma once

#include <nlohmann/json.hpp>

#include "chromasim/modality_render.hpp"
#include "chromasim/nucleus_geometry.hpp"

namespace chromasim {

nlohmann::ordered_json to_json(const RenderParams& p);
/// Overwrites the named fields; unknown keys raise InputError.
void apply_overrides(RenderParams& p, const nlohmann::json& overrides);

nlohmann::ordered_json to_json(const AugmentRecord& r);

/// Per-image sidecar: modality, seeds, params hash, SNR, nucleus table.
nlohmann::ordered_json sidecar_json(const FieldSample& s, const std::string& params_hash);

}  // namespace chromasim
