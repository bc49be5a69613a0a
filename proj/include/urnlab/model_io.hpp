#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "urnlab/colors.hpp"
#include "urnlab/sparse_law.hpp"

namespace urnlab {

/// Parses a probability given as a JSON number or a decimal / "p/q" string.
double parse_probability(const nlohmann::json& value);

/// {"dim": d, "embedding": [[...], ...], "atoms": [{"coeffs": [...], "prob": r}, ...]}.
/// The embedding defaults to the identity.
IncrementModel model_from_json(const nlohmann::json& doc, std::string name = "file");
nlohmann::json model_to_json(const IncrementModel& model);

/// "ssrw<d>", "right-shift", "triangular" or "file:<path>".
IncrementModel resolve_model(std::string_view ref);

/// "delta:c0,c1,..." (or "delta:0" for the origin in any dimension) or
/// "file:<path>" holding {"atoms": [{"coeffs": [...], "mass": r}, ...]}.
SparseLaw resolve_initial(std::string_view ref, int dim);

nlohmann::json read_json_file(const std::filesystem::path& path);

}  // namespace urnlab
