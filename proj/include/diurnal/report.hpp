#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "diurnal/pipeline.hpp"

namespace diurnal {

nlohmann::json to_json(const ReportBundle& bundle);

/// Writes CSV tables and bundle.json into `dir` (created if missing) and,
/// with `plots`, SVG figures rendered from the JSON form. Every file carries
/// the config hash. Returns the written paths in a fixed order.
std::vector<std::filesystem::path> emit_report(const ReportBundle& bundle, const std::filesystem::path& dir,
                                               bool plots);

/// SVG figures (activity curves, ratio curves, month x bin heatmaps and a
/// clock face of waking windows) from a bundle's JSON form.
std::vector<std::filesystem::path> render_plots(const nlohmann::json& bundle, const std::filesystem::path& dir);

}  // namespace diurnal
