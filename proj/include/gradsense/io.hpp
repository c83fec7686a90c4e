#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gradsense/model.hpp"
#include "gradsense/sensitivity.hpp"

namespace gradsense {

/// Trace CSV: header `epoch,loss` followed by `d1_<name>,d2_<name>,d3_<name>`
/// per feature, one row per epoch.
void write_trace_csv(const GradientTrace& trace, std::span<const std::string> feature_names,
                     const std::filesystem::path& path);

struct TraceFile {
    GradientTrace trace;  // run_id / seed_used are not stored in the CSV
    std::vector<std::string> feature_names;
};

TraceFile read_trace_csv(const std::filesystem::path& path);

/// Long-format surface CSV: `alpha,beta,loss`, one row per grid cell,
/// alpha-major.
void write_surface_csv(const SurfaceSlice& slice, const std::filesystem::path& path);

/// `pixel,mask` rows, one per entry.
void write_mask_csv(std::span<const int> mask, const std::filesystem::path& path);

/// ASCII PGM (P2), width x height, maxval 255. Pixels are given in [0, 1]
/// and written as round(255 * p).
void write_pgm(std::span<const double> pixels, int width, int height,
               const std::filesystem::path& path);

std::string trend_label_name(TrendLabel label);

nlohmann::ordered_json report_to_json(const SensitivityReport& report);

/// Everything needed to reproduce and audit a command invocation: resolved
/// configuration, master seed, per-run sub-seeds, a timestamp, headline
/// numbers, and the files the run emitted.
struct RunManifest {
    std::string command;
    nlohmann::ordered_json config;
    std::uint64_t seed = 0;
    std::vector<std::uint64_t> run_seeds;
    std::string created_utc;
    nlohmann::ordered_json results;
    std::vector<std::string> artifacts;
};

std::string now_utc_iso8601();

nlohmann::ordered_json manifest_to_json(const RunManifest& manifest);

void write_json(const nlohmann::ordered_json& j, const std::filesystem::path& path);

}  // namespace gradsense
