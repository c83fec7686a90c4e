#pragma once

#include <cstdint>
#include <string>

namespace gradsense::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitDivergence = 3;

struct AnalyzeOptions {
    bool use_synth = false;
    std::string input_csv;      // used when use_synth is false
    std::string target_column;  // empty: last column
    double learning_rate = 0.05;
    int epochs = 300;
    int runs = 5;
    std::uint64_t seed = 7;
    double flat_epsilon = 1e-9;
    bool standardize = true;
    std::string out_dir = "out";
};

struct SurfaceOptions {
    bool use_synth = false;
    std::string input_csv;
    std::string target_column;
    double half_width = 1.0;
    int grid_points = 41;
    std::uint64_t seed = 7;
    std::string out_dir = "out";
};

struct MnistMaskOptions {
    std::string images_path;
    std::string labels_path;
    int digit = 0;
    int limit = 500;
    double learning_rate = 0.05;
    int epochs = 100;
    std::uint64_t seed = 7;
    std::string out_dir = "out";
};

/// Train, compare second-derivative trends against Spearman, and emit
/// per-run trace CSVs, report.json, dataset.csv, and manifest.json.
int run_analyze(const AnalyzeOptions& opts);

/// Train once and export a 2-D loss-surface slice around the final
/// parameters as surface.csv plus manifest.json.
int run_surface(const SurfaceOptions& opts);

/// Train a one-vs-rest MNIST task, build the increasing-trend gradient
/// mask, and emit mask.csv, masked PGMs, and manifest.json.
int run_mnist_mask(const MnistMaskOptions& opts);

}  // namespace gradsense::cli
