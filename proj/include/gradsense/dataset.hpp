#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gradsense/matrix.hpp"

namespace gradsense {

/// A fully materialized regression table: N samples by n features plus a
/// scalar target per sample.
struct Dataset {
    Matrix x;                         // N x n, row-major
    std::vector<double> target;      // length N
    std::vector<std::string> names;  // n unique feature names
    std::string target_name = "target";

    std::size_t samples() const noexcept { return x.rows(); }
    std::size_t features() const noexcept { return x.cols(); }
    std::vector<double> feature_column(std::size_t j) const { return x.column(j); }
};

enum class FeatureKind { PosLinear, NegLinear, PosCubic, NegCubic, Noise };

struct FeatureSpec {
    std::string name;
    FeatureKind kind = FeatureKind::Noise;
    double coefficient = 0.0;
};

/// Recipe for a synthetic monotone-relationship dataset. Features are drawn
/// i.i.d. uniform on [-1, 1]; the target is the signed sum of per-feature
/// contributions (identity or cube) plus Gaussian noise.
struct SynthSpec {
    int n_samples = 200;
    std::vector<FeatureSpec> features;
    double noise_sd = 0.1;
    std::uint64_t seed = 0;
};

/// The stock 13-column spec used by `analyze --synth`: six positive and six
/// negative features (three linear + three cubic each) and one pure-noise
/// column.
SynthSpec default_synth_spec(std::uint64_t seed);

Dataset synth_generate(const SynthSpec& spec);

/// Parse a CSV with a header row. `target_column` selects the target by
/// name; an empty string means the last column.
Dataset load_csv(const std::filesystem::path& path, const std::string& target_column = "");

/// Emit a dataset as CSV (features in order, target last) with shortest
/// round-trip number formatting, so load_csv(write_csv(d)) == d.
void write_csv(const Dataset& data, const std::filesystem::path& path);

/// Z-score every feature column and the target: mean 0, sample standard
/// deviation 1 (divisor N-1).
Dataset standardize(const Dataset& data);

struct MnistSubset {
    Matrix images;           // limit x 784, pixel values in [0, 1]
    std::vector<int> labels;
};

/// Read the first `limit` items of an MNIST IDX image/label file pair
/// (big-endian, magic 0x803 / 0x801, 28x28 images).
MnistSubset load_mnist_idx(const std::filesystem::path& images_path,
                           const std::filesystem::path& labels_path, int limit);

/// One-vs-rest task: target +1 where the label equals `digit`, -1 otherwise.
Dataset binary_task(const MnistSubset& subset, int digit);

}  // namespace gradsense
