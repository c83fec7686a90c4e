#pragma once

#include <cstdint>
#include <vector>

#include "gradsense/dataset.hpp"
#include "gradsense/jet.hpp"
#include "gradsense/matrix.hpp"
#include "gradsense/rng.hpp"

namespace gradsense {

/// The single tanh unit: y = tanh(w . x + b).
struct ModelParams {
    std::vector<double> weights;  // one per input feature
    double bias = 0.0;
};

struct TrainConfig {
    double learning_rate = 0.05;
    int epochs = 300;
    std::uint64_t seed = 0;
    int runs = 5;  // independent re-initialized trainings
};

/// Epoch-by-epoch record of one training run: the loss and, for every
/// feature j, the first/second/third derivative of the loss with respect to
/// weight j, all evaluated at the parameters in force at the start of the
/// epoch (before that epoch's update).
struct GradientTrace {
    int run_id = 0;
    std::uint64_t seed_used = 0;
    std::vector<double> loss;  // length epochs
    Matrix d1, d2, d3;         // epochs x n
};

struct TrainResult {
    ModelParams params;  // parameters after the final update
    GradientTrace trace;
};

/// Glorot-normal draws: n_in independent samples from
/// N(0, 2 / (n_in + n_out)).
std::vector<double> glorot_init(std::size_t n_in, std::size_t n_out, Rng& rng);

/// Mean squared error of the model over the dataset.
double loss_value(const ModelParams& params, const Dataset& data);

/// Loss jet seeded at weight `feature`: v is the loss, d1/d2/d3 are
/// dL/dw_j, d2L/dw_j2, d3L/dw_j3.
Jet3 loss_jet(const ModelParams& params, const Dataset& data, std::size_t feature);

/// dL/db via a jet seeded at the bias.
double bias_gradient(const ModelParams& params, const Dataset& data);

/// Full-batch gradient descent, `cfg.runs` times from independent
/// Glorot-normal initializations (bias starts at 0). Run r uses
/// derive_seed(cfg.seed, r). Deterministic: identical (data, cfg) give
/// bit-identical results.
std::vector<TrainResult> train(const Dataset& data, const TrainConfig& cfg);

}  // namespace gradsense
