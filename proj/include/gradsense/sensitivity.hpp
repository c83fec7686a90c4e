#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gradsense/dataset.hpp"
#include "gradsense/model.hpp"

namespace gradsense {

enum class TrendLabel { Increasing, Decreasing, Flat };

/// Direction of an ordinary-least-squares fit of the series against its
/// epoch index: slope above +flat_epsilon is Increasing, below
/// -flat_epsilon Decreasing, Flat in between.
TrendLabel classify_trend(std::span<const double> series, double flat_epsilon);

/// OLS slope of a series against 0..n-1 (exposed for reporting).
double trend_slope(std::span<const double> series);

struct FeatureSensitivity {
    std::string name;
    std::optional<double> spearman_rho;  // nullopt: undefined (constant column)
    std::vector<TrendLabel> trend_per_run;
    TrendLabel majority_trend = TrendLabel::Flat;
    int predicted_sign = 0;           // +1 Increasing, -1 Decreasing, 0 Flat
    std::optional<bool> agree;        // nullopt: n/a (rho undefined)
};

/// Per-feature comparison of the second-derivative trend against Spearman's
/// rank correlation with the target, aggregated over runs by majority vote
/// (ties go to Flat).
struct SensitivityReport {
    std::vector<FeatureSensitivity> features;
    int n_features = 0;
    int n_agree = 0;
    int n_disagree = 0;
    int n_undefined = 0;
    int runs = 0;
    int epochs = 0;
};

SensitivityReport compare(std::span<const GradientTrace> traces, const Dataset& data,
                          double flat_epsilon);

/// Loss evaluated over a 2-D affine slice of parameter space:
/// L(params + alpha * dir1 + beta * dir2) on a uniform square grid.
struct SurfaceSlice {
    std::vector<double> alphas;  // grid coordinates, axis 1
    std::vector<double> betas;   // axis 2
    Matrix losses;               // |alphas| x |betas|; +inf marks a non-finite cell
    std::array<std::vector<double>, 2> directions;  // each length n+1 (weights, bias)
};

/// Slice along two explicit unit directions (each of length n+1).
SurfaceSlice surface_slice(const ModelParams& params, const Dataset& data, double half_width,
                           int grid_points, std::span<const double> dir1,
                           std::span<const double> dir2);

/// Slice along two random directions: independent standard-normal entries,
/// normalized to unit Euclidean norm.
SurfaceSlice surface_slice(const ModelParams& params, const Dataset& data, double half_width,
                           int grid_points, Rng& rng);

/// Per-feature keep/drop mask: 1 where the second-derivative trend is
/// Increasing, 0 otherwise.
std::vector<int> build_mask(const GradientTrace& trace, double flat_epsilon);

/// Elementwise product of an image with a binary mask.
std::vector<double> apply_mask(std::span<const double> image, std::span<const int> mask);

}  // namespace gradsense
