#pragma once

#include <span>
#include <vector>

namespace gradsense {

/// 1-based average ranks: values ranked ascending, ties sharing the mean of
/// the positions they occupy. sum(ranks) == n(n+1)/2 regardless of ties.
std::vector<double> average_ranks(std::span<const double> values);

/// Spearman rank correlation: Pearson correlation of the average ranks,
/// clamped to [-1, 1]. Throws ConstantInputError when either vector has
/// fewer than two distinct values.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace gradsense
