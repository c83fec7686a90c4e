#include "gradsense/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "gradsense/errors.hpp"

namespace gradsense {

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n == 0) throw std::invalid_argument("average_ranks: empty input");
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("average_ranks: non-finite entry");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // positions i..j (0-based) share the mean of ranks i+1..j+1
        const double shared = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j + 1));
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw std::invalid_argument("spearman: length mismatch");
    if (x.size() < 2) throw std::invalid_argument("spearman: need at least two samples");

    const auto distinct = [](std::span<const double> v) {
        const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
        return *mn != *mx;
    };
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    if (!distinct(x) || !distinct(y)) {
        throw ConstantInputError("undefined correlation for constant input");
    }

    const double n = static_cast<double>(x.size());
    const double mean = 0.5 * (n + 1.0);  // ranks always average to (n+1)/2
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    const double rho = sxy / std::sqrt(sxx * syy);
    return std::clamp(rho, -1.0, 1.0);
}

}  // namespace gradsense
