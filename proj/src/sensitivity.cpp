#include "gradsense/sensitivity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "gradsense/errors.hpp"
#include "gradsense/stats.hpp"

namespace gradsense {

double trend_slope(std::span<const double> series) {
    const std::size_t n = series.size();
    const double e_mean = 0.5 * static_cast<double>(n - 1);
    double s_mean = 0.0;
    for (double v : series) s_mean += v;
    s_mean /= static_cast<double>(n);

    double num = 0.0, den = 0.0;
    for (std::size_t e = 0; e < n; ++e) {
        const double de = static_cast<double>(e) - e_mean;
        num += de * (series[e] - s_mean);
        den += de * de;
    }
    return num / den;
}

TrendLabel classify_trend(std::span<const double> series, double flat_epsilon) {
    if (series.size() < 2) throw std::invalid_argument("classify_trend: series shorter than 2");
    if (!(flat_epsilon >= 0.0)) throw std::invalid_argument("classify_trend: flat_epsilon must be >= 0");
    for (double v : series) {
        if (!std::isfinite(v)) throw std::invalid_argument("classify_trend: non-finite entry");
    }
    const double slope = trend_slope(series);
    if (slope > flat_epsilon) return TrendLabel::Increasing;
    if (slope < -flat_epsilon) return TrendLabel::Decreasing;
    return TrendLabel::Flat;
}

SensitivityReport compare(std::span<const GradientTrace> traces, const Dataset& data,
                          double flat_epsilon) {
    if (traces.empty()) throw std::invalid_argument("compare: empty trace list");
    const std::size_t n = data.features();
    for (const auto& t : traces) {
        if (t.d2.cols() != n) {
            throw std::invalid_argument("compare: feature-count mismatch between trace and dataset");
        }
        if (t.loss.size() != traces.front().loss.size()) {
            throw std::invalid_argument("compare: epoch-count mismatch between traces");
        }
    }

    SensitivityReport report;
    report.n_features = static_cast<int>(n);
    report.runs = static_cast<int>(traces.size());
    report.epochs = static_cast<int>(traces.front().loss.size());

    for (std::size_t j = 0; j < n; ++j) {
        FeatureSensitivity f;
        f.name = data.names[j];

        try {
            f.spearman_rho = spearman(data.feature_column(j), data.target);
        } catch (const ConstantInputError&) {
            f.spearman_rho = std::nullopt;
        }

        int votes_inc = 0, votes_dec = 0, votes_flat = 0;
        for (const auto& t : traces) {
            const auto label = classify_trend(t.d2.column(j), flat_epsilon);
            f.trend_per_run.push_back(label);
            if (label == TrendLabel::Increasing) ++votes_inc;
            else if (label == TrendLabel::Decreasing) ++votes_dec;
            else ++votes_flat;
        }
        if (votes_inc > votes_dec && votes_inc > votes_flat) {
            f.majority_trend = TrendLabel::Increasing;
        } else if (votes_dec > votes_inc && votes_dec > votes_flat) {
            f.majority_trend = TrendLabel::Decreasing;
        } else {
            f.majority_trend = TrendLabel::Flat;  // ties included
        }
        f.predicted_sign = f.majority_trend == TrendLabel::Increasing   ? 1
                           : f.majority_trend == TrendLabel::Decreasing ? -1
                                                                        : 0;

        if (!f.spearman_rho.has_value()) {
            f.agree = std::nullopt;
            ++report.n_undefined;
        } else {
            const double rho = *f.spearman_rho;
            const int rho_sign = rho > 0.0 ? 1 : rho < 0.0 ? -1 : 0;
            const bool agree = rho_sign != 0 && f.predicted_sign != 0 && rho_sign == f.predicted_sign;
            f.agree = agree;
            if (agree) ++report.n_agree;
            else ++report.n_disagree;
        }
        report.features.push_back(std::move(f));
    }
    return report;
}

SurfaceSlice surface_slice(const ModelParams& params, const Dataset& data, double half_width,
                           int grid_points, std::span<const double> dir1,
                           std::span<const double> dir2) {
    if (grid_points < 3 || grid_points % 2 == 0) {
        throw std::invalid_argument("grid must be odd and at least 3");
    }
    if (!(half_width > 0.0)) throw std::invalid_argument("half_width must be > 0");
    const std::size_t dim = params.weights.size() + 1;
    if (dir1.size() != dim || dir2.size() != dim) {
        throw std::invalid_argument("direction length must be weight count + 1");
    }

    const auto g = static_cast<std::size_t>(grid_points);
    const std::size_t mid = (g - 1) / 2;
    const double step = half_width / static_cast<double>(mid);

    SurfaceSlice slice;
    slice.directions[0].assign(dir1.begin(), dir1.end());
    slice.directions[1].assign(dir2.begin(), dir2.end());
    slice.alphas.resize(g);
    slice.betas.resize(g);
    for (std::size_t k = 0; k < g; ++k) {
        // symmetric around an exact zero at the center cell
        const double c = (static_cast<double>(k) - static_cast<double>(mid)) * step;
        slice.alphas[k] = c;
        slice.betas[k] = c;
    }

    slice.losses = Matrix(g, g);
    ModelParams shifted = params;
    for (std::size_t ia = 0; ia < g; ++ia) {
        for (std::size_t ib = 0; ib < g; ++ib) {
            const double a = slice.alphas[ia];
            const double b = slice.betas[ib];
            for (std::size_t k = 0; k < params.weights.size(); ++k) {
                shifted.weights[k] = params.weights[k] + a * dir1[k] + b * dir2[k];
            }
            shifted.bias = params.bias + a * dir1[dim - 1] + b * dir2[dim - 1];
            const double loss = loss_value(shifted, data);
            slice.losses(ia, ib) =
                std::isfinite(loss) ? loss : std::numeric_limits<double>::infinity();
        }
    }
    return slice;
}

SurfaceSlice surface_slice(const ModelParams& params, const Dataset& data, double half_width,
                           int grid_points, Rng& rng) {
    const std::size_t dim = params.weights.size() + 1;
    const auto draw_unit = [&] {
        std::vector<double> dir(dim);
        double norm_sq = 0.0;
        for (auto& v : dir) {
            v = rng.normal();
            norm_sq += v * v;
        }
        const double norm = std::sqrt(norm_sq);
        if (norm == 0.0) throw std::runtime_error("degenerate direction draw");
        for (auto& v : dir) v /= norm;
        return dir;
    };
    const auto dir1 = draw_unit();
    const auto dir2 = draw_unit();
    return surface_slice(params, data, half_width, grid_points, dir1, dir2);
}

std::vector<int> build_mask(const GradientTrace& trace, double flat_epsilon) {
    std::vector<int> mask(trace.d2.cols());
    for (std::size_t j = 0; j < trace.d2.cols(); ++j) {
        mask[j] = classify_trend(trace.d2.column(j), flat_epsilon) == TrendLabel::Increasing ? 1 : 0;
    }
    return mask;
}

std::vector<double> apply_mask(std::span<const double> image, std::span<const int> mask) {
    if (image.size() != mask.size()) throw std::invalid_argument("apply_mask: length mismatch");
    std::vector<double> out(image.size());
    for (std::size_t i = 0; i < image.size(); ++i) {
        out[i] = image[i] * static_cast<double>(mask[i]);
    }
    return out;
}

}  // namespace gradsense
