// Acceptance suite: one self-contained check per criterion, each printing a
// single PASS/FAIL line. Run with a criterion number (1-9) or no argument
// for the full list. Exit code = number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "gradsense/commands.hpp"
#include "gradsense/dataset.hpp"
#include "gradsense/io.hpp"
#include "gradsense/jet.hpp"
#include "gradsense/model.hpp"
#include "gradsense/rng.hpp"
#include "gradsense/sensitivity.hpp"
#include "gradsense/stats.hpp"
#include "support/closed_form.hpp"
#include "support/finite_diff.hpp"
#include "support/idx_fixture.hpp"
#include "support/temp_dir.hpp"

using namespace gradsense;
namespace fs = std::filesystem;

namespace {

struct Check {
    bool ok = true;
    std::string detail;

    void expect(bool cond, const std::string& message) {
        if (!cond && ok) {
            ok = false;
            detail = message;
        }
    }
};

std::string read_bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

Dataset random_instance(Rng& rng) {
    const auto n = static_cast<std::size_t>(1.0 + rng.uniform() * 10.0);
    const auto rows = static_cast<std::size_t>(1.0 + rng.uniform() * 50.0);
    Dataset d;
    d.x = Matrix(rows, n);
    d.target.resize(rows);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < n; ++j) d.x(i, j) = rng.uniform(-2.0, 2.0);
        d.target[i] = rng.uniform(-2.0, 2.0);
    }
    for (std::size_t j = 0; j < n; ++j) d.names.push_back("f" + std::to_string(j));
    return d;
}

// Criterion 1: loss_jet vs finite differences and the closed form on 200
// random small instances, under 10 s.
Check criterion_derivative_correctness() {
    Check c;
    Rng rng(1001);
    for (int k = 0; k < 200; ++k) {
        const auto data = random_instance(rng);
        ModelParams params;
        params.weights.resize(data.features());
        for (auto& w : params.weights) w = rng.uniform(-2.0, 2.0);
        params.bias = rng.uniform(-2.0, 2.0);
        const auto j =
            static_cast<std::size_t>(rng.uniform() * static_cast<double>(data.features()));

        const auto jet = loss_jet(params, data, j);
        const auto cf = oracle::closed_form_loss_derivs(params, data, j);
        c.expect(oracle::close_rel(jet.d1, cf.d1, 1e-10), "closed-form d1 mismatch");
        c.expect(oracle::close_rel(jet.d2, cf.d2, 1e-10), "closed-form d2 mismatch");
        c.expect(oracle::close_rel(jet.d3, cf.d3, 1e-10), "closed-form d3 mismatch");

        auto loss_of_wj = [&](double wj) {
            ModelParams shifted = params;
            shifted.weights[j] = wj;
            return loss_value(shifted, data);
        };
        const double wj = params.weights[j];
        c.expect(oracle::close_rel(jet.d1, oracle::fd1(loss_of_wj, wj), oracle::kTol1),
                 "finite-difference d1 outside 1e-6");
        c.expect(oracle::close_rel(jet.d2, oracle::fd2(loss_of_wj, wj), oracle::kTol2),
                 "finite-difference d2 outside 1e-5");
        c.expect(oracle::close_rel(jet.d3, oracle::fd3(loss_of_wj, wj), oracle::kTol3),
                 "finite-difference d3 outside 1e-3");
        if (!c.ok) break;
    }
    return c;
}

// Criterion 2: tanh jet exactness at 0 and the (0, 1] derivative range.
Check criterion_tanh_exactness() {
    Check c;
    const auto j = tanh(seed(0.0));
    c.expect(j.v == 0.0 && j.d1 == 1.0 && j.d2 == 0.0 && j.d3 == -2.0,
             "jet_tanh(jet_seed(0)) != (0, 1, 0, -2)");
    Rng rng(1002);
    for (int k = 0; k < 1000; ++k) {
        const double g1 = tanh(seed(rng.uniform(-6.0, 6.0))).d1;
        c.expect(g1 > 0.0 && g1 <= 1.0, "tanh derivative left (0, 1]");
    }
    return c;
}

// Criterion 3: Spearman against the d^2 formula, tie handling against a
// brute-force rank oracle, and exact +/-1 boundaries.
Check criterion_spearman() {
    Check c;
    Rng rng(1003);

    auto rank_oracle = [](const std::vector<double>& v) {
        std::vector<double> ranks(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            double less = 0.0, equal = 0.0;
            for (double w : v) {
                less += w < v[i];
                equal += w == v[i];
            }
            ranks[i] = less + 0.5 * (equal + 1.0);
        }
        return ranks;
    };

    for (int k = 0; k < 100; ++k) {
        std::vector<double> x(10), y(10);
        for (std::size_t i = 0; i < 10; ++i) x[i] = static_cast<double>(i + 1);
        y = x;
        for (std::size_t i = 9; i > 0; --i) {
            std::swap(x[i], x[static_cast<std::size_t>(rng.uniform() * (i + 1.0))]);
            std::swap(y[i], y[static_cast<std::size_t>(rng.uniform() * (i + 1.0))]);
        }
        double sum_d2 = 0.0;
        const auto rx = rank_oracle(x);
        const auto ry = rank_oracle(y);
        for (std::size_t i = 0; i < 10; ++i) sum_d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
        const double formula = 1.0 - 6.0 * sum_d2 / (10.0 * 99.0);
        c.expect(std::abs(spearman(x, y) - formula) <= 1e-12, "tie-free formula mismatch");
    }

    for (int k = 0; k < 100; ++k) {
        std::vector<double> v(12);
        for (auto& x : v) x = std::floor(rng.uniform(-3.0, 3.0));
        v[0] = -9.0;
        v[11] = 9.0;
        const auto got = average_ranks(v);
        const auto want = rank_oracle(v);
        for (std::size_t i = 0; i < v.size(); ++i) {
            c.expect(got[i] == want[i], "tied ranks differ from the brute-force oracle");
        }
    }

    c.expect(spearman(std::vector{1.0, 2.0, 3.0, 4.0}, std::vector{3.0, 5.0, 6.0, 9.0}) == 1.0,
             "monotone increase is not exactly 1");
    c.expect(spearman(std::vector{1.0, 2.0, 3.0, 4.0}, std::vector{9.0, 6.0, 5.0, 3.0}) == -1.0,
             "monotone decrease is not exactly -1");
    return c;
}

// Criterion 4: Glorot draws with n_in=13, n_out=1.
Check criterion_glorot() {
    Check c;
    Rng rng(1004);
    constexpr int kDraws = 10000;
    const double target_var = 1.0 / 7.0;
    std::vector<double> draws;
    draws.reserve(kDraws);
    while (draws.size() < kDraws) {
        for (double v : glorot_init(13, 1, rng)) {
            if (draws.size() < kDraws) draws.push_back(v);
        }
    }
    double mean = 0.0;
    for (double v : draws) mean += v;
    mean /= kDraws;
    double var = 0.0;
    for (double v : draws) var += (v - mean) * (v - mean);
    var /= kDraws - 1;

    const double se = std::sqrt(target_var / kDraws);
    c.expect(std::abs(mean) <= 3.0 * se, "mean outside 3 standard errors of 0");
    c.expect(std::abs(var - target_var) <= 0.1 * target_var, "variance off by more than 10%");
    return c;
}

// Shared runner for criteria 5 and 6: the pinned synthetic experiment.
struct SynthExperiment {
    Dataset data;
    std::vector<TrainResult> results;
    SensitivityReport report;
};

SynthExperiment run_synth_experiment() {
    SynthExperiment e;
    e.data = standardize(synth_generate(default_synth_spec(7)));
    TrainConfig cfg;
    cfg.learning_rate = 0.05;
    cfg.epochs = 300;
    cfg.seed = 7;
    cfg.runs = 5;
    e.results = train(e.data, cfg);
    std::vector<GradientTrace> traces;
    for (const auto& r : e.results) traces.push_back(r.trace);
    e.report = compare(traces, e.data, 1e-9);
    return e;
}

// Criterion 5: the paper-anchored agreement property on the default
// synthetic dataset (seed 7, lr 0.05, 300 epochs, 5 runs).
Check criterion_agreement() {
    Check c;
    const auto e = run_synth_experiment();

    c.expect(e.report.n_agree >= 11,
             "agreement on " + std::to_string(e.report.n_agree) + " of 13 features (need >= 11)");

    const auto spec = default_synth_spec(7);
    int sign_matches = 0;
    for (std::size_t j = 0; j < e.report.features.size(); ++j) {
        if (spec.features[j].kind == FeatureKind::Noise) continue;
        const auto& f = e.report.features[j];
        if (!f.spearman_rho.has_value()) continue;
        const double rho = *f.spearman_rho;
        const int rho_sign = rho > 0 ? 1 : rho < 0 ? -1 : 0;
        if (rho_sign == f.predicted_sign) ++sign_matches;
    }
    c.expect(sign_matches >= 10, "sign match on " + std::to_string(sign_matches) +
                                     " of 12 non-noise features (need >= 10)");
    return c;
}

// Criterion 6: descent and first-derivative convergence on the same run.
Check criterion_convergence() {
    Check c;
    const auto e = run_synth_experiment();

    for (const auto& r : e.results) {
        c.expect(r.trace.loss.back() < 0.5 * r.trace.loss.front(),
                 "final loss is not below half the initial loss");
    }

    const auto& trace = e.results.front().trace;
    const std::size_t epochs = trace.loss.size();
    const std::size_t window = epochs / 10;
    for (std::size_t j = 0; j < e.data.features(); ++j) {
        const auto& rho = e.report.features[j].spearman_rho;
        if (!rho.has_value() || std::abs(*rho) < 0.3) continue;
        double head = 0.0, tail = 0.0;
        for (std::size_t k = 0; k < window; ++k) {
            head += std::abs(trace.d1(k, j));
            tail += std::abs(trace.d1(epochs - window + k, j));
        }
        c.expect(tail < head, "mean |d1| did not shrink for feature " + e.data.names[j]);
    }
    return c;
}

// Criterion 7: 41x41 surface slice on the synthetic dataset.
Check criterion_surface() {
    Check c;
    const auto data = standardize(synth_generate(default_synth_spec(7)));
    TrainConfig cfg;
    cfg.seed = 7;
    cfg.runs = 1;
    const auto fit = train(data, cfg).front();

    Rng dir_rng(derive_seed(7, 1));
    const auto slice = surface_slice(fit.params, data, 1.0, 41, dir_rng);

    const double independent = loss_value(fit.params, data);
    const double center = slice.losses(20, 20);
    c.expect(std::abs(center - independent) <= 1e-12 * std::max(1.0, std::abs(independent)),
             "center cell differs from an independent loss evaluation");
    for (double v : slice.losses.data()) {
        c.expect(v >= 0.0, "negative loss cell");
    }
    c.expect(slice.losses.rows() == 41 && slice.losses.cols() == 41, "grid is not 41x41");
    return c;
}

// Criterion 8: the MNIST mask pipeline on a 500-image IDX fixture.
Check criterion_mnist_mask() {
    Check c;
    testutil::TempDir tmp;
    const auto pair = fixture::write_idx_fixture(tmp.path, 500, 0, 7);

    cli::MnistMaskOptions opts;
    opts.images_path = pair.images.string();
    opts.labels_path = pair.labels.string();
    opts.digit = 0;
    opts.limit = 500;
    opts.epochs = 100;
    opts.seed = 7;
    opts.out_dir = (tmp.path / "out").string();
    c.expect(cli::run_mnist_mask(opts) == cli::kExitOk, "mnist-mask exited nonzero");

    const auto mask_text = read_bytes(tmp.path / "out" / "mask.csv");
    std::vector<int> mask;
    {
        std::istringstream in(mask_text);
        std::string line;
        std::getline(in, line);
        while (std::getline(in, line)) {
            const auto comma = line.find(',');
            const auto v = line.substr(comma + 1);
            c.expect(v == "0" || v == "1", "mask entry is not binary");
            mask.push_back(v == "1" ? 1 : 0);
        }
    }
    c.expect(mask.size() == 784, "mask length is not 784");

    const auto subset = load_mnist_idx(pair.images, pair.labels, opts.limit);
    for (int k = 0; k < 5 && c.ok; ++k) {
        const auto pgm = read_bytes(tmp.path / "out" / ("masked_" + std::to_string(k) + ".pgm"));
        std::istringstream in(pgm);
        std::string magic;
        int w = 0, h = 0, maxval = 0;
        in >> magic >> w >> h >> maxval;
        c.expect(magic == "P2" && w == 28 && h == 28 && maxval == 255, "PGM header mismatch");
        for (std::size_t p = 0; p < 784; ++p) {
            int v = -1;
            in >> v;
            const auto expected =
                static_cast<int>(std::lround(255.0 * subset.images(static_cast<std::size_t>(k), p) *
                                             mask[p]));
            c.expect(v == expected, "masked PGM pixel differs from the product contract");
            if (!c.ok) break;
        }
    }

    cli::MnistMaskOptions again = opts;
    again.out_dir = (tmp.path / "out2").string();
    c.expect(cli::run_mnist_mask(again) == cli::kExitOk, "re-run exited nonzero");
    c.expect(read_bytes(tmp.path / "out2" / "mask.csv") == mask_text,
             "mask is not reproduced bit-identically");
    return c;
}

// Criterion 9: cmd_analyze determinism at the artifact byte level.
Check criterion_determinism() {
    Check c;
    testutil::TempDir tmp;
    cli::AnalyzeOptions opts;
    opts.use_synth = true;
    opts.seed = 7;
    opts.epochs = 120;
    opts.runs = 3;

    opts.out_dir = (tmp.path / "a").string();
    c.expect(cli::run_analyze(opts) == cli::kExitOk, "first run exited nonzero");
    opts.out_dir = (tmp.path / "b").string();
    c.expect(cli::run_analyze(opts) == cli::kExitOk, "second run exited nonzero");

    for (const std::string name :
         {std::string("report.json"), std::string("dataset.csv"), std::string("trace_run0.csv"),
          std::string("trace_run1.csv"), std::string("trace_run2.csv")}) {
        c.expect(read_bytes(tmp.path / "a" / name) == read_bytes(tmp.path / "b" / name),
                 name + " differs between identical runs");
    }
    return c;
}

struct Criterion {
    int id;
    const char* name;
    double time_budget_s;  // 0 = no budget
    std::function<Check()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> list = {
        {1, "derivative correctness vs finite differences and closed form", 10.0,
         criterion_derivative_correctness},
        {2, "tanh jet exactness and derivative range", 0.0, criterion_tanh_exactness},
        {3, "Spearman correctness and tie handling", 0.0, criterion_spearman},
        {4, "Glorot initialization distribution", 0.0, criterion_glorot},
        {5, "trend/Spearman agreement on the synthetic dataset", 60.0, criterion_agreement},
        {6, "descent and first-derivative convergence", 0.0, criterion_convergence},
        {7, "loss-surface slice", 5.0, criterion_surface},
        {8, "MNIST gradient-mask pipeline", 300.0, criterion_mnist_mask},
        {9, "analyze determinism (byte-identical artifacts)", 0.0, criterion_determinism},
    };
    return list;
}

int run_one(const Criterion& cr) {
    const auto start = std::chrono::steady_clock::now();
    Check c;
    try {
        c = cr.run();
    } catch (const std::exception& e) {
        c.ok = false;
        c.detail = std::string("exception: ") + e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.ok && cr.time_budget_s > 0.0 && elapsed > cr.time_budget_s) {
        c.ok = false;
        c.detail = "exceeded the " + std::to_string(cr.time_budget_s) + " s budget";
    }

    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (c.ok ? "[PASS]" : "[FAIL]") << " criterion " << cr.id << ": " << cr.name << " ("
         << elapsed << " s)";
    if (!c.ok) line << " -- " << c.detail;
    std::cout << line.str() << '\n';
    return c.ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    int failures = 0;
    if (argc > 1) {
        const int id = std::atoi(argv[1]);
        for (const auto& cr : criteria()) {
            if (cr.id == id) return run_one(cr);
        }
        std::cerr << "unknown criterion: " << argv[1] << '\n';
        return 64;
    }
    for (const auto& cr : criteria()) failures += run_one(cr);
    return failures;
}
