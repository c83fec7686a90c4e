#include "gradsense/commands.hpp"

#include <algorithm>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <span>
#include <utility>

#include "gradsense/dataset.hpp"
#include "gradsense/errors.hpp"
#include "gradsense/io.hpp"
#include "gradsense/model.hpp"
#include "gradsense/num_format.hpp"
#include "gradsense/sensitivity.hpp"

namespace fs = std::filesystem;

namespace gradsense::cli {

namespace {

template <class Fn>
int guarded(Fn&& fn) {
    try {
        return std::forward<Fn>(fn)();
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDivergence;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

Dataset load_input(bool use_synth, const std::string& input_csv, const std::string& target_column,
                   std::uint64_t seed) {
    if (use_synth) return synth_generate(default_synth_spec(seed));
    if (input_csv.empty()) throw std::invalid_argument("either --input or --synth is required");
    return load_csv(input_csv, target_column);
}

fs::path prepare_out_dir(const std::string& out_dir) {
    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DataError("cannot create output directory: " + dir.string());
    return dir;
}

}  // namespace

int run_analyze(const AnalyzeOptions& opts) {
    return guarded([&] {
        const Dataset raw = load_input(opts.use_synth, opts.input_csv, opts.target_column, opts.seed);
        const Dataset data = opts.standardize ? standardize(raw) : raw;

        TrainConfig cfg;
        cfg.learning_rate = opts.learning_rate;
        cfg.epochs = opts.epochs;
        cfg.seed = opts.seed;
        cfg.runs = opts.runs;
        const auto results = train(data, cfg);

        const auto out = prepare_out_dir(opts.out_dir);
        RunManifest manifest;
        manifest.command = "analyze";
        manifest.seed = opts.seed;
        manifest.created_utc = now_utc_iso8601();
        manifest.config = {
            {"input", opts.use_synth ? "synth" : opts.input_csv},
            {"target", opts.target_column.empty() ? "(last column)" : opts.target_column},
            {"lr", opts.learning_rate},
            {"epochs", opts.epochs},
            {"runs", opts.runs},
            {"seed", opts.seed},
            {"flat_epsilon", opts.flat_epsilon},
            {"standardize", opts.standardize},
            {"std_convention", "sample standard deviation (divisor N-1)"},
            {"out", opts.out_dir},
        };

        write_csv(data, out / "dataset.csv");
        manifest.artifacts.push_back("dataset.csv");

        std::vector<GradientTrace> traces;
        for (const auto& r : results) {
            manifest.run_seeds.push_back(r.trace.seed_used);
            const std::string name = "trace_run" + std::to_string(r.trace.run_id) + ".csv";
            write_trace_csv(r.trace, data.names, out / name);
            manifest.artifacts.push_back(name);
            traces.push_back(r.trace);
        }

        const auto report = compare(traces, data, opts.flat_epsilon);
        write_json(report_to_json(report), out / "report.json");
        manifest.artifacts.push_back("report.json");

        nlohmann::ordered_json final_losses = nlohmann::ordered_json::array();
        for (const auto& r : results) final_losses.push_back(r.trace.loss.back());
        manifest.results = {
            {"n_agree", report.n_agree},
            {"n_disagree", report.n_disagree},
            {"n_undefined", report.n_undefined},
            {"final_losses", final_losses},
        };
        manifest.artifacts.push_back("manifest.json");
        write_json(manifest_to_json(manifest), out / "manifest.json");

        std::size_t name_width = 7;
        for (const auto& f : report.features) name_width = std::max(name_width, f.name.size());
        std::cout << std::left << std::setw(static_cast<int>(name_width) + 2) << "feature"
                  << std::setw(24) << "rho" << std::setw(12) << "majority" << "agree\n";
        for (const auto& f : report.features) {
            const std::string rho =
                f.spearman_rho.has_value() ? format_double(*f.spearman_rho) : "undefined";
            const std::string agree =
                f.agree.has_value() ? (*f.agree ? "yes" : "no") : "n/a";
            std::cout << std::left << std::setw(static_cast<int>(name_width) + 2) << f.name
                      << std::setw(24) << rho << std::setw(12)
                      << trend_label_name(f.majority_trend) << agree << '\n';
        }
        std::cout << "agreement: " << report.n_agree << " of " << report.n_features
                  << " features (" << report.n_undefined << " undefined)\n";
        for (const auto& r : results) {
            std::cout << "run " << r.trace.run_id << ": loss " << format_double(r.trace.loss.front())
                      << " -> " << format_double(r.trace.loss.back()) << '\n';
        }
        std::cout << "artifacts written to " << out.string() << '\n';
        return kExitOk;
    });
}

int run_surface(const SurfaceOptions& opts) {
    return guarded([&] {
        if (opts.grid_points % 2 == 0 || opts.grid_points < 3) {
            throw std::invalid_argument("grid must be odd and at least 3");
        }
        const Dataset raw = load_input(opts.use_synth, opts.input_csv, opts.target_column, opts.seed);
        const Dataset data = standardize(raw);

        TrainConfig cfg;
        cfg.seed = opts.seed;
        cfg.runs = 1;
        const auto results = train(data, cfg);
        const auto& fit = results.front();

        // Direction stream comes after the run streams (run 0 uses stream 0).
        Rng dir_rng(derive_seed(opts.seed, 1));
        const auto slice =
            surface_slice(fit.params, data, opts.half_width, opts.grid_points, dir_rng);

        const auto out = prepare_out_dir(opts.out_dir);
        write_surface_csv(slice, out / "surface.csv");

        RunManifest manifest;
        manifest.command = "surface";
        manifest.seed = opts.seed;
        manifest.run_seeds.push_back(fit.trace.seed_used);
        manifest.created_utc = now_utc_iso8601();
        manifest.config = {
            {"input", opts.use_synth ? "synth" : opts.input_csv},
            {"target", opts.target_column.empty() ? "(last column)" : opts.target_column},
            {"half_width", opts.half_width},
            {"grid", opts.grid_points},
            {"seed", opts.seed},
            {"lr", cfg.learning_rate},
            {"epochs", cfg.epochs},
            {"standardize", true},
            {"out", opts.out_dir},
        };

        const std::size_t mid = (static_cast<std::size_t>(opts.grid_points) - 1) / 2;
        const double center = slice.losses(mid, mid);
        double lo = center, hi = center;
        for (double v : slice.losses.data()) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        manifest.results = {{"center_loss", center}, {"min_loss", lo}, {"max_loss", hi}};
        manifest.artifacts = {"surface.csv", "manifest.json"};
        write_json(manifest_to_json(manifest), out / "manifest.json");

        std::cout << "grid: " << opts.grid_points << " x " << opts.grid_points << '\n'
                  << "center loss: " << format_double(center) << '\n'
                  << "min loss: " << format_double(lo) << '\n'
                  << "max loss: " << format_double(hi) << '\n'
                  << "artifacts written to " << out.string() << '\n';
        return kExitOk;
    });
}

int run_mnist_mask(const MnistMaskOptions& opts) {
    return guarded([&] {
        if (opts.digit < 0 || opts.digit > 9) throw std::invalid_argument("digit must be 0..9");
        if (opts.limit < 1) throw std::invalid_argument("limit must be >= 1");
        if (opts.images_path.empty() || opts.labels_path.empty()) {
            throw std::invalid_argument("--images and --labels are required");
        }

        const auto subset = load_mnist_idx(opts.images_path, opts.labels_path, opts.limit);
        const Dataset data = binary_task(subset, opts.digit);

        TrainConfig cfg;
        cfg.learning_rate = opts.learning_rate;
        cfg.epochs = opts.epochs;
        cfg.seed = opts.seed;
        cfg.runs = 1;
        const auto results = train(data, cfg);
        const auto& fit = results.front();

        constexpr double kFlatEpsilon = 1e-9;
        const auto mask = build_mask(fit.trace, kFlatEpsilon);

        const auto out = prepare_out_dir(opts.out_dir);
        write_mask_csv(mask, out / "mask.csv");

        RunManifest manifest;
        manifest.command = "mnist-mask";
        manifest.seed = opts.seed;
        manifest.run_seeds.push_back(fit.trace.seed_used);
        manifest.created_utc = now_utc_iso8601();
        manifest.config = {
            {"images", opts.images_path}, {"labels", opts.labels_path},
            {"digit", opts.digit},        {"limit", opts.limit},
            {"lr", opts.learning_rate},   {"epochs", opts.epochs},
            {"seed", opts.seed},          {"flat_epsilon", kFlatEpsilon},
            {"standardize", false},       {"out", opts.out_dir},
        };
        manifest.artifacts.push_back("mask.csv");

        const std::size_t n_show = std::min<std::size_t>(5, data.samples());
        for (std::size_t k = 0; k < n_show; ++k) {
            const auto image = [&] {
                std::vector<double> row(data.features());
                for (std::size_t p = 0; p < data.features(); ++p) row[p] = data.x(k, p);
                return row;
            }();
            const auto masked = apply_mask(image, mask);
            const std::string name = "masked_" + std::to_string(k) + ".pgm";
            write_pgm(masked, 28, 28, out / name);
            manifest.artifacts.push_back(name);
        }

        int ones = 0;
        for (int m : mask) ones += m;
        manifest.results = {
            {"mask_ones", ones},
            {"mask_size", static_cast<int>(mask.size())},
            {"final_loss", fit.trace.loss.back()},
        };
        manifest.artifacts.push_back("manifest.json");
        write_json(manifest_to_json(manifest), out / "manifest.json");

        std::cout << "mask: " << ones << " of " << mask.size() << " pixels kept\n"
                  << "final loss: " << format_double(fit.trace.loss.back()) << '\n'
                  << "artifacts written to " << out.string() << '\n';
        return kExitOk;
    });
}

}  // namespace gradsense::cli
