#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "gradsense/commands.hpp"

namespace {

void add_input_flags(CLI::App* cmd, bool& use_synth, std::string& input_csv,
                     std::string& target_column) {
    auto* synth = cmd->add_flag("--synth", use_synth, "use the built-in 13-feature synthetic dataset");
    auto* input = cmd->add_option("--input", input_csv, "input CSV path (header row required)");
    cmd->add_option("--target", target_column, "target column name (default: last column)");
    input->excludes(synth);
    synth->excludes(input);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"gradient-trajectory sensitivity analysis for tabular data"};
    app.require_subcommand(1);

    gradsense::cli::AnalyzeOptions analyze_opts;
    auto* analyze = app.add_subcommand(
        "analyze", "train, trace loss derivatives, and compare trends against Spearman");
    add_input_flags(analyze, analyze_opts.use_synth, analyze_opts.input_csv,
                    analyze_opts.target_column);
    analyze->add_option("--lr", analyze_opts.learning_rate, "learning rate")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--epochs", analyze_opts.epochs, "training epochs")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--runs", analyze_opts.runs, "re-initialized trainings")
        ->check(CLI::PositiveNumber);
    analyze->add_option("--seed", analyze_opts.seed, "master seed");
    analyze->add_option("--flat-epsilon", analyze_opts.flat_epsilon,
                        "trend slope magnitude treated as flat")
        ->check(CLI::NonNegativeNumber);
    analyze->add_flag("!--no-standardize", analyze_opts.standardize,
                      "skip z-score standardization");
    analyze->add_option("--out", analyze_opts.out_dir, "output directory");

    gradsense::cli::SurfaceOptions surface_opts;
    auto* surface =
        app.add_subcommand("surface", "export a 2-D loss-surface slice around a trained model");
    add_input_flags(surface, surface_opts.use_synth, surface_opts.input_csv,
                    surface_opts.target_column);
    surface->add_option("--half-width", surface_opts.half_width, "slice half-width in parameter space")
        ->check(CLI::PositiveNumber);
    surface->add_option("--grid", surface_opts.grid_points, "grid points per axis (odd)")
        ->check(CLI::Validator(
            [](std::string& s) {
                try {
                    const int v = std::stoi(s);
                    if (v < 3 || v % 2 == 0) return std::string("grid must be odd");
                } catch (...) {
                    return std::string("grid must be an integer");
                }
                return std::string();
            },
            "ODD"));
    surface->add_option("--seed", surface_opts.seed, "master seed");
    surface->add_option("--out", surface_opts.out_dir, "output directory");

    gradsense::cli::MnistMaskOptions mnist_opts;
    auto* mnist = app.add_subcommand(
        "mnist-mask", "train a one-vs-rest MNIST task and export the gradient mask");
    mnist->add_option("--images", mnist_opts.images_path, "IDX image file")->required();
    mnist->add_option("--labels", mnist_opts.labels_path, "IDX label file")->required();
    mnist->add_option("--digit", mnist_opts.digit, "positive-class digit")
        ->check(CLI::Range(0, 9));
    mnist->add_option("--limit", mnist_opts.limit, "number of images to use")
        ->check(CLI::PositiveNumber);
    mnist->add_option("--lr", mnist_opts.learning_rate, "learning rate")
        ->check(CLI::PositiveNumber);
    mnist->add_option("--epochs", mnist_opts.epochs, "training epochs")
        ->check(CLI::PositiveNumber);
    mnist->add_option("--seed", mnist_opts.seed, "master seed");
    mnist->add_option("--out", mnist_opts.out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return gradsense::cli::kExitUsage;
    }

    if (analyze->parsed()) return gradsense::cli::run_analyze(analyze_opts);
    if (surface->parsed()) return gradsense::cli::run_surface(surface_opts);
    return gradsense::cli::run_mnist_mask(mnist_opts);
}
