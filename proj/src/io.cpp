#include "gradsense/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gradsense/errors.hpp"
#include "gradsense/num_format.hpp"

namespace gradsense {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
    out.flush();
    if (!out) throw DataError("cannot write file: " + path.string());
}

double parse_double(const std::string& cell, const std::filesystem::path& path, std::size_t line) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec != std::errc{} || ptr != cell.data() + cell.size()) {
        throw DataError(path.string() + ": line " + std::to_string(line) + ": bad number '" +
                        cell + "'");
    }
    return value;
}

std::vector<std::string> split_commas(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        if (pos == std::string::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

}  // namespace

void write_trace_csv(const GradientTrace& trace, std::span<const std::string> feature_names,
                     const std::filesystem::path& path) {
    if (feature_names.size() != trace.d1.cols()) {
        throw std::invalid_argument("write_trace_csv: name count does not match trace width");
    }
    auto out = open_out(path);
    out << "epoch,loss";
    for (const auto& name : feature_names) {
        out << ",d1_" << name << ",d2_" << name << ",d3_" << name;
    }
    out << '\n';
    for (std::size_t e = 0; e < trace.loss.size(); ++e) {
        out << e << ',' << format_double(trace.loss[e]);
        for (std::size_t j = 0; j < trace.d1.cols(); ++j) {
            out << ',' << format_double(trace.d1(e, j)) << ',' << format_double(trace.d2(e, j))
                << ',' << format_double(trace.d3(e, j));
        }
        out << '\n';
    }
    finish(out, path);
}

TraceFile read_trace_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());

    std::string line;
    if (!std::getline(in, line)) throw DataError("empty trace file: " + path.string());
    const auto header = split_commas(line);
    if (header.size() < 5 || header[0] != "epoch" || header[1] != "loss" ||
        (header.size() - 2) % 3 != 0) {
        throw DataError(path.string() + ": not a trace CSV header");
    }

    TraceFile file;
    const std::size_t n = (header.size() - 2) / 3;
    for (std::size_t j = 0; j < n; ++j) {
        const auto& h = header[2 + 3 * j];
        if (h.rfind("d1_", 0) != 0) throw DataError(path.string() + ": not a trace CSV header");
        file.feature_names.push_back(h.substr(3));
    }

    std::vector<std::vector<double>> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto cells = split_commas(line);
        if (cells.size() != header.size()) {
            throw DataError(path.string() + ": line " + std::to_string(lineno) +
                            ": wrong cell count");
        }
        std::vector<double> row(cells.size() - 1);
        for (std::size_t c = 1; c < cells.size(); ++c) {
            row[c - 1] = parse_double(cells[c], path, lineno);
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError(path.string() + ": no data rows");

    auto& trace = file.trace;
    trace.run_id = -1;
    trace.loss.resize(rows.size());
    trace.d1 = Matrix(rows.size(), n);
    trace.d2 = Matrix(rows.size(), n);
    trace.d3 = Matrix(rows.size(), n);
    for (std::size_t e = 0; e < rows.size(); ++e) {
        trace.loss[e] = rows[e][0];
        for (std::size_t j = 0; j < n; ++j) {
            trace.d1(e, j) = rows[e][1 + 3 * j];
            trace.d2(e, j) = rows[e][2 + 3 * j];
            trace.d3(e, j) = rows[e][3 + 3 * j];
        }
    }
    return file;
}

void write_surface_csv(const SurfaceSlice& slice, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "alpha,beta,loss\n";
    for (std::size_t ia = 0; ia < slice.alphas.size(); ++ia) {
        for (std::size_t ib = 0; ib < slice.betas.size(); ++ib) {
            out << format_double(slice.alphas[ia]) << ',' << format_double(slice.betas[ib]) << ','
                << format_double(slice.losses(ia, ib)) << '\n';
        }
    }
    finish(out, path);
}

void write_mask_csv(std::span<const int> mask, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << "pixel,mask\n";
    for (std::size_t i = 0; i < mask.size(); ++i) {
        out << i << ',' << mask[i] << '\n';
    }
    finish(out, path);
}

void write_pgm(std::span<const double> pixels, int width, int height,
               const std::filesystem::path& path) {
    if (width < 1 || height < 1 ||
        pixels.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw std::invalid_argument("write_pgm: pixel count does not match dimensions");
    }
    auto out = open_out(path);
    out << "P2\n" << width << ' ' << height << "\n255\n";
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            const double p = pixels[static_cast<std::size_t>(r) * width + c];
            const long v = std::lround(255.0 * p);
            out << v;
            out << (c + 1 == width ? '\n' : ' ');
        }
    }
    finish(out, path);
}

std::string trend_label_name(TrendLabel label) {
    switch (label) {
        case TrendLabel::Increasing: return "increasing";
        case TrendLabel::Decreasing: return "decreasing";
        case TrendLabel::Flat: return "flat";
    }
    return "flat";
}

nlohmann::ordered_json report_to_json(const SensitivityReport& report) {
    nlohmann::ordered_json j;
    j["summary"] = {
        {"n_features", report.n_features}, {"n_agree", report.n_agree},
        {"n_disagree", report.n_disagree}, {"n_undefined", report.n_undefined},
        {"runs", report.runs},             {"epochs", report.epochs},
    };
    auto& features = j["features"] = nlohmann::ordered_json::array();
    for (const auto& f : report.features) {
        nlohmann::ordered_json e;
        e["name"] = f.name;
        if (f.spearman_rho.has_value()) {
            e["spearman_rho"] = *f.spearman_rho;
        } else {
            e["spearman_rho"] = "undefined";
        }
        auto& trends = e["trend_per_run"] = nlohmann::ordered_json::array();
        for (const auto label : f.trend_per_run) trends.push_back(trend_label_name(label));
        e["majority_trend"] = trend_label_name(f.majority_trend);
        e["predicted_sign"] = f.predicted_sign;
        if (f.agree.has_value()) {
            e["agree"] = *f.agree;
        } else {
            e["agree"] = "n/a";
        }
        features.push_back(std::move(e));
    }
    return j;
}

std::string now_utc_iso8601() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::ordered_json manifest_to_json(const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["command"] = manifest.command;
    j["config"] = manifest.config;
    j["seed"] = manifest.seed;
    j["run_seeds"] = manifest.run_seeds;
    j["created_utc"] = manifest.created_utc;
    j["results"] = manifest.results;
    j["artifacts"] = manifest.artifacts;
    return j;
}

void write_json(const nlohmann::ordered_json& j, const std::filesystem::path& path) {
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    finish(out, path);
}

}  // namespace gradsense
