#include "gradsense/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "gradsense/errors.hpp"
#include "gradsense/num_format.hpp"
#include "gradsense/rng.hpp"

namespace gradsense {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) {
            if (start < text.size()) lines.push_back(text.substr(start));
            break;
        }
        std::string line = text.substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        start = end + 1;
    }
    return lines;
}

// One CSV record; quoted fields may contain commas and doubled quotes.
std::vector<std::string> split_csv(const std::string& line, std::size_t lineno) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"' && cell.empty()) {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else {
            cell += c;
        }
    }
    if (quoted) {
        throw DataError("line " + std::to_string(lineno) + ": unterminated quoted field");
    }
    cells.push_back(std::move(cell));
    return cells;
}

std::string quote_csv(const std::string& field) {
    if (field.find_first_of(",\"\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

double parse_cell(const std::string& cell, std::size_t row, const std::string& column) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
        throw DataError("row " + std::to_string(row) + ", column '" + column +
                        "': non-numeric cell '" + cell + "'");
    }
    return value;
}

void check_unique_names(const std::vector<std::string>& names) {
    std::unordered_set<std::string> seen;
    for (const auto& n : names) {
        if (!seen.insert(n).second) throw DataError("duplicate column name: " + n);
    }
}

std::uint32_t read_u32_be(const std::string& bytes, std::size_t offset,
                          const std::filesystem::path& path) {
    if (offset + 4 > bytes.size()) throw DataError("truncated IDX file: " + path.string());
    const auto b = [&](std::size_t k) {
        return static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[offset + k]));
    };
    return (b(0) << 24) | (b(1) << 16) | (b(2) << 8) | b(3);
}

}  // namespace

SynthSpec default_synth_spec(std::uint64_t seed) {
    SynthSpec spec;
    spec.n_samples = 200;
    spec.noise_sd = 0.1;
    spec.seed = seed;
    spec.features = {
        {"lin_pos_1", FeatureKind::PosLinear, 1.4},
        {"lin_pos_2", FeatureKind::PosLinear, 1.0},
        {"lin_pos_3", FeatureKind::PosLinear, 0.6},
        {"cub_pos_1", FeatureKind::PosCubic, 1.5},
        {"cub_pos_2", FeatureKind::PosCubic, 1.1},
        {"cub_pos_3", FeatureKind::PosCubic, 0.7},
        {"lin_neg_1", FeatureKind::NegLinear, 1.4},
        {"lin_neg_2", FeatureKind::NegLinear, 1.0},
        {"lin_neg_3", FeatureKind::NegLinear, 0.6},
        {"cub_neg_1", FeatureKind::NegCubic, 1.5},
        {"cub_neg_2", FeatureKind::NegCubic, 1.1},
        {"cub_neg_3", FeatureKind::NegCubic, 0.7},
        {"noise_1", FeatureKind::Noise, 0.0},
    };
    return spec;
}

Dataset synth_generate(const SynthSpec& spec) {
    if (spec.n_samples < 1) throw std::invalid_argument("synth_generate: n_samples must be >= 1");
    if (spec.noise_sd < 0.0) throw std::invalid_argument("synth_generate: noise_sd must be >= 0");
    if (spec.features.empty()) throw std::invalid_argument("synth_generate: no features");
    const bool any_signal = std::any_of(spec.features.begin(), spec.features.end(),
                                        [](const FeatureSpec& f) { return f.kind != FeatureKind::Noise; });
    if (!any_signal) throw std::invalid_argument("synth_generate: need at least one non-noise feature");

    const auto n = spec.features.size();
    const auto rows = static_cast<std::size_t>(spec.n_samples);

    Dataset data;
    data.x = Matrix(rows, n);
    data.target.assign(rows, 0.0);
    data.target_name = "target";
    check_unique_names([&] {
        std::vector<std::string> names;
        for (const auto& f : spec.features) names.push_back(f.name);
        return names;
    }());

    Rng rng(spec.seed);
    // Feature columns first (in order), then the target noise.
    for (std::size_t j = 0; j < n; ++j) {
        data.names.push_back(spec.features[j].name);
        for (std::size_t i = 0; i < rows; ++i) data.x(i, j) = rng.uniform(-1.0, 1.0);
    }
    for (std::size_t j = 0; j < n; ++j) {
        const auto& f = spec.features[j];
        if (f.kind == FeatureKind::Noise) continue;
        const bool cubic = f.kind == FeatureKind::PosCubic || f.kind == FeatureKind::NegCubic;
        const bool negative = f.kind == FeatureKind::NegLinear || f.kind == FeatureKind::NegCubic;
        const double c = negative ? -f.coefficient : f.coefficient;
        for (std::size_t i = 0; i < rows; ++i) {
            const double v = data.x(i, j);
            data.target[i] += c * (cubic ? v * v * v : v);
        }
    }
    for (std::size_t i = 0; i < rows; ++i) data.target[i] += rng.normal(0.0, spec.noise_sd);
    return data;
}

Dataset load_csv(const std::filesystem::path& path, const std::string& target_column) {
    const auto lines = split_lines(read_file(path));
    if (lines.empty()) throw DataError("empty file: " + path.string());

    const auto header = split_csv(lines[0], 1);
    if (header.size() < 2) {
        throw DataError("need at least two columns, got " + std::to_string(header.size()));
    }
    check_unique_names(header);

    std::size_t target_idx = header.size() - 1;
    if (!target_column.empty()) {
        const auto it = std::find(header.begin(), header.end(), target_column);
        if (it == header.end()) throw DataError("unknown target column: " + target_column);
        target_idx = static_cast<std::size_t>(it - header.begin());
    }

    std::vector<std::vector<double>> rows;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        if (lines[li].empty()) continue;
        const auto cells = split_csv(lines[li], li + 1);
        if (cells.size() != header.size()) {
            throw DataError("row " + std::to_string(li) + ": expected " +
                            std::to_string(header.size()) + " cells, got " +
                            std::to_string(cells.size()));
        }
        std::vector<double> row(cells.size());
        for (std::size_t c = 0; c < cells.size(); ++c) row[c] = parse_cell(cells[c], li, header[c]);
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw DataError("no data rows in " + path.string());

    Dataset data;
    data.target_name = header[target_idx];
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != target_idx) data.names.push_back(header[c]);
    }
    data.x = Matrix(rows.size(), header.size() - 1);
    data.target.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::size_t jx = 0;
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c == target_idx) {
                data.target[i] = rows[i][c];
            } else {
                data.x(i, jx++) = rows[i][c];
            }
        }
    }
    return data;
}

void write_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path.string());
    for (std::size_t j = 0; j < data.names.size(); ++j) {
        out << quote_csv(data.names[j]) << ',';
    }
    out << quote_csv(data.target_name) << '\n';
    for (std::size_t i = 0; i < data.samples(); ++i) {
        for (std::size_t j = 0; j < data.features(); ++j) {
            out << format_double(data.x(i, j)) << ',';
        }
        out << format_double(data.target[i]) << '\n';
    }
    if (!out) throw DataError("cannot write file: " + path.string());
}

Dataset standardize(const Dataset& data) {
    if (data.samples() < 2) throw DataError("standardize: need at least two samples");

    const auto stats = [&](const std::vector<double>& col,
                           const std::string& name) -> std::pair<double, double> {
        const auto [mn, mx] = std::minmax_element(col.begin(), col.end());
        if (*mn == *mx) throw DataError("constant column: " + name);
        double mean = 0.0;
        for (double v : col) mean += v;
        mean /= static_cast<double>(col.size());
        double ss = 0.0;
        for (double v : col) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(col.size() - 1));
        return {mean, sd};
    };

    Dataset out = data;
    for (std::size_t j = 0; j < data.features(); ++j) {
        const auto col = data.feature_column(j);
        const auto [mean, sd] = stats(col, data.names[j]);
        for (std::size_t i = 0; i < data.samples(); ++i) out.x(i, j) = (col[i] - mean) / sd;
    }
    const auto [tmean, tsd] = stats(data.target, data.target_name);
    for (std::size_t i = 0; i < data.samples(); ++i) {
        out.target[i] = (data.target[i] - tmean) / tsd;
    }
    return out;
}

MnistSubset load_mnist_idx(const std::filesystem::path& images_path,
                           const std::filesystem::path& labels_path, int limit) {
    if (limit < 1) throw std::invalid_argument("load_mnist_idx: limit must be >= 1");

    const auto images = read_file(images_path);
    const auto labels = read_file(labels_path);

    const auto img_magic = read_u32_be(images, 0, images_path);
    if (img_magic != 0x00000803u) {
        throw DataError("unexpected IDX magic in " + images_path.string() + ": expected 0x00000803");
    }
    const auto lbl_magic = read_u32_be(labels, 0, labels_path);
    if (lbl_magic != 0x00000801u) {
        throw DataError("unexpected IDX magic in " + labels_path.string() + ": expected 0x00000801");
    }

    const auto img_count = read_u32_be(images, 4, images_path);
    const auto rows = read_u32_be(images, 8, images_path);
    const auto cols = read_u32_be(images, 12, images_path);
    if (rows != 28 || cols != 28) {
        throw DataError("unsupported image size " + std::to_string(rows) + "x" +
                        std::to_string(cols) + " (want 28x28)");
    }
    const auto lbl_count = read_u32_be(labels, 4, labels_path);
    if (img_count != lbl_count) {
        throw DataError("count mismatch between files: " + std::to_string(img_count) +
                        " images vs " + std::to_string(lbl_count) + " labels");
    }

    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(limit), img_count);
    const std::size_t pixels = 28u * 28u;
    if (images.size() < 16 + take * pixels) {
        throw DataError("truncated IDX file: " + images_path.string());
    }
    if (labels.size() < 8 + take) {
        throw DataError("truncated IDX file: " + labels_path.string());
    }

    MnistSubset subset;
    subset.images = Matrix(take, pixels);
    subset.labels.resize(take);
    for (std::size_t i = 0; i < take; ++i) {
        for (std::size_t p = 0; p < pixels; ++p) {
            const auto byte = static_cast<unsigned char>(images[16 + i * pixels + p]);
            subset.images(i, p) = static_cast<double>(byte) / 255.0;
        }
        subset.labels[i] = static_cast<unsigned char>(labels[8 + i]);
    }
    return subset;
}

Dataset binary_task(const MnistSubset& subset, int digit) {
    if (digit < 0 || digit > 9) throw std::invalid_argument("binary_task: digit must be 0..9");

    Dataset data;
    data.x = subset.images;
    data.target_name = "label";
    data.target.resize(subset.labels.size());
    for (std::size_t i = 0; i < subset.labels.size(); ++i) {
        data.target[i] = subset.labels[i] == digit ? 1.0 : -1.0;
    }
    data.names.reserve(subset.images.cols());
    for (std::size_t p = 0; p < subset.images.cols(); ++p) {
        data.names.push_back("px" + std::to_string(p));
    }
    return data;
}

}  // namespace gradsense
