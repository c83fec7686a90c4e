#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <cstdint>
#include <span>
#include <sstream>

#include "gradsense/dataset.hpp"
#include "gradsense/errors.hpp"
#include "gradsense/jet.hpp"
#include "gradsense/model.hpp"
#include "gradsense/num_format.hpp"
#include "gradsense/rng.hpp"
#include "gradsense/sensitivity.hpp"
#include "gradsense/stats.hpp"

namespace py = pybind11;
using namespace gradsense;

namespace {

std::vector<std::vector<double>> matrix_rows(const Matrix& m) {
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) rows[r][c] = m(r, c);
    }
    return rows;
}

void bind_jet(py::module_& m) {
    py::class_<Jet3>(m, "Jet3", "value plus first three derivatives w.r.t. one seed variable")
        .def(py::init<>())
        .def(py::init<double, double, double, double>(), py::arg("v"), py::arg("d1"),
             py::arg("d2"), py::arg("d3"))
        .def_readwrite("v", &Jet3::v)
        .def_readwrite("d1", &Jet3::d1)
        .def_readwrite("d2", &Jet3::d2)
        .def_readwrite("d3", &Jet3::d3)
        .def("__add__", [](const Jet3& a, const Jet3& b) { return a + b; })
        .def("__sub__", [](const Jet3& a, const Jet3& b) { return a - b; })
        .def("__neg__", [](const Jet3& a) { return -a; })
        .def("__mul__", [](const Jet3& a, const Jet3& b) { return a * b; })
        .def("__mul__", [](const Jet3& a, double s) { return a * s; })
        .def("__rmul__", [](const Jet3& a, double s) { return s * a; })
        .def("__eq__", [](const Jet3& a, const Jet3& b) { return a == b; })
        .def("__repr__", [](const Jet3& a) {
            std::ostringstream s;
            s << "Jet3(v=" << format_double(a.v) << ", d1=" << format_double(a.d1)
              << ", d2=" << format_double(a.d2) << ", d3=" << format_double(a.d3) << ")";
            return s.str();
        });

    m.def("jet_seed", &seed, py::arg("x0"), "the differentiation variable: (x0, 1, 0, 0)");
    m.def("jet_const", &constant, py::arg("c"), "a seed-independent value: (c, 0, 0, 0)");
    m.def("jet_add", [](const Jet3& a, const Jet3& b) { return a + b; });
    m.def("jet_scale", &scale, py::arg("a"), py::arg("s"));
    m.def("jet_mul", [](const Jet3& a, const Jet3& b) { return a * b; });
    m.def("jet_square", &square, py::arg("a"));
    m.def("jet_tanh", [](const Jet3& a) { return tanh(a); }, py::arg("a"));
}

void bind_data(py::module_& m) {
    py::class_<Matrix>(m, "Matrix")
        .def_property_readonly("rows", &Matrix::rows)
        .def_property_readonly("cols", &Matrix::cols)
        .def("column", &Matrix::column, py::arg("c"))
        .def("to_rows", &matrix_rows)
        .def("__getitem__", [](const Matrix& m, std::pair<std::size_t, std::size_t> rc) {
            if (rc.first >= m.rows() || rc.second >= m.cols()) {
                throw py::index_error("matrix index out of range");
            }
            return m(rc.first, rc.second);
        });

    py::class_<Dataset>(m, "Dataset")
        .def_readonly("x", &Dataset::x)
        .def_readonly("target", &Dataset::target)
        .def_readonly("names", &Dataset::names)
        .def_readonly("target_name", &Dataset::target_name)
        .def_property_readonly("samples", &Dataset::samples)
        .def_property_readonly("features", &Dataset::features)
        .def("feature_column", &Dataset::feature_column, py::arg("j"));

    py::enum_<FeatureKind>(m, "FeatureKind")
        .value("pos_linear", FeatureKind::PosLinear)
        .value("neg_linear", FeatureKind::NegLinear)
        .value("pos_cubic", FeatureKind::PosCubic)
        .value("neg_cubic", FeatureKind::NegCubic)
        .value("noise", FeatureKind::Noise);

    py::class_<FeatureSpec>(m, "FeatureSpec")
        .def(py::init([](std::string name, FeatureKind kind, double coefficient) {
                 return FeatureSpec{std::move(name), kind, coefficient};
             }),
             py::arg("name"), py::arg("kind"), py::arg("coefficient") = 0.0)
        .def_readwrite("name", &FeatureSpec::name)
        .def_readwrite("kind", &FeatureSpec::kind)
        .def_readwrite("coefficient", &FeatureSpec::coefficient);

    py::class_<SynthSpec>(m, "SynthSpec")
        .def(py::init<>())
        .def_readwrite("n_samples", &SynthSpec::n_samples)
        .def_readwrite("features", &SynthSpec::features)
        .def_readwrite("noise_sd", &SynthSpec::noise_sd)
        .def_readwrite("seed", &SynthSpec::seed);

    m.def("default_synth_spec", &default_synth_spec, py::arg("seed"));
    m.def("synth_generate", &synth_generate, py::arg("spec"));
    m.def("load_csv", &load_csv, py::arg("path"), py::arg("target_column") = std::string());
    m.def("write_csv", &write_csv, py::arg("data"), py::arg("path"));
    m.def("standardize", &standardize, py::arg("data"));

    py::class_<MnistSubset>(m, "MnistSubset")
        .def_readonly("images", &MnistSubset::images)
        .def_readonly("labels", &MnistSubset::labels);
    m.def("load_mnist_idx", &load_mnist_idx, py::arg("images_path"), py::arg("labels_path"),
          py::arg("limit"));
    m.def("binary_task", &binary_task, py::arg("subset"), py::arg("digit"));
}

void bind_model(py::module_& m) {
    py::class_<Rng>(m, "Rng", "deterministic random source (seeded)")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("uniform", py::overload_cast<>(&Rng::uniform))
        .def("uniform", py::overload_cast<double, double>(&Rng::uniform), py::arg("lo"),
             py::arg("hi"))
        .def("normal", py::overload_cast<>(&Rng::normal))
        .def("normal", py::overload_cast<double, double>(&Rng::normal), py::arg("mean"),
             py::arg("sd"));
    m.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("stream"));

    py::class_<ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def(py::init([](std::vector<double> weights, double bias) {
                 return ModelParams{std::move(weights), bias};
             }),
             py::arg("weights"), py::arg("bias") = 0.0)
        .def_readwrite("weights", &ModelParams::weights)
        .def_readwrite("bias", &ModelParams::bias);

    py::class_<TrainConfig>(m, "TrainConfig")
        .def(py::init<>())
        .def_readwrite("learning_rate", &TrainConfig::learning_rate)
        .def_readwrite("epochs", &TrainConfig::epochs)
        .def_readwrite("seed", &TrainConfig::seed)
        .def_readwrite("runs", &TrainConfig::runs);

    py::class_<GradientTrace>(m, "GradientTrace")
        .def_readonly("run_id", &GradientTrace::run_id)
        .def_readonly("seed_used", &GradientTrace::seed_used)
        .def_readonly("loss", &GradientTrace::loss)
        .def_readonly("d1", &GradientTrace::d1)
        .def_readonly("d2", &GradientTrace::d2)
        .def_readonly("d3", &GradientTrace::d3);

    py::class_<TrainResult>(m, "TrainResult")
        .def_readonly("params", &TrainResult::params)
        .def_readonly("trace", &TrainResult::trace);

    m.def("glorot_init", &glorot_init, py::arg("n_in"), py::arg("n_out"), py::arg("rng"));
    m.def("loss_value", &loss_value, py::arg("params"), py::arg("data"));
    m.def("loss_jet", &loss_jet, py::arg("params"), py::arg("data"), py::arg("feature"));
    m.def("bias_gradient", &bias_gradient, py::arg("params"), py::arg("data"));
    m.def("train", &train, py::arg("data"), py::arg("cfg"));
}

void bind_stats_and_sensitivity(py::module_& m) {
    m.def("average_ranks",
          [](const std::vector<double>& v) { return average_ranks(std::span(v)); },
          py::arg("values"));
    m.def("spearman",
          [](const std::vector<double>& x, const std::vector<double>& y) {
              return spearman(std::span(x), std::span(y));
          },
          py::arg("x"), py::arg("y"));

    py::enum_<TrendLabel>(m, "TrendLabel")
        .value("increasing", TrendLabel::Increasing)
        .value("decreasing", TrendLabel::Decreasing)
        .value("flat", TrendLabel::Flat);

    m.def("classify_trend",
          [](const std::vector<double>& series, double flat_epsilon) {
              return classify_trend(std::span(series), flat_epsilon);
          },
          py::arg("series"), py::arg("flat_epsilon"));

    py::class_<FeatureSensitivity>(m, "FeatureSensitivity")
        .def_readonly("name", &FeatureSensitivity::name)
        .def_readonly("spearman_rho", &FeatureSensitivity::spearman_rho)
        .def_readonly("trend_per_run", &FeatureSensitivity::trend_per_run)
        .def_readonly("majority_trend", &FeatureSensitivity::majority_trend)
        .def_readonly("predicted_sign", &FeatureSensitivity::predicted_sign)
        .def_readonly("agree", &FeatureSensitivity::agree);

    py::class_<SensitivityReport>(m, "SensitivityReport")
        .def_readonly("features", &SensitivityReport::features)
        .def_readonly("n_features", &SensitivityReport::n_features)
        .def_readonly("n_agree", &SensitivityReport::n_agree)
        .def_readonly("n_disagree", &SensitivityReport::n_disagree)
        .def_readonly("n_undefined", &SensitivityReport::n_undefined)
        .def_readonly("runs", &SensitivityReport::runs)
        .def_readonly("epochs", &SensitivityReport::epochs);

    m.def("compare",
          [](const std::vector<GradientTrace>& traces, const Dataset& data, double flat_epsilon) {
              return compare(std::span(traces), data, flat_epsilon);
          },
          py::arg("traces"), py::arg("data"), py::arg("flat_epsilon") = 1e-9);

    py::class_<SurfaceSlice>(m, "SurfaceSlice")
        .def_readonly("alphas", &SurfaceSlice::alphas)
        .def_readonly("betas", &SurfaceSlice::betas)
        .def_readonly("losses", &SurfaceSlice::losses)
        .def_readonly("directions", &SurfaceSlice::directions);

    m.def("surface_slice",
          [](const ModelParams& params, const Dataset& data, double half_width, int grid_points,
             Rng& rng) { return surface_slice(params, data, half_width, grid_points, rng); },
          py::arg("params"), py::arg("data"), py::arg("half_width"), py::arg("grid_points"),
          py::arg("rng"));
    m.def("surface_slice_along",
          [](const ModelParams& params, const Dataset& data, double half_width, int grid_points,
             const std::vector<double>& dir1, const std::vector<double>& dir2) {
              return surface_slice(params, data, half_width, grid_points, std::span(dir1),
                                   std::span(dir2));
          },
          py::arg("params"), py::arg("data"), py::arg("half_width"), py::arg("grid_points"),
          py::arg("dir1"), py::arg("dir2"));

    m.def("build_mask", &build_mask, py::arg("trace"), py::arg("flat_epsilon") = 1e-9);
    m.def("apply_mask",
          [](const std::vector<double>& image, const std::vector<int>& mask) {
              return apply_mask(std::span(image), std::span(mask));
          },
          py::arg("image"), py::arg("mask"));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "single tanh unit + third-order forward-mode jets: per-feature loss-derivative "
              "traces, Spearman comparison, loss-surface slices, gradient masks";

    py::register_exception<DataError>(m, "DataError", PyExc_RuntimeError);
    py::register_exception<DivergenceError>(m, "DivergenceError", PyExc_RuntimeError);
    py::register_exception<ConstantInputError>(m, "ConstantInputError", PyExc_ValueError);

    bind_jet(m);
    bind_data(m);
    bind_model(m);
    bind_stats_and_sensitivity(m);
}
