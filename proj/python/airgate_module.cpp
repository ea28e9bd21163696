#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "airgate/corners.hpp"
#include "airgate/dtw.hpp"
#include "airgate/error.hpp"
#include "airgate/evaluation.hpp"
#include "airgate/metrics.hpp"
#include "airgate/parallel.hpp"
#include "airgate/sample_io.hpp"
#include "airgate/synth.hpp"
#include "airgate/verifier.hpp"

namespace py = pybind11;
using namespace airgate;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

ProjectedSequence to_sequence(const Array& a) {
    if (a.ndim() == 1) {
        return ProjectedSequence(a.shape(0), 1, std::vector<double>(a.data(), a.data() + a.size()));
    }
    if (a.ndim() != 2) throw py::value_error("expected a 1-D or 2-D array");
    return ProjectedSequence(a.shape(0), a.shape(1), std::vector<double>(a.data(), a.data() + a.size()));
}

DtwParams dtw_params(std::optional<std::size_t> band, bool normalize) {
    DtwParams p;
    p.band = band;
    p.length_normalization = normalize;
    return p;
}

Hyperparams hyper(std::size_t T, double C, std::optional<double> gamma, std::optional<std::size_t> band) {
    Hyperparams h;
    h.T = T;
    h.C = C;
    h.gamma = gamma;
    h.dtw.band = band;
    return h;
}

GestureType gesture(const std::string& name) {
    const auto g = parse_gesture(name);
    if (!g) throw UsageError("unknown gesture '" + name + "'");
    return *g;
}

Array to_array(const FeatureSequence& f) {
    Array out({f.rows(), f.cols()});
    std::copy(f.values().begin(), f.values().end(), out.mutable_data());
    return out;
}

py::dict to_dict(const nlohmann::ordered_json& j) {
    return py::module_::import("json").attr("loads")(j.dump()).cast<py::dict>();
}

}  // namespace

PYBIND11_MODULE(_airgate, m) {
    m.doc() = "Mid-air gesture authentication with DTW features and per-user SVMs";

    auto data_error = py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);
    (void)data_error;

    m.def("set_thread_count", &set_thread_count, py::arg("threads"));
    m.def("feature_names", [] {
        const auto& n = feature_names();
        return std::vector<std::string>(n.begin(), n.end());
    });
    m.def("gestures", [] {
        std::vector<std::string> out;
        for (GestureType g : kAllGestures) out.emplace_back(to_string(g));
        return out;
    });

    m.def(
        "dtw_distance",
        [](const Array& a, const Array& b, std::optional<std::size_t> band, bool normalize) {
            const ProjectedSequence x = to_sequence(a), y = to_sequence(b);
            if (x.cols() != y.cols()) throw py::value_error("sequences differ in column count");
            py::gil_scoped_release release;
            return dtw_distance(x, y, dtw_params(band, normalize));
        },
        py::arg("a"), py::arg("b"), py::arg("band") = py::none(), py::arg("normalize") = true,
        "DTW distance between two (rows x columns) arrays with Euclidean frame cost.");
    m.def(
        "dtw_distance_1d",
        [](const Array& a, const Array& b, std::optional<std::size_t> band, bool normalize) {
            if (a.ndim() != 1 || b.ndim() != 1) throw py::value_error("expected 1-D arrays");
            return dtw_distance_1d({a.data(), static_cast<std::size_t>(a.size())},
                                   {b.data(), static_cast<std::size_t>(b.size())}, dtw_params(band, normalize));
        },
        py::arg("a"), py::arg("b"), py::arg("band") = py::none(), py::arg("normalize") = true);

    m.def(
        "compute_eer",
        [](std::vector<double> genuine, std::vector<double> impostor) {
            const EerResult r = compute_eer({std::move(genuine), std::move(impostor)});
            return py::make_tuple(r.eer, r.threshold);
        },
        py::arg("genuine"), py::arg("impostor"), "Returns (eer, threshold). Higher scores mean more genuine.");

    m.def(
        "detect_corners",
        [](const Array& points) {
            if (points.ndim() != 2 || points.shape(1) != 2) throw py::value_error("expected an (n, 2) array");
            std::vector<Point2> path(points.shape(0));
            for (std::size_t i = 0; i < path.size(); ++i) path[i] = {points.at(i, 0), points.at(i, 1)};
            return detect_corners(path).locations;
        },
        py::arg("points"), "Indices of the corners of a planar polyline.");

    py::class_<RawSample>(m, "Sample")
        .def_readonly("sample_id", &RawSample::sample_id)
        .def_readonly("user_id", &RawSample::user_id)
        .def_property_readonly("gesture", [](const RawSample& s) { return std::string(to_string(s.gesture)); })
        .def_readonly("batch", &RawSample::batch)
        .def_property_readonly("frame_count", [](const RawSample& s) { return s.frames.size(); })
        .def("features", [](const RawSample& s) { return to_array(extract_features(s)); },
             "The (frames x 100) frame feature matrix.")
        .def("corners", [](const RawSample& s) { return detect_corners(s).count; })
        .def("__repr__", [](const RawSample& s) {
            return "<Sample " + s.sample_id + " (" + std::to_string(s.frames.size()) + " frames)>";
        });

    m.def(
        "generate_corpus",
        [](const std::string& config_json, std::uint64_t seed) {
            const SynthConfig c = SynthConfig::from_json(nlohmann::json::parse(config_json));
            py::gil_scoped_release release;
            return generate_corpus(c, seed);
        },
        py::arg("config_json"), py::arg("seed"));
    m.def("read_samples", &read_samples, py::arg("path"));
    m.def(
        "write_samples", [](const std::filesystem::path& p, const std::vector<RawSample>& s) { write_samples(p, s); },
        py::arg("path"), py::arg("samples"));
    m.def(
        "content_hash", [](const std::vector<RawSample>& s) { return content_hash(s); }, py::arg("samples"));

    py::class_<AuthSystem>(m, "AuthSystem")
        .def_static(
            "train",
            [](const std::vector<RawSample>& samples, std::size_t T, double C, std::optional<double> gamma,
               std::optional<std::size_t> band) {
                const Hyperparams h = hyper(T, C, gamma, band);
                py::gil_scoped_release release;
                return train_all(samples, h);
            },
            py::arg("samples"), py::arg("T") = 4, py::arg("C") = 10.0, py::arg("gamma") = py::none(),
            py::arg("band") = py::none())
        .def_static("load", &load_model, py::arg("path"), py::arg("corpus") = std::filesystem::path{})
        .def("save", [](const AuthSystem& s, const std::filesystem::path& p) { save_model(s, p); }, py::arg("path"))
        .def_property_readonly("users", [](const AuthSystem& s) { return s.bank().users; })
        .def_property_readonly("gesture", [](const AuthSystem& s) { return std::string(to_string(s.bank().gesture)); })
        .def_property_readonly("template_hash", [](const AuthSystem& s) { return s.bank().template_hash; })
        .def_property_readonly("kept_features", [](const AuthSystem& s) { return s.selection().kept; })
        .def(
            "verify",
            [](const AuthSystem& s, const RawSample& sample, const std::string& user, double theta) {
                const VerifyResult r = s.verify(sample, user, theta);
                return py::make_tuple(r.score, r.accept);
            },
            py::arg("sample"), py::arg("user"), py::arg("theta") = 0.0, "Returns (score, accepted).")
        .def("to_dict", [](const AuthSystem& s) { return to_dict(model_to_json(s)); });

    m.def(
        "kfold_eer",
        [](const std::vector<RawSample>& samples, const std::string& g, std::size_t T, std::size_t folds,
           bool pooled) {
            Hyperparams h;
            h.T = T;
            KFoldOptions o;
            o.folds = folds;
            o.pooled = pooled;
            const GestureType gt = gesture(g);
            KFoldResult r;
            {
                py::gil_scoped_release release;
                r = kfold_eer(samples, gt, h, o);
            }
            return to_dict(to_json(r));
        },
        py::arg("samples"), py::arg("gesture"), py::arg("T") = 4, py::arg("folds") = 5, py::arg("pooled") = false);
}
