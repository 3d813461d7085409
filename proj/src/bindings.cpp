#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <optional>
#include <sstream>

#include "reachset/defaults.hpp"
#include "reachset/ingest.hpp"
#include "reachset/models.hpp"
#include "reachset/optimizer.hpp"
#include "reachset/report.hpp"
#include "reachset/synthetic.hpp"
#include "reachset/validation.hpp"

namespace py = pybind11;
using namespace reachset;

namespace {

MotionModel model_from_json_str(const std::string& text) {
    return model_from_json(nlohmann::json::parse(text));
}

std::string model_to_json_str(const MotionModel& model) {
    return params_to_json(model.params()).dump();
}

SyntheticGenerator generator_from_name(const std::string& name) {
    if (name == "constant_speed") return SyntheticGenerator::ConstantSpeed;
    if (name == "capped_acceleration") return SyntheticGenerator::CappedAccel;
    if (name == "two_segment") return SyntheticGenerator::TwoSegment;
    throw std::invalid_argument("unknown generator: " + name);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Reachable-area motion models for football tracking data: validation scoring "
              "and parameter optimisation.";

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<>())
        .def(py::init<double, double>(), py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Vec2::x)
        .def_readwrite("y", &Vec2::y)
        .def("norm", &Vec2::norm)
        .def("__repr__", [](const Vec2& v) {
            std::ostringstream out;
            out << "Vec2(" << v.x << ", " << v.y << ")";
            return out.str();
        });

    py::class_<Polygon>(m, "Polygon")
        .def(py::init<>())
        .def(py::init<std::vector<Vec2>>(), py::arg("vertices"))
        .def_readwrite("vertices", &Polygon::vertices)
        .def("__len__", &Polygon::size);

    m.def("polygon_area", &polygon_area, py::arg("polygon"));
    m.def("point_in_polygon", &point_in_polygon, py::arg("point"), py::arg("polygon"));

    py::class_<KinematicState>(m, "KinematicState")
        .def(py::init<>())
        .def(py::init<Vec2, Vec2>(), py::arg("x0"), py::arg("v0"))
        .def_readwrite("x0", &KinematicState::x0)
        .def_readwrite("v0", &KinematicState::v0);

    py::class_<MotionModel>(m, "MotionModel")
        .def("family", [](const MotionModel& mm) { return std::string(family_name(mm.family())); })
        .def("boundary_point", &MotionModel::boundary_point, py::arg("state"), py::arg("dt"),
             py::arg("phi"))
        .def("reachable_polygon", &MotionModel::reachable_polygon, py::arg("state"),
             py::arg("dt"), py::arg("n_vertices") = defaults::kPolygonVertices)
        .def("to_json", &model_to_json_str)
        .def("__repr__", [](const MotionModel& mm) { return "MotionModel(" + model_to_json_str(mm) + ")"; });

    m.def("constant_speed", &make_constant_speed, py::arg("v_max"));
    m.def("constant_acceleration", &make_constant_accel, py::arg("a_max"));
    m.def("capped_acceleration", &make_capped_accel, py::arg("a_max"), py::arg("v_max"));
    m.def("two_segment", &make_two_segment, py::arg("t_inert"), py::arg("keep_initial"),
          py::arg("v_const"), py::arg("a_max") = std::nullopt, py::arg("v_max") = std::nullopt);
    m.def("model_from_json", &model_from_json_str, py::arg("text"));

    py::class_<Trail>(m, "Trail")
        .def(py::init<>())
        .def(py::init<Vec2, Vec2, Vec2, double>(), py::arg("x0"), py::arg("v0"), py::arg("xt"),
             py::arg("dt"))
        .def_readwrite("x0", &Trail::x0)
        .def_readwrite("v0", &Trail::v0)
        .def_readwrite("xt", &Trail::xt)
        .def_readwrite("dt", &Trail::dt);

    py::class_<TrailSet>(m, "TrailSet")
        .def(py::init<>())
        .def_readwrite("trails", &TrailSet::trails)
        .def_readwrite("source", &TrailSet::source)
        .def_readwrite("seed", &TrailSet::seed)
        .def("__len__", [](const TrailSet& s) { return s.trails.size(); });

    m.def("save_trail_set", &save_trail_set, py::arg("trail_set"), py::arg("csv_path"));
    m.def("load_trail_set", &load_trail_set, py::arg("csv_path"));

    py::class_<ValidationConfig>(m, "ValidationConfig")
        .def(py::init<>())
        .def(py::init<double, std::size_t>(), py::arg("hit_ratio_min"),
             py::arg("n_vertices") = defaults::kPolygonVertices)
        .def_readwrite("hit_ratio_min", &ValidationConfig::hit_ratio_min)
        .def_readwrite("n_vertices", &ValidationConfig::n_vertices);

    py::class_<ValidationResult>(m, "ValidationResult")
        .def_readonly("score", &ValidationResult::score)
        .def_readonly("hit_ratio", &ValidationResult::hit_ratio)
        .def_readonly("n_correct", &ValidationResult::n_correct)
        .def_readonly("n_incorrect", &ValidationResult::n_incorrect)
        .def_readonly("sum_correct_area", &ValidationResult::sum_correct_area)
        .def_readonly("terminated_early", &ValidationResult::terminated_early)
        .def("to_json", [](const ValidationResult& r) { return result_to_json(r).dump(); });

    m.def("validate", &validate, py::arg("model"), py::arg("trails"), py::arg("config"),
          py::arg("n_threads") = 1, py::call_guard<py::gil_scoped_release>());
    m.def("validate_reference", &validate_reference, py::arg("model"), py::arg("trails"),
          py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("hit_ratio", &hit_ratio, py::arg("n_correct"), py::arg("n_total"));
    m.def("precision", &precision, py::arg("n_correct"), py::arg("sum_correct_area"));
    m.def("check_threshold_condition", &check_threshold_condition, py::arg("hit_ratio_min"),
          py::arg("n_outlier_estimate"), py::arg("n_trails"));

    py::class_<SyntheticSpec>(m, "SyntheticSpec")
        .def(py::init([](const std::string& generator, double v_true, double a_true,
                         double t_inert_true, std::size_t n_trails, double outlier_fraction,
                         double outlier_offset, std::uint64_t seed, double dt,
                         bool boundary_biased) {
                 SyntheticSpec spec;
                 spec.generator = generator_from_name(generator);
                 spec.v_true = v_true;
                 spec.a_true = a_true;
                 spec.t_inert_true = t_inert_true;
                 spec.n_trails = n_trails;
                 spec.outlier_fraction = outlier_fraction;
                 spec.outlier_offset = outlier_offset;
                 spec.seed = seed;
                 spec.dt = dt;
                 spec.boundary_biased = boundary_biased;
                 return spec;
             }),
             py::arg("generator") = "constant_speed", py::arg("v_true") = 8.0,
             py::arg("a_true") = 0.0, py::arg("t_inert_true") = 0.0, py::arg("n_trails") = 1000,
             py::arg("outlier_fraction") = 0.0, py::arg("outlier_offset") = 0.0,
             py::arg("seed") = 0, py::arg("dt") = 1.0, py::arg("boundary_biased") = false);

    m.def("generate_trails", &generate_trails, py::arg("spec"));

    py::class_<ConstantSpeedOptimum>(m, "ConstantSpeedOptimum")
        .def_readonly("v_max", &ConstantSpeedOptimum::v_max)
        .def_readonly("score", &ConstantSpeedOptimum::score);

    m.def("analytic_optimum_constant_speed", &analytic_optimum_constant_speed, py::arg("trails"),
          py::arg("hit_ratio_min"), py::arg("n_vertices") = defaults::kPolygonVertices);

    py::class_<OptimizationResult>(m, "OptimizationResult")
        .def_property_readonly(
            "best_model",
            [](const OptimizationResult& r) { return MotionModel(r.best_params); })
        .def_readonly("best_score", &OptimizationResult::best_score)
        .def_readonly("evaluations", &OptimizationResult::evaluations)
        .def_property_readonly("trace", [](const OptimizationResult& r) {
            py::list entries;
            for (const auto& e : r.trace) {
                entries.append(py::make_tuple(params_to_json(e.params).dump(), e.score));
            }
            return entries;
        });

    m.def(
        "optimize_model_family",
        [](const std::string& family, const TrailSet& trails, const ValidationConfig& cfg,
           std::size_t budget_per_combo, std::uint64_t seed, unsigned n_threads) {
            const ModelFamily f = family_from_name(family);
            const double dt = trails.trails.empty() ? defaults::kTimeHorizonS
                                                    : trails.trails.front().dt;
            const ParamSpace space = default_param_space(f, dt);
            std::size_t combos = 1;
            for (const auto& [name, domain] : space.discrete) {
                combos *= domain.size();
            }
            OptimizerConfig ocfg;
            ocfg.seed = seed;
            return optimize_model_family(f, trails, cfg, space, budget_per_combo * combos, ocfg,
                                         n_threads);
        },
        py::arg("family"), py::arg("trails"), py::arg("config"),
        py::arg("budget_per_combo") = defaults::kOptimizerBudgetPerCombo, py::arg("seed") = 0,
        py::arg("n_threads") = 1, py::call_guard<py::gil_scoped_release>());

    m.attr("DEFAULT_TIME_HORIZON_S") = defaults::kTimeHorizonS;
    m.attr("DEFAULT_HIT_RATIO_MIN") = defaults::kHitRatioMin;
    m.attr("DEFAULT_TRAIL_SAMPLE_SIZE") = defaults::kTrailSampleSize;
    m.attr("DEFAULT_POLYGON_VERTICES") = defaults::kPolygonVertices;
}
