#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "reachset/defaults.hpp"
#include "reachset/ingest.hpp"
#include "reachset/models.hpp"
#include "reachset/optimizer.hpp"
#include "reachset/report.hpp"
#include "reachset/synthetic.hpp"
#include "reachset/validation.hpp"

namespace fs = std::filesystem;
using namespace reachset;

namespace {

enum class LogLevel { Quiet = 0, Info = 1, Debug = 2 };

LogLevel log_level() {
    const char* env = std::getenv("REACHSET_LOG");
    if (env == nullptr) {
        return LogLevel::Info;
    }
    const std::string v(env);
    if (v == "quiet" || v == "0") return LogLevel::Quiet;
    if (v == "debug" || v == "2") return LogLevel::Debug;
    return LogLevel::Info;
}

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::Info) {
        std::cerr << "[reachset] " << msg << '\n';
    }
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::Debug) {
        std::cerr << "[reachset] " << msg << '\n';
    }
}

nlohmann::json read_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open: " + path.string());
    }
    nlohmann::json j;
    in >> j;
    return j;
}

void write_text_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        fs::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write: " + path.string());
    }
    out << content;
}

unsigned resolve_threads(int requested) {
    if (requested > 0) {
        return static_cast<unsigned>(requested);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Shared options across the data-consuming subcommands.
struct CommonOpts {
    double dt = defaults::kTimeHorizonS;
    double hit_ratio_min = defaults::kHitRatioMin;
    std::size_t n_trails = defaults::kTrailSampleSize;
    std::size_t n_vertices = defaults::kPolygonVertices;
    std::uint64_t seed = 1;
    int threads = 0;  // 0 = all available cores
    std::string out_dir = ".";
};

void add_common_flags(CLI::App* cmd, CommonOpts& opts, bool with_sampling) {
    cmd->add_option("--hit-ratio-min", opts.hit_ratio_min,
                    "Minimum admissible hit ratio in (0,1]")
        ->capture_default_str();
    cmd->add_option("--n-vertices", opts.n_vertices, "Polygon vertices per reachable area")
        ->capture_default_str();
    cmd->add_option("--seed", opts.seed, "RNG seed")->capture_default_str();
    cmd->add_option("--threads", opts.threads, "Worker threads (0 = all cores)")
        ->capture_default_str();
    cmd->add_option("--out", opts.out_dir, "Output directory")->capture_default_str();
    if (with_sampling) {
        cmd->add_option("--dt", opts.dt, "Trail time horizon in seconds")->capture_default_str();
        cmd->add_option("--n-trails", opts.n_trails, "Number of trails to sample")
            ->capture_default_str();
    }
}

int cmd_trails(const std::vector<std::string>& inputs, const std::string& schema_path,
               const CommonOpts& opts) {
    const TrackingSchema schema = load_tracking_schema(schema_path);
    std::vector<PlayerTrack> tracks;
    for (const auto& input : inputs) {
        log_info("parsing " + input);
        auto file_tracks = parse_tracking_file(input, schema);
        const std::string prefix = fs::path(input).stem().string() + ":";
        for (auto& track : file_tracks) {
            track.player_id = prefix + track.player_id;
            tracks.push_back(derive_velocities(std::move(track)));
        }
    }
    log_debug("tracks: " + std::to_string(tracks.size()));
    TrailSet set = extract_trails(tracks, opts.dt, opts.n_trails, opts.seed);
    set.source = "tracking:" + std::to_string(inputs.size()) + " files";
    const fs::path csv = fs::path(opts.out_dir) / "trails.csv";
    fs::create_directories(opts.out_dir);
    save_trail_set(set, csv);
    log_info("wrote " + csv.string() + " (" + std::to_string(set.trails.size()) + " trails)");
    return 0;
}

int cmd_validate(const std::string& trails_path, const std::string& model_path,
                 std::size_t n_outlier_estimate, const CommonOpts& opts) {
    const TrailSet set = load_trail_set(trails_path);
    const MotionModel model = model_from_json(read_json_file(model_path));
    if (!check_threshold_condition(opts.hit_ratio_min, n_outlier_estimate, set.trails.size())) {
        std::cerr << "[reachset] warning: hit-ratio-min " << opts.hit_ratio_min
                  << " does not tolerate " << n_outlier_estimate << " outliers among "
                  << set.trails.size() << " trails; outliers will depress the score\n";
    }
    const ValidationConfig cfg{opts.hit_ratio_min, opts.n_vertices};
    const ValidationResult result = validate(model, set, cfg, resolve_threads(opts.threads));
    const std::string payload = result_to_json(result).dump(2) + "\n";
    std::cout << payload;
    if (opts.out_dir != "-") {
        write_text_file(fs::path(opts.out_dir) / "validation.json", payload);
    }
    return 0;
}

int cmd_optimize(const std::string& trails_path, const std::vector<std::string>& families,
                 std::size_t budget, const std::string& space_path, const CommonOpts& opts) {
    if (families.empty()) {
        throw CLI::ValidationError("--family", "at least one model family is required");
    }
    const TrailSet set = load_trail_set(trails_path);
    const ValidationConfig cfg{opts.hit_ratio_min, opts.n_vertices};
    const double dt = set.trails.empty() ? defaults::kTimeHorizonS : set.trails.front().dt;
    const unsigned threads = resolve_threads(opts.threads);

    nlohmann::json space_config = nlohmann::json::object();
    std::uint64_t seed = opts.seed;
    if (!space_path.empty()) {
        space_config = read_json_file(space_path);
        budget = space_config.value("budget", budget);
        seed = space_config.value("seed", seed);
    }

    fs::create_directories(opts.out_dir);
    std::map<ModelFamily, OptimizationResult> results;
    nlohmann::ordered_json report;
    for (const auto& name : families) {
        const ModelFamily family = family_from_name(name);
        const ParamSpace space = space_from_json(space_config, family, dt);
        OptimizerConfig ocfg;
        ocfg.seed = seed;
        std::size_t combos = 1;
        for (const auto& [dname, domain] : space.discrete) {
            combos *= domain.size();
        }
        log_info("optimizing " + name + " (" + std::to_string(combos) + " discrete combos, " +
                 std::to_string(budget * combos) + " evaluations)");
        OptimizationResult result =
            optimize_model_family(family, set, cfg, space, budget * combos, ocfg, threads);
        report[name] = optimization_result_to_json(result);

        const fs::path trace_path = fs::path(opts.out_dir) / ("trace_" + name + ".csv");
        std::ofstream trace_out(trace_path);
        write_trace_csv(result, trace_out);
        log_debug("trace written to " + trace_path.string());
        results.emplace(family, std::move(result));
    }

    const auto [winner, winner_result] = select_best_model(results);
    report["winner"] = std::string(family_name(winner));
    report["winner_result"] = optimization_result_to_json(winner_result);

    const std::string payload = report.dump(2) + "\n";
    std::cout << payload;
    write_text_file(fs::path(opts.out_dir) / "optimization.json", payload);
    return 0;
}

int cmd_synth(const std::string& generator, double v_true, double a_true, double t_inert_true,
              double outlier_fraction, double outlier_offset, const CommonOpts& opts) {
    SyntheticSpec spec;
    if (generator == "constant_speed") {
        spec.generator = SyntheticGenerator::ConstantSpeed;
    } else if (generator == "capped_acceleration") {
        spec.generator = SyntheticGenerator::CappedAccel;
    } else if (generator == "two_segment") {
        spec.generator = SyntheticGenerator::TwoSegment;
    } else {
        throw CLI::ValidationError("--generator", "unknown generator: " + generator);
    }
    spec.v_true = v_true;
    spec.a_true = a_true;
    spec.t_inert_true = t_inert_true;
    spec.n_trails = opts.n_trails;
    spec.outlier_fraction = outlier_fraction;
    spec.outlier_offset = outlier_offset;
    spec.seed = opts.seed;
    spec.dt = opts.dt;

    TrailSet set = generate_trails(spec);
    set.source = "synthetic:" + generator;
    fs::create_directories(opts.out_dir);
    const fs::path csv = fs::path(opts.out_dir) / "trails.csv";
    save_trail_set(set, csv);
    log_info("wrote " + csv.string() + " (" + std::to_string(set.trails.size()) + " trails)");
    return 0;
}

int cmd_plot(const std::vector<std::string>& model_paths,
             const std::vector<std::string>& result_paths, const CommonOpts& opts) {
    if (model_paths.empty() && result_paths.empty()) {
        throw CLI::ValidationError("plot", "need --models and/or --results inputs");
    }
    fs::create_directories(opts.out_dir);

    if (!model_paths.empty()) {
        std::vector<std::pair<std::string, MotionModel>> models;
        for (const auto& path : model_paths) {
            const nlohmann::json j = read_json_file(path);
            MotionModel model = model_from_json(j);
            models.emplace_back(std::string(family_name(model.family())), std::move(model));
        }
        OverlayConfig overlay;
        overlay.dt = opts.dt;
        overlay.n_vertices = opts.n_vertices;
        const fs::path out = fs::path(opts.out_dir) / "boundaries.svg";
        write_text_file(out, boundary_overlay_svg(models, overlay));
        log_info("wrote " + out.string());
    }

    if (!result_paths.empty()) {
        std::vector<ScoreBar> bars;
        for (const auto& path : result_paths) {
            const nlohmann::json j = read_json_file(path);
            if (!j.contains("score_inverse_m2") && !j.contains("best_score_inverse_m2")) {
                throw std::runtime_error(
                    path + ": missing field 'score_inverse_m2' or 'best_score_inverse_m2'");
            }
            const auto& field =
                j.contains("score_inverse_m2") ? j.at("score_inverse_m2")
                                               : j.at("best_score_inverse_m2");
            if (!field.is_number()) {
                throw std::runtime_error(path +
                                         ": field 'score_inverse_m2' must be a finite number "
                                         "(score 0 has no inverse)");
            }
            bars.push_back(ScoreBar{fs::path(path).stem().string(), field.get<double>()});
        }
        const fs::path out = fs::path(opts.out_dir) / "scores.svg";
        write_text_file(out, score_chart_svg(bars));
        log_info("wrote " + out.string());
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Validation and optimisation of reachable-area motion models for football "
                 "tracking data"};
    app.require_subcommand(1);

    CommonOpts opts;

    // trails: tracking CSV -> sampled trail set
    auto* trails = app.add_subcommand("trails", "Sample trails from tracking data");
    std::vector<std::string> inputs;
    std::string schema_path;
    trails->add_option("--input", inputs, "Tracking CSV file(s)")->required();
    trails->add_option("--schema", schema_path, "Tracking schema JSON")->required();
    add_common_flags(trails, opts, true);

    // validate: trail set + model config -> score JSON
    auto* validate_cmd = app.add_subcommand("validate", "Score one model over a trail set");
    std::string trails_path;
    std::string model_path;
    std::size_t n_outlier_estimate = 0;
    validate_cmd->add_option("--trails", trails_path, "Trail CSV path")->required();
    validate_cmd->add_option("--model", model_path, "Model config JSON")->required();
    validate_cmd
        ->add_option("--n-outliers-estimate", n_outlier_estimate,
                     "Expected outlier count, used for the threshold sanity warning")
        ->capture_default_str();
    add_common_flags(validate_cmd, opts, false);

    // optimize: trail set + families -> best params
    auto* optimize_cmd = app.add_subcommand("optimize", "Optimise model parameters");
    std::vector<std::string> families;
    std::size_t budget = defaults::kOptimizerBudgetPerCombo;
    std::string space_path;
    optimize_cmd->add_option("--trails", trails_path, "Trail CSV path")->required();
    optimize_cmd->add_option("--family", families,
                             "Model families (constant_speed, constant_acceleration, "
                             "capped_acceleration, two_segment)");
    optimize_cmd->add_option("--budget", budget, "Evaluation budget per discrete combo")
        ->capture_default_str();
    optimize_cmd->add_option("--space", space_path,
                             "Optimisation config JSON (bounds, discrete domains, budget, seed)");
    add_common_flags(optimize_cmd, opts, false);

    // synth: ground-truth generator -> trail set
    auto* synth = app.add_subcommand("synth", "Generate synthetic benchmark trails");
    std::string generator = "constant_speed";
    double v_true = 8.0;
    double a_true = 19.0;
    double t_inert_true = 0.2;
    double outlier_fraction = 0.0;
    double outlier_offset = 5.0;
    synth->add_option("--generator", generator,
                      "constant_speed | capped_acceleration | two_segment")
        ->capture_default_str();
    synth->add_option("--v-true", v_true, "True speed cap / final speed (m/s)")
        ->capture_default_str();
    synth->add_option("--a-true", a_true, "True acceleration cap (m/s^2)")
        ->capture_default_str();
    synth->add_option("--t-inert-true", t_inert_true, "True inertial duration (s)")
        ->capture_default_str();
    synth->add_option("--outlier-fraction", outlier_fraction, "Fraction of injected outliers")
        ->capture_default_str();
    synth->add_option("--outlier-offset", outlier_offset,
                      "Outlier displacement beyond the boundary (m)")
        ->capture_default_str();
    add_common_flags(synth, opts, true);

    // plot: model configs / result JSONs -> SVG figures
    auto* plot = app.add_subcommand("plot", "Render boundary overlays and score charts");
    std::vector<std::string> plot_models;
    std::vector<std::string> plot_results;
    plot->add_option("--models", plot_models, "Model config JSONs for the boundary overlay");
    plot->add_option("--results", plot_results, "Result JSONs for the score chart");
    add_common_flags(plot, opts, true);

    CLI11_PARSE(app, argc, argv);

    try {
        if (trails->parsed()) {
            return cmd_trails(inputs, schema_path, opts);
        }
        if (validate_cmd->parsed()) {
            return cmd_validate(trails_path, model_path, n_outlier_estimate, opts);
        }
        if (optimize_cmd->parsed()) {
            return cmd_optimize(trails_path, families, budget, space_path, opts);
        }
        if (synth->parsed()) {
            return cmd_synth(generator, v_true, a_true, t_inert_true, outlier_fraction,
                             outlier_offset, opts);
        }
        if (plot->parsed()) {
            return cmd_plot(plot_models, plot_results, opts);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
