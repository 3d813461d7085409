#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "reachset/models.hpp"
#include "reachset/validation.hpp"

namespace reachset {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

/// Search domain of one model family: box bounds for the continuous
/// parameters plus finite value sets for the discrete ones
/// (keep_initial and caps_set for the two-segment family).
struct ParamSpace {
    std::vector<std::pair<std::string, Interval>> continuous;
    std::vector<std::pair<std::string, std::vector<bool>>> discrete;
};

/// Default bounds bracketing plausible football kinematics;
/// t_inert stays below dt so every candidate model is applicable.
ParamSpace default_param_space(ModelFamily family, double dt);

/// Optimisation config file: per-family sections overriding the default
/// space, e.g. {"constant_speed": {"continuous": {"v_max": [5, 15]}},
/// "two_segment": {"discrete": {"keep_initial": [true]}}}. Top-level
/// "budget" and "seed" entries override the corresponding CLI flags.
ParamSpace space_from_json(const nlohmann::json& config, ModelFamily family, double dt);

struct TraceEntry {
    ModelParams params;
    double score = 0.0;
};

struct OptimizationResult {
    ModelParams best_params;
    double best_score = 0.0;
    std::size_t evaluations = 0;
    std::vector<TraceEntry> trace;
};

struct OptimizerConfig {
    enum class Backend { Bayesian, RandomSearch };

    std::size_t budget = 60;       // objective evaluations per continuous run
    std::size_t init_points = 10;  // quasi-random initial design size
    std::size_t candidate_pool = 512;
    std::uint64_t seed = 0;
    Backend backend = Backend::Bayesian;
};

/// Maximises the validation score over the continuous parameters of one
/// family, with the discrete parameters fixed. Gaussian-process surrogate
/// (Matern-5/2) with expected improvement; deterministic for a fixed seed.
/// Throws if budget < init_points or a needed bound is missing.
OptimizationResult optimize_continuous(ModelFamily family,
                                       const std::map<std::string, bool>& discrete_assignment,
                                       const TrailSet& trails, const ValidationConfig& cfg,
                                       const std::vector<std::pair<std::string, Interval>>& bounds,
                                       const OptimizerConfig& opt, unsigned n_threads = 1);

/// Runs optimize_continuous once per combination of discrete parameter
/// values, splitting total_budget evenly, and returns the overall best.
OptimizationResult optimize_model_family(ModelFamily family, const TrailSet& trails,
                                         const ValidationConfig& cfg, const ParamSpace& space,
                                         std::size_t total_budget, const OptimizerConfig& opt,
                                         unsigned n_threads = 1);

/// Picks the family with the highest best_score. Ties go to the family
/// with fewer free parameters, then to the lexicographically smaller name.
std::pair<ModelFamily, OptimizationResult> select_best_model(
    const std::map<ModelFamily, OptimizationResult>& results);

/// Continuous parameter names a combo actually optimises, in canonical
/// order; the discrete assignment decides which are live for two_segment.
std::vector<std::string> continuous_param_names(ModelFamily family,
                                                const std::map<std::string, bool>& assignment);

/// Builds family params from named continuous values plus the discrete
/// assignment; the inverse of the optimiser's internal vector layout.
ModelParams params_from_values(ModelFamily family,
                               const std::map<std::string, bool>& assignment,
                               const std::map<std::string, double>& values);

nlohmann::ordered_json optimization_result_to_json(const OptimizationResult& result);
void write_trace_csv(const OptimizationResult& result, std::ostream& out);

}  // namespace reachset
