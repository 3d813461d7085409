#include "reachset/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include "reachset/numio.hpp"
#include "reachset/rng.hpp"

namespace reachset {

ParamSpace default_param_space(ModelFamily family, double dt) {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("default_param_space: dt must be positive");
    }
    ParamSpace space;
    switch (family) {
        case ModelFamily::ConstantSpeed:
            space.continuous = {{"v_max", {4.0, 15.0}}};
            break;
        case ModelFamily::ConstantAccel:
            space.continuous = {{"a_max", {1.0, 30.0}}};
            break;
        case ModelFamily::CappedAccel:
            space.continuous = {{"a_max", {1.0, 30.0}}, {"v_max", {4.0, 15.0}}};
            break;
        case ModelFamily::TwoSegment:
            space.continuous = {{"t_inert", {0.01, 0.9 * dt}},
                                {"v_const", {2.0, 12.0}},
                                {"a_max", {1.0, 30.0}},
                                {"v_max", {4.0, 15.0}}};
            space.discrete = {{"keep_initial", {true, false}}, {"caps_set", {true, false}}};
            break;
    }
    return space;
}

ParamSpace space_from_json(const nlohmann::json& config, ModelFamily family, double dt) {
    ParamSpace space = default_param_space(family, dt);
    const std::string key(family_name(family));
    if (!config.contains(key)) {
        return space;
    }
    const nlohmann::json& section = config.at(key);
    if (section.contains("continuous")) {
        for (const auto& [name, bounds] : section.at("continuous").items()) {
            if (!bounds.is_array() || bounds.size() != 2) {
                throw std::invalid_argument("optimisation config: continuous bound '" + name +
                                            "' must be [lo, hi]");
            }
            const Interval interval{bounds.at(0).get<double>(), bounds.at(1).get<double>()};
            auto it = std::find_if(space.continuous.begin(), space.continuous.end(),
                                   [&](const auto& b) { return b.first == name; });
            if (it == space.continuous.end()) {
                space.continuous.emplace_back(name, interval);
            } else {
                it->second = interval;
            }
        }
    }
    if (section.contains("discrete")) {
        space.discrete.clear();
        for (const auto& [name, values] : section.at("discrete").items()) {
            if (!values.is_array() || values.empty()) {
                throw std::invalid_argument("optimisation config: discrete domain '" + name +
                                            "' must be a non-empty array of booleans");
            }
            std::vector<bool> domain;
            for (const auto& v : values) {
                domain.push_back(v.get<bool>());
            }
            space.discrete.emplace_back(name, std::move(domain));
        }
    }
    return space;
}

std::vector<std::string> continuous_param_names(ModelFamily family,
                                                const std::map<std::string, bool>& assignment) {
    auto flag = [&](const char* name, bool fallback) {
        auto it = assignment.find(name);
        return it != assignment.end() ? it->second : fallback;
    };
    switch (family) {
        case ModelFamily::ConstantSpeed:
            return {"v_max"};
        case ModelFamily::ConstantAccel:
            return {"a_max"};
        case ModelFamily::CappedAccel:
            return {"a_max", "v_max"};
        case ModelFamily::TwoSegment: {
            const bool keep_initial = flag("keep_initial", true);
            const bool caps_set = flag("caps_set", false);
            std::vector<std::string> names = {"t_inert"};
            if (!keep_initial || !caps_set) {
                names.push_back("v_const");
            }
            if (caps_set) {
                names.push_back("a_max");
                names.push_back("v_max");
            }
            return names;
        }
    }
    throw std::logic_error("continuous_param_names: unknown family");
}

ModelParams params_from_values(ModelFamily family,
                               const std::map<std::string, bool>& assignment,
                               const std::map<std::string, double>& values) {
    auto value = [&](const char* name) {
        auto it = values.find(name);
        if (it == values.end()) {
            throw std::invalid_argument(std::string("params_from_values: missing value '") +
                                        name + "'");
        }
        return it->second;
    };
    auto flag = [&](const char* name, bool fallback) {
        auto it = assignment.find(name);
        return it != assignment.end() ? it->second : fallback;
    };
    switch (family) {
        case ModelFamily::ConstantSpeed:
            return ConstantSpeedParams{value("v_max")};
        case ModelFamily::ConstantAccel:
            return ConstantAccelParams{value("a_max")};
        case ModelFamily::CappedAccel:
            return CappedAccelParams{value("a_max"), value("v_max")};
        case ModelFamily::TwoSegment: {
            TwoSegmentParams p;
            p.t_inert = value("t_inert");
            p.keep_initial = flag("keep_initial", true);
            const bool caps_set = flag("caps_set", false);
            if (caps_set) {
                p.a_max = value("a_max");
                p.v_max = value("v_max");
            }
            if (!p.keep_initial || !caps_set) {
                p.v_const = value("v_const");
            } else {
                p.v_const = 1.0;  // unused placeholder, kept positive
            }
            return p;
        }
    }
    throw std::logic_error("params_from_values: unknown family");
}

namespace {

// ---------------------------------------------------------------------
// Deterministic quasi-random and Gaussian draws.

constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

double halton(std::size_t index, int base) {
    double f = 1.0;
    double r = 0.0;
    std::size_t i = index;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

double wrap_unit(double x) { return x - std::floor(x); }

std::vector<double> halton_point(std::size_t index, std::size_t dim,
                                 const std::vector<double>& rotation) {
    std::vector<double> x(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        x[d] = wrap_unit(halton(index + 1, kPrimes[d % 8]) + rotation[d]);
    }
    return x;
}

double normal_draw(SplitMix64& rng) {
    // Box-Muller; both uniforms drawn unconditionally to keep the stream
    // position deterministic.
    const double u1 = rng.next_double();
    const double u2 = rng.next_double();
    const double r = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

// ---------------------------------------------------------------------
// Dense Gaussian process with a Matern-5/2 kernel on [0,1]^d inputs.

double matern52(double dist, double lengthscale) {
    const double a = std::sqrt(5.0) * dist / lengthscale;
    return (1.0 + a + a * a / 3.0) * std::exp(-a);
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return std::sqrt(s);
}

// Lower-triangular Cholesky in place; returns false if not positive
// definite at this nugget.
bool cholesky(std::vector<double>& m, std::size_t n) {
    for (std::size_t j = 0; j < n; ++j) {
        double diag = m[j * n + j];
        for (std::size_t k = 0; k < j; ++k) {
            diag -= m[j * n + k] * m[j * n + k];
        }
        if (!(diag > 0.0)) {
            return false;
        }
        const double l_jj = std::sqrt(diag);
        m[j * n + j] = l_jj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = m[i * n + j];
            for (std::size_t k = 0; k < j; ++k) {
                v -= m[i * n + k] * m[j * n + k];
            }
            m[i * n + j] = v / l_jj;
        }
    }
    return true;
}

void solve_lower(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
    for (std::size_t i = 0; i < n; ++i) {
        double v = b[i];
        for (std::size_t k = 0; k < i; ++k) {
            v -= l[i * n + k] * b[k];
        }
        b[i] = v / l[i * n + i];
    }
}

void solve_upper_from_lower(const std::vector<double>& l, std::size_t n, std::vector<double>& b) {
    for (std::size_t ii = n; ii > 0; --ii) {
        const std::size_t i = ii - 1;
        double v = b[i];
        for (std::size_t k = i + 1; k < n; ++k) {
            v -= l[k * n + i] * b[k];
        }
        b[i] = v / l[i * n + i];
    }
}

struct GaussianProcess {
    const std::vector<std::vector<double>>* x = nullptr;
    std::vector<double> chol;   // lower-triangular factor of K + nugget*I
    std::vector<double> alpha;  // (K + nugget*I)^-1 y_std
    double lengthscale = 0.3;
    double nugget = 1e-8;
    double y_mean = 0.0;
    double y_std = 1.0;

    bool fit(const std::vector<std::vector<double>>& points, const std::vector<double>& y) {
        x = &points;
        const std::size_t n = points.size();

        y_mean = 0.0;
        for (double v : y) {
            y_mean += v;
        }
        y_mean /= static_cast<double>(n);
        double var = 0.0;
        for (double v : y) {
            var += (v - y_mean) * (v - y_mean);
        }
        y_std = std::sqrt(var / static_cast<double>(n));
        if (y_std == 0.0) {
            return false;  // flat objective so far; no informative surrogate
        }

        // Median pairwise distance as the lengthscale heuristic.
        std::vector<double> dists;
        dists.reserve(n * (n - 1) / 2);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                dists.push_back(distance(points[i], points[j]));
            }
        }
        std::sort(dists.begin(), dists.end());
        lengthscale = dists.empty() ? 0.3 : dists[dists.size() / 2];
        lengthscale = std::clamp(lengthscale, 0.05, 2.0);

        std::vector<double> y_norm(n);
        for (std::size_t i = 0; i < n; ++i) {
            y_norm[i] = (y[i] - y_mean) / y_std;
        }

        for (nugget = 1e-8; nugget <= 1e-2; nugget *= 100.0) {
            chol.assign(n * n, 0.0);
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j <= i; ++j) {
                    const double k = matern52(distance(points[i], points[j]), lengthscale);
                    chol[i * n + j] = k;
                    chol[j * n + i] = k;
                }
                chol[i * n + i] += nugget;
            }
            if (cholesky(chol, n)) {
                alpha = y_norm;
                solve_lower(chol, n, alpha);
                solve_upper_from_lower(chol, n, alpha);
                return true;
            }
        }
        return false;
    }

    // Predictive mean and standard deviation in standardized-y units.
    std::pair<double, double> predict(const std::vector<double>& q) const {
        const std::size_t n = x->size();
        std::vector<double> k(n);
        for (std::size_t i = 0; i < n; ++i) {
            k[i] = matern52(distance((*x)[i], q), lengthscale);
        }
        double mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            mean += k[i] * alpha[i];
        }
        std::vector<double> v = k;
        solve_lower(chol, n, v);
        double explained = 0.0;
        for (double c : v) {
            explained += c * c;
        }
        const double var = std::max(1.0 + nugget - explained, 1e-12);
        return {mean, std::sqrt(var)};
    }
};

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double normal_pdf(double z) {
    return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

// Expected improvement for maximisation, in standardized-y units.
double expected_improvement(double mean, double stddev, double best, double xi) {
    const double delta = mean - best - xi;
    if (stddev <= 0.0) {
        return std::max(delta, 0.0);
    }
    const double z = delta / stddev;
    return delta * normal_cdf(z) + stddev * normal_pdf(z);
}

double min_distance_to(const std::vector<std::vector<double>>& points,
                       const std::vector<double>& q) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : points) {
        best = std::min(best, distance(p, q));
    }
    return best;
}

}  // namespace

OptimizationResult optimize_continuous(ModelFamily family,
                                       const std::map<std::string, bool>& discrete_assignment,
                                       const TrailSet& trails, const ValidationConfig& cfg,
                                       const std::vector<std::pair<std::string, Interval>>& bounds,
                                       const OptimizerConfig& opt, unsigned n_threads) {
    const std::vector<std::string> names = continuous_param_names(family, discrete_assignment);
    const std::size_t dim = names.size();

    std::vector<Interval> box(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        auto it = std::find_if(bounds.begin(), bounds.end(),
                               [&](const auto& b) { return b.first == names[d]; });
        if (it == bounds.end()) {
            throw std::invalid_argument("optimize_continuous: missing bounds for '" + names[d] +
                                        "'");
        }
        if (!(it->second.lo < it->second.hi) || !std::isfinite(it->second.lo) ||
            !std::isfinite(it->second.hi)) {
            throw std::invalid_argument("optimize_continuous: invalid bounds for '" + names[d] +
                                        "'");
        }
        box[d] = it->second;
    }
    if (opt.budget < opt.init_points || opt.init_points == 0) {
        throw std::invalid_argument(
            "optimize_continuous: budget must cover the initial design (budget >= init_points "
            ">= 1)");
    }

    auto to_physical = [&](const std::vector<double>& unit) {
        std::map<std::string, double> values;
        for (std::size_t d = 0; d < dim; ++d) {
            values[names[d]] = box[d].lo + (box[d].hi - box[d].lo) * unit[d];
        }
        return values;
    };

    OptimizationResult result;
    std::vector<std::vector<double>> points;  // normalized [0,1]^d
    std::vector<double> scores;

    auto evaluate = [&](const std::vector<double>& unit) {
        const ModelParams params = params_from_values(family, discrete_assignment,
                                                      to_physical(unit));
        const double score = validate(MotionModel(params), trails, cfg, n_threads).score;
        points.push_back(unit);
        scores.push_back(score);
        result.trace.push_back(TraceEntry{params, score});
    };

    SplitMix64 rng(mix_seed(opt.seed, 0x0b07));
    std::vector<double> rotation(dim);
    for (std::size_t d = 0; d < dim; ++d) {
        rotation[d] = rng.next_double();
    }

    // Initial quasi-random design spanning the box.
    for (std::size_t i = 0; i < opt.init_points; ++i) {
        evaluate(halton_point(i, dim, rotation));
    }

    std::size_t halton_cursor = opt.init_points;
    while (points.size() < opt.budget) {
        std::size_t best_idx = 0;
        for (std::size_t i = 1; i < scores.size(); ++i) {
            if (scores[i] > scores[best_idx]) {
                best_idx = i;
            }
        }

        // Candidate pool: fresh quasi-random points for exploration plus
        // Gaussian perturbations of the incumbent for refinement.
        std::vector<std::vector<double>> candidates;
        candidates.reserve(opt.candidate_pool);
        const std::size_t n_local =
            opt.backend == OptimizerConfig::Backend::Bayesian ? opt.candidate_pool / 2 : 0;
        for (std::size_t c = 0; c + n_local < opt.candidate_pool; ++c) {
            candidates.push_back(halton_point(halton_cursor++, dim, rotation));
        }
        // Coarse-to-fine refinement scales; the finest resolves ~0.1% of
        // the box, enough to sit tight against a feasibility cliff.
        constexpr double kLocalSigmas[] = {0.1, 0.02, 0.005, 0.001};
        for (std::size_t c = 0; c < n_local; ++c) {
            const double sigma = kLocalSigmas[c % 4];
            std::vector<double> q(dim);
            for (std::size_t d = 0; d < dim; ++d) {
                q[d] = std::clamp(points[best_idx][d] + sigma * normal_draw(rng), 0.0, 1.0);
            }
            candidates.push_back(std::move(q));
        }

        std::size_t pick = 0;
        if (opt.backend == OptimizerConfig::Backend::RandomSearch) {
            pick = rng.next_index(candidates.size());
        } else {
            GaussianProcess gp;
            if (gp.fit(points, scores)) {
                const double best_std = (scores[best_idx] - gp.y_mean) / gp.y_std;
                double best_ei = -1.0;
                for (std::size_t c = 0; c < candidates.size(); ++c) {
                    if (min_distance_to(points, candidates[c]) < 1e-9) {
                        continue;  // re-evaluating a known point gains nothing
                    }
                    const auto [mean, stddev] = gp.predict(candidates[c]);
                    const double ei = expected_improvement(mean, stddev, best_std, 0.0);
                    if (ei > best_ei) {
                        best_ei = ei;
                        pick = c;
                    }
                }
            } else {
                // Flat objective so far (e.g. an all-zero-score plateau):
                // fall back to pure space-filling exploration.
                double best_gap = -1.0;
                for (std::size_t c = 0; c < candidates.size(); ++c) {
                    const double gap = min_distance_to(points, candidates[c]);
                    if (gap > best_gap) {
                        best_gap = gap;
                        pick = c;
                    }
                }
            }
        }
        evaluate(candidates[pick]);
    }

    std::size_t best_idx = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best_idx]) {
            best_idx = i;
        }
    }
    result.best_params = result.trace[best_idx].params;
    result.best_score = result.trace[best_idx].score;
    result.evaluations = result.trace.size();
    return result;
}

namespace {

std::vector<std::map<std::string, bool>> enumerate_assignments(const ParamSpace& space) {
    std::vector<std::map<std::string, bool>> combos{{}};
    for (const auto& [name, domain] : space.discrete) {
        if (domain.empty()) {
            throw std::invalid_argument("optimize_model_family: empty discrete domain for '" +
                                        name + "'");
        }
        std::vector<std::map<std::string, bool>> next;
        next.reserve(combos.size() * domain.size());
        for (const auto& combo : combos) {
            for (bool v : domain) {
                auto extended = combo;
                extended[name] = v;
                next.push_back(std::move(extended));
            }
        }
        combos = std::move(next);
    }
    return combos;
}

}  // namespace

OptimizationResult optimize_model_family(ModelFamily family, const TrailSet& trails,
                                         const ValidationConfig& cfg, const ParamSpace& space,
                                         std::size_t total_budget, const OptimizerConfig& opt,
                                         unsigned n_threads) {
    const auto combos = enumerate_assignments(space);
    const std::size_t n_combos = combos.size();
    const std::size_t base_budget = total_budget / n_combos;
    const std::size_t remainder = total_budget % n_combos;

    OptimizationResult overall;
    bool first = true;
    for (std::size_t c = 0; c < n_combos; ++c) {
        OptimizerConfig run_cfg = opt;
        run_cfg.budget = base_budget + (c < remainder ? 1 : 0);
        run_cfg.seed = mix_seed(opt.seed, c + 1);
        OptimizationResult run =
            optimize_continuous(family, combos[c], trails, cfg, space.continuous, run_cfg,
                                n_threads);
        if (first || run.best_score > overall.best_score) {
            overall.best_params = run.best_params;
            overall.best_score = run.best_score;
            first = false;
        }
        overall.evaluations += run.evaluations;
        overall.trace.insert(overall.trace.end(), run.trace.begin(), run.trace.end());
    }
    return overall;
}

std::pair<ModelFamily, OptimizationResult> select_best_model(
    const std::map<ModelFamily, OptimizationResult>& results) {
    if (results.empty()) {
        throw std::invalid_argument("select_best_model: empty result map");
    }
    auto better = [](const std::pair<ModelFamily, const OptimizationResult*>& a,
                     const std::pair<ModelFamily, const OptimizationResult*>& b) {
        if (a.second->best_score != b.second->best_score) {
            return a.second->best_score > b.second->best_score;
        }
        const int pa = family_param_count(a.first);
        const int pb = family_param_count(b.first);
        if (pa != pb) {
            return pa < pb;
        }
        return family_name(a.first) < family_name(b.first);
    };
    std::pair<ModelFamily, const OptimizationResult*> best{results.begin()->first,
                                                           &results.begin()->second};
    for (const auto& [family, result] : results) {
        std::pair<ModelFamily, const OptimizationResult*> entry{family, &result};
        if (better(entry, best)) {
            best = entry;
        }
    }
    return {best.first, *best.second};
}

nlohmann::ordered_json optimization_result_to_json(const OptimizationResult& result) {
    nlohmann::ordered_json j;
    j["best_params"] = params_to_json(result.best_params);
    j["best_score"] = result.best_score;
    if (result.best_score > 0.0) {
        j["best_score_inverse_m2"] = 1.0 / result.best_score;
    } else {
        j["best_score_inverse_m2"] = nullptr;
    }
    j["evaluations"] = result.evaluations;
    return j;
}

void write_trace_csv(const OptimizationResult& result, std::ostream& out) {
    if (result.trace.empty()) {
        throw std::invalid_argument("write_trace_csv: empty trace");
    }
    const ModelFamily family = family_of(result.trace.front().params);
    // Union of the family's parameter columns; unused fields stay empty.
    std::vector<std::string> columns;
    switch (family) {
        case ModelFamily::ConstantSpeed:
            columns = {"v_max"};
            break;
        case ModelFamily::ConstantAccel:
            columns = {"a_max"};
            break;
        case ModelFamily::CappedAccel:
            columns = {"a_max", "v_max"};
            break;
        case ModelFamily::TwoSegment:
            columns = {"t_inert", "keep_initial", "v_const", "a_max", "v_max"};
            break;
    }
    out << "evaluation";
    for (const auto& c : columns) {
        out << ',' << c;
    }
    out << ",score\n";
    for (std::size_t i = 0; i < result.trace.size(); ++i) {
        const nlohmann::json params = params_to_json(result.trace[i].params);
        out << i;
        for (const auto& c : columns) {
            out << ',';
            if (params.contains(c)) {
                if (params.at(c).is_boolean()) {
                    out << (params.at(c).get<bool>() ? "true" : "false");
                } else {
                    out << format_double(params.at(c).get<double>());
                }
            }
        }
        out << ',' << format_double(result.trace[i].score) << '\n';
    }
}

}  // namespace reachset
