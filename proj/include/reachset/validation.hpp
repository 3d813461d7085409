#pragma once

#include <cstddef>
#include <cstdint>

#include "reachset/ingest.hpp"
#include "reachset/models.hpp"

#include "json.hpp"

namespace reachset {

/// Compensated (Kahan) summation; keeps half-million-trail area sums
/// deterministic to the last bit for a fixed addition order.
struct KahanSum {
    double sum = 0.0;
    double compensation = 0.0;

    void add(double value) {
        const double y = value - compensation;
        const double t = sum + y;
        compensation = (t - sum) - y;
        sum = t;
    }

    double value() const { return sum; }
};

struct ValidationConfig {
    double hit_ratio_min = 0.0;    // in (0, 1]; 0 is rejected
    std::size_t n_vertices = 200;  // polygon resolution
};

struct ValidationResult {
    double score = 0.0;      // 1/m^2; 0 when the hit-ratio threshold is violated
    double hit_ratio = 0.0;  // exact on full scans, partial when terminated early
    std::size_t n_correct = 0;
    std::size_t n_incorrect = 0;
    double sum_correct_area = 0.0;  // m^2
    bool terminated_early = false;
};

struct TrailEvaluation {
    bool correct = false;
    double area = 0.0;  // m^2; meaningful only when correct
};

/// Predicts the reachable polygon for one trail and tests whether the
/// reached position falls inside it. Model errors (degenerate reachable
/// sets) count as incorrect predictions.
TrailEvaluation evaluate_trail(const MotionModel& model, const Trail& trail,
                               std::size_t n_vertices);

/// n_correct / n_total. Rejects n_total = 0.
double hit_ratio(std::size_t n_correct, std::size_t n_total);

/// n_correct / sum_correct_area, the inverse mean correct-prediction area.
/// Rejects n_correct = 0.
double precision(std::size_t n_correct, double sum_correct_area);

/// True iff hit_ratio_min <= 1 - n_outlier_estimate / n_trails, i.e. the
/// configured threshold tolerates the expected number of outliers.
bool check_threshold_condition(double hit_ratio_min, std::size_t n_outlier_estimate,
                               std::size_t n_trails);

/// Smallest incorrect-prediction count that drives the hit ratio below
/// hit_ratio_min (computed with the same double arithmetic the final
/// hit-ratio comparison uses, so early exit and full scan always agree).
/// Returns n_trails + 1 when no count does.
std::size_t abort_incorrect_count(double hit_ratio_min, std::size_t n_trails);

/// Scores a model over a trail set: iterates trails, aborts with score 0
/// as soon as the incorrect count alone forces hit_ratio < hit_ratio_min,
/// otherwise returns n_correct / sum of correctly predicted areas.
/// The returned score is identical to validate_reference for any thread
/// count: trails are reduced in fixed-size blocks in index order.
ValidationResult validate(const MotionModel& model, const TrailSet& trails,
                          const ValidationConfig& cfg, unsigned n_threads = 1);

/// Full-scan scorer without the early exit; the independent route used to
/// cross-check validate.
ValidationResult validate_reference(const MotionModel& model, const TrailSet& trails,
                                    const ValidationConfig& cfg);

nlohmann::ordered_json result_to_json(const ValidationResult& result);

}  // namespace reachset
