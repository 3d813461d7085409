#include "reachset/validation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace reachset {

namespace {

constexpr std::size_t kBlockSize = 1024;

void check_config(const TrailSet& trails, const ValidationConfig& cfg) {
    if (trails.trails.empty()) {
        throw std::invalid_argument("validate: trail set must not be empty");
    }
    if (!(cfg.hit_ratio_min > 0.0) || cfg.hit_ratio_min > 1.0) {
        throw std::invalid_argument("validate: hit_ratio_min must be in (0, 1]");
    }
    if (cfg.n_vertices < 3) {
        throw std::invalid_argument("validate: n_vertices must be at least 3");
    }
}

}  // namespace

TrailEvaluation evaluate_trail(const MotionModel& model, const Trail& trail,
                               std::size_t n_vertices) {
    Polygon poly;
    try {
        poly = model.reachable_polygon(KinematicState{trail.x0, trail.v0}, trail.dt, n_vertices);
    } catch (const DegenerateReachableSet&) {
        return {false, 0.0};  // a prediction that cannot be made cannot contain xt
    }
    if (!point_in_polygon(trail.xt, poly)) {
        return {false, 0.0};
    }
    return {true, polygon_area(poly)};
}

double hit_ratio(std::size_t n_correct, std::size_t n_total) {
    if (n_total == 0) {
        throw std::invalid_argument("hit_ratio: n_total must be at least 1");
    }
    return static_cast<double>(n_correct) / static_cast<double>(n_total);
}

double precision(std::size_t n_correct, double sum_correct_area) {
    if (n_correct == 0) {
        throw std::invalid_argument("precision: undefined for n_correct = 0");
    }
    return static_cast<double>(n_correct) / sum_correct_area;
}

bool check_threshold_condition(double hit_ratio_min, std::size_t n_outlier_estimate,
                               std::size_t n_trails) {
    if (n_trails == 0) {
        return false;
    }
    const double outlier_ratio =
        static_cast<double>(n_outlier_estimate) / static_cast<double>(n_trails);
    return hit_ratio_min <= 1.0 - outlier_ratio;
}

std::size_t abort_incorrect_count(double hit_ratio_min, std::size_t n_trails) {
    // Start from the real-arithmetic threshold and adjust by the actual
    // double comparison, so that "n_incorrect > (1 - hit_ratio_min) * N"
    // matches "hit_ratio < hit_ratio_min" exactly, strictness included.
    const double n = static_cast<double>(n_trails);
    double guess = std::floor((1.0 - hit_ratio_min) * n) - 2.0;
    std::size_t k = guess > 0.0 ? static_cast<std::size_t>(guess) : 0;
    while (k <= n_trails) {
        const double ratio = static_cast<double>(n_trails - k) / n;
        if (ratio < hit_ratio_min) {
            return k;
        }
        ++k;
    }
    return n_trails + 1;
}

namespace {

struct BlockResult {
    KahanSum correct_area;
    std::size_t n_correct = 0;
    std::vector<std::uint32_t> incorrect_offsets;  // intra-block trail offsets
};

BlockResult process_block(const MotionModel& model, const std::vector<Trail>& trails,
                          std::size_t begin, std::size_t end, std::size_t n_vertices) {
    BlockResult result;
    for (std::size_t i = begin; i < end; ++i) {
        const TrailEvaluation eval = evaluate_trail(model, trails[i], n_vertices);
        if (eval.correct) {
            result.correct_area.add(eval.area);
            ++result.n_correct;
        } else {
            result.incorrect_offsets.push_back(static_cast<std::uint32_t>(i - begin));
        }
    }
    return result;
}

// Combines processed blocks in index order. `abort_at` is the incorrect
// count that triggers the score-0 exit (n_trails + 1 when disabled).
ValidationResult reduce_blocks(const std::vector<BlockResult>& blocks, std::size_t n_processed,
                               std::size_t n_total, double hit_ratio_min, std::size_t abort_at) {
    ValidationResult result;
    KahanSum total_area;
    std::size_t n_correct = 0;
    std::size_t n_incorrect = 0;
    for (std::size_t b = 0; b * kBlockSize < n_processed; ++b) {
        const BlockResult& block = blocks[b];
        if (n_incorrect + block.incorrect_offsets.size() >= abort_at) {
            // Threshold crossed inside this block: count up to and
            // including the crossing trail, exactly as a sequential
            // trail-by-trail scan would.
            const std::size_t needed = abort_at - n_incorrect;
            const std::uint32_t crossing_offset = block.incorrect_offsets[needed - 1];
            const std::size_t crossing_index = b * kBlockSize + crossing_offset;
            result.n_incorrect = abort_at;
            result.n_correct = crossing_index + 1 - abort_at;
            result.score = 0.0;
            result.terminated_early = true;
            result.hit_ratio = hit_ratio(result.n_correct, result.n_correct + result.n_incorrect);
            result.sum_correct_area = 0.0;  // partial; not meaningful on the 0-branch
            return result;
        }
        n_incorrect += block.incorrect_offsets.size();
        n_correct += block.n_correct;
        total_area.add(block.correct_area.value());
    }

    result.n_correct = n_correct;
    result.n_incorrect = n_incorrect;
    result.sum_correct_area = total_area.value();
    result.hit_ratio = hit_ratio(n_correct, n_total);
    result.terminated_early = false;
    if (result.hit_ratio < hit_ratio_min) {
        result.score = 0.0;
    } else {
        result.score = precision(n_correct, result.sum_correct_area);
    }
    return result;
}

}  // namespace

ValidationResult validate(const MotionModel& model, const TrailSet& trails,
                          const ValidationConfig& cfg, unsigned n_threads) {
    check_config(trails, cfg);
    const std::vector<Trail>& data = trails.trails;
    const std::size_t n_total = data.size();
    const std::size_t n_blocks = (n_total + kBlockSize - 1) / kBlockSize;
    const std::size_t abort_at = abort_incorrect_count(cfg.hit_ratio_min, n_total);

    std::vector<BlockResult> blocks(n_blocks);
    std::atomic<std::size_t> next_block{0};
    std::atomic<std::size_t> incorrect_seen{0};
    std::atomic<bool> stop{false};

    auto worker = [&]() {
        for (;;) {
            if (stop.load(std::memory_order_relaxed)) {
                return;
            }
            // A claimed block is always processed, so the processed blocks
            // form a contiguous prefix regardless of timing.
            const std::size_t b = next_block.fetch_add(1);
            if (b >= n_blocks) {
                return;
            }
            const std::size_t begin = b * kBlockSize;
            const std::size_t end = std::min(begin + kBlockSize, n_total);
            blocks[b] = process_block(model, data, begin, end, cfg.n_vertices);
            const std::size_t seen =
                incorrect_seen.fetch_add(blocks[b].incorrect_offsets.size()) +
                blocks[b].incorrect_offsets.size();
            if (seen >= abort_at) {
                stop.store(true, std::memory_order_relaxed);
            }
        }
    };

    if (n_threads <= 1 || n_blocks == 1) {
        worker();
    } else {
        const unsigned n_workers = std::min<unsigned>(n_threads, static_cast<unsigned>(n_blocks));
        std::vector<std::thread> pool;
        pool.reserve(n_workers);
        for (unsigned t = 0; t < n_workers; ++t) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) {
            t.join();
        }
    }

    // Workers claim blocks in index order and always finish a claimed
    // block, so the processed blocks form a contiguous prefix. When the
    // abort fired, the crossing necessarily lies inside that prefix.
    const std::size_t n_claimed = std::min(next_block.load(), n_blocks);
    const std::size_t n_processed = std::min(n_claimed * kBlockSize, n_total);
    return reduce_blocks(blocks, n_processed, n_total, cfg.hit_ratio_min, abort_at);
}

ValidationResult validate_reference(const MotionModel& model, const TrailSet& trails,
                                    const ValidationConfig& cfg) {
    check_config(trails, cfg);
    const std::vector<Trail>& data = trails.trails;
    // Full scan, no early exit. Same fixed-block summation as validate so
    // the two routes agree bit-for-bit whenever the scores agree at all.
    KahanSum total_area;
    KahanSum block_area;
    std::size_t n_correct = 0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const TrailEvaluation eval = evaluate_trail(model, data[i], cfg.n_vertices);
        if (eval.correct) {
            block_area.add(eval.area);
            ++n_correct;
        }
        if ((i + 1) % kBlockSize == 0 || i + 1 == data.size()) {
            total_area.add(block_area.value());
            block_area = KahanSum{};
        }
    }

    ValidationResult result;
    result.n_correct = n_correct;
    result.n_incorrect = data.size() - n_correct;
    result.sum_correct_area = total_area.value();
    result.hit_ratio = hit_ratio(n_correct, data.size());
    result.terminated_early = false;
    result.score =
        result.hit_ratio < cfg.hit_ratio_min ? 0.0 : precision(n_correct, result.sum_correct_area);
    return result;
}

nlohmann::ordered_json result_to_json(const ValidationResult& result) {
    nlohmann::ordered_json j;
    j["score"] = result.score;
    if (result.score > 0.0) {
        j["score_inverse_m2"] = 1.0 / result.score;
    } else {
        j["score_inverse_m2"] = nullptr;
    }
    j["hit_ratio"] = result.hit_ratio;
    j["n_correct"] = result.n_correct;
    j["n_incorrect"] = result.n_incorrect;
    j["sum_correct_area_m2"] = result.sum_correct_area;
    j["terminated_early"] = result.terminated_early;
    return j;
}

}  // namespace reachset
