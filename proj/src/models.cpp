#include "reachset/models.hpp"

#include <algorithm>
#include <cmath>

namespace reachset {

ModelFamily family_of(const ModelParams& params) {
    return std::visit(
        [](const auto& p) -> ModelFamily {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantSpeedParams>) {
                return ModelFamily::ConstantSpeed;
            } else if constexpr (std::is_same_v<T, ConstantAccelParams>) {
                return ModelFamily::ConstantAccel;
            } else if constexpr (std::is_same_v<T, CappedAccelParams>) {
                return ModelFamily::CappedAccel;
            } else {
                return ModelFamily::TwoSegment;
            }
        },
        params);
}

std::string_view family_name(ModelFamily family) {
    switch (family) {
        case ModelFamily::ConstantSpeed:
            return "constant_speed";
        case ModelFamily::ConstantAccel:
            return "constant_acceleration";
        case ModelFamily::CappedAccel:
            return "capped_acceleration";
        case ModelFamily::TwoSegment:
            return "two_segment";
    }
    throw std::logic_error("family_name: unknown family");
}

ModelFamily family_from_name(std::string_view name) {
    if (name == "constant_speed") return ModelFamily::ConstantSpeed;
    if (name == "constant_acceleration") return ModelFamily::ConstantAccel;
    if (name == "capped_acceleration") return ModelFamily::CappedAccel;
    if (name == "two_segment") return ModelFamily::TwoSegment;
    throw std::invalid_argument("unknown model family: " + std::string(name));
}

int family_param_count(ModelFamily family) {
    switch (family) {
        case ModelFamily::ConstantSpeed:
        case ModelFamily::ConstantAccel:
            return 1;
        case ModelFamily::CappedAccel:
            return 2;
        case ModelFamily::TwoSegment:
            return 5;
    }
    throw std::logic_error("family_param_count: unknown family");
}

namespace {

void require_positive(double value, const char* field) {
    if (!(value > 0.0) || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(field) + " must be positive and finite");
    }
}

}  // namespace

void validate_params(const ModelParams& params) {
    std::visit(
        [](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantSpeedParams>) {
                require_positive(p.v_max, "v_max");
            } else if constexpr (std::is_same_v<T, ConstantAccelParams>) {
                require_positive(p.a_max, "a_max");
            } else if constexpr (std::is_same_v<T, CappedAccelParams>) {
                require_positive(p.a_max, "a_max");
                require_positive(p.v_max, "v_max");
            } else {
                if (!(p.t_inert >= 0.0) || !std::isfinite(p.t_inert)) {
                    throw std::invalid_argument("t_inert must be non-negative and finite");
                }
                if (p.a_max.has_value() != p.v_max.has_value()) {
                    throw std::invalid_argument(
                        "two_segment: a_max and v_max must be set together or not at all");
                }
                if (p.caps_set()) {
                    require_positive(*p.a_max, "a_max");
                    require_positive(*p.v_max, "v_max");
                }
                const bool v_const_used = !p.keep_initial || !p.caps_set();
                if (v_const_used) {
                    require_positive(p.v_const, "v_const");
                }
            }
        },
        params);
}

Vec2 constant_speed_boundary(const KinematicState& s, double dt, double v_max, double phi) {
    return s.x0 + v_max * dt * unit_vector(phi);
}

Vec2 constant_accel_boundary(const KinematicState& s, double dt, double a_max, double phi) {
    return s.x0 + s.v0 * dt + 0.5 * a_max * dt * dt * unit_vector(phi);
}

double capped_accel_time_to_limit(const Vec2& v0_clipped, double a_max, double v_max, double phi) {
    // Non-negative root of a^2 t^2 + 2 a (v0*.u) t + |v0*|^2 - v_max^2 = 0.
    // Existence is guaranteed by |v0*| <= v_max.
    const Vec2 u = unit_vector(phi);
    const double along = v0_clipped.dot(u);
    const double disc = along * along + v_max * v_max - v0_clipped.norm_sq();
    const double t = (-along + std::sqrt(std::max(disc, 0.0))) / a_max;
    return std::max(t, 0.0);
}

Vec2 capped_accel_boundary(const KinematicState& s, double dt, double a_max, double v_max,
                           double phi) {
    Vec2 v0_clipped = s.v0;
    const double speed = s.v0.norm();
    if (speed > v_max) {
        v0_clipped = s.v0 * (v_max / speed);
    }
    const double t_acc = capped_accel_time_to_limit(v0_clipped, a_max, v_max, phi);
    const double t_acc_eff = std::min(t_acc, dt);
    const double radius = a_max * t_acc_eff * (dt - 0.5 * t_acc_eff);
    return s.x0 + v0_clipped * dt + radius * unit_vector(phi);
}

Vec2 two_segment_boundary(const KinematicState& s, double dt, const TwoSegmentParams& p,
                          double phi) {
    if (dt <= p.t_inert) {
        throw DegenerateReachableSet(
            "two_segment: degenerate reachable set (point); requires dt > t_inert");
    }
    const double t_inert_eff = std::min(p.t_inert, dt);
    const double speed = s.v0.norm();
    const double v_inert = p.keep_initial ? speed : p.v_const;
    const double v_final =
        p.caps_set() ? std::min(v_inert + *p.a_max * p.t_inert, *p.v_max) : p.v_const;
    Vec2 first_leg{0.0, 0.0};
    if (speed >= kZeroSpeedEps) {
        first_leg = s.v0 * (v_inert / speed) * t_inert_eff;
    }
    return s.x0 + first_leg + v_final * (dt - t_inert_eff) * unit_vector(phi);
}

MotionModel::MotionModel(ModelParams params) : params_(std::move(params)) {
    validate_params(params_);
}

Vec2 MotionModel::boundary_point(const KinematicState& s, double dt, double phi) const {
    return std::visit(
        [&](const auto& p) -> Vec2 {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantSpeedParams>) {
                return constant_speed_boundary(s, dt, p.v_max, phi);
            } else if constexpr (std::is_same_v<T, ConstantAccelParams>) {
                return constant_accel_boundary(s, dt, p.a_max, phi);
            } else if constexpr (std::is_same_v<T, CappedAccelParams>) {
                return capped_accel_boundary(s, dt, p.a_max, p.v_max, phi);
            } else {
                return two_segment_boundary(s, dt, p, phi);
            }
        },
        params_);
}

Polygon MotionModel::reachable_polygon(const KinematicState& s, double dt,
                                       std::size_t n_vertices) const {
    if (!(dt > 0.0)) {
        throw std::invalid_argument("reachable_polygon: dt must be positive");
    }
    return boundary_polygon([&](double phi) { return boundary_point(s, dt, phi); }, n_vertices);
}

MotionModel make_constant_speed(double v_max) {
    return MotionModel(ConstantSpeedParams{v_max});
}

MotionModel make_constant_accel(double a_max) {
    return MotionModel(ConstantAccelParams{a_max});
}

MotionModel make_capped_accel(double a_max, double v_max) {
    return MotionModel(CappedAccelParams{a_max, v_max});
}

MotionModel make_two_segment(double t_inert, bool keep_initial, double v_const,
                             std::optional<double> a_max, std::optional<double> v_max) {
    return MotionModel(TwoSegmentParams{t_inert, keep_initial, v_const, a_max, v_max});
}

namespace {

double require_number(const nlohmann::json& j, const char* field) {
    if (!j.contains(field)) {
        throw std::invalid_argument("model config: missing field '" + std::string(field) + "'");
    }
    if (!j.at(field).is_number()) {
        throw std::invalid_argument("model config: field '" + std::string(field) +
                                    "' must be a number");
    }
    return j.at(field).get<double>();
}

}  // namespace

ModelParams params_from_json(const nlohmann::json& j) {
    if (!j.contains("model") || !j.at("model").is_string()) {
        throw std::invalid_argument("model config: missing string field 'model'");
    }
    const ModelFamily family = family_from_name(j.at("model").get<std::string>());
    ModelParams params;
    switch (family) {
        case ModelFamily::ConstantSpeed:
            params = ConstantSpeedParams{require_number(j, "v_max")};
            break;
        case ModelFamily::ConstantAccel:
            params = ConstantAccelParams{require_number(j, "a_max")};
            break;
        case ModelFamily::CappedAccel:
            params = CappedAccelParams{require_number(j, "a_max"), require_number(j, "v_max")};
            break;
        case ModelFamily::TwoSegment: {
            TwoSegmentParams p;
            p.t_inert = require_number(j, "t_inert");
            if (!j.contains("keep_initial") || !j.at("keep_initial").is_boolean()) {
                throw std::invalid_argument(
                    "model config: two_segment requires boolean field 'keep_initial'");
            }
            p.keep_initial = j.at("keep_initial").get<bool>();
            if (j.contains("v_const")) {
                p.v_const = require_number(j, "v_const");
            }
            if (j.contains("a_max")) {
                p.a_max = require_number(j, "a_max");
            }
            if (j.contains("v_max")) {
                p.v_max = require_number(j, "v_max");
            }
            params = p;
            break;
        }
    }
    validate_params(params);
    return params;
}

nlohmann::json params_to_json(const ModelParams& params) {
    nlohmann::json j;
    j["model"] = std::string(family_name(family_of(params)));
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ConstantSpeedParams>) {
                j["v_max"] = p.v_max;
            } else if constexpr (std::is_same_v<T, ConstantAccelParams>) {
                j["a_max"] = p.a_max;
            } else if constexpr (std::is_same_v<T, CappedAccelParams>) {
                j["a_max"] = p.a_max;
                j["v_max"] = p.v_max;
            } else {
                j["t_inert"] = p.t_inert;
                j["keep_initial"] = p.keep_initial;
                const bool v_const_used = !p.keep_initial || !p.caps_set();
                if (v_const_used) {
                    j["v_const"] = p.v_const;
                }
                if (p.caps_set()) {
                    j["a_max"] = *p.a_max;
                    j["v_max"] = *p.v_max;
                }
            }
        },
        params);
    return j;
}

MotionModel model_from_json(const nlohmann::json& j) { return MotionModel(params_from_json(j)); }

}  // namespace reachset
