#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>

#include "reachset/geometry.hpp"

#include "json.hpp"

namespace reachset {

/// Player position and velocity at the start of a prediction horizon.
struct KinematicState {
    Vec2 x0;  // m
    Vec2 v0;  // m/s
};

/// (a) Constant speed in an arbitrary direction: disk of radius v_max*dt
/// around x0.
struct ConstantSpeedParams {
    double v_max = 0.0;  // m/s
};

/// (b) Constant acceleration in an arbitrary direction: disk of radius
/// 0.5*a_max*dt^2 around x0 + v0*dt.
struct ConstantAccelParams {
    double a_max = 0.0;  // m/s^2
};

/// (c) Constant acceleration until a speed cap is hit, then constant speed.
struct CappedAccelParams {
    double a_max = 0.0;  // m/s^2
    double v_max = 0.0;  // m/s
};

/// (d) Two segments of constant-speed motion: first along v0 for t_inert,
/// then in an arbitrary direction. v_const feeds the first segment when
/// keep_initial is false, and the second segment when a_max/v_max are unset.
/// a_max and v_max must be set together or not at all.
struct TwoSegmentParams {
    double t_inert = 0.0;  // s
    bool keep_initial = true;
    double v_const = 0.0;  // m/s; ignored when unused
    std::optional<double> a_max;  // m/s^2
    std::optional<double> v_max;  // m/s

    bool caps_set() const { return a_max.has_value() && v_max.has_value(); }
};

using ModelParams =
    std::variant<ConstantSpeedParams, ConstantAccelParams, CappedAccelParams, TwoSegmentParams>;

enum class ModelFamily { ConstantSpeed, ConstantAccel, CappedAccel, TwoSegment };

ModelFamily family_of(const ModelParams& params);
std::string_view family_name(ModelFamily family);
ModelFamily family_from_name(std::string_view name);

/// Size of the family's free-parameter tuple; used as an optimisation
/// tie-break (fewer parameters wins).
int family_param_count(ModelFamily family);

/// Throws std::invalid_argument if any magnitude is non-positive, t_inert
/// is negative, or only one of a_max/v_max is set for the two-segment model.
void validate_params(const ModelParams& params);

/// Thrown when a model cannot produce a non-degenerate reachable area,
/// e.g. the two-segment model with dt <= t_inert (point prediction).
class DegenerateReachableSet : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Speeds below this threshold are treated as zero when a direction
/// v0/|v0| would otherwise be undefined.
inline constexpr double kZeroSpeedEps = 1e-9;  // m/s

// Boundary points B(phi) of the reachable area for each model.
Vec2 constant_speed_boundary(const KinematicState& s, double dt, double v_max, double phi);
Vec2 constant_accel_boundary(const KinematicState& s, double dt, double a_max, double phi);
Vec2 capped_accel_boundary(const KinematicState& s, double dt, double a_max, double v_max,
                           double phi);
Vec2 two_segment_boundary(const KinematicState& s, double dt, const TwoSegmentParams& p,
                          double phi);

/// Time for the capped-acceleration model to reach v_max along direction phi,
/// starting from the (already clipped) velocity v0_clipped. Non-negative root
/// of |v0_clipped + a_max*t*u(phi)| = v_max.
double capped_accel_time_to_limit(const Vec2& v0_clipped, double a_max, double v_max, double phi);

/// Immutable parametric motion model. Maps a kinematic state and a horizon
/// to a reachable-area polygon sampled at n evenly spaced boundary angles.
class MotionModel {
public:
    explicit MotionModel(ModelParams params);

    const ModelParams& params() const { return params_; }
    ModelFamily family() const { return family_of(params_); }

    Vec2 boundary_point(const KinematicState& s, double dt, double phi) const;
    Polygon reachable_polygon(const KinematicState& s, double dt, std::size_t n_vertices) const;

private:
    ModelParams params_;
};

// Convenience factories.
MotionModel make_constant_speed(double v_max);
MotionModel make_constant_accel(double a_max);
MotionModel make_capped_accel(double a_max, double v_max);
MotionModel make_two_segment(double t_inert, bool keep_initial, double v_const,
                             std::optional<double> a_max = std::nullopt,
                             std::optional<double> v_max = std::nullopt);

/// Model config block: {"model": <family name>, <numeric/boolean fields>}.
/// Errors name the offending field.
ModelParams params_from_json(const nlohmann::json& j);
nlohmann::json params_to_json(const ModelParams& params);
MotionModel model_from_json(const nlohmann::json& j);

}  // namespace reachset
