#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "reachset/geometry.hpp"

#include "json.hpp"

namespace reachset {

class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One observed frame of a player. Velocity is filled in by
/// derive_velocities and absent at track ends and next to gaps.
struct TrackSample {
    std::int64_t frame = 0;
    Vec2 position;
    std::optional<Vec2> velocity;
};

/// Time-ordered positional samples of one player. Frame indices are
/// strictly increasing; missing frames are simply absent (gaps).
struct PlayerTrack {
    std::string player_id;
    double frame_rate_hz = 0.0;
    std::vector<TrackSample> samples;
};

/// One validation unit: position/velocity at t0 and the position reached
/// after the horizon dt.
struct Trail {
    Vec2 x0;   // m
    Vec2 v0;   // m/s
    Vec2 xt;   // m
    double dt = 0.0;  // s
};

struct TrailSet {
    std::vector<Trail> trails;
    std::string source;       // provenance descriptor
    std::uint64_t seed = 0;   // RNG seed used for sampling / generation
};

/// Declares how to read a tracking CSV: which column holds the frame
/// index, which column pairs hold each player's coordinates, the frame
/// rate, and the pitch dimensions used to scale normalized coordinates.
struct TrackingSchema {
    std::string frame_col;
    double frame_rate_hz = 0.0;
    double pitch_length_m = 105.0;
    double pitch_width_m = 68.0;
    bool normalized = false;
    /// When true the file carries the Metrica three-row header (team row,
    /// jersey row, column-name row); player column pairs are derived from
    /// it and the ball pair is skipped. `players` is then ignored.
    bool metrica_header = false;
    /// player id -> (x column name, y column name)
    std::vector<std::pair<std::string, std::pair<std::string, std::string>>> players;
};

TrackingSchema schema_from_json(const nlohmann::json& j);
TrackingSchema load_tracking_schema(const std::filesystem::path& path);

/// Parses one tracking CSV into per-player tracks. Normalized coordinates
/// are scaled by the pitch dimensions; empty coordinate cells become gaps;
/// malformed rows raise ParseError with the row number.
std::vector<PlayerTrack> parse_tracking(std::istream& source, const TrackingSchema& schema);
std::vector<PlayerTrack> parse_tracking_file(const std::filesystem::path& path,
                                             const TrackingSchema& schema);

/// Central-difference velocities: v_i = (x_{i+1} - x_{i-1}) * rate / 2,
/// defined only where both neighbouring frames exist.
PlayerTrack derive_velocities(PlayerTrack track);

/// Number of (player, frame) pairs that admit a trail of horizon dt.
std::size_t count_trail_candidates(const std::vector<PlayerTrack>& tracks, double dt);

/// Samples n trails uniformly without replacement from the pooled
/// candidates of all tracks. dt must be an integer multiple of the frame
/// period. Deterministic for a fixed seed.
TrailSet extract_trails(const std::vector<PlayerTrack>& tracks, double dt, std::size_t n,
                        std::uint64_t seed);

// TrailSet serialization: CSV with header x0,y0,vx0,vy0,xt,yt,dt plus a
// JSON provenance sidecar (same path with a .json extension).
void write_trail_csv(const TrailSet& set, std::ostream& out);
TrailSet read_trail_csv(std::istream& in);
void save_trail_set(const TrailSet& set, const std::filesystem::path& csv_path);
TrailSet load_trail_set(const std::filesystem::path& csv_path);

}  // namespace reachset
