#include "reachset/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <tuple>

#include "reachset/numio.hpp"
#include "reachset/rng.hpp"

namespace reachset {

namespace {

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    cells.push_back(cell);
    return cells;
}

bool read_line(std::istream& in, std::string& line) {
    return static_cast<bool>(std::getline(in, line));
}

}  // namespace

TrackingSchema schema_from_json(const nlohmann::json& j) {
    static const std::vector<std::string> known = {
        "frame_col",   "frame_rate_hz",  "pitch_length_m", "pitch_width_m",
        "normalized",  "metrica_header", "players"};
    for (const auto& [key, value] : j.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ParseError("tracking schema: unknown field '" + key + "'");
        }
    }
    TrackingSchema schema;
    if (!j.contains("frame_col") || !j.at("frame_col").is_string()) {
        throw ParseError("tracking schema: missing string field 'frame_col'");
    }
    schema.frame_col = j.at("frame_col").get<std::string>();
    if (!j.contains("frame_rate_hz") || !j.at("frame_rate_hz").is_number()) {
        throw ParseError("tracking schema: missing numeric field 'frame_rate_hz'");
    }
    schema.frame_rate_hz = j.at("frame_rate_hz").get<double>();
    if (!(schema.frame_rate_hz > 0.0)) {
        throw ParseError("tracking schema: frame_rate_hz must be positive");
    }
    if (j.contains("pitch_length_m")) {
        schema.pitch_length_m = j.at("pitch_length_m").get<double>();
    }
    if (j.contains("pitch_width_m")) {
        schema.pitch_width_m = j.at("pitch_width_m").get<double>();
    }
    if (j.contains("normalized")) {
        schema.normalized = j.at("normalized").get<bool>();
    }
    if (j.contains("metrica_header")) {
        schema.metrica_header = j.at("metrica_header").get<bool>();
    }
    if (j.contains("players")) {
        if (!j.at("players").is_object()) {
            throw ParseError("tracking schema: 'players' must map id -> [x_col, y_col]");
        }
        for (const auto& [id, cols] : j.at("players").items()) {
            if (!cols.is_array() || cols.size() != 2) {
                throw ParseError("tracking schema: player '" + id +
                                 "' must map to [x_col, y_col]");
            }
            schema.players.emplace_back(
                id, std::make_pair(cols.at(0).get<std::string>(), cols.at(1).get<std::string>()));
        }
    }
    if (!schema.metrica_header && schema.players.empty()) {
        throw ParseError("tracking schema: no player columns declared");
    }
    return schema;
}

TrackingSchema load_tracking_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open schema file: " + path.string());
    }
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("invalid schema JSON in " + path.string() + ": " + e.what());
    }
    return schema_from_json(j);
}

namespace {

struct ColumnPlan {
    std::size_t frame_col = 0;
    // (player id, x column index, y column index)
    std::vector<std::tuple<std::string, std::size_t, std::size_t>> players;
    std::size_t header_rows = 1;
};

std::size_t find_column(const std::vector<std::string>& header, const std::string& name,
                        const char* what) {
    auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) {
        throw ParseError(std::string("tracking header: ") + what + " column '" + name +
                         "' not found");
    }
    return static_cast<std::size_t>(it - header.begin());
}

ColumnPlan plan_from_named_header(const std::vector<std::string>& header,
                                  const TrackingSchema& schema) {
    ColumnPlan plan;
    plan.frame_col = find_column(header, schema.frame_col, "frame");
    for (const auto& [id, cols] : schema.players) {
        const std::size_t xc = find_column(header, cols.first, "player x");
        const std::size_t yc = find_column(header, cols.second, "player y");
        plan.players.emplace_back(id, xc, yc);
    }
    return plan;
}

// Metrica raw tracking header: row 1 carries the team name above each x
// column, row 2 the jersey number, row 3 the column names ("Player11",
// blank for the y column, "Ball" for the ball pair).
ColumnPlan plan_from_metrica_header(const std::vector<std::string>& team_row,
                                    const std::vector<std::string>& jersey_row,
                                    const std::vector<std::string>& name_row,
                                    const TrackingSchema& schema) {
    ColumnPlan plan;
    plan.header_rows = 3;
    plan.frame_col = find_column(name_row, schema.frame_col, "frame");
    for (std::size_t i = 0; i < name_row.size(); ++i) {
        const std::string& name = name_row[i];
        if (name.empty() || name == "Ball") {
            continue;
        }
        if (name.rfind("Player", 0) != 0) {
            continue;
        }
        if (i + 1 >= name_row.size()) {
            throw ParseError("tracking header: player column '" + name + "' has no y column");
        }
        std::string team = i < team_row.size() ? team_row[i] : std::string();
        std::string jersey = i < jersey_row.size() ? jersey_row[i] : std::string();
        std::string id = !team.empty() && !jersey.empty() ? team + "_" + jersey : name;
        plan.players.emplace_back(std::move(id), i, i + 1);
    }
    if (plan.players.empty()) {
        throw ParseError("tracking header: no player columns found in Metrica header");
    }
    return plan;
}

}  // namespace

std::vector<PlayerTrack> parse_tracking(std::istream& source, const TrackingSchema& schema) {
    std::string line;
    ColumnPlan plan;
    std::size_t row_number = 0;

    if (schema.metrica_header) {
        std::string team_line;
        std::string jersey_line;
        std::string name_line;
        if (!read_line(source, team_line) || !read_line(source, jersey_line) ||
            !read_line(source, name_line)) {
            throw ParseError("tracking header: expected 3 Metrica header rows");
        }
        row_number = 3;
        plan = plan_from_metrica_header(split_csv_row(team_line), split_csv_row(jersey_line),
                                        split_csv_row(name_line), schema);
    } else {
        if (!read_line(source, line)) {
            throw ParseError("tracking header: empty input");
        }
        row_number = 1;
        plan = plan_from_named_header(split_csv_row(line), schema);
    }

    std::vector<PlayerTrack> tracks(plan.players.size());
    for (std::size_t p = 0; p < plan.players.size(); ++p) {
        tracks[p].player_id = std::get<0>(plan.players[p]);
        tracks[p].frame_rate_hz = schema.frame_rate_hz;
    }

    std::int64_t last_frame = 0;
    bool have_last_frame = false;
    while (read_line(source, line)) {
        ++row_number;
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> cells = split_csv_row(line);
        if (plan.frame_col >= cells.size()) {
            throw ParseError("row " + std::to_string(row_number) + ": missing frame column");
        }
        std::int64_t frame = 0;
        if (!try_parse_i64(cells[plan.frame_col], frame)) {
            throw ParseError("row " + std::to_string(row_number) + ": invalid frame value '" +
                             cells[plan.frame_col] + "'");
        }
        if (have_last_frame && frame <= last_frame) {
            throw ParseError("row " + std::to_string(row_number) +
                             ": frame indices must be strictly increasing");
        }
        last_frame = frame;
        have_last_frame = true;

        for (std::size_t p = 0; p < plan.players.size(); ++p) {
            const auto& [id, xc, yc] = plan.players[p];
            const std::string x_cell = xc < cells.size() ? cells[xc] : std::string();
            const std::string y_cell = yc < cells.size() ? cells[yc] : std::string();
            if (x_cell.empty() || y_cell.empty() || x_cell == "NaN" || y_cell == "NaN") {
                continue;  // gap at this frame
            }
            double x = 0.0;
            double y = 0.0;
            if (!try_parse_double(x_cell, x) || !try_parse_double(y_cell, y)) {
                throw ParseError("row " + std::to_string(row_number) +
                                 ": invalid coordinate for player '" + id + "'");
            }
            if (!std::isfinite(x) || !std::isfinite(y)) {
                throw ParseError("row " + std::to_string(row_number) +
                                 ": non-finite coordinate for player '" + id + "'");
            }
            Vec2 pos{x, y};
            if (schema.normalized) {
                pos.x *= schema.pitch_length_m;
                pos.y *= schema.pitch_width_m;
            }
            tracks[p].samples.push_back(TrackSample{frame, pos, std::nullopt});
        }
    }

    // Drop players that never appeared (e.g. substitutes absent from a half).
    std::vector<PlayerTrack> result;
    result.reserve(tracks.size());
    for (auto& t : tracks) {
        if (!t.samples.empty()) {
            result.push_back(std::move(t));
        }
    }
    return result;
}

std::vector<PlayerTrack> parse_tracking_file(const std::filesystem::path& path,
                                             const TrackingSchema& schema) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open tracking file: " + path.string());
    }
    return parse_tracking(in, schema);
}

PlayerTrack derive_velocities(PlayerTrack track) {
    if (!(track.frame_rate_hz > 0.0)) {
        throw std::invalid_argument("derive_velocities: frame rate must be known and positive");
    }
    const double half_rate = 0.5 * track.frame_rate_hz;  // 1 / (2 * frame period)
    auto& samples = track.samples;
    // Frames are strictly increasing, so neighbours in the vector are the
    // only candidates for frames f-1 and f+1.
    for (std::size_t i = 0; i < samples.size(); ++i) {
        samples[i].velocity.reset();
        if (i == 0 || i + 1 >= samples.size()) {
            continue;
        }
        const bool prev_adjacent = samples[i - 1].frame == samples[i].frame - 1;
        const bool next_adjacent = samples[i + 1].frame == samples[i].frame + 1;
        if (prev_adjacent && next_adjacent) {
            samples[i].velocity = (samples[i + 1].position - samples[i - 1].position) * half_rate;
        }
    }
    return track;
}

namespace {

std::int64_t frame_step_for(double dt, double frame_rate_hz) {
    const double step = dt * frame_rate_hz;
    const double rounded = std::round(step);
    if (!(dt > 0.0) || rounded < 1.0 || std::abs(step - rounded) > 1e-9) {
        throw std::invalid_argument(
            "extract_trails: dt must be a positive integer multiple of the frame period");
    }
    return static_cast<std::int64_t>(rounded);
}

struct Candidate {
    const PlayerTrack* track;
    std::size_t start_index;
    std::size_t target_index;
};

std::vector<Candidate> enumerate_candidates(const std::vector<PlayerTrack>& tracks, double dt) {
    std::vector<Candidate> candidates;
    for (const auto& track : tracks) {
        const std::int64_t step = frame_step_for(dt, track.frame_rate_hz);
        // Map frame -> sample index for the target lookup.
        std::map<std::int64_t, std::size_t> by_frame;
        for (std::size_t i = 0; i < track.samples.size(); ++i) {
            by_frame.emplace(track.samples[i].frame, i);
        }
        for (std::size_t i = 0; i < track.samples.size(); ++i) {
            if (!track.samples[i].velocity.has_value()) {
                continue;
            }
            auto it = by_frame.find(track.samples[i].frame + step);
            if (it == by_frame.end()) {
                continue;
            }
            candidates.push_back(Candidate{&track, i, it->second});
        }
    }
    return candidates;
}

}  // namespace

std::size_t count_trail_candidates(const std::vector<PlayerTrack>& tracks, double dt) {
    return enumerate_candidates(tracks, dt).size();
}

TrailSet extract_trails(const std::vector<PlayerTrack>& tracks, double dt, std::size_t n,
                        std::uint64_t seed) {
    if (n == 0) {
        throw std::invalid_argument("extract_trails: n must be at least 1");
    }
    const std::vector<Candidate> candidates = enumerate_candidates(tracks, dt);
    if (candidates.size() < n) {
        throw std::runtime_error("extract_trails: requested " + std::to_string(n) +
                                 " trails but only " + std::to_string(candidates.size()) +
                                 " candidates are available");
    }

    // Partial Fisher-Yates over candidate indices, then ascending order for
    // a stable, diff-friendly output.
    std::vector<std::size_t> indices(candidates.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        indices[i] = i;
    }
    SplitMix64 rng(seed);
    std::vector<std::size_t> chosen;
    chosen.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.next_index(indices.size() - i));
        std::swap(indices[i], indices[j]);
        chosen.push_back(indices[i]);
    }
    std::sort(chosen.begin(), chosen.end());

    TrailSet set;
    set.seed = seed;
    set.source = "tracks:" + std::to_string(tracks.size());
    set.trails.reserve(n);
    for (std::size_t idx : chosen) {
        const Candidate& c = candidates[idx];
        const TrackSample& start = c.track->samples[c.start_index];
        const TrackSample& target = c.track->samples[c.target_index];
        set.trails.push_back(Trail{start.position, *start.velocity, target.position, dt});
    }
    return set;
}

void write_trail_csv(const TrailSet& set, std::ostream& out) {
    out << "x0,y0,vx0,vy0,xt,yt,dt\n";
    for (const Trail& t : set.trails) {
        out << format_double(t.x0.x) << ',' << format_double(t.x0.y) << ','
            << format_double(t.v0.x) << ',' << format_double(t.v0.y) << ','
            << format_double(t.xt.x) << ',' << format_double(t.xt.y) << ','
            << format_double(t.dt) << '\n';
    }
}

TrailSet read_trail_csv(std::istream& in) {
    std::string line;
    if (!read_line(in, line)) {
        throw ParseError("trail csv: empty input");
    }
    std::string header = line;
    if (!header.empty() && header.back() == '\r') {
        header.pop_back();
    }
    if (header != "x0,y0,vx0,vy0,xt,yt,dt") {
        throw ParseError("trail csv: unexpected header '" + header + "'");
    }
    TrailSet set;
    std::size_t row_number = 1;
    while (read_line(in, line)) {
        ++row_number;
        if (line.empty()) {
            continue;
        }
        const auto cells = split_csv_row(line);
        if (cells.size() != 7) {
            throw ParseError("trail csv row " + std::to_string(row_number) +
                             ": expected 7 fields");
        }
        double v[7];
        for (std::size_t i = 0; i < 7; ++i) {
            if (!try_parse_double(cells[i], v[i])) {
                throw ParseError("trail csv row " + std::to_string(row_number) +
                                 ": invalid number '" + cells[i] + "'");
            }
        }
        set.trails.push_back(Trail{{v[0], v[1]}, {v[2], v[3]}, {v[4], v[5]}, v[6]});
    }
    return set;
}

void save_trail_set(const TrailSet& set, const std::filesystem::path& csv_path) {
    std::ofstream out(csv_path);
    if (!out) {
        throw std::runtime_error("cannot open for writing: " + csv_path.string());
    }
    write_trail_csv(set, out);
    out.close();

    nlohmann::ordered_json meta;
    meta["source"] = set.source;
    meta["seed"] = set.seed;
    meta["n_trails"] = set.trails.size();
    meta["dt"] = set.trails.empty() ? 0.0 : set.trails.front().dt;
    std::filesystem::path sidecar = csv_path;
    sidecar.replace_extension(".json");
    std::ofstream meta_out(sidecar);
    if (!meta_out) {
        throw std::runtime_error("cannot open for writing: " + sidecar.string());
    }
    meta_out << meta.dump(2) << '\n';
}

TrailSet load_trail_set(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) {
        throw std::runtime_error("cannot open trail csv: " + csv_path.string());
    }
    TrailSet set = read_trail_csv(in);
    std::filesystem::path sidecar = csv_path;
    sidecar.replace_extension(".json");
    if (std::filesystem::exists(sidecar)) {
        std::ifstream meta_in(sidecar);
        nlohmann::json meta;
        try {
            meta_in >> meta;
            set.source = meta.value("source", std::string());
            set.seed = meta.value("seed", std::uint64_t{0});
        } catch (const nlohmann::json::exception&) {
            // Sidecar is advisory; a broken one does not invalidate the data.
        }
    }
    return set;
}

}  // namespace reachset
