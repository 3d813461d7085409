#include "reachset/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "reachset/numio.hpp"

namespace reachset {

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt_px(double v) {
    // Two decimals are plenty for pixel coordinates and keep files small.
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

std::string boundary_overlay_svg(const std::vector<std::pair<std::string, MotionModel>>& models,
                                 const OverlayConfig& cfg) {
    if (models.empty()) {
        throw std::invalid_argument("boundary_overlay_svg: no models given");
    }
    std::vector<Polygon> polys;
    polys.reserve(models.size());
    for (const auto& [label, model] : models) {
        polys.push_back(model.reachable_polygon(cfg.state, cfg.dt, cfg.n_vertices));
    }

    double min_x = cfg.state.x0.x;
    double max_x = cfg.state.x0.x;
    double min_y = cfg.state.x0.y;
    double max_y = cfg.state.x0.y;
    for (const Polygon& p : polys) {
        for (const Vec2& v : p.vertices) {
            min_x = std::min(min_x, v.x);
            max_x = std::max(max_x, v.x);
            min_y = std::min(min_y, v.y);
            max_y = std::max(max_y, v.y);
        }
    }
    const double pad = 0.08 * std::max(max_x - min_x, max_y - min_y) + 0.5;
    min_x -= pad;
    max_x += pad;
    min_y -= pad;
    max_y += pad;
    const double scale =
        std::min(cfg.width_px / (max_x - min_x), cfg.height_px / (max_y - min_y));
    auto to_px = [&](const Vec2& v) {
        // y axis flipped: SVG grows downwards.
        return std::make_pair((v.x - min_x) * scale, (max_y - v.y) * scale);
    };

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_px(cfg.width_px)
        << "\" height=\"" << fmt_px(cfg.height_px) << "\" viewBox=\"0 0 "
        << fmt_px((max_x - min_x) * scale) << ' ' << fmt_px((max_y - min_y) * scale) << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (std::size_t m = 0; m < models.size(); ++m) {
        const char* color = kPalette[m % 8];
        svg << "<polygon fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < polys[m].vertices.size(); ++i) {
            const auto [px, py] = to_px(polys[m].vertices[i]);
            if (i > 0) {
                svg << ' ';
            }
            svg << fmt_px(px) << ',' << fmt_px(py);
        }
        svg << "\"/>\n";
    }

    // Start position and velocity arrow.
    const auto [sx, sy] = to_px(cfg.state.x0);
    svg << "<circle cx=\"" << fmt_px(sx) << "\" cy=\"" << fmt_px(sy)
        << "\" r=\"3\" fill=\"black\"/>\n";
    const auto [vx, vy] = to_px(cfg.state.x0 + cfg.state.v0);
    svg << "<line x1=\"" << fmt_px(sx) << "\" y1=\"" << fmt_px(sy) << "\" x2=\"" << fmt_px(vx)
        << "\" y2=\"" << fmt_px(vy) << "\" stroke=\"black\" stroke-width=\"1.5\"/>\n";

    for (std::size_t m = 0; m < models.size(); ++m) {
        const double y = 18.0 + 16.0 * static_cast<double>(m);
        svg << "<rect x=\"10\" y=\"" << fmt_px(y - 9) << "\" width=\"12\" height=\"4\" fill=\""
            << kPalette[m % 8] << "\"/>\n"
            << "<text x=\"28\" y=\"" << fmt_px(y)
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << models[m].first
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

std::string score_chart_svg(const std::vector<ScoreBar>& bars) {
    if (bars.empty()) {
        throw std::invalid_argument("score_chart_svg: no entries given");
    }
    const double bar_h = 28.0;
    const double gap = 12.0;
    const double label_w = 170.0;
    const double plot_w = 420.0;
    const double height = 20.0 + static_cast<double>(bars.size()) * (bar_h + gap);
    double max_value = 0.0;
    for (const ScoreBar& b : bars) {
        max_value = std::max(max_value, b.score_inverse_m2);
    }
    if (max_value <= 0.0) {
        max_value = 1.0;
    }

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt_px(label_w + plot_w + 90)
        << "\" height=\"" << fmt_px(height) << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    for (std::size_t i = 0; i < bars.size(); ++i) {
        const double y = 10.0 + static_cast<double>(i) * (bar_h + gap);
        const double w = plot_w * bars[i].score_inverse_m2 / max_value;
        svg << "<text x=\"" << fmt_px(label_w - 8) << "\" y=\"" << fmt_px(y + bar_h * 0.65)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"13\">"
            << bars[i].label << "</text>\n"
            << "<rect x=\"" << fmt_px(label_w) << "\" y=\"" << fmt_px(y) << "\" width=\""
            << fmt_px(w) << "\" height=\"" << fmt_px(bar_h) << "\" fill=\"" << kPalette[i % 8]
            << "\"/>\n"
            << "<text x=\"" << fmt_px(label_w + w + 6) << "\" y=\"" << fmt_px(y + bar_h * 0.65)
            << "\" font-family=\"sans-serif\" font-size=\"13\">"
            << format_double(bars[i].score_inverse_m2) << " m^2</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace reachset
