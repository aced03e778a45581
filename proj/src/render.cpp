#include "wardtrack/render.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wardtrack {

namespace {

constexpr double kScale = 80.0; // px per meter
constexpr double kMargin = 24.0;

const char* kPalette[] = {"#1f77b4", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#ff7f0e"};

// SVG y grows downward; the plan's y grows upward.
struct Mapper {
    double y_top, x0, y0;
    double x(double wx) const { return kMargin + (wx - x0) * kScale; }
    double y(double wy) const { return kMargin + (y_top - wy) * kScale; }
};

std::string fmt(double v) {
    std::ostringstream ss;
    ss << (std::abs(v) < 5e-3 ? 0.0 : std::round(v * 100.0) / 100.0);
    return ss.str();
}

void open_svg(std::ostringstream& ss, const Scene& scene, const Mapper& m,
              double extra_h) {
    double w = scene.grid.width * scene.grid.cell_size * kScale + 2 * kMargin;
    double h = scene.grid.height * scene.grid.cell_size * kScale + 2 * kMargin + extra_h;
    ss << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(w)
       << "\" height=\"" << fmt(h) << "\" viewBox=\"0 0 " << fmt(w) << " " << fmt(h)
       << "\">\n";
    ss << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    (void)m;
}

void draw_plan(std::ostringstream& ss, const Scene& scene, const Mapper& m) {
    for (const Segment& wall : scene.plan.walls)
        ss << "<line x1=\"" << fmt(m.x(wall.a.x)) << "\" y1=\"" << fmt(m.y(wall.a.y))
           << "\" x2=\"" << fmt(m.x(wall.b.x)) << "\" y2=\"" << fmt(m.y(wall.b.y))
           << "\" stroke=\"black\" stroke-width=\"3\"/>\n";
    for (const Door& d : scene.plan.doors)
        ss << "<line x1=\"" << fmt(m.x(d.segment.a.x)) << "\" y1=\""
           << fmt(m.y(d.segment.a.y)) << "\" x2=\"" << fmt(m.x(d.segment.b.x))
           << "\" y2=\"" << fmt(m.y(d.segment.b.y))
           << "\" stroke=\"#1f4fd6\" stroke-width=\"5\" stroke-dasharray=\"6 3\"/>\n";
    for (const Dispenser& d : scene.plan.dispensers)
        ss << "<rect x=\"" << fmt(m.x(d.pos.x) - 5) << "\" y=\"" << fmt(m.y(d.pos.y) - 5)
           << "\" width=\"10\" height=\"10\" fill=\"#ff8c00\"/>\n";
}

} // namespace

std::string render_tracks_svg(const Scene& scene,
                              const std::vector<LabeledTrack>& tracks) {
    Mapper m{scene.grid.origin.y + scene.grid.height * scene.grid.cell_size,
             scene.grid.origin.x, scene.grid.origin.y};
    std::ostringstream ss;
    open_svg(ss, scene, m, 20.0 + 14.0 * static_cast<double>(tracks.size()));
    draw_plan(ss, scene, m);

    double legend_y =
        scene.grid.height * scene.grid.cell_size * kScale + 2 * kMargin + 4.0;
    for (size_t i = 0; i < tracks.size(); ++i) {
        const LabeledTrack& tr = tracks[i];
        const char* color = kPalette[tr.id >= 0 ? tr.id % 10 : 0];
        if (!tr.points.empty()) {
            ss << "<polyline fill=\"none\" stroke=\"" << color
               << "\" stroke-width=\"1.5\" points=\"";
            for (const LabeledPoint& p : tr.points)
                ss << fmt(m.x(p.pos.x)) << "," << fmt(m.y(p.pos.y)) << " ";
            ss << "\"/>\n";
            for (const LabeledPoint& p : tr.points) {
                if (p.action.empty()) continue;
                bool wash = p.action == "washed";
                ss << "<circle cx=\"" << fmt(m.x(p.pos.x)) << "\" cy=\""
                   << fmt(m.y(p.pos.y)) << "\" r=\"5\" fill=\""
                   << (wash ? "#ff8c00" : "#1f4fd6") << "\"/>\n";
                ss << "<text x=\"" << fmt(m.x(p.pos.x) + 7) << "\" y=\""
                   << fmt(m.y(p.pos.y) - 4) << "\" font-size=\"10\" fill=\"#333\">"
                   << p.action << "</text>\n";
            }
        }
        ss << "<text x=\"" << fmt(kMargin) << "\" y=\""
           << fmt(legend_y + 14.0 * static_cast<double>(i) + 10.0)
           << "\" font-size=\"11\" fill=\"" << color << "\">track " << tr.id << " ("
           << tr.points.size() << " points)</text>\n";
    }
    ss << "</svg>\n";
    return ss.str();
}

std::vector<int> visit_counts(const GridSpec& grid,
                              const std::vector<LabeledTrack>& tracks) {
    std::vector<int> counts(static_cast<size_t>(grid.cell_count()), 0);
    for (const LabeledTrack& tr : tracks)
        for (const LabeledPoint& p : tr.points)
            if (grid.contains(p.pos)) ++counts[grid.linear(grid.world_to_cell(p.pos))];
    return counts;
}

std::string render_heatmap_svg(const Scene& scene,
                               const std::vector<LabeledTrack>& tracks) {
    std::vector<int> counts = visit_counts(scene.grid, tracks);
    int peak = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());

    Mapper m{scene.grid.origin.y + scene.grid.height * scene.grid.cell_size,
             scene.grid.origin.x, scene.grid.origin.y};
    std::ostringstream ss;
    open_svg(ss, scene, m, 24.0);
    double px_cell = scene.grid.cell_size * kScale;
    for (int iy = 0; iy < scene.grid.height; ++iy)
        for (int ix = 0; ix < scene.grid.width; ++ix) {
            int c = counts[static_cast<size_t>(iy * scene.grid.width + ix)];
            if (c == 0) continue;
            // white at zero to #ff8c00 at the peak count
            double f = peak > 0 ? static_cast<double>(c) / peak : 0.0;
            int r = 255;
            int g = static_cast<int>(std::lround(255.0 - f * (255.0 - 140.0)));
            int b = static_cast<int>(std::lround(255.0 - f * 255.0));
            Vec2 corner = scene.grid.cell_center({ix, iy});
            double x = m.x(corner.x - scene.grid.cell_size / 2);
            double y = m.y(corner.y + scene.grid.cell_size / 2);
            ss << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(y) << "\" width=\""
               << fmt(px_cell) << "\" height=\"" << fmt(px_cell) << "\" fill=\"rgb(" << r
               << "," << g << "," << b << ")\"/>\n";
        }
    draw_plan(ss, scene, m);
    double legend_y =
        scene.grid.height * scene.grid.cell_size * kScale + 2 * kMargin + 14.0;
    ss << "<text x=\"" << fmt(kMargin) << "\" y=\"" << fmt(legend_y)
       << "\" font-size=\"11\" fill=\"#333\">visits per cell: white = 0, full orange = "
       << peak << "</text>\n";
    ss << "</svg>\n";
    return ss.str();
}

} // namespace wardtrack
