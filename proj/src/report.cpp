#include "tdcr/report.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace tdcr::report {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string svg_number(double v)
{
    return fmt::format("{:.2f}", v);
}

std::string escape(const std::string& text)
{
    std::string out;
    for (char c : text)
    {
        switch (c)
        {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Range
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v)
    {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    // Never degenerate; padded by 5 % on both ends.
    Range padded() const
    {
        double a = std::isfinite(lo) ? lo : 0.0;
        double b = std::isfinite(hi) ? hi : 1.0;
        if (b - a < 1e-12)
        {
            a -= 0.5 * std::max(1e-3, std::abs(a));
            b += 0.5 * std::max(1e-3, std::abs(b));
        }
        const double pad = 0.05 * (b - a);
        return {a - pad, b + pad};
    }
};

// One plotting panel placed at (x0, y0) within the document.
class Panel
{
public:
    Panel(double x0, double y0, double width, double height, Range xr, Range yr)
        : x0_(x0), y0_(y0), w_(width), h_(height), xr_(xr), yr_(yr)
    {
    }

    double px(double x) const { return x0_ + (x - xr_.lo) / (xr_.hi - xr_.lo) * w_; }
    double py(double y) const { return y0_ + h_ - (y - yr_.lo) / (yr_.hi - yr_.lo) * h_; }

    void axes(std::string& svg, const std::string& xlabel, const std::string& ylabel, const std::string& title) const
    {
        svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"#000\"/>\n",
                           svg_number(x0_), svg_number(y0_), svg_number(w_), svg_number(h_));
        for (int k = 0; k <= 4; ++k)
        {
            const double xv = xr_.lo + (xr_.hi - xr_.lo) * k / 4.0;
            const double yv = yr_.lo + (yr_.hi - yr_.lo) * k / 4.0;
            svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"middle\">{:.3g}</text>\n",
                               svg_number(px(xv)), svg_number(y0_ + h_ + 14), xv);
            svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"10\" text-anchor=\"end\">{:.4g}</text>\n",
                               svg_number(x0_ - 4), svg_number(py(yv) + 3), yv);
        }
        svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\">{}</text>\n",
                           svg_number(x0_ + w_ / 2), svg_number(y0_ + h_ + 32), escape(xlabel));
        svg += fmt::format(
            "<text x=\"{}\" y=\"{}\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 {} {})\">{}</text>\n",
            svg_number(x0_ - 44), svg_number(y0_ + h_ / 2), svg_number(x0_ - 44), svg_number(y0_ + h_ / 2),
            escape(ylabel));
        svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"13\" text-anchor=\"middle\">{}</text>\n",
                           svg_number(x0_ + w_ / 2), svg_number(y0_ - 8), escape(title));
    }

    template <class Points>
    void polyline(std::string& svg, const Points& pts, const char* color, double width = 1.5) const
    {
        svg += "<polyline fill=\"none\" stroke=\"";
        svg += color;
        svg += fmt::format("\" stroke-width=\"{}\" points=\"", width);
        for (const auto& [x, y] : pts)
            svg += svg_number(px(x)) + "," + svg_number(py(y)) + " ";
        svg += "\"/>\n";
    }

    void marker(std::string& svg, double x, double y, const char* color, bool filled) const
    {
        svg += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"3\" stroke=\"{}\" fill=\"{}\"/>\n", svg_number(px(x)),
                           svg_number(py(y)), color, filled ? color : "none");
    }

private:
    double x0_, y0_, w_, h_;
    Range xr_, yr_;
};

std::string svg_open(double width, double height)
{
    return fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" "
                       "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\">\n"
                       "<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n",
                       svg_number(width), svg_number(height));
}

std::string svg_title(double x, double y, const std::string& text)
{
    return fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"15\" text-anchor=\"middle\">{}</text>\n", svg_number(x),
                       svg_number(y), escape(text));
}

void legend(std::string& svg, double x, double y, const std::vector<std::pair<std::string, const char*>>& entries)
{
    for (std::size_t k = 0; k < entries.size(); ++k)
    {
        const double yk = y + 16.0 * static_cast<double>(k);
        svg += fmt::format("<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                           svg_number(x), svg_number(yk), svg_number(x + 18), svg_number(yk), entries[k].second);
        svg += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\">{}</text>\n", svg_number(x + 24),
                           svg_number(yk + 4), escape(entries[k].first));
    }
}

}  // namespace

std::string format_double(double value)
{
    return fmt::format("{:.17g}", value);
}

std::string solution_csv(const EquilibriumSolution& solution, const TendonForceSet& forces, const RobotParams& params)
{
    const int tendons = params.num_tendons();
    std::string out = "disk,beta,gamma,twist,x,y,z";
    for (int t = 1; t <= tendons; ++t)
        out += fmt::format(",tension_{}", t);
    out += "\n";

    const auto centers = shape_polyline(solution.config, params);
    for (std::size_t disk = 0; disk < centers.size(); ++disk)
    {
        const SubsegmentState state = disk == 0 ? SubsegmentState{} : solution.config.states[disk - 1];
        out += fmt::format("{},{},{},{},{},{},{}", disk, format_double(state.beta), format_double(state.gamma),
                           format_double(state.twist), format_double(centers[disk].x()),
                           format_double(centers[disk].y()), format_double(centers[disk].z()));
        // Tension just distal of the disk: the base tension at disk 0, zero past the anchor.
        for (int t = 0; t < tendons; ++t)
        {
            const auto& chords = solution.tensions.per_tendon[static_cast<std::size_t>(t)];
            const double tension = disk == 0             ? forces.base_tensions[static_cast<std::size_t>(t)]
                                   : disk < chords.size() ? chords[disk]
                                                          : 0.0;
            out += "," + format_double(tension);
        }
        out += "\n";
    }
    return out;
}

std::string workspace_csv(const std::vector<WorkspaceSample>& samples)
{
    const std::size_t tendons = samples.empty() ? 8 : samples.front().forces.base_tensions.size();
    std::string out = "sample_index";
    for (std::size_t t = 1; t <= tendons; ++t)
        out += fmt::format(",force_{}", t);
    out += ",tip_x,tip_y,tip_z,tip_norm,converged,residual\n";
    for (const auto& s : samples)
    {
        out += std::to_string(s.sample_index);
        for (double f : s.forces.base_tensions)
            out += "," + format_double(f);
        out += fmt::format(",{},{},{},{},{},{}\n", format_double(s.tip_position.x()), format_double(s.tip_position.y()),
                           format_double(s.tip_position.z()), format_double(s.tip_norm), s.converged ? 1 : 0,
                           format_double(s.residual_norm));
    }
    return out;
}

std::string shapes_csv(const std::vector<WorkspaceSample>& samples, const RobotParams& params)
{
    std::string out = "sample_index,disk,x,y,z\n";
    for (const auto& s : samples)
    {
        if (!s.converged)
            continue;
        const auto pts = shape_polyline(s.config, params);
        for (std::size_t d = 0; d < pts.size(); ++d)
            out += fmt::format("{},{},{},{},{}\n", s.sample_index, d, format_double(pts[d].x()),
                               format_double(pts[d].y()), format_double(pts[d].z()));
    }
    return out;
}

std::string history_csv(const GAResult& result)
{
    std::string out = "generation,best_objective,mean_objective\n";
    for (std::size_t g = 0; g < result.history.size(); ++g)
        out += fmt::format("{},{},{}\n", g + 1, format_double(result.history[g].best),
                           format_double(result.history[g].mean));
    return out;
}

std::string best_csv(const GAResult& result)
{
    std::string out;
    for (std::size_t t = 1; t <= result.best_forces.base_tensions.size(); ++t)
        out += fmt::format("force_{},", t);
    out += "tip_x,tip_y,tip_z,tip_norm,objective\n";
    for (double f : result.best_forces.base_tensions)
        out += format_double(f) + ",";
    const Vec3& tip = result.best_solution.tip_pose.translation;
    out += fmt::format("{},{},{},{},{}\n", format_double(tip.x()), format_double(tip.y()), format_double(tip.z()),
                       format_double(result.best_tip_norm), format_double(result.best_objective));
    return out;
}

std::string shape_svg(const std::vector<Polyline>& shapes, const std::string& title)
{
    Range horizontal, vertical;
    for (const auto& s : shapes)
        for (const auto& p : s.points)
        {
            horizontal.add(p.x());
            horizontal.add(p.y());
            vertical.add(p.z());
        }
    // Same scale on both axes so bending is not distorted.
    Range h = horizontal.padded(), v = vertical.padded();
    const double span = std::max(h.hi - h.lo, v.hi - v.lo);
    const double hc = 0.5 * (h.lo + h.hi), vc = 0.5 * (v.lo + v.hi);
    h = {hc - span / 2, hc + span / 2};
    v = {vc - span / 2, vc + span / 2};

    std::string svg = svg_open(900, 500);
    svg += svg_title(450, 22, title);
    const Panel xz(70, 60, 360, 360, h, v);
    const Panel yz(510, 60, 360, 360, h, v);
    xz.axes(svg, "x [m]", "z [m]", "x-z projection");
    yz.axes(svg, "y [m]", "z [m]", "y-z projection");
    for (std::size_t k = 0; k < shapes.size(); ++k)
    {
        const char* color = kPalette[k % std::size(kPalette)];
        std::vector<std::pair<double, double>> a, b;
        for (const auto& p : shapes[k].points)
        {
            a.emplace_back(p.x(), p.z());
            b.emplace_back(p.y(), p.z());
        }
        xz.polyline(svg, a, color);
        yz.polyline(svg, b, color);
        for (const auto& [x, z] : a)
            xz.marker(svg, x, z, color, true);
        for (const auto& [y, z] : b)
            yz.marker(svg, y, z, color, true);
    }
    svg += "</svg>\n";
    return svg;
}

std::string workspace_svg(const std::vector<WorkspaceSample>& samples, double reach)
{
    Range x, y;
    x.add(0.0);
    x.add(static_cast<double>(std::max<std::size_t>(samples.size(), 1)));
    y.add(reach);
    for (const auto& s : samples)
        y.add(s.tip_norm);

    std::string svg = svg_open(640, 480);
    const Panel panel(80, 50, 520, 360, x.padded(), y.padded());
    panel.axes(svg, "sample index", "|P_tip| [m]", "Feasible static workspace samples");
    panel.polyline(svg, std::vector<std::pair<double, double>>{{0.0, reach}, {x.hi, reach}}, "#999", 1.0);
    for (const auto& s : samples)
        panel.marker(svg, static_cast<double>(s.sample_index), s.tip_norm, "#1f77b4", s.converged);
    svg += "</svg>\n";
    return svg;
}

std::string convergence_svg(const GAResult& result, double reach)
{
    Range x, y;
    x.add(1.0);
    x.add(static_cast<double>(std::max<std::size_t>(result.history.size(), 2)));
    y.add(1.0 / reach);
    std::vector<std::pair<double, double>> best, mean;
    for (std::size_t g = 0; g < result.history.size(); ++g)
    {
        best.emplace_back(static_cast<double>(g + 1), result.history[g].best);
        mean.emplace_back(static_cast<double>(g + 1), result.history[g].mean);
        y.add(result.history[g].best);
        y.add(result.history[g].mean);
    }

    std::string svg = svg_open(640, 480);
    const Panel panel(80, 50, 520, 360, x.padded(), y.padded());
    panel.axes(svg, "generation", "1 / |P_tip| [1/m]", "Objective during optimization");
    panel.polyline(svg, best, "#1f77b4");
    panel.polyline(svg, mean, "#d62728");
    for (const auto& [g, v] : best)
        panel.marker(svg, g, v, "#1f77b4", true);
    for (const auto& [g, v] : mean)
        panel.marker(svg, g, v, "#d62728", true);
    legend(svg, 440, 70, {{"best", "#1f77b4"}, {"population mean", "#d62728"}});
    svg += "</svg>\n";
    return svg;
}

}  // namespace tdcr::report
