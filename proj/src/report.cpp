#include "petribench/report.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "petribench/modelgen.hpp"

namespace fs = std::filesystem;

namespace petribench {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::string sanitize(std::string_view s) {
    std::string out;
    for (char c : s)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                c == '-' || c == '.')
                   ? c
                   : '_';
    return out;
}

// Scaling value that gets plotted: the second parameter for two-value
// families, the sole parameter otherwise, a leading integer for
// file-backed series.
double plot_value(const std::string& family, const std::string& params) {
    const ModelFamily* fam = find_family(family);
    if (fam) {
        try {
            ModelParams p = ModelParams::parse(family, params);
            return static_cast<double>(p.w ? *p.w : p.n);
        } catch (const std::exception&) {
        }
    }
    double v = 0.0;
    std::size_t i = 0;
    while (i < params.size() &&
           std::isdigit(static_cast<unsigned char>(params[i]))) {
        v = v * 10.0 + (params[i] - '0');
        ++i;
    }
    return v;
}

// Official parameter texts for a series: the family's scaling list, or
// the distinct parameters seen in the records (first-seen order) for
// file-backed series.
std::vector<std::string> official_params(
    const std::vector<RunRecord>& records, const std::string& family) {
    const ModelFamily* fam = find_family(family);
    std::vector<std::string> out;
    if (fam) {
        for (const ModelParams& p : fam->official_parameters)
            out.push_back(p.text());
        return out;
    }
    for (const RunRecord& rec : records)
        if (rec.family == family && rec.params != "-" &&
            std::find(out.begin(), out.end(), rec.params) == out.end())
            out.push_back(rec.params);
    return out;
}

std::vector<std::string> tools_in_order(
    const std::vector<RunRecord>& records) {
    std::vector<std::string> out;
    for (const RunRecord& rec : records)
        if (std::find(out.begin(), out.end(), rec.tool) == out.end())
            out.push_back(rec.tool);
    return out;
}

std::vector<std::string> families_in_order(
    const std::vector<RunRecord>& records) {
    std::vector<std::string> seen;
    for (const RunRecord& rec : records)
        if (std::find(seen.begin(), seen.end(), rec.family) == seen.end())
            seen.push_back(rec.family);
    std::vector<std::string> out;
    for (const ModelFamily& fam : model_families())
        if (std::find(seen.begin(), seen.end(), fam.name) != seen.end())
            out.push_back(fam.name);
    for (const std::string& name : seen)
        if (std::find(out.begin(), out.end(), name) == out.end())
            out.push_back(name);
    return out;
}

int param_rank(const std::vector<std::string>& official,
               const std::string& params) {
    auto it = std::find(official.begin(), official.end(), params);
    if (it == official.end()) return -1;
    return static_cast<int>(it - official.begin());
}

}  // namespace

const std::vector<std::string>& canonical_tool_order() {
    static const std::vector<std::string> kOrder = {
        "AlPiNA", "Crocodile",     "Helena", "ITS-Tools", "LoLA-binstore",
        "LoLA-bloom", "Marcie", "Neco",   "PNXDD",     "Sara",
    };
    return kOrder;
}

// ------------------------------------------------------------- tables

std::string cell_state_name(CellState s) {
    switch (s) {
        case CellState::Nc: return "nc";
        case CellState::None: return "none";
        case CellState::Some: return "some";
        case CellState::Best: return "best";
        case CellState::Max: return "max";
    }
    return "nc";
}

std::string SummaryCell::text() const {
    std::string out = cell_state_name(state);
    if (value) out += "/" + *value;
    if (net_type != NetType::NoneType)
        out += net_type == NetType::PT ? "/PT" : "/CN";
    return out;
}

SummaryTable summary_table(const std::vector<RunRecord>& records) {
    SummaryTable table;
    if (records.empty()) return table;
    table.examination = records.front().examination;
    for (const RunRecord& rec : records)
        if (rec.examination != table.examination)
            throw report_error(
                "summary_table: records mix examinations (" +
                examination_name(table.examination) + " vs " +
                examination_name(rec.examination) + ")");
    table.tools = tools_in_order(records);
    table.families = families_in_order(records);
    table.cells.resize(table.tools.size() * table.families.size());

    for (std::size_t fi = 0; fi < table.families.size(); ++fi) {
        const std::string& family = table.families[fi];
        std::vector<std::string> official =
            official_params(records, family);

        // Highest successful rank per tool, to decide "best".
        std::map<std::string, int> top_rank;
        for (const RunRecord& rec : records)
            if (rec.family == family && rec.verdict == Verdict::OK) {
                int rank = param_rank(official, rec.params);
                auto it = top_rank.find(rec.tool);
                if (it == top_rank.end())
                    top_rank[rec.tool] = rank;
                else
                    it->second = std::max(it->second, rank);
            }
        int global_top = -1;
        for (const auto& [tool, rank] : top_rank)
            global_top = std::max(global_top, rank);

        for (std::size_t ti = 0; ti < table.tools.size(); ++ti) {
            const std::string& tool = table.tools[ti];
            bool any_record = false;
            bool any_attempt = false;
            std::set<std::string> succeeded;
            for (const RunRecord& rec : records) {
                if (rec.family != family || rec.tool != tool) continue;
                any_record = true;
                if (rec.verdict != Verdict::NotCompeting)
                    any_attempt = true;
                if (rec.verdict == Verdict::OK)
                    succeeded.insert(rec.params);
            }
            SummaryCell cell;
            if (!any_record || !any_attempt) {
                cell.state = CellState::Nc;
            } else if (succeeded.empty()) {
                cell.state = CellState::None;
            } else {
                bool all = !official.empty();
                for (const std::string& p : official)
                    if (!succeeded.count(p)) all = false;
                int rank = top_rank.count(tool) ? top_rank[tool] : -1;
                if (all)
                    cell.state = CellState::Max;
                else if (rank >= 0 && rank == global_top)
                    cell.state = CellState::Best;
                else
                    cell.state = CellState::Some;
                if (rank >= 0)
                    cell.value = official[rank];
                else
                    cell.value = *succeeded.rbegin();
                cell.net_type = NetType::PT;
            }
            table.cells[ti * table.families.size() + fi] = cell;
        }
    }
    return table;
}

std::string format_summary_csv(const SummaryTable& table) {
    std::ostringstream out;
    out << "tool";
    for (const std::string& family : table.families) out << ',' << family;
    out << '\n';
    for (std::size_t ti = 0; ti < table.tools.size(); ++ti) {
        out << table.tools[ti];
        for (std::size_t fi = 0; fi < table.families.size(); ++fi)
            out << ',' << table.at(ti, fi).text();
        out << '\n';
    }
    return out.str();
}

// ------------------------------------------------------------- charts

namespace {

double family_vmax(const std::vector<RunRecord>& records,
                   const std::string& family) {
    double vmax = 0.0;
    for (const std::string& p : official_params(records, family))
        vmax = std::max(vmax, plot_value(family, p));
    return vmax;
}

}  // namespace

ChartSpec scaling_chart(const std::vector<RunRecord>& records,
                        const std::string& family, ScalingMetric metric) {
    ChartSpec chart;
    chart.kind = ChartKind::Scaling;
    chart.title = family + " " +
                  (metric == ScalingMetric::Cpu ? "cpu" : "memory") +
                  " scaling";
    chart.x_label = "parameter";
    chart.y_label = metric == ScalingMetric::Cpu ? "cpu_seconds"
                                                 : "peak_memory_bytes";
    chart.scale = family_vmax(records, family) >= 100.0
                      ? ChartScale::Log10
                      : ChartScale::Linear;
    for (const std::string& tool : tools_in_order(records)) {
        ChartSeries series;
        series.label = tool;
        for (const RunRecord& rec : records) {
            if (rec.tool != tool || rec.family != family ||
                rec.verdict != Verdict::OK)
                continue;
            double y = metric == ScalingMetric::Cpu
                           ? rec.cpu_seconds
                           : static_cast<double>(rec.peak_memory_bytes);
            series.points.push_back({plot_value(family, rec.params), y});
        }
        std::stable_sort(series.points.begin(), series.points.end(),
                         [](const SeriesPoint& a, const SeriesPoint& b) {
                             return a.x < b.x;
                         });
        if (!series.points.empty()) chart.series.push_back(series);
    }
    return chart;
}

ChartSpec execution_chart(const RunTrace& trace,
                          const std::string& title) {
    ChartSpec chart;
    chart.kind = ChartKind::Execution;
    chart.title = title;
    chart.x_label = "elapsed_seconds";
    chart.y_label = "cpu_seconds / memory_bytes";
    ChartSeries cpu;
    cpu.label = "cpu";
    ChartSeries mem;
    mem.label = "memory";
    for (const TraceSample& s : trace.samples) {
        cpu.points.push_back({s.elapsed_seconds, s.cpu_seconds});
        mem.points.push_back(
            {s.elapsed_seconds, static_cast<double>(s.memory_bytes)});
    }
    chart.series.push_back(std::move(cpu));
    chart.series.push_back(std::move(mem));
    return chart;
}

ChartSpec radar_by_model(const std::vector<RunRecord>& records,
                         const std::string& family) {
    ChartSpec chart;
    chart.kind = ChartKind::RadarByModel;
    chart.title = family;
    double vmax = family_vmax(records, family);
    chart.scale =
        vmax >= 100.0 ? ChartScale::Log10 : ChartScale::Linear;

    std::vector<std::string> layout = canonical_tool_order();
    for (const std::string& tool : tools_in_order(records))
        if (std::find(layout.begin(), layout.end(), tool) == layout.end())
            layout.push_back(tool);

    for (const std::string& tool : layout) {
        RadarSlice slice;
        slice.label = tool;
        double best = 0.0;
        for (const RunRecord& rec : records)
            if (rec.tool == tool && rec.family == family &&
                rec.verdict == Verdict::OK)
                best = std::max(best, plot_value(family, rec.params));
        if (best > 0.0 && vmax > 0.0) {
            slice.present = true;
            slice.attempted = true;
            double r = chart.scale == ChartScale::Log10
                           ? std::log10(best) / std::log10(vmax)
                           : best / vmax;
            slice.radius = std::clamp(r, 0.0, 1.0);
        }
        chart.slices.push_back(std::move(slice));
    }
    return chart;
}

ChartSpec radar_by_tool(const std::vector<RunRecord>& records,
                        const std::string& tool) {
    ChartSpec chart;
    chart.kind = ChartKind::RadarByTool;
    chart.title = tool;

    bool formulae = false;
    for (const RunRecord& rec : records)
        if (rec.examination != Examination::StateSpace) formulae = true;

    for (const std::string& family : families_in_order(records)) {
        RadarSlice slice;
        slice.label = family;
        std::vector<std::string> official =
            official_params(records, family);
        std::set<std::string> handled;
        for (const RunRecord& rec : records) {
            if (rec.tool != tool || rec.family != family) continue;
            if (rec.verdict != Verdict::NotCompeting)
                slice.attempted = true;
            if (rec.verdict == Verdict::OK) handled.insert(rec.params);
        }
        if (!official.empty())
            slice.extent = static_cast<double>(handled.size()) /
                           static_cast<double>(official.size());
        slice.present = slice.attempted;
        if (formulae && slice.attempted) {
            for (const std::string& p : official) {
                double ratio = 0.0;
                for (const RunRecord& rec : records) {
                    if (rec.tool != tool || rec.family != family ||
                        rec.params != p ||
                        rec.verdict != Verdict::OK || !rec.vector)
                        continue;
                    double computed = 0.0;
                    for (char c : *rec.vector)
                        if (c == 'T' || c == 'F') computed += 1.0;
                    if (!rec.vector->empty())
                        ratio = computed /
                                static_cast<double>(rec.vector->size());
                }
                slice.sub_ratios.push_back(ratio);
            }
        }
        chart.slices.push_back(std::move(slice));
    }
    return chart;
}

// ---------------------------------------------------------- rendering

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
                          "#bcbd22", "#17becf"};

struct Range {
    double lo = 0.0;
    double hi = 1.0;
};

Range axis_range(double lo, double hi) {
    if (lo > hi) return {0.0, 1.0};
    if (lo == hi) {
        if (lo == 0.0) return {0.0, 1.0};
        return {0.0, hi > 0 ? hi : 0.0 + 1.0};
    }
    return {lo, hi};
}

double map_lin(double v, Range r, double px0, double px1) {
    if (r.hi == r.lo) return px0;
    return px0 + (v - r.lo) / (r.hi - r.lo) * (px1 - px0);
}

void render_line_chart(std::ostringstream& svg, const ChartSpec& chart) {
    const double kW = 640, kH = 480;
    const double kL = 70, kR = 610, kT = 50, kB = 430;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" "
           "height=\"480\" viewBox=\"0 0 640 480\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << fmt(kW) << "\" height=\""
        << fmt(kH) << "\" fill=\"white\"/>\n";
    svg << "<text x=\"320\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"monospace\" font-size=\"14\">"
        << chart.title << "</text>\n";

    bool logx = chart.scale == ChartScale::Log10;
    auto tx = [logx](double x) {
        return logx ? std::log10(std::max(x, 1.0)) : x;
    };
    double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
    bool first = true;
    for (const ChartSeries& s : chart.series)
        for (const SeriesPoint& p : s.points) {
            double x = tx(p.x);
            if (first) {
                xlo = xhi = x;
                ylo = yhi = p.y;
                first = false;
            } else {
                xlo = std::min(xlo, x);
                xhi = std::max(xhi, x);
                ylo = std::min(ylo, p.y);
                yhi = std::max(yhi, p.y);
            }
        }
    Range xr = axis_range(xlo, xhi);
    Range yr = axis_range(std::min(ylo, 0.0), yhi);

    svg << "<line x1=\"" << fmt(kL) << "\" y1=\"" << fmt(kB)
        << "\" x2=\"" << fmt(kR) << "\" y2=\"" << fmt(kB)
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << fmt(kL) << "\" y1=\"" << fmt(kT)
        << "\" x2=\"" << fmt(kL) << "\" y2=\"" << fmt(kB)
        << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"340\" y=\"462\" text-anchor=\"middle\" "
           "font-family=\"monospace\" font-size=\"12\">"
        << chart.x_label << (logx ? " (log10)" : "") << "</text>\n";
    svg << "<text x=\"16\" y=\"240\" font-family=\"monospace\" "
           "font-size=\"12\" transform=\"rotate(-90 16 240)\" "
           "text-anchor=\"middle\">"
        << chart.y_label << "</text>\n";
    svg << "<text x=\"" << fmt(kL) << "\" y=\"446\" "
           "font-family=\"monospace\" font-size=\"10\">"
        << fmt(xr.lo) << "</text>\n";
    svg << "<text x=\"" << fmt(kR) << "\" y=\"446\" text-anchor=\"end\" "
           "font-family=\"monospace\" font-size=\"10\">"
        << fmt(xr.hi) << "</text>\n";
    svg << "<text x=\"" << fmt(kL - 4) << "\" y=\"" << fmt(kB)
        << "\" text-anchor=\"end\" font-family=\"monospace\" "
           "font-size=\"10\">"
        << fmt(yr.lo) << "</text>\n";
    svg << "<text x=\"" << fmt(kL - 4) << "\" y=\"" << fmt(kT + 4)
        << "\" text-anchor=\"end\" font-family=\"monospace\" "
           "font-size=\"10\">"
        << fmt(yr.hi) << "</text>\n";

    if (chart.series.empty())
        svg << "<text x=\"320\" y=\"240\" text-anchor=\"middle\" "
               "font-family=\"monospace\" font-size=\"14\" "
               "fill=\"#888888\">no successful runs</text>\n";

    std::size_t ci = 0;
    for (const ChartSeries& s : chart.series) {
        const char* color = kPalette[ci % 10];
        if (s.points.size() == 1) {
            double px = map_lin(tx(s.points[0].x), xr, kL, kR);
            double py = map_lin(s.points[0].y, yr, kB, kT);
            svg << "<circle cx=\"" << fmt(px) << "\" cy=\"" << fmt(py)
                << "\" r=\"4.000000\" fill=\"" << color << "\"/>\n";
        } else if (!s.points.empty()) {
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"2\" points=\"";
            bool sep = false;
            for (const SeriesPoint& p : s.points) {
                if (sep) svg << ' ';
                sep = true;
                svg << fmt(map_lin(tx(p.x), xr, kL, kR)) << ','
                    << fmt(map_lin(p.y, yr, kB, kT));
            }
            svg << "\"/>\n";
        }
        svg << "<rect x=\"500\" y=\"" << fmt(56.0 + 18.0 * ci)
            << "\" width=\"12\" height=\"12\" fill=\"" << color
            << "\"/>\n";
        svg << "<text x=\"516\" y=\"" << fmt(66.0 + 18.0 * ci)
            << "\" font-family=\"monospace\" font-size=\"11\">" << s.label
            << "</text>\n";
        ++ci;
    }
    svg << "</svg>\n";
}

struct Polar {
    double cx = 300, cy = 300;
    double x(double angle, double radius) const {
        return cx + radius * std::cos(angle);
    }
    double y(double angle, double radius) const {
        return cy + radius * std::sin(angle);
    }
};

// Filled annular wedge [r0,r1] x [a0,a1] (radians).
void wedge(std::ostringstream& svg, const Polar& pol, double a0, double a1,
           double r0, double r1, const std::string& fill) {
    int large = (a1 - a0) > 3.14159265358979323846 ? 1 : 0;
    svg << "<path d=\"M " << fmt(pol.x(a0, r0)) << ' ' << fmt(pol.y(a0, r0))
        << " L " << fmt(pol.x(a0, r1)) << ' ' << fmt(pol.y(a0, r1))
        << " A " << fmt(r1) << ' ' << fmt(r1) << " 0 " << large << " 1 "
        << fmt(pol.x(a1, r1)) << ' ' << fmt(pol.y(a1, r1)) << " L "
        << fmt(pol.x(a1, r0)) << ' ' << fmt(pol.y(a1, r0)) << " A "
        << fmt(r0) << ' ' << fmt(r0) << " 0 " << large << " 0 "
        << fmt(pol.x(a0, r0)) << ' ' << fmt(pol.y(a0, r0))
        << " Z\" fill=\"" << fill << "\"/>\n";
}

void render_radar(std::ostringstream& svg, const ChartSpec& chart) {
    const double kPi = 3.14159265358979323846;
    const double kOuter = 250.0;
    const double kInner =
        chart.kind == ChartKind::RadarByTool ? 60.0 : 0.0;
    Polar pol;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"600\" "
           "height=\"600\" viewBox=\"0 0 600 600\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"600.000000\" "
           "height=\"600.000000\" fill=\"white\"/>\n";
    svg << "<text x=\"300\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"monospace\" font-size=\"14\">"
        << chart.title << "</text>\n";
    svg << "<circle cx=\"300\" cy=\"300\" r=\"" << fmt(kOuter)
        << "\" fill=\"none\" stroke=\"#444444\"/>\n";
    if (kInner > 0)
        svg << "<circle cx=\"300\" cy=\"300\" r=\"" << fmt(kInner)
            << "\" fill=\"none\" stroke=\"#444444\"/>\n";

    std::size_t n = chart.slices.size();
    if (n == 0) {
        svg << "</svg>\n";
        return;
    }
    double span = 2.0 * kPi / static_cast<double>(n);
    double gap = std::min(0.04, span / 8.0);
    for (std::size_t k = 0; k < n; ++k) {
        const RadarSlice& slice = chart.slices[k];
        double a0 = -kPi / 2.0 + span * static_cast<double>(k) + gap;
        double a1 = a0 + span - 2.0 * gap;
        double mid = (a0 + a1) / 2.0;
        const char* color = kPalette[k % 10];

        svg << "<line x1=\"300.000000\" y1=\"300.000000\" x2=\""
            << fmt(pol.x(a0 - gap, kOuter)) << "\" y2=\""
            << fmt(pol.y(a0 - gap, kOuter))
            << "\" stroke=\"#dddddd\"/>\n";

        if (chart.kind == ChartKind::RadarByModel) {
            if (slice.present) {
                wedge(svg, pol, a0, a1, 0.0, slice.radius * kOuter,
                      color);
                svg << "<circle cx=\"300\" cy=\"300\" r=\""
                    << fmt(slice.radius * kOuter)
                    << "\" fill=\"none\" stroke=\"" << color
                    << "\" stroke-dasharray=\"3 4\"/>\n";
            }
        } else {
            if (slice.attempted)
                wedge(svg, pol, a0, a1, kInner - 8.0, kInner, color);
            if (slice.present && slice.sub_ratios.empty() &&
                slice.extent > 0.0)
                wedge(svg, pol, a0, a1, kInner,
                      kInner + slice.extent * (kOuter - kInner), color);
            if (slice.present && !slice.sub_ratios.empty()) {
                std::size_t m = slice.sub_ratios.size();
                double band = (kOuter - kInner) / static_cast<double>(m);
                for (std::size_t p = 0; p < m; ++p) {
                    double ratio = slice.sub_ratios[p];
                    if (ratio <= 0.0) continue;
                    double aw = (a1 - a0) * ratio;
                    wedge(svg, pol, mid - aw / 2.0, mid + aw / 2.0,
                          kInner + band * static_cast<double>(p),
                          kInner + band * static_cast<double>(p + 1),
                          color);
                }
            }
        }
        double lx = pol.x(mid, kOuter + 18.0);
        double ly = pol.y(mid, kOuter + 18.0) + 4.0;
        svg << "<text x=\"" << fmt(lx) << "\" y=\"" << fmt(ly)
            << "\" text-anchor=\"middle\" font-family=\"monospace\" "
               "font-size=\"11\">"
            << slice.label << "</text>\n";
    }
    svg << "</svg>\n";
}

}  // namespace

std::string render_svg(const ChartSpec& chart) {
    std::ostringstream svg;
    if (chart.kind == ChartKind::RadarByModel ||
        chart.kind == ChartKind::RadarByTool)
        render_radar(svg, chart);
    else
        render_line_chart(svg, chart);
    return svg.str();
}

std::string render_dat(const ChartSpec& chart) {
    std::ostringstream out;
    const char* kind = "scaling";
    if (chart.kind == ChartKind::Execution) kind = "execution";
    if (chart.kind == ChartKind::RadarByModel) kind = "radar-model";
    if (chart.kind == ChartKind::RadarByTool) kind = "radar-tool";
    out << "# kind " << kind << '\n';
    out << "# scale "
        << (chart.scale == ChartScale::Log10 ? "log10" : "linear")
        << '\n';
    out << "# title " << chart.title << '\n';
    if (chart.kind == ChartKind::Scaling ||
        chart.kind == ChartKind::Execution) {
        if (chart.series.empty()) out << "# empty\n";
        for (const ChartSeries& s : chart.series) {
            out << "series " << s.label << '\n';
            for (const SeriesPoint& p : s.points)
                out << fmt(p.x) << ' ' << fmt(p.y) << '\n';
        }
    } else {
        for (const RadarSlice& s : chart.slices) {
            out << "slice " << s.label << ' ' << (s.present ? 1 : 0)
                << ' ' << (s.attempted ? 1 : 0) << ' ' << fmt(s.radius)
                << ' ' << fmt(s.extent);
            for (double r : s.sub_ratios) out << ' ' << fmt(r);
            out << '\n';
        }
    }
    return out.str();
}

RunTrace read_trace_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw report_error("cannot read trace file: " + path);
    RunTrace trace;
    std::string line;
    std::getline(in, line);  // header
    double elapsed = 0.0, cpu = 0.0;
    std::uint64_t mem = 0;
    while (in >> elapsed >> cpu >> mem)
        trace.samples.push_back({elapsed, cpu, mem});
    return trace;
}

// ------------------------------------------------------------- driver

namespace {

void write_file(const fs::path& path, const std::string& content,
                std::vector<std::string>& written,
                const fs::path& out_dir) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) throw report_error("cannot write " + path.string());
    written.push_back(fs::relative(path, out_dir).string());
}

}  // namespace

std::vector<std::string> write_report(const std::string& results_dir,
                                      const std::string& out_dir,
                                      const ReportOptions& options) {
    fs::path results(results_dir);
    fs::path out(out_dir);
    fs::create_directories(out);
    std::vector<RunRecord> all =
        read_results_csv((results / "results.csv").string());
    std::vector<std::string> written;

    std::vector<Examination> exams;
    for (const RunRecord& rec : all)
        if (std::find(exams.begin(), exams.end(), rec.examination) ==
            exams.end())
            exams.push_back(rec.examination);

    for (Examination exam : exams) {
        std::vector<RunRecord> records;
        for (const RunRecord& rec : all)
            if (rec.examination == exam) records.push_back(rec);
        std::string exam_tag = examination_name(exam);

        if (options.tables)
            write_file(out / ("summary_" + exam_tag + ".csv"),
                       format_summary_csv(summary_table(records)),
                       written, out);

        if (options.scaling)
            for (const std::string& family : families_in_order(records))
                for (ScalingMetric metric :
                     {ScalingMetric::Cpu, ScalingMetric::Memory}) {
                    ChartSpec chart =
                        scaling_chart(records, family, metric);
                    std::string stem =
                        "scaling_" + sanitize(family) + "_" + exam_tag +
                        (metric == ScalingMetric::Cpu ? "_cpu" : "_mem");
                    write_file(out / (stem + ".svg"), render_svg(chart),
                               written, out);
                    write_file(out / (stem + ".dat"), render_dat(chart),
                               written, out);
                }

        if (options.radar_model)
            for (const std::string& family :
                 families_in_order(records)) {
                ChartSpec chart = radar_by_model(records, family);
                std::string stem =
                    "radar_model_" + sanitize(family) + "_" + exam_tag;
                write_file(out / (stem + ".svg"), render_svg(chart),
                           written, out);
                write_file(out / (stem + ".dat"), render_dat(chart),
                           written, out);
            }

        if (options.radar_tool)
            for (const std::string& tool : tools_in_order(records)) {
                ChartSpec chart = radar_by_tool(records, tool);
                std::string stem =
                    "radar_tool_" + sanitize(tool) + "_" + exam_tag;
                write_file(out / (stem + ".svg"), render_svg(chart),
                           written, out);
                write_file(out / (stem + ".dat"), render_dat(chart),
                           written, out);
            }
    }

    if (options.execution) {
        fs::path traces = results / "traces";
        std::vector<fs::path> files;
        if (fs::is_directory(traces))
            for (const auto& entry : fs::directory_iterator(traces))
                if (entry.path().extension() == ".dat")
                    files.push_back(entry.path());
        std::sort(files.begin(), files.end());
        for (const fs::path& file : files) {
            RunTrace trace = read_trace_file(file.string());
            if (trace.samples.empty()) continue;
            std::string stem = "exec_" + file.stem().string();
            ChartSpec chart = execution_chart(trace, file.stem().string());
            write_file(out / (stem + ".svg"), render_svg(chart), written,
                       out);
            write_file(out / (stem + ".dat"), render_dat(chart), written,
                       out);
        }
    }
    return written;
}

}  // namespace petribench
