#pragma once
// Report layer: summary tables, scaling/execution charts, and the two
// radar-diagram families, rendered as byte-deterministic SVG plus a
// plain tabular .dat twin per chart.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "petribench/harness.hpp"

namespace petribench {

class report_error : public std::runtime_error {
public:
    explicit report_error(const std::string& what)
        : std::runtime_error(what) {}
};

// ------------------------------------------------------------- tables

enum class CellState { Nc, None, Some, Best, Max };
enum class NetType { PT, CN, NoneType };

std::string cell_state_name(CellState s);

struct SummaryCell {
    CellState state = CellState::Nc;
    std::optional<std::string> value;  // highest successful params text
    NetType net_type = NetType::NoneType;

    std::string text() const;  // "nc" | "none" | "some/20/PT" | ...
};

struct SummaryTable {
    Examination examination = Examination::StateSpace;
    std::vector<std::string> tools;     // row order
    std::vector<std::string> families;  // column order
    // cells[row * families.size() + column]
    std::vector<SummaryCell> cells;

    const SummaryCell& at(std::size_t tool, std::size_t family) const {
        return cells[tool * families.size() + family];
    }
};

// Records must all belong to one examination; mixed input throws.
SummaryTable summary_table(const std::vector<RunRecord>& records);

std::string format_summary_csv(const SummaryTable& table);

// ------------------------------------------------------------- charts

enum class ChartKind { Scaling, Execution, RadarByModel, RadarByTool };
enum class ChartScale { Linear, Log10 };

struct SeriesPoint {
    double x = 0.0;
    double y = 0.0;
};

struct ChartSeries {
    std::string label;
    std::vector<SeriesPoint> points;
};

struct RadarSlice {
    std::string label;
    bool present = false;    // anything to draw at all
    bool attempted = false;  // by-tool: inner circle filled
    double radius = 0.0;     // by-model: result radius in [0,1]
    double extent = 0.0;     // by-tool: handled/total in [0,1]
    // by-tool formula examinations: per-official-parameter
    // computed/total ratios in [0,1], official order
    std::vector<double> sub_ratios;
};

struct ChartSpec {
    ChartKind kind = ChartKind::Scaling;
    ChartScale scale = ChartScale::Linear;
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ChartSeries> series;  // Scaling / Execution
    std::vector<RadarSlice> slices;   // Radar*
};

enum class ScalingMetric { Cpu, Memory };

// One series per tool over its successful parameters; x is the scaling
// parameter (second value for two-value families), y the chosen metric.
// No successful record -> empty chart (series absent), not an error.
ChartSpec scaling_chart(const std::vector<RunRecord>& records,
                        const std::string& family, ScalingMetric metric);

// Two series (cpu, memory) against elapsed seconds.
ChartSpec execution_chart(const RunTrace& trace, const std::string& title);

// Ten fixed-position slices in canonical tool order (extended by record
// order for unknown tools); radius v/Vmax linear when Vmax < 100, else
// log10(v)/log10(Vmax); absent slice when the smallest parameter
// already failed.
ChartSpec radar_by_model(const std::vector<RunRecord>& records,
                         const std::string& family);

// One slice per family at its fixed position; inner circle filled iff
// attempted; outer extent handled/total; formula examinations add
// per-parameter subslice ratios.
ChartSpec radar_by_tool(const std::vector<RunRecord>& records,
                        const std::string& tool);

// Byte-deterministic renderings (all floats "%.6f").
std::string render_svg(const ChartSpec& chart);
std::string render_dat(const ChartSpec& chart);

// The paper's fixed tool order for radar slice positions.
const std::vector<std::string>& canonical_tool_order();

// Trace sidecar reader ("elapsed_seconds cpu_seconds memory_bytes").
RunTrace read_trace_file(const std::string& path);

// ------------------------------------------------------------- driver

struct ReportOptions {
    bool tables = true;
    bool scaling = true;
    bool execution = true;
    bool radar_model = true;
    bool radar_tool = true;
};

// Reads results.csv (+ traces/*.dat) from results_dir and writes
// summary_<examination>.csv, *.svg and *.dat into out_dir. Returns the
// list of files written (relative to out_dir), in write order.
std::vector<std::string> write_report(const std::string& results_dir,
                                      const std::string& out_dir,
                                      const ReportOptions& options = {});

}  // namespace petribench
