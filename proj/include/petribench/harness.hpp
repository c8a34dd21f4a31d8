#pragma once
// Invocation-procedure harness: iterate tools x models x scaling values x
// examinations under time/memory confinement, abort a scaling series on
// the first confinement failure, and record per-run resource traces.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "petribench/modelgen.hpp"

namespace petribench {

struct harness_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Examination { StateSpace, StructuralFormulae, ReachabilityFormulae };

std::string examination_name(Examination e);
std::optional<Examination> parse_examination(std::string_view name);

enum class Verdict { OK, ConfinementTime, ConfinementMemory, ToolError,
                     NotCompeting };

std::string verdict_name(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view name);

struct Limits {
    std::uint64_t wall_seconds = 300;             // desk-scale defaults
    std::uint64_t memory_bytes = 2ull << 30;      // 2 GiB
    std::uint64_t sample_millis = 100;
};

struct TraceSample {
    double elapsed_seconds = 0.0;
    double cpu_seconds = 0.0;
    std::uint64_t memory_bytes = 0;
};

struct RunTrace {
    std::vector<TraceSample> samples;
};

// A contestant. The built-in adapter re-invokes this artifact's own CLI;
// external adapters are command templates with {model}, {formulae} and
// {examination} slots. Either way the payload is scraped from standard
// output: the first line starting with "STATE_SPACE " carries the count,
// "FORMULA_VECTOR " the result vector.
struct ToolAdapter {
    std::string name;
    bool builtin = true;
    std::string command_template;            // external tools only
    std::vector<Examination> examinations;   // empty = competes in all
    std::string count_marker = "STATE_SPACE ";
    std::string vector_marker = "FORMULA_VECTOR ";

    bool competes_in(Examination e) const;
};

// One scaling series: a generated family with parameter list, or an
// external list of PNML files (parameter = 1-based position).
struct SeriesSpec {
    std::string name;
    ModelFamilyId family = ModelFamilyId::Philosophers;
    bool is_family = true;
    std::vector<ModelParams> params;    // generated families
    std::vector<std::string> files;     // external series
};

struct ExaminationPlan {
    std::vector<ToolAdapter> tools;
    std::vector<SeriesSpec> families;
    std::vector<Examination> examinations;
    Limits limits;
    std::string output_dir = "bench-out";
    int formula_count = 16;       // sampled formulae per instance
    int workers = 1;
    // Binary providing the built-in adapter and the confined instance
    // materializer; empty = this process's own executable.
    std::string self_path;
};

struct RunRecord {
    std::string tool;
    std::string family;
    std::string params;
    Examination examination = Examination::StateSpace;
    Verdict verdict = Verdict::ToolError;
    std::optional<mpz_class> count;        // StateSpace payload
    std::optional<std::string> vector;     // formula payload
    double cpu_seconds = 0.0;
    std::uint64_t peak_memory_bytes = 0;
    RunTrace trace;
};

struct ConfineResult {
    Verdict verdict = Verdict::OK;   // OK / ConfinementTime /
                                     // ConfinementMemory / ToolError
    RunTrace trace;
    std::string output;              // captured stdout+stderr (capped)
    double cpu_seconds = 0.0;
    std::uint64_t peak_memory_bytes = 0;
    int exit_status = 0;
};

// Runs argv as a confined child process: wall-clock and resident-set
// limits enforced by polling every sample_millis, SIGKILL on breach.
// Sampling failures degrade the trace, never the run.
ConfineResult confine(const std::vector<std::string>& argv,
                      const Limits& limits);

// Plan file: '#' comments; `key = value` lines. Repeated keys: `tool`,
// `family`, `series`. See README for the full syntax.
ExaminationPlan parse_plan(const std::string& text);
ExaminationPlan parse_plan_file(const std::string& path);

// Algorithm-1 driver. Materializes PNML instances and sampled formula
// files under the plan's output directory, runs every series, persists
// per-series CSVs and trace sidecars incrementally, and finally merges
// results.csv. Within one (tool, family, examination) series the first
// confinement failure aborts the remaining parameters.
std::vector<RunRecord> run_examination(const ExaminationPlan& plan);

// "243" below 10^6; 4-significant-figure scientific ("2.546e6") beyond.
std::string format_count(const mpz_class& count);
std::optional<mpz_class> parse_count(const std::string& cell);

inline constexpr const char* kResultsCsvHeader =
    "tool,family,params,examination,verdict,count,vector,cpu_seconds,"
    "peak_memory_bytes";

void write_results_csv(const std::vector<RunRecord>& records,
                       const std::string& path);
std::vector<RunRecord> read_results_csv(const std::string& path);

}  // namespace petribench
