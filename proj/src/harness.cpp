#include "petribench/harness.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/resource.h>
#include <sys/time.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "petribench/formula.hpp"
#include "petribench/pnml.hpp"

namespace fs = std::filesystem;

namespace petribench {

namespace {

constexpr std::size_t kOutputCap = 1 << 20;  // captured child output cap

std::string trim(std::string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return std::string(s.substr(b, e - b));
}

std::vector<std::string> split_list(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            std::string item = trim(s.substr(start, i - start));
            if (!item.empty()) out.push_back(std::move(item));
            start = i + 1;
        }
    }
    return out;
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

std::uint64_t parse_u64(const std::string& s, const char* what) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw harness_error(std::string("bad integer for ") + what + ": '" +
                            s + "'");
    return v;
}

}  // namespace

std::string examination_name(Examination e) {
    switch (e) {
        case Examination::StateSpace: return "StateSpace";
        case Examination::StructuralFormulae: return "StructuralFormulae";
        case Examination::ReachabilityFormulae:
            return "ReachabilityFormulae";
    }
    return "StateSpace";
}

std::optional<Examination> parse_examination(std::string_view name) {
    if (name == "StateSpace") return Examination::StateSpace;
    if (name == "StructuralFormulae") return Examination::StructuralFormulae;
    if (name == "ReachabilityFormulae")
        return Examination::ReachabilityFormulae;
    return std::nullopt;
}

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::OK: return "OK";
        case Verdict::ConfinementTime: return "ConfinementTime";
        case Verdict::ConfinementMemory: return "ConfinementMemory";
        case Verdict::ToolError: return "ToolError";
        case Verdict::NotCompeting: return "NotCompeting";
    }
    return "ToolError";
}

std::optional<Verdict> parse_verdict(std::string_view name) {
    if (name == "OK") return Verdict::OK;
    if (name == "ConfinementTime") return Verdict::ConfinementTime;
    if (name == "ConfinementMemory") return Verdict::ConfinementMemory;
    if (name == "ToolError") return Verdict::ToolError;
    if (name == "NotCompeting") return Verdict::NotCompeting;
    return std::nullopt;
}

bool ToolAdapter::competes_in(Examination e) const {
    if (examinations.empty()) return true;
    return std::find(examinations.begin(), examinations.end(), e) !=
           examinations.end();
}

// ------------------------------------------------------------ counting

std::string format_count(const mpz_class& count) {
    if (count < 1'000'000) return count.get_str();
    std::string digits = count.get_str();
    int exponent = static_cast<int>(digits.size()) - 1;
    int mant = 0;
    for (int i = 0; i < 4; ++i) mant = mant * 10 + (digits[i] - '0');
    if (digits.size() > 4 && digits[4] >= '5') ++mant;
    if (mant == 10000) {
        mant = 1000;
        ++exponent;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%d.%03de%d", mant / 1000, mant % 1000,
                  exponent);
    return buf;
}

std::optional<mpz_class> parse_count(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    if (cell.find_first_not_of("0123456789") == std::string::npos)
        return mpz_class(cell);
    // a.bcdeK form
    std::size_t dot = cell.find('.');
    std::size_t e = cell.find('e');
    if (dot == std::string::npos || e == std::string::npos || e < dot)
        return std::nullopt;
    std::string intpart = cell.substr(0, dot);
    std::string frac = cell.substr(dot + 1, e - dot - 1);
    std::string exp = cell.substr(e + 1);
    if (intpart.empty() || frac.empty() || exp.empty()) return std::nullopt;
    for (const std::string* part : {&intpart, &frac, &exp})
        if (part->find_first_not_of("0123456789") != std::string::npos)
            return std::nullopt;
    long exponent = std::stol(exp);
    if (exponent < static_cast<long>(frac.size())) return std::nullopt;
    mpz_class mant(intpart + frac);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10,
                  static_cast<unsigned long>(exponent - frac.size()));
    return mant * scale;
}

// ------------------------------------------------------- confinement

namespace {

// utime+stime (seconds) and resident set (bytes); false when /proc is
// already gone. Failures degrade the trace, never the run.
bool read_proc_usage(pid_t pid, double& cpu_seconds,
                     std::uint64_t& rss_bytes) {
    static const long ticks = sysconf(_SC_CLK_TCK);
    static const long page = sysconf(_SC_PAGESIZE);
    {
        std::ifstream stat("/proc/" + std::to_string(pid) + "/stat");
        if (!stat) return false;
        std::string line;
        std::getline(stat, line);
        std::size_t rp = line.rfind(')');
        if (rp == std::string::npos) return false;
        std::istringstream rest(line.substr(rp + 2));
        std::string tok;
        for (int skip = 0; skip < 11; ++skip) rest >> tok;  // state..cmajflt
        unsigned long utime = 0;
        unsigned long stime = 0;
        rest >> utime >> stime;
        if (!rest) return false;
        cpu_seconds = static_cast<double>(utime + stime) /
                      static_cast<double>(ticks > 0 ? ticks : 100);
    }
    {
        std::ifstream statm("/proc/" + std::to_string(pid) + "/statm");
        if (!statm) return false;
        std::uint64_t size_pages = 0;
        std::uint64_t rss_pages = 0;
        statm >> size_pages >> rss_pages;
        if (!statm) return false;
        rss_bytes = rss_pages * static_cast<std::uint64_t>(page);
    }
    return true;
}

}  // namespace

ConfineResult confine(const std::vector<std::string>& argv,
                      const Limits& limits) {
    if (argv.empty()) throw harness_error("confine: empty command line");
    int pipefd[2];
    if (pipe(pipefd) != 0) throw harness_error("confine: pipe failed");

    pid_t pid = fork();
    if (pid < 0) {
        close(pipefd[0]);
        close(pipefd[1]);
        throw harness_error("confine: fork failed");
    }
    if (pid == 0) {
        setpgid(0, 0);  // own process group so breaches kill helpers too
        dup2(pipefd[1], STDOUT_FILENO);
        dup2(pipefd[1], STDERR_FILENO);
        close(pipefd[0]);
        close(pipefd[1]);
        std::vector<char*> cargv;
        cargv.reserve(argv.size() + 1);
        for (const std::string& a : argv)
            cargv.push_back(const_cast<char*>(a.c_str()));
        cargv.push_back(nullptr);
        execvp(cargv[0], cargv.data());
        _exit(127);
    }
    setpgid(pid, pid);  // parent side of the setpgid race; errors benign
    close(pipefd[1]);

    ConfineResult out;
    const auto t0 = std::chrono::steady_clock::now();
    auto elapsed_now = [&t0] {
        return std::chrono::duration<double>(
                   std::chrono::steady_clock::now() - t0)
            .count();
    };

    bool killed_time = false;
    bool killed_mem = false;
    double last_elapsed = -1.0;
    double last_cpu = 0.0;
    std::uint64_t last_rss = 0;

    auto take_sample = [&] {
        double cpu = last_cpu;
        std::uint64_t rss = last_rss;
        if (read_proc_usage(pid, cpu, rss)) {
            last_cpu = cpu;
            last_rss = rss;
        }
        double elapsed = elapsed_now();
        if (elapsed <= last_elapsed) return;  // keep strictly increasing
        last_elapsed = elapsed;
        out.trace.samples.push_back({elapsed, cpu, rss});
        out.peak_memory_bytes = std::max(out.peak_memory_bytes, rss);
    };
    auto kill_child = [&] {
        kill(-pid, SIGKILL);
        kill(pid, SIGKILL);
    };

    take_sample();  // every run carries at least one sample

    bool reaped = false;
    bool pipe_open = true;
    int status = 0;
    struct rusage ru {};
    double drain_deadline = -1.0;  // grandchildren may hold the pipe open
    while (!reaped ||
           (pipe_open && elapsed_now() < drain_deadline)) {
        if (pipe_open) {
            struct pollfd pfd {
                pipefd[0], POLLIN, 0
            };
            int pr = poll(&pfd, 1,
                          static_cast<int>(limits.sample_millis));
            if (pr > 0) {
                char buf[4096];
                ssize_t k = read(pipefd[0], buf, sizeof buf);
                if (k > 0) {
                    std::size_t room =
                        out.output.size() < kOutputCap
                            ? kOutputCap - out.output.size()
                            : 0;
                    out.output.append(
                        buf, std::min(static_cast<std::size_t>(k), room));
                } else {
                    pipe_open = false;
                }
            }
        } else {
            struct timespec ts {
                0, static_cast<long>(limits.sample_millis) * 1000000L
            };
            nanosleep(&ts, nullptr);
        }
        if (!reaped && wait4(pid, &status, WNOHANG, &ru) == pid) {
            reaped = true;
            drain_deadline = elapsed_now() + 0.25;
        }
        if (!reaped) {
            take_sample();
            if (!killed_time && !killed_mem) {
                if (last_elapsed >
                    static_cast<double>(limits.wall_seconds)) {
                    killed_time = true;
                    kill_child();
                } else if (last_rss > limits.memory_bytes) {
                    killed_mem = true;
                    kill_child();
                }
            }
        }
    }
    close(pipefd[0]);

    out.cpu_seconds =
        static_cast<double>(ru.ru_utime.tv_sec + ru.ru_stime.tv_sec) +
        static_cast<double>(ru.ru_utime.tv_usec + ru.ru_stime.tv_usec) /
            1e6;
    out.peak_memory_bytes =
        std::max(out.peak_memory_bytes,
                 static_cast<std::uint64_t>(ru.ru_maxrss) * 1024u);
    out.exit_status = status;
    if (killed_time)
        out.verdict = Verdict::ConfinementTime;
    else if (killed_mem)
        out.verdict = Verdict::ConfinementMemory;
    else if (WIFEXITED(status) && WEXITSTATUS(status) == 0)
        out.verdict = Verdict::OK;
    else
        out.verdict = Verdict::ToolError;
    return out;
}

// ------------------------------------------------------------- planning

namespace {

void validate_template(const std::string& tmpl) {
    std::size_t i = 0;
    bool has_model = false;
    while ((i = tmpl.find('{', i)) != std::string::npos) {
        std::size_t j = tmpl.find('}', i);
        if (j == std::string::npos)
            throw harness_error("unclosed slot in command template: " +
                                tmpl);
        std::string slot = tmpl.substr(i + 1, j - i - 1);
        if (slot == "model")
            has_model = true;
        else if (slot != "formulae" && slot != "examination")
            throw harness_error("unknown template slot {" + slot + "}");
        i = j + 1;
    }
    if (!has_model)
        throw harness_error("command template lacks the {model} slot: " +
                            tmpl);
}

ToolAdapter parse_tool_value(const std::string& value) {
    ToolAdapter tool;
    std::size_t pos = 0;
    while (pos < value.size() &&
           (std::isalnum(static_cast<unsigned char>(value[pos])) ||
            value[pos] == '_' || value[pos] == '-' || value[pos] == '.'))
        ++pos;
    tool.name = value.substr(0, pos);
    if (tool.name.empty())
        throw harness_error("tool entry needs a name: '" + value + "'");
    std::string rest = trim(value.substr(pos));
    if (!rest.empty() && rest.front() == '[') {
        std::size_t close = rest.find(']');
        if (close == std::string::npos)
            throw harness_error("unclosed examination list for tool " +
                                tool.name);
        for (const std::string& item :
             split_list(rest.substr(1, close - 1), ',')) {
            auto e = parse_examination(item);
            if (!e)
                throw harness_error("unknown examination '" + item +
                                    "' for tool " + tool.name);
            tool.examinations.push_back(*e);
        }
        rest = trim(rest.substr(close + 1));
    }
    if (!rest.empty() && rest.front() == ':') {
        tool.builtin = false;
        tool.command_template = trim(rest.substr(1));
        if (tool.command_template.empty())
            throw harness_error("empty command template for tool " +
                                tool.name);
        validate_template(tool.command_template);
        if (tool.name == "builtin")
            throw harness_error(
                "the name 'builtin' is reserved for the built-in adapter");
    } else if (!rest.empty()) {
        throw harness_error("malformed tool entry: '" + value + "'");
    } else if (tool.name != "builtin") {
        throw harness_error("external tool " + tool.name +
                            " needs a ': <command template>' part");
    }
    return tool;
}

SeriesSpec parse_family_value(const std::string& value) {
    SeriesSpec series;
    series.is_family = true;
    std::size_t colon = value.find(':');
    std::string name = trim(value.substr(0, colon));
    const ModelFamily* fam = find_family(name);
    if (!fam) throw harness_error("unknown model family: '" + name + "'");
    series.name = fam->name;
    series.family = fam->id;
    if (colon == std::string::npos) {
        series.params = fam->official_parameters;
    } else {
        for (const std::string& item :
             split_list(value.substr(colon + 1), ','))
            series.params.push_back(ModelParams::parse(fam->name, item));
        if (series.params.empty())
            throw harness_error("family " + name +
                                " lists no parameters");
    }
    return series;
}

SeriesSpec parse_series_value(const std::string& value) {
    SeriesSpec series;
    series.is_family = false;
    std::size_t colon = value.find(':');
    if (colon == std::string::npos)
        throw harness_error("series entry needs 'name: file, ...': '" +
                            value + "'");
    series.name = trim(value.substr(0, colon));
    if (series.name.empty() || find_family(series.name))
        throw harness_error("series name invalid or shadows a family: '" +
                            series.name + "'");
    series.files = split_list(value.substr(colon + 1), ',');
    if (series.files.empty())
        throw harness_error("series " + series.name + " lists no files");
    for (std::size_t i = 0; i < series.files.size(); ++i)
        series.params.push_back({i + 1, std::nullopt});
    return series;
}

}  // namespace

ExaminationPlan parse_plan(const std::string& text) {
    ExaminationPlan plan;
    bool have_exams = false;
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw harness_error("plan line " + std::to_string(lineno) +
                                ": expected 'key = value'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key == "tool") {
            plan.tools.push_back(parse_tool_value(value));
        } else if (key == "family") {
            plan.families.push_back(parse_family_value(value));
        } else if (key == "series") {
            plan.families.push_back(parse_series_value(value));
        } else if (key == "examinations") {
            have_exams = true;
            plan.examinations.clear();
            for (const std::string& item : split_list(value, ',')) {
                auto e = parse_examination(item);
                if (!e)
                    throw harness_error("unknown examination '" + item +
                                        "'");
                plan.examinations.push_back(*e);
            }
        } else if (key == "wall_seconds") {
            plan.limits.wall_seconds = parse_u64(value, "wall_seconds");
        } else if (key == "memory_bytes") {
            plan.limits.memory_bytes = parse_u64(value, "memory_bytes");
        } else if (key == "sample_millis") {
            plan.limits.sample_millis = parse_u64(value, "sample_millis");
        } else if (key == "formula_count") {
            plan.formula_count =
                static_cast<int>(parse_u64(value, "formula_count"));
        } else if (key == "workers") {
            plan.workers = static_cast<int>(parse_u64(value, "workers"));
        } else if (key == "output_dir") {
            plan.output_dir = value;
        } else {
            throw harness_error("plan line " + std::to_string(lineno) +
                                ": unknown key '" + key + "'");
        }
    }
    if (!have_exams && plan.examinations.empty())
        plan.examinations = {Examination::StateSpace};
    return plan;
}

ExaminationPlan parse_plan_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw harness_error("cannot open plan file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_plan(buf.str());
}

// ------------------------------------------------------------ execution

namespace {

void validate_plan(const ExaminationPlan& plan) {
    if (plan.tools.empty()) throw harness_error("plan lists no tools");
    if (plan.families.empty())
        throw harness_error("plan lists no families");
    if (plan.examinations.empty())
        throw harness_error("plan lists no examinations");
    if (plan.limits.wall_seconds < 1 || plan.limits.memory_bytes < 1 ||
        plan.limits.sample_millis < 1)
        throw harness_error("limits must all be >= 1");
    if (plan.formula_count < 1)
        throw harness_error("formula_count must be >= 1");
    if (plan.workers < 1) throw harness_error("workers must be >= 1");
}

std::string self_exe_path(const ExaminationPlan& plan) {
    if (!plan.self_path.empty()) return plan.self_path;
    std::error_code ec;
    fs::path p = fs::read_symlink("/proc/self/exe", ec);
    if (ec)
        throw harness_error(
            "cannot resolve /proc/self/exe for the built-in adapter");
    return p.string();
}

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

FormulaCategory category_of(Examination e) {
    return e == Examination::StructuralFormulae
               ? FormulaCategory::Structural
               : FormulaCategory::Reachability;
}

// Shared, memoized instance materialization. Generation and PNML
// writing run inside a confined child so oversized instances surface as
// confinement verdicts in every series that needs them, instead of
// taking the harness down.
class Materializer {
public:
    Materializer(const ExaminationPlan& plan, std::string self)
        : plan_(plan), self_(std::move(self)) {}

    struct Outcome {
        std::optional<std::string> path;  // present on success
        Verdict verdict = Verdict::OK;
        double cpu_seconds = 0.0;
        std::uint64_t peak_memory_bytes = 0;
        RunTrace trace;
    };

    // Instance PNML for a generated family (external files pass through).
    const Outcome& instance(const SeriesSpec& series,
                            const ModelParams& params,
                            std::size_t param_index) {
        std::string key = series.name + "/" + params.text();
        std::lock_guard<std::mutex> lock(mu_);
        auto it = instances_.find(key);
        if (it != instances_.end()) return it->second;
        Outcome out;
        if (!series.is_family) {
            out.path = series.files[param_index];
            if (!fs::exists(*out.path)) {
                out.path.reset();
                out.verdict = Verdict::ToolError;
            }
        } else {
            fs::path path = fs::path(plan_.output_dir) / "models" /
                            (sanitize(series.name) + "_" +
                             sanitize(params.text()) + ".pnml");
            ConfineResult r = confine(
                {self_, "_materialize", "--family", series.name, "--param",
                 params.text(), "--out", path.string()},
                plan_.limits);
            out.verdict = r.verdict;
            out.cpu_seconds = r.cpu_seconds;
            out.peak_memory_bytes = r.peak_memory_bytes;
            out.trace = std::move(r.trace);
            if (r.verdict == Verdict::OK) out.path = path.string();
        }
        return instances_.emplace(key, std::move(out)).first->second;
    }

    // Sampled formula file for (instance, category); the same file is
    // served to every tool, as the contest did.
    const Outcome& formulae(const SeriesSpec& series,
                            const ModelParams& params, Examination exam,
                            const std::string& model_path) {
        std::string key = series.name + "/" + params.text() + "/" +
                          examination_name(exam);
        std::lock_guard<std::mutex> lock(mu_);
        auto it = formulae_.find(key);
        if (it != formulae_.end()) return it->second;
        Outcome out;
        fs::path path = fs::path(plan_.output_dir) / "formulae" /
                        (sanitize(series.name) + "_" +
                         sanitize(params.text()) + "_" +
                         examination_name(exam) + ".txt");
        try {
            PetriNet net = parse_pnml_file(model_path);
            FormulaSet set = sample_formulae(
                net, category_of(exam), fnv1a(key),
                plan_.formula_count);
            std::ofstream file(path);
            file << format_formulae(set);
            if (!file) throw harness_error("cannot write " + path.string());
            out.path = path.string();
        } catch (const std::exception&) {
            out.verdict = Verdict::ToolError;
        }
        return formulae_.emplace(key, std::move(out)).first->second;
    }

private:
    const ExaminationPlan& plan_;
    std::string self_;
    std::mutex mu_;
    std::map<std::string, Outcome> instances_;
    std::map<std::string, Outcome> formulae_;
};

std::vector<std::string> substitute_template(const std::string& tmpl,
                                             const std::string& model,
                                             const std::string& formulae,
                                             const std::string& exam) {
    std::vector<std::string> argv;
    std::istringstream tokens(tmpl);
    std::string token;
    while (tokens >> token) {
        auto replace_all = [&token](const std::string& slot,
                                    const std::string& value) {
            std::size_t i = 0;
            while ((i = token.find(slot, i)) != std::string::npos) {
                token.replace(i, slot.size(), value);
                i += value.size();
            }
        };
        replace_all("{model}", model);
        replace_all("{formulae}", formulae);
        replace_all("{examination}", exam);
        argv.push_back(token);
    }
    return argv;
}

std::optional<std::string> scrape_marker(const std::string& output,
                                         const std::string& marker) {
    std::size_t pos = 0;
    while (pos <= output.size()) {
        std::size_t eol = output.find('\n', pos);
        std::string_view line(output.data() + pos,
                              (eol == std::string::npos ? output.size()
                                                        : eol) -
                                  pos);
        if (line.substr(0, marker.size()) == marker)
            return trim(line.substr(marker.size()));
        if (eol == std::string::npos) break;
        pos = eol + 1;
    }
    return std::nullopt;
}

void write_trace_file(const fs::path& path, const RunTrace& trace) {
    std::ofstream out(path);
    out << "elapsed_seconds cpu_seconds memory_bytes\n";
    char buf[96];
    for (const TraceSample& s : trace.samples) {
        std::snprintf(buf, sizeof buf, "%.6f %.6f %llu\n",
                      s.elapsed_seconds, s.cpu_seconds,
                      static_cast<unsigned long long>(s.memory_bytes));
        out << buf;
    }
}

void append_record_csv(std::ofstream& out, const RunRecord& rec) {
    char cpu[32];
    std::snprintf(cpu, sizeof cpu, "%.6f", rec.cpu_seconds);
    out << rec.tool << ',' << rec.family << ',' << rec.params << ','
        << examination_name(rec.examination) << ','
        << verdict_name(rec.verdict) << ','
        << (rec.count ? format_count(*rec.count) : "") << ','
        << (rec.vector ? *rec.vector : "") << ',' << cpu << ','
        << rec.peak_memory_bytes << '\n';
    out.flush();
}

// One (tool, family, examination) series: parameters in official order,
// aborted after the first confinement failure (Algorithm 1's
// "continue to next model").
std::vector<RunRecord> run_series(const ExaminationPlan& plan,
                                  const ToolAdapter& tool,
                                  const SeriesSpec& series,
                                  Examination exam, Materializer& mat,
                                  const std::string& self) {
    std::vector<RunRecord> records;
    fs::path runs_dir = fs::path(plan.output_dir) / "runs";
    fs::path traces_dir = fs::path(plan.output_dir) / "traces";
    std::ofstream series_csv(runs_dir /
                             (sanitize(tool.name) + "_" +
                              sanitize(series.name) + "_" +
                              examination_name(exam) + ".csv"));
    series_csv << kResultsCsvHeader << '\n';

    for (std::size_t pi = 0; pi < series.params.size(); ++pi) {
        const ModelParams& params = series.params[pi];
        RunRecord rec;
        rec.tool = tool.name;
        rec.family = series.name;
        rec.params = params.text();
        rec.examination = exam;

        const Materializer::Outcome& inst =
            mat.instance(series, params, pi);
        std::string formulae_path;
        bool ready = inst.path.has_value();
        if (ready && exam != Examination::StateSpace) {
            const Materializer::Outcome& ff =
                mat.formulae(series, params, exam, *inst.path);
            if (ff.path)
                formulae_path = *ff.path;
            else
                ready = false;
        }

        if (!ready) {
            // The instance (or its formula file) could not be produced
            // under the plan's limits; the series inherits the verdict.
            rec.verdict = inst.path ? Verdict::ToolError : inst.verdict;
            rec.cpu_seconds = inst.cpu_seconds;
            rec.peak_memory_bytes = inst.peak_memory_bytes;
            rec.trace = inst.trace;
        } else {
            std::vector<std::string> argv;
            if (tool.builtin) {
                argv = {self,      "_exam",
                        "--model", *inst.path,
                        "--examination", examination_name(exam)};
                if (exam != Examination::StateSpace) {
                    double budget =
                        0.9 * static_cast<double>(plan.limits.wall_seconds);
                    char buf[32];
                    std::snprintf(buf, sizeof buf, "%.3f", budget);
                    argv.insert(argv.end(), {"--formulae", formulae_path,
                                             "--timeout", buf});
                }
            } else {
                argv = substitute_template(tool.command_template,
                                           *inst.path, formulae_path,
                                           examination_name(exam));
            }
            ConfineResult r = confine(argv, plan.limits);
            rec.verdict = r.verdict;
            rec.cpu_seconds = r.cpu_seconds;
            rec.peak_memory_bytes = r.peak_memory_bytes;
            rec.trace = std::move(r.trace);
            if (r.verdict == Verdict::OK) {
                if (exam == Examination::StateSpace) {
                    auto cell = scrape_marker(r.output, tool.count_marker);
                    auto value =
                        cell ? parse_count(*cell) : std::nullopt;
                    if (value)
                        rec.count = std::move(*value);
                    else
                        rec.verdict = Verdict::ToolError;
                } else {
                    auto cell =
                        scrape_marker(r.output, tool.vector_marker);
                    if (cell && !cell->empty() &&
                        cell->find_first_not_of("TF.") ==
                            std::string::npos)
                        rec.vector = std::move(*cell);
                    else
                        rec.verdict = Verdict::ToolError;
                }
            }
        }

        write_trace_file(
            traces_dir / (sanitize(tool.name) + "_" +
                          sanitize(series.name) + "_" +
                          sanitize(params.text()) + "_" +
                          examination_name(exam) + ".dat"),
            rec.trace);
        append_record_csv(series_csv, rec);
        bool confinement = rec.verdict == Verdict::ConfinementTime ||
                           rec.verdict == Verdict::ConfinementMemory;
        records.push_back(std::move(rec));
        if (confinement) break;  // abort rule: skip remaining parameters
    }
    return records;
}

}  // namespace

std::vector<RunRecord> run_examination(const ExaminationPlan& plan) {
    validate_plan(plan);
    const std::string self = self_exe_path(plan);

    fs::create_directories(fs::path(plan.output_dir) / "models");
    fs::create_directories(fs::path(plan.output_dir) / "formulae");
    fs::create_directories(fs::path(plan.output_dir) / "runs");
    fs::create_directories(fs::path(plan.output_dir) / "traces");

    Materializer mat(plan, self);

    struct SeriesJob {
        const ToolAdapter* tool;
        const SeriesSpec* series;
        Examination exam;
        bool competing;
    };
    std::vector<SeriesJob> jobs;
    for (const ToolAdapter& tool : plan.tools)
        for (const SeriesSpec& series : plan.families)
            for (Examination exam : plan.examinations)
                jobs.push_back(
                    {&tool, &series, exam, tool.competes_in(exam)});

    std::vector<std::vector<RunRecord>> results(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            const SeriesJob& job = jobs[i];
            if (!job.competing) {
                RunRecord rec;
                rec.tool = job.tool->name;
                rec.family = job.series->name;
                rec.params = "-";
                rec.examination = job.exam;
                rec.verdict = Verdict::NotCompeting;
                results[i].push_back(std::move(rec));
                continue;
            }
            results[i] = run_series(plan, *job.tool, *job.series, job.exam,
                                    mat, self);
        }
    };
    int workers = std::min<int>(plan.workers,
                                static_cast<int>(jobs.size()) + 1);
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (std::thread& t : pool) t.join();

    // Deterministic merge: tools x families, parameters outer,
    // examinations inner; NotCompeting markers after the family block.
    std::vector<RunRecord> merged;
    std::size_t job_index = 0;
    for (std::size_t ti = 0; ti < plan.tools.size(); ++ti)
        for (std::size_t fi = 0; fi < plan.families.size(); ++fi) {
            std::size_t base = job_index;
            job_index += plan.examinations.size();
            const SeriesSpec& series = plan.families[fi];
            for (std::size_t pi = 0; pi < series.params.size(); ++pi) {
                const std::string params_text = series.params[pi].text();
                for (std::size_t ei = 0; ei < plan.examinations.size();
                     ++ei)
                    for (const RunRecord& rec : results[base + ei])
                        if (rec.params == params_text)
                            merged.push_back(rec);
            }
            for (std::size_t ei = 0; ei < plan.examinations.size(); ++ei)
                for (const RunRecord& rec : results[base + ei])
                    if (rec.params == "-") merged.push_back(rec);
        }

    write_results_csv(merged,
                      (fs::path(plan.output_dir) / "results.csv").string());
    return merged;
}

// ------------------------------------------------------------------ CSV

void write_results_csv(const std::vector<RunRecord>& records,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw harness_error("cannot write " + path);
    out << kResultsCsvHeader << '\n';
    for (const RunRecord& rec : records) append_record_csv(out, rec);
    if (!out) throw harness_error("write failed: " + path);
}

std::vector<RunRecord> read_results_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw harness_error("cannot read " + path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != kResultsCsvHeader)
        throw harness_error("unexpected results header in " + path);
    std::vector<RunRecord> records;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<std::string> cells;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= line.size(); ++i)
            if (i == line.size() || line[i] == ',') {
                cells.push_back(line.substr(start, i - start));
                start = i + 1;
            }
        if (cells.size() != 9)
            throw harness_error(path + " line " + std::to_string(lineno) +
                                ": expected 9 cells");
        RunRecord rec;
        rec.tool = cells[0];
        rec.family = cells[1];
        rec.params = cells[2];
        auto exam = parse_examination(cells[3]);
        auto verdict = parse_verdict(cells[4]);
        if (!exam || !verdict)
            throw harness_error(path + " line " + std::to_string(lineno) +
                                ": bad examination or verdict");
        rec.examination = *exam;
        rec.verdict = *verdict;
        rec.count = parse_count(cells[5]);
        if (!cells[6].empty()) rec.vector = cells[6];
        rec.cpu_seconds = std::stod(cells[7]);
        rec.peak_memory_bytes = parse_u64(cells[8], "peak_memory_bytes");
        records.push_back(std::move(rec));
    }
    return records;
}

}  // namespace petribench
