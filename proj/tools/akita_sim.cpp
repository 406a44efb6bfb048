// akita_sim: run, admit and sweep mixed-criticality scheduling scenarios.

#include <akita/config.hpp>
#include <akita/error.hpp>
#include <akita/metrics.hpp>
#include <akita/report.hpp>
#include <akita/simulator.hpp>

#ifdef AKITA_CLI11_PACKAGE
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace akita;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kRejected = 2;

enum class TraceLevel { full, sched, off };

/// Drops request-level records; keeps scheduling decisions.
class SchedOnlySink final : public TraceSink {
public:
    explicit SchedOnlySink(TraceSink& next) : next_(next) {}
    void on_record(const TraceRecord& r) override {
        if (r.kind == RecordKind::arrival || r.kind == RecordKind::completion || r.kind == RecordKind::release) {
            return;
        }
        next_.on_record(r);
    }

private:
    TraceSink& next_;
};

struct RunOutput {
    Summary summary;
    PlacementPlan plan;
    std::vector<VmInstance> vms;
};

std::ofstream open_out(const fs::path& p) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + p.string() + "'");
    return f;
}

/// Runs one scenario and writes every output file into `dir`.
RunOutput run_into(const Scenario& sc, const fs::path& dir, TraceLevel trace) {
    fs::create_directories(dir);
    const auto info = prepare(sc);
    MetricsCollector metrics(info);
    TeeSink tee;
    tee.add(metrics);

    std::ofstream trace_file;
    std::optional<CsvTraceWriter> csv;
    std::optional<SchedOnlySink> filter;
    if (trace != TraceLevel::off) {
        trace_file = open_out(dir / "trace.csv");
        csv.emplace(trace_file);
        if (trace == TraceLevel::sched) {
            filter.emplace(*csv);
            tee.add(*filter);
        } else {
            tee.add(*csv);
        }
    }
    const auto result = run(sc, tee);
    auto summary = metrics.summary(&result);

    {
        auto f = open_out(dir / "summary.json");
        write_json(f, summary_json(summary));
    }
    {
        auto f = open_out(dir / "rtt_cdf.csv");
        write_rtt_cdf(f, summary, metrics);
    }
    {
        auto f = open_out(dir / "tail_table.csv");
        write_tail_table(f, summary);
    }
    {
        auto f = open_out(dir / "shares.csv");
        write_shares(f, summary);
    }
    {
        auto f = open_out(dir / "idle.csv");
        write_idle(f, summary);
    }
    return {std::move(summary), info.plan, info.vms};
}

void print_rejection(const PlacementRejected& e, const Scenario& sc) {
    std::cerr << "placement rejected: " << e.what() << '\n';
    write_json(std::cerr, plan_json(e.plan(), expand(sc)));
}

TraceLevel parse_trace(const std::string& s) {
    if (s == "full") return TraceLevel::full;
    if (s == "sched") return TraceLevel::sched;
    return TraceLevel::off;
}

struct CommonFlags {
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> policy;
    std::string format = "text";
    bool quiet = false;
    std::string trace = "full";
};

Scenario load_with_overrides(const std::string& path, const CommonFlags& f) {
    auto sc = load_scenario(path);
    if (f.seed) sc.seed = *f.seed;
    if (f.policy) sc.policy = parse_policy(*f.policy);
    validate(sc);
    return sc;
}

int cmd_run(const std::string& path, const CommonFlags& f) {
    const auto sc = load_with_overrides(path, f);
    try {
        const auto out = run_into(sc, f.out, parse_trace(f.trace));
        if (!f.quiet) {
            if (f.format == "json") {
                write_json(std::cout, summary_json(out.summary));
            } else if (f.format == "csv") {
                write_tail_table(std::cout, out.summary);
            } else {
                std::cout << console_summary(out.summary);
            }
        }
        return kOk;
    } catch (const PlacementRejected& e) {
        print_rejection(e, sc);
        return kRejected;
    }
}

int cmd_admit(const std::string& path, const CommonFlags& f) {
    const auto spec = load_admit_spec(path);
    Scenario sc;
    sc.host = spec.host;
    sc.policy = f.policy ? parse_policy(*f.policy) : spec.policy;
    sc.vms = spec.vms;
    const auto vms = expand(sc);
    const auto plan = place(sc, vms);
    if (!f.quiet) {
        if (f.format == "csv") {
            std::cout << "vcpu,pcpu\n";
            for (const auto& [v, p] : plan.assignments) std::cout << v << ',' << p << '\n';
            for (const auto& r : plan.rejected) std::cout << r.vcpu << ",rejected\n";
        } else {
            write_json(std::cout, plan_json(plan, vms));
        }
    }
    return plan.all_placed() ? kOk : kRejected;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

/// "5..24" or a comma-separated list.
std::vector<std::string> expand_values(const std::string& spec) {
    const auto dots = spec.find("..");
    if (dots == std::string::npos) {
        auto v = split(spec, ',');
        if (v.empty()) throw std::invalid_argument("empty value list");
        return v;
    }
    const auto lo = std::stoull(spec.substr(0, dots));
    const auto hi = std::stoull(spec.substr(dots + 2));
    if (hi < lo) throw std::invalid_argument("descending range '" + spec + "'");
    std::vector<std::string> out;
    for (auto i = lo; i <= hi; ++i) out.push_back(std::to_string(i));
    return out;
}

std::uint64_t to_u64(const std::string& s, const std::string& what) {
    std::size_t pos = 0;
    const auto v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(what + ": not an integer '" + s + "'");
    return v;
}

/// Applies one sweep point to a copy of the base scenario.
Scenario apply_param(Scenario sc, const std::string& param, const std::string& value, const std::string& block) {
    if (param == "vm_count") {
        if (sc.vms.empty()) throw std::invalid_argument("vm_count sweep needs at least one VM block");
        auto it = sc.vms.end() - 1;
        if (!block.empty()) {
            it = std::find_if(sc.vms.begin(), sc.vms.end(), [&](const VmSpec& v) { return v.name == block; });
            if (it == sc.vms.end()) throw std::invalid_argument("no VM block named '" + block + "'");
        }
        it->count = static_cast<std::uint32_t>(to_u64(value, "vm_count"));
    } else if (param == "rate") {
        const double rate = std::stod(value);
        bool any = false;
        for (auto& vm : sc.vms) {
            if (!block.empty() && vm.name != block) continue;
            if (auto* p = std::get_if<PoissonRequests>(&vm.workload)) {
                p->rate_per_connection = rate;
                any = true;
            }
        }
        if (!any) throw std::invalid_argument("rate sweep found no poisson workload");
    } else if (param == "theta0") {
        sc.host.theta0 = static_cast<unsigned>(to_u64(value, "theta0"));
    } else if (param == "policy") {
        sc.policy = parse_policy(value);
    } else if (param == "seed") {
        sc.seed = to_u64(value, "seed");
    } else {
        throw std::invalid_argument("unknown sweep parameter '" + param +
                                    "' (expected vm_count, rate, theta0, policy or seed)");
    }
    validate(sc);
    return sc;
}

unsigned thread_cap() {
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("AKITA_SIM_THREADS")) {
        const auto v = std::strtoul(env, nullptr, 10);
        if (v > 0) n = static_cast<unsigned>(v);
    }
    return n;
}

struct SweepPoint {
    std::string policy;
    std::string value;
    Scenario scenario;
    fs::path dir;
    std::optional<Summary> summary;
    std::string error;
};

void sweep_rows(std::ostream& out, const std::string& param, const SweepPoint& p) {
    if (!p.summary) {
        out << p.policy << ',' << param << ',' << p.value << ",rejected,,,,,,,,,,,,,\n";
        return;
    }
    const auto& s = *p.summary;
    std::uint64_t switches = 0;
    double hi = 0;
    for (const auto& c : s.pcpus) {
        switches += c.mode_switches;
        hi = std::max(hi, c.hi_residency);
    }
    for (const auto& v : s.vms) {
        out << p.policy << ',' << param << ',' << p.value << ",ok," << csv_field(v.name) << ',' << to_string(v.criticality)
            << ',' << v.rtt.count << ',' << to_fixed6(v.rtt.mean_us) << ',' << v.rtt.p99_us << ','
            << v.rtt.p999_us << ',' << v.cal.p99_us << ',' << v.deadline_misses << ',' << us(v.executed) << ','
            << s.used_cores << ',' << s.idle_cores << ',' << switches << ',' << to_fixed6(hi) << '\n';
    }
}

int cmd_sweep(const std::string& path, const std::string& param, const std::string& values,
              const std::string& policies, const std::string& block, const CommonFlags& f) {
    const auto base = load_with_overrides(path, f);
    const auto vals = expand_values(values);
    auto pols = policies.empty() ? std::vector<std::string>{std::string(to_string(base.policy))}
                                 : split(policies, ',');
    for (const auto& p : pols) (void)parse_policy(p);

    std::vector<SweepPoint> points;
    for (const auto& pol : pols) {
        for (const auto& v : vals) {
            SweepPoint pt;
            pt.policy = pol;
            pt.value = v;
            auto sc = base;
            sc.policy = parse_policy(pol);
            pt.scenario = apply_param(sc, param, v, block);
            pt.policy = std::string(to_string(pt.scenario.policy));
            pt.dir = fs::path(f.out) / (param == "policy" ? "policy=" + v : pt.policy + "/" + param + "=" + v);
            points.push_back(std::move(pt));
        }
    }

    const auto level = parse_trace(f.trace);
    std::atomic<std::size_t> next{0};
    std::mutex log;
    auto worker = [&] {
        for (auto i = next++; i < points.size(); i = next++) {
            auto& pt = points[i];
            try {
                pt.summary = run_into(pt.scenario, pt.dir, level).summary;
            } catch (const PlacementRejected& e) {
                pt.error = e.what();
            }
            if (!f.quiet) {
                std::lock_guard lock(log);
                std::cerr << pt.policy << ' ' << param << '=' << pt.value << (pt.summary ? " done" : " rejected")
                          << '\n';
            }
        }
    };
    const auto n = std::min<std::size_t>(thread_cap(), points.size());
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
    pool.clear();

    fs::create_directories(f.out);
    auto out = open_out(fs::path(f.out) / "sweep.csv");
    out << "policy,param,value,status,vm,criticality,requests,mean_us,p99_us,p999_us,cal_p99_us,"
           "deadline_misses,executed_us,used_cores,idle_cores,mode_switches,hi_residency_max\n";
    bool rejected = false;
    for (const auto& pt : points) {
        sweep_rows(out, param, pt);
        rejected = rejected || !pt.summary;
    }
    if (!f.quiet) std::cout << "wrote " << (fs::path(f.out) / "sweep.csv").string() << '\n';
    for (const auto& pt : points) {
        if (!pt.summary) std::cerr << pt.policy << ' ' << param << '=' << pt.value << ": " << pt.error << '\n';
    }
    return rejected ? kRejected : kOk;
}

void add_common(CLI::App* cmd, CommonFlags& f, bool with_out) {
    if (with_out) {
        cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
        cmd->add_option("--trace", f.trace, "Trace detail written to trace.csv")
            ->check(CLI::IsMember({"full", "sched", "off"}))
            ->capture_default_str();
    }
    cmd->add_option("--seed", f.seed, "Override the scenario seed");
    cmd->add_option("--policy", f.policy, "Override the policy (akita, edf, credit)");
    cmd->add_option("--format", f.format, "Standard output format")
        ->check(CLI::IsMember({"text", "csv", "json"}))
        ->capture_default_str();
    cmd->add_flag("--quiet,-q", f.quiet, "Print nothing on success");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mixed-criticality vCPU scheduling simulator"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string scenario_path;
    std::string param;
    std::string values;
    std::string policies;
    std::string block;

    auto* run_cmd = app.add_subcommand("run", "Simulate one scenario");
    run_cmd->add_option("scenario", scenario_path, "Scenario file (YAML)")->required();
    add_common(run_cmd, flags, true);

    auto* admit_cmd = app.add_subcommand("admit", "Place VMs first-fit and print the plan");
    admit_cmd->add_option("spec", scenario_path, "Spec file (YAML host and vms)")->required();
    add_common(admit_cmd, flags, false);

    auto* sweep_cmd = app.add_subcommand("sweep", "Run a scenario over a range of one parameter");
    sweep_cmd->add_option("scenario", scenario_path, "Scenario file (YAML)")->required();
    sweep_cmd->add_option("--param", param, "vm_count, rate, theta0, policy or seed")->required();
    sweep_cmd->add_option("--values", values, "Range 'a..b' or list 'x,y,z'")->required();
    sweep_cmd->add_option("--policies", policies, "Comma-separated policies to cross with the values");
    sweep_cmd->add_option("--block", block, "VM block targeted by vm_count and rate (default: last / all)");
    add_common(sweep_cmd, flags, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*run_cmd) return cmd_run(scenario_path, flags);
        if (*admit_cmd) return cmd_admit(scenario_path, flags);
        return cmd_sweep(scenario_path, param, values, policies, block, flags);
    } catch (const ConfigError& e) {
        std::cerr << scenario_path << ":" << e.what() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
    }
    return kInputError;
}
