#include <akita/config.hpp>

#include <akita/error.hpp>

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace akita {

namespace {

std::size_t line_of(const YAML::Node& n) {
    const auto m = n.Mark();
    return m.is_null() ? 0 : static_cast<std::size_t>(m.line) + 1;
}

[[noreturn]] void fail(const YAML::Node& n, const std::string& msg) {
    throw ConfigError(line_of(n), msg);
}

void require_map(const YAML::Node& n, const std::string& what) {
    if (!n.IsMap()) fail(n, what + " must be a mapping");
}

void check_keys(const YAML::Node& n, const std::string& what, std::initializer_list<std::string_view> allowed) {
    require_map(n, what);
    for (const auto& kv : n) {
        const auto key = kv.first.as<std::string>();
        bool ok = false;
        for (auto a : allowed) ok = ok || a == key;
        if (!ok) fail(kv.first, "unknown key '" + key + "' in " + what);
    }
}

const YAML::Node need(const YAML::Node& n, const char* key, const std::string& what) {
    const auto v = n[key];
    if (!v) fail(n, what + " is missing '" + key + "'");
    return v;
}

std::string scalar(const YAML::Node& n, const std::string& key) {
    if (!n.IsScalar()) fail(n, "'" + key + "' must be a scalar");
    return n.Scalar();
}

Duration duration(const YAML::Node& n, const std::string& key) {
    try {
        return parse_duration(scalar(n, key));
    } catch (const std::invalid_argument& e) {
        fail(n, key + ": " + e.what());
    }
}

template <class T>
T number(const YAML::Node& n, const std::string& key) {
    const auto text = scalar(n, key);
    try {
        return n.as<T>();
    } catch (const YAML::Exception&) {
        fail(n, key + ": expected a number, got '" + text + "'");
    }
}

double fraction(const YAML::Node& n, const std::string& key) {
    const auto v = number<double>(n, key);
    if (!(v >= 0.0 && v <= 1.0)) fail(n, key + " must be within [0, 1]");
    return v;
}

Criticality criticality(const YAML::Node& n) {
    const auto s = scalar(n, "criticality");
    if (s == "hi" || s == "HI") return Criticality::hi;
    if (s == "lo" || s == "LO") return Criticality::lo;
    fail(n, "criticality must be 'hi' or 'lo', got '" + s + "'");
}

PolicyKind policy(const YAML::Node& n) {
    try {
        return parse_policy(scalar(n, "policy"));
    } catch (const std::invalid_argument& e) {
        fail(n, e.what());
    }
}

WorkloadSpec workload(const YAML::Node& n) {
    require_map(n, "workload");
    const auto type = scalar(need(n, "type", "workload"), "type");
    WorkloadSpec out;
    if (type == "idle") {
        check_keys(n, "idle workload", {"type"});
        out = IdleWorkload{};
    } else if (type == "poisson") {
        check_keys(n, "poisson workload", {"type", "connections", "rate_per_connection", "service_time", "seed"});
        PoissonRequests w;
        w.connections = number<std::uint32_t>(need(n, "connections", "poisson workload"), "connections");
        w.rate_per_connection =
            number<double>(need(n, "rate_per_connection", "poisson workload"), "rate_per_connection");
        if (n["service_time"]) w.service_time = duration(n["service_time"], "service_time");
        if (n["seed"]) w.seed = number<std::uint64_t>(n["seed"], "seed");
        out = w;
    } else if (type == "duty_cycle") {
        check_keys(n, "duty_cycle workload", {"type", "utilization", "window"});
        DutyCycleCpu w;
        w.utilization = fraction(need(n, "utilization", "duty_cycle workload"), "utilization");
        if (n["window"]) w.window = duration(n["window"], "window");
        out = w;
    } else if (type == "finite") {
        check_keys(n, "finite workload", {"type", "total_work"});
        out = FiniteWork{duration(need(n, "total_work", "finite workload"), "total_work")};
    } else if (type == "phased") {
        check_keys(n, "phased workload", {"type", "phases", "window"});
        PhasedCpu w;
        if (n["window"]) w.window = duration(n["window"], "window");
        const auto phases = need(n, "phases", "phased workload");
        if (!phases.IsSequence()) fail(phases, "phases must be a list");
        for (const auto& p : phases) {
            check_keys(p, "phase", {"start", "utilization"});
            w.phases.push_back({duration(need(p, "start", "phase"), "start"),
                                fraction(need(p, "utilization", "phase"), "utilization")});
        }
        out = w;
    } else {
        fail(n["type"], "unknown workload type '" + type + "' (expected idle, poisson, duty_cycle, finite or phased)");
    }
    try {
        validate(out);
    } catch (const std::invalid_argument& e) {
        fail(n, std::string("workload: ") + e.what());
    }
    return out;
}

VmSpec vm_block(const YAML::Node& n, bool workload_required) {
    check_keys(n, "VM block",
               {"name", "criticality", "c_opt", "c_pes", "period", "start", "vcpus", "count", "workload"});
    VmSpec vm;
    vm.name = scalar(need(n, "name", "VM block"), "name");
    vm.criticality = criticality(need(n, "criticality", "VM block"));
    vm.c_opt = duration(need(n, "c_opt", "VM block"), "c_opt");
    if (n["c_pes"]) vm.c_pes = duration(n["c_pes"], "c_pes");
    vm.period = duration(need(n, "period", "VM block"), "period");
    if (n["start"]) vm.start = duration(n["start"], "start");
    if (n["vcpus"]) vm.vcpus = number<std::uint32_t>(n["vcpus"], "vcpus");
    if (n["count"]) vm.count = number<std::uint32_t>(n["count"], "count");
    if (n["workload"]) {
        vm.workload = workload(n["workload"]);
    } else if (workload_required) {
        fail(n, "VM block '" + vm.name + "' is missing 'workload'");
    }
    VCpuSpec probe;
    probe.c_opt = vm.c_opt;
    probe.c_pes = vm.c_pes;
    probe.period = vm.period;
    probe.criticality = vm.criticality;
    try {
        validate(probe);
    } catch (const ValidationError& e) {
        const auto field = n[e.field()];
        fail(field ? field : n, "VM '" + vm.name + "': " + e.what());
    }
    if (vm.vcpus == 0) fail(n["vcpus"], "vcpus must be at least 1");
    return vm;
}

HostSpec host(const YAML::Node& n) {
    check_keys(n, "host", {"num_pcpus", "reserved_pcpus", "theta0"});
    HostSpec h;
    h.num_pcpus = number<std::uint32_t>(need(n, "num_pcpus", "host"), "num_pcpus");
    if (const auto r = n["reserved_pcpus"]) {
        if (!r.IsSequence()) fail(r, "reserved_pcpus must be a list");
        for (const auto& p : r) h.reserved_pcpus.insert(number<PCpuId>(p, "reserved_pcpus"));
    }
    if (n["theta0"]) h.theta0 = number<unsigned>(n["theta0"], "theta0");
    return h;
}

std::vector<VmSpec> vm_list(const YAML::Node& root, bool workload_required) {
    std::vector<VmSpec> vms;
    const auto list = root["vms"];
    if (!list) return vms;
    if (!list.IsSequence()) fail(list, "vms must be a list");
    for (const auto& v : list) vms.push_back(vm_block(v, workload_required));
    return vms;
}

YAML::Node load_root(const std::string& text) {
    try {
        auto root = YAML::Load(text);
        if (!root || root.IsNull()) throw ConfigError(1, "empty document");
        return root;
    } catch (const YAML::ParserException& e) {
        throw ConfigError(static_cast<std::size_t>(e.mark.line) + 1, e.msg);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(0, "cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Validation that spans fields; mapped back onto the node it concerns.
void validate_with_lines(const Scenario& s, const YAML::Node& root) {
    try {
        validate(s);
    } catch (const ValidationError& e) {
        YAML::Node where = root[e.field()];
        if (!where && root["host"]) where = root["host"][e.field()];
        if (!where) where = root["vms"] ? root["vms"] : root;
        fail(where, e.what());
    } catch (const std::invalid_argument& e) {
        fail(root, e.what());
    }
}

void emit_workload(YAML::Emitter& out, const WorkloadSpec& w) {
    out << YAML::Key << "workload" << YAML::Value << YAML::BeginMap;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, IdleWorkload>) {
                out << YAML::Key << "type" << YAML::Value << "idle";
            } else if constexpr (std::is_same_v<T, PoissonRequests>) {
                out << YAML::Key << "type" << YAML::Value << "poisson";
                out << YAML::Key << "connections" << YAML::Value << v.connections;
                out << YAML::Key << "rate_per_connection" << YAML::Value << v.rate_per_connection;
                out << YAML::Key << "service_time" << YAML::Value << format_duration(v.service_time);
                out << YAML::Key << "seed" << YAML::Value << v.seed;
            } else if constexpr (std::is_same_v<T, DutyCycleCpu>) {
                out << YAML::Key << "type" << YAML::Value << "duty_cycle";
                out << YAML::Key << "utilization" << YAML::Value << v.utilization;
                out << YAML::Key << "window" << YAML::Value << format_duration(v.window);
            } else if constexpr (std::is_same_v<T, FiniteWork>) {
                out << YAML::Key << "type" << YAML::Value << "finite";
                out << YAML::Key << "total_work" << YAML::Value << format_duration(v.total_work);
            } else {
                out << YAML::Key << "type" << YAML::Value << "phased";
                out << YAML::Key << "window" << YAML::Value << format_duration(v.window);
                out << YAML::Key << "phases" << YAML::Value << YAML::BeginSeq;
                for (const auto& p : v.phases) {
                    out << YAML::Flow << YAML::BeginMap;
                    out << YAML::Key << "start" << YAML::Value << format_duration(p.start);
                    out << YAML::Key << "utilization" << YAML::Value << p.utilization;
                    out << YAML::EndMap;
                }
                out << YAML::EndSeq;
            }
        },
        w);
    out << YAML::EndMap;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
    const auto root = load_root(text);
    check_keys(root, "scenario",
               {"host", "policy", "horizon", "seed", "credit_slice", "share_window", "vms"});
    Scenario s;
    s.host = host(need(root, "host", "scenario"));
    if (root["policy"]) s.policy = policy(root["policy"]);
    s.horizon = duration(need(root, "horizon", "scenario"), "horizon");
    if (root["seed"]) s.seed = number<std::uint64_t>(root["seed"], "seed");
    if (root["credit_slice"]) s.credit_slice = duration(root["credit_slice"], "credit_slice");
    if (root["share_window"]) s.share_window = duration(root["share_window"], "share_window");
    s.vms = vm_list(root, true);
    validate_with_lines(s, root);
    return s;
}

Scenario load_scenario(const std::string& path) {
    return parse_scenario(read_file(path));
}

AdmitSpec parse_admit_spec(const std::string& text) {
    const auto root = load_root(text);
    check_keys(root, "spec", {"host", "policy", "horizon", "seed", "credit_slice", "share_window", "vms"});
    AdmitSpec a;
    a.host = host(need(root, "host", "spec"));
    if (root["policy"]) a.policy = policy(root["policy"]);
    a.vms = vm_list(root, false);
    return a;
}

AdmitSpec load_admit_spec(const std::string& path) {
    return parse_admit_spec(read_file(path));
}

std::string to_yaml(const Scenario& s) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "host" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "num_pcpus" << YAML::Value << s.host.num_pcpus;
    out << YAML::Key << "reserved_pcpus" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto r : s.host.reserved_pcpus) out << r;
    out << YAML::EndSeq;
    out << YAML::Key << "theta0" << YAML::Value << s.host.theta0;
    out << YAML::EndMap;
    out << YAML::Key << "policy" << YAML::Value << std::string(to_string(s.policy));
    out << YAML::Key << "horizon" << YAML::Value << format_duration(s.horizon);
    out << YAML::Key << "seed" << YAML::Value << s.seed;
    out << YAML::Key << "credit_slice" << YAML::Value << format_duration(s.credit_slice);
    out << YAML::Key << "share_window" << YAML::Value << format_duration(s.share_window);
    out << YAML::Key << "vms" << YAML::Value << YAML::BeginSeq;
    for (const auto& vm : s.vms) {
        out << YAML::BeginMap;
        out << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << vm.name;
        out << YAML::Key << "criticality" << YAML::Value << (vm.criticality == Criticality::hi ? "hi" : "lo");
        out << YAML::Key << "c_opt" << YAML::Value << format_duration(vm.c_opt);
        if (vm.c_pes) out << YAML::Key << "c_pes" << YAML::Value << format_duration(*vm.c_pes);
        out << YAML::Key << "period" << YAML::Value << format_duration(vm.period);
        out << YAML::Key << "start" << YAML::Value << format_duration(vm.start);
        out << YAML::Key << "vcpus" << YAML::Value << vm.vcpus;
        out << YAML::Key << "count" << YAML::Value << vm.count;
        emit_workload(out, vm.workload);
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;
    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

}  // namespace akita
