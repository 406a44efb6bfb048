#include <akita/report.hpp>

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace akita {

namespace {

Json latency_json(const LatencyStats& l) {
    Json j;
    j["count"] = l.count;
    j["mean_us"] = to_fixed6(l.mean_us);
    j["p50_us"] = l.p50_us;
    j["p95_us"] = l.p95_us;
    j["p99_us"] = l.p99_us;
    j["p999_us"] = l.p999_us;
    j["max_us"] = l.max_us;
    return j;
}

Json util_json(const UtilSummary& u) {
    Json j;
    j["u1_1"] = to_fraction_string(u.u1_1);
    j["u2_1"] = to_fraction_string(u.u2_1);
    j["u2_2"] = to_fraction_string(u.u2_2);
    j["u1_1_fixed"] = to_fixed6(u.u1_1);
    j["u2_1_fixed"] = to_fixed6(u.u2_1);
    j["u2_2_fixed"] = to_fixed6(u.u2_2);
    return j;
}

Json admission_json(const AdmissionResult& a) {
    Json j = util_json(a.util);
    j["x"] = a.x ? Json(to_fraction_string(*a.x)) : Json(nullptr);
    j["x_fixed"] = a.x ? Json(to_fixed6(*a.x)) : Json(nullptr);
    j["hi_bound"] = a.hi_bound ? Json(to_fraction_string(*a.hi_bound)) : Json(nullptr);
    j["hi_bound_fixed"] = a.hi_bound ? Json(to_fixed6(*a.hi_bound)) : Json(nullptr);
    j["accepted"] = a.accepted;
    j["failed_condition"] = std::string(to_string(a.failed));
    return j;
}

std::string vm_name(std::span<const VmInstance> vms, VmId id) {
    for (const auto& v : vms) {
        if (v.id == id) return v.name;
    }
    return std::to_string(id);
}

}  // namespace

std::string csv_field(const std::string& v) {
    if (v.find_first_of(",\"\n") == std::string::npos) return v;
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

Json summary_json(const Summary& s) {
    Json j;
    j["policy"] = std::string(to_string(s.policy));
    j["seed"] = s.seed;
    j["horizon_us"] = us(s.horizon);
    j["share_window_us"] = us(s.share_window);
    j["arrivals"] = s.arrivals;
    j["completions"] = s.completions;
    j["in_flight"] = s.in_flight;
    j["used_cores"] = s.used_cores;
    j["idle_cores"] = s.idle_cores;

    Json vms = Json::array();
    for (const auto& v : s.vms) {
        Json e;
        e["id"] = v.id;
        e["name"] = v.name;
        e["criticality"] = std::string(to_string(v.criticality));
        e["rtt"] = latency_json(v.rtt);
        e["cal_p99_us"] = v.cal.p99_us;
        e["deadline_misses"] = v.deadline_misses;
        e["periods"] = v.periods;
        e["executed_us"] = us(v.executed);
        e["execution_time_us"] = v.execution_time ? Json(us(*v.execution_time)) : Json(nullptr);
        Json shares = Json::array();
        for (double x : v.shares) shares.push_back(to_fixed6(x));
        e["shares"] = std::move(shares);
        vms.push_back(std::move(e));
    }
    j["vms"] = std::move(vms);

    Json pcpus = Json::array();
    for (const auto& p : s.pcpus) {
        Json e;
        e["id"] = p.id;
        e["assigned_vcpus"] = p.assigned_vcpus;
        e["idle_us"] = us(p.idle);
        e["idle_fraction"] = to_fixed6(p.idle_fraction);
        e["mode_switches"] = p.mode_switches;
        e["hi_residency"] = to_fixed6(p.hi_residency);
        pcpus.push_back(std::move(e));
    }
    j["pcpus"] = std::move(pcpus);
    return j;
}

Json plan_json(const PlacementPlan& plan, std::span<const VmInstance> vms) {
    Json j;
    j["num_pcpus"] = plan.options.num_pcpus;
    j["reserved_pcpus"] = plan.options.reserved;
    j["rule"] = plan.options.rule == AdmissionRule::edf_vd ? "edf_vd" : "edf_utilization";
    j["all_placed"] = plan.all_placed();
    j["used_cores"] = plan.used_cores();

    Json assignments = Json::array();
    for (const auto& [vcpu, pcpu] : plan.assignments) {
        Json a;
        a["vcpu"] = vcpu;
        VmId vm = 0;
        for (const auto& inst : vms) {
            for (const auto& v : inst.vcpus) {
                if (v.id == vcpu) vm = inst.id;
            }
        }
        a["vm"] = vm_name(vms, vm);
        a["pcpu"] = pcpu;
        assignments.push_back(std::move(a));
    }
    j["assignments"] = std::move(assignments);

    Json cores = Json::array();
    for (const auto& [p, specs] : plan.per_pcpu) {
        if (specs.empty()) continue;
        Json c = admission_json(plan.admission(p));
        c["pcpu"] = p;
        Json ids = Json::array();
        for (const auto& s : specs) ids.push_back(s.id);
        c["vcpus"] = std::move(ids);
        cores.push_back(std::move(c));
    }
    j["pcpus"] = std::move(cores);

    Json rejected = Json::array();
    for (const auto& r : plan.rejected) {
        Json e;
        e["vcpu"] = r.vcpu;
        e["reason"] = r.reason;
        rejected.push_back(std::move(e));
    }
    j["rejected"] = std::move(rejected);

    // The whole request judged as if it had to share one core.
    std::vector<VCpuSpec> all;
    for (const auto& vm : vms) all.insert(all.end(), vm.vcpus.begin(), vm.vcpus.end());
    j["requested"] = admission_json(run_admission(plan.options.rule, all));
    return j;
}

void write_json(std::ostream& out, const Json& j) {
    out << j.dump(2) << '\n';
}

void write_rtt_cdf(std::ostream& out, const Summary& s, const MetricsCollector& metrics) {
    out << "vm,rtt_us,cdf\n";
    for (const auto& v : s.vms) {
        auto samples = metrics.rtt_samples(v.id);
        if (samples.empty()) continue;
        std::sort(samples.begin(), samples.end());
        const auto n = static_cast<double>(samples.size());
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
            out << csv_field(v.name) << ',' << samples[i] << ',' << to_fixed6(static_cast<double>(i + 1) / n) << '\n';
        }
    }
}

void write_tail_table(std::ostream& out, const Summary& s) {
    out << "vm,criticality,requests,mean_us,p50_us,p95_us,p99_us,p999_us,max_us,cal_p99_us,"
           "deadline_misses,periods\n";
    for (const auto& v : s.vms) {
        out << csv_field(v.name) << ',' << to_string(v.criticality) << ',' << v.rtt.count << ','
            << to_fixed6(v.rtt.mean_us) << ',' << v.rtt.p50_us << ',' << v.rtt.p95_us << ','
            << v.rtt.p99_us << ',' << v.rtt.p999_us << ',' << v.rtt.max_us << ',' << v.cal.p99_us << ','
            << v.deadline_misses << ',' << v.periods << '\n';
    }
}

void write_shares(std::ostream& out, const Summary& s) {
    out << "window_start_us,vm,share\n";
    const auto window = us(s.share_window);
    std::size_t windows = 0;
    for (const auto& v : s.vms) windows = std::max(windows, v.shares.size());
    for (std::size_t w = 0; w < windows; ++w) {
        for (const auto& v : s.vms) {
            if (w < v.shares.size()) out << w * window << ',' << csv_field(v.name) << ',' << to_fixed6(v.shares[w]) << '\n';
        }
    }
}

void write_idle(std::ostream& out, const Summary& s) {
    out << "pcpu,assigned_vcpus,idle_us,idle_fraction,mode_switches,hi_residency\n";
    for (const auto& p : s.pcpus) {
        out << p.id << ',' << p.assigned_vcpus << ',' << us(p.idle) << ',' << to_fixed6(p.idle_fraction) << ','
            << p.mode_switches << ',' << to_fixed6(p.hi_residency) << '\n';
    }
}

std::string console_summary(const Summary& s) {
    std::ostringstream out;
    out << "policy " << to_string(s.policy) << ", seed " << s.seed << ", horizon " << format_duration(s.horizon)
        << ", " << s.used_cores << " cores used, " << s.idle_cores << " idle\n";
    out << "requests: " << s.arrivals << " arrived, " << s.completions << " completed, " << s.in_flight
        << " in flight\n";
    char line[256];
    std::snprintf(line, sizeof line, "%-18s %-3s %9s %9s %9s %9s %9s %7s\n", "vm", "crt", "requests", "mean_us",
                  "p99_us", "p999_us", "cal99_us", "misses");
    out << line;
    for (const auto& v : s.vms) {
        std::snprintf(line, sizeof line, "%-18.18s %-3s %9llu %9.1f %9llu %9llu %9llu %7llu\n", v.name.c_str(),
                      std::string(to_string(v.criticality)).c_str(), static_cast<unsigned long long>(v.rtt.count),
                      v.rtt.mean_us, static_cast<unsigned long long>(v.rtt.p99_us),
                      static_cast<unsigned long long>(v.rtt.p999_us), static_cast<unsigned long long>(v.cal.p99_us),
                      static_cast<unsigned long long>(v.deadline_misses));
        out << line;
    }
    for (const auto& p : s.pcpus) {
        if (p.assigned_vcpus == 0) continue;
        std::snprintf(line, sizeof line, "pcpu %-3u %2zu vcpus  idle %.3f  switches %llu  hi %.3f\n", p.id,
                      p.assigned_vcpus, p.idle_fraction, static_cast<unsigned long long>(p.mode_switches),
                      p.hi_residency);
        out << line;
    }
    return out.str();
}

}  // namespace akita
