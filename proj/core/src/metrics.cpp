#include <akita/metrics.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace akita {

namespace {

std::size_t rank_index(std::size_t n, double p) {
    if (n == 0) throw std::invalid_argument("percentile of an empty sample");
    if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("percentile rank must be in (0, 1]");
    // the epsilon keeps e.g. 0.999 * 1000 at rank 999 despite binary rounding
    const double r = std::ceil(p * static_cast<double>(n) - 1e-9);
    const auto k = static_cast<std::size_t>(std::clamp(r, 1.0, static_cast<double>(n)));
    return k - 1;
}

}  // namespace

std::uint64_t percentile_sorted(std::span<const std::uint64_t> sorted, double p) {
    return sorted[rank_index(sorted.size(), p)];
}

std::uint64_t percentile(std::span<const std::uint64_t> samples, double p) {
    const auto k = rank_index(samples.size(), p);
    std::vector<std::uint64_t> copy(samples.begin(), samples.end());
    std::nth_element(copy.begin(), copy.begin() + static_cast<std::ptrdiff_t>(k), copy.end());
    return copy[k];
}

LatencyStats latency_stats(std::vector<std::uint64_t> samples) {
    LatencyStats s;
    if (samples.empty()) return s;
    std::sort(samples.begin(), samples.end());
    s.count = samples.size();
    // long double keeps the sum exact for any realistic run
    const long double sum = std::accumulate(samples.begin(), samples.end(), 0.0L);
    s.mean_us = static_cast<double>(sum / static_cast<long double>(samples.size()));
    s.p50_us = percentile_sorted(samples, 0.50);
    s.p95_us = percentile_sorted(samples, 0.95);
    s.p99_us = percentile_sorted(samples, 0.99);
    s.p999_us = percentile_sorted(samples, 0.999);
    s.max_us = samples.back();
    return s;
}

MetricsCollector::MetricsCollector(const RunInfo& info)
    : info_(info), vm_(info.vms.size()), pcpu_(info.scenario.host.num_pcpus) {
    const auto window = us(info.scenario.share_window);
    const auto horizon = us(info.end);
    windows_ = window == 0 ? 0 : static_cast<std::size_t>((horizon + window - 1) / window);
    for (auto& v : vm_) v.window_exec.assign(windows_, Duration{});
    for (auto& p : pcpu_) p.window_idle.assign(windows_, Duration{});
}

void MetricsCollector::split_windows(std::vector<Duration>& bins, TimePoint from, TimePoint to) const {
    const auto window = us(info_.scenario.share_window);
    if (window == 0) return;
    std::uint64_t a = us(from);
    const std::uint64_t b = us(to);
    while (a < b) {
        const auto w = a / window;
        const auto edge = std::min(b, (w + 1) * window);
        if (w < bins.size()) bins[w] += Duration{edge - a};
        a = edge;
    }
}

void MetricsCollector::add_execution(VmId vm, TimePoint from, TimePoint to) {
    auto& acc = vm_.at(vm);
    acc.executed += to - from;
    split_windows(acc.window_exec, from, to);
}

void MetricsCollector::on_record(const TraceRecord& r) {
    last_time_ = r.time;
    switch (r.kind) {
    case RecordKind::deschedule:
        if (r.vm) add_execution(*r.vm, r.time - Duration{r.args[0]}, r.time);
        break;
    case RecordKind::idle:
        if (r.pcpu) {
            auto& p = pcpu_.at(*r.pcpu);
            p.idle += Duration{r.args[0]};
            split_windows(p.window_idle, r.time - Duration{r.args[0]}, r.time);
        }
        break;
    case RecordKind::replenish:
    case RecordKind::tick:
        if (r.vm && !r.first_tick) {
            auto& acc = vm_.at(*r.vm);
            ++acc.periods;
            const auto [executed, demand, budget] = r.args;
            if (executed < std::min(demand, budget)) ++acc.misses;
        }
        break;
    case RecordKind::mode_switch:
        if (r.pcpu && r.mode) {
            auto& p = pcpu_.at(*r.pcpu);
            if (*r.mode != p.mode) {
                if (p.mode == PCpuMode::hi) p.hi_time += r.time - p.mode_since;
                p.mode = *r.mode;
                p.mode_since = r.time;
                ++p.switches;
            }
        }
        break;
    case RecordKind::completion:
        if (r.vm) {
            auto& acc = vm_.at(*r.vm);
            acc.rtt.push_back(us(r.time) - r.args[1]);
            acc.cal.push_back(r.args[2] - r.args[1]);
        }
        break;
    case RecordKind::finish:
        if (r.vm) vm_.at(*r.vm).execution_time = Duration{r.args[0]};
        break;
    case RecordKind::sim_end:
        for (auto& p : pcpu_) {
            if (p.mode == PCpuMode::hi) {
                p.hi_time += r.time - p.mode_since;
                p.mode_since = r.time;
            }
        }
        ended_ = true;
        break;
    default:
        break;
    }
}

Summary MetricsCollector::summary(const RunResult* result) const {
    Summary s;
    const auto& sc = info_.scenario;
    s.policy = sc.policy;
    s.seed = sc.seed;
    s.horizon = sc.horizon;
    s.share_window = sc.share_window;
    s.used_cores = info_.plan.used_cores();
    s.idle_cores = info_.plan.usable_pcpus().size() - s.used_cores;
    const auto horizon_us = static_cast<double>(us(info_.end));
    const auto window = us(sc.share_window);

    for (const auto& vm : info_.vms) {
        const auto& acc = vm_.at(vm.id);
        VmSummary v;
        v.id = vm.id;
        v.name = vm.name;
        v.criticality = vm.vcpus.empty() ? Criticality::lo : vm.vcpus.front().criticality;
        v.rtt = latency_stats(acc.rtt);
        v.cal = latency_stats(acc.cal);
        v.deadline_misses = acc.misses;
        v.periods = acc.periods;
        v.executed = acc.executed;
        v.execution_time = acc.execution_time;
        v.shares.reserve(windows_);
        for (std::size_t w = 0; w < windows_; ++w) {
            const auto start = w * window;
            const auto len = std::min<std::uint64_t>(window, us(info_.end) - start);
            v.shares.push_back(static_cast<double>(us(acc.window_exec[w])) / static_cast<double>(len));
        }
        s.completions += v.rtt.count;
        s.vms.push_back(std::move(v));
    }

    for (PCpuId p = 0; p < pcpu_.size(); ++p) {
        PCpuSummary ps;
        ps.id = p;
        const auto it = info_.plan.per_pcpu.find(p);
        ps.assigned_vcpus = it == info_.plan.per_pcpu.end() ? 0 : it->second.size();
        const auto& acc = pcpu_[p];
        const bool empty = ps.assigned_vcpus == 0;
        ps.idle = empty ? sc.horizon : acc.idle;
        ps.idle_fraction = horizon_us > 0 ? static_cast<double>(us(ps.idle)) / horizon_us : 0.0;
        ps.mode_switches = acc.switches;
        auto hi = acc.hi_time;
        if (!ended_ && acc.mode == PCpuMode::hi) hi += last_time_ - acc.mode_since;
        ps.hi_residency = horizon_us > 0 ? static_cast<double>(us(hi)) / horizon_us : 0.0;
        for (std::size_t w = 0; w < windows_; ++w) {
            const auto len = std::min<std::uint64_t>(window, us(info_.end) - w * window);
            ps.idle_shares.push_back(empty ? 1.0 : static_cast<double>(us(acc.window_idle[w])) / static_cast<double>(len));
        }
        s.pcpus.push_back(ps);
    }

    if (result != nullptr) {
        s.arrivals = result->arrivals;
        s.completions = result->completions;
        s.in_flight = result->in_flight.size();
    }
    return s;
}

Summary summarize(const RunInfo& info, std::span<const TraceRecord> trace) {
    MetricsCollector c(info);
    for (const auto& r : trace) c.on_record(r);
    auto s = c.summary();
    for (const auto& r : trace) {
        if (r.kind == RecordKind::arrival) ++s.arrivals;
    }
    s.in_flight = s.arrivals - s.completions;
    return s;
}

std::map<VmId, std::vector<double>> cpu_shares(const RunInfo& info, std::span<const TraceRecord> trace,
                                               Duration window) {
    if (window == Duration::zero()) throw std::invalid_argument("share window must be positive");
    RunInfo copy = info;
    copy.scenario.share_window = window;
    MetricsCollector c(copy);
    for (const auto& r : trace) c.on_record(r);
    std::map<VmId, std::vector<double>> out;
    for (auto& v : c.summary().vms) out.emplace(v.id, std::move(v.shares));
    return out;
}

std::map<VmId, std::uint64_t> deadline_misses(const RunInfo& info, std::span<const TraceRecord> trace) {
    std::map<VmId, std::uint64_t> out;
    for (const auto& v : summarize(info, trace).vms) out.emplace(v.id, v.deadline_misses);
    return out;
}

IdleStats idle_stats(const RunInfo& info, std::span<const TraceRecord> trace) {
    const auto s = summarize(info, trace);
    IdleStats out;
    out.idle_cores = s.idle_cores;
    for (const auto& p : s.pcpus) out.idle_fraction.push_back(p.idle_fraction);
    return out;
}

}  // namespace akita
