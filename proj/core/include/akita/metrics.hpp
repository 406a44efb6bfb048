#pragma once

#include <akita/simulator.hpp>
#include <akita/trace.hpp>

#include <map>
#include <optional>
#include <span>
#include <vector>

namespace akita {

/// Nearest-rank percentile: the ceil(p*n)-th smallest sample.
/// Throws std::invalid_argument on an empty input or p outside (0, 1].
[[nodiscard]] std::uint64_t percentile(std::span<const std::uint64_t> samples, double p);

/// Same, for a range already sorted ascending (no copy).
[[nodiscard]] std::uint64_t percentile_sorted(std::span<const std::uint64_t> sorted, double p);

struct LatencyStats {
    std::uint64_t count = 0;
    double mean_us = 0;
    std::uint64_t p50_us = 0;
    std::uint64_t p95_us = 0;
    std::uint64_t p99_us = 0;
    std::uint64_t p999_us = 0;
    std::uint64_t max_us = 0;
};

/// Empty samples give all-zero stats.
[[nodiscard]] LatencyStats latency_stats(std::vector<std::uint64_t> samples);

struct VmSummary {
    VmId id = 0;
    std::string name;
    Criticality criticality = Criticality::lo;
    LatencyStats rtt;
    LatencyStats cal;
    std::uint64_t deadline_misses = 0;
    std::uint64_t periods = 0;          ///< closed periods examined for misses
    Duration executed{};
    std::vector<double> shares;         ///< one entry per share window
    std::optional<Duration> execution_time;  ///< FiniteWork only
};

struct PCpuSummary {
    PCpuId id = 0;
    std::size_t assigned_vcpus = 0;
    Duration idle{};
    double idle_fraction = 0;
    std::uint64_t mode_switches = 0;   ///< transitions in either direction
    double hi_residency = 0;           ///< fraction of the horizon in HI mode
    std::vector<double> idle_shares;   ///< idle fraction per share window
};

struct Summary {
    PolicyKind policy = PolicyKind::akita;
    std::uint64_t seed = 0;
    Duration horizon{};
    Duration share_window{};
    std::uint64_t arrivals = 0;
    std::uint64_t completions = 0;
    std::uint64_t in_flight = 0;
    std::size_t used_cores = 0;
    std::size_t idle_cores = 0;  ///< usable cores with no vCPU assigned
    std::vector<VmSummary> vms;
    std::vector<PCpuSummary> pcpus;
};

/// Streaming reduction of a trace into a Summary. Memory grows with the
/// number of requests (latency samples), not with the number of records.
class MetricsCollector final : public TraceSink {
public:
    explicit MetricsCollector(const RunInfo& info);

    void on_record(const TraceRecord& r) override;

    /// Request-level figures (arrivals, in-flight) come from the run.
    [[nodiscard]] Summary summary(const RunResult* result = nullptr) const;

    /// Raw per-VM RTT samples, in completion order.
    [[nodiscard]] const std::vector<std::uint64_t>& rtt_samples(VmId vm) const { return vm_[vm].rtt; }

private:
    struct VmAcc {
        std::vector<std::uint64_t> rtt;
        std::vector<std::uint64_t> cal;
        std::uint64_t misses = 0;
        std::uint64_t periods = 0;
        Duration executed{};
        std::vector<Duration> window_exec;
        std::optional<Duration> execution_time;
    };
    struct PCpuAcc {
        Duration idle{};
        std::vector<Duration> window_idle;
        std::uint64_t switches = 0;
        PCpuMode mode = PCpuMode::lo;
        TimePoint mode_since{};
        Duration hi_time{};
    };

    void add_execution(VmId vm, TimePoint from, TimePoint to);
    void split_windows(std::vector<Duration>& bins, TimePoint from, TimePoint to) const;

    const RunInfo& info_;
    std::vector<VmAcc> vm_;
    std::vector<PCpuAcc> pcpu_;
    std::size_t windows_ = 0;
    TimePoint last_time_{};
    bool ended_ = false;
};

/// Reduces a recorded trace. Same result as streaming it through a
/// MetricsCollector.
[[nodiscard]] Summary summarize(const RunInfo& info, std::span<const TraceRecord> trace);

/// Per-VM executed-time fraction per window of length `window`.
[[nodiscard]] std::map<VmId, std::vector<double>> cpu_shares(const RunInfo& info,
                                                             std::span<const TraceRecord> trace,
                                                             Duration window);

/// Per-VM count of periods in which a vCPU received less than
/// min(work pending at the period start, budget granted at the tick).
[[nodiscard]] std::map<VmId, std::uint64_t> deadline_misses(const RunInfo& info,
                                                            std::span<const TraceRecord> trace);

struct IdleStats {
    std::vector<double> idle_fraction;  ///< indexed by pCPU id
    std::size_t idle_cores = 0;         ///< usable cores with nothing assigned
};

[[nodiscard]] IdleStats idle_stats(const RunInfo& info, std::span<const TraceRecord> trace);

}  // namespace akita
