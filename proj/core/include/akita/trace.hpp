#pragma once

#include <akita/pcpu.hpp>

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace akita {

enum class RecordKind : std::uint8_t {
    dispatch,     ///< vCPU starts running; args: slice, slack flag
    deschedule,   ///< vCPU stops; args: ran; reason
    idle,         ///< end of an idle interval; args: length
    replenish,    ///< timer tick of a budgeted policy; args: closing-period stats
    tick,         ///< period boundary under a policy without budgets
    mode_switch,  ///< mode field holds the new mode
    arrival,      ///< request enters the guest; args: request id, service demand
    completion,   ///< request done; args: request id, arrival, dispatch
    release,      ///< CPU work quantum; args: amount, abandoned remainder
    finish,       ///< finite work done; args: execution time
    sim_end,
};

[[nodiscard]] std::string_view to_string(RecordKind k) noexcept;

enum class StopReason : std::uint8_t {
    none,
    preempted,   ///< a better candidate was chosen
    yield,       ///< the guest ran out of work
    budget,      ///< budget exhausted
    checkpoint,  ///< optimistic-budget checkpoint of a HI vCPU
    slice,       ///< slice (or slack interval) ended
    horizon,
};

[[nodiscard]] std::string_view to_string(StopReason r) noexcept;

/// One row of the execution log. `args` are interpreted per kind:
///   dispatch:   {slice_us, slack}
///   deschedule: {ran_us}
///   idle:       {length_us}
///   replenish/tick: {prev_executed_us, prev_demand_us, prev_budget_us};
///               the closing period is the one that ended at `time`, and a
///               vCPU's first tick carries no closing period (all zero,
///               flagged by `first_tick`)
///   arrival:    {request_id, service_us}
///   completion: {request_id, arrival_us, dispatch_us}
///   release:    {work_us, abandoned_us}
///   finish:     {execution_time_us}
struct TraceRecord {
    TimePoint time{};
    RecordKind kind = RecordKind::sim_end;
    std::optional<PCpuId> pcpu;
    std::optional<VCpuId> vcpu;
    std::optional<VmId> vm;
    std::optional<PCpuMode> mode;
    std::optional<TimePoint> deadline;
    std::optional<Duration> budget;
    std::array<std::uint64_t, 3> args{};
    StopReason reason = StopReason::none;
    bool first_tick = false;

    friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// Consumer of the record stream. Records arrive in non-decreasing time.
class TraceSink {
public:
    virtual ~TraceSink() = default;
    virtual void on_record(const TraceRecord& r) = 0;
};

/// Keeps every record; meant for tests and small runs.
class VectorSink final : public TraceSink {
public:
    void on_record(const TraceRecord& r) override { records.push_back(r); }
    std::vector<TraceRecord> records;
};

/// Fans a stream out to several sinks.
class TeeSink final : public TraceSink {
public:
    void add(TraceSink& s) { sinks_.push_back(&s); }
    void on_record(const TraceRecord& r) override {
        for (auto* s : sinks_) s->on_record(r);
    }

private:
    std::vector<TraceSink*> sinks_;
};

inline constexpr std::string_view kTraceHeader =
    "time_us,pcpu,event_kind,vcpu_id,vm,mode,deadline_us,budget_remaining_us,detail";

/// `detail` column: semicolon-separated key=value pairs, never a comma.
[[nodiscard]] std::string format_detail(const TraceRecord& r);

/// Full CSV row without the trailing newline.
[[nodiscard]] std::string format_row(const TraceRecord& r);

/// Streams trace.csv. The header is written on construction.
class CsvTraceWriter final : public TraceSink {
public:
    explicit CsvTraceWriter(std::ostream& out);
    void on_record(const TraceRecord& r) override;

private:
    std::ostream& out_;
};

}  // namespace akita
