#pragma once

#include <akita/placement.hpp>
#include <akita/scenario.hpp>
#include <akita/trace.hpp>

#include <stdexcept>

namespace akita {

/// Kinds of simulation events. At equal timestamps they are processed in
/// this order, so replenishment precedes dispatch at period boundaries.
enum class EventKind : std::uint8_t {
    timer_tick = 0,
    slice_expiry = 1,
    request_arrival = 2,
    work_phase_change = 3,
    simulation_end = 4,
};

struct Event {
    TimePoint time{};
    EventKind kind = EventKind::simulation_end;
    std::uint64_t seq = 0;
    std::uint32_t target = 0;  ///< vCPU id, or pCPU id for slice_expiry
    std::uint64_t token = 0;   ///< slice_expiry generation

    /// Total order (time, kind, seq).
    friend bool operator<(const Event& a, const Event& b) noexcept {
        if (a.time != b.time) return a.time < b.time;
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.seq < b.seq;
    }
};

/// Placement refused part of the scenario; the plan names the failures.
class PlacementRejected : public std::runtime_error {
public:
    explicit PlacementRejected(PlacementPlan plan);
    [[nodiscard]] const PlacementPlan& plan() const noexcept { return plan_; }

private:
    PlacementPlan plan_;
};

struct InFlightRequest {
    std::uint64_t id = 0;
    VCpuId vcpu = 0;
    VmId vm = 0;
    TimePoint arrival{};
};

/// Static facts about a run, needed to interpret its trace.
struct RunInfo {
    Scenario scenario;
    std::vector<VmInstance> vms;
    std::vector<VCpuSpec> vcpus;  ///< indexed by vCPU id
    PlacementPlan plan;
    TimePoint end{};
};

struct RunResult {
    RunInfo info;
    std::uint64_t events = 0;
    std::uint64_t arrivals = 0;
    std::uint64_t completions = 0;
    std::vector<InFlightRequest> in_flight;
};

/// Places the scenario (throws PlacementRejected when something does not
/// fit) and builds the static run description.
[[nodiscard]] RunInfo prepare(const Scenario& scenario);

/// Runs the scenario to its horizon, streaming records into `sink`.
/// Deterministic: the same scenario yields the same record stream.
RunResult run(const Scenario& scenario, TraceSink& sink);

}  // namespace akita
