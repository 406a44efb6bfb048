#pragma once

#include <akita/pcpu.hpp>
#include <akita/scenario.hpp>

#include <deque>
#include <memory>
#include <set>

namespace akita {

/// Per-core scheduling policy as seen by the simulator. The simulator owns
/// time and guest work; the policy owns budgets, deadlines and the choice
/// of what runs next.
class CoreScheduler {
public:
    virtual ~CoreScheduler() = default;

    virtual void add_vcpu(const VCpuSpec& spec) = 0;

    /// Timer tick of `v` (period boundary).
    virtual void on_tick(VCpuId v, TimePoint now) = 0;

    /// Evaluated after every tick; returns true when the core left HI mode.
    virtual bool after_tick(TimePoint now) = 0;

    virtual void on_runnable(VCpuId v, bool runnable, TimePoint now) = 0;

    /// Charges `ran` of execution against a grant of `granted`.
    virtual void charge(VCpuId v, Duration ran, Duration granted) = 0;

    /// Pessimistic-demand detection for `v`. `overran` means the vCPU
    /// executed past its optimistic budget in the last segment. Returns
    /// true when the core escalated to HI mode.
    virtual bool checkpoint(VCpuId v, bool overran, TimePoint now) = 0;

    /// Next dispatch. `current` is the running vCPU, if any, and
    /// `current_slice_left` what remains of its grant.
    [[nodiscard]] virtual std::optional<Dispatch> pick(TimePoint now, std::optional<VCpuId> current,
                                                       Duration current_slice_left) = 0;

    [[nodiscard]] virtual PCpuMode mode() const = 0;
    [[nodiscard]] virtual std::optional<TimePoint> deadline(VCpuId v) const = 0;
    [[nodiscard]] virtual std::optional<Duration> budget(VCpuId v) const = 0;
    [[nodiscard]] virtual bool budgeted() const = 0;
};

/// Akita (EDF-VD + modes) or the plain-EDF baseline, both over PCpuState.
class ServerScheduler final : public CoreScheduler {
public:
    ServerScheduler(PCpuId id, unsigned theta0, Discipline discipline);

    void add_vcpu(const VCpuSpec& spec) override;
    void on_tick(VCpuId v, TimePoint now) override;
    bool after_tick(TimePoint now) override;
    void on_runnable(VCpuId v, bool runnable, TimePoint now) override;
    void charge(VCpuId v, Duration ran, Duration granted) override;
    bool checkpoint(VCpuId v, bool overran, TimePoint now) override;
    std::optional<Dispatch> pick(TimePoint now, std::optional<VCpuId> current,
                                 Duration current_slice_left) override;

    PCpuMode mode() const override { return state_.mode(); }
    std::optional<TimePoint> deadline(VCpuId v) const override { return state_.vcpu(v).deadline; }
    std::optional<Duration> budget(VCpuId v) const override { return state_.vcpu(v).budget_remaining; }
    bool budgeted() const override { return true; }

    [[nodiscard]] const PCpuState& state() const noexcept { return state_; }

private:
    PCpuState state_;
};

/// Simplified credit-style baseline: one FIFO per core served round robin
/// with a fixed slice; a vCPU that wakes from idle jumps to the head of the
/// queue once. No budgets, no criticality, no load balancing, and a boost
/// never preempts the running vCPU.
class CreditScheduler final : public CoreScheduler {
public:
    explicit CreditScheduler(Duration slice);

    void add_vcpu(const VCpuSpec& spec) override;
    void on_tick(VCpuId, TimePoint) override {}
    bool after_tick(TimePoint) override { return false; }
    void on_runnable(VCpuId v, bool runnable, TimePoint now) override;
    void charge(VCpuId v, Duration ran, Duration granted) override;
    bool checkpoint(VCpuId, bool, TimePoint) override { return false; }
    std::optional<Dispatch> pick(TimePoint now, std::optional<VCpuId> current,
                                 Duration current_slice_left) override;

    PCpuMode mode() const override { return PCpuMode::lo; }
    std::optional<TimePoint> deadline(VCpuId) const override { return std::nullopt; }
    std::optional<Duration> budget(VCpuId) const override { return std::nullopt; }
    bool budgeted() const override { return false; }

    /// Waiting vCPUs, head first.
    [[nodiscard]] const std::deque<VCpuId>& queue() const noexcept { return queue_; }

private:
    Duration slice_;
    std::set<VCpuId> members_;
    std::set<VCpuId> runnable_;
    std::deque<VCpuId> queue_;
    std::optional<VCpuId> running_;
};

[[nodiscard]] std::unique_ptr<CoreScheduler> make_scheduler(PolicyKind policy, PCpuId id,
                                                            unsigned theta0, Duration credit_slice);

}  // namespace akita
