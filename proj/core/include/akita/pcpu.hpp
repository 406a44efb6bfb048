#pragma once

#include <akita/mcs.hpp>

#include <optional>
#include <span>
#include <vector>

namespace akita {

enum class PCpuMode : std::uint8_t { lo, hi };

[[nodiscard]] std::string_view to_string(PCpuMode m) noexcept;

/// How a core orders and budgets its vCPUs.
enum class Discipline : std::uint8_t {
    mixed_criticality,  ///< EDF-VD with LO/HI modes and temperatures
    plain_edf,          ///< every vCPU a LO periodic server with C_opt budget
};

/// Dynamic scheduler state of one vCPU.
struct VCpuRuntime {
    VCpuSpec spec;
    Duration budget_remaining{};
    TimePoint deadline{};
    TimePoint period_start{};
    Duration executed_in_period{};
    Duration executed_total{};
    bool active = false;
    bool runnable = false;
    unsigned temperature = 0;
    bool demanded_pessimistic_this_period = false;

    explicit VCpuRuntime(VCpuSpec s) : spec(s) {}

    [[nodiscard]] bool is_hi() const noexcept { return spec.criticality == Criticality::hi; }
    [[nodiscard]] TimePoint next_tick() const noexcept { return period_start + spec.period; }
};

/// Timer-tick replenishment. Cools a HI vCPU by one degree when the period
/// that just ended carried no pessimistic demand, refills the budget (C_pes
/// for HI, C_opt for LO) and sets the deadline: virtual in LO mode, actual
/// in HI mode.
void replenish(VCpuRuntime& v, TimePoint now, PCpuMode mode, const Rational& x);

/// Charges `ran` of execution. The budget floors at zero and the vCPU is
/// deactivated once it is exhausted. Throws ContractViolation when `ran`
/// exceeds `granted`.
void account(VCpuRuntime& v, Duration ran, Duration granted);

/// True iff a HI vCPU has executed its optimistic budget in this period and
/// still has work. Throws ContractViolation for LO vCPUs.
[[nodiscard]] bool check_hi_demand(const VCpuRuntime& v);

/// Records a pessimistic demand: temperature goes to theta0.
void mark_pessimistic_demand(VCpuRuntime& v, unsigned theta0);

/// Strict weak order of the runqueue: active before inactive, then earlier
/// deadline, then lower id.
[[nodiscard]] bool runqueue_before(const VCpuRuntime& a, const VCpuRuntime& b) noexcept;

/// Slice length for LO budget holders running in HI mode.
inline constexpr Duration kLoShareQuantum{1000};

struct Dispatch {
    VCpuId vcpu = 0;
    Duration slice{};
    bool slack = false;  ///< chosen by work conservation, not by budget

    friend bool operator==(const Dispatch&, const Dispatch&) = default;
};

/// One physical core: its vCPUs, the ordered runqueue and the LO/HI mode
/// machine. A pure state machine; the simulator drives it in timestamp
/// order.
class PCpuState {
public:
    explicit PCpuState(PCpuId id, unsigned theta0 = 2,
                       Discipline discipline = Discipline::mixed_criticality);

    [[nodiscard]] PCpuId id() const noexcept { return id_; }
    [[nodiscard]] PCpuMode mode() const noexcept { return mode_; }
    [[nodiscard]] Discipline discipline() const noexcept { return discipline_; }
    [[nodiscard]] unsigned theta0() const noexcept { return theta0_; }
    [[nodiscard]] const Rational& x() const noexcept { return x_; }

    /// Assigns a vCPU to this core (inactive, not runnable, not queued)
    /// and recomputes x from the new set. Deadlines already handed out
    /// keep their old scaling until the next tick.
    VCpuRuntime& add_vcpu(const VCpuSpec& spec);

    [[nodiscard]] bool has(VCpuId id) const noexcept;
    [[nodiscard]] const VCpuRuntime& vcpu(VCpuId id) const;
    [[nodiscard]] std::span<const VCpuRuntime> vcpus() const noexcept { return vcpus_; }
    [[nodiscard]] std::vector<VCpuSpec> specs() const;

    /// vCPU ids in runqueue order.
    [[nodiscard]] std::vector<VCpuId> runqueue() const;

    /// Linear-time ordered insertion. Throws ContractViolation on a
    /// duplicate or a foreign vCPU.
    void enqueue(VCpuId id);
    void dequeue(VCpuId id);
    [[nodiscard]] bool queued(VCpuId id) const noexcept;

    void replenish(VCpuId id, TimePoint now);
    void account(VCpuId id, Duration ran, Duration granted);
    void set_runnable(VCpuId id, bool runnable);

    /// After `account`, runs the optimistic-budget checkpoint for a HI
    /// vCPU: on a pessimistic demand the vCPU is heated to theta0 and the
    /// core escalates. Returns true when the core switched LO -> HI.
    bool checkpoint(VCpuId id, TimePoint now);

    /// Records a pessimistic demand of HI vCPU `id` unconditionally and
    /// escalates the core. Returns true when the core switched LO -> HI.
    bool escalate(VCpuId id, TimePoint now);

    /// LO -> HI. HI deadlines are rebased to period_start + T. No-op when
    /// already HI.
    void mode_switch_to_hi(TimePoint now);

    /// HI -> LO iff no HI vCPU is still warm. Returns true on a switch.
    bool maybe_switch_to_lo();

    /// EDF choice over the eligible set, falling back to work-conserving
    /// slack. Empty iff nothing on this core is runnable.
    [[nodiscard]] std::optional<Dispatch> pick_next(TimePoint now) const;

    /// Earliest upcoming timer tick among this core's vCPUs.
    [[nodiscard]] std::optional<TimePoint> next_tick() const noexcept;

private:
    [[nodiscard]] std::size_t index_of(VCpuId id) const;
    void requeue(std::size_t idx);
    void resort();
    [[nodiscard]] Duration budget_slice(const VCpuRuntime& v) const noexcept;

    PCpuId id_;
    unsigned theta0_;
    Discipline discipline_;
    PCpuMode mode_ = PCpuMode::lo;
    Rational x_{0};
    std::vector<VCpuRuntime> vcpus_;
    std::vector<std::size_t> queue_;  // indices into vcpus_
};

}  // namespace akita
