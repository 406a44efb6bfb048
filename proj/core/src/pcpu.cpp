#include <akita/pcpu.hpp>

#include <akita/error.hpp>

#include <algorithm>

namespace akita {

std::string_view to_string(PCpuMode m) noexcept {
    return m == PCpuMode::hi ? "HI" : "LO";
}

void replenish(VCpuRuntime& v, TimePoint now, PCpuMode mode, const Rational& x) {
    if (v.is_hi() && v.temperature > 0 && !v.demanded_pessimistic_this_period) {
        --v.temperature;
    }
    v.period_start = now;
    v.executed_in_period = Duration::zero();
    v.demanded_pessimistic_this_period = false;
    v.active = true;
    v.budget_remaining = v.spec.full_budget();
    v.deadline = mode == PCpuMode::lo ? virtual_deadline(v.spec, now, x) : now + v.spec.period;
}

void account(VCpuRuntime& v, Duration ran, Duration granted) {
    if (ran > granted) {
        throw ContractViolation("vCPU " + std::to_string(v.spec.id) + " ran " +
                                std::to_string(ran.count()) + "us of a " +
                                std::to_string(granted.count()) + "us slice");
    }
    v.budget_remaining = ran >= v.budget_remaining ? Duration::zero() : v.budget_remaining - ran;
    v.executed_in_period += ran;
    v.executed_total += ran;
    if (v.budget_remaining == Duration::zero()) v.active = false;
}

bool check_hi_demand(const VCpuRuntime& v) {
    if (!v.is_hi()) {
        throw ContractViolation("check_hi_demand on LO vCPU " + std::to_string(v.spec.id));
    }
    return v.executed_in_period >= v.spec.c_opt && v.runnable;
}

void mark_pessimistic_demand(VCpuRuntime& v, unsigned theta0) {
    v.demanded_pessimistic_this_period = true;
    v.temperature = theta0;
}

bool runqueue_before(const VCpuRuntime& a, const VCpuRuntime& b) noexcept {
    if (a.active != b.active) return a.active;
    if (a.deadline != b.deadline) return a.deadline < b.deadline;
    return a.spec.id < b.spec.id;
}

PCpuState::PCpuState(PCpuId id, unsigned theta0, Discipline discipline)
    : id_(id), theta0_(theta0), discipline_(discipline) {}

VCpuRuntime& PCpuState::add_vcpu(const VCpuSpec& spec) {
    validate(spec);
    if (has(spec.id)) {
        throw ContractViolation("vCPU " + std::to_string(spec.id) + " already on pCPU " +
                                std::to_string(id_));
    }
    vcpus_.emplace_back(spec);
    if (discipline_ == Discipline::mixed_criticality) {
        const auto all = specs();
        const auto result = admission_test(all);
        x_ = result.x.value_or(Rational(1));
    }
    return vcpus_.back();
}

bool PCpuState::has(VCpuId id) const noexcept {
    return std::any_of(vcpus_.begin(), vcpus_.end(),
                       [id](const VCpuRuntime& v) { return v.spec.id == id; });
}

std::size_t PCpuState::index_of(VCpuId id) const {
    for (std::size_t i = 0; i < vcpus_.size(); ++i) {
        if (vcpus_[i].spec.id == id) return i;
    }
    throw ContractViolation("vCPU " + std::to_string(id) + " is not on pCPU " +
                            std::to_string(id_));
}

const VCpuRuntime& PCpuState::vcpu(VCpuId id) const {
    return vcpus_[index_of(id)];
}

std::vector<VCpuSpec> PCpuState::specs() const {
    std::vector<VCpuSpec> out;
    out.reserve(vcpus_.size());
    for (const auto& v : vcpus_) out.push_back(v.spec);
    return out;
}

std::vector<VCpuId> PCpuState::runqueue() const {
    std::vector<VCpuId> out;
    out.reserve(queue_.size());
    for (auto idx : queue_) out.push_back(vcpus_[idx].spec.id);
    return out;
}

bool PCpuState::queued(VCpuId id) const noexcept {
    return std::any_of(queue_.begin(), queue_.end(),
                       [&](std::size_t idx) { return vcpus_[idx].spec.id == id; });
}

void PCpuState::enqueue(VCpuId id) {
    const auto idx = index_of(id);
    if (queued(id)) {
        throw ContractViolation("vCPU " + std::to_string(id) + " is already queued");
    }
    auto pos = queue_.begin();
    while (pos != queue_.end() && runqueue_before(vcpus_[*pos], vcpus_[idx])) ++pos;
    queue_.insert(pos, idx);
}

void PCpuState::dequeue(VCpuId id) {
    const auto idx = index_of(id);
    std::erase(queue_, idx);
}

void PCpuState::requeue(std::size_t idx) {
    const auto id = vcpus_[idx].spec.id;
    std::erase(queue_, idx);
    enqueue(id);
}

void PCpuState::resort() {
    std::stable_sort(queue_.begin(), queue_.end(), [this](std::size_t a, std::size_t b) {
        return runqueue_before(vcpus_[a], vcpus_[b]);
    });
}

void PCpuState::replenish(VCpuId id, TimePoint now) {
    const auto idx = index_of(id);
    auto& v = vcpus_[idx];
    if (discipline_ == Discipline::plain_edf) {
        v.period_start = now;
        v.executed_in_period = Duration::zero();
        v.active = true;
        v.budget_remaining = v.spec.c_opt;
        v.deadline = now + v.spec.period;
    } else {
        ::akita::replenish(v, now, mode_, x_);
    }
    if (queued(id)) requeue(idx);
}

void PCpuState::account(VCpuId id, Duration ran, Duration granted) {
    const auto idx = index_of(id);
    ::akita::account(vcpus_[idx], ran, granted);
    if (queued(id)) requeue(idx);
}

void PCpuState::set_runnable(VCpuId id, bool runnable) {
    vcpus_[index_of(id)].runnable = runnable;
}

bool PCpuState::checkpoint(VCpuId id, TimePoint now) {
    if (discipline_ != Discipline::mixed_criticality) return false;
    const auto& v = vcpus_[index_of(id)];
    if (!v.is_hi() || !check_hi_demand(v)) return false;
    return escalate(id, now);
}

bool PCpuState::escalate(VCpuId id, TimePoint now) {
    auto& v = vcpus_[index_of(id)];
    if (discipline_ != Discipline::mixed_criticality) return false;
    if (!v.is_hi()) {
        throw ContractViolation("escalation requested by LO vCPU " + std::to_string(id));
    }
    mark_pessimistic_demand(v, theta0_);
    if (mode_ == PCpuMode::hi) return false;
    mode_switch_to_hi(now);
    return true;
}

void PCpuState::mode_switch_to_hi(TimePoint /*now*/) {
    if (discipline_ != Discipline::mixed_criticality || mode_ == PCpuMode::hi) return;
    mode_ = PCpuMode::hi;
    for (auto& v : vcpus_) {
        if (v.is_hi()) v.deadline = v.period_start + v.spec.period;
    }
    resort();
}

bool PCpuState::maybe_switch_to_lo() {
    if (mode_ != PCpuMode::hi) return false;
    const bool warm = std::any_of(vcpus_.begin(), vcpus_.end(), [](const VCpuRuntime& v) {
        return v.is_hi() && v.temperature > 0;
    });
    if (warm) return false;
    mode_ = PCpuMode::lo;
    return true;
}

Duration PCpuState::budget_slice(const VCpuRuntime& v) const noexcept {
    if (discipline_ == Discipline::mixed_criticality && v.is_hi() &&
        v.executed_in_period < v.spec.c_opt) {
        return std::min(v.budget_remaining, v.spec.c_opt - v.executed_in_period);
    }
    return v.budget_remaining;
}

std::optional<TimePoint> PCpuState::next_tick() const noexcept {
    std::optional<TimePoint> best;
    for (const auto& v : vcpus_) {
        const auto t = v.next_tick();
        if (!best || t < *best) best = t;
    }
    return best;
}

std::optional<Dispatch> PCpuState::pick_next(TimePoint now) const {
    const bool hi_mode = mode_ == PCpuMode::hi;
    for (auto idx : queue_) {
        const auto& v = vcpus_[idx];
        if (!v.active) break;
        if (v.runnable && (!hi_mode || v.is_hi())) {
            return Dispatch{v.spec.id, budget_slice(v), false};
        }
    }

    // Slack runs until the next tick on this core. vCPUs that have not
    // started yet have no future tick here; the longest period bounds the
    // grant and the simulator's tick events cut it short anyway.
    const auto until_tick = [&] {
        std::optional<Duration> best;
        Duration longest{1};
        for (const auto& v : vcpus_) {
            longest = std::max(longest, v.spec.period);
            const auto t = v.next_tick();
            if (t > now && (!best || t - now < *best)) best = t - now;
        }
        return best.value_or(longest);
    };
    auto first = [&](auto&& pred) -> const VCpuRuntime* {
        for (auto idx : queue_) {
            if (vcpus_[idx].runnable && pred(vcpus_[idx])) return &vcpus_[idx];
        }
        return nullptr;
    };

    if (hi_mode) {
        // Budget holders first, then HI slack, then LO slack. LO budget
        // holders split what the HI vCPUs leave: least served in this
        // period (then overall) first, in short quanta, so equal budgets get equal shares.
        const VCpuRuntime* lo = nullptr;
        for (auto idx : queue_) {
            const auto& c = vcpus_[idx];
            if (!c.active) break;
            if (!c.runnable) continue;
            if (lo == nullptr || c.executed_in_period < lo->executed_in_period ||
                (c.executed_in_period == lo->executed_in_period && c.executed_total < lo->executed_total)) {
                lo = &c;
            }
        }
        if (lo != nullptr) {
            return Dispatch{lo->spec.id, std::min(lo->budget_remaining, kLoShareQuantum), true};
        }
        if (const auto* v = first([](const VCpuRuntime& c) { return c.is_hi(); })) {
            return Dispatch{v->spec.id, until_tick(), true};
        }
    }
    if (const auto* v = first([](const VCpuRuntime&) { return true; })) {
        return Dispatch{v->spec.id, until_tick(), true};
    }
    return std::nullopt;
}

}  // namespace akita
