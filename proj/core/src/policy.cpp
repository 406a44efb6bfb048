#include <akita/policy.hpp>

#include <akita/error.hpp>

#include <algorithm>

namespace akita {

ServerScheduler::ServerScheduler(PCpuId id, unsigned theta0, Discipline discipline)
    : state_(id, theta0, discipline) {}

void ServerScheduler::add_vcpu(const VCpuSpec& spec) {
    state_.add_vcpu(spec);
    state_.enqueue(spec.id);
}

void ServerScheduler::on_tick(VCpuId v, TimePoint now) {
    state_.replenish(v, now);
}

bool ServerScheduler::after_tick(TimePoint /*now*/) {
    return state_.maybe_switch_to_lo();
}

void ServerScheduler::on_runnable(VCpuId v, bool runnable, TimePoint /*now*/) {
    state_.set_runnable(v, runnable);
}

void ServerScheduler::charge(VCpuId v, Duration ran, Duration granted) {
    state_.account(v, ran, granted);
}

bool ServerScheduler::checkpoint(VCpuId v, bool overran, TimePoint now) {
    if (state_.discipline() != Discipline::mixed_criticality || !state_.vcpu(v).is_hi()) return false;
    if (overran) return state_.escalate(v, now);
    return state_.checkpoint(v, now);
}

std::optional<Dispatch> ServerScheduler::pick(TimePoint now, std::optional<VCpuId> /*current*/,
                                              Duration /*current_slice_left*/) {
    return state_.pick_next(now);
}

CreditScheduler::CreditScheduler(Duration slice) : slice_(slice) {
    if (slice_ == Duration::zero()) throw ValidationError("credit_slice", "must be positive");
}

void CreditScheduler::add_vcpu(const VCpuSpec& spec) {
    members_.insert(spec.id);
}

void CreditScheduler::on_runnable(VCpuId v, bool runnable, TimePoint /*now*/) {
    if (!members_.contains(v)) {
        throw ContractViolation("vCPU " + std::to_string(v) + " is not on this core");
    }
    if (runnable) {
        const bool woke = runnable_.insert(v).second;
        // boost: a freshly woken vCPU goes to the head of the queue, once
        if (woke && running_ != v) queue_.push_front(v);
    } else {
        runnable_.erase(v);
        std::erase(queue_, v);
    }
}

void CreditScheduler::charge(VCpuId v, Duration ran, Duration granted) {
    if (ran > granted) {
        throw ContractViolation("vCPU " + std::to_string(v) + " overran its credit slice");
    }
}

std::optional<Dispatch> CreditScheduler::pick(TimePoint /*now*/, std::optional<VCpuId> current,
                                              Duration current_slice_left) {
    if (current && runnable_.contains(*current)) {
        if (current_slice_left > Duration::zero()) {
            return Dispatch{*current, current_slice_left, false};
        }
        queue_.push_back(*current);
    }
    running_.reset();
    if (queue_.empty()) return std::nullopt;
    const auto next = queue_.front();
    queue_.pop_front();
    running_ = next;
    return Dispatch{next, slice_, false};
}

std::unique_ptr<CoreScheduler> make_scheduler(PolicyKind policy, PCpuId id, unsigned theta0,
                                              Duration credit_slice) {
    switch (policy) {
    case PolicyKind::akita:
        return std::make_unique<ServerScheduler>(id, theta0, Discipline::mixed_criticality);
    case PolicyKind::edf:
        return std::make_unique<ServerScheduler>(id, theta0, Discipline::plain_edf);
    case PolicyKind::credit:
        return std::make_unique<CreditScheduler>(credit_slice);
    }
    throw std::invalid_argument("unknown policy");
}

}  // namespace akita
