#include <akita/simulator.hpp>

#include <akita/error.hpp>
#include <akita/policy.hpp>

#include <cmath>
#include <deque>
#include <queue>

namespace akita {

namespace {

std::string rejection_message(const PlacementPlan& plan) {
    std::string msg = "placement rejected " + std::to_string(plan.rejected.size()) + " vCPU(s)";
    if (!plan.rejected.empty()) msg += ": " + plan.rejected.front().reason;
    return msg;
}

}  // namespace

PlacementRejected::PlacementRejected(PlacementPlan plan)
    : std::runtime_error(rejection_message(plan)), plan_(std::move(plan)) {}

RunInfo prepare(const Scenario& scenario) {
    validate(scenario);
    RunInfo info;
    info.scenario = scenario;
    info.vms = expand(scenario);
    for (const auto& vm : info.vms) {
        for (const auto& v : vm.vcpus) info.vcpus.push_back(v);
    }
    info.plan = place(scenario, info.vms);
    if (!info.plan.all_placed()) throw PlacementRejected(info.plan);
    info.end = kEpoch + scenario.horizon;
    return info;
}

namespace {

enum class ItemKind : std::uint8_t { request, quantum, finite };

struct WorkItem {
    Duration remaining{};
    ItemKind kind = ItemKind::quantum;
    std::uint64_t request_id = 0;
    TimePoint arrival{};
    TimePoint dispatch{};
};

struct VCpuSim {
    VCpuSpec spec;
    PCpuId pcpu = 0;
    TimePoint start{};
    const WorkloadSpec* workload = nullptr;

    std::deque<WorkItem> queue;
    Duration pending{};
    std::size_t undispatched = 0;  // trailing requests not yet executed
    std::optional<PoissonStream> arrivals;
    std::uint64_t next_request = 0;

    bool ticked = false;
    TimePoint last_tick{};
    Duration executed_since_tick{};
    Duration period_demand{};
    Duration budget_at_tick{};
};

struct PCpuSim {
    std::unique_ptr<CoreScheduler> sched;
    std::optional<VCpuId> current;
    TimePoint segment_start{};
    Duration slice_left{};
    Duration ran_in_dispatch{};
    bool idle = true;
    TimePoint idle_since{};
    std::uint64_t token = 0;
    bool dirty = false;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const noexcept { return b < a; }
};

class Engine {
public:
    Engine(RunInfo info, TraceSink& sink) : info_(std::move(info)), sink_(sink) {}

    RunResult run();

private:
    void push(TimePoint t, EventKind kind, std::uint32_t target, std::uint64_t token = 0) {
        queue_.push(Event{t, kind, seq_++, target, token});
    }
    void emit(const TraceRecord& r) { sink_.on_record(r); }

    TraceRecord record(TimePoint t, RecordKind kind, const VCpuSim& v) const {
        TraceRecord r;
        r.time = t;
        r.kind = kind;
        r.pcpu = v.pcpu;
        r.vcpu = v.spec.id;
        r.vm = v.spec.vm;
        return r;
    }

    void settle(PCpuId p, TimePoint t);
    void complete(VCpuSim& v, const WorkItem& item, TimePoint t);
    void set_runnable(VCpuSim& v, bool runnable, TimePoint t);
    void add_work(VCpuSim& v, WorkItem item, TimePoint t);
    void replace_quanta(VCpuSim& v, Duration amount, TimePoint t);
    void note_mode_switch(PCpuId p, TimePoint t);

    void on_tick(VCpuSim& v, TimePoint t);
    void on_arrival(VCpuSim& v, TimePoint t);
    void on_phase(VCpuSim& v, TimePoint t);
    void on_slice(PCpuId p, std::uint64_t token, TimePoint t);

    void reschedule(PCpuId p, TimePoint t);
    void arm(PCpuId p, TimePoint t);
    void finish();

    RunInfo info_;
    TraceSink& sink_;
    std::vector<VCpuSim> vcpus_;
    std::vector<PCpuSim> pcpus_;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
    std::uint64_t seq_ = 0;
    RunResult result_;
};

void Engine::note_mode_switch(PCpuId p, TimePoint t) {
    TraceRecord r;
    r.time = t;
    r.kind = RecordKind::mode_switch;
    r.pcpu = p;
    r.mode = pcpus_[p].sched->mode();
    emit(r);
}

void Engine::complete(VCpuSim& v, const WorkItem& item, TimePoint t) {
    if (item.kind == ItemKind::request) {
        auto r = record(t, RecordKind::completion, v);
        r.args = {item.request_id, us(item.arrival), us(item.dispatch)};
        emit(r);
        ++result_.completions;
    } else if (item.kind == ItemKind::finite) {
        auto r = record(t, RecordKind::finish, v);
        r.args = {us(since(t, v.start)), 0, 0};
        emit(r);
    }
}

void Engine::set_runnable(VCpuSim& v, bool runnable, TimePoint t) {
    auto& pc = pcpus_[v.pcpu];
    pc.sched->on_runnable(v.spec.id, runnable, t);
    pc.dirty = true;
    if (runnable && v.spec.criticality == Criticality::hi) {
        // waking with the optimistic budget already spent is a demand too
        if (pc.sched->checkpoint(v.spec.id, false, t)) note_mode_switch(v.pcpu, t);
    }
}

void Engine::settle(PCpuId p, TimePoint t) {
    auto& pc = pcpus_[p];
    if (!pc.current || t <= pc.segment_start) return;
    auto& v = vcpus_[*pc.current];
    const Duration elapsed = t - pc.segment_start;

    for (std::size_t k = v.queue.size() - std::min(v.undispatched, v.queue.size()); k < v.queue.size(); ++k) {
        v.queue[k].dispatch = pc.segment_start;
    }
    v.undispatched = 0;

    Duration left = elapsed;
    TimePoint clock = pc.segment_start;
    while (left > Duration::zero() && !v.queue.empty()) {
        auto& head = v.queue.front();
        const Duration take = std::min(head.remaining, left);
        head.remaining -= take;
        left -= take;
        clock += take;
        v.pending -= take;
        if (head.remaining == Duration::zero()) {
            const WorkItem done = head;
            v.queue.pop_front();
            complete(v, done, clock);
        }
    }
    if (left > Duration::zero()) {
        throw ContractViolation("vCPU " + std::to_string(v.spec.id) + " ran without work");
    }

    pc.sched->charge(v.spec.id, elapsed, pc.slice_left);
    pc.slice_left -= elapsed;
    pc.ran_in_dispatch += elapsed;
    pc.segment_start = t;
    v.executed_since_tick += elapsed;
    pc.dirty = true;

    if (v.queue.empty()) set_runnable(v, false, t);
    if (v.spec.criticality == Criticality::hi) {
        const bool overran = v.executed_since_tick > v.spec.c_opt;
        if (pc.sched->checkpoint(v.spec.id, overran, t)) note_mode_switch(p, t);
    }
}

void Engine::add_work(VCpuSim& v, WorkItem item, TimePoint t) {
    const bool was_idle = v.queue.empty();
    v.pending += item.remaining;
    if (v.ticked && t == v.last_tick) v.period_demand += item.remaining;
    if (item.kind == ItemKind::request) ++v.undispatched;
    v.queue.push_back(item);
    if (was_idle) set_runnable(v, true, t);
}

void Engine::replace_quanta(VCpuSim& v, Duration amount, TimePoint t) {
    Duration abandoned{};
    std::erase_if(v.queue, [&](const WorkItem& w) {
        if (w.kind != ItemKind::quantum) return false;
        abandoned += w.remaining;
        return true;
    });
    v.pending -= abandoned;
    if (v.ticked && t == v.last_tick) {
        v.period_demand = v.period_demand > abandoned ? v.period_demand - abandoned : Duration::zero();
    }

    auto r = record(t, RecordKind::release, v);
    r.args = {us(amount), us(abandoned), 0};
    emit(r);

    if (amount > Duration::zero()) {
        const bool was_idle = v.queue.empty();
        v.pending += amount;
        if (v.ticked && t == v.last_tick) v.period_demand += amount;
        v.queue.push_back(WorkItem{amount, ItemKind::quantum});
        if (was_idle && abandoned == Duration::zero()) set_runnable(v, true, t);
    } else if (abandoned > Duration::zero() && v.queue.empty()) {
        set_runnable(v, false, t);
    }
    pcpus_[v.pcpu].dirty = true;
}

void Engine::on_tick(VCpuSim& v, TimePoint t) {
    settle(v.pcpu, t);
    auto& pc = pcpus_[v.pcpu];
    auto r = record(t, pc.sched->budgeted() ? RecordKind::replenish : RecordKind::tick, v);
    if (v.ticked) {
        r.args = {us(v.executed_since_tick), us(v.period_demand), us(v.budget_at_tick)};
    } else {
        r.first_tick = true;
    }
    pc.sched->on_tick(v.spec.id, t);
    r.mode = pc.sched->mode();
    r.deadline = pc.sched->deadline(v.spec.id);
    r.budget = pc.sched->budget(v.spec.id);
    emit(r);

    v.ticked = true;
    v.last_tick = t;
    v.executed_since_tick = Duration::zero();
    v.period_demand = v.pending;
    v.budget_at_tick = pc.sched->budget(v.spec.id).value_or(v.spec.full_budget());
    pc.dirty = true;

    if (pc.sched->after_tick(t)) note_mode_switch(v.pcpu, t);
    push(t + v.spec.period, EventKind::timer_tick, v.spec.id);
}

void Engine::on_arrival(VCpuSim& v, TimePoint t) {
    settle(v.pcpu, t);
    const auto& w = std::get<PoissonRequests>(*v.workload);
    WorkItem item{w.service_time, ItemKind::request, v.next_request++, t, t};
    auto r = record(t, RecordKind::arrival, v);
    r.args = {item.request_id, us(item.remaining), 0};
    emit(r);
    ++result_.arrivals;
    add_work(v, item, t);
    const auto next = v.arrivals->next();
    if (next < info_.end) push(next, EventKind::request_arrival, v.spec.id);
}

void Engine::on_phase(VCpuSim& v, TimePoint t) {
    settle(v.pcpu, t);
    std::visit(
        [&](const auto& w) {
            using T = std::decay_t<decltype(w)>;
            if constexpr (std::is_same_v<T, FiniteWork>) {
                auto r = record(t, RecordKind::release, v);
                r.args = {us(w.total_work), 0, 0};
                emit(r);
                add_work(v, WorkItem{w.total_work, ItemKind::finite}, t);
            } else if constexpr (std::is_same_v<T, DutyCycleCpu> || std::is_same_v<T, PhasedCpu>) {
                double u = 0;
                if constexpr (std::is_same_v<T, DutyCycleCpu>) {
                    u = w.utilization;
                } else {
                    u = phase_utilization(w, since(t, v.start));
                }
                const auto amount = static_cast<std::uint64_t>(std::llround(u * static_cast<double>(w.window.count())));
                replace_quanta(v, Duration{amount}, t);
                push(t + w.window, EventKind::work_phase_change, v.spec.id);
            }
        },
        *v.workload);
}

void Engine::on_slice(PCpuId p, std::uint64_t token, TimePoint t) {
    auto& pc = pcpus_[p];
    if (token != pc.token) return;
    settle(p, t);
    pc.dirty = true;
}

void Engine::arm(PCpuId p, TimePoint t) {
    auto& pc = pcpus_[p];
    ++pc.token;
    if (!pc.current) return;
    const auto& v = vcpus_[*pc.current];
    const Duration seg = std::min(pc.slice_left, v.queue.front().remaining);
    push(t + seg, EventKind::slice_expiry, p, pc.token);
}

void Engine::reschedule(PCpuId p, TimePoint t) {
    auto& pc = pcpus_[p];
    pc.dirty = false;
    settle(p, t);
    const auto current = pc.current;
    const auto next = pc.sched->pick(t, current, pc.slice_left);
    if (next && next->slice == Duration::zero()) {
        throw ContractViolation("empty slice granted to vCPU " + std::to_string(next->vcpu));
    }

    if (current && next && next->vcpu == *current) {
        pc.slice_left = next->slice;
        arm(p, t);
        return;
    }

    if (current) {
        const auto& v = vcpus_[*current];
        auto r = record(t, RecordKind::deschedule, v);
        r.args = {us(pc.ran_in_dispatch), 0, 0};
        if (v.queue.empty()) {
            r.reason = StopReason::yield;
        } else if (pc.slice_left > Duration::zero()) {
            r.reason = StopReason::preempted;
        } else if (pc.sched->budgeted() && pc.sched->budget(*current) == Duration::zero()) {
            r.reason = StopReason::budget;
        } else if (pc.sched->budgeted() && v.spec.criticality == Criticality::hi &&
                   v.executed_since_tick == v.spec.c_opt) {
            r.reason = StopReason::checkpoint;
        } else {
            r.reason = StopReason::slice;
        }
        r.mode = pc.sched->mode();
        r.deadline = pc.sched->deadline(*current);
        r.budget = pc.sched->budget(*current);
        emit(r);
        pc.current.reset();
    }

    if (next) {
        if (pc.idle) {
            if (t > pc.idle_since) {
                TraceRecord r;
                r.time = t;
                r.kind = RecordKind::idle;
                r.pcpu = p;
                r.args = {us(t - pc.idle_since), 0, 0};
                emit(r);
            }
            pc.idle = false;
        }
        const auto& v = vcpus_[next->vcpu];
        pc.current = next->vcpu;
        pc.segment_start = t;
        pc.slice_left = next->slice;
        pc.ran_in_dispatch = Duration::zero();
        auto r = record(t, RecordKind::dispatch, v);
        r.args = {us(next->slice), next->slack ? 1u : 0u, 0};
        r.mode = pc.sched->mode();
        r.deadline = pc.sched->deadline(next->vcpu);
        r.budget = pc.sched->budget(next->vcpu);
        emit(r);
    } else if (!pc.idle) {
        pc.idle = true;
        pc.idle_since = t;
    }
    arm(p, t);
}

void Engine::finish() {
    const TimePoint end = info_.end;
    for (PCpuId p = 0; p < pcpus_.size(); ++p) settle(p, end);
    for (PCpuId p = 0; p < pcpus_.size(); ++p) {
        auto& pc = pcpus_[p];
        if (pc.current) {
            const auto& v = vcpus_[*pc.current];
            auto r = record(end, RecordKind::deschedule, v);
            r.args = {us(pc.ran_in_dispatch), 0, 0};
            r.reason = StopReason::horizon;
            r.mode = pc.sched->mode();
            r.deadline = pc.sched->deadline(*pc.current);
            r.budget = pc.sched->budget(*pc.current);
            emit(r);
            pc.current.reset();
        } else if (end > pc.idle_since && info_.plan.per_pcpu.contains(p)) {
            // cores without vCPUs are placement-idle and produce no records
            TraceRecord r;
            r.time = end;
            r.kind = RecordKind::idle;
            r.pcpu = p;
            r.args = {us(end - pc.idle_since), 0, 0};
            emit(r);
        }
    }
    TraceRecord r;
    r.time = end;
    r.kind = RecordKind::sim_end;
    emit(r);

    for (const auto& v : vcpus_) {
        for (const auto& item : v.queue) {
            if (item.kind == ItemKind::request) {
                result_.in_flight.push_back({item.request_id, v.spec.id, v.spec.vm, item.arrival});
            }
        }
    }
}

RunResult Engine::run() {
    const auto& s = info_.scenario;
    for (PCpuId p = 0; p < s.host.num_pcpus; ++p) {
        PCpuSim pc;
        pc.sched = make_scheduler(s.policy, p, s.host.theta0, s.credit_slice);
        pcpus_.push_back(std::move(pc));
    }

    vcpus_.resize(info_.vcpus.size());
    for (const auto& vm : info_.vms) {
        for (std::size_t c = 0; c < vm.vcpus.size(); ++c) {
            const auto& spec = vm.vcpus[c];
            auto& v = vcpus_[spec.id];
            v.spec = spec;
            v.pcpu = info_.plan.assignments.at(spec.id);
            v.start = vm.start;
            v.workload = &vm.workload;
            pcpus_[v.pcpu].sched->add_vcpu(spec);
            if (vm.start < info_.end) push(vm.start, EventKind::timer_tick, spec.id);

            if (const auto* w = std::get_if<PoissonRequests>(&vm.workload)) {
                // Streams are keyed by (block, instance within block, vCPU) so
                // growing one block leaves every other VM's arrivals intact.
                std::uint64_t k = 0;
                for (const auto& other : info_.vms) {
                    if (other.block == vm.block && other.id < vm.id) ++k;
                }
                const std::uint64_t base = w->seed != 0 ? w->seed : s.seed;
                const std::uint64_t stream = (static_cast<std::uint64_t>(vm.block) << 40) | (k << 20) | c;
                v.arrivals.emplace(w->total_rate(), mix_seed(base, stream), vm.start);
                const auto first = v.arrivals->next();
                if (first < info_.end) push(first, EventKind::request_arrival, spec.id);
            } else if (!std::holds_alternative<IdleWorkload>(vm.workload)) {
                if (vm.start < info_.end) push(vm.start, EventKind::work_phase_change, spec.id);
            }
        }
    }
    push(info_.end, EventKind::simulation_end, 0);

    while (!queue_.empty()) {
        const Event e = queue_.top();
        queue_.pop();
        if (e.kind == EventKind::simulation_end) break;
        if (e.time >= info_.end) continue;
        ++result_.events;
        switch (e.kind) {
        case EventKind::timer_tick: on_tick(vcpus_[e.target], e.time); break;
        case EventKind::slice_expiry: on_slice(e.target, e.token, e.time); break;
        case EventKind::request_arrival: on_arrival(vcpus_[e.target], e.time); break;
        case EventKind::work_phase_change: on_phase(vcpus_[e.target], e.time); break;
        case EventKind::simulation_end: break;
        }
        if (queue_.empty() || queue_.top().time != e.time) {
            for (PCpuId p = 0; p < pcpus_.size(); ++p) {
                if (pcpus_[p].dirty) reschedule(p, e.time);
            }
        }
    }
    finish();
    result_.info = std::move(info_);
    return std::move(result_);
}

}  // namespace

RunResult run(const Scenario& scenario, TraceSink& sink) {
    Engine engine(prepare(scenario), sink);
    return engine.run();
}

}  // namespace akita
