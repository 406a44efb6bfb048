#include <akita/trace.hpp>

#include <ostream>

namespace akita {

std::string_view to_string(RecordKind k) noexcept {
    switch (k) {
    case RecordKind::dispatch: return "dispatch";
    case RecordKind::deschedule: return "deschedule";
    case RecordKind::idle: return "idle";
    case RecordKind::replenish: return "replenish";
    case RecordKind::tick: return "tick";
    case RecordKind::mode_switch: return "mode_switch";
    case RecordKind::arrival: return "arrival";
    case RecordKind::completion: return "completion";
    case RecordKind::release: return "release";
    case RecordKind::finish: return "finish";
    case RecordKind::sim_end: return "sim_end";
    }
    return "unknown";
}

std::string_view to_string(StopReason r) noexcept {
    switch (r) {
    case StopReason::none: return "none";
    case StopReason::preempted: return "preempted";
    case StopReason::yield: return "yield";
    case StopReason::budget: return "budget";
    case StopReason::checkpoint: return "checkpoint";
    case StopReason::slice: return "slice";
    case StopReason::horizon: return "horizon";
    }
    return "unknown";
}

std::string format_detail(const TraceRecord& r) {
    const auto n = [](std::uint64_t v) { return std::to_string(v); };
    const auto& a = r.args;
    switch (r.kind) {
    case RecordKind::dispatch:
        return "slice=" + n(a[0]) + ";slack=" + n(a[1]);
    case RecordKind::deschedule:
        return "ran=" + n(a[0]) + ";why=" + std::string(to_string(r.reason));
    case RecordKind::idle:
        return "dur=" + n(a[0]);
    case RecordKind::replenish:
    case RecordKind::tick:
        if (r.first_tick) return "first=1";
        return "prev_executed=" + n(a[0]) + ";prev_demand=" + n(a[1]) + ";prev_budget=" + n(a[2]);
    case RecordKind::mode_switch:
        return "to=" + std::string(to_string(r.mode.value_or(PCpuMode::lo)));
    case RecordKind::arrival:
        return "req=" + n(a[0]) + ";service=" + n(a[1]);
    case RecordKind::completion:
        return "req=" + n(a[0]) + ";arrival=" + n(a[1]) + ";dispatch=" + n(a[2]);
    case RecordKind::release:
        return "work=" + n(a[0]) + ";abandoned=" + n(a[1]);
    case RecordKind::finish:
        return "exec_time=" + n(a[0]);
    case RecordKind::sim_end:
        return "";
    }
    return "";
}

std::string format_row(const TraceRecord& r) {
    std::string row;
    row.reserve(80);
    row += std::to_string(us(r.time));
    row += ',';
    if (r.pcpu) row += std::to_string(*r.pcpu);
    row += ',';
    row += to_string(r.kind);
    row += ',';
    if (r.vcpu) row += std::to_string(*r.vcpu);
    row += ',';
    if (r.vm) row += std::to_string(*r.vm);
    row += ',';
    if (r.mode) row += to_string(*r.mode);
    row += ',';
    if (r.deadline) row += std::to_string(us(*r.deadline));
    row += ',';
    if (r.budget) row += std::to_string(us(*r.budget));
    row += ',';
    row += format_detail(r);
    return row;
}

CsvTraceWriter::CsvTraceWriter(std::ostream& out) : out_(out) {
    out_ << kTraceHeader << '\n';
}

void CsvTraceWriter::on_record(const TraceRecord& r) {
    out_ << format_row(r) << '\n';
}

}  // namespace akita
