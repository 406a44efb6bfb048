#pragma once

#include <akita/metrics.hpp>
#include <akita/simulator.hpp>

#include <vector>

namespace akita::testing {

using namespace akita::literals;

inline VCpuSpec lo_vcpu(VCpuId id, Duration c_opt, Duration period) {
    VCpuSpec s;
    s.id = id;
    s.vm = id;
    s.c_opt = c_opt;
    s.period = period;
    s.criticality = Criticality::lo;
    return s;
}

inline VCpuSpec hi_vcpu(VCpuId id, Duration c_opt, Duration c_pes, Duration period) {
    VCpuSpec s = lo_vcpu(id, c_opt, period);
    s.c_pes = c_pes;
    s.criticality = Criticality::hi;
    return s;
}

inline VmSpec lo_vm(std::string name, Duration c_opt, Duration period, WorkloadSpec w) {
    VmSpec vm;
    vm.name = std::move(name);
    vm.criticality = Criticality::lo;
    vm.c_opt = c_opt;
    vm.period = period;
    vm.workload = std::move(w);
    return vm;
}

inline VmSpec hi_vm(std::string name, Duration c_opt, Duration c_pes, Duration period, WorkloadSpec w) {
    VmSpec vm = lo_vm(std::move(name), c_opt, period, std::move(w));
    vm.criticality = Criticality::hi;
    vm.c_pes = c_pes;
    return vm;
}

inline Scenario single_core(Duration horizon, PolicyKind policy = PolicyKind::akita) {
    Scenario s;
    s.host.num_pcpus = 1;
    s.policy = policy;
    s.horizon = horizon;
    return s;
}

inline PoissonRequests poisson(std::uint32_t connections, double rate, Duration service = Duration{46}) {
    PoissonRequests p;
    p.connections = connections;
    p.rate_per_connection = rate;
    p.service_time = service;
    return p;
}

struct Recorded {
    RunResult result;
    std::vector<TraceRecord> trace;
};

inline Recorded record(const Scenario& s) {
    VectorSink sink;
    auto result = run(s, sink);
    return {std::move(result), std::move(sink.records)};
}

}  // namespace akita::testing
