#include <akita/scenario.hpp>

#include <akita/error.hpp>

#include <stdexcept>

namespace akita {

std::string_view to_string(PolicyKind p) noexcept {
    switch (p) {
    case PolicyKind::akita: return "akita";
    case PolicyKind::edf: return "edf";
    case PolicyKind::credit: return "credit";
    }
    return "unknown";
}

PolicyKind parse_policy(std::string_view name) {
    if (name == "akita") return PolicyKind::akita;
    if (name == "edf") return PolicyKind::edf;
    if (name == "credit") return PolicyKind::credit;
    throw std::invalid_argument("unknown policy '" + std::string(name) +
                                "' (expected akita, edf or credit)");
}

std::vector<VmInstance> expand(const Scenario& s) {
    std::vector<VmInstance> out;
    VCpuId next_vcpu = 0;
    for (std::size_t b = 0; b < s.vms.size(); ++b) {
        const auto& block = s.vms[b];
        for (std::uint32_t k = 0; k < block.count; ++k) {
            VmInstance vm;
            vm.id = static_cast<VmId>(out.size());
            vm.name = block.count > 1 ? block.name + "#" + std::to_string(k) : block.name;
            vm.block = b;
            vm.start = kEpoch + block.start;
            vm.workload = block.workload;
            for (std::uint32_t c = 0; c < block.vcpus; ++c) {
                VCpuSpec spec;
                spec.id = next_vcpu++;
                spec.vm = vm.id;
                spec.c_opt = block.c_opt;
                spec.c_pes = block.c_pes;
                spec.period = block.period;
                spec.criticality = block.criticality;
                vm.vcpus.push_back(spec);
            }
            out.push_back(std::move(vm));
        }
    }
    return out;
}

void validate(const Scenario& s) {
    if (s.horizon == Duration::zero()) throw ValidationError("horizon", "must be positive");
    if (s.host.num_pcpus == 0) throw ValidationError("num_pcpus", "must be at least 1");
    if (s.host.theta0 == 0) throw ValidationError("theta0", "must be positive");
    if (s.credit_slice == Duration::zero()) throw ValidationError("credit_slice", "must be positive");
    if (s.share_window == Duration::zero()) throw ValidationError("share_window", "must be positive");
    for (auto r : s.host.reserved_pcpus) {
        if (r >= s.host.num_pcpus) {
            throw ValidationError("reserved_pcpus", "pCPU " + std::to_string(r) + " does not exist");
        }
    }
    std::set<std::string> names;
    for (const auto& vm : s.vms) {
        if (vm.name.empty()) throw ValidationError("name", "VM name must not be empty");
        if (!names.insert(vm.name).second) throw ValidationError("name", "duplicate VM name '" + vm.name + "'");
        if (vm.vcpus == 0) throw ValidationError("vcpus", "VM '" + vm.name + "' needs at least one vCPU");
        VCpuSpec probe;
        probe.c_opt = vm.c_opt;
        probe.c_pes = vm.c_pes;
        probe.period = vm.period;
        probe.criticality = vm.criticality;
        validate(probe);
        validate(vm.workload);
    }
}

PlacementOptions placement_options(const Scenario& s) {
    PlacementOptions opts;
    opts.num_pcpus = s.host.num_pcpus;
    opts.reserved = s.host.reserved_pcpus;
    opts.rule = s.policy == PolicyKind::akita ? AdmissionRule::edf_vd : AdmissionRule::edf_utilization;
    return opts;
}

PlacementPlan place(const Scenario& s, std::span<const VmInstance> vms) {
    PlacementPlan plan;
    plan.options = placement_options(s);
    for (const auto& vm : vms) {
        auto verdict = admit_vm(plan, vm.vcpus);
        for (auto& r : verdict.rejected) {
            r.reason = "VM '" + vm.name + "' " + r.reason;
            plan.rejected.push_back(std::move(r));
        }
        if (!verdict.accepted) {
            // The VM's other vCPUs are part of the same all-or-nothing refusal.
            for (const auto& v : vm.vcpus) {
                bool listed = false;
                for (const auto& r : plan.rejected) listed = listed || r.vcpu == v.id;
                if (!listed) plan.rejected.push_back({v.id, "VM '" + vm.name + "' rejected as a whole"});
            }
        }
    }
    return plan;
}

}  // namespace akita
