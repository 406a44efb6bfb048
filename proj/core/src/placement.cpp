#include <akita/placement.hpp>

#include <akita/error.hpp>

namespace akita {

AdmissionResult run_admission(AdmissionRule rule, std::span<const VCpuSpec> specs) {
    return rule == AdmissionRule::edf_vd ? admission_test(specs) : edf_admission_test(specs);
}

UtilSummary PlacementPlan::util(PCpuId p) const {
    const auto it = per_pcpu.find(p);
    if (it == per_pcpu.end()) return {};
    return compute_utilizations(it->second);
}

AdmissionResult PlacementPlan::admission(PCpuId p) const {
    const auto it = per_pcpu.find(p);
    if (it == per_pcpu.end()) return run_admission(options.rule, {});
    return run_admission(options.rule, it->second);
}

std::size_t PlacementPlan::used_cores() const {
    std::size_t n = 0;
    for (const auto& [p, set] : per_pcpu) n += set.empty() ? 0 : 1;
    return n;
}

std::vector<PCpuId> PlacementPlan::usable_pcpus() const {
    std::vector<PCpuId> out;
    for (PCpuId p = 0; p < options.num_pcpus; ++p) {
        if (!options.reserved.contains(p)) out.push_back(p);
    }
    return out;
}

namespace {

// Tries to place one vCPU; returns the failure reason of the last core
// tried when nothing fits.
std::optional<std::string> place_one(PlacementPlan& plan, const VCpuSpec& spec,
                                     const std::vector<PCpuId>& cores) {
    std::string last_reason = "no usable pCPU";
    for (auto p : cores) {
        auto candidate = plan.per_pcpu[p];
        candidate.push_back(spec);
        auto result = run_admission(plan.options.rule, candidate);
        if (result) {
            plan.per_pcpu[p] = std::move(candidate);
            plan.assignments[spec.id] = p;
            return std::nullopt;
        }
        last_reason = "pCPU " + std::to_string(p) + ": " + result.reason();
    }
    return last_reason;
}

}  // namespace

PlacementPlan first_fit_assign(std::span<const VCpuSpec> specs, const PlacementOptions& options) {
    if (options.num_pcpus == 0) throw ValidationError("num_pcpus", "must be at least 1");
    PlacementPlan plan;
    plan.options = options;
    const auto cores = plan.usable_pcpus();
    for (const auto& s : specs) {
        validate(s);
        if (plan.assignments.contains(s.id)) {
            throw ValidationError("id", "duplicate vCPU id " + std::to_string(s.id));
        }
        if (auto why = place_one(plan, s, cores)) plan.rejected.push_back({s.id, *why});
    }
    return plan;
}

PlacementPlan first_fit_assign(std::span<const VCpuSpec> specs, std::uint32_t num_pcpus) {
    PlacementOptions opts;
    opts.num_pcpus = num_pcpus;
    return first_fit_assign(specs, opts);
}

VmAdmission admit_vm(PlacementPlan& plan, std::span<const VCpuSpec> vm) {
    PlacementPlan trial = plan;
    const auto cores = trial.usable_pcpus();
    VmAdmission out;
    for (const auto& s : vm) {
        validate(s);
        if (trial.assignments.contains(s.id)) {
            throw ValidationError("id", "duplicate vCPU id " + std::to_string(s.id));
        }
        if (auto why = place_one(trial, s, cores)) {
            out.accepted = false;
            out.rejected.push_back({s.id, *why});
        }
    }
    if (out.accepted) plan = std::move(trial);
    return out;
}

}  // namespace akita
