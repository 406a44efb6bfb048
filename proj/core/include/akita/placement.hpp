#pragma once

#include <akita/mcs.hpp>

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace akita {

/// Which per-core test decides whether a vCPU fits.
enum class AdmissionRule : std::uint8_t {
    edf_vd,          ///< mixed-criticality test (conditions on x and U_2(2))
    edf_utilization, ///< plain EDF, sum of C_opt/T <= 1
};

struct PlacementOptions {
    std::uint32_t num_pcpus = 1;
    std::set<PCpuId> reserved;  ///< cores withheld from guests (driver domain)
    AdmissionRule rule = AdmissionRule::edf_vd;
};

struct Rejection {
    VCpuId vcpu = 0;
    std::string reason;

    friend bool operator==(const Rejection&, const Rejection&) = default;
};

/// Result of packing vCPUs onto cores. Every vCPU id appears exactly once,
/// either in `assignments` or in `rejected`, and every core's set passes
/// the admission rule.
struct PlacementPlan {
    PlacementOptions options;
    std::map<VCpuId, PCpuId> assignments;
    std::map<PCpuId, std::vector<VCpuSpec>> per_pcpu;  ///< in placement order
    std::vector<Rejection> rejected;

    [[nodiscard]] UtilSummary util(PCpuId p) const;
    [[nodiscard]] AdmissionResult admission(PCpuId p) const;
    [[nodiscard]] std::size_t used_cores() const;
    [[nodiscard]] std::vector<PCpuId> usable_pcpus() const;
    [[nodiscard]] bool all_placed() const noexcept { return rejected.empty(); }
};

[[nodiscard]] AdmissionResult run_admission(AdmissionRule rule, std::span<const VCpuSpec> specs);

/// Places each vCPU, in order, on the lowest-index usable core whose set
/// plus the vCPU passes the admission rule; otherwise records a rejection.
[[nodiscard]] PlacementPlan first_fit_assign(std::span<const VCpuSpec> specs,
                                             const PlacementOptions& options);

/// Convenience overload: `num_pcpus` cores, none reserved, EDF-VD test.
[[nodiscard]] PlacementPlan first_fit_assign(std::span<const VCpuSpec> specs, std::uint32_t num_pcpus);

struct VmAdmission {
    bool accepted = true;
    std::vector<Rejection> rejected;  ///< per-vCPU failures when not accepted
};

/// All-or-nothing admission of one VM. On success every vCPU is placed
/// first-fit into `plan`; on failure `plan` is left untouched.
VmAdmission admit_vm(PlacementPlan& plan, std::span<const VCpuSpec> vm);

}  // namespace akita
