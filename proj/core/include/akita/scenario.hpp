#pragma once

#include <akita/mcs.hpp>
#include <akita/placement.hpp>
#include <akita/workload.hpp>

#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace akita {

enum class PolicyKind : std::uint8_t { akita, edf, credit };

[[nodiscard]] std::string_view to_string(PolicyKind p) noexcept;
/// Throws std::invalid_argument for unknown names.
[[nodiscard]] PolicyKind parse_policy(std::string_view name);

struct HostSpec {
    std::uint32_t num_pcpus = 1;
    std::set<PCpuId> reserved_pcpus;
    unsigned theta0 = 2;

    friend bool operator==(const HostSpec&, const HostSpec&) = default;
};

/// One VM block of a scenario. `count` stamps out identical instances;
/// each of the `vcpus` vCPUs runs its own copy of the workload.
struct VmSpec {
    std::string name;
    Criticality criticality = Criticality::lo;
    Duration c_opt{};
    std::optional<Duration> c_pes;
    Duration period{};
    Duration start{};  ///< offset of the first period and of the workload
    std::uint32_t vcpus = 1;
    std::uint32_t count = 1;
    WorkloadSpec workload;

    friend bool operator==(const VmSpec&, const VmSpec&) = default;
};

struct Scenario {
    HostSpec host;
    PolicyKind policy = PolicyKind::akita;
    Duration horizon{};
    std::uint64_t seed = 1;
    Duration credit_slice{30000};
    Duration share_window{1000000};
    std::vector<VmSpec> vms;

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// A concrete VM after `count` expansion, with global ids.
struct VmInstance {
    VmId id = 0;
    std::string name;
    std::size_t block = 0;
    TimePoint start{};
    WorkloadSpec workload;
    std::vector<VCpuSpec> vcpus;
};

/// Expands VM blocks in file order. VM ids and vCPU ids are dense and
/// start at 0; an instance of a block with count > 1 is named "name#k".
[[nodiscard]] std::vector<VmInstance> expand(const Scenario& s);

/// Throws ValidationError (or ConfigError) when the scenario is unusable.
void validate(const Scenario& s);

/// Placement options implied by the host and the policy: EDF-VD for
/// akita, the criticality-blind utilization test for the baselines.
[[nodiscard]] PlacementOptions placement_options(const Scenario& s);

/// First-fit placement of every vCPU of every instance.
[[nodiscard]] PlacementPlan place(const Scenario& s, std::span<const VmInstance> vms);

}  // namespace akita
