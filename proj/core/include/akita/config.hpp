#pragma once

#include <akita/scenario.hpp>

#include <iosfwd>
#include <string>

namespace akita {

/// Parses a YAML scenario. Durations are strings with a us, ms or s suffix.
/// Every failure, including unknown keys and model validation, surfaces as
/// ConfigError carrying the 1-based line of the offending node.
///
///   host: {num_pcpus: 1, reserved_pcpus: [], theta0: 2}
///   policy: akita
///   horizon: 120s
///   vms:
///     - name: memcached
///       criticality: hi
///       c_opt: 500us
///       c_pes: 2500us
///       period: 10ms
///       workload: {type: poisson, connections: 50, rate_per_connection: 700}
[[nodiscard]] Scenario parse_scenario(const std::string& text);
[[nodiscard]] Scenario load_scenario(const std::string& path);

/// Canonical YAML form; parse_scenario(to_yaml(s)) == s.
[[nodiscard]] std::string to_yaml(const Scenario& s);

/// Host and VM list for the admission tool. Accepts the scenario format;
/// horizon and workloads are optional there and ignored.
struct AdmitSpec {
    HostSpec host;
    PolicyKind policy = PolicyKind::akita;
    std::vector<VmSpec> vms;
};

[[nodiscard]] AdmitSpec parse_admit_spec(const std::string& text);
[[nodiscard]] AdmitSpec load_admit_spec(const std::string& path);

}  // namespace akita
