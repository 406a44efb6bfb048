#pragma once

#include <akita/rational.hpp>
#include <akita/time.hpp>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace akita {

using VCpuId = std::uint32_t;
using VmId = std::uint32_t;
using PCpuId = std::uint32_t;

enum class Criticality : std::uint8_t { lo, hi };

[[nodiscard]] std::string_view to_string(Criticality c) noexcept;

/// Static contract of one periodic-server vCPU.
struct VCpuSpec {
    VCpuId id = 0;
    VmId vm = 0;
    Duration c_opt{};                 ///< optimistic budget
    std::optional<Duration> c_pes;    ///< pessimistic budget, HI only
    Duration period{};
    Criticality criticality = Criticality::lo;

    /// Budget granted at every timer tick: C_pes for HI, C_opt for LO.
    [[nodiscard]] Duration full_budget() const noexcept {
        return criticality == Criticality::hi && c_pes ? *c_pes : c_opt;
    }

    friend bool operator==(const VCpuSpec&, const VCpuSpec&) = default;
};

/// Throws ValidationError naming the first field that breaks the contract.
void validate(const VCpuSpec& spec);

struct UtilSummary {
    Rational u1_1;  ///< sum of C_opt/T over LO vCPUs
    Rational u2_1;  ///< sum of C_opt/T over HI vCPUs
    Rational u2_2;  ///< sum of C_pes/T over HI vCPUs

    friend bool operator==(const UtilSummary&, const UtilSummary&) = default;
};

[[nodiscard]] UtilSummary compute_utilizations(std::span<const VCpuSpec> specs);

/// EDF-VD deadline shrinking factor x = U_2(1) / (1 - U_1(1)).
/// Throws InfeasibleError when U_1(1) >= 1.
[[nodiscard]] Rational compute_scaling_factor(const UtilSummary& u);

enum class AdmissionCondition : std::uint8_t {
    none,
    lo_mode_capacity,   ///< U_1(1) + U_2(1) <= 1, i.e. x <= 1
    hi_mode_capacity,   ///< x * U_1(1) + U_2(2) <= 1
    edf_capacity,       ///< plain EDF: sum of C_opt/T <= 1
};

[[nodiscard]] std::string_view to_string(AdmissionCondition c) noexcept;

struct AdmissionResult {
    bool accepted = true;
    AdmissionCondition failed = AdmissionCondition::none;
    UtilSummary util;
    std::optional<Rational> x;          ///< absent when U_1(1) >= 1
    std::optional<Rational> hi_bound;   ///< x * U_1(1) + U_2(2), when x exists

    [[nodiscard]] explicit operator bool() const noexcept { return accepted; }
    [[nodiscard]] std::string reason() const;
};

/// EDF-VD mixed-criticality schedulability test for one core.
[[nodiscard]] AdmissionResult admission_test(std::span<const VCpuSpec> specs);

/// Criticality-blind EDF test (sum of C_opt/T <= 1) used by the baseline
/// policies.
[[nodiscard]] AdmissionResult edf_admission_test(std::span<const VCpuSpec> specs);

/// now + x*T for HI vCPUs, now + T for LO vCPUs; rounded down to the
/// microsecond.
[[nodiscard]] TimePoint virtual_deadline(const VCpuSpec& spec, TimePoint now, const Rational& x);

}  // namespace akita
