#pragma once

#include <akita/time.hpp>

#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

namespace akita {

/// Open-loop request stream: `connections` independent Poisson clients.
/// Each request costs `service_time` of vCPU execution.
struct PoissonRequests {
    std::uint32_t connections = 1;
    double rate_per_connection = 0;  ///< requests per second
    Duration service_time{46};
    std::uint64_t seed = 0;          ///< 0: derived from the scenario seed

    [[nodiscard]] double total_rate() const noexcept { return connections * rate_per_connection; }
    friend bool operator==(const PoissonRequests&, const PoissonRequests&) = default;
};

/// Busy for `utilization * window` at the start of every window. Work not
/// finished when the next window opens is abandoned.
struct DutyCycleCpu {
    double utilization = 0;
    Duration window{100000};
    friend bool operator==(const DutyCycleCpu&, const DutyCycleCpu&) = default;
};

/// Fixed amount of CPU work; the time to finish it is the measurement.
struct FiniteWork {
    Duration total_work{};
    friend bool operator==(const FiniteWork&, const FiniteWork&) = default;
};

struct Phase {
    Duration start{};  ///< offset from the VM start
    double utilization = 0;
    friend bool operator==(const Phase&, const Phase&) = default;
};

/// Duty cycle whose utilization steps at phase boundaries.
struct PhasedCpu {
    std::vector<Phase> phases;
    Duration window{100000};
    friend bool operator==(const PhasedCpu&, const PhasedCpu&) = default;
};

/// No guest work at all.
struct IdleWorkload {
    friend bool operator==(const IdleWorkload&, const IdleWorkload&) = default;
};

using WorkloadSpec = std::variant<IdleWorkload, PoissonRequests, DutyCycleCpu, FiniteWork, PhasedCpu>;

/// Throws ValidationError on non-positive rates, utilizations outside
/// [0, 1] or unordered phases.
void validate(const WorkloadSpec& w);

/// Utilization in effect `offset` after the VM start.
[[nodiscard]] double phase_utilization(const PhasedCpu& w, Duration offset) noexcept;

/// SplitMix64 finalizer; used to derive independent stream seeds.
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

/// Exponential inter-arrival source over std::mt19937_64. The inverse-CDF
/// transform is done here rather than through std::exponential_distribution
/// so sequences are identical across standard library implementations.
class PoissonStream {
public:
    PoissonStream(double rate_per_second, std::uint64_t seed, TimePoint start = kEpoch);

    /// Next arrival; strictly later than the previous one (equal stamps
    /// after microsecond rounding are pushed forward by 1 us).
    [[nodiscard]] TimePoint next();

private:
    std::mt19937_64 engine_;
    double mean_gap_us_;
    double clock_us_;
    std::optional<std::uint64_t> last_;
};

/// All arrivals in [start, start + horizon).
[[nodiscard]] std::vector<TimePoint> poisson_arrivals(double rate_per_second, std::uint64_t seed,
                                                      Duration horizon);

}  // namespace akita
