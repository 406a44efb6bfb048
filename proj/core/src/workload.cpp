#include <akita/workload.hpp>

#include <akita/error.hpp>

#include <cmath>

namespace akita {

namespace {

void check_fraction(double u, const char* field) {
    if (!(u >= 0.0 && u <= 1.0)) throw ValidationError(field, "must lie in [0, 1]");
}

}  // namespace

void validate(const WorkloadSpec& w) {
    std::visit(
        [](const auto& spec) {
            using T = std::decay_t<decltype(spec)>;
            if constexpr (std::is_same_v<T, PoissonRequests>) {
                if (spec.connections == 0) throw ValidationError("connections", "must be positive");
                if (!(spec.rate_per_connection > 0.0) || !std::isfinite(spec.rate_per_connection)) {
                    throw ValidationError("rate_per_connection", "must be positive");
                }
                if (spec.service_time == Duration::zero()) {
                    throw ValidationError("service_time", "must be positive");
                }
            } else if constexpr (std::is_same_v<T, DutyCycleCpu>) {
                check_fraction(spec.utilization, "utilization");
                if (spec.window == Duration::zero()) throw ValidationError("window", "must be positive");
            } else if constexpr (std::is_same_v<T, FiniteWork>) {
                if (spec.total_work == Duration::zero()) {
                    throw ValidationError("total_work", "must be positive");
                }
            } else if constexpr (std::is_same_v<T, PhasedCpu>) {
                if (spec.window == Duration::zero()) throw ValidationError("window", "must be positive");
                if (spec.phases.empty()) throw ValidationError("phases", "at least one phase required");
                for (std::size_t i = 0; i < spec.phases.size(); ++i) {
                    check_fraction(spec.phases[i].utilization, "utilization");
                    if (i > 0 && spec.phases[i].start <= spec.phases[i - 1].start) {
                        throw ValidationError("phases", "phase starts must be strictly increasing");
                    }
                }
            }
        },
        w);
}

double phase_utilization(const PhasedCpu& w, Duration offset) noexcept {
    double u = 0.0;
    for (const auto& p : w.phases) {
        if (p.start <= offset) u = p.utilization;
        else break;
    }
    return u;
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

PoissonStream::PoissonStream(double rate_per_second, std::uint64_t seed, TimePoint start)
    : engine_(seed), mean_gap_us_(1e6 / rate_per_second), clock_us_(static_cast<double>(us(start))) {
    if (!(rate_per_second > 0.0)) throw ValidationError("rate", "must be positive");
}

TimePoint PoissonStream::next() {
    // 53 random bits -> u in [0, 1); 1 - u is in (0, 1] so the log is finite
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    clock_us_ += -std::log1p(-u) * mean_gap_us_;
    auto stamp = static_cast<std::uint64_t>(std::floor(clock_us_));
    if (last_ && stamp <= *last_) stamp = *last_ + 1;
    last_ = stamp;
    return at_us(stamp);
}

std::vector<TimePoint> poisson_arrivals(double rate_per_second, std::uint64_t seed, Duration horizon) {
    std::vector<TimePoint> out;
    if (horizon == Duration::zero()) return out;
    PoissonStream stream(rate_per_second, seed);
    const TimePoint end = kEpoch + horizon;
    for (auto t = stream.next(); t < end; t = stream.next()) out.push_back(t);
    return out;
}

}  // namespace akita
