#include <akita/error.hpp>
#include <akita/workload.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "support.hpp"

using namespace akita;
using namespace akita::testing;

TEST(PoissonArrivals, CountMatchesRateAcrossSeeds) {
    // 500/s for 10 s: mean 5000, sd ~71, so +-300 is over four sigma
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
        const auto a = poisson_arrivals(500.0, seed, 10_s);
        EXPECT_NEAR(static_cast<double>(a.size()), 5000.0, 300.0) << "seed " << seed;
    }
}

TEST(PoissonArrivals, StampsStrictlyIncreaseInsideHorizon) {
    const auto a = poisson_arrivals(35000.0, 3, 2_s);
    ASSERT_FALSE(a.empty());
    for (std::size_t i = 1; i < a.size(); ++i) ASSERT_LT(a[i - 1], a[i]);
    EXPECT_LT(a.back(), kEpoch + 2_s);
}

TEST(PoissonArrivals, ZeroHorizonIsEmpty) {
    EXPECT_TRUE(poisson_arrivals(1000.0, 1, Duration::zero()).empty());
}

TEST(PoissonArrivals, SameSeedSameSequence) {
    EXPECT_EQ(poisson_arrivals(700.0, 11, 5_s), poisson_arrivals(700.0, 11, 5_s));
    EXPECT_NE(poisson_arrivals(700.0, 11, 5_s), poisson_arrivals(700.0, 12, 5_s));
}

TEST(PoissonArrivals, GapsLookExponential) {
    const auto a = poisson_arrivals(1000.0, 9, 100_s);
    std::vector<double> gaps;
    for (std::size_t i = 1; i < a.size(); ++i) gaps.push_back(static_cast<double>((a[i] - a[i - 1]).count()));
    double sum = 0;
    for (double g : gaps) sum += g;
    const double mean = sum / static_cast<double>(gaps.size());
    EXPECT_NEAR(mean, 1000.0, 20.0);
    // P(gap > mean) = 1/e for an exponential
    std::size_t above = 0;
    for (double g : gaps) above += g > 1000.0 ? 1 : 0;
    EXPECT_NEAR(static_cast<double>(above) / static_cast<double>(gaps.size()), std::exp(-1.0), 0.01);
}

TEST(PoissonStream, RejectsNonPositiveRate) {
    EXPECT_THROW(PoissonStream(0.0, 1), ValidationError);
    EXPECT_THROW(PoissonStream(-5.0, 1), ValidationError);
}

TEST(PoissonStream, StartsAfterItsOrigin) {
    PoissonStream s(100.0, 4, at_us(7000000));
    EXPECT_GE(s.next(), at_us(7000000));
}

TEST(MixSeed, SeparatesStreams) {
    std::set<std::uint64_t> seen;
    for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(mix_seed(42, s));
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_EQ(mix_seed(42, 7), mix_seed(42, 7));
    EXPECT_NE(mix_seed(42, 7), mix_seed(43, 7));
}

TEST(PhaseUtilization, PicksLastStartedPhase) {
    PhasedCpu w;
    w.phases = {{0_s, 0.1}, {10_s, 0.5}};
    EXPECT_DOUBLE_EQ(phase_utilization(w, 0_s), 0.1);
    EXPECT_DOUBLE_EQ(phase_utilization(w, 9999999_us), 0.1);
    EXPECT_DOUBLE_EQ(phase_utilization(w, 10_s), 0.5);
    EXPECT_DOUBLE_EQ(phase_utilization(w, 100_s), 0.5);

    PhasedCpu late;
    late.phases = {{5_s, 0.3}};
    EXPECT_DOUBLE_EQ(phase_utilization(late, 1_s), 0.0);
}

TEST(ValidateWorkload, NamesTheField) {
    auto field_of = [](const WorkloadSpec& w) -> std::string {
        try {
            validate(w);
        } catch (const ValidationError& e) {
            return std::string(e.field());
        }
        return "";
    };
    auto p = poisson(0, 100.0);
    EXPECT_EQ(field_of(p), "connections");
    EXPECT_EQ(field_of(poisson(1, 0.0)), "rate_per_connection");
    EXPECT_EQ(field_of(poisson(1, 10.0, Duration::zero())), "service_time");
    EXPECT_EQ(field_of(DutyCycleCpu{1.5, 100_ms}), "utilization");
    EXPECT_EQ(field_of(DutyCycleCpu{0.5, Duration::zero()}), "window");
    EXPECT_EQ(field_of(FiniteWork{Duration::zero()}), "total_work");
    PhasedCpu unordered;
    unordered.phases = {{5_s, 0.1}, {1_s, 0.2}};
    EXPECT_EQ(field_of(unordered), "phases");
    EXPECT_EQ(field_of(IdleWorkload{}), "");
    EXPECT_EQ(field_of(DutyCycleCpu{0.25, 100_ms}), "");
}
