#include <akita/error.hpp>
#include <akita/simulator.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "support.hpp"

using namespace akita;
using namespace akita::testing;

namespace {

std::vector<TraceRecord> of_kind(const std::vector<TraceRecord>& trace, RecordKind k) {
    std::vector<TraceRecord> out;
    std::copy_if(trace.begin(), trace.end(), std::back_inserter(out), [k](const auto& r) { return r.kind == k; });
    return out;
}

VmSpec hog(std::string name, Duration c_opt, Duration period = 100_ms) {
    return lo_vm(std::move(name), c_opt, period, DutyCycleCpu{1.0, period});
}

}  // namespace

TEST(Run, EmptyScenarioYieldsOnlySimEnd) {
    const auto r = record(single_core(1_s));
    ASSERT_EQ(r.trace.size(), 1u);
    EXPECT_EQ(r.trace[0].kind, RecordKind::sim_end);
    EXPECT_EQ(r.trace[0].time, kEpoch + 1_s);
}

TEST(Run, RejectsScenarioThatDoesNotFit) {
    auto s = single_core(1_s);
    auto vm = hog("q", 25_ms);
    vm.count = 5;
    s.vms.push_back(vm);
    try {
        (void)record(s);
        FAIL() << "placement should have been rejected";
    } catch (const PlacementRejected& e) {
        EXPECT_EQ(e.plan().rejected.size(), 1u);
    }
}

TEST(Run, SoloMemcachedCompletesExpectedRequestCount) {
    auto s = single_core(10_s);
    s.vms.push_back(hi_vm("memcached", 5_ms, 25_ms, 100_ms, poisson(50, 700.0, 6_us)));
    const auto r = record(s);
    // 350k expected, sd ~590
    EXPECT_NEAR(static_cast<double>(r.result.arrivals), 350000.0, 3000.0);
    EXPECT_EQ(r.result.arrivals, r.result.completions + r.result.in_flight.size());
}

TEST(DutyCycle, QuarterUtilizationReleasesQuarterWindow) {
    auto s = single_core(1_s);
    s.vms.push_back(lo_vm("d", 25_ms, 100_ms, DutyCycleCpu{0.25, 100_ms}));
    const auto r = record(s);
    const auto rel = of_kind(r.trace, RecordKind::release);
    ASSERT_EQ(rel.size(), 10u);
    for (const auto& x : rel) {
        EXPECT_EQ(x.args[0], 25000u);
        EXPECT_EQ(x.args[1], 0u);
    }
    const auto shares = cpu_shares(r.result.info, r.trace, 100_ms);
    for (double v : shares.at(0)) EXPECT_DOUBLE_EQ(v, 0.25);
    // the guest runs out of work every window
    for (const auto& d : of_kind(r.trace, RecordKind::deschedule)) EXPECT_EQ(d.reason, StopReason::yield);
}

TEST(FiniteWork, HalfShareDoublesExecutionTime) {
    auto s = single_core(25_s);
    s.vms.push_back(hog("hog", 50_ms));
    s.vms.push_back(lo_vm("job", 50_ms, 100_ms, FiniteWork{10_s}));
    const auto r = record(s);
    const auto fin = of_kind(r.trace, RecordKind::finish);
    ASSERT_EQ(fin.size(), 1u);
    EXPECT_NEAR(static_cast<double>(fin[0].args[0]), 20e6, 0.2e6);
}

TEST(Credit, AlwaysRunnableVcpusRotateThirtyMsSlices) {
    auto s = single_core(1_s, PolicyKind::credit);
    auto vm = hog("h", 25_ms);
    vm.count = 4;
    s.vms.push_back(vm);
    const auto r = record(s);
    const auto disp = of_kind(r.trace, RecordKind::dispatch);
    ASSERT_GE(disp.size(), 30u);
    // simultaneous wake-ups are each boosted to the head, so the cycle starts with the last one
    std::set<VCpuId> first;
    for (std::size_t i = 0; i < 4; ++i) first.insert(*disp[i].vcpu);
    EXPECT_EQ(first.size(), 4u);
    for (std::size_t i = 0; i < disp.size(); ++i) {
        if (i >= 4) EXPECT_EQ(*disp[i].vcpu, *disp[i - 4].vcpu) << "dispatch " << i;
        EXPECT_EQ(disp[i].time, kEpoch + Duration{30000 * i});
    }
    for (const auto& d : of_kind(r.trace, RecordKind::deschedule)) {
        if (d.reason != StopReason::horizon) EXPECT_EQ(d.args[0], 30000u);
    }
}

TEST(Credit, WokenVcpuIsDispatchedNext) {
    auto s = single_core(20_s, PolicyKind::credit);
    auto h = hog("h", 25_ms);
    h.count = 3;
    s.vms.push_back(h);
    s.vms.push_back(lo_vm("io", 5_ms, 100_ms, poisson(1, 20.0)));
    const auto r = record(s);
    const VCpuId io = 3;
    std::size_t checked = 0;
    for (std::size_t i = 0; i < r.trace.size(); ++i) {
        const auto& a = r.trace[i];
        if (a.kind != RecordKind::arrival) continue;
        // the next dispatch after an arrival belongs to the I/O vCPU
        for (std::size_t j = i + 1; j < r.trace.size(); ++j) {
            if (r.trace[j].kind != RecordKind::dispatch) continue;
            EXPECT_EQ(*r.trace[j].vcpu, io) << "arrival at " << us(a.time);
            EXPECT_LE(r.trace[j].time - a.time, 30_ms);
            ++checked;
            break;
        }
    }
    EXPECT_GT(checked, 300u);
}

TEST(Credit, SingleVcpuRunsContinuously) {
    auto s = single_core(2_s, PolicyKind::credit);
    s.vms.push_back(hog("solo", 50_ms));
    const auto r = record(s);
    EXPECT_EQ(of_kind(r.trace, RecordKind::dispatch).size(), 1u);
    EXPECT_TRUE(of_kind(r.trace, RecordKind::idle).empty());
    const auto desc = of_kind(r.trace, RecordKind::deschedule);
    ASSERT_EQ(desc.size(), 1u);
    EXPECT_EQ(desc[0].args[0], 2000000u);
}

TEST(Edf, EarlierDeadlineWins) {
    auto s = single_core(100_ms, PolicyKind::edf);
    s.vms.push_back(hog("slow", 10_ms, 50_ms));
    s.vms.push_back(hog("fast", 10_ms, 20_ms));
    const auto r = record(s);
    const auto disp = of_kind(r.trace, RecordKind::dispatch);
    ASSERT_FALSE(disp.empty());
    EXPECT_EQ(*disp[0].vcpu, 1u);
    EXPECT_EQ(disp[0].time, kEpoch);
}

TEST(Edf, HiVcpuIsCappedAtOptimisticBudgetUnderContention) {
    auto s = single_core(2_s, PolicyKind::edf);
    s.vms.push_back(hi_vm("hi", 5_ms, 25_ms, 100_ms, DutyCycleCpu{0.25, 100_ms}));
    s.vms.push_back(hog("a", 25_ms));
    s.vms.push_back(hog("b", 25_ms));
    s.vms.push_back(hog("c", 45_ms));
    const auto r = record(s);
    std::size_t periods = 0;
    for (const auto& t : of_kind(r.trace, RecordKind::replenish)) {
        if (t.vcpu != 0u || t.first_tick) continue;
        EXPECT_EQ(t.args[0], 5000u);
        EXPECT_EQ(t.args[1], 25000u);
        ++periods;
    }
    EXPECT_EQ(periods, 19u);
    EXPECT_TRUE(of_kind(r.trace, RecordKind::mode_switch).empty());
}

TEST(Akita, SameScenarioServesHiPessimisticBudget) {
    // the same demand under akita escalates and gets its full 25 ms
    auto s = single_core(2_s);
    s.vms.push_back(hi_vm("hi", 5_ms, 25_ms, 100_ms, DutyCycleCpu{0.25, 100_ms}));
    auto h = hog("h", 25_ms);
    h.count = 3;
    s.vms.push_back(h);
    const auto r = record(s);
    for (const auto& t : of_kind(r.trace, RecordKind::replenish)) {
        if (t.vcpu == 0u && !t.first_tick) EXPECT_EQ(t.args[0], 25000u);
    }
    const auto sw = of_kind(r.trace, RecordKind::mode_switch);
    ASSERT_FALSE(sw.empty());
    EXPECT_EQ(sw[0].time, kEpoch + 5_ms);
    EXPECT_EQ(sw[0].mode, PCpuMode::hi);
}
