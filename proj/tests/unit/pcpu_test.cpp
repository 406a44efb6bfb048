#include <akita/error.hpp>
#include <akita/pcpu.hpp>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace akita;
using namespace akita::testing;

namespace {

// Type1 HI (5/25 per 100 ms) and 3x Type2 LO (25 per 100 ms): x = 1/5.
PCpuState table1_core(unsigned theta0 = 2) {
    PCpuState p(0, theta0);
    p.add_vcpu(hi_vcpu(0, 5_ms, 25_ms, 100_ms));
    for (VCpuId i = 1; i <= 3; ++i) p.add_vcpu(lo_vcpu(i, 25_ms, 100_ms));
    for (VCpuId i = 0; i <= 3; ++i) p.enqueue(i);
    return p;
}

void tick_all(PCpuState& p, TimePoint now) {
    for (const auto& v : p.vcpus()) p.replenish(v.spec.id, now);
}

}  // namespace

TEST(Replenish, HiInLoModeGetsPessimisticBudgetAndVirtualDeadline) {
    VCpuRuntime v(hi_vcpu(0, 5_ms, 25_ms, 100_ms));
    replenish(v, at_us(300000), PCpuMode::lo, Rational(1, 5));
    EXPECT_EQ(v.budget_remaining, 25_ms);
    EXPECT_EQ(v.deadline, at_us(320000));
    EXPECT_TRUE(v.active);
    EXPECT_EQ(v.executed_in_period, Duration::zero());
}

TEST(Replenish, HiInHiModeGetsActualDeadline) {
    VCpuRuntime v(hi_vcpu(0, 5_ms, 25_ms, 100_ms));
    replenish(v, at_us(300000), PCpuMode::hi, Rational(1, 5));
    EXPECT_EQ(v.deadline, at_us(400000));
}

TEST(Replenish, LoGetsOptimisticBudgetAndFullPeriod) {
    VCpuRuntime v(lo_vcpu(1, 25_ms, 100_ms));
    replenish(v, at_us(0), PCpuMode::lo, Rational(1, 5));
    EXPECT_EQ(v.budget_remaining, 25_ms);
    EXPECT_EQ(v.deadline, at_us(100000));
}

TEST(Replenish, CoolsOnlyAfterAQuietPeriod) {
    VCpuRuntime v(hi_vcpu(0, 5_ms, 25_ms, 100_ms));
    v.temperature = 2;
    replenish(v, at_us(100000), PCpuMode::hi, Rational(0));
    EXPECT_EQ(v.temperature, 1u);

    mark_pessimistic_demand(v, 2);
    replenish(v, at_us(200000), PCpuMode::hi, Rational(0));
    EXPECT_EQ(v.temperature, 2u) << "a period with pessimistic demand must not cool";
    EXPECT_FALSE(v.demanded_pessimistic_this_period);
}

TEST(Replenish, LoTemperatureStaysZero) {
    VCpuRuntime v(lo_vcpu(1, 25_ms, 100_ms));
    for (int k = 0; k < 5; ++k) replenish(v, at_us(k * 100000), PCpuMode::hi, Rational(0));
    EXPECT_EQ(v.temperature, 0u);
}

TEST(Account, ExactExhaustionDeactivates) {
    VCpuRuntime v(lo_vcpu(1, 25_ms, 100_ms));
    replenish(v, at_us(0), PCpuMode::lo, Rational(0));
    account(v, 25_ms, 25_ms);
    EXPECT_EQ(v.budget_remaining, Duration::zero());
    EXPECT_FALSE(v.active);
}

TEST(Account, ShortRunDecrements) {
    VCpuRuntime v(lo_vcpu(1, 25_ms, 100_ms));
    replenish(v, at_us(0), PCpuMode::lo, Rational(0));
    account(v, 46_us, 25_ms);
    EXPECT_EQ(v.budget_remaining, Duration{24954});
    EXPECT_TRUE(v.active);
    EXPECT_EQ(v.executed_in_period, 46_us);
}

TEST(Account, SlackRunFloorsAtZero) {
    VCpuRuntime v(lo_vcpu(1, 25_ms, 100_ms));
    account(v, 10_ms, 50_ms);
    EXPECT_EQ(v.budget_remaining, Duration::zero());
    EXPECT_FALSE(v.active);
}

TEST(Account, OverrunningTheSliceIsAContractViolation) {
    VCpuRuntime v(lo_vcpu(1, 25_ms, 100_ms));
    replenish(v, at_us(0), PCpuMode::lo, Rational(0));
    EXPECT_THROW(account(v, 2_ms, 1_ms), ContractViolation);
}

TEST(CheckHiDemand, ThresholdAndRunnability) {
    VCpuRuntime v(hi_vcpu(0, 5_ms, 25_ms, 100_ms));
    v.runnable = true;
    v.executed_in_period = 5_ms;
    EXPECT_TRUE(check_hi_demand(v));
    v.executed_in_period = Duration{4999};
    EXPECT_FALSE(check_hi_demand(v));
    v.executed_in_period = 5_ms;
    v.runnable = false;
    EXPECT_FALSE(check_hi_demand(v));
}

TEST(CheckHiDemand, LoVcpuIsAContractViolation) {
    VCpuRuntime v(lo_vcpu(1, 25_ms, 100_ms));
    EXPECT_THROW((void)check_hi_demand(v), ContractViolation);
}

TEST(Runqueue, ActiveBeforeInactiveThenDeadlineThenId) {
    PCpuState p(0);
    p.add_vcpu(lo_vcpu(0, 10_ms, 50_ms));
    p.add_vcpu(lo_vcpu(1, 10_ms, 10_ms));
    p.add_vcpu(lo_vcpu(2, 10_ms, 20_ms));
    p.replenish(0, at_us(0));  // active, d = 50 000
    p.replenish(2, at_us(0));  // active, d = 20 000
    p.enqueue(0);
    // vCPU 1 inactive with an earlier deadline than anything active
    p.enqueue(1);
    EXPECT_EQ(p.runqueue(), (std::vector<VCpuId>{0, 1}));
    p.enqueue(2);
    EXPECT_EQ(p.runqueue(), (std::vector<VCpuId>{2, 0, 1}));
}

TEST(Runqueue, EqualDeadlinesBreakByLowerId) {
    PCpuState p(0);
    p.add_vcpu(lo_vcpu(7, 10_ms, 100_ms));
    p.add_vcpu(lo_vcpu(3, 10_ms, 100_ms));
    p.replenish(7, at_us(0));
    p.replenish(3, at_us(0));
    p.enqueue(7);
    p.enqueue(3);
    EXPECT_EQ(p.runqueue(), (std::vector<VCpuId>{3, 7}));
}

TEST(Runqueue, DuplicateEnqueueIsAContractViolation) {
    PCpuState p(0);
    p.add_vcpu(lo_vcpu(0, 10_ms, 100_ms));
    p.enqueue(0);
    EXPECT_THROW(p.enqueue(0), ContractViolation);
    EXPECT_THROW(p.enqueue(9), ContractViolation);
}

TEST(PCpuState, XFollowsTheAssignedSet) {
    auto p = table1_core();
    EXPECT_EQ(p.x(), Rational(1, 5));
    EXPECT_EQ(p.mode(), PCpuMode::lo);
}

TEST(PickNext, LoModeHiFirstWithOptimisticCap) {
    auto p = table1_core();
    tick_all(p, at_us(0));
    for (VCpuId i = 0; i <= 3; ++i) p.set_runnable(i, true);
    const auto d = p.pick_next(at_us(0));
    ASSERT_TRUE(d);
    EXPECT_EQ(d->vcpu, 0u);
    EXPECT_EQ(d->slice, 5_ms) << "slice must end at the optimistic checkpoint";
    EXPECT_FALSE(d->slack);
}

TEST(PickNext, HiModePrefersActiveHiOverEarlierLo) {
    PCpuState p(0);
    p.add_vcpu(hi_vcpu(0, 5_ms, 25_ms, 90_ms));
    p.add_vcpu(lo_vcpu(1, 5_ms, 10_ms));
    p.replenish(0, at_us(0));
    p.replenish(1, at_us(0));
    p.enqueue(0);
    p.enqueue(1);
    p.set_runnable(0, true);
    p.set_runnable(1, true);
    p.mode_switch_to_hi(at_us(0));
    EXPECT_EQ(p.vcpu(0).deadline, at_us(90000));
    EXPECT_EQ(p.vcpu(1).deadline, at_us(10000));
    const auto d = p.pick_next(at_us(0));
    ASSERT_TRUE(d);
    EXPECT_EQ(d->vcpu, 0u);
}

TEST(PickNext, NothingRunnableMeansIdle) {
    auto p = table1_core();
    tick_all(p, at_us(0));
    EXPECT_FALSE(p.pick_next(at_us(0)));
}

TEST(PickNext, WorkConservingSlackUntilNextTick) {
    PCpuState p(0);
    p.add_vcpu(lo_vcpu(0, 10_ms, 100_ms));
    p.replenish(0, at_us(0));
    p.enqueue(0);
    p.set_runnable(0, true);
    p.account(0, 10_ms, 10_ms);
    const auto d = p.pick_next(at_us(10000));
    ASSERT_TRUE(d);
    EXPECT_TRUE(d->slack);
    EXPECT_EQ(d->slice, 90_ms);
}

TEST(PickNext, BudgetIsolationBeforeSlack) {
    PCpuState p(0);
    p.add_vcpu(lo_vcpu(0, 10_ms, 20_ms));
    p.add_vcpu(lo_vcpu(1, 10_ms, 100_ms));
    p.replenish(0, at_us(0));
    p.replenish(1, at_us(0));
    p.enqueue(0);
    p.enqueue(1);
    p.set_runnable(0, true);
    p.set_runnable(1, true);
    p.account(0, 10_ms, 10_ms);  // exhausted, earlier deadline
    const auto d = p.pick_next(at_us(10000));
    ASSERT_TRUE(d);
    EXPECT_EQ(d->vcpu, 1u);
    EXPECT_FALSE(d->slack);
}

TEST(PickNext, HiModeSplitsResidualAmongLoBudgetHolders) {
    PCpuState p(0);
    p.add_vcpu(hi_vcpu(0, 10_ms, 50_ms, 100_ms));
    for (VCpuId i = 1; i <= 3; ++i) p.add_vcpu(lo_vcpu(i, 25_ms, 100_ms));
    for (VCpuId i = 0; i <= 3; ++i) {
        p.replenish(i, at_us(0));
        p.enqueue(i);
    }
    p.mode_switch_to_hi(at_us(0));
    for (VCpuId i = 1; i <= 3; ++i) p.set_runnable(i, true);
    // three LO budget holders, HI idle: least served first, in short quanta
    std::vector<VCpuId> order;
    TimePoint now = at_us(0);
    for (int k = 0; k < 6; ++k) {
        const auto d = p.pick_next(now);
        ASSERT_TRUE(d);
        EXPECT_EQ(d->slice, kLoShareQuantum);
        order.push_back(d->vcpu);
        p.account(d->vcpu, d->slice, d->slice);
        now += d->slice;
    }
    EXPECT_EQ(order, (std::vector<VCpuId>{1, 2, 3, 1, 2, 3}));
}

TEST(ModeMachine, EscalationAtOptimisticExhaustion) {
    auto p = table1_core();
    tick_all(p, at_us(0));
    p.set_runnable(0, true);
    p.account(0, Duration{4999}, 5_ms);
    EXPECT_FALSE(p.checkpoint(0, at_us(4999)));
    EXPECT_EQ(p.mode(), PCpuMode::lo);
    p.account(0, 1_us, 1_us);
    EXPECT_TRUE(p.checkpoint(0, at_us(5000)));
    EXPECT_EQ(p.mode(), PCpuMode::hi);
    EXPECT_EQ(p.vcpu(0).temperature, 2u);
    EXPECT_EQ(p.vcpu(0).deadline, at_us(100000)) << "rebased from the virtual 20 ms";
}

TEST(ModeMachine, NoEscalationWhenTheWorkEndsAtCopt) {
    auto p = table1_core();
    tick_all(p, at_us(0));
    p.set_runnable(0, true);
    p.account(0, 5_ms, 5_ms);
    p.set_runnable(0, false);
    EXPECT_FALSE(p.checkpoint(0, at_us(5000)));
    EXPECT_EQ(p.mode(), PCpuMode::lo);
}

TEST(ModeMachine, SwitchingWhileHiIsIdempotent) {
    auto p = table1_core();
    tick_all(p, at_us(0));
    p.mode_switch_to_hi(at_us(0));
    const auto q = p.runqueue();
    p.mode_switch_to_hi(at_us(10));
    EXPECT_EQ(p.mode(), PCpuMode::hi);
    EXPECT_EQ(p.runqueue(), q);
}

TEST(ModeMachine, StaysHiWhileAnyHiIsWarm) {
    PCpuState p(0, 2);
    p.add_vcpu(hi_vcpu(0, 5_ms, 25_ms, 100_ms));
    p.add_vcpu(hi_vcpu(1, 5_ms, 25_ms, 100_ms));
    p.enqueue(0);
    p.enqueue(1);
    tick_all(p, at_us(0));
    p.set_runnable(0, true);
    p.account(0, 5_ms, 5_ms);
    ASSERT_TRUE(p.checkpoint(0, at_us(5000)));
    // temperatures {2, 0}: one quiet tick gives {1, 0}, still HI
    tick_all(p, at_us(100000));
    EXPECT_FALSE(p.maybe_switch_to_lo());
    tick_all(p, at_us(200000));
    EXPECT_EQ(p.vcpu(0).temperature, 1u);
    EXPECT_FALSE(p.maybe_switch_to_lo());
    tick_all(p, at_us(300000));
    EXPECT_TRUE(p.maybe_switch_to_lo());
    EXPECT_EQ(p.mode(), PCpuMode::lo);
}

// theta0 quiet periods after the last pessimistic demand, for several theta0.
TEST(ModeMachine, DeEscalatesAfterExactlyThetaQuietPeriods) {
    for (unsigned theta0 : {1u, 2u, 3u, 5u}) {
        PCpuState p(0, theta0);
        p.add_vcpu(hi_vcpu(0, 5_ms, 25_ms, 100_ms));
        p.enqueue(0);
        p.replenish(0, at_us(0));
        p.set_runnable(0, true);
        p.account(0, 5_ms, 5_ms);
        ASSERT_TRUE(p.checkpoint(0, at_us(5000)));
        p.set_runnable(0, false);
        unsigned quiet = 0;
        for (unsigned k = 1; k <= theta0 + 3; ++k) {
            p.replenish(0, at_us(k * 100000));
            // the period that just closed at tick k was the pessimistic one when k == 1
            if (k >= 2) ++quiet;
            if (p.maybe_switch_to_lo()) break;
        }
        EXPECT_EQ(quiet, theta0) << "theta0 = " << theta0;
    }
}

TEST(ModeMachine, EscalateThrowsForLo) {
    auto p = table1_core();
    EXPECT_THROW((void)p.escalate(1, at_us(0)), ContractViolation);
}

TEST(PlainEdf, BudgetsAreOptimisticAndModeNeverChanges) {
    PCpuState p(0, 2, Discipline::plain_edf);
    p.add_vcpu(hi_vcpu(0, 5_ms, 25_ms, 100_ms));
    p.enqueue(0);
    p.replenish(0, at_us(0));
    EXPECT_EQ(p.vcpu(0).budget_remaining, 5_ms);
    EXPECT_EQ(p.vcpu(0).deadline, at_us(100000));
    p.set_runnable(0, true);
    const auto d = p.pick_next(at_us(0));
    ASSERT_TRUE(d);
    EXPECT_EQ(d->slice, 5_ms);
    p.account(0, 5_ms, 5_ms);
    EXPECT_FALSE(p.checkpoint(0, at_us(5000)));
    EXPECT_EQ(p.mode(), PCpuMode::lo);
}
