#include <gtest/gtest.h>

#include <cmath>
#include <map>

#include "hybridsched/demand.hpp"
#include "hybridsched/twohop.hpp"
#include "hybridsched/validate.hpp"

namespace hybridsched {
namespace {

TEST(BuildIrem, ZeroResidueGivesZeroIndirectDemand) {
    ResidueState state{Matrix(4, 0.0), Matrix(4, 1.0)};
    EXPECT_DOUBLE_EQ(l1_norm(build_irem(state).totals), 0.0);
}

TEST(BuildIrem, SingleRelayHandCase) {
    ResidueState state{Matrix(3, 0.0), Matrix(3, 0.0)};
    state.remaining(0, 2) = 4.0;
    state.residue(0, 1) = 3.0;
    IndirectDemand irem = build_irem(state);
    EXPECT_DOUBLE_EQ(irem.totals(1, 2), 3.0);
    EXPECT_DOUBLE_EQ(l1_norm(irem.totals), 3.0);
}

TEST(BuildIrem, SameDemandListedAtTwoRelays) {
    ResidueState state{Matrix(4, 0.0), Matrix(4, 0.0)};
    state.remaining(0, 3) = 5.0;
    state.residue(0, 1) = 2.0;
    state.residue(0, 2) = 7.0;
    IndirectDemand irem = build_irem(state);
    // a matching uses at most one of these relays, so double listing is fine
    EXPECT_DOUBLE_EQ(irem.totals(1, 3), 2.0);
    EXPECT_DOUBLE_EQ(irem.totals(2, 3), 5.0);
    EXPECT_DOUBLE_EQ(l1_norm(irem.totals), 7.0);
}

TEST(BuildIrem, TotalsMatchOriginShares) {
    TrafficGenConfig gen;
    gen.n = 8;
    gen.num_large = 2;
    gen.num_medium = 3;
    gen.seed = 5;
    ResidueState state{Matrix(8, 0.0), generate_demand(gen)};
    Rng rng(2);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
            if (i != j && rng.uniform01() < 0.3) state.residue(i, j) = rng.uniform01();
    IndirectDemand irem = build_irem(state);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) {
            double total = 0.0;
            for (const OriginShare& s : origin_shares(state, i, j)) total += s.amount;
            ASSERT_EQ(total, irem.totals(i, j)) << "(" << i << "," << j << ")";
        }
}

struct EdgeFixture {
    // edge (0, 1) in a 4-port switch; origins 2 and 3
    ResidueState state{Matrix(4, 0.0), Matrix(4, 0.0)};
    Matching matching{std::vector<int>{1, -1, -1, -1}};
    BookingLedger ledger;

    IndirectDemand irem() const { return build_irem(state); }
};

TEST(ApplyConfiguration, CaseOneServesOnlyLocalTraffic) {
    EdgeFixture fx;
    fx.state.remaining(0, 1) = 5.0;
    IndirectDemand irem = fx.irem();
    apply_configuration(fx.state, irem, fx.matching, 2.0, 0, fx.ledger);
    EXPECT_DOUBLE_EQ(fx.state.remaining(0, 1), 3.0);
    EXPECT_DOUBLE_EQ(l1_norm(fx.state.residue), 0.0);
    ASSERT_EQ(fx.ledger.direct.size(), 1u);
    EXPECT_DOUBLE_EQ(fx.ledger.direct[0].amount, 2.0);
    EXPECT_TRUE(fx.ledger.indirect.empty());
}

TEST(ApplyConfiguration, CaseTwoBooksEveryOriginAndAccruesResidue) {
    EdgeFixture fx;
    fx.state.remaining(0, 1) = 1.0;  // local
    fx.state.remaining(2, 1) = 2.0;  // origin 2 wants dest 1
    fx.state.residue(2, 0) = 2.0;    // spare seats 2 -> relay 0
    IndirectDemand irem = fx.irem();
    ASSERT_DOUBLE_EQ(irem.totals(0, 1), 2.0);
    apply_configuration(fx.state, irem, fx.matching, 5.0, 0, fx.ledger);
    EXPECT_DOUBLE_EQ(fx.state.remaining(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(fx.state.remaining(2, 1), 0.0);
    EXPECT_DOUBLE_EQ(fx.state.residue(2, 0), 0.0);
    EXPECT_DOUBLE_EQ(fx.state.residue(0, 1), 2.0);  // 5 - (1 + 2)
    ASSERT_EQ(fx.ledger.indirect.size(), 1u);
    EXPECT_EQ(fx.ledger.indirect[0].origin, 2);
    EXPECT_EQ(fx.ledger.indirect[0].relay, 0);
    EXPECT_EQ(fx.ledger.indirect[0].dest, 1);
    EXPECT_DOUBLE_EQ(fx.ledger.indirect[0].amount, 2.0);
}

TEST(ApplyConfiguration, CaseThreeAllocatesProportionally) {
    EdgeFixture fx;
    fx.state.remaining(0, 1) = 1.0;
    fx.state.remaining(2, 1) = 3.0;
    fx.state.residue(2, 0) = 3.0;
    fx.state.remaining(3, 1) = 1.0;
    fx.state.residue(3, 0) = 1.0;
    IndirectDemand irem = fx.irem();
    ASSERT_DOUBLE_EQ(irem.totals(0, 1), 4.0);
    apply_configuration(fx.state, irem, fx.matching, 3.0, 0, fx.ledger);
    // theta = (3 - 1) / 4 = 0.5
    EXPECT_DOUBLE_EQ(fx.state.remaining(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(fx.state.remaining(2, 1), 1.5);
    EXPECT_DOUBLE_EQ(fx.state.residue(2, 0), 1.5);
    EXPECT_DOUBLE_EQ(fx.state.remaining(3, 1), 0.5);
    EXPECT_DOUBLE_EQ(fx.state.residue(3, 0), 0.5);
    EXPECT_DOUBLE_EQ(fx.state.residue(0, 1), 0.0);  // the edge is full, no slack
    ASSERT_EQ(fx.ledger.indirect.size(), 2u);
    EXPECT_DOUBLE_EQ(fx.ledger.indirect[0].amount, 1.5);
    EXPECT_DOUBLE_EQ(fx.ledger.indirect[1].amount, 0.5);
}

TEST(ApplyConfiguration, IdleEdgeAccruesFullSlack) {
    EdgeFixture fx;
    IndirectDemand irem = fx.irem();
    apply_configuration(fx.state, irem, fx.matching, 4.0, 0, fx.ledger);
    EXPECT_DOUBLE_EQ(fx.state.residue(0, 1), 4.0);
    EXPECT_TRUE(fx.ledger.direct.empty());
    EXPECT_TRUE(fx.ledger.indirect.empty());
}

TEST(ApplyConfiguration, DiagonalEdgeNeverAccruesResidue) {
    ResidueState state{Matrix(3, 0.0), Matrix(3, 0.0)};
    state.remaining(0, 0) = 1.0;  // self-traffic is not generated but must not corrupt state
    Matching diag(std::vector<int>{0, -1, -1});
    BookingLedger ledger;
    IndirectDemand irem = build_irem(state);
    apply_configuration(state, irem, diag, 5.0, 0, ledger);
    EXPECT_DOUBLE_EQ(state.remaining(0, 0), 0.0);
    EXPECT_DOUBLE_EQ(state.residue(0, 0), 0.0);
    ASSERT_EQ(ledger.direct.size(), 1u);
}

TEST(TwoHopSchedule, ZeroDemand) {
    SystemParams params{3, 0.01, 0.1};
    TwoHopResult r = two_hop_schedule(Matrix(3, 0.0), params);
    EXPECT_EQ(r.schedule.num_steps(), 0);
    EXPECT_DOUBLE_EQ(r.total_time, 0.0);
}

TEST(TwoHopSchedule, MatchesEclipseWhenNoResidueForms) {
    // two disjoint shift permutations at equal value: every chosen duration
    // drains its matched entries exactly, so residue never appears
    const int n = 4;
    Matrix d(n, 0.0);
    for (int i = 0; i < n; ++i) {
        d(i, (i + 1) % n) = 10.0;
        d(i, (i + 2) % n) = 10.0;
    }
    SystemParams params{n, 1.0, 0.1};
    TwoHopResult two = two_hop_schedule(d, params);
    EclipseResult one = eclipse_schedule(d, params);
    ASSERT_EQ(two.schedule.num_steps(), one.schedule.num_steps());
    for (int k = 0; k < one.schedule.num_steps(); ++k) {
        EXPECT_EQ(two.schedule.steps[k].matching, one.schedule.steps[k].matching);
        EXPECT_EQ(two.schedule.steps[k].duration, one.schedule.steps[k].duration);
    }
    EXPECT_EQ(two.total_time, one.total_time);
    EXPECT_TRUE(two.ledger.indirect.empty());
}

TEST(TwoHopSchedule, TinyDemandTerminatesWithoutBookings) {
    Matrix d(2, 0.0);
    d(0, 1) = 1e-13;  // below the booking floor
    SystemParams params{2, 0.01, 0.1};
    TwoHopResult r = two_hop_schedule(d, params);
    EXPECT_EQ(r.schedule.num_steps(), 1);
    EXPECT_TRUE(r.ledger.direct.empty());
    EXPECT_LE(max_load(r.residual), params.packet_rate * r.schedule.circuit_time);
}

void expect_per_entry_conservation(const DemandMatrix& d, const TwoHopResult& r) {
    const int n = d.size();
    Matrix booked(n, 0.0);
    for (const DirectBooking& b : r.ledger.direct) booked(b.input, b.output) += b.amount;
    for (const IndirectBooking& b : r.ledger.indirect) booked(b.origin, b.dest) += b.amount;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            ASSERT_NEAR(d(i, j), booked(i, j) + r.residual(i, j), 1e-9) << "(" << i << "," << j << ")";
}

TEST(TwoHopSchedule, RandomizedInvariantsAndLedgerReplay) {
    TrafficGenConfig gen;
    gen.n = 16;
    gen.num_large = 2;
    gen.num_medium = 6;
    bool saw_indirect = false;
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        gen.seed = seed;
        DemandMatrix d = generate_demand(gen);
        SystemParams params = SystemParams::from_ratio(16, seed % 2 ? 0.01 : 0.04, seed % 3 ? 10.0 : 20.0);
        TwoHopResult r = two_hop_schedule(d, params);

        EXPECT_LE(max_load(r.residual), params.packet_rate * r.schedule.circuit_time);
        EXPECT_TRUE(is_nonnegative(r.residual));
        expect_per_entry_conservation(d, r);
        EXPECT_TRUE(validate(d, r.schedule, r.ledger, params).ok());
        saw_indirect = saw_indirect || !r.ledger.indirect.empty();
    }
    EXPECT_TRUE(saw_indirect) << "test instances never exercised indirect routing";
}

TEST(TwoHopSchedule, InflatedLedgerEntryIsCaughtAsOverdraft) {
    TrafficGenConfig gen;
    gen.n = 16;
    gen.num_large = 2;
    gen.num_medium = 6;
    gen.seed = 1;
    DemandMatrix d = generate_demand(gen);
    SystemParams params = SystemParams::from_ratio(16, 0.04, 10.0);
    TwoHopResult r = two_hop_schedule(d, params);
    ASSERT_FALSE(r.ledger.indirect.empty());
    r.ledger.indirect.back().amount += 1.0;
    ValidationReport report = validate(d, r.schedule, r.ledger, params);
    EXPECT_FALSE(report.ok());
    bool overdraft = false;
    for (const Violation& v : report.violations)
        if (v.check == "residue_overdraft" || v.check == "overbooking" || v.check == "capacity") overdraft = true;
    EXPECT_TRUE(overdraft);
}

TEST(TwoHopSchedule, Deterministic) {
    TrafficGenConfig gen;
    gen.n = 12;
    gen.num_large = 2;
    gen.num_medium = 4;
    gen.seed = 21;
    DemandMatrix d = generate_demand(gen);
    SystemParams params{12, 0.02, 0.1};
    TwoHopResult a = two_hop_schedule(d, params);
    TwoHopResult b = two_hop_schedule(d, params);
    EXPECT_EQ(a.total_time, b.total_time);
    EXPECT_EQ(a.ledger.direct.size(), b.ledger.direct.size());
    EXPECT_EQ(a.ledger.indirect.size(), b.ledger.indirect.size());
    EXPECT_EQ(a.residual, b.residual);
}

}  // namespace
}  // namespace hybridsched
