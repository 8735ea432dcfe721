#pragma once

#include <cassert>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hybridsched/eclipse.hpp"
#include "hybridsched/matching.hpp"
#include "hybridsched/matrix.hpp"
#include "hybridsched/params.hpp"
#include "hybridsched/schedule.hpp"
#include "hybridsched/stats.hpp"

namespace hybridsched {

/// Bookings smaller than this are not made at all: no ledger row, no state
/// change. Keeps ledger and state replay-identical.
constexpr double kBookingDust = 1e-12;

/// Mutable scheduler state: residual direct demand plus the cumulative
/// residue capacity left idle on earlier matchings. residue(l, i) is unused
/// capacity across all prior l->i connections.
struct ResidueState {
    Matrix residue;
    Matrix remaining;
};

struct OriginShare {
    int origin = -1;
    double amount = 0.0;
};

/// Indirect-demand totals: totals(i, j) is the traffic from third-party
/// origins that could reach j by riding earlier residue to relay i and then a
/// fresh i->j connection. Per-origin breakdowns are recomputed on demand via
/// origin_shares(); they are pure reads of the state, so the values match
/// what build_irem summed.
struct IndirectDemand {
    Matrix totals;
};

/// Origins l (ascending, l outside {relay, dest}) able to contribute
/// min(remaining(l, dest), residue(l, relay)) of relayable traffic.
inline std::vector<OriginShare> origin_shares(const ResidueState& state, int relay, int dest) {
    std::vector<OriginShare> shares;
    if (relay == dest) return shares;  // a self-connection relays nothing
    const int n = state.remaining.size();
    for (int l = 0; l < n; ++l) {
        if (l == relay || l == dest) continue;
        double amount = std::min(state.remaining(l, dest), state.residue(l, relay));
        if (amount > 0.0) shares.push_back({l, amount});
    }
    return shares;
}

inline IndirectDemand build_irem(const ResidueState& state) {
    const int n = state.remaining.size();
    IndirectDemand irem{Matrix(n, 0.0)};
    std::vector<int> positive_dests;
    // outer loop ascending in origin so the per-cell accumulation order
    // matches origin_shares()
    for (int l = 0; l < n; ++l) {
        positive_dests.clear();
        for (int j = 0; j < n; ++j)
            if (j != l && state.remaining(l, j) > 0.0) positive_dests.push_back(j);
        if (positive_dests.empty()) continue;
        for (int i = 0; i < n; ++i) {
            if (i == l) continue;
            double capacity = state.residue(l, i);
            if (capacity <= 0.0) continue;
            for (int j : positive_dests) {
                if (j == i) continue;
                irem.totals(i, j) += std::min(state.remaining(l, j), capacity);
            }
        }
    }
    return irem;
}

struct DirectBooking {
    int step = 0;
    int input = 0;
    int output = 0;
    double amount = 0.0;
};

struct IndirectBooking {
    int step = 0;
    int origin = 0;
    int relay = 0;
    int dest = 0;
    double amount = 0.0;
};

/// Auditable record of every routing decision. Replaying it against the
/// schedule must show each indirect booking covered by residue accrued on
/// strictly earlier steps.
struct BookingLedger {
    std::vector<DirectBooking> direct;
    std::vector<IndirectBooking> indirect;
};

/// Books traffic on one chosen configuration and updates the state. Per
/// matched edge (i, j), local traffic is served first; leftover capacity goes
/// to relayed traffic, proportionally across origins when it cannot take all
/// of them; fully unused capacity accrues as residue on (i, j). Edges of one
/// matching touch disjoint state cells (see the asserts), so processing order
/// is immaterial; rows are processed ascending.
inline void apply_configuration(ResidueState& state, const IndirectDemand& irem, const Matching& matching,
                                double alpha, int step, BookingLedger& ledger) {
    const int n = state.remaining.size();
    if (matching.size() != n || irem.totals.size() != n)
        throw std::invalid_argument("apply_configuration: size mismatch");
    if (!(alpha > 0.0)) throw std::invalid_argument("apply_configuration: duration must be positive");

#ifndef NDEBUG
    // each cell may receive at most one write per category within a matching
    std::vector<char> wrote_remaining(state.remaining.data().size(), 0);
    std::vector<char> consumed_residue(state.remaining.data().size(), 0);
    std::vector<char> accrued_residue(state.remaining.data().size(), 0);
    auto mark = [n](std::vector<char>& seen, int r, int c) {
        char& flag = seen[static_cast<std::size_t>(r) * n + c];
        assert(!flag && "apply_configuration: cell written twice");
        flag = 1;
    };
#else
    auto mark = [](auto&...) {};
    std::vector<char> wrote_remaining, consumed_residue, accrued_residue;
#endif

    auto check_nonnegative = [](double v) {
        if (v < -1e-9) throw std::logic_error("apply_configuration: entry driven negative");
    };

    // Residue accrued by this matching must not be visible to this matching's
    // own bookings (origin_shares of a later edge reads residue column i,
    // which an earlier edge (l, i) may have topped up), so accruals are
    // buffered and applied after all edges are booked.
    std::vector<std::pair<std::pair<int, int>, double>> accruals;

    for (int i = 0; i < n; ++i) {
        int j = matching.output_of(i);
        if (j < 0) continue;

        double direct_avail = state.remaining(i, j);
        if (alpha <= direct_avail) {
            // capacity exhausted by local traffic; no residue
            if (alpha >= kBookingDust) {
                state.remaining(i, j) -= alpha;
                mark(wrote_remaining, i, j);
                check_nonnegative(state.remaining(i, j));
                ledger.direct.push_back({step, i, j, alpha});
            }
            continue;
        }

        std::vector<OriginShare> shares = origin_shares(state, i, j);
        double indirect_avail = 0.0;
        for (const OriginShare& s : shares) indirect_avail += s.amount;
        assert(indirect_avail == irem.totals(i, j));

        double slack = alpha;
        if (direct_avail >= kBookingDust) {
            state.remaining(i, j) = 0.0;
            mark(wrote_remaining, i, j);
            ledger.direct.push_back({step, i, j, direct_avail});
            slack -= direct_avail;
        }

        if (alpha >= direct_avail + indirect_avail) {
            // room for every standby origin; leftover capacity becomes residue
            for (const OriginShare& s : shares) {
                if (s.amount < kBookingDust) continue;
                state.remaining(s.origin, j) -= s.amount;
                state.residue(s.origin, i) -= s.amount;
                mark(wrote_remaining, s.origin, j);
                mark(consumed_residue, s.origin, i);
                check_nonnegative(state.remaining(s.origin, j));
                check_nonnegative(state.residue(s.origin, i));
                ledger.indirect.push_back({step, s.origin, i, j, s.amount});
                slack -= s.amount;
            }
            if (i != j) accruals.push_back({{i, j}, std::max(0.0, slack)});
        } else {
            // partial: allocate remaining capacity proportionally to origins
            double theta = (alpha - direct_avail) / indirect_avail;
            for (const OriginShare& s : shares) {
                double amount = theta * s.amount;
                if (amount < kBookingDust) continue;
                state.remaining(s.origin, j) -= amount;
                state.residue(s.origin, i) -= amount;
                mark(wrote_remaining, s.origin, j);
                mark(consumed_residue, s.origin, i);
                check_nonnegative(state.remaining(s.origin, j));
                check_nonnegative(state.residue(s.origin, i));
                ledger.indirect.push_back({step, s.origin, i, j, amount});
            }
        }
    }

    for (const auto& [cell, slack] : accruals) {
        state.residue(cell.first, cell.second) += slack;
        mark(accrued_residue, cell.first, cell.second);
    }
}

struct TwoHopResult {
    Schedule schedule;
    BookingLedger ledger;
    DemandMatrix residual;
    double total_time = 0.0;
};

/// 2-hop variant of the greedy scheduler: each step maximizes the
/// cost-adjusted utility over direct plus relayable traffic and books the
/// chosen configuration against both.
inline TwoHopResult two_hop_schedule(const DemandMatrix& demand, const SystemParams& params,
                                     const SearchStrategy& strategy = {}) {
    check_params(params);
    if (demand.size() != params.n) throw std::invalid_argument("two_hop_schedule: size mismatch");
    if (!is_nonnegative(demand)) throw std::invalid_argument("two_hop_schedule: negative demand");

    Schedule schedule;
    BookingLedger ledger;
    ResidueState state{Matrix(params.n, 0.0), demand};
    double t_c = 0.0;
    int step = 0;
    while (max_load(state.remaining) > params.packet_rate * t_c) {
        IndirectDemand irem = build_irem(state);
        Matrix effective = state.remaining + irem.totals;
        Configuration cfg = best_configuration(effective, params, strategy);
        apply_configuration(state, irem, cfg.matching, cfg.alpha, step, ledger);
        t_c += params.delta + cfg.alpha;
        schedule.steps.push_back({std::move(cfg.matching), cfg.alpha});
        ++step;
    }
    schedule.circuit_time = t_c;
    double total = transmission_time(t_c, state.remaining, params.packet_rate);
    return {std::move(schedule), std::move(ledger), std::move(state.remaining), total};
}

}  // namespace hybridsched
