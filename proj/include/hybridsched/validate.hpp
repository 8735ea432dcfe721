#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "hybridsched/bff.hpp"
#include "hybridsched/matrix.hpp"
#include "hybridsched/params.hpp"
#include "hybridsched/schedule.hpp"
#include "hybridsched/twohop.hpp"

namespace hybridsched {

struct Violation {
    std::string check;
    std::string detail;
};

struct ValidationReport {
    std::vector<Violation> violations;
    bool ok() const { return violations.empty(); }
    void flag(std::string check, std::string detail) { violations.push_back({std::move(check), std::move(detail)}); }
};

constexpr double kValidateTol = 1e-9;

namespace detail {

inline std::string cell_str(int i, int j) { return "(" + std::to_string(i) + "," + std::to_string(j) + ")"; }

inline void check_steps(const Schedule& schedule, int n, double delta, ValidationReport& report) {
    for (int k = 0; k < schedule.num_steps(); ++k) {
        const ScheduleStep& step = schedule.steps[k];
        if (step.matching.size() != n || !step.matching.is_valid())
            report.flag("matching", "illegal matching at step " + std::to_string(k));
        if (!(step.duration > 0.0)) report.flag("duration", "nonpositive duration at step " + std::to_string(k));
    }
    double t_c = 0.0;
    for (const ScheduleStep& step : schedule.steps) t_c += delta + step.duration;
    if (std::abs(t_c - schedule.circuit_time) > kValidateTol)
        report.flag("circuit_time", "stored circuit time disagrees with steps");
}

inline void check_exit_bound(const Matrix& remaining, double rate_budget, ValidationReport& report) {
    std::vector<double> rows = row_sums(remaining), cols = col_sums(remaining);
    for (int i = 0; i < remaining.size(); ++i) {
        if (rows[i] > rate_budget + kValidateTol)
            report.flag("exit_bound", "row " + std::to_string(i) + " residual exceeds packet budget");
        if (cols[i] > rate_budget + kValidateTol)
            report.flag("exit_bound", "column " + std::to_string(i) + " residual exceeds packet budget");
    }
}

}  // namespace detail

/// Audit a direct-routing schedule: step legality, conservation under replay,
/// and the loop-exit bound.
inline ValidationReport validate(const DemandMatrix& demand, const Schedule& schedule, const SystemParams& params) {
    ValidationReport report;
    const int n = demand.size();
    detail::check_steps(schedule, n, params.delta, report);
    if (!report.ok()) return report;

    Matrix remaining = demand;
    double served = 0.0;
    for (const ScheduleStep& step : schedule.steps) {
        for (int i = 0; i < n; ++i) {
            int j = step.matching.output_of(i);
            if (j < 0) continue;
            double take = std::min(step.duration, remaining(i, j));
            remaining(i, j) -= take;
            served += take;
        }
    }
    if (std::abs(l1_norm(demand) - served - l1_norm(remaining)) > kValidateTol)
        report.flag("conservation", "demand mass not conserved by replay");
    if (!is_nonnegative(remaining)) report.flag("negative", "replay drove an entry negative");
    detail::check_exit_bound(remaining, params.packet_rate * schedule.circuit_time, report);
    return report;
}

/// Audit a 2-hop schedule against its booking ledger. The ledger is taken at
/// face value and replayed: every booking must ride an edge of its step,
/// per-edge bookings must fit the duration, indirect bookings must be covered
/// by residue accrued on strictly earlier steps, and per-entry conservation
/// must close.
inline ValidationReport validate(const DemandMatrix& demand, const Schedule& schedule, const BookingLedger& ledger,
                                 const SystemParams& params) {
    ValidationReport report;
    const int n = demand.size();
    detail::check_steps(schedule, n, params.delta, report);
    if (!report.ok()) return report;

    const int num_steps = schedule.num_steps();
    auto edge_of = [&](int step, int input) { return schedule.steps[step].matching.output_of(input); };

    for (const DirectBooking& b : ledger.direct) {
        if (b.step < 0 || b.step >= num_steps || edge_of(b.step, b.input) != b.output)
            report.flag("booking_edge", "direct booking off-matching at step " + std::to_string(b.step));
        if (!(b.amount > 0.0)) report.flag("booking_amount", "nonpositive direct booking");
    }
    for (const IndirectBooking& b : ledger.indirect) {
        if (b.step < 0 || b.step >= num_steps || edge_of(b.step, b.relay) != b.dest)
            report.flag("booking_edge", "indirect booking off-matching at step " + std::to_string(b.step));
        if (b.origin == b.relay || b.origin == b.dest)
            report.flag("booking_origin", "origin coincides with relay or destination");
        if (!(b.amount > 0.0)) report.flag("booking_amount", "nonpositive indirect booking");
    }
    if (!report.ok()) return report;

    // bookings grouped per step and edge, kept in emission order
    std::vector<std::map<int, std::vector<double>>> edge_amounts(num_steps);  // step -> input -> amounts
    std::size_t direct_cursor = 0, indirect_cursor = 0;
    Matrix remaining = demand;
    Matrix residue(n, 0.0);

    for (int k = 0; k < num_steps; ++k) {
        for (; direct_cursor < ledger.direct.size() && ledger.direct[direct_cursor].step == k; ++direct_cursor) {
            const DirectBooking& b = ledger.direct[direct_cursor];
            remaining(b.input, b.output) -= b.amount;
            if (remaining(b.input, b.output) < -kValidateTol)
                report.flag("overbooking", "direct booking exceeds demand at " + detail::cell_str(b.input, b.output));
            edge_amounts[k][b.input].push_back(b.amount);
        }
        for (; indirect_cursor < ledger.indirect.size() && ledger.indirect[indirect_cursor].step == k;
             ++indirect_cursor) {
            const IndirectBooking& b = ledger.indirect[indirect_cursor];
            remaining(b.origin, b.dest) -= b.amount;
            residue(b.origin, b.relay) -= b.amount;
            if (remaining(b.origin, b.dest) < -kValidateTol)
                report.flag("overbooking", "indirect booking exceeds demand at " + detail::cell_str(b.origin, b.dest));
            if (residue(b.origin, b.relay) < -kValidateTol)
                report.flag("residue_overdraft", "residue overdraft at " + detail::cell_str(b.origin, b.relay) +
                                                     " step " + std::to_string(k));
            edge_amounts[k][b.relay].push_back(b.amount);
        }
        // unused capacity accrues after the step's bookings, never within it
        const ScheduleStep& step = schedule.steps[k];
        for (int i = 0; i < n; ++i) {
            int j = step.matching.output_of(i);
            if (j < 0) continue;
            double slack = step.duration;
            auto it = edge_amounts[k].find(i);
            if (it != edge_amounts[k].end())
                for (double a : it->second) slack -= a;
            if (slack < -kValidateTol)
                report.flag("capacity", "bookings exceed duration on edge " + detail::cell_str(i, j) + " step " +
                                            std::to_string(k));
            if (i != j) residue(i, j) += std::max(0.0, slack);
        }
    }
    if (direct_cursor != ledger.direct.size() || indirect_cursor != ledger.indirect.size())
        report.flag("ledger_order", "ledger entries not ordered by step");

    if (std::abs(l1_norm(demand) - (l1_norm(remaining) + [&] {
            double s = 0.0;
            for (const DirectBooking& b : ledger.direct) s += b.amount;
            for (const IndirectBooking& b : ledger.indirect) s += b.amount;
            return s;
        }())) > kValidateTol)
        report.flag("conservation", "demand mass not conserved by ledger replay");

    detail::check_exit_bound(remaining, params.packet_rate * schedule.circuit_time, report);
    return report;
}

/// Audit a BFF timeline: interval legality per port, the instantaneous
/// sub-permutation property, service accounting, and the stop-time bound.
inline ValidationReport validate(const DemandMatrix& demand, const EventSchedule& schedule,
                                 const SystemParams& params) {
    ValidationReport report;
    const int n = demand.size();

    std::vector<std::vector<const Connection*>> by_input(n), by_output(n);
    for (const Connection& c : schedule.connections) {
        if (c.input < 0 || c.input >= n || c.output < 0 || c.output >= n) {
            report.flag("port_range", "connection references port out of range");
            return report;
        }
        if (c.end < c.start - kValidateTol || c.amount < 0.0)
            report.flag("interval", "malformed connection on " + detail::cell_str(c.input, c.output));
        if (std::abs((c.end - c.start) - c.amount) > kValidateTol)
            report.flag("service_rate", "duration and amount disagree on " + detail::cell_str(c.input, c.output));
        if (c.end > schedule.stop_time + kValidateTol)
            report.flag("stop_time", "connection runs past stop time on " + detail::cell_str(c.input, c.output));
        by_input[c.input].push_back(&c);
        by_output[c.output].push_back(&c);
    }

    auto by_start = [](const Connection* a, const Connection* b) { return a->start < b->start; };
    for (int i = 0; i < n; ++i) {
        std::sort(by_input[i].begin(), by_input[i].end(), by_start);
        for (std::size_t k = 1; k < by_input[i].size(); ++k)
            if (by_input[i][k]->start < by_input[i][k - 1]->end + params.delta - kValidateTol)
                report.flag("input_gap", "input " + std::to_string(i) + " reconnects within the delay");
        std::sort(by_output[i].begin(), by_output[i].end(), by_start);
        for (std::size_t k = 1; k < by_output[i].size(); ++k)
            if (by_output[i][k]->start < by_output[i][k - 1]->end - kValidateTol)
                report.flag("output_overlap", "output " + std::to_string(i) + " serves two inputs at once");
    }

    // sweep: active connections form a sub-permutation at every instant;
    // a port may close and reopen at the same instant, so closes sort first
    {
        struct Event {
            double time;
            bool open;
            const Connection* conn;
        };
        std::vector<Event> events;
        for (const Connection& c : schedule.connections) {
            events.push_back({c.start, true, &c});
            events.push_back({c.end, false, &c});
        }
        std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
            return a.time < b.time || (a.time == b.time && !a.open && b.open);
        });
        std::vector<int> input_use(n, 0), output_use(n, 0);
        for (const Event& e : events) {
            int delta = e.open ? 1 : -1;
            input_use[e.conn->input] += delta;
            output_use[e.conn->output] += delta;
            if (input_use[e.conn->input] > 1 || output_use[e.conn->output] > 1)
                report.flag("subpermutation", "two active connections share a port at t=" + std::to_string(e.time));
        }
    }

    Matrix remaining = demand;
    for (const Connection& c : schedule.connections) {
        remaining(c.input, c.output) -= c.amount;
        if (remaining(c.input, c.output) < -kValidateTol)
            report.flag("overservice", "served more than demanded on " + detail::cell_str(c.input, c.output));
    }
    detail::check_exit_bound(remaining, params.packet_rate * schedule.stop_time, report);
    return report;
}

}  // namespace hybridsched
