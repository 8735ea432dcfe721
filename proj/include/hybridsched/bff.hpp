#pragma once

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "hybridsched/demand.hpp"
#include "hybridsched/matching.hpp"
#include "hybridsched/matrix.hpp"
#include "hybridsched/params.hpp"
#include "hybridsched/stats.hpp"

namespace hybridsched {

struct Connection {
    int input = 0;
    int output = 0;
    double start = 0.0;
    double end = 0.0;
    double amount = 0.0;
};

/// Asynchronous schedule for a partially reconfigurable switch: per-port
/// connection intervals instead of synchronized matchings. Inputs pay the
/// reconfiguration delay between their own connections; outputs switch for
/// free.
struct EventSchedule {
    std::vector<Connection> connections;
    double stop_time = 0.0;
};

struct BffOptions {
    // whether the switch pays one reconfiguration delay before the first
    // matching starts
    bool charge_initial_reconfig = true;
};

struct BffResult {
    EventSchedule schedule;
    DemandMatrix residual;
    double total_time = 0.0;
};

/// Best-first-fit list scheduling. Starts from the max-weight matching of the
/// full demand, then runs event-driven: whenever a connection drains, the
/// freed output immediately grabs the available input with the most traffic
/// for it, and the freed input does the same over available outputs once its
/// reconfiguration delay has elapsed. Connections are non-preemptive full
/// drains. Scheduling stops at the first event where the packet switch can
/// cover every row and column of what remains.
inline BffResult bff_schedule(const DemandMatrix& demand, const SystemParams& params,
                              const BffOptions& options = {}) {
    check_params(params);
    const int n = params.n;
    if (demand.size() != n) throw std::invalid_argument("bff_schedule: size mismatch");
    if (!is_nonnegative(demand)) throw std::invalid_argument("bff_schedule: negative demand");

    BffResult result;
    result.residual = demand;
    Matrix& rem = result.residual;
    if (max_load(rem) == 0.0) return result;  // nothing to schedule

    constexpr double kNever = std::numeric_limits<double>::infinity();
    enum class PortState { Active, Reconfiguring, Pooled };
    std::vector<PortState> input_state(n, PortState::Reconfiguring);
    std::vector<double> input_ready(n, kNever);
    std::vector<int> active_conn(n, -1);  // per input, index into connections
    std::vector<bool> output_active(n, false), output_pooled(n, false);
    std::vector<Connection>& conns = result.schedule.connections;

    // row/column sums maintained incrementally; the stop check runs at every
    // event and a fresh O(n^2) scan there would dominate the whole run
    std::vector<double> load_row = row_sums(rem), load_col = col_sums(rem);
    auto serve = [&](int i, int j, double amount) {
        rem(i, j) -= amount;
        load_row[i] -= amount;
        load_col[j] -= amount;
    };
    auto drain = [&](int i, int j) {
        double left = rem(i, j);
        rem(i, j) = 0.0;
        load_row[i] -= left;
        load_col[j] -= left;
    };
    auto packet_switch_covers = [&](double t) {
        double budget = params.packet_rate * t;
        for (int k = 0; k < n; ++k)
            if (load_row[k] > budget || load_col[k] > budget) return false;
        return true;
    };

    auto establish = [&](int i, int j, double t) {
        double amount = rem(i, j);
        conns.push_back({i, j, t, t + amount, amount});
        active_conn[i] = static_cast<int>(conns.size()) - 1;
        input_state[i] = PortState::Active;
        input_ready[i] = kNever;
        output_active[j] = true;
        output_pooled[j] = false;
    };

    auto output_seek_pairing = [&](int j, double t) {
        int best = -1;
        for (int l = 0; l < n; ++l)
            if (input_state[l] == PortState::Pooled && rem(l, j) > 0.0 && (best < 0 || rem(l, j) > rem(best, j)))
                best = l;
        if (best >= 0)
            establish(best, j, t);
        else
            output_pooled[j] = true;
    };

    auto input_seek_pairing = [&](int i, double t) {
        input_state[i] = PortState::Pooled;
        input_ready[i] = kNever;
        int best = -1;
        for (int j = 0; j < n; ++j)
            if (output_pooled[j] && rem(i, j) > 0.0 && (best < 0 || rem(i, j) > rem(i, best)))
                best = j;
        if (best >= 0) establish(i, best, t);
    };

    double t_now = options.charge_initial_reconfig ? params.delta : 0.0;

    // reconfiguration-finish instant of the initial delay is an event time
    if (packet_switch_covers(t_now)) {
        result.schedule.stop_time = t_now;
        result.total_time = t_now;
        return result;
    }

    {
        // pairs of the initial matching with zero demand form no connection;
        // their ports join the pairing rounds below instead
        Matching initial = max_weight_matching(demand);
        for (int i = 0; i < n; ++i) {
            int j = initial.output_of(i);
            if (j >= 0 && rem(i, j) > 0.0) establish(i, j, t_now);
        }
        for (int j = 0; j < n; ++j)
            if (!output_active[j]) output_seek_pairing(j, t_now);
        for (int i = 0; i < n; ++i)
            if (input_state[i] == PortState::Reconfiguring) input_seek_pairing(i, t_now);
    }

    double last_completion = t_now;
    for (;;) {
        double next_t = kNever;
        for (int i = 0; i < n; ++i) {
            if (active_conn[i] >= 0) next_t = std::min(next_t, conns[active_conn[i]].end);
            if (input_state[i] == PortState::Reconfiguring) next_t = std::min(next_t, input_ready[i]);
        }
        if (next_t == kNever) {
            // quiescent: every remaining pooled pair has zero demand
            result.schedule.stop_time = last_completion;
            result.total_time = transmission_time(last_completion, rem, params.packet_rate);
            return result;
        }

        for (int i = 0; i < n; ++i) {
            if (active_conn[i] < 0) continue;
            const Connection& c = conns[active_conn[i]];
            rem(i, c.output) = std::max(0.0, rem(i, c.output) - (next_t - t_now));
        }
        t_now = next_t;

        std::vector<int> freed_outputs;
        for (int i = 0; i < n; ++i) {
            if (active_conn[i] < 0 || conns[active_conn[i]].end != t_now) continue;
            const Connection& c = conns[active_conn[i]];
            rem(i, c.output) = 0.0;
            freed_outputs.push_back(c.output);
            output_active[c.output] = false;
            active_conn[i] = -1;
            input_state[i] = PortState::Reconfiguring;
            input_ready[i] = t_now + params.delta;
            last_completion = t_now;
        }

        if (max_load(rem) <= params.packet_rate * t_now) {
            for (int i = 0; i < n; ++i) {
                if (active_conn[i] < 0) continue;
                Connection& c = conns[active_conn[i]];
                c.end = t_now;
                c.amount = t_now - c.start;
                active_conn[i] = -1;
            }
            result.schedule.stop_time = t_now;
            result.total_time = t_now;
            return result;
        }

        std::sort(freed_outputs.begin(), freed_outputs.end());
        for (int j : freed_outputs) output_seek_pairing(j, t_now);
        for (int i = 0; i < n; ++i)
            if (input_state[i] == PortState::Reconfiguring && input_ready[i] == t_now) input_seek_pairing(i, t_now);
    }
}

}  // namespace hybridsched
