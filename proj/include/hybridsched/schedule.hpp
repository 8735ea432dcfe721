#pragma once

#include <vector>

#include "hybridsched/matching.hpp"

namespace hybridsched {

struct ScheduleStep {
    Matching matching;
    double duration = 0.0;
};

/// Synchronous circuit-switch schedule: an ordered list of (matching,
/// duration) pairs. `circuit_time` is K*delta + sum of durations.
struct Schedule {
    std::vector<ScheduleStep> steps;
    double circuit_time = 0.0;

    int num_steps() const { return static_cast<int>(steps.size()); }
};

}  // namespace hybridsched
