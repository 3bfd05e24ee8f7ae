#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>

#include "tma/milp_model.hpp"
#include "tma/schedule.hpp"

namespace tma {

struct SolveLimits {
    double time_limit_s = 300.0;
    std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
};

enum class SolveStatus { Optimal, Infeasible, Timeout };

std::string to_string(SolveStatus s);

struct SolveReport {
    SolveStatus status = SolveStatus::Infeasible;
    std::int64_t nodes_explored = 0;
    double wall_time_s = 0.0;
    double best_bound = 0.0;
    double incumbent = std::numeric_limits<double>::quiet_NaN();

    // CSV row: status,J,wall_time,nodes
    std::string csv_row() const;
};

struct SolveResult {
    std::optional<Schedule> schedule;
    SolveReport report;
};

// Exact branch-and-bound. Branches on route arcs, then waypoint precedences
// (most violated first), then speed levels; each node evaluates the earliest
// schedule of the induced difference-constraint system by longest-path
// relaxation. Deterministic: equal inputs give equal schedules and node
// counts. An optional warm start is adopted as the initial incumbent when it
// audits cleanly against this problem.
SolveResult solve(const StructuredProblem& sp, const SolveLimits& limits = {},
                  const Schedule* warm_start = nullptr);

// Exhaustive reference: enumerates every route combination, speed-level
// combination and per-waypoint passage order, evaluating each with its own
// earliest-schedule relaxation. Guarded to <= 4 flights, <= 12 waypoints,
// <= 2 speed levels. Returns nullopt when no combination is feasible.
std::optional<Schedule> brute_force_oracle(const StructuredProblem& sp);

} // namespace tma
