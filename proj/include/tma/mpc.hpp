#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tma/scenario.hpp"
#include "tma/simulator.hpp"
#include "tma/solver.hpp"

namespace tma {

enum class PlanMethod { Milp, Dijkstra };
enum class ReplanTrigger { Periodic, OnEntry, Both };

PlanMethod plan_method_from_string(const std::string& s);
std::string to_string(PlanMethod m);

struct MpcConfig {
    double look_ahead_s = 600.0;
    double control_s = 300.0;
    double solve_time_limit_s = 300.0;
    ReplanTrigger trigger = ReplanTrigger::Periodic;
    PlanMethod method = PlanMethod::Milp;
    bool keep_trace = true;
};

struct CycleReport {
    double clock = 0.0;
    int flights = 0;
    bool retried = false;
    SolveReport solve;
};

struct RunMetrics {
    bool infeasible = false;
    double realized_j = 0.0;   // mean simulator landing clock over all flights
    double planned_j = 0.0;    // objective of the last full plan
    double solve_wall_s = 0.0; // total optimization time, IO excluded
    std::vector<CycleReport> cycles;
    std::vector<SimEvent> trace;
    std::vector<std::pair<int, double>> landings; // (flight, landing clock)
};

// Rolling-horizon closed loop: observe, encode, plan, load commands, advance
// the plant one control horizon, repeat. A failed cycle is retried once with
// the look-ahead extended by 50%; a second failure marks the run infeasible.
RunMetrics run_closed_loop(const Scenario& scn, const MpcConfig& cfg,
                           const DisturbanceConfig* disturbance = nullptr);

// Solves the whole scenario as one problem and executes it nominally.
RunMetrics one_shot(const Scenario& scn, const SolveLimits& limits = {});

std::string run_summary_json(const Scenario& scn, const MpcConfig& cfg, const RunMetrics& m);

} // namespace tma
