#pragma once

#include <string>

#include "metrics.hpp"

namespace minerr {

// Scenario JSON schema:
//   dims {n, p, q}
//   C: [[...], ...]                         p x n
//   A  {const: [[...], ...], y_terms: [{j, matrix}]}
//   beta: ["expr", ...]                     n expressions in t, y, u
//   u: ["expr", ...]                        q expressions in t only
//   delta {true: [...], upper: [...], lower: [...]}   n expressions in t
//   gains {upper: [matrix, ...], lower: [matrix, ...]}  each n x p
//   init {x0, xbar0, xlower0}
//   transform: optional n x n matrix R
//   sim {dt, t_end, record_stride, divergence_threshold?}
Scenario load_scenario_json(const std::string& json_text);
Scenario load_scenario_file(const std::string& path);

// Initial sandwich xlower0 <= x0 <= xbar0 is a Theorem hypothesis, not a
// schema rule; verify reports it, simulate requires it.
bool initial_frames_ok(const Scenario& scenario);

// Columns: t, x_1..x_n, xbar_1..xbar_n, xlower_1..xlower_n,
// upidx_1..upidx_n, loidx_1..loidx_n; 12 significant digits.
std::string trajectory_csv(const Trajectory& traj);
Trajectory parse_trajectory_csv(const std::string& csv);

std::string error_trajectory_csv(const ErrorTrajectory& traj);

std::string verify_report_json(const Scenario& scenario, const GainValidation& validation);
bool verify_ok(const Scenario& scenario, const GainValidation& validation);

MetricsReport compute_metrics(const Scenario& scenario, const Trajectory& traj,
                              const GainValidation& validation);
std::string metrics_json(const Trajectory& traj, const MetricsReport& report);

struct CompareResult {
    std::string csv;          // per-component interval widths over time
    std::string report_json;  // dominance margins per single-gain observer
    double min_margin = 0.0;
    bool pass = false;
};

// Runs the multi-gain scenario plus one single-gain variant per k (k-th
// upper paired with k-th lower) and compares frame tightness.
CompareResult run_compare(const Scenario& scenario);

}  // namespace minerr
