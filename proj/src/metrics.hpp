#pragma once

#include <vector>

#include "sim.hpp"

namespace minerr {

struct MetricsReport {
    double max_framer_violation = 0.0;
    std::vector<double> width_integral;        // per component, trapezoid
    double lyapunov_decay_rate = 0.0;          // fitted from the V envelope
    double predicted_decay_rate = 0.0;         // epsilon / n
    double ultimate_bound_measured = 0.0;      // tail max of V
    double ultimate_bound_predicted = 0.0;     // (n/epsilon) * tail gap bound
    double dominance_margin = 0.0;             // set by dominance_check runs
    bool has_decay = false;
    bool decay_pass = false;
    bool has_ultimate = false;
    bool ultimate_pass = false;
    bool has_dominance = false;
};

// Max over samples and components of max(xlower-x, x-xbar, 0).
double framer_violation(const Trajectory& traj);

std::vector<double> width_integral(const Trajectory& traj);

enum class FrameSide { Upper, Lower };

// V(t) = max_i e_i(t)/v_i with e = xbar-x (Upper) or x-xlower (Lower).
std::vector<double> lyapunov_trace(const Trajectory& traj, const Vector& v, FrameSide side);

struct BoundCheck {
    double measured = 0.0;
    double predicted = 0.0;
    bool pass = false;
};

// For a zero-disturbance run: V(t) <= V(0) exp(-(eps/n) t) (1+1e-6) at
// every sample; measured rate from a log-linear fit of the running-max
// envelope of V.
BoundCheck decay_rate_check(const Trajectory& traj, const Certificate& cert, FrameSide side);

// Eq-style asymptotic gain check with limsup proxied by the trailing 20%
// of samples: tail max of V against (n/eps) * tail max of
// max_i (delta_upper_i - delta_i)/v_i (Upper side; mirrored for Lower).
BoundCheck ultimate_bound_check(const Trajectory& traj, const Certificate& cert,
                                const DisturbanceEnvelope& envelope, FrameSide side);

// Min over t, i, j of the slack of the multi-gain frames inside each
// single-gain observer's frames; negative margin below -1e-6 would
// falsify the comparison-principle prediction.
double dominance_check(const Trajectory& multi, const std::vector<Trajectory>& singles);

}  // namespace minerr
