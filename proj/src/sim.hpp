#pragma once

#include <functional>
#include <vector>

#include "observer.hpp"

namespace minerr {

struct EnvelopeViolation : std::runtime_error {
    EnvelopeViolation(double t, std::size_t component)
        : std::runtime_error("disturbance envelope violated at t=" + std::to_string(t) +
                             ", component " + std::to_string(component + 1)),
          t(t),
          component(component) {}
    double t;
    std::size_t component;
};

enum class SimStatus { Completed, Diverged };

struct Trajectory {
    std::vector<double> times;
    std::vector<Vector> x;
    std::vector<Vector> xbar;
    std::vector<Vector> xlower;
    std::vector<ActiveGains> active_gains;
    SimStatus status = SimStatus::Completed;
    double t_escape = 0.0;  // meaningful when status == Diverged
};

struct ErrorTrajectory {
    std::vector<double> times;
    std::vector<Vector> ebar;
    std::vector<Vector> elower;
    SimStatus status = SimStatus::Completed;
    double t_escape = 0.0;
};

using VectorField = std::function<Vector(double, const Vector&)>;

// Classical fixed-step RK4 update.
Vector rk4_step(const VectorField& f, double t, const Vector& state, double dt);

// Integrates the stacked (x, xbar, xlower) system with one shared RK4
// step so the observer sees y at the internal stages consistently. With
// a transform R set, the observer frames are integrated in z = R x
// coordinates and mapped back for recording. Stops early with Diverged
// when any component norm passes the threshold.
Trajectory simulate(const Scenario& scenario);

// Same stepping applied to (x, ebar, elower) using the direct error
// dynamics; the independent route for cross-checking simulate().
// Ignores scenario.transform.
ErrorTrajectory simulate_error_oracle(const Scenario& scenario);

}  // namespace minerr
