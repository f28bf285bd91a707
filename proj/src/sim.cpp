#include "sim.hpp"

#include <cmath>

namespace minerr {

namespace {

bool exceeded(const Vector& v, double threshold) {
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (!std::isfinite(v[i]) || std::abs(v[i]) > threshold) return true;
    }
    return false;
}

void check_envelope(const DisturbanceEnvelope& envelope, double t) {
    const Vector d = eval_expr_vector(envelope.delta, t);
    const Vector db = eval_expr_vector(envelope.delta_upper, t);
    const Vector dl = eval_expr_vector(envelope.delta_lower, t);
    for (std::size_t i = 0; i < d.dim(); ++i) {
        if (d[i] < dl[i] || d[i] > db[i]) throw EnvelopeViolation(t, i);
    }
}

Vector stack3(const Vector& a, const Vector& b, const Vector& c) {
    Vector out(a.dim() * 3);
    for (std::size_t i = 0; i < a.dim(); ++i) {
        out[i] = a[i];
        out[a.dim() + i] = b[i];
        out[2 * a.dim() + i] = c[i];
    }
    return out;
}

Vector slice(const Vector& s, std::size_t offset, std::size_t n) {
    Vector out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = s[offset + i];
    return out;
}

}  // namespace

Vector rk4_step(const VectorField& f, double t, const Vector& state, double dt) {
    const Vector k1 = f(t, state);
    const Vector k2 = f(t + dt / 2.0, state + k1.scaled(dt / 2.0));
    const Vector k3 = f(t + dt / 2.0, state + k2.scaled(dt / 2.0));
    const Vector k4 = f(t + dt, state + k3.scaled(dt));
    Vector out(state.dim());
    for (std::size_t i = 0; i < state.dim(); ++i) {
        out[i] = state[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    return out;
}

Trajectory simulate(const Scenario& scenario) {
    check_scenario(scenario);
    const PlantModel& plant = scenario.plant;
    const std::size_t n = plant.n;

    const bool transformed = scenario.transform.has_value();
    PlantMatrices obs_mats =
        transformed ? transformed_plant_matrices(plant, *scenario.transform)
                    : plant_matrices(plant);
    std::optional<Matrix> R = scenario.transform;
    std::optional<Matrix> S;
    std::optional<TransformedBounds> z_bounds;
    if (transformed) {
        S = invert(*R);
        z_bounds.emplace(*R, scenario.envelope.delta_upper, scenario.envelope.delta_lower);
    }

    Vector fu0 = scenario.xbar0;
    Vector fl0 = scenario.xlower0;
    if (transformed) {
        const FramePair z0 = map_initial_frames(*R, scenario.xbar0, scenario.xlower0);
        fu0 = z0.upper;
        fl0 = z0.lower;
    }

    const VectorField field = [&](double t, const Vector& s) -> Vector {
        const Vector x = slice(s, 0, n);
        const Vector fu = slice(s, n, n);
        const Vector fl = slice(s, 2 * n, n);

        const Vector y = matvec(plant.C, x);
        const Vector u = eval_u(plant, t);
        const Vector beta = eval_beta(plant, t, y, u);
        const Vector delta = eval_expr_vector(scenario.envelope.delta, t);
        const Vector ax = matvec(eval_A(plant, y), x);

        Vector dx(n);
        for (std::size_t i = 0; i < n; ++i) dx[i] = ax[i] + beta[i] + delta[i];

        Vector obs_beta = beta;
        Vector db, dl;
        if (transformed) {
            obs_beta = matvec(*R, beta);
            db = z_bounds->upper(t);
            dl = z_bounds->lower(t);
        } else {
            db = eval_expr_vector(scenario.envelope.delta_upper, t);
            dl = eval_expr_vector(scenario.envelope.delta_lower, t);
        }
        const ObserverDerivative od =
            observer_rhs(obs_mats, scenario.gains, {fu, fl}, y, obs_beta, db, dl);
        return stack3(dx, od.d_xbar, od.d_xlower);
    };

    auto record_sample = [&](Trajectory& traj, double t, const Vector& s) {
        const Vector x = slice(s, 0, n);
        const Vector fu = slice(s, n, n);
        const Vector fl = slice(s, 2 * n, n);
        const Vector y = matvec(plant.C, x);
        traj.times.push_back(t);
        traj.x.push_back(x);
        if (transformed) {
            const FramePair frames = map_frames_to_original(*S, fu, fl);
            traj.xbar.push_back(frames.upper);
            traj.xlower.push_back(frames.lower);
        } else {
            traj.xbar.push_back(fu);
            traj.xlower.push_back(fl);
        }
        traj.active_gains.push_back({q_upper(scenario.gains, obs_mats.C, fu, y).active,
                                     q_lower(scenario.gains, obs_mats.C, fl, y).active});
    };

    Trajectory traj;
    Vector state = stack3(scenario.x0, fu0, fl0);
    const double dt = scenario.sim.dt;
    const auto steps = static_cast<std::size_t>(std::llround(scenario.sim.t_end / dt));

    check_envelope(scenario.envelope, 0.0);
    record_sample(traj, 0.0, state);

    for (std::size_t step = 0; step < steps; ++step) {
        const double t = static_cast<double>(step) * dt;
        state = rk4_step(field, t, state, dt);
        const double t_next = static_cast<double>(step + 1) * dt;
        if (exceeded(state, scenario.sim.divergence_threshold)) {
            traj.status = SimStatus::Diverged;
            traj.t_escape = t_next;
            return traj;
        }
        check_envelope(scenario.envelope, t_next);
        if ((step + 1) % scenario.sim.record_stride == 0) record_sample(traj, t_next, state);
    }
    return traj;
}

ErrorTrajectory simulate_error_oracle(const Scenario& scenario) {
    check_scenario(scenario);
    const PlantModel& plant = scenario.plant;
    const std::size_t n = plant.n;

    const VectorField field = [&](double t, const Vector& s) -> Vector {
        const Vector x = slice(s, 0, n);
        const Vector ebar = slice(s, n, n);
        const Vector elower = slice(s, 2 * n, n);
        const Vector y = matvec(plant.C, x);
        const Vector u = eval_u(plant, t);
        const Vector beta = eval_beta(plant, t, y, u);
        const Vector delta = eval_expr_vector(scenario.envelope.delta, t);
        const Vector ax = matvec(eval_A(plant, y), x);
        Vector dx(n);
        for (std::size_t i = 0; i < n; ++i) dx[i] = ax[i] + beta[i] + delta[i];
        const ErrorDerivative ed =
            error_rhs_oracle(plant, scenario.envelope, scenario.gains, t, ebar, elower, y);
        return stack3(dx, ed.d_ebar, ed.d_elower);
    };

    ErrorTrajectory traj;
    Vector state =
        stack3(scenario.x0, scenario.xbar0 - scenario.x0, scenario.x0 - scenario.xlower0);
    const double dt = scenario.sim.dt;
    const auto steps = static_cast<std::size_t>(std::llround(scenario.sim.t_end / dt));

    auto record_sample = [&](double t, const Vector& s) {
        traj.times.push_back(t);
        traj.ebar.push_back(slice(s, n, n));
        traj.elower.push_back(slice(s, 2 * n, n));
    };

    check_envelope(scenario.envelope, 0.0);
    record_sample(0.0, state);

    for (std::size_t step = 0; step < steps; ++step) {
        const double t = static_cast<double>(step) * dt;
        state = rk4_step(field, t, state, dt);
        const double t_next = static_cast<double>(step + 1) * dt;
        if (exceeded(state, scenario.sim.divergence_threshold)) {
            traj.status = SimStatus::Diverged;
            traj.t_escape = t_next;
            return traj;
        }
        check_envelope(scenario.envelope, t_next);
        if ((step + 1) % scenario.sim.record_stride == 0) record_sample(t_next, state);
    }
    return traj;
}

}  // namespace minerr
