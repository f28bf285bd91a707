#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "metrics.hpp"
#include "sim.hpp"
#include "test_support.hpp"

using namespace minerr;
using namespace minerr::testing;

TEST_CASE("rk4_step golden cases") {
    const VectorField decay = [](double, const Vector& x) { return x.scaled(-1.0); };
    const Vector one{1.0};
    CHECK(rk4_step(decay, 0.0, one, 0.1)[0] == doctest::Approx(std::exp(-0.1)).epsilon(1e-7));
    CHECK(rk4_step(decay, 0.0, one, 0.1)[0] == doctest::Approx(0.9048375).epsilon(1e-7));

    const VectorField zero = [](double, const Vector& x) { return Vector(x.dim()); };
    CHECK(rk4_step(zero, 0.0, Vector{3.5, -1.0}, 0.5) == Vector{3.5, -1.0});

    const VectorField unit = [](double, const Vector& x) {
        Vector v(x.dim());
        v[0] = 1.0;
        return v;
    };
    CHECK(rk4_step(unit, 0.0, Vector{2.0}, 0.25)[0] == 2.25);
}

TEST_CASE("worked example completes with the framer property") {
    const Scenario s = make_paper_scenario();
    const Trajectory traj = simulate(s);
    CHECK(traj.status == SimStatus::Completed);
    CHECK(traj.times.front() == 0.0);
    CHECK(traj.times.back() == doctest::Approx(20.0));
    CHECK(framer_violation(traj) <= 1e-6);
    // recording grid spacing dt * stride
    for (std::size_t i = 1; i < traj.times.size(); ++i) {
        CHECK(traj.times[i] - traj.times[i - 1] == doctest::Approx(0.01).epsilon(1e-9));
    }
}

TEST_CASE("zero error with exact disturbance knowledge is invariant") {
    Scenario s = make_paper_scenario();
    // bounds collapse onto the true disturbance, frames start on the state
    s.envelope.delta_upper = s.envelope.delta;
    s.envelope.delta_lower = s.envelope.delta;
    s.xbar0 = s.x0;
    s.xlower0 = s.x0;
    const Trajectory traj = simulate(s);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(traj.xbar[k][i] == doctest::Approx(traj.x[k][i]).epsilon(1e-9));
            CHECK(traj.xlower[k][i] == doctest::Approx(traj.x[k][i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("finite escape is reported as divergence") {
    // scalar plant x' = x^2 via beta = y1^2, closed-form escape at t = 1
    Scenario s;
    s.plant.n = 1;
    s.plant.p = 1;
    s.plant.q = 1;
    s.plant.C = Matrix{{1}};
    s.plant.A_const = Matrix{{0}};
    s.plant.beta = exprs({"y1^2"}, 1, 1);
    s.plant.u_signal = exprs({"0"}, 0, 0);
    s.envelope.delta = exprs({"0"}, 0, 0);
    s.envelope.delta_upper = s.envelope.delta;
    s.envelope.delta_lower = s.envelope.delta;
    s.gains.upper = {Matrix{{-1}}};
    s.gains.lower = {Matrix{{-1}}};
    s.x0 = Vector{1.0};
    s.xbar0 = Vector{1.0};
    s.xlower0 = Vector{1.0};
    s.sim = {1e-4, 2.0, 1, 1e12};

    const Trajectory traj = simulate(s);
    CHECK(traj.status == SimStatus::Diverged);
    CHECK(traj.t_escape == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("error oracle stays at zero with exact bounds") {
    Scenario s = make_paper_scenario();
    s.envelope.delta_upper = s.envelope.delta;
    s.envelope.delta_lower = s.envelope.delta;
    s.xbar0 = s.x0;
    s.xlower0 = s.x0;
    const ErrorTrajectory traj = simulate_error_oracle(s);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        CHECK(traj.ebar[k].inf_norm() <= 1e-9);
        CHECK(traj.elower[k].inf_norm() <= 1e-9);
    }
}

TEST_CASE("joint simulation matches the direct error dynamics") {
    const Scenario s = make_paper_scenario();
    const Trajectory joint = simulate(s);
    const ErrorTrajectory direct = simulate_error_oracle(s);
    REQUIRE(joint.times.size() == direct.times.size());
    double dev = 0.0;
    for (std::size_t k = 0; k < joint.times.size(); ++k) {
        for (std::size_t i = 0; i < 3; ++i) {
            dev = std::max(dev, std::abs(joint.xbar[k][i] - joint.x[k][i] - direct.ebar[k][i]));
            dev = std::max(dev, std::abs(joint.x[k][i] - joint.xlower[k][i] - direct.elower[k][i]));
        }
    }
    CHECK(dev <= 1e-6);
}

TEST_CASE("determinism: identical scenario gives bitwise identical trajectories") {
    const Scenario s = make_paper_scenario();
    const Trajectory a = simulate(s);
    const Trajectory b = simulate(s);
    REQUIRE(a.times.size() == b.times.size());
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        CHECK(a.x[k] == b.x[k]);
        CHECK(a.xbar[k] == b.xbar[k]);
        CHECK(a.xlower[k] == b.xlower[k]);
    }
}

TEST_CASE("step halving changes the solution below 1e-6") {
    Scenario coarse = make_paper_scenario();
    coarse.sim.record_stride = 100;
    Scenario fine = coarse;
    fine.sim.dt = 5e-4;
    fine.sim.record_stride = 200;
    const Trajectory a = simulate(coarse);
    const Trajectory b = simulate(fine);
    REQUIRE(a.times.size() == b.times.size());
    double dev = 0.0;
    for (std::size_t k = 0; k < a.times.size(); ++k) {
        for (std::size_t i = 0; i < 3; ++i) {
            dev = std::max(dev, std::abs(a.x[k][i] - b.x[k][i]));
            dev = std::max(dev, std::abs(a.xbar[k][i] - b.xbar[k][i]));
            dev = std::max(dev, std::abs(a.xlower[k][i] - b.xlower[k][i]));
        }
    }
    CHECK(dev <= 1e-6);
}

TEST_CASE("error nonnegativity at sample times") {
    const Scenario s = make_paper_scenario();
    const Trajectory traj = simulate(s);
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const double slack = 1e-9 * (1.0 + traj.x[k].inf_norm());
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(traj.xbar[k][i] - traj.x[k][i] >= -slack);
            CHECK(traj.x[k][i] - traj.xlower[k][i] >= -slack);
        }
    }
}

TEST_CASE("envelope violation is a scenario error") {
    Scenario s = make_paper_scenario();
    // upper bound dips below the true disturbance after t = 1
    s.envelope.delta_upper = exprs({"2/(1+t) - t", "4/(1+t)", "4/(1+t)"}, 0, 0);
    CHECK_THROWS_AS(simulate(s), EnvelopeViolation);
}

TEST_CASE("multi-gain frames dominate every single-gain observer") {
    const Scenario multi = make_paper_scenario();
    const Trajectory multi_traj = simulate(multi);
    for (std::size_t k = 0; k < 3; ++k) {
        Scenario single = multi;
        single.gains.upper = {multi.gains.upper[k]};
        single.gains.lower = {multi.gains.lower[k]};
        const Trajectory single_traj = simulate(single);
        CHECK(dominance_check(multi_traj, {single_traj}) >= -1e-6);
    }
}
