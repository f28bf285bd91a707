#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "model.hpp"
#include "test_support.hpp"

using namespace minerr;
using namespace minerr::testing;

TEST_CASE("eval_A constant case") {
    const Scenario s = make_paper_scenario();
    CHECK(eval_A(s.plant, Vector{2, 3}) == paper_A());
    CHECK(eval_A(s.plant, Vector{-7, 0.1}) == paper_A());
}

TEST_CASE("eval_A affine case") {
    PlantModel plant;
    plant.n = 2;
    plant.p = 1;
    plant.q = 1;
    plant.A_const = Matrix::zero(2, 2);
    plant.A_y_terms.emplace_back(0, Matrix::identity(2));
    CHECK(eval_A(plant, Vector{2.0}) == Matrix::identity(2).scaled(2.0));
}

TEST_CASE("eval_A is affine in y") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    PlantModel plant;
    plant.n = 3;
    plant.p = 2;
    plant.q = 1;
    plant.A_const = Matrix(3, 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) plant.A_const(i, j) = dist(rng);
    for (std::size_t j = 0; j < 2; ++j) {
        Matrix term(3, 3);
        for (std::size_t r = 0; r < 3; ++r)
            for (std::size_t c = 0; c < 3; ++c) term(r, c) = dist(rng);
        plant.A_y_terms.emplace_back(j, term);
    }
    for (int trial = 0; trial < 50; ++trial) {
        const Vector y1{dist(rng), dist(rng)};
        const Vector y2{dist(rng), dist(rng)};
        const Matrix lhs = eval_A(plant, y1) + eval_A(plant, y2) - plant.A_const;
        const Matrix rhs = eval_A(plant, y1 + y2);
        for (std::size_t r = 0; r < 3; ++r) {
            for (std::size_t c = 0; c < 3; ++c) {
                CHECK(lhs(r, c) == doctest::Approx(rhs(r, c)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("eval_beta") {
    const Scenario s = make_paper_scenario();
    const Vector u{0.0};
    const Vector b1 = eval_beta(s.plant, 0.0, Vector{0, 1}, u);
    CHECK(b1[0] == 0.0);
    CHECK(b1[1] == doctest::Approx(0.8));
    CHECK(b1[2] == 0.0);

    const Vector b0 = eval_beta(s.plant, 0.0, Vector{5, 0}, u);
    CHECK(b0[0] == 0.0);
    CHECK(b0[1] == 0.0);
    CHECK(b0[2] == 0.0);
}

TEST_CASE("plant_rhs trivial cases") {
    PlantModel plant;
    plant.n = 2;
    plant.p = 1;
    plant.q = 1;
    plant.C = Matrix{{1, 0}};
    plant.A_const = Matrix::identity(2).scaled(-1.0);
    plant.beta = exprs({"0", "0"}, 1, 1);
    plant.u_signal = exprs({"0"}, 0, 0);
    DisturbanceEnvelope env;
    env.delta = exprs({"0", "0"}, 0, 0);
    env.delta_upper = env.delta;
    env.delta_lower = env.delta;

    const Vector d = plant_rhs(plant, env, 0.0, Vector{1, 1}, Vector{0.0});
    CHECK(d[0] == -1.0);
    CHECK(d[1] == -1.0);

    const Vector zero = plant_rhs(plant, env, 0.3, Vector{0, 0}, Vector{0.0});
    CHECK(zero[0] == 0.0);
    CHECK(zero[1] == 0.0);
}

TEST_CASE("plant_rhs golden value at t=0 for the worked example") {
    const Scenario s = make_paper_scenario();
    const Vector d = plant_rhs(s.plant, s.envelope, 0.0, s.x0, Vector{0.0});
    // y = (2,3); A x = (-0.5, 1.4, -8.4); beta = (0, 3.6, 0); delta(0) = (2, 0, -4)
    CHECK(d[0] == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(d[1] == doctest::Approx(5.0).epsilon(1e-12));
    CHECK(d[2] == doctest::Approx(-12.4).epsilon(1e-12));
}

TEST_CASE("envelope sandwich holds on the shipped scenario grid") {
    const Scenario s = make_paper_scenario();
    for (double t = 0.0; t <= 20.0; t += 0.05) {
        const Vector d = eval_expr_vector(s.envelope.delta, t);
        const Vector hi = eval_expr_vector(s.envelope.delta_upper, t);
        const Vector lo = eval_expr_vector(s.envelope.delta_lower, t);
        CHECK(elementwise_leq(lo, d));
        CHECK(elementwise_leq(d, hi));
    }
}

TEST_CASE("check_scenario rejects inconsistent input") {
    Scenario s = make_paper_scenario();
    CHECK_NOTHROW(check_scenario(s));

    Scenario bad_init = s;
    bad_init.xlower0 = Vector{3, 3, 3};
    CHECK_THROWS_AS(check_scenario(bad_init), ScenarioError);

    Scenario bad_gain = s;
    bad_gain.gains.upper[0] = Matrix::zero(2, 2);
    CHECK_THROWS_AS(check_scenario(bad_gain), ScenarioError);

    Scenario bad_transform = s;
    bad_transform.transform = Matrix::zero(3, 3);
    CHECK_THROWS_AS(check_scenario(bad_transform), ScenarioError);

    Scenario bad_sim = s;
    bad_sim.sim.dt = 0.0;
    CHECK_THROWS_AS(check_scenario(bad_sim), ScenarioError);
}
