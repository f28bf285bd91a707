#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "expr.hpp"
#include "linalg.hpp"

namespace minerr {

struct ScenarioError : std::runtime_error {
    explicit ScenarioError(const std::string& msg) : std::runtime_error(msg) {}
};

// Plant  x' = A(y) x + beta(y,u) + delta(t),  y = C x.
// A(y) is an affine pencil A_const + sum_j y_j A_j; this covers the
// constant case and keeps the Metzler-for-all-y check tractable.
struct PlantModel {
    std::size_t n = 0;
    std::size_t p = 0;
    std::size_t q = 0;
    Matrix C;                                          // p x n
    Matrix A_const;                                    // n x n
    std::vector<std::pair<std::size_t, Matrix>> A_y_terms;  // (output index j, n x n term)
    std::vector<Expr> beta;                            // dim n, vars t/y/u
    std::vector<Expr> u_signal;                        // dim q, vars t only
};

// Known bounds delta_lower(t) <= delta(t) <= delta_upper(t). The true
// delta is a test signal: only the simulator's plant integration reads
// it, observers see the bounds alone.
struct DisturbanceEnvelope {
    std::vector<Expr> delta;        // dim n
    std::vector<Expr> delta_upper;  // dim n
    std::vector<Expr> delta_lower;  // dim n
};

// phi gain pairs; upper[k] and lower[k] are n x p.
struct GainSet {
    std::vector<Matrix> upper;
    std::vector<Matrix> lower;
    std::size_t phi() const { return upper.size(); }
};

struct SimParams {
    double dt = 1e-3;
    double t_end = 20.0;
    std::size_t record_stride = 1;
    double divergence_threshold = 1e12;
};

struct Scenario {
    PlantModel plant;
    DisturbanceEnvelope envelope;
    GainSet gains;
    Vector x0;
    Vector xbar0;
    Vector xlower0;
    std::optional<Matrix> transform;  // R, n x n nonsingular: observer runs in z = R x
    SimParams sim;
};

Matrix eval_A(const PlantModel& plant, const Vector& y);
Vector eval_beta(const PlantModel& plant, double t, const Vector& y, const Vector& u);
Vector eval_u(const PlantModel& plant, double t);
Vector eval_expr_vector(const std::vector<Expr>& exprs, double t);

Vector plant_rhs(const PlantModel& plant, const DisturbanceEnvelope& envelope, double t,
                 const Vector& x, const Vector& u);

// Structural consistency checks (shapes, initial sandwich, transform
// invertibility). Gain hypotheses are checked separately by
// validate_gains.
void check_scenario(const Scenario& scenario);

}  // namespace minerr
