#include "model.hpp"

namespace minerr {

Matrix eval_A(const PlantModel& plant, const Vector& y) {
    Matrix a = plant.A_const;
    for (const auto& [j, term] : plant.A_y_terms) {
        a = a + term.scaled(y[j]);
    }
    return a;
}

Vector eval_beta(const PlantModel& plant, double t, const Vector& y, const Vector& u) {
    EvalContext ctx{t, &y, &u};
    Vector out(plant.n);
    for (std::size_t i = 0; i < plant.n; ++i) out[i] = plant.beta[i].eval(ctx);
    return out;
}

Vector eval_u(const PlantModel& plant, double t) {
    EvalContext ctx{t, nullptr, nullptr};
    Vector out(plant.q);
    for (std::size_t i = 0; i < plant.q; ++i) out[i] = plant.u_signal[i].eval(ctx);
    return out;
}

Vector eval_expr_vector(const std::vector<Expr>& exprs, double t) {
    EvalContext ctx{t, nullptr, nullptr};
    Vector out(exprs.size());
    for (std::size_t i = 0; i < exprs.size(); ++i) out[i] = exprs[i].eval(ctx);
    return out;
}

Vector plant_rhs(const PlantModel& plant, const DisturbanceEnvelope& envelope, double t,
                 const Vector& x, const Vector& u) {
    const Vector y = matvec(plant.C, x);
    const Vector ax = matvec(eval_A(plant, y), x);
    const Vector beta = eval_beta(plant, t, y, u);
    const Vector delta = eval_expr_vector(envelope.delta, t);
    Vector out(plant.n);
    for (std::size_t i = 0; i < plant.n; ++i) out[i] = ax[i] + beta[i] + delta[i];
    return out;
}

void check_scenario(const Scenario& s) {
    const auto& pl = s.plant;
    if (pl.n == 0 || pl.p == 0 || pl.q == 0) throw ScenarioError("dims must be positive");
    if (pl.C.rows() != pl.p || pl.C.cols() != pl.n) throw ScenarioError("C must be p x n");
    if (pl.A_const.rows() != pl.n || pl.A_const.cols() != pl.n)
        throw ScenarioError("A.const must be n x n");
    for (const auto& [j, term] : pl.A_y_terms) {
        if (j >= pl.p) throw ScenarioError("A y-term output index out of range");
        if (term.rows() != pl.n || term.cols() != pl.n)
            throw ScenarioError("A y-term matrix must be n x n");
    }
    if (pl.beta.size() != pl.n) throw ScenarioError("beta must have n entries");
    if (pl.u_signal.size() != pl.q) throw ScenarioError("u must have q entries");
    if (s.envelope.delta.size() != pl.n || s.envelope.delta_upper.size() != pl.n ||
        s.envelope.delta_lower.size() != pl.n) {
        throw ScenarioError("disturbance vectors must have n entries");
    }
    if (s.gains.phi() == 0) throw ScenarioError("at least one gain pair is required");
    if (s.gains.lower.size() != s.gains.upper.size())
        throw ScenarioError("gain families must have equal length");
    for (const auto& g : s.gains.upper) {
        if (g.rows() != pl.n || g.cols() != pl.p) throw ScenarioError("upper gain must be n x p");
    }
    for (const auto& g : s.gains.lower) {
        if (g.rows() != pl.n || g.cols() != pl.p) throw ScenarioError("lower gain must be n x p");
    }
    if (s.x0.dim() != pl.n || s.xbar0.dim() != pl.n || s.xlower0.dim() != pl.n)
        throw ScenarioError("initial vectors must have dim n");
    if (!elementwise_leq(s.xlower0, s.x0) || !elementwise_leq(s.x0, s.xbar0))
        throw ScenarioError("initial frames must satisfy xlower0 <= x0 <= xbar0");
    if (s.transform) {
        if (s.transform->rows() != pl.n || s.transform->cols() != pl.n)
            throw ScenarioError("transform must be n x n");
        if (!invert(*s.transform)) throw ScenarioError("transform matrix is singular");
    }
    if (!(s.sim.dt > 0.0) || !(s.sim.t_end > 0.0) || s.sim.dt > s.sim.t_end)
        throw ScenarioError("sim params require 0 < dt <= t_end");
    if (s.sim.record_stride == 0) throw ScenarioError("record_stride must be positive");
}

}  // namespace minerr
