#include "observer.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace minerr {

namespace {

Vector residual(const Matrix& C, const Vector& frame, const Vector& y) {
    const Vector cy = matvec(C, frame);
    Vector r(y.dim());
    for (std::size_t i = 0; i < y.dim(); ++i) r[i] = cy[i] - y[i];
    return r;
}

QResult q_mix(const std::vector<Matrix>& gains, const Vector& resid, bool take_min) {
    const std::size_t n = gains.front().rows();
    QResult out{Vector(n), std::vector<int>(n, 1)};
    for (std::size_t i = 0; i < n; ++i) {
        double best = row_dot(gains[0], i, resid);
        int best_k = 1;
        for (std::size_t k = 1; k < gains.size(); ++k) {
            const double cand = row_dot(gains[k], i, resid);
            if (take_min ? cand < best : cand > best) {
                best = cand;
                best_k = static_cast<int>(k) + 1;
            }
        }
        out.value[i] = best;
        out.active[i] = best_k;
    }
    return out;
}

}  // namespace

QResult q_upper(const GainSet& gains, const Matrix& C, const Vector& xbar, const Vector& y) {
    return q_mix(gains.upper, residual(C, xbar, y), /*take_min=*/true);
}

QResult q_lower(const GainSet& gains, const Matrix& C, const Vector& xlower, const Vector& y) {
    return q_mix(gains.lower, residual(C, xlower, y), /*take_min=*/false);
}

PlantMatrices plant_matrices(const PlantModel& plant) {
    return {plant.A_const, plant.A_y_terms, plant.C};
}

PlantMatrices transformed_plant_matrices(const PlantModel& plant, const Matrix& R) {
    auto S = invert(R);
    if (!S) throw ScenarioError("transform matrix is singular");
    PlantMatrices out;
    out.A_const = R * plant.A_const * *S;
    for (const auto& [j, term] : plant.A_y_terms) {
        out.A_y_terms.emplace_back(j, R * term * *S);
    }
    out.C = plant.C * *S;
    return out;
}

Matrix eval_A(const PlantMatrices& mats, const Vector& y) {
    Matrix a = mats.A_const;
    for (const auto& [j, term] : mats.A_y_terms) a = a + term.scaled(y[j]);
    return a;
}

ObserverDerivative observer_rhs(const PlantMatrices& mats, const GainSet& gains,
                                const ObserverState& state, const Vector& y, const Vector& beta,
                                const Vector& delta_upper, const Vector& delta_lower) {
    const Matrix a = eval_A(mats, y);
    const Vector a_xbar = matvec(a, state.xbar);
    const Vector a_xlower = matvec(a, state.xlower);
    const QResult qu = q_upper(gains, mats.C, state.xbar, y);
    const QResult ql = q_lower(gains, mats.C, state.xlower, y);

    const std::size_t n = state.xbar.dim();
    ObserverDerivative out{Vector(n), Vector(n), {qu.active, ql.active}};
    for (std::size_t i = 0; i < n; ++i) {
        out.d_xbar[i] = a_xbar[i] + qu.value[i] + beta[i] + delta_upper[i];
        out.d_xlower[i] = a_xlower[i] + ql.value[i] + beta[i] + delta_lower[i];
    }
    return out;
}

ObserverDerivative observer_rhs(const PlantModel& plant, const DisturbanceEnvelope& envelope,
                                const GainSet& gains, double t, const ObserverState& state,
                                const Vector& u, const Vector& y) {
    const Vector beta = eval_beta(plant, t, y, u);
    const Vector db = eval_expr_vector(envelope.delta_upper, t);
    const Vector dl = eval_expr_vector(envelope.delta_lower, t);
    return observer_rhs(plant_matrices(plant), gains, state, y, beta, db, dl);
}

ErrorDerivative error_rhs_oracle(const PlantModel& plant, const DisturbanceEnvelope& envelope,
                                 const GainSet& gains, double t, const Vector& ebar,
                                 const Vector& elower, const Vector& y) {
    const Matrix a = eval_A(plant, y);
    const Vector delta = eval_expr_vector(envelope.delta, t);
    const Vector db = eval_expr_vector(envelope.delta_upper, t);
    const Vector dl = eval_expr_vector(envelope.delta_lower, t);

    const std::size_t n = ebar.dim();
    ErrorDerivative out{Vector(n), Vector(n)};
    for (std::size_t i = 0; i < n; ++i) {
        double best_u = std::numeric_limits<double>::infinity();
        double best_l = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < gains.phi(); ++k) {
            const Matrix mu = a + gains.upper[k] * plant.C;
            const Matrix ml = a + gains.lower[k] * plant.C;
            best_u = std::min(best_u, row_dot(mu, i, ebar));
            best_l = std::min(best_l, row_dot(ml, i, elower));
        }
        out.d_ebar[i] = best_u + (db[i] - delta[i]);
        out.d_elower[i] = best_l + (delta[i] - dl[i]);
    }
    return out;
}

GainValidation validate_gains(const PlantMatrices& mats, const GainSet& gains,
                              const std::vector<Vector>& omega_samples) {
    GainValidation report;

    // When every y-term has zero off-diagonals, the off-diagonal pattern
    // of A(omega)+L_k C is constant in omega and the check at A_const is
    // exact.
    bool structure_exact = true;
    for (const auto& [j, term] : mats.A_y_terms) {
        for (std::size_t r = 0; r < term.rows(); ++r) {
            for (std::size_t c = 0; c < term.cols(); ++c) {
                if (r != c && term(r, c) != 0.0) structure_exact = false;
            }
        }
    }

    std::vector<Matrix> check_points;
    check_points.push_back(mats.A_const);
    if (!mats.A_y_terms.empty()) {
        for (const auto& omega : omega_samples) check_points.push_back(eval_A(mats, omega));
    }

    auto check_family = [&](const std::vector<Matrix>& family, bool upper) {
        for (std::size_t k = 0; k < family.size(); ++k) {
            for (const auto& a : check_points) {
                const Matrix m = a + family[k] * mats.C;
                for (std::size_t r = 0; r < m.rows(); ++r) {
                    for (std::size_t c = 0; c < m.cols(); ++c) {
                        if (r != c && m(r, c) < 0.0) {
                            report.violations.push_back({upper, k + 1, r, c, m(r, c)});
                        }
                    }
                }
            }
        }
    };
    check_family(gains.upper, true);
    check_family(gains.lower, false);
    report.metzler_ok = report.violations.empty();
    report.metzler_proven = mats.A_y_terms.empty() || structure_exact;

    auto certify_family = [&](const std::vector<Matrix>& family,
                              std::vector<std::optional<Certificate>>& certs,
                              std::optional<Certificate>& best) {
        for (std::size_t k = 0; k < family.size(); ++k) {
            const Matrix m = mats.A_const + family[k] * mats.C;
            auto cert = hurwitz_metzler_certificate(m, static_cast<int>(k) + 1);
            if (cert && (!best || cert->epsilon > best->epsilon)) best = cert;
            certs.push_back(std::move(cert));
        }
    };
    certify_family(gains.upper, report.upper_certs, report.best_upper);
    certify_family(gains.lower, report.lower_certs, report.best_lower);
    return report;
}

std::vector<Vector> default_omega_samples(std::size_t p) {
    std::vector<Vector> out;
    out.push_back(Vector(p));
    for (std::size_t j = 0; j < p; ++j) {
        for (double scale : {1.0, -1.0, 10.0, -10.0}) {
            Vector v(p);
            v[j] = scale;
            out.push_back(v);
        }
    }
    return out;
}

FramePair map_frames_to_original(const Matrix& S, const Vector& zbar, const Vector& zlower) {
    const auto [sp, sm] = positive_split(S);
    return {matvec(sp, zbar) - matvec(sm, zlower), matvec(sp, zlower) - matvec(sm, zbar)};
}

FramePair map_initial_frames(const Matrix& R, const Vector& xbar0, const Vector& xlower0) {
    const auto [rp, rm] = positive_split(R);
    return {matvec(rp, xbar0) - matvec(rm, xlower0), matvec(rp, xlower0) - matvec(rm, xbar0)};
}

TransformedBounds::TransformedBounds(const Matrix& R, std::vector<Expr> delta_upper,
                                     std::vector<Expr> delta_lower)
    : delta_upper_(std::move(delta_upper)), delta_lower_(std::move(delta_lower)) {
    const auto [rp, rm] = positive_split(R);
    r_plus_ = rp;
    r_minus_ = rm;
}

Vector TransformedBounds::upper(double t) const {
    return matvec(r_plus_, eval_expr_vector(delta_upper_, t)) -
           matvec(r_minus_, eval_expr_vector(delta_lower_, t));
}

Vector TransformedBounds::lower(double t) const {
    return matvec(r_plus_, eval_expr_vector(delta_lower_, t)) -
           matvec(r_minus_, eval_expr_vector(delta_upper_, t));
}

}  // namespace minerr
