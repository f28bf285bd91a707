#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "model.hpp"

namespace minerr {

// Per-row gain indices selected by the min/max mixing (1-based, ties to
// the smallest k).
struct ActiveGains {
    std::vector<int> upper_idx;
    std::vector<int> lower_idx;
};

struct QResult {
    Vector value;
    std::vector<int> active;  // 1-based argmin/argmax per row
};

// Q_upper_i = min_k [L_k]_i (C xbar - y);  Q_lower_i = max_k [L_k]_i (C xlower - y).
QResult q_upper(const GainSet& gains, const Matrix& C, const Vector& xbar, const Vector& y);
QResult q_lower(const GainSet& gains, const Matrix& C, const Vector& xlower, const Vector& y);

struct ObserverDerivative {
    Vector d_xbar;
    Vector d_xlower;
    ActiveGains active;
};

struct ObserverState {
    Vector xbar;
    Vector xlower;
};

// The matrices the observer hypotheses live on. Identity view of a
// plant, or its similarity transform under z = R x.
struct PlantMatrices {
    Matrix A_const;
    std::vector<std::pair<std::size_t, Matrix>> A_y_terms;
    Matrix C;
};

PlantMatrices plant_matrices(const PlantModel& plant);
PlantMatrices transformed_plant_matrices(const PlantModel& plant, const Matrix& R);
Matrix eval_A(const PlantMatrices& mats, const Vector& y);

// One observer step's right-hand side given the measured output y, the
// observer-frame matrices, the already evaluated beta vector and the
// disturbance bounds at time t. Only (y, u, t) reach the observer; the
// plant state never does.
ObserverDerivative observer_rhs(const PlantMatrices& mats, const GainSet& gains,
                                const ObserverState& state, const Vector& y, const Vector& beta,
                                const Vector& delta_upper, const Vector& delta_lower);

// Convenience overload in the untransformed coordinates.
ObserverDerivative observer_rhs(const PlantModel& plant, const DisturbanceEnvelope& envelope,
                                const GainSet& gains, double t, const ObserverState& state,
                                const Vector& u, const Vector& y);

// Direct error dynamics
//   ebar'_i   = min_k [A(y)+Lbar_k C]_i ebar   + (delta_upper - delta)_i
//   elower'_i = min_k [A(y)+Llow_k C]_i elower + (delta - delta_lower)_i
// kept independent of observer_rhs so the two routes can be cross-checked.
struct ErrorDerivative {
    Vector d_ebar;
    Vector d_elower;
};

ErrorDerivative error_rhs_oracle(const PlantModel& plant, const DisturbanceEnvelope& envelope,
                                 const GainSet& gains, double t, const Vector& ebar,
                                 const Vector& elower, const Vector& y);

struct MetzlerViolation {
    bool upper_family = false;
    std::size_t gain = 0;  // 1-based
    std::size_t row = 0;
    std::size_t col = 0;
    double value = 0.0;
};

struct GainValidation {
    bool metzler_ok = false;
    bool metzler_proven = false;  // false when only checked at omega samples
    std::vector<MetzlerViolation> violations;
    std::vector<std::optional<Certificate>> upper_certs;  // per gain k
    std::vector<std::optional<Certificate>> lower_certs;
    std::optional<Certificate> best_upper;  // largest epsilon among feasible
    std::optional<Certificate> best_lower;
    bool certificates_ok() const { return best_upper && best_lower; }
};

// Checks that A(omega)+L_k C is Metzler for every gain of both families
// and computes Hurwitz certificates per gain. For a constant A the check
// is exact; with y-dependent terms it is exact when every term's
// off-diagonals vanish, otherwise it degrades to the supplied omega
// samples and is flagged as not proven.
GainValidation validate_gains(const PlantMatrices& mats, const GainSet& gains,
                              const std::vector<Vector>& omega_samples = {});

// Zero plus +/- unit and +/- 10x unit directions in R^p; the default
// check set for sample-based Metzler verification of affine A(y).
std::vector<Vector> default_omega_samples(std::size_t p);

// Frame mapping through a coordinate change (S = R^{-1}):
//   xbar = S+ zbar - S- zlower,  xlower = S+ zlower - S- zbar.
struct FramePair {
    Vector upper;
    Vector lower;
};

FramePair map_frames_to_original(const Matrix& S, const Vector& zbar, const Vector& zlower);
FramePair map_initial_frames(const Matrix& R, const Vector& xbar0, const Vector& xlower0);

// Evaluators for the transformed disturbance bounds
//   t -> R+ delta_upper(t) - R- delta_lower(t)   (upper)
//   t -> R+ delta_lower(t) - R- delta_upper(t)   (lower).
class TransformedBounds {
public:
    TransformedBounds(const Matrix& R, std::vector<Expr> delta_upper,
                      std::vector<Expr> delta_lower);
    Vector upper(double t) const;
    Vector lower(double t) const;

private:
    Matrix r_plus_;
    Matrix r_minus_;
    std::vector<Expr> delta_upper_;
    std::vector<Expr> delta_lower_;
};

}  // namespace minerr
