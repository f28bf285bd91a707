#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace minerr {

namespace {

std::size_t tail_begin(std::size_t count) { return count - std::max<std::size_t>(count / 5, 1); }

Vector error_at(const Trajectory& traj, std::size_t s, FrameSide side) {
    return side == FrameSide::Upper ? traj.xbar[s] - traj.x[s] : traj.x[s] - traj.xlower[s];
}

}  // namespace

double framer_violation(const Trajectory& traj) {
    double worst = 0.0;
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        for (std::size_t i = 0; i < traj.x[s].dim(); ++i) {
            worst = std::max(worst, traj.xlower[s][i] - traj.x[s][i]);
            worst = std::max(worst, traj.x[s][i] - traj.xbar[s][i]);
        }
    }
    return worst;
}

std::vector<double> width_integral(const Trajectory& traj) {
    const std::size_t n = traj.x.front().dim();
    std::vector<double> out(n, 0.0);
    for (std::size_t s = 0; s + 1 < traj.times.size(); ++s) {
        const double h = traj.times[s + 1] - traj.times[s];
        for (std::size_t i = 0; i < n; ++i) {
            const double w0 = traj.xbar[s][i] - traj.xlower[s][i];
            const double w1 = traj.xbar[s + 1][i] - traj.xlower[s + 1][i];
            out[i] += 0.5 * h * (w0 + w1);
        }
    }
    return out;
}

std::vector<double> lyapunov_trace(const Trajectory& traj, const Vector& v, FrameSide side) {
    std::vector<double> out;
    out.reserve(traj.times.size());
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        const Vector e = error_at(traj, s, side);
        double val = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < e.dim(); ++i) val = std::max(val, e[i] / v[i]);
        out.push_back(val);
    }
    return out;
}

BoundCheck decay_rate_check(const Trajectory& traj, const Certificate& cert, FrameSide side) {
    const std::size_t n = traj.x.front().dim();
    const double rate = cert.epsilon / static_cast<double>(n);
    const std::vector<double> v_trace = lyapunov_trace(traj, cert.v, side);

    BoundCheck out;
    out.predicted = rate;
    out.pass = true;
    const double v0 = v_trace.front();
    for (std::size_t s = 0; s < v_trace.size(); ++s) {
        const double bound = v0 * std::exp(-rate * traj.times[s]) * (1.0 + 1e-6);
        if (v_trace[s] > bound) out.pass = false;
    }

    // measured rate: least squares on the log of the running-max envelope
    double running = 0.0;
    double sum_t = 0.0, sum_y = 0.0, sum_tt = 0.0, sum_ty = 0.0;
    std::size_t count = 0;
    for (std::size_t s = v_trace.size(); s-- > 0;) {
        running = std::max(running, v_trace[s]);
        // walk backward so the envelope is the running max toward t=0
        if (running > 1e-12) {
            const double t = traj.times[s];
            const double y = std::log(running);
            sum_t += t;
            sum_y += y;
            sum_tt += t * t;
            sum_ty += t * y;
            ++count;
        }
    }
    if (count >= 2) {
        const double denom = static_cast<double>(count) * sum_tt - sum_t * sum_t;
        if (denom != 0.0) out.measured = -(static_cast<double>(count) * sum_ty - sum_t * sum_y) / denom;
    }
    return out;
}

BoundCheck ultimate_bound_check(const Trajectory& traj, const Certificate& cert,
                                const DisturbanceEnvelope& envelope, FrameSide side) {
    const std::size_t n = traj.x.front().dim();
    const std::vector<double> v_trace = lyapunov_trace(traj, cert.v, side);
    const std::size_t begin = tail_begin(v_trace.size());

    BoundCheck out;
    double gap_bound = 0.0;
    for (std::size_t s = begin; s < v_trace.size(); ++s) {
        out.measured = std::max(out.measured, v_trace[s]);
        const double t = traj.times[s];
        const Vector d = eval_expr_vector(envelope.delta, t);
        const Vector edge = side == FrameSide::Upper
                                ? eval_expr_vector(envelope.delta_upper, t)
                                : eval_expr_vector(envelope.delta_lower, t);
        for (std::size_t i = 0; i < n; ++i) {
            const double gap = side == FrameSide::Upper ? edge[i] - d[i] : d[i] - edge[i];
            gap_bound = std::max(gap_bound, gap / cert.v[i]);
        }
    }
    out.predicted = static_cast<double>(n) / cert.epsilon * gap_bound;
    out.pass = out.measured <= out.predicted * (1.0 + 1e-3);
    return out;
}

double dominance_check(const Trajectory& multi, const std::vector<Trajectory>& singles) {
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& single : singles) {
        if (single.times != multi.times) throw std::invalid_argument("trajectory grid mismatch");
        for (std::size_t s = 0; s < multi.times.size(); ++s) {
            for (std::size_t i = 0; i < multi.x[s].dim(); ++i) {
                margin = std::min(margin, single.xbar[s][i] - multi.xbar[s][i]);
                margin = std::min(margin, multi.xlower[s][i] - single.xlower[s][i]);
            }
        }
    }
    return margin;
}

}  // namespace minerr
