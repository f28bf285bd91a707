#include "scenario_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace minerr {

namespace {

using nlohmann::json;

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw ScenarioError("scenario schema: " + where + ": " + what);
}

const json& field(const json& j, const char* key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) schema_error(where, std::string("missing key '") + key + "'");
    return *it;
}

Matrix parse_matrix(const json& j, std::size_t rows, std::size_t cols, const std::string& where) {
    if (!j.is_array() || j.size() != rows) {
        schema_error(where, "expected " + std::to_string(rows) + " rows");
    }
    std::vector<double> entries;
    entries.reserve(rows * cols);
    for (const auto& row : j) {
        if (!row.is_array() || row.size() != cols) {
            schema_error(where, "expected rows of " + std::to_string(cols) + " numbers");
        }
        for (const auto& e : row) {
            if (!e.is_number()) schema_error(where, "matrix entries must be numbers");
            entries.push_back(e.get<double>());
        }
    }
    try {
        return Matrix(rows, cols, std::move(entries));
    } catch (const std::invalid_argument& ex) {
        schema_error(where, ex.what());
    }
}

Vector parse_vector(const json& j, std::size_t dim, const std::string& where) {
    if (!j.is_array() || j.size() != dim) {
        schema_error(where, "expected " + std::to_string(dim) + " numbers");
    }
    std::vector<double> entries;
    for (const auto& e : j) {
        if (!e.is_number()) schema_error(where, "vector entries must be numbers");
        entries.push_back(e.get<double>());
    }
    try {
        return Vector(std::move(entries));
    } catch (const std::invalid_argument& ex) {
        schema_error(where, ex.what());
    }
}

std::vector<Expr> parse_expr_vector(const json& j, std::size_t dim, std::size_t p, std::size_t q,
                                    const std::string& where) {
    if (!j.is_array() || j.size() != dim) {
        schema_error(where, "expected " + std::to_string(dim) + " expression strings");
    }
    std::vector<Expr> out;
    for (std::size_t i = 0; i < dim; ++i) {
        if (!j[i].is_string()) schema_error(where, "expressions must be strings");
        try {
            out.push_back(parse_expr(j[i].get<std::string>(), p, q));
        } catch (const ParseError& ex) {
            schema_error(where + "[" + std::to_string(i) + "]", ex.what());
        }
    }
    return out;
}

std::string format_sig12(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string timestamp_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
    return buf;
}

json certificate_json(const std::optional<Certificate>& cert) {
    if (!cert) return json{{"feasible", false}};
    return json{{"feasible", true},
                {"gain", cert->gain_index},
                {"v", cert->v.data()},
                {"epsilon", cert->epsilon}};
}

}  // namespace

Scenario load_scenario_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& ex) {
        throw ScenarioError(std::string("scenario schema: invalid JSON: ") + ex.what());
    }
    if (!j.is_object()) throw ScenarioError("scenario schema: top level must be an object");

    Scenario s;
    const json& dims = field(j, "dims", "dims");
    s.plant.n = field(dims, "n", "dims").get<std::size_t>();
    s.plant.p = field(dims, "p", "dims").get<std::size_t>();
    s.plant.q = field(dims, "q", "dims").get<std::size_t>();
    if (s.plant.n == 0 || s.plant.p == 0 || s.plant.q == 0)
        schema_error("dims", "n, p, q must be positive");
    const std::size_t n = s.plant.n, p = s.plant.p, q = s.plant.q;

    s.plant.C = parse_matrix(field(j, "C", "C"), p, n, "C");

    const json& a = field(j, "A", "A");
    s.plant.A_const = parse_matrix(field(a, "const", "A.const"), n, n, "A.const");
    if (a.contains("y_terms")) {
        for (const auto& term : a["y_terms"]) {
            const std::size_t idx = field(term, "j", "A.y_terms").get<std::size_t>();
            if (idx == 0 || idx > p) schema_error("A.y_terms", "j must be in 1..p");
            s.plant.A_y_terms.emplace_back(
                idx - 1, parse_matrix(field(term, "matrix", "A.y_terms"), n, n, "A.y_terms"));
        }
    }

    s.plant.beta = parse_expr_vector(field(j, "beta", "beta"), n, p, q, "beta");
    s.plant.u_signal = parse_expr_vector(field(j, "u", "u"), q, 0, 0, "u");

    const json& delta = field(j, "delta", "delta");
    s.envelope.delta = parse_expr_vector(field(delta, "true", "delta.true"), n, 0, 0, "delta.true");
    s.envelope.delta_upper =
        parse_expr_vector(field(delta, "upper", "delta.upper"), n, 0, 0, "delta.upper");
    s.envelope.delta_lower =
        parse_expr_vector(field(delta, "lower", "delta.lower"), n, 0, 0, "delta.lower");

    const json& gains = field(j, "gains", "gains");
    const json& gu = field(gains, "upper", "gains.upper");
    const json& gl = field(gains, "lower", "gains.lower");
    if (!gu.is_array() || gu.empty() || !gl.is_array() || gl.size() != gu.size())
        schema_error("gains", "upper and lower must be nonempty arrays of equal length");
    for (std::size_t k = 0; k < gu.size(); ++k) {
        s.gains.upper.push_back(parse_matrix(gu[k], n, p, "gains.upper[" + std::to_string(k) + "]"));
        s.gains.lower.push_back(parse_matrix(gl[k], n, p, "gains.lower[" + std::to_string(k) + "]"));
    }

    const json& init = field(j, "init", "init");
    s.x0 = parse_vector(field(init, "x0", "init.x0"), n, "init.x0");
    s.xbar0 = parse_vector(field(init, "xbar0", "init.xbar0"), n, "init.xbar0");
    s.xlower0 = parse_vector(field(init, "xlower0", "init.xlower0"), n, "init.xlower0");

    if (j.contains("transform") && !j["transform"].is_null()) {
        s.transform = parse_matrix(j["transform"], n, n, "transform");
        if (!invert(*s.transform)) schema_error("transform", "matrix is singular");
    }

    const json& sim = field(j, "sim", "sim");
    s.sim.dt = field(sim, "dt", "sim").get<double>();
    s.sim.t_end = field(sim, "t_end", "sim").get<double>();
    if (sim.contains("record_stride")) s.sim.record_stride = sim["record_stride"].get<std::size_t>();
    if (sim.contains("divergence_threshold"))
        s.sim.divergence_threshold = sim["divergence_threshold"].get<double>();
    if (!(s.sim.dt > 0.0) || !(s.sim.t_end > 0.0) || s.sim.dt > s.sim.t_end ||
        s.sim.record_stride == 0) {
        schema_error("sim", "require 0 < dt <= t_end and record_stride >= 1");
    }
    return s;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot read scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario_json(buf.str());
}

bool initial_frames_ok(const Scenario& s) {
    return elementwise_leq(s.xlower0, s.x0) && elementwise_leq(s.x0, s.xbar0);
}

std::string trajectory_csv(const Trajectory& traj) {
    const std::size_t n = traj.x.empty() ? 0 : traj.x.front().dim();
    std::ostringstream os;
    os << "t";
    for (const char* name : {"x", "xbar", "xlower", "upidx", "loidx"}) {
        for (std::size_t i = 1; i <= n; ++i) os << "," << name << "_" << i;
    }
    os << "\n";
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        os << format_sig12(traj.times[s]);
        for (std::size_t i = 0; i < n; ++i) os << "," << format_sig12(traj.x[s][i]);
        for (std::size_t i = 0; i < n; ++i) os << "," << format_sig12(traj.xbar[s][i]);
        for (std::size_t i = 0; i < n; ++i) os << "," << format_sig12(traj.xlower[s][i]);
        for (std::size_t i = 0; i < n; ++i) os << "," << traj.active_gains[s].upper_idx[i];
        for (std::size_t i = 0; i < n; ++i) os << "," << traj.active_gains[s].lower_idx[i];
        os << "\n";
    }
    return os.str();
}

Trajectory parse_trajectory_csv(const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    if (!std::getline(in, line)) throw ScenarioError("empty trajectory csv");
    std::size_t columns = 1;
    for (char c : line) columns += c == ',';
    if (columns < 6 || (columns - 1) % 5 != 0) throw ScenarioError("bad trajectory csv header");
    const std::size_t n = (columns - 1) / 5;

    Trajectory traj;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string cell;
        std::vector<double> values;
        while (std::getline(row, cell, ',')) values.push_back(std::stod(cell));
        if (values.size() != columns) throw ScenarioError("bad trajectory csv row");
        traj.times.push_back(values[0]);
        auto vec = [&](std::size_t base) {
            Vector v(n);
            for (std::size_t i = 0; i < n; ++i) v[i] = values[base + i];
            return v;
        };
        traj.x.push_back(vec(1));
        traj.xbar.push_back(vec(1 + n));
        traj.xlower.push_back(vec(1 + 2 * n));
        ActiveGains ag{std::vector<int>(n), std::vector<int>(n)};
        for (std::size_t i = 0; i < n; ++i) {
            ag.upper_idx[i] = static_cast<int>(values[1 + 3 * n + i]);
            ag.lower_idx[i] = static_cast<int>(values[1 + 4 * n + i]);
        }
        traj.active_gains.push_back(std::move(ag));
    }
    return traj;
}

std::string error_trajectory_csv(const ErrorTrajectory& traj) {
    const std::size_t n = traj.ebar.empty() ? 0 : traj.ebar.front().dim();
    std::ostringstream os;
    os << "t";
    for (const char* name : {"ebar", "elower"}) {
        for (std::size_t i = 1; i <= n; ++i) os << "," << name << "_" << i;
    }
    os << "\n";
    for (std::size_t s = 0; s < traj.times.size(); ++s) {
        os << format_sig12(traj.times[s]);
        for (std::size_t i = 0; i < n; ++i) os << "," << format_sig12(traj.ebar[s][i]);
        for (std::size_t i = 0; i < n; ++i) os << "," << format_sig12(traj.elower[s][i]);
        os << "\n";
    }
    return os.str();
}

std::string verify_report_json(const Scenario& scenario, const GainValidation& validation) {
    json violations = json::array();
    for (const auto& v : validation.violations) {
        violations.push_back({{"family", v.upper_family ? "upper" : "lower"},
                              {"gain", v.gain},
                              {"row", v.row + 1},
                              {"col", v.col + 1},
                              {"value", v.value}});
    }
    json upper = json::array();
    for (const auto& c : validation.upper_certs) upper.push_back(certificate_json(c));
    json lower = json::array();
    for (const auto& c : validation.lower_certs) lower.push_back(certificate_json(c));

    json j{{"metzler", {{"ok", validation.metzler_ok},
                        {"proven", validation.metzler_proven},
                        {"violations", violations}}},
           {"certificates",
            {{"upper", upper},
             {"lower", lower},
             {"best_upper", certificate_json(validation.best_upper)},
             {"best_lower", certificate_json(validation.best_lower)}}},
           {"initial_frames_ok", initial_frames_ok(scenario)},
           {"ok", verify_ok(scenario, validation)}};
    return j.dump(2);
}

bool verify_ok(const Scenario& scenario, const GainValidation& validation) {
    return validation.metzler_ok && validation.certificates_ok() && initial_frames_ok(scenario);
}

MetricsReport compute_metrics(const Scenario& scenario, const Trajectory& traj,
                              const GainValidation& validation) {
    MetricsReport report;
    report.max_framer_violation = framer_violation(traj);
    report.width_integral = width_integral(traj);
    if (!validation.best_upper || !validation.best_lower || scenario.transform) return report;

    bool zero_disturbance = true;
    for (double t : traj.times) {
        if (eval_expr_vector(scenario.envelope.delta, t).inf_norm() != 0.0 ||
            eval_expr_vector(scenario.envelope.delta_upper, t).inf_norm() != 0.0 ||
            eval_expr_vector(scenario.envelope.delta_lower, t).inf_norm() != 0.0) {
            zero_disturbance = false;
            break;
        }
    }
    if (zero_disturbance) {
        const BoundCheck up = decay_rate_check(traj, *validation.best_upper, FrameSide::Upper);
        const BoundCheck lo = decay_rate_check(traj, *validation.best_lower, FrameSide::Lower);
        report.has_decay = true;
        report.decay_pass = up.pass && lo.pass;
        report.lyapunov_decay_rate = up.measured;
        report.predicted_decay_rate = up.predicted;
    }
    if (traj.status == SimStatus::Completed) {
        const BoundCheck up =
            ultimate_bound_check(traj, *validation.best_upper, scenario.envelope, FrameSide::Upper);
        const BoundCheck lo =
            ultimate_bound_check(traj, *validation.best_lower, scenario.envelope, FrameSide::Lower);
        report.has_ultimate = true;
        report.ultimate_pass = up.pass && lo.pass;
        report.ultimate_bound_measured = up.measured;
        report.ultimate_bound_predicted = up.predicted;
    }
    return report;
}

std::string metrics_json(const Trajectory& traj, const MetricsReport& report) {
    json j{{"status", traj.status == SimStatus::Completed ? "completed" : "diverged"},
           {"max_framer_violation", report.max_framer_violation},
           {"width_integral", report.width_integral},
           {"generated_at", timestamp_now()}};
    if (traj.status == SimStatus::Diverged) j["t_escape"] = traj.t_escape;
    if (report.has_decay) {
        j["decay"] = {{"pass", report.decay_pass},
                      {"measured_rate", report.lyapunov_decay_rate},
                      {"predicted_rate", report.predicted_decay_rate}};
    }
    if (report.has_ultimate) {
        j["ultimate_bound"] = {{"pass", report.ultimate_pass},
                               {"measured", report.ultimate_bound_measured},
                               {"predicted", report.ultimate_bound_predicted}};
    }
    if (report.has_dominance) j["dominance_margin"] = report.dominance_margin;
    return j.dump(2);
}

CompareResult run_compare(const Scenario& scenario) {
    const std::size_t phi = scenario.gains.phi();
    if (phi < 2) throw ScenarioError("compare requires a multi-gain scenario (phi >= 2)");

    std::vector<Scenario> singles;
    for (std::size_t k = 0; k < phi; ++k) {
        Scenario single = scenario;
        single.gains.upper = {scenario.gains.upper[k]};
        single.gains.lower = {scenario.gains.lower[k]};
        singles.push_back(std::move(single));
    }

    auto multi_future = std::async(std::launch::async, [&] { return simulate(scenario); });
    std::vector<std::future<Trajectory>> single_futures;
    for (const auto& s : singles) {
        single_futures.push_back(std::async(std::launch::async, [&s] { return simulate(s); }));
    }
    const Trajectory multi = multi_future.get();
    std::vector<Trajectory> single_trajs;
    for (auto& f : single_futures) single_trajs.push_back(f.get());

    const std::size_t n = multi.x.front().dim();
    std::ostringstream csv;
    csv << "t";
    for (std::size_t i = 1; i <= n; ++i) csv << ",multi_w_" << i;
    for (std::size_t i = 1; i <= n; ++i) csv << ",intersection_w_" << i;
    for (std::size_t k = 1; k <= phi; ++k) {
        for (std::size_t i = 1; i <= n; ++i) csv << ",single" << k << "_w_" << i;
    }
    csv << "\n";
    for (std::size_t s = 0; s < multi.times.size(); ++s) {
        csv << format_sig12(multi.times[s]);
        for (std::size_t i = 0; i < n; ++i) {
            csv << "," << format_sig12(multi.xbar[s][i] - multi.xlower[s][i]);
        }
        for (std::size_t i = 0; i < n; ++i) {
            double hi = single_trajs[0].xbar[s][i];
            double lo = single_trajs[0].xlower[s][i];
            for (std::size_t k = 1; k < phi; ++k) {
                hi = std::min(hi, single_trajs[k].xbar[s][i]);
                lo = std::max(lo, single_trajs[k].xlower[s][i]);
            }
            csv << "," << format_sig12(hi - lo);
        }
        for (std::size_t k = 0; k < phi; ++k) {
            for (std::size_t i = 0; i < n; ++i) {
                csv << ","
                    << format_sig12(single_trajs[k].xbar[s][i] - single_trajs[k].xlower[s][i]);
            }
        }
        csv << "\n";
    }

    CompareResult out;
    out.csv = csv.str();
    json margins = json::array();
    double min_margin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < phi; ++k) {
        const double m = dominance_check(multi, {single_trajs[k]});
        margins.push_back({{"gain", k + 1}, {"margin", m}});
        min_margin = std::min(min_margin, m);
    }
    out.min_margin = min_margin;
    out.pass = min_margin >= -1e-6;
    json j{{"per_gain_margins", margins},
           {"min_margin", min_margin},
           {"pass", out.pass},
           {"generated_at", timestamp_now()}};
    out.report_json = j.dump(2);
    return out;
}

}  // namespace minerr
