#include "minerr/minerr.h"

#include <cmath>
#include <cstring>
#include <string>

#include "scenario_io.hpp"

namespace {

thread_local std::string g_last_error;

minerr_status fail(minerr_status code, const std::string& msg) {
    g_last_error = msg;
    return code;
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

minerr::GainValidation validate(const minerr::Scenario& s) {
    const minerr::PlantMatrices mats =
        s.transform ? minerr::transformed_plant_matrices(s.plant, *s.transform)
                    : minerr::plant_matrices(s.plant);
    return minerr::validate_gains(mats, s.gains, minerr::default_omega_samples(s.plant.p));
}

template <typename Fn>
minerr_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const minerr::ScenarioError& ex) {
        return fail(MINERR_INPUT_ERROR, ex.what());
    } catch (const minerr::ParseError& ex) {
        return fail(MINERR_INPUT_ERROR, ex.what());
    } catch (const minerr::EnvelopeViolation& ex) {
        return fail(MINERR_HYPOTHESIS_FAILED, ex.what());
    } catch (const minerr::EvalError& ex) {
        return fail(MINERR_RUNTIME_ERROR, ex.what());
    } catch (const std::exception& ex) {
        return fail(MINERR_RUNTIME_ERROR, ex.what());
    }
}

}  // namespace

struct minerr_scenario {
    minerr::Scenario value;
};

struct minerr_trajectory {
    minerr::Trajectory value;
};

extern "C" {

const char* minerr_last_error(void) { return g_last_error.c_str(); }

void minerr_string_free(char* s) { delete[] s; }

minerr_status minerr_scenario_load_file(const char* path, minerr_scenario** out) {
    if (!path || !out) return fail(MINERR_INPUT_ERROR, "null argument");
    return guarded([&] {
        *out = new minerr_scenario{minerr::load_scenario_file(path)};
        return MINERR_OK;
    });
}

minerr_status minerr_scenario_load_json(const char* json_text, minerr_scenario** out) {
    if (!json_text || !out) return fail(MINERR_INPUT_ERROR, "null argument");
    return guarded([&] {
        *out = new minerr_scenario{minerr::load_scenario_json(json_text)};
        return MINERR_OK;
    });
}

void minerr_scenario_free(minerr_scenario* scenario) { delete scenario; }

minerr_status minerr_scenario_override_sim(minerr_scenario* scenario, double dt, double t_end) {
    if (!scenario) return fail(MINERR_INPUT_ERROR, "null scenario");
    if (dt > 0.0) scenario->value.sim.dt = dt;
    if (t_end > 0.0) scenario->value.sim.t_end = t_end;
    if (scenario->value.sim.dt > scenario->value.sim.t_end)
        return fail(MINERR_INPUT_ERROR, "override leaves dt > t_end");
    return MINERR_OK;
}

size_t minerr_scenario_phi(const minerr_scenario* scenario) {
    return scenario ? scenario->value.gains.phi() : 0;
}

minerr_status minerr_verify(const minerr_scenario* scenario, char** report_json) {
    if (!scenario || !report_json) return fail(MINERR_INPUT_ERROR, "null argument");
    return guarded([&]() -> minerr_status {
        const auto validation = validate(scenario->value);
        *report_json = copy_string(minerr::verify_report_json(scenario->value, validation));
        if (!minerr::verify_ok(scenario->value, validation)) {
            return fail(MINERR_HYPOTHESIS_FAILED, "theorem hypotheses not satisfied");
        }
        return MINERR_OK;
    });
}

minerr_status minerr_simulate(const minerr_scenario* scenario, int force,
                              minerr_trajectory** out) {
    if (!scenario || !out) return fail(MINERR_INPUT_ERROR, "null argument");
    return guarded([&]() -> minerr_status {
        if (!force) {
            const auto validation = validate(scenario->value);
            if (!minerr::verify_ok(scenario->value, validation)) {
                return fail(MINERR_HYPOTHESIS_FAILED,
                            "theorem hypotheses not satisfied (use force to simulate anyway)");
            }
        }
        *out = new minerr_trajectory{minerr::simulate(scenario->value)};
        return MINERR_OK;
    });
}

void minerr_trajectory_free(minerr_trajectory* trajectory) { delete trajectory; }

int minerr_trajectory_diverged(const minerr_trajectory* trajectory, double* t_escape) {
    if (!trajectory) return 0;
    const bool diverged = trajectory->value.status == minerr::SimStatus::Diverged;
    if (t_escape) *t_escape = diverged ? trajectory->value.t_escape : 0.0;
    return diverged ? 1 : 0;
}

minerr_status minerr_trajectory_csv(const minerr_trajectory* trajectory, char** csv) {
    if (!trajectory || !csv) return fail(MINERR_INPUT_ERROR, "null argument");
    return guarded([&] {
        *csv = copy_string(minerr::trajectory_csv(trajectory->value));
        return MINERR_OK;
    });
}

minerr_status minerr_metrics_json(const minerr_scenario* scenario,
                                  const minerr_trajectory* trajectory, char** json_text) {
    if (!scenario || !trajectory || !json_text) return fail(MINERR_INPUT_ERROR, "null argument");
    return guarded([&] {
        const auto validation = validate(scenario->value);
        const auto report =
            minerr::compute_metrics(scenario->value, trajectory->value, validation);
        *json_text = copy_string(minerr::metrics_json(trajectory->value, report));
        return MINERR_OK;
    });
}

minerr_status minerr_error_oracle(const minerr_scenario* scenario, char** csv,
                                  double* sup_deviation) {
    if (!scenario || !csv || !sup_deviation) return fail(MINERR_INPUT_ERROR, "null argument");
    return guarded([&] {
        const minerr::Trajectory joint = minerr::simulate(scenario->value);
        const minerr::ErrorTrajectory direct = minerr::simulate_error_oracle(scenario->value);
        double dev = 0.0;
        const std::size_t samples = std::min(joint.times.size(), direct.times.size());
        for (std::size_t s = 0; s < samples; ++s) {
            for (std::size_t i = 0; i < scenario->value.plant.n; ++i) {
                dev = std::fmax(dev, std::fabs((joint.xbar[s][i] - joint.x[s][i]) -
                                               direct.ebar[s][i]));
                dev = std::fmax(dev, std::fabs((joint.x[s][i] - joint.xlower[s][i]) -
                                               direct.elower[s][i]));
            }
        }
        *csv = copy_string(minerr::error_trajectory_csv(direct));
        *sup_deviation = dev;
        return MINERR_OK;
    });
}

minerr_status minerr_compare(const minerr_scenario* scenario, char** comparison_csv,
                             char** report_json) {
    if (!scenario || !comparison_csv || !report_json)
        return fail(MINERR_INPUT_ERROR, "null argument");
    return guarded([&]() -> minerr_status {
        const auto result = minerr::run_compare(scenario->value);
        *comparison_csv = copy_string(result.csv);
        *report_json = copy_string(result.report_json);
        if (!result.pass) {
            return fail(MINERR_HYPOTHESIS_FAILED, "dominance margin below -1e-6");
        }
        return MINERR_OK;
    });
}

}  // extern "C"
