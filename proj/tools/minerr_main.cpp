// minerr command-line front end. Talks to the core exclusively through
// the C API in minerr/minerr.h.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "minerr/minerr.h"

namespace {

struct StringDeleter {
    void operator()(char* s) const { minerr_string_free(s); }
};
using CString = std::unique_ptr<char, StringDeleter>;

struct ScenarioDeleter {
    void operator()(minerr_scenario* s) const { minerr_scenario_free(s); }
};
using ScenarioPtr = std::unique_ptr<minerr_scenario, ScenarioDeleter>;

struct TrajectoryDeleter {
    void operator()(minerr_trajectory* t) const { minerr_trajectory_free(t); }
};
using TrajectoryPtr = std::unique_ptr<minerr_trajectory, TrajectoryDeleter>;

int report_error(minerr_status status) {
    std::cerr << "error: " << minerr_last_error() << "\n";
    return static_cast<int>(status);
}

ScenarioPtr load(const std::string& path, double dt, double t_end, int& exit_code) {
    minerr_scenario* raw = nullptr;
    minerr_status status = minerr_scenario_load_file(path.c_str(), &raw);
    if (status != MINERR_OK) {
        exit_code = report_error(status);
        return nullptr;
    }
    ScenarioPtr scenario(raw);
    status = minerr_scenario_override_sim(scenario.get(), dt, t_end);
    if (status != MINERR_OK) {
        exit_code = report_error(status);
        return nullptr;
    }
    return scenario;
}

bool write_file(const std::filesystem::path& path, const char* content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    if (!out) {
        std::cerr << "error: cannot write " << path << "\n";
        return false;
    }
    return true;
}

int cmd_verify(const std::string& path) {
    int code = 0;
    ScenarioPtr scenario = load(path, 0.0, 0.0, code);
    if (!scenario) return code;
    char* report = nullptr;
    const minerr_status status = minerr_verify(scenario.get(), &report);
    if (status != MINERR_OK && !report) return report_error(status);
    CString owned(report);
    std::cout << owned.get() << "\n";
    if (status != MINERR_OK) {
        std::cerr << "verify: " << minerr_last_error() << "\n";
        return static_cast<int>(status);
    }
    return 0;
}

int cmd_simulate(const std::string& path, const std::string& out_dir, double dt, double t_end,
                 bool oracle, bool force) {
    int code = 0;
    ScenarioPtr scenario = load(path, dt, t_end, code);
    if (!scenario) return code;

    minerr_trajectory* traj_raw = nullptr;
    minerr_status status = minerr_simulate(scenario.get(), force ? 1 : 0, &traj_raw);
    if (status != MINERR_OK) return report_error(status);
    TrajectoryPtr traj(traj_raw);

    std::filesystem::create_directories(out_dir);

    char* csv = nullptr;
    status = minerr_trajectory_csv(traj.get(), &csv);
    if (status != MINERR_OK) return report_error(status);
    CString csv_owned(csv);
    if (!write_file(std::filesystem::path(out_dir) / "trajectory.csv", csv_owned.get())) return 2;

    char* metrics = nullptr;
    status = minerr_metrics_json(scenario.get(), traj.get(), &metrics);
    if (status != MINERR_OK) return report_error(status);
    CString metrics_owned(metrics);
    if (!write_file(std::filesystem::path(out_dir) / "metrics.json", metrics_owned.get())) return 2;

    if (oracle) {
        char* oracle_csv = nullptr;
        double deviation = 0.0;
        status = minerr_error_oracle(scenario.get(), &oracle_csv, &deviation);
        if (status != MINERR_OK) return report_error(status);
        CString oracle_owned(oracle_csv);
        if (!write_file(std::filesystem::path(out_dir) / "error_oracle.csv", oracle_owned.get()))
            return 2;
        std::cout << "error oracle sup-norm deviation: " << deviation << "\n";
    }

    double t_escape = 0.0;
    if (minerr_trajectory_diverged(traj.get(), &t_escape)) {
        std::cerr << "simulate: diverged at t=" << t_escape << "\n";
        return 1;
    }
    std::cout << "wrote " << out_dir << "/trajectory.csv and metrics.json\n";
    return 0;
}

int cmd_compare(const std::string& path, const std::string& out_dir) {
    int code = 0;
    ScenarioPtr scenario = load(path, 0.0, 0.0, code);
    if (!scenario) return code;
    if (minerr_scenario_phi(scenario.get()) < 2) {
        std::cerr << "usage: compare requires a multi-gain scenario (gains.upper length >= 2)\n";
        return 2;
    }

    char* csv = nullptr;
    char* report = nullptr;
    const minerr_status status = minerr_compare(scenario.get(), &csv, &report);
    if (status != MINERR_OK && !csv) return report_error(status);
    CString csv_owned(csv);
    CString report_owned(report);

    std::filesystem::create_directories(out_dir);
    if (!write_file(std::filesystem::path(out_dir) / "comparison.csv", csv_owned.get())) return 2;
    if (!write_file(std::filesystem::path(out_dir) / "comparison.json", report_owned.get()))
        return 2;
    std::cout << report_owned.get() << "\n";
    if (status != MINERR_OK) {
        std::cerr << "compare: " << minerr_last_error() << "\n";
        return static_cast<int>(status);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interval-observer simulation and verification toolkit"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    double dt = 0.0;
    double t_end = 0.0;
    bool oracle = false;
    bool force = false;

    auto* verify = app.add_subcommand("verify", "Check the observer hypotheses and certificates");
    verify->add_option("scenario", scenario_path, "Scenario JSON file")->required();

    auto* simulate = app.add_subcommand("simulate", "Integrate the plant and observer");
    simulate->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    simulate->add_option("--out", out_dir, "Output directory");
    simulate->add_option("--dt", dt, "Override the scenario's step size");
    simulate->add_option("--t-end", t_end, "Override the scenario's horizon");
    simulate->add_flag("--oracle", oracle, "Also integrate the direct error dynamics");
    simulate->add_flag("--force", force, "Skip the hypothesis gate");

    auto* compare = app.add_subcommand("compare", "Multi-gain observer vs single-gain variants");
    compare->add_option("scenario", scenario_path, "Scenario JSON file")->required();
    compare->add_option("--out", out_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    if (verify->parsed()) return cmd_verify(scenario_path);
    if (simulate->parsed()) return cmd_simulate(scenario_path, out_dir, dt, t_end, oracle, force);
    return cmd_compare(scenario_path, out_dir);
}
