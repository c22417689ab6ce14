// Command line front end: simulate, validate, plotdata, sweep.
// Exit codes: 0 success, 1 validation failure, 2 config error, 3 runtime failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "amphibsim/config.hpp"
#include "amphibsim/errors.hpp"
#include "amphibsim/mission.hpp"
#include "amphibsim/trajectory.hpp"
#include "amphibsim/validation.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeFailure = 3;

struct CommonOptions {
    std::string config_path;
    std::string model;  // "", "2d", "3d"
    std::string out;
    long seed = 0;  // reserved: every run is deterministic today
};

void add_common(CLI::App* cmd, CommonOptions& opt, bool with_out) {
    cmd->add_option("--config", opt.config_path, "Scenario config file (INI)");
    cmd->add_option("--model", opt.model, "Model override: 2d or 3d")
        ->check(CLI::IsMember({"2d", "3d"}));
    if (with_out) cmd->add_option("--out", opt.out, "Output directory");
    cmd->add_option("--seed", opt.seed,
                    "Reserved for future stochastic features; accepted and ignored");
}

amphibsim::ScenarioConfig load_scenario(const CommonOptions& opt) {
    amphibsim::ScenarioConfig cfg = opt.config_path.empty()
                                        ? amphibsim::ScenarioConfig{}
                                        : amphibsim::load_config(opt.config_path);
    if (opt.model == "2d") cfg.model = amphibsim::ModelKind::planar;
    if (opt.model == "3d") cfg.model = amphibsim::ModelKind::full;
    if (!opt.out.empty()) cfg.out_dir = opt.out;
    cfg.validate();
    return cfg;
}

int cmd_simulate(const CommonOptions& opt, const std::string& format) {
    const amphibsim::ScenarioConfig cfg = load_scenario(opt);
    const amphibsim::MissionResult result = amphibsim::run_mission(cfg);

    std::filesystem::create_directories(cfg.out_dir);
    const std::string base = cfg.out_dir + "/trajectory";
    if (format == "csv" || format == "both")
        amphibsim::write_csv_file(result.record, base + ".csv");
    if (format == "jsonl" || format == "both")
        amphibsim::write_jsonl_file(result.record, base + ".jsonl");

    std::cout << amphibsim::summarize(result);
    std::cout << "trajectory: " << base << (format == "jsonl" ? ".jsonl" : ".csv")
              << " (" << result.record.rows.size() << " rows)\n";
    if (!result.summary.completed) {
        std::cerr << "error: " << result.summary.abort_reason << "\n";
        return kExitRuntimeFailure;
    }
    return kExitOk;
}

int cmd_validate(const CommonOptions& opt, const std::string& suite) {
    const amphibsim::ScenarioConfig cfg = load_scenario(opt);
    const std::vector<amphibsim::CheckResult> results =
        amphibsim::run_validation(cfg, suite);
    bool all_ok = true;
    for (const amphibsim::CheckResult& r : results) {
        const char* status = r.skipped ? "SKIP" : (r.passed ? "PASS" : "FAIL");
        std::cout << "[" << status << "] " << r.name << ": " << r.detail << "\n";
        all_ok = all_ok && r.passed;
    }
    return all_ok ? kExitOk : kExitValidationFailure;
}

int cmd_plotdata(const CommonOptions& opt, const std::string& traj_path) {
    amphibsim::TrajectoryRecord record;
    std::string out_dir;
    if (!traj_path.empty()) {
        record = amphibsim::read_csv_file(traj_path);
        out_dir = opt.out.empty() ? "out" : opt.out;
    } else {
        const amphibsim::ScenarioConfig cfg = load_scenario(opt);
        record = amphibsim::run_mission(cfg).record;
        out_dir = cfg.out_dir;
    }
    const std::vector<std::string> files = amphibsim::write_plot_data(record, out_dir);
    for (const std::string& f : files) std::cout << out_dir << "/" << f << "\n";
    return kExitOk;
}

int cmd_sweep(const CommonOptions& opt, const std::string& key,
              const std::vector<std::string>& values, const std::string& out_file) {
    if (values.empty()) throw amphibsim::ConfigError("sweep: need at least one --value");

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!out_file.empty()) {
        file.open(out_file, std::ios::binary | std::ios::trunc);
        if (!file)
            throw amphibsim::ValidationError("cannot open '" + out_file + "' for writing");
        out = &file;
    }

    *out << key
         << ",completed,final_time,descent_transit,ascent_transit,"
            "cruise_entry_depth,cruise_pitch_min_deg,cruise_pitch_max_deg\n";
    bool any_failed = false;
    for (const std::string& v : values) {
        amphibsim::ScenarioConfig cfg = load_scenario(opt);
        amphibsim::apply_key(cfg, key, v);
        cfg.validate();
        const amphibsim::MissionResult res = amphibsim::run_mission(cfg);
        const amphibsim::MissionSummary& s = res.summary;
        any_failed = any_failed || !s.completed;
        *out << v << ',' << (s.completed ? 1 : 0) << ','
             << amphibsim::format_double(s.final_time) << ','
             << amphibsim::format_double(s.descent_transit.duration()) << ','
             << amphibsim::format_double(s.ascent_transit.duration()) << ','
             << amphibsim::format_double(s.depth_at_cruise_entry) << ','
             << amphibsim::format_double(s.cruise_pitch_min_deg) << ','
             << amphibsim::format_double(s.cruise_pitch_max_deg) << '\n';
    }
    if (any_failed) {
        std::cerr << "error: at least one sweep point aborted\n";
        return kExitRuntimeFailure;
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Amphibious octorotor simulator"};
    app.require_subcommand(1);

    CommonOptions sim_opt;
    std::string sim_format = "csv";
    CLI::App* simulate = app.add_subcommand("simulate", "Run the configured mission");
    add_common(simulate, sim_opt, true);
    simulate->add_option("--format", sim_format, "Trajectory format: csv, jsonl or both")
        ->check(CLI::IsMember({"csv", "jsonl", "both"}));

    CommonOptions val_opt;
    std::string suite = "all";
    CLI::App* validate = app.add_subcommand("validate", "Run the physics checks");
    add_common(validate, val_opt, false);
    validate->add_option("--suite", suite,
                         "all, hover, terminal, mission, transition, medium_ratio, "
                         "convergence, reduction, compensation");

    CommonOptions plot_opt;
    std::string traj_path;
    CLI::App* plotdata = app.add_subcommand(
        "plotdata", "Write per-signal series files and SVG charts");
    add_common(plotdata, plot_opt, true);
    plotdata->add_option("--traj", traj_path,
                         "Existing trajectory CSV (otherwise simulates first)");

    CommonOptions sweep_opt;
    std::string sweep_key;
    std::vector<std::string> sweep_values;
    std::string sweep_out;
    CLI::App* sweep = app.add_subcommand("sweep", "Re-run the mission over a key range");
    add_common(sweep, sweep_opt, false);
    sweep->add_option("--key", sweep_key, "Config key as section.key")->required();
    sweep->add_option("--value", sweep_values, "Value(s) to apply, one run each")
        ->required();
    sweep->add_option("--table", sweep_out, "Summary table path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Keep the documented exit-code contract even for bad invocations.
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    try {
        if (simulate->parsed()) return cmd_simulate(sim_opt, sim_format);
        if (validate->parsed()) return cmd_validate(val_opt, suite);
        if (plotdata->parsed()) return cmd_plotdata(plot_opt, traj_path);
        if (sweep->parsed()) return cmd_sweep(sweep_opt, sweep_key, sweep_values, sweep_out);
    } catch (const amphibsim::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const amphibsim::IntegrationError& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntimeFailure;
    } catch (const amphibsim::ValidationError& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntimeFailure;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntimeFailure;
    }
    return kExitOk;
}
