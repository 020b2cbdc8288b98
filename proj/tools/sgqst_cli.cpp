// Copyright 2026 The sgqst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line front end: `run` a single experiment, regenerate a `figure`
// grid, or `validate` a state-matrix file.
//
// Exit codes: 0 success, 1 usage error, 2 runtime failure (including an
// invalid state passed to `validate`).

#include "sgqst/sgqst.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct RunOptions {
    std::size_t d = 2;
    std::uint64_t shots = 1000;
    std::uint64_t iterations = 300;
    std::uint64_t trials = 10;
    double lambda = 0.0;
    std::string mode = "shots";
    double epsilon = 1e-4;
    std::string normalization = "standard";
    std::uint64_t seed = 1;
    std::size_t rank = 0;
    std::vector<std::uint64_t> checkpoints;
    std::string out;
    std::string format = "csv";
    std::string state_file;
};

void print_summary(const sgqst::ExperimentReport &r) {
    const auto &c = r.config;
    std::cerr << "config " << c.config_id << ": d=" << c.d << " N=" << c.shots << " K=" << c.iterations
              << " lambda=" << c.lambda << " mode=" << to_string(c.mode) << " trials=" << c.trials
              << (c.reduced_scale ? " (desk scale)" : "") << "\n";
    for (const auto &s : r.checkpoints) {
        std::cerr << "  iteration " << s.iteration << ": median infidelity " << s.median << " [" << s.q25 << ", "
                  << s.q75 << "]\n";
    }
    std::cerr << "  final: median infidelity " << r.final_summary.median << ", copies " << r.total_copies << ", "
              << r.wall_seconds << " s\n";
}

int cmd_run(const RunOptions &o) {
    sgqst::ExperimentConfig cfg;
    try {
        cfg.d = o.d;
        cfg.shots = o.shots;
        cfg.iterations = o.iterations;
        cfg.trials = o.trials;
        cfg.lambda = o.lambda;
        cfg.mode = sgqst::parse_mode(o.mode);
        cfg.epsilon = o.epsilon;
        cfg.normalization = sgqst::parse_normalization(o.normalization);
        cfg.seed = o.seed;
        cfg.rank = o.rank;
        cfg.checkpoints = o.checkpoints.empty() ? std::vector<std::uint64_t>{o.iterations} : o.checkpoints;
        cfg.validate();
        (void)sgqst::parse_format(o.format);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    if (!o.state_file.empty()) {
        cfg.truth = sgqst::DensityMatrix::from_matrix(sgqst::read_state_matrix(o.state_file));
        cfg.validate();
    }
    const auto report = sgqst::run_experiment(cfg);
    print_summary(report);
    const auto format = sgqst::parse_format(o.format);
    if (o.out.empty() || o.out == "-") {
        const std::span<const sgqst::ExperimentReport> one(&report, 1);
        std::cout << (format == sgqst::ReportFormat::Csv ? sgqst::to_csv(one) : sgqst::to_json_text(one));
    } else {
        sgqst::emit_report(report, format, o.out);
    }
    return 0;
}

int cmd_figure(const std::string &name, const std::string &scale, const std::string &out_dir, std::uint64_t seed) {
    std::vector<sgqst::ExperimentConfig> configs;
    try {
        configs = sgqst::figure_preset(name, scale, seed);
    } catch (const std::invalid_argument &e) {
        throw UsageError(e.what());
    }
    std::filesystem::create_directories(out_dir);
    std::vector<sgqst::ExperimentReport> reports;
    for (const auto &cfg : configs) {
        reports.push_back(sgqst::run_experiment(cfg));
        print_summary(reports.back());
    }
    const auto stem = (std::filesystem::path(out_dir) / (name + "_" + scale)).string();
    sgqst::emit_report(reports, sgqst::ReportFormat::Csv, stem + ".csv");
    sgqst::emit_report(reports, sgqst::ReportFormat::Json, stem + ".json");
    std::cerr << "wrote " << stem << ".csv and " << stem << ".json\n";
    return 0;
}

int cmd_validate(const std::string &path) {
    const auto m = sgqst::read_state_matrix(path);
    const auto result = sgqst::validate_density(m);
    if (result.report.ok()) {
        std::cout << "valid density matrix (d=" << m.rows() << ")\n";
        return 0;
    }
    std::cout << "invalid density matrix:\n";
    for (const auto &v : result.report.violations) {
        std::cout << "  " << sgqst::to_string(v.kind) << ": magnitude " << v.magnitude;
        if (v.kind == sgqst::DensityViolation::Kind::Trace) std::cout << " (trace " << v.value << ")";
        if (v.kind == sgqst::DensityViolation::Kind::NotPsd) std::cout << " (min eigenvalue " << v.value << ")";
        std::cout << "\n";
    }
    return kExitRuntime;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Self-guided SPSA state learning for mixed qudit states"};
    app.require_subcommand(1);

    RunOptions run;
    auto *run_cmd = app.add_subcommand("run", "Run one experiment and write per-checkpoint infidelities");
    run_cmd->add_option("--d", run.d, "Hilbert-space dimension")->check(CLI::Range(2, 64));
    run_cmd->add_option("--n", run.shots, "Copies per measurement setting (N)")->check(CLI::PositiveNumber);
    run_cmd->add_option("--k", run.iterations, "SPSA iterations per eigenvector (K)")->check(CLI::PositiveNumber);
    run_cmd->add_option("--trials", run.trials, "Number of random states")->check(CLI::PositiveNumber);
    run_cmd->add_option("--lambda", run.lambda, "Readout-noise strength")->check(CLI::Range(0.0, 1.0));
    run_cmd->add_option("--mode", run.mode, "exact|shots");
    run_cmd->add_option("--epsilon", run.epsilon, "Stopping threshold");
    run_cmd->add_option("--normalization", run.normalization, "standard|noise-aware");
    run_cmd->add_option("--seed", run.seed, "Base random seed");
    run_cmd->add_option("--rank", run.rank, "Rank of the random states (0 = full)");
    run_cmd->add_option("--checkpoints", run.checkpoints, "Cumulative iteration indices, comma separated")
        ->delimiter(',');
    run_cmd->add_option("--out", run.out, "Output path (default stdout)");
    run_cmd->add_option("--format", run.format, "csv|json");
    run_cmd->add_option("--state", run.state_file, "JSON state-matrix file used as the truth for every trial");

    std::string fig_name;
    std::string fig_scale = "desk";
    std::string fig_out = ".";
    std::uint64_t fig_seed = 1;
    auto *fig_cmd = app.add_subcommand("figure", "Run a figure preset grid");
    fig_cmd->add_option("--name", fig_name, "fig2|fig3|fig4")->required();
    fig_cmd->add_option("--scale", fig_scale, "full|desk");
    fig_cmd->add_option("--out-dir", fig_out, "Directory for <name>_<scale>.csv/.json");
    fig_cmd->add_option("--seed", fig_seed, "Base random seed");

    std::string state_path;
    auto *val_cmd = app.add_subcommand("validate", "Check a JSON state-matrix file");
    val_cmd->add_option("file", state_path, "State-matrix file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*fig_cmd) return cmd_figure(fig_name, fig_scale, fig_out, fig_seed);
        if (*val_cmd) return cmd_validate(state_path);
    } catch (const UsageError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
