// Copyright 2026 The weakval authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "weakval/config.hpp"
#include "weakval/emit.hpp"
#include "weakval/experiments.hpp"

namespace {

using namespace weakval;

// Exit codes: 0 success, 1 I/O or unexpected failure, 2 parse error,
// 3 validation error, 4 empty postselection, 5 numeric/domain error.
int exit_code_for(errc code) {
    switch (code) {
        case errc::parse_error: return 2;
        case errc::validation_error: return 3;
        case errc::empty_postselection: return 4;
        case errc::io_error: return 1;
        default: return 5;
    }
}

struct Flags {
    std::string config_path;
    std::optional<std::string> variant;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> shots;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<double> z;
    std::optional<double> epsilon1;
    std::optional<double> epsilon2;
    std::optional<double> delta_t;
    std::optional<std::string> coupling_mode;
};

void add_common_options(CLI::App* cmd, Flags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--variant", flags.variant, "experiment variant name");
    cmd->add_option("--seed", flags.seed, "master seed (overrides config)");
    cmd->add_option("--shots", flags.shots, "number of shots");
    cmd->add_option("--out", flags.out, "output file path");
    cmd->add_option("--format", flags.format, "output format: csv or jsonl");
    cmd->add_option("--z", flags.z, "anomaly pair parameter");
    cmd->add_option("--epsilon1", flags.epsilon1, "first meter weakness");
    cmd->add_option("--epsilon2", flags.epsilon2, "second meter weakness");
    cmd->add_option("--delta-t", flags.delta_t, "probe coupling time");
    cmd->add_option("--coupling-mode", flags.coupling_mode,
                    "probe coupling: exact or first_order");
}

std::string read_file(const std::string& path) {
    std::ifstream stream(path, std::ios::binary);
    if (!stream) {
        throw Error(errc::io_error, "cannot read config file '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << stream.rdbuf();
    return buffer.str();
}

/// Flags beat the file; the WEAKVAL_SEED environment variable is the
/// lowest-priority seed source, below both.
ConfigValues merged_values(const Flags& flags) {
    ConfigValues values;
    if (!flags.config_path.empty()) {
        values = parse_values(read_file(flags.config_path));
    }
    if (!values.seed && !flags.seed) {
        if (const char* env = std::getenv("WEAKVAL_SEED")) {
            char* end = nullptr;
            unsigned long long parsed = std::strtoull(env, &end, 10);
            if (end == env || *end != '\0') {
                throw Error(errc::validation_error,
                            "WEAKVAL_SEED: not an unsigned integer");
            }
            values.seed = parsed;
        }
    }
    if (flags.variant) values.experiment = *flags.variant;
    if (flags.seed) values.seed = *flags.seed;
    if (flags.shots) values.n_shots = *flags.shots;
    if (flags.out) values.out = *flags.out;
    if (flags.format) values.format = *flags.format;
    if (flags.z) values.z = *flags.z;
    if (flags.epsilon1) values.epsilon1 = *flags.epsilon1;
    if (flags.epsilon2) values.epsilon2 = *flags.epsilon2;
    if (flags.delta_t) values.delta_t = *flags.delta_t;
    if (flags.coupling_mode) values.coupling_mode = *flags.coupling_mode;
    return values;
}

void print_summary(const ExperimentReport& report, std::size_t n_rows,
                   const std::string& out_path) {
    std::printf("experiment: %s\n", to_string(report.spec.variant));
    if (report.postselection) {
        std::printf("success fraction: %s sampled",
                    format_double(report.postselection->success_fraction).c_str());
        if (report.success_fraction_exact) {
            std::printf(", %s exact",
                        format_double(*report.success_fraction_exact).c_str());
        }
        if (report.success_fraction_theory) {
            std::printf(", %s theory",
                        format_double(*report.success_fraction_theory).c_str());
        }
        std::printf("\n");
    }
    auto print_estimate = [](const char* name, const Estimate& e) {
        std::printf("%s: %s +- %s (paper) / %s (exact), n=%llu\n", name,
                    format_double(e.value).c_str(),
                    format_double(e.stderr_paper).c_str(),
                    format_double(e.stderr_exact).c_str(),
                    static_cast<unsigned long long>(e.n_used));
    };
    if (report.estimate_z) print_estimate("estimate sigma_z", *report.estimate_z);
    if (report.estimate_z2) print_estimate("estimate sigma_z (meter 2)", *report.estimate_z2);
    if (report.estimate_x) print_estimate("estimate sigma_x", *report.estimate_x);
    auto print_weak = [](const char* name, const WeakValue& w) {
        std::string im = format_double(w.im);
        if (w.im >= 0) im.insert(0, "+");
        std::printf("%s: %s%si\n", name, format_double(w.re).c_str(), im.c_str());
    };
    if (report.theory_weak_z) print_weak("weak value sigma_z", *report.theory_weak_z);
    if (report.theory_weak_x) print_weak("weak value sigma_x", *report.theory_weak_x);
    if (report.dynamical) {
        const DynamicalResult& dyn = *report.dynamical;
        std::printf("probe flip rate: exact %s, first order %s, no-postselection %s\n",
                    format_double(dyn.rate_exact).c_str(),
                    format_double(dyn.rate_first_order).c_str(),
                    format_double(dyn.rate_no_postselect).c_str());
        if (dyn.rate_sampled) {
            std::printf("probe flip rate sampled: %s +- %s\n",
                        format_double(*dyn.rate_sampled).c_str(),
                        format_double(*dyn.rate_stderr).c_str());
        }
        std::printf("runs per expected postselected flip: %llu\n",
                    static_cast<unsigned long long>(dyn.runs_required));
    }
    for (const ConvergenceRow& row : report.sweep) {
        std::printf("epsilon %s: estimate %s, deviation %s\n",
                    format_double(row.epsilon).c_str(),
                    format_double(row.estimate).c_str(),
                    format_double(row.deviation).c_str());
    }
    for (const std::string& warning : report.warnings) {
        std::fprintf(stderr, "warning: %s\n", warning.c_str());
    }
    if (!out_path.empty()) {
        std::printf("%zu row(s) written to %s\n", n_rows, out_path.c_str());
    } else {
        std::printf("%zu row(s); no output file requested\n", n_rows);
    }
}

int do_run(const Flags& flags) {
    ConfigValues values = merged_values(flags);
    RunConfig config = validate_config(values);
    std::printf("config: %s\n", effective_config_json(values).c_str());
    ExperimentReport report = run_experiment(config.spec);
    std::vector<ResultRow> rows = rows_from_report(report);
    if (!config.out_path.empty()) {
        write_file(config.out_path, serialize(rows, config.format));
    }
    print_summary(report, rows.size(), config.out_path);
    return 0;
}

int do_sweep(const Flags& flags) {
    ConfigValues values = merged_values(flags);
    std::vector<RunConfig> grid = expand_sweep(values);
    std::printf("config: %s\n", effective_config_json(values).c_str());
    std::printf("sweep: %zu grid point(s)\n", grid.size());
    std::vector<ResultRow> rows;
    for (const RunConfig& config : grid) {
        ExperimentReport report = run_experiment(config.spec);
        for (ResultRow& row : rows_from_report(report)) {
            rows.push_back(std::move(row));
        }
        for (const std::string& warning : report.warnings) {
            std::fprintf(stderr, "warning: %s\n", warning.c_str());
        }
    }
    std::string out_path = grid.empty() ? std::string() : grid.front().out_path;
    OutputFormat format = grid.empty() ? OutputFormat::jsonl : grid.front().format;
    if (!out_path.empty()) {
        write_file(out_path, serialize(rows, format));
        std::printf("%zu row(s) written to %s\n", rows.size(), out_path.c_str());
    } else {
        std::printf("%zu row(s); no output file requested\n", rows.size());
    }
    return 0;
}

int do_validate(const Flags& flags) {
    ConfigValues values = merged_values(flags);
    validate_config(values);
    if (!values.sweep.empty()) expand_sweep(values);
    std::printf("valid: %s\n", effective_config_json(values).c_str());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weakval: few-qubit weak-measurement simulation harness"};
    app.require_subcommand(1);

    Flags run_flags, sweep_flags, validate_flags;
    CLI::App* run_cmd = app.add_subcommand("run", "execute one experiment config");
    add_common_options(run_cmd, run_flags);
    CLI::App* sweep_cmd =
        app.add_subcommand("sweep", "expand the config's sweep grid and run it");
    add_common_options(sweep_cmd, sweep_flags);
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "parse and validate a config only");
    add_common_options(validate_cmd, validate_flags);

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return do_run(run_flags);
        if (sweep_cmd->parsed()) return do_sweep(sweep_flags);
        return do_validate(validate_flags);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
