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

#include <doctest.h>

#include <cstring>
#include <json.hpp>
#include <sstream>

#include "test_support.hpp"
#include "weakval/config.hpp"
#include "weakval/emit.hpp"

using namespace weakval;
using oracle::thrown_code;

TEST_CASE("minimal config parses to a valid run") {
    RunConfig config = parse_config(R"({
        "experiment": "weak_postselect",
        "z": 3,
        "epsilon1": 0.05,
        "n_shots": 100000,
        "seed": 42
    })");
    CHECK(config.spec.variant == ExperimentVariant::weak_postselect);
    CHECK(config.spec.system.z == doctest::Approx(3.0));
    CHECK(config.spec.epsilon1 == doctest::Approx(0.05));
    CHECK(config.spec.plan.n_shots == 100000);
    CHECK(config.spec.plan.master_seed == 42);
    CHECK(config.format == OutputFormat::jsonl);
}

TEST_CASE("config validation failures carry the field name") {
    auto message_of = [](const std::string& text) {
        try {
            parse_config(text);
        } catch (const Error& e) {
            return std::string(e.what());
        }
        return std::string();
    };

    CHECK(thrown_code([] { parse_config("{ nope"); }) == errc::parse_error);
    CHECK(thrown_code([] { parse_config(R"({"experiment": "weak_postselect", "z": 1, "epsilon1": 0.05, "frobnicate": 1})"); }) ==
          errc::validation_error);
    CHECK(message_of(R"({"experiment": "weak_postselect", "z": 1, "epsilon1": 0.05, "frobnicate": 1})")
              .find("frobnicate") != std::string::npos);

    CHECK(thrown_code([] { parse_config(R"({"experiment": "weak_postselect", "z": 1, "epsilon1": 2.0})"); }) ==
          errc::validation_error);
    CHECK(message_of(R"({"experiment": "weak_postselect", "z": 1, "epsilon1": 2.0})")
              .find("epsilon1") != std::string::npos);

    std::string missing_dt = R"({"experiment": "dynamical_probe", "z": 100})";
    CHECK(thrown_code([&] { parse_config(missing_dt); }) == errc::validation_error);
    CHECK(message_of(missing_dt).find("delta_t") != std::string::npos);

    CHECK(thrown_code([] {
        parse_config(R"({"experiment": "weak_postselect", "z": 1, "alpha": [1, 0], "beta": [0, 0], "epsilon1": 0.05})");
    }) == errc::validation_error);
    CHECK(thrown_code([] { parse_config(R"({"experiment": "nope", "z": 1})"); }) ==
          errc::validation_error);
    CHECK(thrown_code([] { parse_config(R"({"z": 1, "epsilon1": 0.05})"); }) ==
          errc::validation_error);
    CHECK(thrown_code([] {
        parse_config(R"({"experiment": "weak_postselect", "alpha": [1, 0], "beta": [0, 0], "epsilon1": 0.05})");
    }) == errc::validation_error); // missing final state
    CHECK(thrown_code([] {
        parse_config(R"({"experiment": "weak_postselect", "z": 1, "epsilon1": 0.05, "n_shots": 0})");
    }) == errc::validation_error);
}

TEST_CASE("explicit states flow through and orthogonal pairs are flagged") {
    RunConfig config = parse_config(R"({
        "experiment": "weak_postselect",
        "alpha": [1, 0], "beta": [0, 0],
        "final_alpha": [0, 0], "final_beta": [1, 0],
        "epsilon1": 0.05, "n_shots": 1000, "seed": 3
    })");
    ExperimentReport report = run_experiment(config.spec);
    CHECK(report.validity_flag == "orthogonal");

    std::vector<ResultRow> rows = rows_from_report(report);
    REQUIRE(rows.size() == 1);
    CHECK(!rows[0].estimate_z.has_value());
    CHECK(!rows[0].theory_weak_z.has_value());
    CHECK(rows[0].validity_flag == "orthogonal");

    std::string csv = to_csv(rows);
    CHECK(csv.find("orthogonal") != std::string::npos);
    std::string jsonl = to_jsonl(rows);
    CHECK(jsonl.find("estimate_z") == std::string::npos);
}

TEST_CASE("sweep expansion is a cartesian grid in declaration order") {
    ConfigValues values = parse_values(R"({
        "experiment": "weak_postselect",
        "z": 3, "epsilon1": 0.05, "n_shots": 1000,
        "sweep": {"z": [1, 2, 3], "epsilon1": [0.1, 0.05]}
    })");
    std::vector<RunConfig> grid = expand_sweep(values);
    REQUIRE(grid.size() == 6);
    CHECK(grid[0].spec.system.z == doctest::Approx(1.0));
    CHECK(grid[0].spec.epsilon1 == doctest::Approx(0.1));
    CHECK(grid[1].spec.system.z == doctest::Approx(1.0));
    CHECK(grid[1].spec.epsilon1 == doctest::Approx(0.05));
    CHECK(grid[5].spec.system.z == doctest::Approx(3.0));
    CHECK(grid[5].spec.epsilon1 == doctest::Approx(0.05));

    CHECK(thrown_code([] {
        parse_values(R"({"experiment": "weak_postselect", "sweep": {"alpha": [1]}})");
    }) == errc::validation_error);
}

TEST_CASE("jsonl output re-parses bit-exactly") {
    RunConfig config = parse_config(R"({
        "experiment": "weak_postselect", "z": 3, "epsilon1": 0.05,
        "n_shots": 20000, "seed": 11
    })");
    ExperimentReport report = run_experiment(config.spec);
    std::vector<ResultRow> rows = rows_from_report(report);
    std::string jsonl = to_jsonl(rows);

    std::istringstream lines(jsonl);
    std::string line;
    REQUIRE(std::getline(lines, line));
    nlohmann::json parsed = nlohmann::json::parse(line);

    auto bit_equal = [](double a, double b) {
        return std::memcmp(&a, &b, sizeof a) == 0;
    };
    CHECK(bit_equal(parsed["estimate_z"].get<double>(), rows[0].estimate_z.value()));
    CHECK(bit_equal(parsed["stderr_z_paper"].get<double>(), rows[0].stderr_z_paper.value()));
    CHECK(bit_equal(parsed["stderr_z_exact"].get<double>(), rows[0].stderr_z_exact.value()));
    CHECK(bit_equal(parsed["success_fraction"].get<double>(), rows[0].success_fraction.value()));
    CHECK(bit_equal(parsed["exact_estimate_z"].get<double>(), rows[0].exact_estimate_z.value()));
    CHECK(bit_equal(parsed["theory_weak_z"].get<double>(), rows[0].theory_weak_z.value()));
    CHECK(parsed["seed"].get<std::uint64_t>() == 11);
    CHECK(parsed["experiment"].get<std::string>() == "weak_postselect");
}

TEST_CASE("csv shape: header plus one line per row, empty sweep is header-only") {
    ExperimentSpec sweep;
    sweep.variant = ExperimentVariant::convergence_sweep;
    sweep.system.z = 3.0;
    sweep.epsilon_list = {};
    ExperimentReport empty = convergence_sweep(sweep);
    std::vector<ResultRow> rows = rows_from_report(empty);
    CHECK(rows.empty());
    std::string csv = to_csv(rows);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
    CHECK(csv.rfind("experiment,seed,n_shots,", 0) == 0);

    sweep.epsilon_list = {0.1, 0.05, 0.025};
    std::vector<ResultRow> three = rows_from_report(convergence_sweep(sweep));
    CHECK(three.size() == 3);
    std::string csv3 = to_csv(three);
    CHECK(std::count(csv3.begin(), csv3.end(), '\n') == 4);

    // every jsonl line parses on its own
    std::istringstream lines(to_jsonl(three));
    std::string line;
    int parsed_lines = 0;
    while (std::getline(lines, line)) {
        nlohmann::json obj = nlohmann::json::parse(line);
        CHECK(obj.contains("deviation_z"));
        parsed_lines++;
    }
    CHECK(parsed_lines == 3);
    CHECK(three[0].epsilon1 == doctest::Approx(0.1));
    CHECK(three[0].deviation_z.has_value());
    CHECK(!three[0].estimate_z.has_value());
}

TEST_CASE("csv quoting follows RFC 4180") {
    // none of the standard fields need quoting; force it through a flag value
    ResultRow row;
    row.experiment = "weird,\"name\"";
    row.validity_flag = "ok";
    std::string csv = to_csv({row});
    CHECK(csv.find("\"weird,\"\"name\"\"\"") != std::string::npos);
}

TEST_CASE("dynamical rows carry the probe quantities") {
    RunConfig config = parse_config(R"({
        "experiment": "dynamical_probe", "z": 100, "delta_t": 0.001,
        "coupling_mode": "exact", "n_shots": 100000, "seed": 42
    })");
    std::vector<ResultRow> rows = rows_from_report(run_experiment(config.spec));
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].probe_rate_exact.value() ==
          doctest::Approx(0.0099009966343204456).epsilon(1e-12));
    CHECK(rows[0].probe_rate_theory.value() == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(rows[0].coupling_mode.value() == "exact");
    CHECK(rows[0].runs_required.value() == 1010101);
    CHECK(rows[0].delta_t.value() == doctest::Approx(0.001));
}

TEST_CASE("sampling rejects an empty shot plan") {
    OutcomeDistribution dist;
    dist.probabilities[{OutcomeLabel::zero}] = 1.0;
    CHECK(thrown_code([&] { sample_counts(dist, {0, 1}); }) ==
          errc::validation_error);
}

TEST_CASE("dispatch is deterministic at the serialized-bytes level") {
    std::string text = R"({
        "experiment": "consistency_zz", "z": 2, "epsilon1": 0.04,
        "epsilon2": 0.02, "n_shots": 100000, "seed": 42, "format": "csv"
    })";
    RunConfig config = parse_config(text);
    std::string a = serialize(rows_from_report(run_experiment(config.spec)), config.format);
    std::string b = serialize(rows_from_report(run_experiment(parse_config(text).spec)),
                              config.format);
    CHECK(a == b);
}
