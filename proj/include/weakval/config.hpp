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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "weakval/experiments.hpp"

namespace weakval {

enum class OutputFormat { csv, jsonl };

/// Raw config fields as read from a JSON document or collected from CLI
/// flags, before per-variant validation. Unknown keys are rejected at
/// parse time.
struct ConfigValues {
    std::optional<std::string> experiment;
    std::optional<double> z;
    std::optional<Amplitude> alpha, beta;             // phi_i
    std::optional<Amplitude> final_alpha, final_beta; // phi_f
    std::optional<double> epsilon1, epsilon2, delta_t;
    std::optional<std::string> coupling_mode;
    std::optional<std::vector<double>> epsilon_list;
    std::optional<std::uint64_t> n_shots;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> format;
    /// Sweep axes (field name -> values); expanded as a cartesian grid.
    std::map<std::string, std::vector<double>> sweep;
};

struct RunConfig {
    ExperimentSpec spec;
    std::string out_path; // empty: no file output
    OutputFormat format = OutputFormat::jsonl;
};

/// Parses the JSON config document. Throws Error(parse_error) with the
/// byte position for malformed documents and Error(validation_error) for
/// unknown keys or wrong field types.
ConfigValues parse_values(const std::string& text);

/// Field-level and per-variant validation; builds the ExperimentSpec.
RunConfig validate_config(const ConfigValues& values);

/// Convenience: parse + validate.
RunConfig parse_config(const std::string& text);

/// Expands the sweep block into one RunConfig per grid point (a config
/// without a sweep block yields exactly one). Axis order is fixed:
/// z, epsilon1, epsilon2, delta_t, n_shots, seed; the last axis varies
/// fastest.
std::vector<RunConfig> expand_sweep(const ConfigValues& values);

/// JSON echo of the effective (post-merge) configuration.
std::string effective_config_json(const ConfigValues& values);

} // namespace weakval
