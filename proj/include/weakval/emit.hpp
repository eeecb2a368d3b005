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

#include <optional>
#include <string>
#include <vector>

#include "weakval/config.hpp"
#include "weakval/experiments.hpp"

namespace weakval {

/// Flat record emitted per experiment sub-result. Absent quantities stay
/// absent (empty CSV cell, omitted JSONL key) -- never zero. Floating
/// point serializes with 17 significant digits so re-parsing is
/// bit-exact.
struct ResultRow {
    std::string experiment;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> n_shots;
    std::optional<double> epsilon1, epsilon2, z, delta_t;
    std::optional<std::string> coupling_mode;
    std::optional<double> success_fraction;
    std::optional<double> success_fraction_exact;
    std::optional<double> success_fraction_theory;
    std::optional<double> estimate_z, stderr_z_paper, stderr_z_exact;
    std::optional<double> estimate_z2, stderr_z2_paper, stderr_z2_exact;
    std::optional<double> estimate_x, stderr_x_paper, stderr_x_exact;
    std::optional<double> theory_weak_z, theory_weak_z_im;
    std::optional<double> theory_weak_x, theory_weak_x_im;
    std::optional<double> exact_estimate_z, exact_estimate_z2, exact_estimate_x;
    std::optional<double> deviation_z;
    std::optional<double> max_first_order_discrepancy;
    std::optional<double> zx_xz_max_diff;
    std::optional<double> probe_rate_sampled, probe_rate_exact;
    std::optional<double> probe_rate_theory, probe_rate_no_postselect;
    std::optional<double> probe_rate_stderr, excess_norm;
    std::optional<std::uint64_t> runs_required;
    std::string validity_flag = "ok";
};

/// One row per sub-result: single row for most variants, one per epsilon
/// for a convergence sweep (possibly zero for an empty sweep).
std::vector<ResultRow> rows_from_report(const ExperimentReport& report);

/// RFC 4180 CSV: header row plus one line per row.
std::string to_csv(const std::vector<ResultRow>& rows);

/// One self-describing JSON object per line; absent fields are omitted.
std::string to_jsonl(const std::vector<ResultRow>& rows);

std::string serialize(const std::vector<ResultRow>& rows, OutputFormat format);

/// %.17g, the round-trip-exact float format used across all emitters.
std::string format_double(double value);

void write_file(const std::string& path, const std::string& content);

} // namespace weakval
