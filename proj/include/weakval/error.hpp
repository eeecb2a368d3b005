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

#include <stdexcept>
#include <string>

namespace weakval {

/// Failure categories surfaced by the library. The CLI maps these onto
/// process exit codes.
enum class errc {
    non_normalizable,
    not_normalized,
    too_many_qubits,
    index_out_of_range,
    control_equals_target,
    dimension_mismatch,
    degenerate_strength,
    empty_counts,
    orthogonal_pre_post,
    empty_postselection,
    non_positive_precision,
    empty_distribution,
    parse_error,
    validation_error,
    io_error,
};

const char* to_string(errc code);

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message),
          code_(code) {}

    errc code() const noexcept { return code_; }

  private:
    errc code_;
};

inline const char* to_string(errc code) {
    switch (code) {
        case errc::non_normalizable: return "non_normalizable";
        case errc::not_normalized: return "not_normalized";
        case errc::too_many_qubits: return "too_many_qubits";
        case errc::index_out_of_range: return "index_out_of_range";
        case errc::control_equals_target: return "control_equals_target";
        case errc::dimension_mismatch: return "dimension_mismatch";
        case errc::degenerate_strength: return "degenerate_strength";
        case errc::empty_counts: return "empty_counts";
        case errc::orthogonal_pre_post: return "orthogonal_pre_post";
        case errc::empty_postselection: return "empty_postselection";
        case errc::non_positive_precision: return "non_positive_precision";
        case errc::empty_distribution: return "empty_distribution";
        case errc::parse_error: return "parse_error";
        case errc::validation_error: return "validation_error";
        case errc::io_error: return "io_error";
    }
    return "unknown";
}

} // namespace weakval
