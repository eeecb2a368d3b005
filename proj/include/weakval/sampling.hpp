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

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "weakval/state.hpp"

namespace weakval {

/// Label of one measured slot. The system slot reports f (the designated
/// final state) or f_perp; meter slots report eigenstate labels of their
/// Pauli axis.
enum class OutcomeLabel : std::uint8_t {
    f = 0,
    f_perp = 1,
    zero = 2,
    one = 3,
    plus = 4,
    minus = 5,
};

/// Joint outcome: slot 0 is the system, later slots are meters/probe in
/// qubit order. Symbolic labels rather than packed bits so Z and X meters
/// can coexist in one record.
using OutcomeKey = std::vector<OutcomeLabel>;

const char* to_string(OutcomeLabel label);
std::string to_string(const OutcomeKey& key);

/// Whether the label counts as the +1 eigenvalue of its slot (|0> or |+>).
bool is_plus_one(OutcomeLabel label);

/// Product measurement basis: the system is measured in {|phi_f>, |phi_f
/// perp>}, each meter or probe qubit in a Pauli eigenbasis.
struct MeasurementLayout {
    MeasurementLayout(PureState system_final, std::vector<PauliAxis> meter_axes);

    const PureState& system_final() const { return system_final_; }
    const PureState& system_final_perp() const { return system_final_perp_; }
    const std::vector<PauliAxis>& meter_axes() const { return meter_axes_; }
    int n_qubits() const { return 1 + static_cast<int>(meter_axes_.size()); }

  private:
    PureState system_final_;
    PureState system_final_perp_;
    std::vector<PauliAxis> meter_axes_;
};

/// Exact Born probabilities over all joint outcomes of a layout.
struct OutcomeDistribution {
    std::map<OutcomeKey, double> probabilities;
    /// Squared norm the state carried before the explicit renormalization
    /// that Born-rule evaluation performs; 1.0 for normalized inputs.
    double pre_measurement_norm_squared = 1.0;

    double total() const;
};

struct ShotPlan {
    std::uint64_t n_shots = 1;
    std::uint64_t master_seed = 0;
};

struct OutcomeCounts {
    std::map<OutcomeKey, std::uint64_t> counts;
    std::uint64_t n_total = 0;
};

struct Postselection {
    OutcomeCounts kept;          // outcomes whose system slot read f
    std::uint64_t n_success = 0; // == kept.n_total
    std::uint64_t n_total = 0;   // size of the unfiltered ensemble
    double success_fraction = 0.0;
};

/// Projects `state` onto every joint outcome of `layout`. Unnormalized
/// states are renormalized and the prior squared norm recorded.
OutcomeDistribution born_distribution(const PureState& state,
                                      const MeasurementLayout& layout);

/// Multinomial draw of n_shots outcomes. Deterministic: identical
/// (distribution, plan) inputs give bit-identical counts on any platform
/// and for any level of internal parallelism. `max_threads` = 0 picks a
/// degree automatically; the result never depends on it.
OutcomeCounts sample_counts(const OutcomeDistribution& dist,
                            const ShotPlan& plan, unsigned max_threads = 0);

/// Keeps only outcomes whose system slot read f. An empty kept set is a
/// valid result, not an error.
Postselection postselect(const OutcomeCounts& counts);

/// Probability that the system slot reads f under `dist`.
double f_branch_probability(const OutcomeDistribution& dist);

} // namespace weakval
