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

#include "weakval/analysis.hpp"
#include "weakval/sampling.hpp"
#include "weakval/state.hpp"

namespace weakval {

enum class ExperimentVariant {
    weak_no_postselect,
    weak_postselect,
    consistency_zz,
    simultaneity_zx,
    simultaneity_xz,
    dynamical_probe,
    convergence_sweep,
};

const char* to_string(ExperimentVariant variant);
std::optional<ExperimentVariant> variant_from_string(const std::string& name);

/// System preparation: either the anomaly pair for a given z, or explicit
/// initial / final single-qubit states.
struct SystemSpec {
    std::optional<double> z;
    std::optional<PureState> phi_i;
    std::optional<PureState> phi_f;
};

struct ExperimentSpec {
    ExperimentVariant variant = ExperimentVariant::weak_postselect;
    SystemSpec system;
    std::optional<double> epsilon1; // first meter weakness, theta = pi/2 - eps
    std::optional<double> epsilon2; // second meter weakness
    std::optional<double> delta_t;  // probe coupling time
    CouplingMode coupling_mode = CouplingMode::exact;
    ShotPlan plan{100000, 42};
    std::vector<double> epsilon_list; // convergence sweep abscissae
};

struct ConvergenceRow {
    double epsilon = 0.0;
    double estimate = 0.0;  // exact f-branch asymmetry / epsilon
    double deviation = 0.0; // |estimate - Re weak value|
};

struct DynamicalResult {
    std::optional<double> rate_sampled; // conditional |1> rate, postselected
    std::optional<double> rate_stderr;
    double rate_exact = 0.0;
    double rate_first_order = 0.0;   // (dt |w|)^2
    double rate_no_postselect = 0.0; // (dt <sigma_z>_i)^2
    std::uint64_t runs_required = 0; // runs per expected postselected flip
    std::optional<double> excess_norm; // first-order mode norm growth, f branch
};

struct ExperimentReport {
    ExperimentSpec spec;
    OutcomeDistribution exact;
    OutcomeCounts counts;
    std::optional<Postselection> postselection;
    std::optional<double> success_fraction_exact;
    std::optional<double> success_fraction_theory; // |<phi_f|phi_i>|^2
    std::optional<Estimate> estimate_z;   // meter slot 1
    std::optional<Estimate> estimate_z2;  // meter slot 2 when Z-coupled
    std::optional<Estimate> estimate_x;   // meter slot 2 when X-coupled
    std::optional<double> exact_estimate_z;
    std::optional<double> exact_estimate_z2;
    std::optional<double> exact_estimate_x;
    std::optional<WeakValue> theory_weak_z;
    std::optional<WeakValue> theory_weak_x;
    std::optional<OutcomeDistribution> first_order;
    std::optional<double> max_first_order_discrepancy;
    std::optional<double> zx_xz_max_diff;
    std::optional<DynamicalResult> dynamical;
    std::vector<ConvergenceRow> sweep;
    bool validity_ok = true;
    std::optional<double> validity_product;
    std::string validity_flag = "ok";
    std::vector<std::string> warnings;
};

/// Strength-tunable indirect measurement without postselection: CNOT onto a
/// Z meter, rescaled estimate against <sigma_z>.
ExperimentReport run_weak_measurement(const ExperimentSpec& spec);

/// Two-qubit weak measurement postselected on phi_f; estimates the sigma_z
/// weak value and the postselection success rate.
ExperimentReport run_postselected(const ExperimentSpec& spec);

/// Three-qubit double Z measurement; both meters must report the same weak
/// value after their own epsilon rescaling.
ExperimentReport run_consistency(const ExperimentSpec& spec);

/// Three-qubit simultaneous sigma_z / sigma_x weak measurement; also
/// compares the two interaction orders entry by entry.
ExperimentReport run_simultaneity(const ExperimentSpec& spec);

/// Probe qubit weakly coupled through sigma_z (x) sigma_x between pre- and
/// postselection; the conditional flip rate exposes the weak value as an
/// effective field.
ExperimentReport run_dynamical(const ExperimentSpec& spec);

/// Exact-distribution estimates for a decreasing list of epsilons,
/// tabulating the deviation from the weak value.
ExperimentReport convergence_sweep(const ExperimentSpec& spec);

/// Dispatch on spec.variant.
ExperimentReport run_experiment(const ExperimentSpec& spec);

} // namespace weakval
