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

#include "weakval/experiments.hpp"

#include <algorithm>
#include <cmath>

namespace weakval {

namespace {

// Once dt |w| grows past this the effective-field picture is no longer a
// small perturbation and the report says so.
constexpr double kProbeWeaknessWarn = 0.3;

struct ResolvedSystem {
    PureState phi_i;
    std::optional<PureState> phi_f;
};

ResolvedSystem resolve_system(const ExperimentSpec& spec, bool need_final) {
    if (spec.system.z) {
        AnomalyPair pair = anomaly_pair(*spec.system.z);
        return {pair.phi_i, pair.phi_f};
    }
    if (!spec.system.phi_i) {
        throw Error(errc::validation_error,
                    "system: either z or an initial state is required");
    }
    if (need_final && !spec.system.phi_f) {
        throw Error(errc::validation_error,
                    "phi_f: required for postselected variants");
    }
    return {*spec.system.phi_i, spec.system.phi_f};
}

double require_epsilon(const std::optional<double>& eps, const char* name) {
    if (!eps) {
        throw Error(errc::validation_error,
                    std::string(name) + ": required for this variant");
    }
    if (!(*eps > 0.0) || *eps > kHalfPi) {
        throw Error(errc::validation_error,
                    std::string(name) + ": must lie in (0, pi/2]");
    }
    return *eps;
}

/// Largest |p_exact - p_first_order| over the f-branch outcomes.
double max_f_branch_discrepancy(const OutcomeDistribution& exact,
                                const OutcomeDistribution& first_order) {
    double worst = 0.0;
    for (const auto& [key, p] : first_order.probabilities) {
        auto it = exact.probabilities.find(key);
        double pe = it != exact.probabilities.end() ? it->second : 0.0;
        worst = std::max(worst, std::abs(pe - p));
    }
    return worst;
}

void attach_weak_theory(ExperimentReport& report, const PureState& phi_i,
                        const PureState& phi_f, double epsilon) {
    report.theory_weak_z = weak_value(phi_i, phi_f, PauliAxis::Z);
    Validity v = validity_check(epsilon, report.theory_weak_z->re);
    report.validity_ok = v.valid;
    report.validity_product = v.product;
    if (!v.valid) {
        report.validity_flag = "invalid_epsilon_z";
        report.warnings.push_back(
            "|epsilon * weak value| = " + std::to_string(v.product) +
            " >= 1; the leading-order estimate is biased");
    }
}

bool overlap_defined(const PureState& phi_i, const PureState& phi_f) {
    return std::abs(inner_product(phi_f, phi_i)) >= kOverlapTol;
}

} // namespace

const char* to_string(ExperimentVariant variant) {
    switch (variant) {
        case ExperimentVariant::weak_no_postselect: return "weak_no_postselect";
        case ExperimentVariant::weak_postselect: return "weak_postselect";
        case ExperimentVariant::consistency_zz: return "consistency_zz";
        case ExperimentVariant::simultaneity_zx: return "simultaneity_zx";
        case ExperimentVariant::simultaneity_xz: return "simultaneity_xz";
        case ExperimentVariant::dynamical_probe: return "dynamical_probe";
        case ExperimentVariant::convergence_sweep: return "convergence_sweep";
    }
    return "?";
}

std::optional<ExperimentVariant> variant_from_string(const std::string& name) {
    for (ExperimentVariant v :
         {ExperimentVariant::weak_no_postselect, ExperimentVariant::weak_postselect,
          ExperimentVariant::consistency_zz, ExperimentVariant::simultaneity_zx,
          ExperimentVariant::simultaneity_xz, ExperimentVariant::dynamical_probe,
          ExperimentVariant::convergence_sweep}) {
        if (name == to_string(v)) return v;
    }
    return std::nullopt;
}

ExperimentReport run_weak_measurement(const ExperimentSpec& spec) {
    ResolvedSystem sys = resolve_system(spec, false);
    double eps = require_epsilon(spec.epsilon1, "epsilon1");
    double theta = kHalfPi - eps;

    PureState joint = apply_cnot(
        tensor(sys.phi_i, prepare_meter({theta, PauliAxis::Z})), 0, 1,
        PauliAxis::Z);
    // The system slot is read in the computational basis; the estimator
    // marginalizes over it, so no postselection is implied.
    MeasurementLayout layout(PureState::basis(1, 0), {PauliAxis::Z});

    ExperimentReport report;
    report.spec = spec;
    report.exact = born_distribution(joint, layout);
    report.counts = sample_counts(report.exact, spec.plan);
    report.estimate_z = rescaled_estimate(report.counts, 1, theta);
    report.exact_estimate_z = rescaled_estimate_exact(report.exact, 1, theta);
    report.theory_weak_z = weak_value(sys.phi_i, sys.phi_i, PauliAxis::Z);
    return report;
}

ExperimentReport run_postselected(const ExperimentSpec& spec) {
    ResolvedSystem sys = resolve_system(spec, true);
    double eps = require_epsilon(spec.epsilon1, "epsilon1");
    double theta = kHalfPi - eps;
    const PureState& phi_f = *sys.phi_f;

    PureState joint = apply_cnot(
        tensor(sys.phi_i, prepare_meter({theta, PauliAxis::Z})), 0, 1,
        PauliAxis::Z);
    MeasurementLayout layout(phi_f, {PauliAxis::Z});

    ExperimentReport report;
    report.spec = spec;
    report.exact = born_distribution(joint, layout);
    report.counts = sample_counts(report.exact, spec.plan);
    report.postselection = postselect(report.counts);
    report.success_fraction_exact = f_branch_probability(report.exact);
    report.success_fraction_theory = std::norm(inner_product(phi_f, sys.phi_i));

    if (!overlap_defined(sys.phi_i, phi_f)) {
        report.validity_flag = "orthogonal";
        report.warnings.push_back(
            "phi_f is orthogonal to phi_i; the weak value is undefined");
        return report;
    }
    attach_weak_theory(report, sys.phi_i, phi_f, eps);
    report.first_order =
        first_order_probs(sys.phi_i, phi_f, FirstOrderConfig::two_qubit_z, eps);
    report.max_first_order_discrepancy =
        max_f_branch_discrepancy(report.exact, *report.first_order);
    report.exact_estimate_z = postselected_estimate_exact(report.exact, 1, eps);
    if (report.postselection->n_success > 0) {
        report.estimate_z = postselected_estimate(report.postselection->kept, 1, eps);
    } else {
        report.validity_flag = "empty_postselection";
        report.warnings.push_back("no run passed postselection");
    }
    return report;
}

ExperimentReport run_consistency(const ExperimentSpec& spec) {
    ResolvedSystem sys = resolve_system(spec, true);
    double eps1 = require_epsilon(spec.epsilon1, "epsilon1");
    double eps2 = require_epsilon(spec.epsilon2, "epsilon2");
    const PureState& phi_f = *sys.phi_f;

    PureState joint = tensor(tensor(sys.phi_i,
                                    prepare_meter({kHalfPi - eps1, PauliAxis::Z})),
                             prepare_meter({kHalfPi - eps2, PauliAxis::Z}));
    joint = apply_cnot(joint, 0, 1, PauliAxis::Z);
    joint = apply_cnot(joint, 0, 2, PauliAxis::Z);
    MeasurementLayout layout(phi_f, {PauliAxis::Z, PauliAxis::Z});

    ExperimentReport report;
    report.spec = spec;
    report.exact = born_distribution(joint, layout);
    report.counts = sample_counts(report.exact, spec.plan);
    report.postselection = postselect(report.counts);
    report.success_fraction_exact = f_branch_probability(report.exact);
    report.success_fraction_theory = std::norm(inner_product(phi_f, sys.phi_i));

    if (!overlap_defined(sys.phi_i, phi_f)) {
        report.validity_flag = "orthogonal";
        report.warnings.push_back(
            "phi_f is orthogonal to phi_i; the weak value is undefined");
        return report;
    }
    attach_weak_theory(report, sys.phi_i, phi_f, std::max(eps1, eps2));
    report.first_order = first_order_probs(
        sys.phi_i, phi_f, FirstOrderConfig::three_qubit_zz, eps1, eps2);
    report.max_first_order_discrepancy =
        max_f_branch_discrepancy(report.exact, *report.first_order);
    report.exact_estimate_z = postselected_estimate_exact(report.exact, 1, eps1);
    report.exact_estimate_z2 = postselected_estimate_exact(report.exact, 2, eps2);
    if (report.postselection->n_success > 0) {
        report.estimate_z = postselected_estimate(report.postselection->kept, 1, eps1);
        report.estimate_z2 = postselected_estimate(report.postselection->kept, 2, eps2);
    } else {
        report.validity_flag = "empty_postselection";
        report.warnings.push_back("no run passed postselection");
    }
    return report;
}

ExperimentReport run_simultaneity(const ExperimentSpec& spec) {
    if (spec.variant != ExperimentVariant::simultaneity_zx &&
        spec.variant != ExperimentVariant::simultaneity_xz) {
        throw Error(errc::validation_error, "variant is not a simultaneity test");
    }
    ResolvedSystem sys = resolve_system(spec, true);
    double eps1 = require_epsilon(spec.epsilon1, "epsilon1");
    double eps2 = require_epsilon(spec.epsilon2, "epsilon2");
    const PureState& phi_f = *sys.phi_f;

    PureState prepared = tensor(
        tensor(sys.phi_i, prepare_meter({kHalfPi - eps1, PauliAxis::Z})),
        prepare_meter({kHalfPi - eps2, PauliAxis::X}));
    auto couple = [&](const PureState& in, bool z_first) {
        if (z_first) {
            return apply_cnot(apply_cnot(in, 0, 1, PauliAxis::Z), 0, 2,
                              PauliAxis::X);
        }
        return apply_cnot(apply_cnot(in, 0, 2, PauliAxis::X), 0, 1,
                          PauliAxis::Z);
    };
    bool z_first = spec.variant == ExperimentVariant::simultaneity_zx;
    PureState joint = couple(prepared, z_first);
    PureState joint_swapped = couple(prepared, !z_first);
    MeasurementLayout layout(phi_f, {PauliAxis::Z, PauliAxis::X});

    ExperimentReport report;
    report.spec = spec;
    report.exact = born_distribution(joint, layout);
    OutcomeDistribution other = born_distribution(joint_swapped, layout);
    double diff = 0.0;
    for (const auto& [key, p] : report.exact.probabilities) {
        diff = std::max(diff, std::abs(p - other.probabilities.at(key)));
    }
    report.zx_xz_max_diff = diff;

    report.counts = sample_counts(report.exact, spec.plan);
    report.postselection = postselect(report.counts);
    report.success_fraction_exact = f_branch_probability(report.exact);
    report.success_fraction_theory = std::norm(inner_product(phi_f, sys.phi_i));

    if (!overlap_defined(sys.phi_i, phi_f)) {
        report.validity_flag = "orthogonal";
        report.warnings.push_back(
            "phi_f is orthogonal to phi_i; the weak value is undefined");
        return report;
    }
    attach_weak_theory(report, sys.phi_i, phi_f, std::max(eps1, eps2));
    report.theory_weak_x = weak_value(sys.phi_i, phi_f, PauliAxis::X);
    report.first_order = first_order_probs(
        sys.phi_i, phi_f, FirstOrderConfig::three_qubit_zx, eps1, eps2);
    report.max_first_order_discrepancy =
        max_f_branch_discrepancy(report.exact, *report.first_order);
    report.exact_estimate_z = postselected_estimate_exact(report.exact, 1, eps1);
    report.exact_estimate_x = postselected_estimate_exact(report.exact, 2, eps2);
    if (report.postselection->n_success > 0) {
        report.estimate_z = postselected_estimate(report.postselection->kept, 1, eps1);
        report.estimate_x = postselected_estimate(report.postselection->kept, 2, eps2);
    } else {
        report.validity_flag = "empty_postselection";
        report.warnings.push_back("no run passed postselection");
    }
    return report;
}

ExperimentReport run_dynamical(const ExperimentSpec& spec) {
    ResolvedSystem sys = resolve_system(spec, true);
    if (!spec.delta_t) {
        throw Error(errc::validation_error,
                    "delta_t: required for dynamical_probe");
    }
    double dt = *spec.delta_t;
    if (!(dt >= 0.0)) {
        throw Error(errc::validation_error, "delta_t: must be >= 0");
    }
    const PureState& phi_f = *sys.phi_f;

    PureState joint = apply_weak_coupling(tensor(sys.phi_i, PureState::basis(1, 0)),
                                          0, 1, dt, spec.coupling_mode);
    MeasurementLayout layout(phi_f, {PauliAxis::Z});

    ExperimentReport report;
    report.spec = spec;
    report.exact = born_distribution(joint, layout);
    report.counts = sample_counts(report.exact, spec.plan);
    report.postselection = postselect(report.counts);
    double o2 = std::norm(inner_product(phi_f, sys.phi_i));
    report.success_fraction_exact = f_branch_probability(report.exact);
    report.success_fraction_theory = o2;

    if (!overlap_defined(sys.phi_i, phi_f)) {
        report.validity_flag = "orthogonal";
        report.warnings.push_back(
            "phi_f is orthogonal to phi_i; the effective field is undefined");
        return report;
    }
    report.theory_weak_z = weak_value(sys.phi_i, phi_f, PauliAxis::Z);
    double w_abs = std::abs(report.theory_weak_z->value());
    if (dt * w_abs > kProbeWeaknessWarn) {
        report.warnings.push_back(
            "delta_t * |weak value| = " + std::to_string(dt * w_abs) +
            " is not small; the effective-field picture degrades");
    }

    DynamicalResult dyn;
    using L = OutcomeLabel;
    double pf0 = report.exact.probabilities.at({L::f, L::zero});
    double pf1 = report.exact.probabilities.at({L::f, L::one});
    dyn.rate_exact = pf1 / (pf0 + pf1);
    dyn.rate_first_order = dt * dt * w_abs * w_abs;
    dyn.rate_no_postselect = std::pow(dt * pauli_expectation(sys.phi_i, 0, PauliAxis::Z), 2);
    dyn.runs_required = dyn.rate_exact > 0.0
                            ? static_cast<std::uint64_t>(
                                  std::ceil(1.0 / (o2 * dyn.rate_exact)))
                            : 0;
    if (spec.coupling_mode == CouplingMode::first_order) {
        double branch_unnorm =
            (pf0 + pf1) * report.exact.pre_measurement_norm_squared;
        dyn.excess_norm = branch_unnorm / o2 - 1.0;
    }
    if (report.postselection->n_success > 0) {
        std::uint64_t flips = 0;
        auto it = report.postselection->kept.counts.find({L::f, L::one});
        if (it != report.postselection->kept.counts.end()) flips = it->second;
        double nf = static_cast<double>(report.postselection->n_success);
        double r = static_cast<double>(flips) / nf;
        dyn.rate_sampled = r;
        // Success count is itself binomial; conditioned on it, the flip
        // count is binomial again, so the error bar uses the observed N_f.
        dyn.rate_stderr = std::sqrt(std::max(0.0, r * (1.0 - r)) / nf);
    } else {
        report.validity_flag = "empty_postselection";
        report.warnings.push_back("no run passed postselection");
    }
    report.dynamical = dyn;
    return report;
}

ExperimentReport convergence_sweep(const ExperimentSpec& spec) {
    ResolvedSystem sys = resolve_system(spec, true);
    const PureState& phi_f = *sys.phi_f;

    ExperimentReport report;
    report.spec = spec;
    if (!overlap_defined(sys.phi_i, phi_f)) {
        report.validity_flag = "orthogonal";
        report.warnings.push_back(
            "phi_f is orthogonal to phi_i; the weak value is undefined");
        return report;
    }
    WeakValue w = weak_value(sys.phi_i, phi_f, PauliAxis::Z);
    report.theory_weak_z = w;

    for (std::size_t k = 0; k < spec.epsilon_list.size(); ++k) {
        double eps = spec.epsilon_list[k];
        if (!(eps > 0.0) || eps >= kHalfPi) {
            throw Error(errc::validation_error,
                        "epsilon_list: entries must lie in (0, pi/2)");
        }
        if (k > 0 && eps >= spec.epsilon_list[k - 1]) {
            throw Error(errc::validation_error,
                        "epsilon_list: entries must be strictly decreasing");
        }
        if (!validity_check(eps, w.re).valid) {
            throw Error(errc::validation_error,
                        "epsilon_list: |epsilon * weak value| must stay below 1");
        }
        PureState joint = apply_cnot(
            tensor(sys.phi_i, prepare_meter({kHalfPi - eps, PauliAxis::Z})), 0,
            1, PauliAxis::Z);
        OutcomeDistribution dist =
            born_distribution(joint, MeasurementLayout(phi_f, {PauliAxis::Z}));
        double est = postselected_estimate_exact(dist, 1, eps);
        report.sweep.push_back({eps, est, std::abs(est - w.re)});
    }
    return report;
}

ExperimentReport run_experiment(const ExperimentSpec& spec) {
    switch (spec.variant) {
        case ExperimentVariant::weak_no_postselect:
            return run_weak_measurement(spec);
        case ExperimentVariant::weak_postselect:
            return run_postselected(spec);
        case ExperimentVariant::consistency_zz:
            return run_consistency(spec);
        case ExperimentVariant::simultaneity_zx:
        case ExperimentVariant::simultaneity_xz:
            return run_simultaneity(spec);
        case ExperimentVariant::dynamical_probe:
            return run_dynamical(spec);
        case ExperimentVariant::convergence_sweep:
            return convergence_sweep(spec);
    }
    throw Error(errc::validation_error, "unknown experiment variant");
}

} // namespace weakval
