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

#include "weakval/analysis.hpp"

#include <cmath>
#include <string>

namespace weakval {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210484904;

void check_slot(const OutcomeKey& key, int slot) {
    if (slot < 1 || slot >= static_cast<int>(key.size())) {
        throw Error(errc::index_out_of_range,
                    "slot " + std::to_string(slot) + " not a meter slot of " +
                        to_string(key));
    }
}

double cos_theta_or_throw(double theta) {
    if (std::abs(theta - kHalfPi) < 1e-15) {
        throw Error(errc::degenerate_strength,
                    "theta = pi/2 carries no information to rescale");
    }
    return std::cos(theta);
}

double rescale_divisor(double epsilon, WeakRescale rescale) {
    if (!(epsilon > 0.0)) {
        throw Error(errc::validation_error, "epsilon must be positive");
    }
    return rescale == WeakRescale::epsilon ? epsilon : std::sin(epsilon);
}

struct SlotTally {
    double plus = 0.0;
    double minus = 0.0;
    double sum() const { return plus + minus; }
    double mean() const { return (plus - minus) / sum(); }
};

SlotTally tally_counts(const OutcomeCounts& counts, int slot) {
    SlotTally t;
    for (const auto& [key, c] : counts.counts) {
        check_slot(key, slot);
        if (is_plus_one(key[slot])) t.plus += static_cast<double>(c);
        else t.minus += static_cast<double>(c);
    }
    return t;
}

SlotTally tally_dist(const OutcomeDistribution& dist, int slot,
                     bool f_branch_only) {
    SlotTally t;
    for (const auto& [key, p] : dist.probabilities) {
        check_slot(key, slot);
        if (f_branch_only && (key.empty() || key[0] != OutcomeLabel::f)) continue;
        if (is_plus_one(key[slot])) t.plus += p;
        else t.minus += p;
    }
    return t;
}

Estimate estimate_from_tally(const SlotTally& t, double divisor) {
    Estimate e;
    double n = t.sum();
    double m = t.mean();
    e.value = m / divisor;
    e.stderr_paper = std::sqrt(2.0 * (1.0 + m) / n) / divisor;
    e.stderr_exact = std::sqrt(std::max(0.0, 1.0 - m * m) / n) / divisor;
    e.n_used = static_cast<std::uint64_t>(n);
    return e;
}

} // namespace

Estimate rescaled_estimate(const OutcomeCounts& counts, int slot, double theta) {
    double ct = cos_theta_or_throw(theta);
    if (counts.counts.empty()) {
        throw Error(errc::empty_counts, "no counts to estimate from");
    }
    SlotTally t = tally_counts(counts, slot);
    if (t.sum() <= 0.0) {
        throw Error(errc::empty_counts, "no counts in slot " + std::to_string(slot));
    }
    return estimate_from_tally(t, ct);
}

double rescaled_estimate_exact(const OutcomeDistribution& dist, int slot,
                               double theta) {
    double ct = cos_theta_or_throw(theta);
    SlotTally t = tally_dist(dist, slot, false);
    if (t.sum() <= 0.0) {
        throw Error(errc::empty_counts, "distribution has no mass in slot");
    }
    return t.mean() / ct;
}

double stderr_paper_formula(double raw_mean, std::uint64_t n, double theta) {
    if (n < 1) {
        throw Error(errc::validation_error, "n must be >= 1");
    }
    double ct = cos_theta_or_throw(theta);
    return std::sqrt(2.0 * (1.0 + raw_mean) / static_cast<double>(n)) / ct;
}

double stderr_weak_limit(double epsilon, std::uint64_t n) {
    if (n < 1) {
        throw Error(errc::validation_error, "n must be >= 1");
    }
    if (!(epsilon > 0.0)) {
        throw Error(errc::degenerate_strength, "epsilon must be positive");
    }
    return std::sqrt(2.0 / static_cast<double>(n)) / epsilon;
}

WeakValue weak_value(const PureState& phi_i, const PureState& phi_f,
                     PauliAxis axis) {
    if (phi_i.n_qubits() != 1 || phi_f.n_qubits() != 1) {
        throw Error(errc::dimension_mismatch,
                    "weak values are defined for single-qubit states here");
    }
    Amplitude overlap = inner_product(phi_f, phi_i);
    if (std::abs(overlap) < kOverlapTol) {
        throw Error(errc::orthogonal_pre_post,
                    "<phi_f|phi_i> vanishes; weak value undefined");
    }
    Amplitude numer = inner_product(phi_f, apply_pauli(phi_i, 0, axis));
    Amplitude ratio = numer / overlap;
    return WeakValue{ratio.real(), ratio.imag()};
}

Estimate postselected_estimate(const OutcomeCounts& ps_counts, int slot,
                               double epsilon, WeakRescale rescale) {
    double divisor = rescale_divisor(epsilon, rescale);
    if (ps_counts.counts.empty() || ps_counts.n_total == 0) {
        throw Error(errc::empty_postselection,
                    "postselected ensemble is empty");
    }
    for (const auto& [key, c] : ps_counts.counts) {
        if (key.empty() || key[0] != OutcomeLabel::f) {
            throw Error(errc::validation_error,
                        "counts contain non-postselected outcome " +
                            to_string(key));
        }
        (void)c;
    }
    SlotTally t = tally_counts(ps_counts, slot);
    if (t.sum() <= 0.0) {
        throw Error(errc::empty_postselection,
                    "postselected ensemble is empty in slot " +
                        std::to_string(slot));
    }
    return estimate_from_tally(t, divisor);
}

double postselected_estimate_exact(const OutcomeDistribution& dist, int slot,
                                   double epsilon, WeakRescale rescale) {
    double divisor = rescale_divisor(epsilon, rescale);
    SlotTally t = tally_dist(dist, slot, true);
    if (t.sum() <= 0.0) {
        throw Error(errc::empty_postselection,
                    "distribution carries no f-branch mass");
    }
    return t.mean() / divisor;
}

OutcomeDistribution first_order_probs(const PureState& phi_i,
                                      const PureState& phi_f,
                                      FirstOrderConfig config, double eps1,
                                      std::optional<double> eps2) {
    if (std::abs(eps1) >= 1.0 || (eps2 && std::abs(*eps2) >= 1.0)) {
        throw Error(errc::validation_error,
                    "the expansion needs |epsilon| < 1");
    }
    Amplitude overlap = inner_product(phi_f, phi_i);
    if (std::abs(overlap) < kOverlapTol) {
        throw Error(errc::orthogonal_pre_post,
                    "<phi_f|phi_i> vanishes; expansion undefined");
    }
    double o2 = std::norm(overlap);
    auto re_term = [&](PauliAxis axis) {
        // Re[<f|sigma|i><i|f>]
        Amplitude q = inner_product(phi_f, apply_pauli(phi_i, 0, axis));
        return (q * std::conj(overlap)).real();
    };
    double rz = re_term(PauliAxis::Z);

    OutcomeDistribution dist;
    using L = OutcomeLabel;
    if (config == FirstOrderConfig::two_qubit_z) {
        dist.probabilities[{L::f, L::zero}] = (o2 + eps1 * rz) / 2.0;
        dist.probabilities[{L::f, L::one}] = (o2 - eps1 * rz) / 2.0;
        return dist;
    }
    if (!eps2) {
        throw Error(errc::validation_error,
                    "three-qubit configurations need eps2");
    }
    double e1 = eps1, e2 = *eps2;
    if (config == FirstOrderConfig::three_qubit_zz) {
        dist.probabilities[{L::f, L::zero, L::zero}] = (o2 + (e1 + e2) * rz) / 4.0;
        dist.probabilities[{L::f, L::zero, L::one}] = (o2 + (e1 - e2) * rz) / 4.0;
        dist.probabilities[{L::f, L::one, L::zero}] = (o2 - (e1 - e2) * rz) / 4.0;
        dist.probabilities[{L::f, L::one, L::one}] = (o2 - (e1 + e2) * rz) / 4.0;
        return dist;
    }
    double rx = re_term(PauliAxis::X);
    dist.probabilities[{L::f, L::zero, L::plus}] = (o2 + e1 * rz + e2 * rx) / 4.0;
    dist.probabilities[{L::f, L::zero, L::minus}] = (o2 + e1 * rz - e2 * rx) / 4.0;
    dist.probabilities[{L::f, L::one, L::plus}] = (o2 - e1 * rz + e2 * rx) / 4.0;
    dist.probabilities[{L::f, L::one, L::minus}] = (o2 - e1 * rz - e2 * rx) / 4.0;
    return dist;
}

AnomalyPair anomaly_pair(double z) {
    if (!std::isfinite(z)) {
        throw Error(errc::validation_error, "z must be finite");
    }
    PureState phi_i(1, {Amplitude{kInvSqrt2, 0.0}, Amplitude{kInvSqrt2, 0.0}});
    double r = 1.0 / std::sqrt(2.0 * (z * z + 1.0));
    PureState phi_f(1, {Amplitude{(z + 1.0) * r, 0.0},
                        Amplitude{-(z - 1.0) * r, 0.0}});
    return AnomalyPair{z, std::move(phi_i), std::move(phi_f)};
}

std::uint64_t required_runs(double z, double delta_w) {
    if (!(delta_w > 0.0)) {
        throw Error(errc::non_positive_precision,
                    "delta_w must be positive");
    }
    return static_cast<std::uint64_t>(
        std::ceil((z * z + 1.0) / (delta_w * delta_w)));
}

Validity validity_check(double epsilon, double z) {
    double product = std::abs(epsilon * z);
    return Validity{product < 1.0, product};
}

} // namespace weakval
