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

#include <complex>
#include <cstdint>
#include <optional>

#include "weakval/sampling.hpp"
#include "weakval/state.hpp"

namespace weakval {

/// A value with two error bars: the large-N formula
/// (1/cos theta) sqrt(2(1+m)/N) and the exact binomial standard error
/// (1/cos theta) sqrt((1-m^2)/N), where m is the raw slot mean.
struct Estimate {
    double value = 0.0;
    double stderr_paper = 0.0;
    double stderr_exact = 0.0;
    std::uint64_t n_used = 0;
};

/// Complex ratio <phi_f|sigma|phi_i> / <phi_f|phi_i>. The real part is the
/// value a weak postselected measurement estimates; the imaginary part is
/// reported but carries no estimator here.
struct WeakValue {
    double re = 0.0;
    double im = 0.0;
    std::complex<double> value() const { return {re, im}; }
};

/// Pre/post pair phi_i = (|0>+|1>)/sqrt2 and
/// phi_f = ((z+1)|0> - (z-1)|1>) / sqrt(2(z^2+1)), whose sigma_z weak value
/// is exactly z while the overlap is 1/sqrt(z^2+1).
struct AnomalyPair {
    double z;
    PureState phi_i;
    PureState phi_f;
};

/// Which divisor turns a raw weak-meter asymmetry into an estimate:
/// epsilon (the leading-order form) or sin(epsilon) = cos(theta) (exact).
enum class WeakRescale { epsilon, sin_epsilon };

struct Validity {
    bool valid = true;
    double product = 0.0; // |epsilon * z|
};

/// (N+ - N-) / ((N+ + N-) cos theta) over the marginal of `slot`,
/// counting |0>/|+> as +1. Marginalizes over every other slot.
Estimate rescaled_estimate(const OutcomeCounts& counts, int slot, double theta);

/// Same estimator evaluated on exact probabilities (the infinite-N limit).
double rescaled_estimate_exact(const OutcomeDistribution& dist, int slot,
                               double theta);

/// (1/cos theta) sqrt(2 (1 + raw_mean) / n), raw_mean being the measured
/// mean of the meter slot before rescaling.
double stderr_paper_formula(double raw_mean, std::uint64_t n, double theta);

/// Weak limit of the above at raw_mean ~ 0: (1/epsilon) sqrt(2/n).
double stderr_weak_limit(double epsilon, std::uint64_t n);

WeakValue weak_value(const PureState& phi_i, const PureState& phi_f,
                     PauliAxis axis);

/// Postselected analogue of rescaled_estimate: marginal asymmetry of `slot`
/// divided by epsilon (or sin epsilon), over counts that already passed
/// postselection.
Estimate postselected_estimate(const OutcomeCounts& ps_counts, int slot,
                               double epsilon,
                               WeakRescale rescale = WeakRescale::epsilon);

/// Exact-distribution postselected estimate: conditions `dist` on the
/// system slot reading f, then rescales the marginal asymmetry of `slot`.
double postselected_estimate_exact(const OutcomeDistribution& dist, int slot,
                                   double epsilon,
                                   WeakRescale rescale = WeakRescale::epsilon);

enum class FirstOrderConfig { two_qubit_z, three_qubit_zz, three_qubit_zx };

/// Leading-order postselected joint probabilities of the f branch, e.g.
/// p_f0 = (|<f|i>|^2 + eps Re[<f|sz|i><i|f>]) / 2 for the two-qubit layout.
/// These close analytic forms serve as oracles for born_distribution.
OutcomeDistribution first_order_probs(const PureState& phi_i,
                                      const PureState& phi_f,
                                      FirstOrderConfig config, double eps1,
                                      std::optional<double> eps2 = std::nullopt);

AnomalyPair anomaly_pair(double z);

/// ceil((z^2 + 1) / delta_w^2): experimental runs needed to pin the weak
/// value down to mean square precision delta_w.
std::uint64_t required_runs(double z, double delta_w);

/// The leading-order expansion only makes sense while |epsilon z| < 1
/// (strictly; at equality the meter asymmetry would saturate its range).
Validity validity_check(double epsilon, double z);

} // namespace weakval
