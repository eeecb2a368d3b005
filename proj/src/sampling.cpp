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

#include "weakval/sampling.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <future>
#include <thread>

#include "weakval/rng.hpp"

namespace weakval {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210484904;

// Minimum shots per worker before fanning out; each draw is addressed by
// its absolute shot index, so the chunking never shows in the counts.
constexpr std::uint64_t kMinShotsPerWorker = std::uint64_t{1} << 16;

OutcomeLabel meter_label(PauliAxis axis, int bit) {
    if (axis == PauliAxis::Z) return bit ? OutcomeLabel::one : OutcomeLabel::zero;
    return bit ? OutcomeLabel::minus : OutcomeLabel::plus;
}

PureState validated_system_final(const PureState& state) {
    if (state.n_qubits() != 1) {
        throw Error(errc::dimension_mismatch,
                    "system final state must be one qubit");
    }
    if (std::abs(state.norm_squared() - 1.0) > kInputNormTol) {
        throw Error(errc::not_normalized,
                    "system final state norm deviates beyond 1e-9");
    }
    return state.renormalized();
}

} // namespace

const char* to_string(OutcomeLabel label) {
    switch (label) {
        case OutcomeLabel::f: return "f";
        case OutcomeLabel::f_perp: return "f_perp";
        case OutcomeLabel::zero: return "0";
        case OutcomeLabel::one: return "1";
        case OutcomeLabel::plus: return "+";
        case OutcomeLabel::minus: return "-";
    }
    return "?";
}

std::string to_string(const OutcomeKey& key) {
    std::string out;
    for (std::size_t i = 0; i < key.size(); ++i) {
        if (i > 0) out += ',';
        out += to_string(key[i]);
    }
    return out;
}

bool is_plus_one(OutcomeLabel label) {
    return label == OutcomeLabel::zero || label == OutcomeLabel::plus;
}

MeasurementLayout::MeasurementLayout(PureState system_final,
                                     std::vector<PauliAxis> meter_axes)
    : system_final_(validated_system_final(system_final)),
      system_final_perp_(orthogonal_state(system_final_)),
      meter_axes_(std::move(meter_axes)) {
    if (n_qubits() > 3) {
        throw Error(errc::too_many_qubits, "layout covers more than 3 qubits");
    }
}

double OutcomeDistribution::total() const {
    double t = 0.0;
    for (const auto& [key, p] : probabilities) t += p;
    return t;
}

OutcomeDistribution born_distribution(const PureState& state,
                                      const MeasurementLayout& layout) {
    if (layout.n_qubits() != state.n_qubits()) {
        throw Error(errc::dimension_mismatch,
                    "layout covers " + std::to_string(layout.n_qubits()) +
                        " qubits, state has " + std::to_string(state.n_qubits()));
    }
    OutcomeDistribution dist;
    PureState work = state.is_normalized()
                         ? state
                         : state.renormalized(&dist.pre_measurement_norm_squared);

    // Per-qubit basis table: basis[q][label_bit][component_bit].
    int n = state.n_qubits();
    std::vector<std::array<std::array<Amplitude, 2>, 2>> basis(n);
    basis[0][0] = {layout.system_final().amplitude(0),
                   layout.system_final().amplitude(1)};
    basis[0][1] = {layout.system_final_perp().amplitude(0),
                   layout.system_final_perp().amplitude(1)};
    for (int q = 1; q < n; ++q) {
        if (layout.meter_axes()[q - 1] == PauliAxis::Z) {
            basis[q][0] = {Amplitude{1, 0}, Amplitude{0, 0}};
            basis[q][1] = {Amplitude{0, 0}, Amplitude{1, 0}};
        } else {
            basis[q][0] = {Amplitude{kInvSqrt2, 0}, Amplitude{kInvSqrt2, 0}};
            basis[q][1] = {Amplitude{kInvSqrt2, 0}, Amplitude{-kInvSqrt2, 0}};
        }
    }

    std::size_t dim = work.dim();
    for (std::size_t o = 0; o < dim; ++o) {
        Amplitude projected{0.0, 0.0};
        for (std::size_t i = 0; i < dim; ++i) {
            Amplitude coeff{1.0, 0.0};
            for (int q = 0; q < n; ++q) {
                int ob = (o >> (n - 1 - q)) & 1;
                int ib = (i >> (n - 1 - q)) & 1;
                coeff *= std::conj(basis[q][ob][ib]);
            }
            projected += coeff * work.amplitudes()[i];
        }
        OutcomeKey key;
        key.reserve(n);
        key.push_back(((o >> (n - 1)) & 1) ? OutcomeLabel::f_perp
                                           : OutcomeLabel::f);
        for (int q = 1; q < n; ++q) {
            key.push_back(meter_label(layout.meter_axes()[q - 1],
                                      (o >> (n - 1 - q)) & 1));
        }
        dist.probabilities.emplace(std::move(key), std::norm(projected));
    }
    return dist;
}

OutcomeCounts sample_counts(const OutcomeDistribution& dist,
                            const ShotPlan& plan, unsigned max_threads) {
    if (plan.n_shots < 1) {
        throw Error(errc::validation_error, "n_shots must be >= 1");
    }
    if (dist.probabilities.empty()) {
        throw Error(errc::empty_distribution, "distribution has no outcomes");
    }
    std::vector<const OutcomeKey*> keys;
    std::vector<double> cumulative;
    keys.reserve(dist.probabilities.size());
    cumulative.reserve(dist.probabilities.size());
    double running = 0.0;
    for (const auto& [key, p] : dist.probabilities) {
        if (p < 0.0 || !std::isfinite(p)) {
            throw Error(errc::validation_error,
                        "outcome " + to_string(key) + " has probability " +
                            std::to_string(p));
        }
        running += p;
        keys.push_back(&key);
        cumulative.push_back(running);
    }
    if (running <= 0.0) {
        throw Error(errc::empty_distribution,
                    "distribution has no positive probability mass");
    }

    const double total = running;
    const std::size_t n_outcomes = keys.size();
    CounterRng rng(plan.master_seed);

    auto tally_block = [&](std::uint64_t begin,
                           std::uint64_t end) -> std::vector<std::uint64_t> {
        std::vector<std::uint64_t> local(n_outcomes, 0);
        for (std::uint64_t shot = begin; shot < end; ++shot) {
            double u = rng.uniform01(shot) * total;
            std::size_t k = 0;
            while (k + 1 < n_outcomes && u >= cumulative[k]) ++k;
            ++local[k];
        }
        return local;
    };

    std::uint64_t n = plan.n_shots;
    std::vector<std::uint64_t> tally(n_outcomes, 0);
    unsigned hw = max_threads != 0 ? max_threads
                                   : std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t n_workers =
        std::min<std::uint64_t>(hw, std::max<std::uint64_t>(1, n / kMinShotsPerWorker));
    if (n_workers <= 1) {
        tally = tally_block(0, n);
    } else {
        std::uint64_t chunk = (n + n_workers - 1) / n_workers;
        std::vector<std::future<std::vector<std::uint64_t>>> futures;
        futures.reserve(n_workers);
        for (std::uint64_t w = 0; w < n_workers; ++w) {
            std::uint64_t begin = w * chunk;
            std::uint64_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            futures.push_back(std::async(std::launch::async, tally_block,
                                         begin, end));
        }
        for (auto& f : futures) {
            std::vector<std::uint64_t> local = f.get();
            for (std::size_t k = 0; k < n_outcomes; ++k) tally[k] += local[k];
        }
    }

    OutcomeCounts counts;
    counts.n_total = n;
    for (std::size_t k = 0; k < n_outcomes; ++k) {
        counts.counts.emplace(*keys[k], tally[k]);
    }
    return counts;
}

Postselection postselect(const OutcomeCounts& counts) {
    Postselection result;
    result.n_total = counts.n_total;
    for (const auto& [key, c] : counts.counts) {
        if (key.empty() || (key[0] != OutcomeLabel::f &&
                            key[0] != OutcomeLabel::f_perp)) {
            throw Error(errc::validation_error,
                        "outcome " + to_string(key) +
                            " carries no system f/f_perp slot");
        }
        if (key[0] == OutcomeLabel::f) {
            result.kept.counts.emplace(key, c);
            result.kept.n_total += c;
        }
    }
    result.n_success = result.kept.n_total;
    result.success_fraction =
        result.n_total > 0
            ? static_cast<double>(result.n_success) / static_cast<double>(result.n_total)
            : 0.0;
    return result;
}

double f_branch_probability(const OutcomeDistribution& dist) {
    double p = 0.0;
    for (const auto& [key, prob] : dist.probabilities) {
        if (!key.empty() && key[0] == OutcomeLabel::f) p += prob;
    }
    return p;
}

} // namespace weakval
