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

#include "test_support.hpp"
#include "weakval/analysis.hpp"
#include "weakval/sampling.hpp"

using namespace weakval;
using oracle::thrown_code;
using L = OutcomeLabel;

namespace {

/// Oracle-side joint probabilities of a layout, via the dense projector path.
std::vector<double> oracle_probs(const PureState& state,
                                 const PureState& phi_f,
                                 const std::vector<PauliAxis>& axes) {
    std::vector<std::vector<oracle::Vec>> bases;
    bases.push_back({oracle::to_vec(phi_f), oracle::to_vec(orthogonal_state(phi_f))});
    oracle::Vec k0 = {1, 0}, k1 = {0, 1};
    oracle::Vec kp = {oracle::kInvSqrt2, oracle::kInvSqrt2};
    oracle::Vec km = {oracle::kInvSqrt2, -oracle::kInvSqrt2};
    for (PauliAxis axis : axes) {
        if (axis == PauliAxis::Z) bases.push_back({k0, k1});
        else bases.push_back({kp, km});
    }
    return oracle::joint_probs(oracle::to_vec(state), bases);
}

std::vector<double> dist_in_key_order(const OutcomeDistribution& dist) {
    std::vector<double> p;
    for (const auto& [key, prob] : dist.probabilities) p.push_back(prob);
    return p;
}

} // namespace

TEST_CASE("born distribution against the dense projection oracle") {
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 100; trial++) {
        int n_meters = 1 + static_cast<int>(rng() % 2);
        PureState state = oracle::random_state(rng, 1 + n_meters);
        PureState phi_f = oracle::random_qubit(rng);
        std::vector<PauliAxis> axes;
        for (int q = 0; q < n_meters; q++) {
            axes.push_back((rng() & 1) ? PauliAxis::Z : PauliAxis::X);
        }
        OutcomeDistribution dist =
            born_distribution(state, MeasurementLayout(phi_f, axes));
        CHECK(dist.total() == doctest::Approx(1.0).epsilon(1e-12));

        // The map's key order is the oracle's outcome order: the map is
        // lexicographic in labels and labels were assigned by outcome bit.
        std::vector<double> got = dist_in_key_order(dist);
        std::vector<double> want = oracle_probs(state, phi_f, axes);
        REQUIRE(got.size() == want.size());
        for (std::size_t k = 0; k < got.size(); k++) {
            CHECK(got[k] == doctest::Approx(want[k]).epsilon(1e-10));
        }
    }
}

TEST_CASE("born distribution of an entangled pair is the two classical branches") {
    PureState sys = prepare_system({0.6, 0}, {0, 0.8});
    PureState bell = apply_cnot(tensor(sys, PureState::basis(1, 0)), 0, 1);
    OutcomeDistribution dist = born_distribution(
        bell, MeasurementLayout(PureState::basis(1, 0), {PauliAxis::Z}));
    CHECK(dist.probabilities.at({L::f, L::zero}) == doctest::Approx(0.36).epsilon(1e-12));
    CHECK(dist.probabilities.at({L::f_perp, L::one}) == doctest::Approx(0.64).epsilon(1e-12));
    CHECK(dist.probabilities.at({L::f, L::one}) < 1e-15);
    CHECK(dist.probabilities.at({L::f_perp, L::zero}) < 1e-15);
}

TEST_CASE("postselected joint probabilities, anomaly pair z=3 eps=0.1") {
    AnomalyPair pair = anomaly_pair(3.0);
    PureState joint = apply_cnot(
        tensor(pair.phi_i, prepare_meter({kHalfPi - 0.1, PauliAxis::Z})), 0, 1);
    OutcomeDistribution dist =
        born_distribution(joint, MeasurementLayout(pair.phi_f, {PauliAxis::Z}));
    // frozen from the independent dense oracle
    CHECK(dist.probabilities.at({L::f, L::zero}) ==
          doctest::Approx(0.065974179441419104).epsilon(1e-12));
    CHECK(dist.probabilities.at({L::f, L::one}) ==
          doctest::Approx(0.036024154447370595).epsilon(1e-12));
    CHECK(dist.total() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("born distribution renormalizes flagged states and records the norm") {
    PureState in = tensor(anomaly_pair(2.0).phi_i, PureState::basis(1, 0));
    PureState fo = apply_weak_coupling(in, 0, 1, 0.1, CouplingMode::first_order);
    REQUIRE(!fo.is_normalized());
    OutcomeDistribution dist = born_distribution(
        fo, MeasurementLayout(anomaly_pair(2.0).phi_f, {PauliAxis::Z}));
    CHECK(dist.pre_measurement_norm_squared == doctest::Approx(1.01).epsilon(1e-12));
    CHECK(dist.total() == doctest::Approx(1.0).epsilon(1e-12));

    PureState bad = tensor(PureState::basis(1, 0), PureState::basis(1, 1));
    CHECK(thrown_code([&] {
        born_distribution(PureState::basis(1, 0),
                          MeasurementLayout(PureState::basis(1, 0), {PauliAxis::Z}));
    }) == errc::dimension_mismatch);
    (void)bad;
}

TEST_CASE("sample_counts determinism and degenerate cases") {
    OutcomeDistribution degenerate;
    degenerate.probabilities[{L::zero}] = 1.0;
    OutcomeCounts c = sample_counts(degenerate, {100, 7});
    CHECK(c.counts.at({L::zero}) == 100);
    CHECK(c.n_total == 100);

    OutcomeDistribution uniform;
    uniform.probabilities[{L::zero}] = 0.5;
    uniform.probabilities[{L::one}] = 0.5;
    ShotPlan plan{1000000, 42};
    OutcomeCounts u1 = sample_counts(uniform, plan);
    // binomial concentration: 5 sigma = 5 sqrt(1e6 * 0.25) = 2500
    CHECK(std::llabs(static_cast<long long>(u1.counts.at({L::zero})) - 500000) < 2500);
    CHECK(u1.counts.at({L::zero}) + u1.counts.at({L::one}) == 1000000);

    OutcomeCounts u2 = sample_counts(uniform, plan);
    CHECK(u1.counts == u2.counts);

    // thread count must not change anything
    OutcomeCounts serial = sample_counts(uniform, plan, 1);
    OutcomeCounts wide = sample_counts(uniform, plan, 8);
    CHECK(serial.counts == u1.counts);
    CHECK(wide.counts == u1.counts);

    OutcomeCounts other_seed = sample_counts(uniform, {1000000, 43});
    CHECK(other_seed.counts != u1.counts);

    OutcomeDistribution empty;
    CHECK(thrown_code([&] { sample_counts(empty, plan); }) == errc::empty_distribution);
}

TEST_CASE("sampled frequencies converge to the exact distribution") {
    AnomalyPair pair = anomaly_pair(3.0);
    PureState joint = apply_cnot(
        tensor(pair.phi_i, prepare_meter({kHalfPi - 0.05, PauliAxis::Z})), 0, 1);
    OutcomeDistribution dist =
        born_distribution(joint, MeasurementLayout(pair.phi_f, {PauliAxis::Z}));
    std::uint64_t n = 1000000;
    OutcomeCounts counts = sample_counts(dist, {n, 42});
    for (const auto& [key, p] : dist.probabilities) {
        double freq = static_cast<double>(counts.counts.at(key)) / static_cast<double>(n);
        double sigma = std::sqrt(p * (1 - p) / static_cast<double>(n));
        CHECK(std::abs(freq - p) <= 6.0 * sigma + 1e-12);
    }
}

TEST_CASE("postselect keeps the f branch untouched") {
    OutcomeCounts mixed;
    mixed.counts[{L::f, L::zero}] = 30;
    mixed.counts[{L::f, L::one}] = 10;
    mixed.counts[{L::f_perp, L::zero}] = 60;
    mixed.n_total = 100;
    Postselection ps = postselect(mixed);
    CHECK(ps.kept.counts.size() == 2);
    CHECK(ps.kept.counts.at({L::f, L::zero}) == 30);
    CHECK(ps.kept.counts.at({L::f, L::one}) == 10);
    CHECK(ps.n_success == 40);
    CHECK(ps.success_fraction == doctest::Approx(0.4));

    // relative frequencies among kept outcomes are exactly the originals
    CHECK(static_cast<double>(ps.kept.counts.at({L::f, L::zero})) /
              static_cast<double>(ps.kept.n_total) ==
          doctest::Approx(30.0 / 40.0));

    OutcomeCounts none;
    none.counts[{L::f_perp, L::zero}] = 5;
    none.n_total = 5;
    Postselection empty = postselect(none);
    CHECK(empty.n_success == 0);
    CHECK(empty.success_fraction == 0.0);
    CHECK(empty.kept.counts.empty());

    OutcomeCounts bad;
    bad.counts[{L::zero}] = 1;
    bad.n_total = 1;
    CHECK(thrown_code([&] { postselect(bad); }) == errc::validation_error);
}

TEST_CASE("postselection success probability approaches the overlap") {
    // exact-distribution success fraction = 1/(z^2+1) + O(eps^2)
    for (double z : {0.5, 2.0, 5.0}) {
        for (double eps : {0.1, 0.05}) {
            AnomalyPair pair = anomaly_pair(z);
            PureState joint = apply_cnot(
                tensor(pair.phi_i, prepare_meter({kHalfPi - eps, PauliAxis::Z})), 0, 1);
            OutcomeDistribution dist = born_distribution(
                joint, MeasurementLayout(pair.phi_f, {PauliAxis::Z}));
            double expect = 1.0 / (z * z + 1.0);
            CHECK(std::abs(f_branch_probability(dist) - expect) <= 2.0 * eps * eps);
        }
    }
}

TEST_CASE("second meter marginalizes away up to second order") {
    // three-qubit double-Z distribution summed over the second ancilla vs
    // the two-qubit distribution; bounded by eps2^2 + eps1 eps2.
    std::mt19937_64 rng(71);
    double e1 = 0.04, e2 = 0.02;
    for (int trial = 0; trial < 50; trial++) {
        PureState phi_i = oracle::random_qubit(rng);
        PureState phi_f = oracle::random_qubit(rng);
        PureState pair2 = apply_cnot(
            tensor(phi_i, prepare_meter({kHalfPi - e1, PauliAxis::Z})), 0, 1);
        OutcomeDistribution two =
            born_distribution(pair2, MeasurementLayout(phi_f, {PauliAxis::Z}));

        PureState triple = tensor(pair2, prepare_meter({kHalfPi - e2, PauliAxis::Z}));
        triple = apply_cnot(triple, 0, 2);
        OutcomeDistribution three = born_distribution(
            triple, MeasurementLayout(phi_f, {PauliAxis::Z, PauliAxis::Z}));

        for (const auto& [key, p2] : two.probabilities) {
            OutcomeKey k0 = {key[0], key[1], L::zero};
            OutcomeKey k1 = {key[0], key[1], L::one};
            double marg = three.probabilities.at(k0) + three.probabilities.at(k1);
            CHECK(std::abs(marg - p2) <= e2 * e2 + e1 * e2);
        }
    }
}

TEST_CASE("a no-information second meter marginalizes away exactly") {
    AnomalyPair pair = anomaly_pair(2.0);
    double e1 = 0.04;
    PureState pair2 = apply_cnot(
        tensor(pair.phi_i, prepare_meter({kHalfPi - e1, PauliAxis::Z})), 0, 1);
    OutcomeDistribution two =
        born_distribution(pair2, MeasurementLayout(pair.phi_f, {PauliAxis::Z}));

    PureState triple = tensor(pair2, prepare_meter({kHalfPi, PauliAxis::Z}));
    triple = apply_cnot(triple, 0, 2);
    OutcomeDistribution three = born_distribution(
        triple, MeasurementLayout(pair.phi_f, {PauliAxis::Z, PauliAxis::Z}));
    for (const auto& [key, p2] : two.probabilities) {
        double marg = three.probabilities.at({key[0], key[1], L::zero}) +
                      three.probabilities.at({key[0], key[1], L::one});
        CHECK(marg == doctest::Approx(p2).epsilon(1e-12));
    }
}
