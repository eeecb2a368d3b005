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

#include "weakval/state.hpp"

#include <cmath>
#include <string>

namespace weakval {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440084436210484904;

void check_qubit_index(const PureState& state, int qubit) {
    if (qubit < 0 || qubit >= state.n_qubits()) {
        throw Error(errc::index_out_of_range,
                    "qubit " + std::to_string(qubit) + " not in [0, " +
                        std::to_string(state.n_qubits()) + ")");
    }
}

} // namespace

const char* to_string(PauliAxis axis) {
    return axis == PauliAxis::Z ? "Z" : "X";
}

MeterPrep MeterPrep::from_epsilon(double epsilon, PauliAxis axis) {
    if (!(epsilon >= 0.0) || epsilon > kHalfPi) {
        throw Error(errc::validation_error,
                    "epsilon must lie in [0, pi/2], got " +
                        std::to_string(epsilon));
    }
    return MeterPrep{kHalfPi - epsilon, axis};
}

PureState::PureState(int n_qubits, std::vector<Amplitude> amplitudes,
                     bool normalized)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)),
      normalized_(normalized) {
    if (n_qubits_ < 1 || n_qubits_ > 3) {
        throw Error(errc::too_many_qubits,
                    "qubit count must be 1..3, got " + std::to_string(n_qubits_));
    }
    if (amplitudes_.size() != (std::size_t{1} << n_qubits_)) {
        throw Error(errc::dimension_mismatch,
                    "expected " + std::to_string(std::size_t{1} << n_qubits_) +
                        " amplitudes, got " + std::to_string(amplitudes_.size()));
    }
    for (const Amplitude& a : amplitudes_) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
            throw Error(errc::validation_error, "non-finite amplitude");
        }
    }
    if (normalized_ && std::abs(norm_squared() - 1.0) > kNormTol) {
        throw Error(errc::not_normalized,
                    "squared norm " + std::to_string(norm_squared()) +
                        " deviates from 1 beyond 1e-12");
    }
}

double PureState::norm_squared() const {
    double total = 0.0;
    for (const Amplitude& a : amplitudes_) total += std::norm(a);
    return total;
}

PureState PureState::renormalized(double* prior_norm_squared) const {
    double n2 = norm_squared();
    if (prior_norm_squared != nullptr) *prior_norm_squared = n2;
    if (n2 <= 0.0) {
        throw Error(errc::non_normalizable, "state has zero norm");
    }
    double inv = 1.0 / std::sqrt(n2);
    std::vector<Amplitude> amps = amplitudes_;
    for (Amplitude& a : amps) a *= inv;
    return PureState(n_qubits_, std::move(amps), true);
}

PureState PureState::basis(int n_qubits, std::size_t index) {
    std::vector<Amplitude> amps(std::size_t{1} << n_qubits, Amplitude{0.0, 0.0});
    amps.at(index) = Amplitude{1.0, 0.0};
    return PureState(n_qubits, std::move(amps));
}

std::size_t PureState::qubit_mask(int qubit) const {
    return std::size_t{1} << (n_qubits_ - 1 - qubit);
}

PureState prepare_system(Amplitude alpha, Amplitude beta, bool renormalize) {
    double n2 = std::norm(alpha) + std::norm(beta);
    if (n2 <= 0.0) {
        throw Error(errc::non_normalizable, "alpha and beta are both zero");
    }
    if (!renormalize && std::abs(n2 - 1.0) > kInputNormTol) {
        throw Error(errc::not_normalized,
                    "|alpha|^2 + |beta|^2 = " + std::to_string(n2) +
                        " and renormalization was not requested");
    }
    double inv = 1.0 / std::sqrt(n2);
    return PureState(1, {alpha * inv, beta * inv});
}

PureState prepare_meter(const MeterPrep& prep) {
    if (!(prep.theta >= 0.0) || prep.theta > kHalfPi) {
        throw Error(errc::validation_error,
                    "theta must lie in [0, pi/2], got " +
                        std::to_string(prep.theta));
    }
    double c = std::cos(prep.theta / 2.0);
    double s = std::sin(prep.theta / 2.0);
    if (prep.axis == PauliAxis::Z) {
        return PureState(1, {Amplitude{c, 0.0}, Amplitude{s, 0.0}});
    }
    // c|+> + s|-> written over the computational basis
    return PureState(1, {Amplitude{(c + s) * kInvSqrt2, 0.0},
                         Amplitude{(c - s) * kInvSqrt2, 0.0}});
}

PureState tensor(const PureState& a, const PureState& b) {
    int n = a.n_qubits() + b.n_qubits();
    if (n > 3) {
        throw Error(errc::too_many_qubits,
                    "tensor product would have " + std::to_string(n) + " qubits");
    }
    std::vector<Amplitude> amps(std::size_t{1} << n);
    std::size_t bd = b.dim();
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < bd; ++j) {
            amps[i * bd + j] = a.amplitudes()[i] * b.amplitudes()[j];
        }
    }
    return PureState(n, std::move(amps),
                     a.is_normalized() && b.is_normalized());
}

PureState apply_cnot(const PureState& state, int control, int target,
                     PauliAxis axis) {
    check_qubit_index(state, control);
    check_qubit_index(state, target);
    if (control == target) {
        throw Error(errc::control_equals_target,
                    "control and target both " + std::to_string(control));
    }
    if (axis == PauliAxis::X) {
        // CNOT over the |+/-> basis equals the computational CNOT with the
        // roles of control and target interchanged.
        return apply_cnot(state, target, control, PauliAxis::Z);
    }
    std::size_t cmask = state.qubit_mask(control);
    std::size_t tmask = state.qubit_mask(target);
    std::vector<Amplitude> amps(state.dim());
    for (std::size_t i = 0; i < state.dim(); ++i) {
        std::size_t j = (i & cmask) ? (i ^ tmask) : i;
        amps[j] = state.amplitudes()[i];
    }
    return PureState(state.n_qubits(), std::move(amps), state.is_normalized());
}

PureState apply_weak_coupling(const PureState& state, int system, int probe,
                              double delta_t, CouplingMode mode) {
    check_qubit_index(state, system);
    check_qubit_index(state, probe);
    if (system == probe) {
        throw Error(errc::control_equals_target,
                    "system and probe both " + std::to_string(system));
    }
    if (!(delta_t >= 0.0)) {
        throw Error(errc::validation_error, "delta_t must be >= 0");
    }
    if (delta_t == 0.0) return state;

    std::size_t smask = state.qubit_mask(system);
    std::size_t pmask = state.qubit_mask(probe);
    std::vector<Amplitude> amps(state.dim());
    // (sigma_z (x) sigma_x)|s,p> = (-1)^s |s, 1-p>, so the partner amplitude
    // is the one with the probe bit flipped, signed by the system bit.
    Amplitude diag = mode == CouplingMode::exact
                         ? Amplitude{std::cos(delta_t), 0.0}
                         : Amplitude{1.0, 0.0};
    double off = mode == CouplingMode::exact ? std::sin(delta_t) : delta_t;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        double sign = (i & smask) ? -1.0 : 1.0;
        amps[i] = diag * state.amplitudes()[i] +
                  Amplitude{0.0, -sign * off} * state.amplitudes()[i ^ pmask];
    }
    bool keeps_norm = mode == CouplingMode::exact && state.is_normalized();
    return PureState(state.n_qubits(), std::move(amps), keeps_norm);
}

PureState apply_pauli(const PureState& state, int qubit, PauliAxis axis) {
    check_qubit_index(state, qubit);
    std::size_t mask = state.qubit_mask(qubit);
    std::vector<Amplitude> amps(state.dim());
    for (std::size_t i = 0; i < state.dim(); ++i) {
        if (axis == PauliAxis::Z) {
            amps[i] = (i & mask) ? -state.amplitudes()[i] : state.amplitudes()[i];
        } else {
            amps[i] = state.amplitudes()[i ^ mask];
        }
    }
    return PureState(state.n_qubits(), std::move(amps), state.is_normalized());
}

Amplitude inner_product(const PureState& a, const PureState& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw Error(errc::dimension_mismatch,
                    "inner product of " + std::to_string(a.n_qubits()) +
                        " and " + std::to_string(b.n_qubits()) + " qubit states");
    }
    Amplitude sum{0.0, 0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        sum += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
    }
    return sum;
}

double pauli_expectation(const PureState& state, int qubit, PauliAxis axis) {
    check_qubit_index(state, qubit);
    std::size_t mask = state.qubit_mask(qubit);
    double value = 0.0;
    if (axis == PauliAxis::Z) {
        for (std::size_t i = 0; i < state.dim(); ++i) {
            double p = std::norm(state.amplitudes()[i]);
            value += (i & mask) ? -p : p;
        }
    } else {
        Amplitude acc{0.0, 0.0};
        for (std::size_t i = 0; i < state.dim(); ++i) {
            acc += std::conj(state.amplitudes()[i]) * state.amplitudes()[i ^ mask];
        }
        value = acc.real();
    }
    if (!state.is_normalized()) {
        double n2 = state.norm_squared();
        if (n2 <= 0.0) {
            throw Error(errc::non_normalizable, "state has zero norm");
        }
        value /= n2;
    }
    return std::max(-1.0, std::min(1.0, value));
}

PureState orthogonal_state(const PureState& phi) {
    if (phi.n_qubits() != 1) {
        throw Error(errc::dimension_mismatch,
                    "orthogonal completion is defined for single qubits");
    }
    const auto& a = phi.amplitudes();
    std::vector<Amplitude> g = {-std::conj(a[1]), std::conj(a[0])};
    Amplitude lead = std::abs(g[0]) > kInputNormTol ? g[0] : g[1];
    Amplitude phase = std::conj(lead) / std::abs(lead);
    return PureState(1, {g[0] * phase, g[1] * phase}, phi.is_normalized());
}

} // namespace weakval
