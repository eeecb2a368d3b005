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
#include <cstddef>
#include <vector>

#include "weakval/error.hpp"

namespace weakval {

using Amplitude = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kHalfPi = kPi / 2.0;

/// Norm tolerance for internal unitarity bookkeeping.
inline constexpr double kNormTol = 1e-12;
/// Looser tolerance applied to user-supplied amplitudes.
inline constexpr double kInputNormTol = 1e-9;
/// Below this overlap magnitude a pre/post pair counts as orthogonal.
inline constexpr double kOverlapTol = 1e-12;

enum class PauliAxis { Z, X };

const char* to_string(PauliAxis axis);

/// Meter preparation angle. theta = 0 reproduces a projective measurement,
/// theta = pi/2 extracts nothing; epsilon = pi/2 - theta is the weakness.
struct MeterPrep {
    double theta = 0.0;
    PauliAxis axis = PauliAxis::Z;

    double epsilon() const { return kHalfPi - theta; }
    static MeterPrep from_epsilon(double epsilon, PauliAxis axis);
};

/// Pure state of 1..3 qubits. Qubit 0 is the system and occupies the most
/// significant bit of the amplitude index; qubits 1 and 2 are ancillas or
/// the probe. States are immutable values; every operation returns a fresh
/// state.
class PureState {
  public:
    PureState(int n_qubits, std::vector<Amplitude> amplitudes,
              bool normalized = true);

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amplitudes_.size(); }
    const std::vector<Amplitude>& amplitudes() const { return amplitudes_; }
    Amplitude amplitude(std::size_t index) const { return amplitudes_.at(index); }
    bool is_normalized() const { return normalized_; }

    double norm_squared() const;

    /// Explicitly renormalized copy; reports the prior squared norm so
    /// callers working with truncated (non-unitary) evolutions can keep it.
    PureState renormalized(double* prior_norm_squared = nullptr) const;

    /// Computational basis state |index> on n_qubits.
    static PureState basis(int n_qubits, std::size_t index);

    /// Bit mask selecting qubit q in an amplitude index.
    std::size_t qubit_mask(int qubit) const;

  private:
    int n_qubits_;
    std::vector<Amplitude> amplitudes_;
    bool normalized_;
};

/// alpha|0> + beta|1>. Inputs must be normalized within 1e-9 unless
/// `renormalize` is set. The stored amplitudes are scaled by the exact
/// computed norm so the normalized-state invariant holds to 1e-12.
PureState prepare_system(Amplitude alpha, Amplitude beta,
                         bool renormalize = false);

/// Meter qubit cos(theta/2)|b0> + sin(theta/2)|b1> in the axis eigenbasis
/// ({|0>,|1>} for Z, {|+>,|->} for X).
PureState prepare_meter(const MeterPrep& prep);

/// Kronecker product; qubits of `a` precede (are more significant than)
/// qubits of `b`. Combined size is capped at 3 qubits.
PureState tensor(const PureState& a, const PureState& b);

/// Controlled-NOT. Z axis: flip `target` when `control` is |1>. X axis:
/// the same gate written in the |+/-> basis of both qubits, which equals
/// the computational CNOT with control and target interchanged.
PureState apply_cnot(const PureState& state, int control, int target,
                     PauliAxis axis = PauliAxis::Z);

enum class CouplingMode { exact, first_order };

/// System-probe coupling exp(-i dt sigma_z (x) sigma_x). `exact` uses the
/// closed form cos(dt) I - i sin(dt) sigma_z(x)sigma_x; `first_order` the
/// truncation (1 - i dt sigma_z(x)sigma_x), which does not preserve norm
/// and therefore clears the normalized flag.
PureState apply_weak_coupling(const PureState& state, int system, int probe,
                              double delta_t,
                              CouplingMode mode = CouplingMode::exact);

/// Pauli sigma_axis applied to one qubit.
PureState apply_pauli(const PureState& state, int qubit, PauliAxis axis);

/// <a|b>, conjugate-linear in the first argument.
Amplitude inner_product(const PureState& a, const PureState& b);

/// <state|sigma_axis^(qubit)|state>, renormalizing explicitly when the
/// state is flagged unnormalized. Clamped to [-1, 1].
double pauli_expectation(const PureState& state, int qubit, PauliAxis axis);

/// The state orthogonal to a single qubit state, with its first
/// non-vanishing amplitude made real and positive.
PureState orthogonal_state(const PureState& phi);

} // namespace weakval
