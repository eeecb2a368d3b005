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
//
// Dense-matrix oracle utilities for the tests. Everything here is built
// from explicit Kronecker products and matrix arithmetic, deliberately
// independent of the bit-indexing implementation it checks.

#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <vector>

#include "weakval/error.hpp"
#include "weakval/state.hpp"

namespace oracle {

using C = std::complex<double>;
using Vec = std::vector<C>;
using Mat = std::vector<std::vector<C>>;

inline const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

inline Mat kron(const Mat& a, const Mat& b) {
    std::size_t ar = a.size(), ac = a[0].size(), br = b.size(), bc = b[0].size();
    Mat r(ar * br, std::vector<C>(ac * bc));
    for (std::size_t i = 0; i < ar; i++)
        for (std::size_t j = 0; j < ac; j++)
            for (std::size_t k = 0; k < br; k++)
                for (std::size_t l = 0; l < bc; l++)
                    r[i * br + k][j * bc + l] = a[i][j] * b[k][l];
    return r;
}

inline Vec kronv(const Vec& a, const Vec& b) {
    Vec r(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); i++)
        for (std::size_t j = 0; j < b.size(); j++) r[i * b.size() + j] = a[i] * b[j];
    return r;
}

inline Vec apply(const Mat& m, const Vec& v) {
    Vec r(m.size(), C(0));
    for (std::size_t i = 0; i < m.size(); i++)
        for (std::size_t j = 0; j < v.size(); j++) r[i] += m[i][j] * v[j];
    return r;
}

inline Mat matmul(const Mat& a, const Mat& b) {
    Mat r(a.size(), std::vector<C>(b[0].size(), C(0)));
    for (std::size_t i = 0; i < a.size(); i++)
        for (std::size_t k = 0; k < b.size(); k++)
            for (std::size_t j = 0; j < b[0].size(); j++) r[i][j] += a[i][k] * b[k][j];
    return r;
}

inline Mat madd(const Mat& a, const Mat& b) {
    Mat r = a;
    for (std::size_t i = 0; i < a.size(); i++)
        for (std::size_t j = 0; j < a[0].size(); j++) r[i][j] += b[i][j];
    return r;
}

inline Mat mscale(C s, const Mat& a) {
    Mat r = a;
    for (auto& row : r)
        for (auto& x : row) x *= s;
    return r;
}

inline C inner(const Vec& a, const Vec& b) {
    C s(0);
    for (std::size_t i = 0; i < a.size(); i++) s += std::conj(a[i]) * b[i];
    return s;
}

inline const Mat I2 = {{C(1), C(0)}, {C(0), C(1)}};
inline const Mat X = {{C(0), C(1)}, {C(1), C(0)}};
inline const Mat Z = {{C(1), C(0)}, {C(0), C(-1)}};
inline const Mat H = {{C(kInvSqrt2), C(kInvSqrt2)}, {C(kInvSqrt2), C(-kInvSqrt2)}};
inline const Mat P0 = {{C(1), C(0)}, {C(0), C(0)}};
inline const Mat P1 = {{C(0), C(0)}, {C(0), C(1)}};
inline const Mat Pplus = {{C(0.5), C(0.5)}, {C(0.5), C(0.5)}};
inline const Mat Pminus = {{C(0.5), C(-0.5)}, {C(-0.5), C(0.5)}};

/// CNOT over n qubits as P0_c (x) I + P1_c (x) X_t, qubit 0 most significant.
inline Mat cnot_z_matrix(int n, int c, int t) {
    Mat term0 = {{C(1)}}, term1 = {{C(1)}};
    for (int q = 0; q < n; q++) {
        term0 = kron(term0, q == c ? P0 : I2);
        term1 = kron(term1, q == c ? P1 : (q == t ? X : I2));
    }
    return madd(term0, term1);
}

/// CNOT over the |+/-> basis: P+_c (x) I + P-_c (x) Z_t.
inline Mat cnot_x_matrix(int n, int c, int t) {
    Mat term0 = {{C(1)}}, term1 = {{C(1)}};
    for (int q = 0; q < n; q++) {
        term0 = kron(term0, q == c ? Pplus : I2);
        term1 = kron(term1, q == c ? Pminus : (q == t ? Z : I2));
    }
    return madd(term0, term1);
}

/// exp(M) by plain power series; plenty for the small norms used in tests.
inline Mat expm_series(const Mat& m, int terms = 40) {
    std::size_t d = m.size();
    Mat acc(d, std::vector<C>(d, C(0))), term(d, std::vector<C>(d, C(0)));
    for (std::size_t i = 0; i < d; i++) {
        acc[i][i] = 1;
        term[i][i] = 1;
    }
    for (int k = 1; k <= terms; k++) {
        term = mscale(C(1.0 / k), matmul(term, m));
        acc = madd(acc, term);
    }
    return acc;
}

/// Joint projective probabilities by explicit construction of every
/// product basis vector. bases[q] = {vector for outcome 0, for outcome 1}.
inline std::vector<double> joint_probs(const Vec& psi,
                                       const std::vector<std::vector<Vec>>& bases) {
    int n = static_cast<int>(bases.size());
    int dim = 1 << n;
    std::vector<double> p(dim);
    for (int o = 0; o < dim; o++) {
        Vec b = {C(1)};
        for (int q = 0; q < n; q++) b = kronv(b, bases[q][(o >> (n - 1 - q)) & 1]);
        p[o] = std::norm(inner(b, psi));
    }
    return p;
}

inline Vec to_vec(const weakval::PureState& state) {
    return Vec(state.amplitudes().begin(), state.amplitudes().end());
}

inline double max_amp_diff(const weakval::PureState& state, const Vec& expected) {
    double worst = 0.0;
    for (std::size_t i = 0; i < expected.size(); i++) {
        worst = std::max(worst, std::abs(state.amplitudes()[i] - expected[i]));
    }
    return worst;
}

inline double max_amp_diff(const weakval::PureState& a, const weakval::PureState& b) {
    return max_amp_diff(a, to_vec(b));
}

/// Haar-ish random single qubit state from four Gaussians.
inline weakval::PureState random_qubit(std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    while (true) {
        weakval::Amplitude a{g(rng), g(rng)}, b{g(rng), g(rng)};
        if (std::norm(a) + std::norm(b) > 1e-6) {
            return weakval::prepare_system(a, b, true);
        }
    }
}

/// Random normalized n-qubit state.
inline weakval::PureState random_state(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> g;
    std::vector<weakval::Amplitude> amps(std::size_t{1} << n);
    double n2 = 0.0;
    do {
        n2 = 0.0;
        for (auto& a : amps) {
            a = {g(rng), g(rng)};
            n2 += std::norm(a);
        }
    } while (n2 < 1e-6);
    double inv = 1.0 / std::sqrt(n2);
    for (auto& a : amps) a *= inv;
    return weakval::PureState(n, std::move(amps));
}

/// Runs fn and reports the error code it threw, if any.
template <typename Fn>
std::optional<weakval::errc> thrown_code(Fn&& fn) {
    try {
        fn();
    } catch (const weakval::Error& e) {
        return e.code();
    }
    return std::nullopt;
}

} // namespace oracle
