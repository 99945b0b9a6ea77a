// Copyright 2026 The HSP Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Fourier transforms over Z_N: the dense reference matrix, the exact and
// truncated (Coppersmith) power-of-two circuits, and the CRT composition for
// coprime moduli. The odd-modulus construction lives in odd_qft.hpp.

#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "hsp/common.hpp"
#include "hsp/statevec.hpp"

namespace hsp {

using DenseMatrix = Eigen::MatrixXcd;

/// omega_N^e with the exponent reduced mod N first, so large products stay exact.
inline cplx root_of_unity(std::uint64_t N, std::uint64_t e) {
  return std::polar(1.0, kTwoPi * static_cast<double>(e % N) / static_cast<double>(N));
}

/// F_N with entries omega_N^{jk} / sqrt(N).
inline DenseMatrix dense_qft(std::uint64_t N) {
  if (N == 0) throw DomainError("dense_qft: N must be positive");
  const double s = 1.0 / std::sqrt(static_cast<double>(N));
  DenseMatrix F(N, N);
  for (std::uint64_t j = 0; j < N; ++j) {
    for (std::uint64_t k = 0; k < N; ++k) F(j, k) = s * root_of_unity(N, j * k);
  }
  return F;
}

/// max |(U U^dagger - I)_ij|.
inline double unitarity_residual(const DenseMatrix& U) {
  const DenseMatrix R = U * U.adjoint() - DenseMatrix::Identity(U.rows(), U.cols());
  return R.cwiseAbs().maxCoeff();
}

/// Applies F_N to `amps` (length N) directly from the definition. O(N^2).
inline Amplitudes apply_dense_qft(std::span<const cplx> amps) {
  const std::uint64_t N = amps.size();
  const double s = 1.0 / std::sqrt(static_cast<double>(N));
  Amplitudes out(N, cplx{0.0, 0.0});
  for (std::uint64_t k = 0; k < N; ++k) {
    cplx acc{0.0, 0.0};
    for (std::uint64_t j = 0; j < N; ++j) acc += root_of_unity(N, j * k) * amps[j];
    out[k] = s * acc;
  }
  return out;
}

struct GateCounts {
  std::size_t hadamard = 0;
  std::size_t controlled_phase = 0;
  std::size_t swap = 0;
  std::size_t other = 0;

  /// One per listed op, as the circuit is written.
  std::size_t total() const { return hadamard + controlled_phase + swap + other; }
  /// Swaps expanded into three CNOTs each.
  std::size_t elementary() const { return hadamard + controlled_phase + 3 * swap + other; }
};

struct QftCircuit {
  unsigned n = 0;
  std::vector<GateSpec> ops;

  std::size_t size() const { return ops.size(); }

  /// Number of layers when each gate is placed in the earliest layer after
  /// every earlier gate sharing a qubit with it.
  std::size_t depth() const {
    std::vector<std::size_t> level(n, 0);
    std::size_t d = 0;
    for (const auto& g : ops) {
      std::size_t l = 0;
      for (unsigned q : g.targets) l = std::max(l, level[q]);
      ++l;
      for (unsigned q : g.targets) level[q] = l;
      d = std::max(d, l);
    }
    return d;
  }

  GateCounts counts() const {
    GateCounts c;
    for (const auto& g : ops) {
      switch (g.kind) {
        case GateKind::H: ++c.hadamard; break;
        case GateKind::Rk: ++c.controlled_phase; break;
        case GateKind::Swap: ++c.swap; break;
        default: ++c.other; break;
      }
    }
    return c;
  }
};

/// Coppersmith-style truncation: rotations R_k with k > m are dropped.
/// m = n keeps every gate.
struct ApproxQftParams {
  unsigned n = 1;
  unsigned m = 1;

  double predicted_error() const { return kTwoPi * n * std::ldexp(1.0, -static_cast<int>(m)); }
};

namespace detail {

inline QftCircuit build_qft_circuit(unsigned n, unsigned cutoff) {
  QftCircuit c;
  c.n = n;
  for (unsigned a = 0; a < n; ++a) {
    c.ops.push_back(GateSpec::hadamard(a));
    for (unsigned b = a + 1; b < n; ++b) {
      const unsigned k = b - a + 1;
      if (k <= cutoff) c.ops.push_back(GateSpec::rk(static_cast<int>(k), b, a));
    }
  }
  for (unsigned a = 0; a < n / 2; ++a) c.ops.push_back(GateSpec::swap(a, n - 1 - a));
  return c;
}

}  // namespace detail

/// n(n+1)/2 Hadamards and controlled phases followed by floor(n/2) swaps
/// that reverse qubit order. Realizes F_{2^n} in the ket-ordered convention
/// of statevec.hpp.
inline QftCircuit exact_qft_circuit(unsigned n) {
  if (n == 0) throw DomainError("exact_qft_circuit: n must be >= 1");
  return detail::build_qft_circuit(n, n);
}

inline QftCircuit afft_circuit(const ApproxQftParams& p) {
  if (p.n == 0 || p.m == 0 || p.m > p.n) {
    throw DomainError("afft_circuit: need 1 <= m <= n");
  }
  return detail::build_qft_circuit(p.n, p.m);
}

/// Applies every op of `c` in place. `amps.size()` must be 2^c.n.
inline void apply_circuit(std::span<cplx> amps, const QftCircuit& c) {
  for (const auto& g : c.ops) apply_gate_inplace(amps, c.n, g);
}

inline StateVector apply_circuit(const StateVector& s, const QftCircuit& c) {
  Amplitudes a = s.amplitudes();
  if (a.size() != (std::size_t{1} << c.n)) {
    throw DomainError("apply_circuit: state dimension does not match circuit");
  }
  apply_circuit(std::span<cplx>(a), c);
  return StateVector::normalized(std::move(a));
}

/// The unitary realized by a circuit, column by column.
inline DenseMatrix circuit_matrix(const QftCircuit& c) {
  const std::size_t dim = std::size_t{1} << c.n;
  DenseMatrix U(dim, dim);
  Amplitudes col(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    std::fill(col.begin(), col.end(), cplx{0.0, 0.0});
    col[j] = 1.0;
    apply_circuit(std::span<cplx>(col), c);
    for (std::size_t i = 0; i < dim; ++i) U(i, j) = col[i];
  }
  return U;
}

/// Inverse of n modulo m for gcd(n, m) = 1.
inline std::int64_t inverse_mod(std::int64_t n, std::int64_t m) {
  std::int64_t r0 = m, r1 = mod(n, m), s0 = 0, s1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(s0, s1) = std::make_pair(s1, s0 - q * s1);
  }
  if (r0 != 1) throw DomainError("inverse_mod: arguments not coprime");
  return mod(s0, m);
}

/// F_{AB} assembled as (U_B (x) U_A)(F_A (x) F_B) between CRT relabellings.
/// Input |j> is read as |j mod A>|j mod B>; after the factor transforms, the
/// multiplication maps x -> xB mod A and y -> yA mod B are applied, and the
/// output pair (x', y') is read back as the k with k = x' (A), k = y' (B).
inline DenseMatrix coprime_qft(std::uint64_t A, std::uint64_t B) {
  if (A == 0 || B == 0) throw DomainError("coprime_qft: moduli must be positive");
  if (std::gcd(A, B) != 1) throw DomainError("coprime_qft: moduli must be coprime");
  const std::uint64_t N = A * B;
  const DenseMatrix FA = dense_qft(A);
  const DenseMatrix FB = dense_qft(B);
  // Output pair (x', y') -> k by CRT.
  const std::int64_t bInvA = A == 1 ? 0 : inverse_mod(static_cast<std::int64_t>(B), A);
  const std::int64_t aInvB = B == 1 ? 0 : inverse_mod(static_cast<std::int64_t>(A), B);
  auto crt = [&](std::uint64_t x, std::uint64_t y) {
    const unsigned __int128 k = static_cast<unsigned __int128>(x) * B * bInvA +
                                static_cast<unsigned __int128>(y) * A * aInvB;
    return static_cast<std::uint64_t>(k % N);
  };
  DenseMatrix out = DenseMatrix::Zero(N, N);
  for (std::uint64_t j = 0; j < N; ++j) {
    const std::uint64_t ja = j % A, jb = j % B;
    for (std::uint64_t x = 0; x < A; ++x) {
      const std::uint64_t xp = (x * B) % A;
      for (std::uint64_t y = 0; y < B; ++y) {
        const std::uint64_t yp = (y * A) % B;
        out(crt(xp, yp), j) += FA(x, ja) * FB(y, jb);
      }
    }
  }
  return out;
}

}  // namespace hsp
