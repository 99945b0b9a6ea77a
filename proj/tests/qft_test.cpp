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

#include "hsp/qft.hpp"

#include <gtest/gtest.h>

namespace hsp {
namespace {

Amplitudes ToVec(const Eigen::VectorXcd& v) { return Amplitudes(v.data(), v.data() + v.size()); }

TEST(DenseQft, Examples) {
  const DenseMatrix F2 = dense_qft(2);
  const double s = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(std::abs(F2(0, 0) - s), 0, 1e-15);
  EXPECT_NEAR(std::abs(F2(1, 1) + s), 0, 1e-15);

  const DenseMatrix F4 = dense_qft(4);
  const cplx want[4] = {0.5, cplx{0, 0.5}, -0.5, cplx{0, -0.5}};
  for (int j = 0; j < 4; ++j) EXPECT_NEAR(std::abs(F4(j, 1) - want[j]), 0, 1e-15);

  EXPECT_LT(unitarity_residual(dense_qft(3)), 1e-12);
  EXPECT_THROW(dense_qft(0), DomainError);
}

TEST(DenseQft, UnitaryAndFirstRow) {
  for (std::uint64_t N = 1; N <= 40; ++N) {
    const DenseMatrix F = dense_qft(N);
    EXPECT_LT(unitarity_residual(F), 1e-10) << N;
    for (std::uint64_t k = 0; k < N; ++k) {
      EXPECT_NEAR(std::abs(F(0, k) - 1.0 / std::sqrt(double(N))), 0, 1e-15);
    }
  }
}

TEST(DenseQft, ApplyMatchesMatrix) {
  Rng rng(1);
  for (std::size_t N : {5U, 12U, 13U}) {
    const auto s = random_state(N, rng);
    const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(s.amplitudes().data(), N);
    const Amplitudes want = ToVec(dense_qft(N) * v);
    const Amplitudes got = apply_dense_qft(s.span());
    EXPECT_LT(state_distance(got, want), 1e-12);
  }
}

TEST(ExactCircuit, SizeFormulaAndDepth) {
  for (unsigned n = 1; n <= 16; ++n) {
    const auto c = exact_qft_circuit(n);
    EXPECT_EQ(c.size(), n * (n + 1) / 2 + n / 2);
    EXPECT_LE(c.depth(), c.size());
    EXPECT_GE(c.depth(), 1U);
    EXPECT_EQ(c.counts().hadamard, n);
    EXPECT_EQ(c.counts().swap, n / 2);
    EXPECT_EQ(c.counts().elementary(), c.size() + 2 * (n / 2));
  }
  EXPECT_EQ(exact_qft_circuit(1).ops.size(), 1U);
  EXPECT_EQ(exact_qft_circuit(1).ops[0].kind, GateKind::H);
  EXPECT_EQ(exact_qft_circuit(3).size(), 7U);
  // Three qubits: H, R2, R3 | H, R2 | H | swap serializes to depth 6.
  EXPECT_EQ(exact_qft_circuit(3).depth(), 6U);
  EXPECT_THROW(exact_qft_circuit(0), DomainError);
}

TEST(ExactCircuit, MatchesDenseOnAllBasisStates) {
  for (unsigned n = 1; n <= 8; ++n) {
    const DenseMatrix diff = circuit_matrix(exact_qft_circuit(n)) - dense_qft(1ULL << n);
    EXPECT_LT(diff.cwiseAbs().maxCoeff(), 1e-9) << "n=" << n;
  }
}

TEST(ExactCircuit, RandomStateN8) {
  Rng rng(8);
  const auto s = random_state(256, rng);
  const auto got = apply_circuit(s, exact_qft_circuit(8));
  EXPECT_LT(state_distance(got.span(), apply_dense_qft(s.span())), 1e-9);
}

TEST(Afft, FullCutoffIsExact) {
  const auto a = afft_circuit({5, 5});
  const auto e = exact_qft_circuit(5);
  EXPECT_EQ(a.size(), e.size());
  EXPECT_EQ((circuit_matrix(a) - circuit_matrix(e)).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Afft, GateCountBound) {
  for (unsigned n = 1; n <= 12; ++n) {
    for (unsigned m = 1; m <= n; ++m) {
      const auto c = afft_circuit({n, m});
      EXPECT_LE(c.size(), n * m + n) << n << "," << m;
      // Rotations kept: pairs (a, b) with b - a + 1 <= m.
      std::size_t kept = 0;
      for (unsigned a = 0; a < n; ++a)
        for (unsigned b = a + 1; b < n; ++b) kept += (b - a + 1 <= m);
      EXPECT_EQ(c.counts().controlled_phase, kept);
    }
  }
  EXPECT_LE(afft_circuit({10, 4}).size(), 50U);
  EXPECT_THROW(afft_circuit({4, 5}), DomainError);
  EXPECT_THROW(afft_circuit({4, 0}), DomainError);
}

TEST(Afft, ErrorBoundOnRandomStates) {
  Rng rng(77);
  for (unsigned n = 1; n <= 8; ++n) {
    const DenseMatrix F = dense_qft(1ULL << n);
    for (unsigned m = 1; m <= n; ++m) {
      const ApproxQftParams p{n, m};
      const auto c = afft_circuit(p);
      double worst = 0;
      for (int t = 0; t < 20; ++t) {
        const auto s = random_state(1ULL << n, rng);
        const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(s.amplitudes().data(), s.dim());
        worst = std::max(worst, state_distance(apply_circuit(s, c).span(), ToVec(F * v)));
      }
      EXPECT_LE(worst, p.predicted_error()) << n << "," << m;
      if (m == n) {
        EXPECT_LT(worst, 1e-9);
      }
    }
  }
  EXPECT_NEAR(ApproxQftParams({8, 3}).predicted_error(), kTwoPi, 1e-15);
}

TEST(Coprime, Examples) {
  for (std::uint64_t N : {1U, 7U, 13U}) {
    EXPECT_LT((coprime_qft(1, N) - dense_qft(N)).cwiseAbs().maxCoeff(), 1e-12);
  }
  EXPECT_LT((coprime_qft(2, 3) - dense_qft(6)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((coprime_qft(4, 15) - dense_qft(60)).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_THROW(coprime_qft(4, 6), DomainError);
}

TEST(Coprime, AllPairsUpTo256) {
  for (std::uint64_t A = 1; A <= 256; ++A) {
    for (std::uint64_t B = 1; A * B <= 256; ++B) {
      if (std::gcd(A, B) != 1) continue;
      const double err = (coprime_qft(A, B) - dense_qft(A * B)).cwiseAbs().maxCoeff();
      EXPECT_LT(err, 1e-9) << A << "x" << B;
    }
  }
}

TEST(InverseMod, Basic) {
  EXPECT_EQ(inverse_mod(3, 7), 5);
  EXPECT_EQ(inverse_mod(-1, 10), 9);
  EXPECT_THROW(inverse_mod(4, 8), DomainError);
}

}  // namespace
}  // namespace hsp
