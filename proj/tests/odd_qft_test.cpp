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

#include "hsp/odd_qft.hpp"

#include <gtest/gtest.h>

#include <set>

namespace hsp {
namespace {

// Nearest integer to p/q (q > 0) by search, ties to the larger candidate.
std::int64_t NearestBySearch(std::int64_t p, std::int64_t q) {
  std::int64_t best = p / q - 2;
  for (std::int64_t c = p / q - 2; c <= p / q + 2; ++c) {
    const std::int64_t dc = std::abs(c * q - p), db = std::abs(best * q - p);
    if (dc < db || (dc == db && c > best)) best = c;
  }
  return best;
}

// Direct sum definition of A^i_k.
cplx ADirect(const OddQftPlan& p, std::int64_t i, std::int64_t k) {
  cplx acc{0, 0};
  for (std::int64_t a = 0; a < p.L * p.N; ++a) {
    acc += root_of_unity(p.N, mod(-a * i, p.N)) * root_of_unity(p.M, (a * k) % p.M);
  }
  return acc / std::sqrt(double(p.L) * double(p.M) * double(p.N));
}

TEST(Plan, FrozenValuesN13Eps1) {
  const auto p = plan_odd_qft(13, 1.0);
  EXPECT_EQ(p.L, 256);
  EXPECT_EQ(p.M, 65536);
  EXPECT_NEAR(p.c1, 71.0016251168, 1e-8);
  EXPECT_NEAR(p.c2, 1398.18584845, 1e-6);
  EXPECT_EQ(p.qubits, 18U);
  EXPECT_EQ(p.qubit_bound(), 19U);
  EXPECT_EQ(p.s_qubits, 4U);
  EXPECT_EQ(p.t_qubits, 14U);
}

// (N, eps) -> (L, M, qubits, bound), frozen from an independent evaluation
// of the window formulas.
TEST(Plan, FrozenGrid) {
  struct Row { std::int64_t N; double eps; std::int64_t L, M; unsigned q, bound; };
  const Row rows[] = {
      {13, 1.4, 128, 16384, 16, 17},  {13, 0.5, 1024, 524288, 21, 22},
      {15, 1.4, 256, 16384, 16, 17},  {15, 1.0, 256, 65536, 18, 19},
      {17, 1.0, 512, 65536, 18, 19},  {17, 0.5, 2048, 524288, 21, 22},
      {21, 1.4, 256, 32768, 17, 18},  {21, 0.5, 2048, 1048576, 22, 23},
      {55, std::sqrt(2.0), 256, 131072, 19, 20},
  };
  for (const auto& r : rows) {
    const auto p = plan_odd_qft(r.N, r.eps);
    EXPECT_EQ(p.L, r.L) << r.N << " " << r.eps;
    EXPECT_EQ(p.M, r.M) << r.N << " " << r.eps;
    EXPECT_EQ(p.qubits, r.q);
    EXPECT_EQ(p.qubit_bound(), r.bound);
    EXPECT_GE(p.c1, 65.0);
    EXPECT_LE(p.c1, 130.0);
    EXPECT_GE(p.c2, 735.0);
    EXPECT_LE(p.c2, 1470.0);
    EXPECT_EQ(p.alpha, p.beta + 1);
    EXPECT_GE(p.M, p.L * p.N);
    EXPECT_LE(p.distance_bound(), p.epsilon / std::sqrt(2.0) + 1e-12);
  }
}

TEST(Plan, ConstantsInRangeAcrossDomain) {
  for (std::int64_t N = 13; N <= 201; N += 2) {
    for (double eps : {0.3, 0.5, 0.8, 1.0, 1.2, std::sqrt(2.0)}) {
      const auto p = plan_odd_qft(N, eps);
      EXPECT_TRUE(p.c1 >= 65 && p.c1 <= 130 && p.c2 >= 735 && p.c2 <= 1470) << N << " " << eps;
      EXPECT_LE(p.qubits, p.qubit_bound());
      EXPECT_LE(p.distance_bound(), eps / std::sqrt(2.0) + 1e-12);
    }
  }
}

TEST(Plan, Errors) {
  EXPECT_THROW(plan_odd_qft(14, 1.0), DomainError);
  EXPECT_THROW(plan_odd_qft(11, 1.0), DomainError);
  EXPECT_THROW(plan_odd_qft(13, 0.0), DomainError);
  EXPECT_THROW(plan_odd_qft(13, 1.5), DomainError);
  EXPECT_NO_THROW(plan_odd_qft(13, std::sqrt(2.0)));
  EXPECT_THROW(plan_manual(15, 64, 512), DomainError);
  EXPECT_THROW(plan_manual(15, 60, 4096), DomainError);
  EXPECT_THROW(plan_manual(16, 64, 4096), DomainError);
}

TEST(Delta, SmallExamples) {
  const auto d = delta_map_build(32, 5);
  EXPECT_EQ(d.alpha(), 3);
  EXPECT_EQ(d.beta(), 2);
  std::set<std::pair<std::int64_t, std::int64_t>> img;
  for (std::int64_t k = 0; k < 32; ++k) img.insert({d.s(k), d.t(k)});
  EXPECT_EQ(img.size(), 32U);

  const DeltaMap d16(16, 5);
  EXPECT_EQ(d16.s(0), 0);
  EXPECT_EQ(d16.t(0), 0);
  EXPECT_THROW(DeltaMap(32, 6), DomainError);
  EXPECT_THROW(DeltaMap(15, 5), DomainError);
}

TEST(Delta, MatchesSearchOracle) {
  for (std::int64_t M : {64, 100, 256, 1024}) {
    for (std::int64_t N : {3, 7, 13, 21}) {
      if (std::gcd(M, N) != 1 || M <= 3 * N) continue;
      const DeltaMap d(M, N);
      for (std::int64_t k = 0; k < M; ++k) {
        const std::int64_t kp = NearestBySearch(k * N, M);
        EXPECT_EQ(d.t(k), k - NearestBySearch(kp * M, N));
        EXPECT_EQ(d.s(k), kp % N);
      }
    }
  }
}

TEST(Delta, TieRoundsUp) {
  // 16 * 5 / 32 = 2.5 rounds to 3, so t = 16 - round(3 * 32 / 5) = 16 - 19.
  const DeltaMap d(32, 5);
  EXPECT_EQ(d.s(16), 3);
  EXPECT_EQ(d.t(16), -3);
}

TEST(Delta, ExhaustiveInvariants) {
  for (std::int64_t M = 2; M <= 4096; M *= 2) {
    for (std::int64_t N = 1; N <= 99; N += 2) {
      if (M <= 3 * N) continue;
      const auto inv = DeltaMap(M, N).check();
      ASSERT_TRUE(inv.all()) << "M=" << M << " N=" << N;
    }
  }
}

TEST(Delta, IntervalsLargeM) {
  const DeltaMap d(65536, 13);
  const auto inv = d.check();
  EXPECT_TRUE(inv.intervals_disjoint);
  EXPECT_TRUE(inv.intervals_equicardinal);
  EXPECT_EQ(d.interval_size(), 2 * ((65536 - 13) / 26) + 1);
}

TEST(Delta, CSetSandwich) {
  const DeltaMap d(1024, 13);
  for (std::int64_t s = 0; s < 13; ++s) {
    const auto c = d.c_set(s);
    EXPECT_GE(c.front(), -d.alpha());
    EXPECT_LE(c.back(), d.alpha());
    for (std::int64_t t = -d.beta(); t <= d.beta(); ++t) {
      EXPECT_TRUE(std::binary_search(c.begin(), c.end(), t));
    }
  }
}

TEST(Delta, ShiftedIntervalMapsToRegisterI) {
  // Delta(b + i') = (i, b) for every offset b of (0).
  const DeltaMap d(4096, 21);
  for (std::int64_t i = 0; i < 21; ++i) {
    for (std::int64_t b = -d.half_width(); b <= d.half_width(); ++b) {
      const std::int64_t k = mod(b + d.center(i), d.M());
      EXPECT_EQ(d.s(k), i);
      EXPECT_EQ(d.t(k), b);
    }
  }
}

TEST(Delta, Sawtooth) {
  EXPECT_EQ(sawtooth(0, 10), 0);
  EXPECT_EQ(sawtooth(5, 10), 5);
  EXPECT_EQ(sawtooth(6, 10), 4);
  EXPECT_EQ(sawtooth(-3, 10), 3);
  EXPECT_EQ(sawtooth(23, 10), 3);
}

TEST(Coefficients, ClosedFormMatchesDirectSum) {
  const auto p = plan_manual(13, 16, 1024);
  for (std::int64_t i : {0, 1, 6, 12}) {
    for (std::int64_t k : {0, 1, 78, 79, 500, 1023}) {
      EXPECT_LT(std::abs(a_coefficient(p, i, k) - ADirect(p, i, k)), 1e-11) << i << "," << k;
    }
  }
}

TEST(Diagnostics, VectorsAndSupports) {
  const auto p = plan_manual(13, 16, 1024);
  const auto dg = odd_qft_diagnostics(p);
  const auto& d = dg.delta();
  EXPECT_EQ(dg.bump_shift_error(0), 0.0);
  std::vector<int> owner(p.M, -1);
  for (std::int64_t i = 0; i < p.N; ++i) {
    const auto A = dg.A_vector(i), B = dg.B_vector(i), T = dg.T_vector(i), S = dg.S_vector(i);
    double na = 0;
    for (std::int64_t k = 0; k < p.M; ++k) {
      EXPECT_EQ(A[k], B[k] + T[k]);
      const bool inside = d.in_interval(i, k);
      EXPECT_TRUE(inside || B[k] == cplx(0, 0));
      EXPECT_EQ(S[k] != cplx(0, 0), inside);
      if (S[k] != cplx(0, 0)) {
        EXPECT_EQ(owner[k], -1);
        owner[k] = static_cast<int>(i);
      }
      na += std::norm(A[k]);
    }
    EXPECT_NEAR(na, 1.0, 1e-9);  // F_M F_LN^{-1} is an isometry on |Li>
  }
  const double bound = p.bump_bound();
  EXPECT_NEAR(bound, 0.3684, 1e-4);
  for (double e : dg.bump_shift_errors()) EXPECT_LE(e, bound);
}

TEST(Diagnostics, TailBoundOnRandomInputs) {
  Rng rng(404);
  for (const auto& p : {plan_manual(13, 16, 1024), plan_manual(15, 32, 4096), plan_odd_qft(13, 1.4)}) {
    const auto dg = odd_qft_diagnostics(p);
    for (int trial = 0; trial < 3; ++trial) {
      const auto u = random_state(p.N, rng);
      const Amplitudes uhat = apply_dense_qft(u.span());
      EXPECT_LE(dg.tail_norm(uhat), p.tail_bound());
    }
  }
}

TEST(Diagnostics, CapabilityLimit) {
  EXPECT_THROW(odd_qft_diagnostics(plan_manual(13, 16, std::int64_t{1} << 21)), CapabilityError);
}

// The whole pipeline against sum_i uhat_i A^i relabelled through Delta.
TEST(Run, MatchesCoefficientOracle) {
  const auto p = plan_manual(13, 16, 1024);
  Rng rng(9);
  const auto u = random_state(13, rng);
  const auto v = run_odd_qft(u, p);
  ASSERT_EQ(v.dim(), std::size_t{1} << p.qubits);
  const Amplitudes uhat = apply_dense_qft(u.span());
  const DeltaMap d(p.M, p.N);
  std::vector<char> hit(v.dim(), 0);
  for (std::int64_t k = 0; k < p.M; ++k) {
    cplx want{0, 0};
    for (std::int64_t i = 0; i < p.N; ++i) want += uhat[i] * a_coefficient(p, i, k);
    const auto idx = d.encode(k, p.t_qubits);
    hit[idx] = 1;
    EXPECT_LT(std::abs(v[idx] - want), 1e-10);
  }
  for (std::size_t x = 0; x < v.dim(); ++x) {
    if (!hit[x]) {
      EXPECT_EQ(v[x], cplx(0, 0));
    }
  }
}

TEST(Run, DistanceToUnnormalizedLambdaVector) {
  Rng rng(12);
  for (const auto& p : {plan_manual(13, 16, 1024), plan_manual(13, 32, 8192), plan_manual(17, 16, 4096)}) {
    const OddQftProgram prog(p);
    const auto dg = odd_qft_diagnostics(p);
    const Amplitudes psi = dg.psi_unnormalized();
    for (int trial = 0; trial < 3; ++trial) {
      const auto u = random_state(p.N, rng);
      const auto v = prog.run(u);
      const Amplitudes uhat = apply_dense_qft(u.span());
      const double dist = detail::tensor_residual(v.span(), uhat, psi, p.t_qubits);
      EXPECT_LE(dist, p.distance_bound()) << p.N << " " << p.L << " " << p.M;
    }
  }
}

TEST(Run, N13Eps1BasisAndRandom) {
  const auto p = plan_odd_qft(13, 1.0);
  const OddQftProgram prog(p);
  const auto u0 = basis_state(13, 0);
  const auto r0 = odd_qft_residuals(prog.run(u0), u0, p);
  EXPECT_LE(r0.optimal, 1.0);
  EXPECT_LE(r0.optimal, r0.lambda + 1e-12);
  Rng rng(1);
  const auto u = random_state(13, rng);
  const auto r = odd_qft_residuals(prog.run(u), u, p);
  EXPECT_LE(r.optimal, 1.0);
  EXPECT_LE(r.lambda, 1.0);
  EXPECT_LE(r.tv, 3.0);
  EXPECT_LE(r.tv, 2 * r.best() + r.best() * r.best() + 1e-12);
}

TEST(Run, ManualN15InvariantsOnly) {
  const auto p = plan_manual(15, 64, 4096);
  EXPECT_TRUE(delta_map_build(p.M, p.N).check().all());
  Rng rng(15);
  const auto u = random_state(15, rng);
  const auto v = run_odd_qft(u, p);
  EXPECT_NEAR(v.norm(), 1.0, 1e-9);
}

TEST(Run, AfftSubstitution) {
  const auto p = plan_manual(13, 16, 1024);
  const OddQftProgram exact(p), approx(p, 10U), rough(p, 4U);
  Rng rng(5);
  const auto u = random_state(13, rng);
  const auto ve = exact.run(u);
  EXPECT_LT(state_distance(ve, approx.run(u)), 1e-12);
  const double afft_err = ApproxQftParams{10, 4}.predicted_error();
  EXPECT_LE(state_distance(ve, rough.run(u)), afft_err);
  EXPECT_LT(rough.fm_circuit().size(), exact.fm_circuit().size());
}

TEST(Run, DimensionMismatch) {
  EXPECT_THROW(run_odd_qft(basis_state(8, 0), plan_manual(13, 16, 1024)), DomainError);
}

// ||a - b/||b|| || <= eps sqrt 2 when ||a - b|| = eps <= 1.
TEST(UnitTriangle, Property) {
  Rng rng(10000);
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t dim = 2 + trial % 7;
    const auto a = random_state(dim, rng);
    Amplitudes dir(dim);
    double dn = 0;
    for (auto& x : dir) {
      x = cplx{standard_normal(rng), standard_normal(rng)};
      dn += std::norm(x);
    }
    const double eps = uniform01(rng);
    Amplitudes b(dim);
    for (std::size_t i = 0; i < dim; ++i) b[i] = a[i] + eps * dir[i] / std::sqrt(dn);
    if (eps == 0.0) continue;
    const auto bn = StateVector::normalized(b);
    EXPECT_LE(state_distance(a, bn), eps * std::sqrt(2.0) + 1e-12);
  }
}

}  // namespace
}  // namespace hsp
