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

#include "hsp/statevec.hpp"

#include <gtest/gtest.h>

#include <map>

namespace hsp {
namespace {

const double kRt2 = 1.0 / std::sqrt(2.0);

void ExpectAmps(const StateVector& s, const Amplitudes& want, double tol = 1e-12) {
  ASSERT_EQ(s.dim(), want.size());
  for (std::size_t i = 0; i < want.size(); ++i) {
    EXPECT_NEAR(std::abs(s[i] - want[i]), 0.0, tol) << "index " << i;
  }
}

// Gate oracle: build the full 2^n matrix column by column from the local
// unitary, independent of the strided kernels.
Amplitudes ExpandGate(const GateSpec& g, unsigned n) {
  const std::size_t dim = std::size_t{1} << n;
  const Amplitudes u = g.unitary();
  const std::size_t d = g.local_dim();
  const std::size_t m = g.targets.size();
  auto local_of = [&](std::size_t idx) {
    std::size_t x = 0;
    for (std::size_t i = 0; i < m; ++i) {
      x = (x << 1) | ((idx >> (n - 1 - g.targets[i])) & 1U);
    }
    return x;
  };
  auto with_local = [&](std::size_t idx, std::size_t x) {
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t b = std::size_t{1} << (n - 1 - g.targets[i]);
      const bool on = (x >> (m - 1 - i)) & 1U;
      idx = on ? (idx | b) : (idx & ~b);
    }
    return idx;
  };
  Amplitudes full(dim * dim, cplx{0, 0});
  for (std::size_t col = 0; col < dim; ++col) {
    const std::size_t x = local_of(col);
    for (std::size_t y = 0; y < d; ++y) {
      full[with_local(col, y) * dim + col] += u[y * d + x];
    }
  }
  return full;
}

Amplitudes MatVec(const Amplitudes& m, const Amplitudes& v) {
  const std::size_t d = v.size();
  Amplitudes out(d, cplx{0, 0});
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) out[r] += m[r * d + c] * v[c];
  }
  return out;
}

std::vector<GateSpec> SampleGates() {
  return {GateSpec::hadamard(1),
          GateSpec::cnot(2, 0),
          GateSpec::ccnot(0, 2, 1),
          GateSpec::phase(2),
          GateSpec::rk(3, 0, 2),
          GateSpec::swap(0, 2),
          GateSpec::permutation_of_basis({2, 0}, {2, 0, 3, 1})};
}

TEST(BasisState, Examples) {
  ExpectAmps(basis_state(2, 0), {1, 0});
  ExpectAmps(basis_state(4, 1), {0, 1, 0, 0});
  ExpectAmps(basis_state(8, 7), {0, 0, 0, 0, 0, 0, 0, 1});
  EXPECT_THROW(basis_state(4, 4), DomainError);
  EXPECT_THROW(basis_state(0, 0), DomainError);
}

TEST(StateVectorTest, RejectsUnnormalized) {
  EXPECT_THROW(StateVector(Amplitudes{1, 1}), DomainError);
  EXPECT_THROW(StateVector(Amplitudes{}), DomainError);
  EXPECT_NO_THROW(StateVector(Amplitudes{kRt2, kRt2}));
}

TEST(Tensor, Examples) {
  ExpectAmps(tensor(basis_state(2, 0), basis_state(2, 1)), {0, 1, 0, 0});
  const StateVector plus({kRt2, kRt2});
  const StateVector minus({kRt2, -kRt2});
  ExpectAmps(tensor(plus, minus), {0.5, -0.5, 0.5, -0.5});
  Rng rng(5);
  const StateVector a = random_state(3, rng);
  ExpectAmps(tensor(a, basis_state(1, 0)), a.amplitudes(), 0.0);
  ExpectAmps(tensor(basis_state(1, 0), a), a.amplitudes(), 0.0);
}

TEST(Tensor, AssociativeExactly) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_state(2 + trial % 3, rng);
    const auto b = random_state(3, rng);
    const auto c = random_state(1 + trial % 4, rng);
    // Renormalization can differ in the last ulp, so compare raw products.
    const auto& A = a.amplitudes();
    const auto& B = b.amplitudes();
    const auto& C = c.amplitudes();
    for (std::size_t p = 0; p < A.size(); ++p)
      for (std::size_t q = 0; q < B.size(); ++q)
        for (std::size_t r = 0; r < C.size(); ++r) {
          const std::size_t idx = (p * B.size() + q) * C.size() + r;
          EXPECT_EQ(idx, p * (B.size() * C.size()) + (q * C.size() + r));
        }
    EXPECT_LT(state_distance(tensor(tensor(a, b), c), tensor(a, tensor(b, c))), 1e-15);
  }
}

TEST(ApplyGate, Examples) {
  const auto l1 = RegisterLayout::single(1);
  ExpectAmps(apply_gate(basis_state(2, 0), GateSpec::hadamard(0), l1), {kRt2, kRt2});
  const auto l2 = RegisterLayout::single(2);
  ExpectAmps(apply_gate(basis_state(4, 2), GateSpec::cnot(0, 1), l2), {0, 0, 0, 1});
  Rng rng(3);
  const auto s = random_state(8, rng);
  Amplitudes id(64, cplx{0, 0});
  for (int i = 0; i < 8; ++i) id[i * 8 + i] = 1;
  ExpectAmps(apply_gate(s, GateSpec::dense({2, 0, 1}, id), RegisterLayout::single(3)),
             s.amplitudes());
}

TEST(ApplyGate, TargetCollisionAndRange) {
  const auto l2 = RegisterLayout::single(2);
  EXPECT_THROW(apply_gate(basis_state(4, 0), GateSpec::cnot(1, 1), l2), DomainError);
  EXPECT_THROW(apply_gate(basis_state(4, 0), GateSpec::hadamard(2), l2), DomainError);
  EXPECT_THROW(apply_gate(basis_state(3, 0), GateSpec::hadamard(0), l2), DomainError);
}

TEST(GateSpecTest, AllKindsUnitary) {
  for (const auto& g : SampleGates()) {
    EXPECT_LT(unitarity_residual(g.unitary(), g.local_dim()), kUnitaryTolerance);
  }
}

TEST(GateSpecTest, PhaseGateAngle) {
  const Amplitudes u = GateSpec::phase(0).unitary();
  const cplx ratio = u[0] / u[3];
  EXPECT_NEAR(ratio.real(), 0.6, 1e-15);
  EXPECT_NEAR(ratio.imag(), 0.8, 1e-15);
}

TEST(ApplyGate, MatchesExpandedMatrix) {
  Rng rng(21);
  for (const auto& g : SampleGates()) {
    const auto s = random_state(8, rng);
    const auto got = apply_gate(s, g, RegisterLayout::single(3));
    const Amplitudes want = MatVec(ExpandGate(g, 3), s.amplitudes());
    ExpectAmps(got, want, 1e-12);
  }
}

TEST(ApplyGate, NormPreservedAndDenseRoundTrip) {
  Rng rng(99);
  for (int trial = 0; trial < 200; ++trial) {
    const unsigned n = 1 + trial % 5;
    const unsigned m = 1 + trial % std::min(n, 3U);
    std::vector<unsigned> targets(n);
    std::iota(targets.begin(), targets.end(), 0U);
    for (unsigned i = n; i > 1; --i) std::swap(targets[i - 1], targets[uniform_below(rng, i)]);
    targets.resize(m);
    // Random unitary from Gram-Schmidt on a Gaussian matrix.
    const std::size_t d = std::size_t{1} << m;
    Amplitudes u(d * d);
    for (std::size_t r = 0; r < d; ++r) {
      for (std::size_t c = 0; c < d; ++c) u[r * d + c] = cplx{standard_normal(rng), standard_normal(rng)};
      for (std::size_t p = 0; p < r; ++p) {
        cplx dot{0, 0};
        for (std::size_t c = 0; c < d; ++c) dot += std::conj(u[p * d + c]) * u[r * d + c];
        for (std::size_t c = 0; c < d; ++c) u[r * d + c] -= dot * u[p * d + c];
      }
      double nrm = 0;
      for (std::size_t c = 0; c < d; ++c) nrm += std::norm(u[r * d + c]);
      for (std::size_t c = 0; c < d; ++c) u[r * d + c] /= std::sqrt(nrm);
    }
    Amplitudes udag(d * d);
    for (std::size_t r = 0; r < d; ++r)
      for (std::size_t c = 0; c < d; ++c) udag[r * d + c] = std::conj(u[c * d + r]);
    const auto layout = RegisterLayout::single(n);
    const auto s = random_state(std::size_t{1} << n, rng);
    const auto fwd = apply_gate(s, GateSpec::dense(targets, u), layout);
    Amplitudes raw = s.amplitudes();
    apply_gate_inplace(raw, n, GateSpec::dense(targets, u));
    double nrm = 0;
    for (const auto& a : raw) nrm += std::norm(a);
    EXPECT_NEAR(std::sqrt(nrm), 1.0, kNormTolerance);
    const auto back = apply_gate(fwd, GateSpec::dense(targets, udag), layout);
    EXPECT_LT(state_distance(back, s), 1e-9);
  }
}

TEST(RegisterLayoutTest, Validation) {
  EXPECT_THROW(RegisterLayout({{"a", 0, 2}, {"b", 1, 2}}), DomainError);
  EXPECT_THROW(RegisterLayout({{"a", 0, 2}, {"b", 3, 1}}), DomainError);
  EXPECT_THROW(RegisterLayout({{"a", 0, 2}, {"a", 2, 1}}), DomainError);
  const RegisterLayout l({{"b", 2, 1}, {"a", 0, 2}});
  EXPECT_EQ(l.total_qubits(), 3U);
  EXPECT_EQ(l.value(l.find("a"), 0b110), 3U);
  EXPECT_EQ(l.value(l.find("b"), 0b110), 0U);
  EXPECT_THROW(l.find("c"), DomainError);
}

TEST(Measure, Examples) {
  const auto l1 = RegisterLayout::single(1);
  const StateVector plus({kRt2, kRt2});
  bool saw[2] = {false, false};
  for (std::uint64_t seed = 0; seed < 64; ++seed) {
    const auto rec = measure(plus, l1, "q", seed);
    EXPECT_NEAR(rec.probability, 0.5, 1e-12);
    ExpectAmps(rec.post_state, rec.outcome == 0 ? Amplitudes{1, 0} : Amplitudes{0, 1});
    saw[rec.outcome] = true;
  }
  EXPECT_TRUE(saw[0] && saw[1]);

  const auto rec = measure(basis_state(8, 5), RegisterLayout::single(3), "q", 1);
  EXPECT_EQ(rec.outcome, 5U);
  EXPECT_DOUBLE_EQ(rec.probability, 1.0);

  const StateVector bell({kRt2, 0, 0, kRt2});
  const auto split = RegisterLayout::sequential({{"a", 1}, {"b", 1}});
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    const auto r = measure(bell, split, "a", seed);
    EXPECT_NEAR(r.probability, 0.5, 1e-12);
    ExpectAmps(r.post_state, r.outcome == 0 ? Amplitudes{1, 0, 0, 0} : Amplitudes{0, 0, 0, 1});
  }
}

TEST(Measure, InverseCdfTiesGoLow) {
  const std::vector<double> p = {0.25, 0.25, 0.0, 0.5};
  EXPECT_EQ(sample_index(p, 0.0), 0U);
  EXPECT_EQ(sample_index(p, 0.25), 1U);
  EXPECT_EQ(sample_index(p, 0.5), 3U);
  EXPECT_EQ(sample_index(p, 0.999), 3U);
}

TEST(Measure, CompletenessAndPostState) {
  Rng rng(8);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = random_state(16, rng);
    const auto layout = RegisterLayout::sequential({{"x", 3}, {"y", 1}});
    double total = 0;
    std::map<std::size_t, double> seen;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto r = measure(s, layout, "x", seed);
      seen[r.outcome] = r.probability;
      EXPECT_NEAR(r.post_state.norm(), 1.0, kNormTolerance);
    }
    // Completeness from exact marginals.
    std::vector<double> marg(8, 0.0);
    for (std::size_t i = 0; i < 16; ++i) marg[i >> 1] += std::norm(s[i]);
    for (double m : marg) total += m;
    EXPECT_NEAR(total, 1.0, 1e-9);
    for (const auto& [o, p] : seen) EXPECT_NEAR(p, marg[o], 1e-12);
  }
}

TEST(Measure, DisjointRegistersCommuteInDistribution) {
  Rng rng(31);
  const auto layout = RegisterLayout::sequential({{"a", 2}, {"b", 2}});
  for (int trial = 0; trial < 20; ++trial) {
    const auto s = random_state(16, rng);
    std::map<std::pair<std::size_t, std::size_t>, double> ab, ba;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      const auto ra = measure(s, layout, "a", seed);
      const auto rab = measure(ra.post_state, layout, "b", seed + 1000);
      ab[{ra.outcome, rab.outcome}] = ra.probability * rab.probability;
      const auto rb = measure(s, layout, "b", seed + 2000);
      const auto rba = measure(rb.post_state, layout, "a", seed + 3000);
      ba[{rba.outcome, rb.outcome}] = rb.probability * rba.probability;
    }
    int shared = 0;
    for (const auto& [key, p] : ab) {
      EXPECT_NEAR(p, std::norm(s[key.first * 4 + key.second]), 1e-12);
      if (auto it = ba.find(key); it != ba.end()) {
        EXPECT_NEAR(p, it->second, 1e-12);
        ++shared;
      }
    }
    EXPECT_GT(shared, 0);
  }
}

TEST(Distance, Examples) {
  Rng rng(2);
  const auto a = random_state(5, rng);
  EXPECT_EQ(state_distance(a, a), 0.0);
  EXPECT_NEAR(state_distance(basis_state(2, 0), basis_state(2, 1)), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(state_distance(basis_state(2, 0), StateVector({kRt2, kRt2})),
              std::sqrt(2.0 - std::sqrt(2.0)), 1e-15);
  EXPECT_THROW(state_distance(basis_state(2, 0), basis_state(3, 0)), DomainError);
}

TEST(TotalVariation, Examples) {
  Rng rng(4);
  const auto a = random_state(6, rng);
  EXPECT_EQ(total_variation(a, a), 0.0);
  EXPECT_NEAR(total_variation(basis_state(2, 0), basis_state(2, 1)), 2.0, 1e-15);
  EXPECT_THROW(total_variation(basis_state(2, 0), basis_state(4, 0)), DomainError);
}

// TV <= 2 eps + eps^2 where eps = ||a - b||, for nearby and far pairs.
TEST(TotalVariation, DistanceInequalityProperty) {
  Rng rng(2024);
  for (std::size_t dim : {2U, 4U, 8U, 16U}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const auto a = random_state(dim, rng);
      Amplitudes b = a.amplitudes();
      const double scale = (trial % 2 == 0) ? 0.05 : 1.0;
      for (auto& x : b) x += scale * cplx{standard_normal(rng), standard_normal(rng)};
      const auto bs = StateVector::normalized(b);
      const double eps = state_distance(a, bs);
      EXPECT_LE(total_variation(a, bs), 2 * eps + eps * eps + 1e-12);
    }
  }
}

TEST(TotalVariation, SpecExampleAtDistanceOneTenth) {
  // b = cos(t)|0> + sin(t)|1> against |0>, with ||a - b|| = 0.1 exactly.
  const double t = 2 * std::asin(0.05);
  const StateVector a = basis_state(2, 0);
  const StateVector b({std::cos(t), std::sin(t)});
  EXPECT_NEAR(state_distance(a, b), 0.1, 1e-12);
  EXPECT_LE(total_variation(a, b), 0.21);
}

TEST(Json, RoundTrip) {
  Rng rng(6);
  const auto a = random_state(4, rng);
  const auto j = to_json(a);
  EXPECT_EQ(j.at("dim").get<int>(), 4);
  EXPECT_EQ(j.at("amps").size(), 4U);
  EXPECT_EQ(state_distance(state_from_json(j), a), 0.0);
}

}  // namespace
}  // namespace hsp
