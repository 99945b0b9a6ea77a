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

// Dense state-vector engine.
//
// Qubit ordering follows ket notation: in an n-qubit state, qubit 0 is the
// leftmost (most significant) bit of the basis index and qubit n-1 the
// rightmost. A register covering qubits [first, first+count) therefore
// reads its value from a contiguous bit field, and tensor(a, b) places a in
// the high qubits.

#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hsp/common.hpp"
#include "json.hpp"

namespace hsp {

class StateVector {
 public:
  /// |0> of a one-dimensional space.
  StateVector() : amps_{cplx{1.0, 0.0}} {}

  /// Takes ownership of `amps`; throws DomainError unless dim >= 1 and the
  /// vector has unit norm within kNormTolerance.
  explicit StateVector(Amplitudes amps) : amps_(std::move(amps)) {
    if (amps_.empty()) throw DomainError("StateVector: dimension must be >= 1");
    const double n = norm();
    if (std::abs(n - 1.0) > kNormTolerance) {
      throw DomainError("StateVector: amplitudes not normalized (norm = " +
                        std::to_string(n) + ")");
    }
  }

  /// Scales `amps` to unit norm. Throws on a zero vector.
  static StateVector normalized(Amplitudes amps) {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    if (amps.empty() || s == 0.0) {
      throw DomainError("StateVector::normalized: zero vector");
    }
    const double inv = 1.0 / std::sqrt(s);
    for (auto& a : amps) a *= inv;
    return StateVector(std::move(amps));
  }

  std::size_t dim() const { return amps_.size(); }
  unsigned qubit_count() const { return ceil_log2(amps_.size()); }
  bool qubit_addressable() const { return is_power_of_two(amps_.size()); }

  const Amplitudes& amplitudes() const { return amps_; }
  std::span<const cplx> span() const { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[i]; }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  std::vector<double> probabilities() const {
    std::vector<double> p(amps_.size());
    for (std::size_t i = 0; i < amps_.size(); ++i) p[i] = std::norm(amps_[i]);
    return p;
  }

 private:
  Amplitudes amps_;
};

enum class GateKind { H, CNOT, CCNOT, P, Rk, Swap, Permutation, Dense };

/// An elementary operation on an ordered list of target qubits. The gate's
/// local basis index takes targets[0] as its most significant bit, so
/// CNOT with targets {c, t} uses c as control.
struct GateSpec {
  GateKind kind = GateKind::H;
  std::vector<unsigned> targets;
  int k = 0;                            // Rk only
  std::vector<std::size_t> permutation; // Permutation: local |x> -> |perm[x]>
  Amplitudes matrix;                    // Dense: row-major 2^m x 2^m

  static GateSpec of(GateKind kind, std::vector<unsigned> targets) {
    GateSpec g;
    g.kind = kind;
    g.targets = std::move(targets);
    return g;
  }

  static GateSpec hadamard(unsigned q) { return of(GateKind::H, {q}); }
  static GateSpec cnot(unsigned control, unsigned target) {
    return of(GateKind::CNOT, {control, target});
  }
  static GateSpec ccnot(unsigned c1, unsigned c2, unsigned target) {
    return of(GateKind::CCNOT, {c1, c2, target});
  }
  static GateSpec phase(unsigned q) { return of(GateKind::P, {q}); }
  /// Controlled phase: multiplies |11> on (control, target) by exp(2 pi i / 2^k).
  static GateSpec rk(int k, unsigned control, unsigned target) {
    GateSpec g = of(GateKind::Rk, {control, target});
    g.k = k;
    return g;
  }
  static GateSpec swap(unsigned a, unsigned b) { return of(GateKind::Swap, {a, b}); }
  static GateSpec permutation_of_basis(std::vector<unsigned> targets,
                                       std::vector<std::size_t> perm) {
    GateSpec g = of(GateKind::Permutation, std::move(targets));
    g.permutation = std::move(perm);
    return g;
  }
  static GateSpec dense(std::vector<unsigned> targets, Amplitudes m) {
    GateSpec g = of(GateKind::Dense, std::move(targets));
    g.matrix = std::move(m);
    return g;
  }

  std::size_t local_dim() const { return std::size_t{1} << targets.size(); }

  /// Explicit row-major unitary of the gate on its targets.
  Amplitudes unitary() const {
    const std::size_t d = local_dim();
    Amplitudes u(d * d, cplx{0.0, 0.0});
    auto at = [&](std::size_t r, std::size_t c) -> cplx& { return u[r * d + c]; };
    switch (kind) {
      case GateKind::H: {
        const double s = 1.0 / std::sqrt(2.0);
        at(0, 0) = s; at(0, 1) = s; at(1, 0) = s; at(1, 1) = -s;
        break;
      }
      case GateKind::CNOT:
        at(0, 0) = 1; at(1, 1) = 1; at(2, 3) = 1; at(3, 2) = 1;
        break;
      case GateKind::CCNOT:
        for (std::size_t i = 0; i < 6; ++i) at(i, i) = 1;
        at(6, 7) = 1; at(7, 6) = 1;
        break;
      case GateKind::P: {
        // cos(theta) = 3/5, sin(theta) = 4/5; half-angle phases e^{+-i theta/2}.
        const double c = std::sqrt((1.0 + 0.6) / 2.0);
        const double s = std::sqrt((1.0 - 0.6) / 2.0);
        at(0, 0) = cplx{c, s};
        at(1, 1) = cplx{c, -s};
        break;
      }
      case GateKind::Rk:
        at(0, 0) = 1; at(1, 1) = 1; at(2, 2) = 1;
        at(3, 3) = std::polar(1.0, kTwoPi / std::ldexp(1.0, k));
        break;
      case GateKind::Swap:
        at(0, 0) = 1; at(1, 2) = 1; at(2, 1) = 1; at(3, 3) = 1;
        break;
      case GateKind::Permutation:
        for (std::size_t x = 0; x < d; ++x) at(permutation.at(x), x) = 1;
        break;
      case GateKind::Dense:
        if (matrix.size() != d * d) {
          throw DomainError("GateSpec: dense matrix size does not match targets");
        }
        u = matrix;
        break;
    }
    return u;
  }
};

/// max_ij |(U U^dagger - I)_ij| for a row-major d x d matrix.
inline double unitarity_residual(const Amplitudes& u, std::size_t d) {
  double worst = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      cplx s{0.0, 0.0};
      for (std::size_t k = 0; k < d; ++k) s += u[i * d + k] * std::conj(u[j * d + k]);
      if (i == j) s -= 1.0;
      worst = std::max(worst, std::abs(s));
    }
  }
  return worst;
}

struct Register {
  std::string name;
  unsigned first = 0;
  unsigned count = 0;
};

/// Named, disjoint qubit ranges covering the whole machine.
class RegisterLayout {
 public:
  RegisterLayout() = default;

  explicit RegisterLayout(std::vector<Register> regs) : regs_(std::move(regs)) {
    std::vector<std::pair<unsigned, unsigned>> spans;
    for (const auto& r : regs_) {
      if (r.count == 0) throw DomainError("RegisterLayout: empty register " + r.name);
      spans.emplace_back(r.first, r.first + r.count);
      for (const auto& other : regs_) {
        if (&other != &r && other.name == r.name) {
          throw DomainError("RegisterLayout: duplicate register name " + r.name);
        }
      }
    }
    std::sort(spans.begin(), spans.end());
    unsigned next = 0;
    for (const auto& [lo, hi] : spans) {
      if (lo != next) throw DomainError("RegisterLayout: registers overlap or leave a gap");
      next = hi;
    }
    total_ = next;
  }

  /// One register named "q" over n qubits.
  static RegisterLayout single(unsigned n, std::string name = "q") {
    return RegisterLayout({Register{std::move(name), 0, n}});
  }

  /// Consecutive registers in the given order.
  static RegisterLayout sequential(
      const std::vector<std::pair<std::string, unsigned>>& sizes) {
    std::vector<Register> regs;
    unsigned at = 0;
    for (const auto& [name, count] : sizes) {
      regs.push_back(Register{name, at, count});
      at += count;
    }
    return RegisterLayout(std::move(regs));
  }

  unsigned total_qubits() const { return total_; }
  const std::vector<Register>& registers() const { return regs_; }

  const Register& find(const std::string& name) const {
    for (const auto& r : regs_) {
      if (r.name == name) return r;
    }
    throw DomainError("RegisterLayout: no register named " + name);
  }

  /// Value held by register `r` in basis state `index`.
  std::size_t value(const Register& r, std::size_t index) const {
    const unsigned shift = total_ - r.first - r.count;
    return (index >> shift) & ((std::size_t{1} << r.count) - 1);
  }

 private:
  std::vector<Register> regs_;
  unsigned total_ = 0;
};

namespace detail {

/// Spreads the bits of `r` over the positions not listed in `zero_positions`
/// (ascending), leaving zeros at the listed positions.
inline std::size_t insert_zero_bits(std::size_t r,
                                    std::span<const unsigned> zero_positions) {
  for (unsigned p : zero_positions) {
    const std::size_t low = r & ((std::size_t{1} << p) - 1);
    r = ((r >> p) << (p + 1)) | low;
  }
  return r;
}

}  // namespace detail

/// Applies `gate` in place to amplitudes of an n-qubit register.
/// `amps.size()` must be 2^n.
inline void apply_gate_inplace(std::span<cplx> amps, unsigned n, const GateSpec& gate) {
  const std::size_t dim = amps.size();
  if (dim != (std::size_t{1} << n)) {
    throw DomainError("apply_gate: qubit-addressed gates need a 2^n dimensional state");
  }
  const std::size_t m = gate.targets.size();
  std::vector<unsigned> pos(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (gate.targets[i] >= n) throw DomainError("apply_gate: target outside layout");
    pos[i] = n - 1 - gate.targets[i];
  }
  std::sort(pos.begin(), pos.end());
  if (std::adjacent_find(pos.begin(), pos.end()) != pos.end()) {
    throw DomainError("apply_gate: target collision");
  }
  std::vector<std::size_t> bit(m);
  for (std::size_t i = 0; i < m; ++i) bit[i] = std::size_t{1} << (n - 1 - gate.targets[i]);
  const std::size_t groups = dim >> m;

  switch (gate.kind) {
    case GateKind::H: {
      const double s = 1.0 / std::sqrt(2.0);
      const std::size_t b = bit[0];
      for (std::size_t r = 0; r < groups; ++r) {
        const std::size_t i0 = detail::insert_zero_bits(r, pos);
        const cplx a0 = amps[i0], a1 = amps[i0 | b];
        amps[i0] = s * (a0 + a1);
        amps[i0 | b] = s * (a0 - a1);
      }
      return;
    }
    case GateKind::Rk: {
      const cplx w = std::polar(1.0, kTwoPi / std::ldexp(1.0, gate.k));
      const std::size_t both = bit[0] | bit[1];
      for (std::size_t r = 0; r < groups; ++r) {
        amps[detail::insert_zero_bits(r, pos) | both] *= w;
      }
      return;
    }
    case GateKind::Swap: {
      for (std::size_t r = 0; r < groups; ++r) {
        const std::size_t i0 = detail::insert_zero_bits(r, pos);
        std::swap(amps[i0 | bit[0]], amps[i0 | bit[1]]);
      }
      return;
    }
    default:
      break;
  }

  const Amplitudes u = gate.unitary();
  const std::size_t d = gate.local_dim();
  std::vector<std::size_t> offset(d, 0);
  for (std::size_t x = 0; x < d; ++x) {
    for (std::size_t i = 0; i < m; ++i) {
      if (x & (std::size_t{1} << (m - 1 - i))) offset[x] |= bit[i];
    }
  }
  Amplitudes in(d), out(d);
  for (std::size_t r = 0; r < groups; ++r) {
    const std::size_t base = detail::insert_zero_bits(r, pos);
    for (std::size_t x = 0; x < d; ++x) in[x] = amps[base | offset[x]];
    for (std::size_t y = 0; y < d; ++y) {
      cplx s{0.0, 0.0};
      for (std::size_t x = 0; x < d; ++x) s += u[y * d + x] * in[x];
      out[y] = s;
    }
    for (std::size_t y = 0; y < d; ++y) amps[base | offset[y]] = out[y];
  }
}

// ---------------------------------------------------------------------------
// Operations

inline StateVector basis_state(std::size_t dim, std::size_t index) {
  if (dim == 0) throw DomainError("basis_state: dimension must be positive");
  if (index >= dim) throw DomainError("basis_state: index out of range");
  Amplitudes a(dim, cplx{0.0, 0.0});
  a[index] = 1.0;
  return StateVector(std::move(a));
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
  Amplitudes out(a.dim() * b.dim());
  for (std::size_t p = 0; p < a.dim(); ++p) {
    for (std::size_t q = 0; q < b.dim(); ++q) out[p * b.dim() + q] = a[p] * b[q];
  }
  return StateVector::normalized(std::move(out));
}

inline StateVector apply_gate(const StateVector& state, const GateSpec& gate,
                              const RegisterLayout& layout) {
  if (!state.qubit_addressable() ||
      state.dim() != (std::size_t{1} << layout.total_qubits())) {
    throw DomainError("apply_gate: state dimension does not match layout");
  }
  Amplitudes a = state.amplitudes();
  apply_gate_inplace(a, layout.total_qubits(), gate);
  return StateVector::normalized(std::move(a));
}

struct MeasurementRecord {
  std::size_t outcome = 0;
  double probability = 0.0;
  StateVector post_state;
};

/// Inverse-CDF draw from `probs`: smallest index whose cumulative mass
/// exceeds u, so boundary ties go to the lower index.
inline std::size_t sample_index(std::span<const double> probs, double u) {
  double total = 0.0;
  for (double p : probs) total += p;
  const double target = u * total;
  double acc = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last_nonzero = i;
    if (target < acc) return i;
  }
  return last_nonzero;
}

/// Measures register `reg` of `state` in the computational basis.
inline MeasurementRecord measure(const StateVector& state, const RegisterLayout& layout,
                                 const std::string& reg, std::uint64_t seed) {
  if (state.dim() != (std::size_t{1} << layout.total_qubits())) {
    throw DomainError("measure: state dimension does not match layout");
  }
  const Register& r = layout.find(reg);
  std::vector<double> probs(std::size_t{1} << r.count, 0.0);
  for (std::size_t i = 0; i < state.dim(); ++i) {
    probs[layout.value(r, i)] += std::norm(state[i]);
  }
  Rng rng(seed);
  const std::size_t outcome = sample_index(probs, uniform01(rng));
  Amplitudes post(state.dim(), cplx{0.0, 0.0});
  const double scale = 1.0 / std::sqrt(probs[outcome]);
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (layout.value(r, i) == outcome) post[i] = state[i] * scale;
  }
  return {outcome, probs[outcome], StateVector::normalized(std::move(post))};
}

inline double state_distance(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DomainError("state_distance: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

inline double state_distance(const StateVector& a, const StateVector& b) {
  return state_distance(a.span(), b.span());
}

/// Sum over basis labels of | |a_k|^2 - |b_k|^2 |.
inline double total_variation(std::span<const cplx> a, std::span<const cplx> b) {
  if (a.size() != b.size()) throw DomainError("total_variation: dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(std::norm(a[i]) - std::norm(b[i]));
  return s;
}

inline double total_variation(const StateVector& a, const StateVector& b) {
  return total_variation(a.span(), b.span());
}

/// Haar-distributed random state (normalized complex Gaussian vector).
inline StateVector random_state(std::size_t dim, Rng& rng) {
  Amplitudes a(dim);
  for (auto& x : a) {
    const double re = standard_normal(rng);
    x = cplx{re, standard_normal(rng)};
  }
  return StateVector::normalized(std::move(a));
}

inline nlohmann::json to_json(const StateVector& s) {
  nlohmann::json amps = nlohmann::json::array();
  for (const auto& a : s.amplitudes()) amps.push_back({a.real(), a.imag()});
  return {{"dim", s.dim()}, {"amps", std::move(amps)}};
}

inline StateVector state_from_json(const nlohmann::json& j) {
  const std::size_t dim = j.at("dim").get<std::size_t>();
  Amplitudes a;
  for (const auto& pair : j.at("amps")) a.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  if (a.size() != dim) throw DomainError("state_from_json: dim does not match amps");
  return StateVector(std::move(a));
}

}  // namespace hsp
