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

// Approximate QFT over Z_N for odd N, built from two power-of-two QFTs.
//
// The input |u> (N amplitudes) is copied L times through an ancilla
// transform and a reindex |i>|j> -> |i + jN>, transformed by F_M, and then
// relabelled by the division map Delta: k -> (s, t). The first register
// then holds approximately F_N|u>, with an almost unentangled second
// register. All rounding in Delta uses exact integer arithmetic with ties
// rounded up.

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "hsp/common.hpp"
#include "hsp/qft.hpp"
#include "hsp/statevec.hpp"
#include "json.hpp"

namespace hsp {

struct OddQftPlan {
  std::int64_t N = 0;
  double epsilon = 0.0;  // 0 for manual plans
  std::int64_t L = 0;
  std::int64_t M = 0;
  double c1 = 0.0;
  double c2 = 0.0;
  std::int64_t alpha = 0;
  std::int64_t beta = 0;
  unsigned qubits = 0;    // ceil(log M) + 2
  unsigned s_qubits = 0;  // ceil(log N), most significant
  unsigned t_qubits = 0;  // qubits - s_qubits
  bool auto_planned = false;

  /// Sufficient qubit count ceil(12.53 + 3 log2(sqrt(N) / eps)); 0 if manual.
  unsigned qubit_bound() const {
    if (epsilon <= 0.0) return 0;
    return static_cast<unsigned>(
        std::ceil(12.53 + 3.0 * std::log2(std::sqrt(static_cast<double>(N)) / epsilon)));
  }

  /// Tail term (2/pi) sqrt(22 ln^2 N / L + 32 N^2 / (L M)).
  double tail_bound() const {
    const double n = static_cast<double>(N), l = static_cast<double>(L),
                 m = static_cast<double>(M);
    const double ln = std::log(n);
    return (2.0 / std::numbers::pi) * std::sqrt(22.0 * ln * ln / l + 32.0 * n * n / (l * m));
  }

  /// Bump-shift term pi L N / (M sqrt 3).
  double bump_bound() const {
    return std::numbers::pi * static_cast<double>(L) * static_cast<double>(N) /
           (static_cast<double>(M) * std::sqrt(3.0));
  }

  /// Distance bound to F_N u (x) (unnormalized Lambda vector).
  double distance_bound() const { return tail_bound() + bump_bound(); }
};

namespace detail {

inline std::int64_t power_of_two_at_least(double lower) {
  std::int64_t p = 1;
  while (static_cast<double>(p) < lower) p *= 2;
  return p;
}

inline void fill_plan_derived(OddQftPlan& p) {
  // alpha = floor(M/(2N) + 1/2) = floor((M + N) / 2N); beta = ceil((M - 3N) / 2N).
  p.alpha = floor_div(p.M + p.N, 2 * p.N);
  p.beta = ceil_div(p.M - 3 * p.N, 2 * p.N);
  p.qubits = ceil_log2(static_cast<std::uint64_t>(p.M)) + 2;
  p.s_qubits = ceil_log2(static_cast<std::uint64_t>(p.N));
  p.t_qubits = p.qubits - p.s_qubits;
  if (p.epsilon > 0.0) {
    const double n = static_cast<double>(p.N);
    p.c1 = static_cast<double>(p.L) * p.epsilon * p.epsilon / std::sqrt(n);
    p.c2 = static_cast<double>(p.M) * std::pow(p.epsilon, 3) / std::pow(n, 1.5);
  }
}

}  // namespace detail

/// Chooses L and M as the powers of two in [65 sqrt(N)/eps^2, twice that)
/// and [735 N^1.5/eps^3, twice that).
inline OddQftPlan plan_odd_qft(std::int64_t N, double epsilon) {
  if (N < 13 || N % 2 == 0) {
    throw DomainError("plan_odd_qft: N must be odd and >= 13 (use dense_qft or a manual plan)");
  }
  if (!(epsilon > 0.0) || epsilon > std::sqrt(2.0) + 1e-12) {
    throw DomainError("plan_odd_qft: epsilon must lie in (0, sqrt 2]");
  }
  OddQftPlan p;
  p.N = N;
  p.epsilon = epsilon;
  const double n = static_cast<double>(N);
  p.L = detail::power_of_two_at_least(65.0 * std::sqrt(n) / (epsilon * epsilon));
  p.M = detail::power_of_two_at_least(735.0 * std::pow(n, 1.5) / std::pow(epsilon, 3));
  p.auto_planned = true;
  detail::fill_plan_derived(p);
  if (p.L < 16 || p.M < p.L * p.N) {
    throw DomainError("plan_odd_qft: planned L, M violate L >= 16, M >= LN");
  }
  if (p.M > (std::int64_t{1} << 40)) throw CapabilityError("plan_odd_qft: M too large");
  return p;
}

/// Plan with caller-chosen L and M. No error guarantee is implied; `epsilon`
/// is only recorded (pass 0 to leave c1, c2 unset).
inline OddQftPlan plan_manual(std::int64_t N, std::int64_t L, std::int64_t M,
                              double epsilon = 0.0) {
  if (N < 1 || N % 2 == 0) throw DomainError("plan_manual: N must be odd");
  if (L < 1 || !is_power_of_two(static_cast<std::uint64_t>(L)) || M < 1 ||
      !is_power_of_two(static_cast<std::uint64_t>(M))) {
    throw DomainError("plan_manual: L and M must be powers of two");
  }
  if (M < L * N) throw DomainError("plan_manual: need M >= L N");
  if (M <= 3 * N) throw DomainError("plan_manual: need M > 3 N");
  OddQftPlan p;
  p.N = N;
  p.L = L;
  p.M = M;
  p.epsilon = epsilon;
  detail::fill_plan_derived(p);
  return p;
}

inline nlohmann::json to_json(const OddQftPlan& p) {
  return {{"N", p.N},         {"epsilon", p.epsilon}, {"L", p.L},
          {"M", p.M},         {"c1", p.c1},           {"c2", p.c2},
          {"alpha", p.alpha}, {"beta", p.beta},       {"qubits", p.qubits},
          {"qubit_bound", p.qubit_bound()},           {"auto_planned", p.auto_planned}};
}

// ---------------------------------------------------------------------------
// Delta map and interval sets

/// |x|_M: distance from x to the nearest multiple of M.
inline std::int64_t sawtooth(std::int64_t x, std::int64_t M) {
  const std::int64_t r = mod(x, M);
  return 2 * r <= M ? r : M - r;
}

struct DeltaInvariants {
  bool injective = false;
  bool alpha_is_beta_plus_one = false;
  bool t_in_range = false;
  bool c_sandwich = false;
  bool intervals_disjoint = false;
  bool intervals_equicardinal = false;
  bool delta_bounded = false;

  bool all() const {
    return injective && alpha_is_beta_plus_one && t_in_range && c_sandwich &&
           intervals_disjoint && intervals_equicardinal && delta_bounded;
  }
};

class DeltaMap {
 public:
  DeltaMap(std::int64_t M, std::int64_t N) : M_(M), N_(N) {
    if (M < 1 || N < 1) throw DomainError("DeltaMap: M and N must be positive");
    if (std::gcd(M, N) != 1) throw DomainError("DeltaMap: gcd(M, N) must be 1");
    if (M <= 3 * N) throw DomainError("DeltaMap: need M > 3N");
    alpha_ = floor_div(M + N, 2 * N);
    beta_ = ceil_div(M - 3 * N, 2 * N);
    half_width_ = ceil_div(M - N, 2 * N) - 1;
    s_.resize(M);
    t_.resize(M);
    for (std::int64_t k = 0; k < M; ++k) {
      const std::int64_t kp = round_half_up(k * N, M);
      t_[k] = k - round_half_up(kp * M, N);
      s_[k] = kp % N;
    }
  }

  std::int64_t M() const { return M_; }
  std::int64_t N() const { return N_; }
  std::int64_t alpha() const { return alpha_; }
  std::int64_t beta() const { return beta_; }

  std::int64_t s(std::int64_t k) const { return s_[k]; }
  std::int64_t t(std::int64_t k) const { return t_[k]; }

  /// Image of |k> as a basis index s * 2^t_qubits + (t + alpha).
  std::uint64_t encode(std::int64_t k, unsigned t_qubits) const {
    return (static_cast<std::uint64_t>(s_[k]) << t_qubits) +
           static_cast<std::uint64_t>(t_[k] + alpha_);
  }

  /// i' = round(M i / N).
  std::int64_t center(std::int64_t i) const { return round_half_up(M_ * i, N_); }

  /// delta_s = round(Ms/N) - Ms/N, exact numerator over N.
  double delta(std::int64_t s) const {
    return static_cast<double>(center(s) * N_ - M_ * s) / static_cast<double>(N_);
  }

  /// The interval set (i) consists of center(i) + x mod M for |x| <= half_width.
  std::int64_t half_width() const { return half_width_; }
  std::int64_t interval_size() const { return 2 * half_width_ + 1; }

  bool in_interval(std::int64_t i, std::int64_t k) const {
    return sawtooth(k - center(i), M_) <= half_width_;
  }

  std::vector<std::int64_t> interval(std::int64_t i) const {
    std::vector<std::int64_t> out;
    for (std::int64_t x = -half_width_; x <= half_width_; ++x) out.push_back(mod(center(i) + x, M_));
    return out;
  }

  /// Sorted C_s = { t : (s, t) in image }.
  std::vector<std::int64_t> c_set(std::int64_t s) const {
    std::vector<std::int64_t> out;
    for (std::int64_t k = 0; k < M_; ++k)
      if (s_[k] == s) out.push_back(t_[k]);
    std::sort(out.begin(), out.end());
    return out;
  }

  DeltaInvariants check() const {
    DeltaInvariants r;
    r.alpha_is_beta_plus_one = alpha_ == beta_ + 1;
    const std::int64_t width = 2 * alpha_ + 1;
    std::vector<char> seen(static_cast<std::size_t>(N_ * width), 0);
    std::vector<std::int64_t> lo(N_, alpha_ + 1), hi(N_, -alpha_ - 1), count(N_, 0);
    r.injective = true;
    r.t_in_range = true;
    for (std::int64_t k = 0; k < M_; ++k) {
      const std::int64_t s = s_[k], t = t_[k];
      if (s < 0 || s >= N_ || t < -alpha_ || t > alpha_) {
        r.t_in_range = false;
        r.injective = false;
        continue;
      }
      char& mark = seen[static_cast<std::size_t>(s * width + t + alpha_)];
      if (mark) r.injective = false;
      mark = 1;
      lo[s] = std::min(lo[s], t);
      hi[s] = std::max(hi[s], t);
      ++count[s];
    }
    r.c_sandwich = r.t_in_range;
    for (std::int64_t s = 0; s < N_ && r.c_sandwich; ++s) {
      // C_s is within [-alpha, alpha] by t_in_range; contains [-beta, beta]?
      for (std::int64_t t = -beta_; t <= beta_; ++t) {
        if (!seen[static_cast<std::size_t>(s * width + t + alpha_)]) {
          r.c_sandwich = false;
          break;
        }
      }
    }
    std::vector<std::int64_t> owner(M_, -1);
    r.intervals_disjoint = true;
    r.intervals_equicardinal = true;
    for (std::int64_t i = 0; i < N_; ++i) {
      std::int64_t distinct = 0;
      for (std::int64_t k : interval(i)) {
        if (owner[k] == i) continue;
        if (owner[k] != -1) r.intervals_disjoint = false;
        owner[k] = i;
        ++distinct;
      }
      if (distinct != interval_size()) r.intervals_equicardinal = false;
    }
    r.delta_bounded = true;
    for (std::int64_t s = 0; s < N_; ++s) {
      if (2 * std::abs(center(s) * N_ - M_ * s) > N_) r.delta_bounded = false;
    }
    return r;
  }

 private:
  std::int64_t M_, N_;
  std::int64_t alpha_ = 0, beta_ = 0, half_width_ = 0;
  std::vector<std::int64_t> s_, t_;
};

/// Builds Delta and checks every invariant; throws DomainError on a failure.
inline DeltaMap delta_map_build(std::int64_t M, std::int64_t N) {
  DeltaMap d(M, N);
  if (!d.check().all()) throw DomainError("delta_map_build: invariant violated");
  return d;
}

// ---------------------------------------------------------------------------
// Execution

/// A plan compiled into its basis permutations and F_M circuit, reusable
/// across inputs.
class OddQftProgram {
 public:
  explicit OddQftProgram(const OddQftPlan& plan, std::optional<unsigned> afft_m = std::nullopt)
      : plan_(plan), delta_(plan.M, plan.N) {
    const unsigned Q = plan.qubits, nT = plan.t_qubits;
    const std::uint64_t dim = std::uint64_t{1} << Q;
    const std::uint64_t N = plan.N, L = plan.L, M = plan.M;
    if ((std::uint64_t{1} << nT) < L) {
      throw DomainError("OddQftProgram: second register too small for ancilla");
    }
    if ((std::uint64_t{1} << nT) < static_cast<std::uint64_t>(2 * plan.alpha + 1)) {
      throw DomainError("OddQftProgram: second register too small for t + alpha");
    }
    const unsigned logL = ceil_log2(L), logM = ceil_log2(M);
    ancilla_ = Amplitudes(std::uint64_t{1} << nT, cplx{0.0, 0.0});
    ancilla_[0] = 1.0;
    if (logL > 0) {
      apply_circuit(std::span<cplx>(ancilla_.data(), L), exact_qft_circuit(logL));
    }
    reindex_ = complete_permutation(dim, [&](std::uint64_t x, std::uint64_t& y) {
      const std::uint64_t i = x >> nT, j = x & ((std::uint64_t{1} << nT) - 1);
      if (i >= N || j >= L) return false;
      y = i + j * N;
      return true;
    });
    delta_perm_ = complete_permutation(dim, [&](std::uint64_t k, std::uint64_t& y) {
      if (k >= M) return false;
      y = delta_.encode(static_cast<std::int64_t>(k), nT);
      return true;
    });
    fm_ = afft_m ? afft_circuit({logM, *afft_m}) : exact_qft_circuit(logM);
  }

  const OddQftPlan& plan() const { return plan_; }
  const DeltaMap& delta() const { return delta_; }
  const QftCircuit& fm_circuit() const { return fm_; }

  /// Runs the four steps on |u> (dimension N).
  StateVector run(const StateVector& u) const {
    if (u.dim() != static_cast<std::size_t>(plan_.N)) {
      throw DomainError("run_odd_qft: state dimension does not match plan N");
    }
    const unsigned nT = plan_.t_qubits;
    const std::uint64_t dim = std::uint64_t{1} << plan_.qubits;
    // 1. F_L on the ancilla, then |u> (x) ancilla.
    Amplitudes a(dim, cplx{0.0, 0.0});
    for (std::uint64_t i = 0; i < static_cast<std::uint64_t>(plan_.N); ++i) {
      const cplx ui = u[i];
      for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(plan_.L); ++j) {
        a[(i << nT) | j] = ui * ancilla_[j];
      }
    }
    // 2. |i>|j> -> |i + jN>.
    Amplitudes b(dim);
    permute(a, b, reindex_);
    expect_zero_from(b, static_cast<std::uint64_t>(plan_.L * plan_.N), "reindex");
    // 3. F_M on the low log M qubits (the top two are |00> here).
    apply_circuit(std::span<cplx>(b.data(), static_cast<std::size_t>(plan_.M)), fm_);
    expect_zero_from(b, static_cast<std::uint64_t>(plan_.M), "F_M");
    // 4. Delta: |k> -> |s>|t + alpha>.
    permute(b, a, delta_perm_);
    return StateVector::normalized(std::move(a));
  }

 private:
  // Extends a partial injective map to a permutation of [0, dim): unmapped
  // sources fill the unused targets in increasing order.
  template <class F>
  static std::vector<std::uint32_t> complete_permutation(std::uint64_t dim, F&& f) {
    std::vector<std::uint32_t> perm(dim);
    std::vector<char> used(dim, 0), mapped(dim, 0);
    for (std::uint64_t x = 0; x < dim; ++x) {
      std::uint64_t y = 0;
      if (f(x, y)) {
        if (y >= dim || used[y]) throw DomainError("OddQftProgram: map is not injective");
        used[y] = 1;
        mapped[x] = 1;
        perm[x] = static_cast<std::uint32_t>(y);
      }
    }
    std::uint64_t next = 0;
    for (std::uint64_t x = 0; x < dim; ++x) {
      if (mapped[x]) continue;
      while (used[next]) ++next;
      used[next] = 1;
      perm[x] = static_cast<std::uint32_t>(next);
    }
    return perm;
  }

  static void permute(const Amplitudes& in, Amplitudes& out,
                      const std::vector<std::uint32_t>& perm) {
    for (std::size_t x = 0; x < in.size(); ++x) out[perm[x]] = in[x];
  }

  static void expect_zero_from(const Amplitudes& a, std::uint64_t from, const char* step) {
    for (std::uint64_t x = from; x < a.size(); ++x) {
      if (std::norm(a[x]) > 1e-20) {
        throw DomainError(std::string("run_odd_qft: unused amplitude nonzero after ") + step);
      }
    }
  }

  OddQftPlan plan_;
  DeltaMap delta_;
  Amplitudes ancilla_;
  std::vector<std::uint32_t> reindex_, delta_perm_;
  QftCircuit fm_;
};

inline StateVector run_odd_qft(const StateVector& u, const OddQftPlan& plan) {
  return OddQftProgram(plan).run(u);
}

// ---------------------------------------------------------------------------
// Comparing the output with F_N u (x) psi

/// A^i_k = (1/sqrt(LMN)) sum_{a < LN} omega_N^{-ai} omega_M^{ak}, summed in
/// closed form with the phase numerator (kN - iM) mod MN reduced exactly.
inline cplx a_coefficient(const OddQftPlan& p, std::int64_t i, std::int64_t k) {
  const std::int64_t MN = p.M * p.N;
  const std::int64_t r = mod(k * p.N - i * p.M, MN);
  const double norm = 1.0 / std::sqrt(static_cast<double>(p.L) * static_cast<double>(p.M) *
                                      static_cast<double>(p.N));
  if (r == 0) return norm * static_cast<double>(p.L * p.N);
  // sum_{a<LN} e^{i a theta} = e^{i (phi - theta)/2} sin(phi/2) / sin(theta/2),
  // theta = 2 pi r / MN, phi = LN theta (taken mod 2 pi; both factors flip
  // sign together).
  const double theta = kTwoPi * static_cast<double>(r) / static_cast<double>(MN);
  const double phi = kTwoPi * static_cast<double>(mod(p.L * r, p.M)) / static_cast<double>(p.M);
  const double mag = std::sin(phi / 2) / std::sin(theta / 2);
  return norm * std::polar(mag, (phi - theta) / 2);
}

/// The second-register vector sum_{t} A^0_t |t + alpha>, t over the offsets
/// of the interval (0), normalized. Dimension 2^t_qubits.
inline Amplitudes lambda_psi(const OddQftPlan& p) {
  const std::int64_t hw = ceil_div(p.M - p.N, 2 * p.N) - 1;
  Amplitudes psi(std::size_t{1} << p.t_qubits, cplx{0.0, 0.0});
  double s = 0.0;
  for (std::int64_t t = -hw; t <= hw; ++t) {
    const cplx a = a_coefficient(p, 0, mod(t, p.M));
    psi[static_cast<std::size_t>(t + p.alpha)] = a;
    s += std::norm(a);
  }
  for (auto& x : psi) x /= std::sqrt(s);
  return psi;
}

struct OddQftResiduals {
  double optimal = 0.0;  // || v - F_N u (x) psi* ||, psi* the best unit vector
  double lambda = 0.0;   // || v - F_N u (x) psi_Lambda ||
  double tv = 0.0;       // first-register distribution vs |F_N u|^2

  double best() const { return std::min(optimal, lambda); }
};

namespace detail {

inline double tensor_residual(std::span<const cplx> v, std::span<const cplx> uhat,
                              std::span<const cplx> psi, unsigned t_qubits) {
  const std::size_t T = std::size_t{1} << t_qubits;
  double s = 0.0;
  for (std::size_t idx = 0; idx < v.size(); ++idx) {
    const std::size_t si = idx / T, ti = idx % T;
    const cplx ref = si < uhat.size() ? uhat[si] * psi[ti] : cplx{0.0, 0.0};
    s += std::norm(v[idx] - ref);
  }
  return std::sqrt(s);
}

}  // namespace detail

inline OddQftResiduals odd_qft_residuals(const StateVector& v, const StateVector& u,
                                         const OddQftPlan& p) {
  const Amplitudes uhat = apply_dense_qft(u.span());
  const std::size_t T = std::size_t{1} << p.t_qubits;
  if (v.dim() != (T << p.s_qubits)) throw DomainError("odd_qft_residuals: dimension mismatch");
  Amplitudes w(T, cplx{0.0, 0.0});
  std::vector<double> marginal(std::size_t{1} << p.s_qubits, 0.0);
  for (std::size_t idx = 0; idx < v.dim(); ++idx) {
    const std::size_t s = idx / T, t = idx % T;
    marginal[s] += std::norm(v[idx]);
    if (s < uhat.size()) w[t] += std::conj(uhat[s]) * v[idx];
  }
  double wn = 0.0;
  for (const auto& x : w) wn += std::norm(x);
  wn = std::sqrt(wn);
  OddQftResiduals r;
  if (wn > 0.0) {
    for (auto& x : w) x /= wn;
    r.optimal = detail::tensor_residual(v.span(), uhat, w, p.t_qubits);
  } else {
    r.optimal = std::sqrt(2.0);
  }
  r.lambda = detail::tensor_residual(v.span(), uhat, lambda_psi(p), p.t_qubits);
  for (std::size_t s = 0; s < marginal.size(); ++s) {
    const double q = s < uhat.size() ? std::norm(uhat[s]) : 0.0;
    r.tv += std::abs(marginal[s] - q);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Diagnostics: the vectors A^i, B^i, T^i, S^i

/// Lazy access to A^i = F_M F_LN^{-1} |Li>, its bump B^i (restriction to
/// (i)), tail T^i = A^i - B^i, and the shifted bump S^i. Vectors are
/// evaluated entrywise on demand rather than stored.
class OddQftDiagnostics {
 public:
  static constexpr std::int64_t kMaxM = std::int64_t{1} << 20;

  explicit OddQftDiagnostics(const OddQftPlan& plan) : plan_(plan), delta_(plan.M, plan.N) {
    if (plan.M > kMaxM) {
      throw CapabilityError("odd_qft_diagnostics: M > 2^20 too large for dense diagnostics");
    }
  }

  const OddQftPlan& plan() const { return plan_; }
  const DeltaMap& delta() const { return delta_; }

  cplx A(std::int64_t i, std::int64_t k) const { return a_coefficient(plan_, i, k); }
  cplx B(std::int64_t i, std::int64_t k) const {
    return delta_.in_interval(i, k) ? A(i, k) : cplx{0.0, 0.0};
  }
  cplx T(std::int64_t i, std::int64_t k) const {
    return delta_.in_interval(i, k) ? cplx{0.0, 0.0} : A(i, k);
  }
  cplx S(std::int64_t i, std::int64_t k) const {
    return delta_.in_interval(i, k) ? A(0, mod(k - delta_.center(i), plan_.M)) : cplx{0.0, 0.0};
  }

  Amplitudes vector_of(cplx (OddQftDiagnostics::*f)(std::int64_t, std::int64_t) const,
                       std::int64_t i) const {
    Amplitudes out(static_cast<std::size_t>(plan_.M));
    for (std::int64_t k = 0; k < plan_.M; ++k) out[k] = (this->*f)(i, k);
    return out;
  }
  Amplitudes A_vector(std::int64_t i) const { return vector_of(&OddQftDiagnostics::A, i); }
  Amplitudes B_vector(std::int64_t i) const { return vector_of(&OddQftDiagnostics::B, i); }
  Amplitudes T_vector(std::int64_t i) const { return vector_of(&OddQftDiagnostics::T, i); }
  Amplitudes S_vector(std::int64_t i) const { return vector_of(&OddQftDiagnostics::S, i); }

  /// ||S^i - B^i||; both live on (i), so only those entries contribute.
  double bump_shift_error(std::int64_t i) const {
    double s = 0.0;
    for (std::int64_t k : delta_.interval(i)) s += std::norm(S(i, k) - B(i, k));
    return std::sqrt(s);
  }

  std::vector<double> bump_shift_errors() const {
    std::vector<double> out(static_cast<std::size_t>(plan_.N));
    for (std::int64_t i = 0; i < plan_.N; ++i) out[i] = bump_shift_error(i);
    return out;
  }

  /// || sum_i uhat_i T^i ||.
  double tail_norm(std::span<const cplx> uhat) const {
    if (static_cast<std::int64_t>(uhat.size()) != plan_.N) {
      throw DomainError("tail_norm: coefficient count must equal N");
    }
    double s = 0.0;
    for (std::int64_t k = 0; k < plan_.M; ++k) {
      cplx acc{0.0, 0.0};
      for (std::int64_t i = 0; i < plan_.N; ++i) {
        if (!delta_.in_interval(i, k)) acc += uhat[i] * A(i, k);
      }
      s += std::norm(acc);
    }
    return std::sqrt(s);
  }

  /// Second-register vector sum over the offsets of (0) of A^0_t |t + alpha>,
  /// unnormalized.
  Amplitudes psi_unnormalized() const {
    Amplitudes psi(std::size_t{1} << plan_.t_qubits, cplx{0.0, 0.0});
    for (std::int64_t t = -delta_.half_width(); t <= delta_.half_width(); ++t) {
      psi[static_cast<std::size_t>(t + plan_.alpha)] = A(0, mod(t, plan_.M));
    }
    return psi;
  }

 private:
  OddQftPlan plan_;
  DeltaMap delta_;
};

inline OddQftDiagnostics odd_qft_diagnostics(const OddQftPlan& plan) {
  return OddQftDiagnostics(plan);
}

}  // namespace hsp
