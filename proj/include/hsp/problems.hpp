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

// Standard hidden subgroup instances: the cyclic algorithm with gcd
// post-processing, Simon's problem over Z_2^n, order finding and factoring.

#pragma once

#include <bit>
#include <numeric>
#include <string>
#include <vector>

#include "hsp/abelian.hpp"
#include "hsp/common.hpp"
#include "json.hpp"

namespace hsp {

// ---------------------------------------------------------------------------
// Cyclic HSP

inline constexpr unsigned kCyclicSamples = 8;

struct CyclicHspResult {
  std::int64_t N = 1;
  std::int64_t M = 1;  // gcd of N and the samples
  std::int64_t d = 1;  // N / M, the reported generator of H
  std::vector<std::int64_t> samples;
};

/// Draws `samples` elements of H-perp (multiples of N/d) and returns
/// d = N / gcd(N, samples). gcd of all-zero samples is N.
inline CyclicHspResult cyclic_hsp(const HspSampler& sampler, std::uint64_t seed,
                                  unsigned samples = kCyclicSamples) {
  const AbelianGroup& G = sampler.group();
  if (G.rank() != 1) throw DomainError("cyclic_hsp: group must be cyclic Z_N");
  CyclicHspResult r;
  r.N = G.order();
  r.M = r.N;
  for (unsigned j = 0; j < samples; ++j) {
    const std::int64_t y = sampler.sample_index(derive_seed(seed, j));
    r.samples.push_back(y);
    r.M = std::gcd(r.M, y);
  }
  r.d = r.N / r.M;
  return r;
}

inline CyclicHspResult cyclic_hsp(std::int64_t N, const CosetOracle& f, std::uint64_t seed,
                                  unsigned samples = kCyclicSamples) {
  if (f.group().rank() != 1 || f.group().order() != N) {
    throw DomainError("cyclic_hsp: oracle group must be Z_N");
  }
  return cyclic_hsp(HspSampler(f.group(), f), seed, samples);
}

/// Oracle over Z_N hiding H = <d>.
inline CosetOracle cyclic_oracle(std::int64_t N, std::int64_t d) {
  if (N < 1 || d < 1 || N % d != 0) throw DomainError("cyclic_oracle: need d | N");
  const AbelianGroup G({N});
  return CosetOracle(G, Subgroup(G, {{d % N}}));
}

inline nlohmann::json to_json(const CyclicHspResult& r) {
  return {{"N", r.N}, {"M", r.M}, {"d", r.d}, {"samples", r.samples}};
}

// ---------------------------------------------------------------------------
// Simon's problem

/// Bit strings of length n are read with the first character as the most
/// significant bit, matching the group index order of Z_2^n.
inline std::uint64_t parse_bitstring(const std::string& s) {
  if (s.empty() || s.size() > 62) throw DomainError("parse_bitstring: length must be 1..62");
  std::uint64_t v = 0;
  for (char c : s) {
    if (c != '0' && c != '1') throw DomainError("parse_bitstring: only '0' and '1' allowed");
    v = (v << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return v;
}

inline std::string to_bitstring(std::uint64_t v, unsigned n) {
  std::string s(n, '0');
  for (unsigned i = 0; i < n; ++i)
    if ((v >> (n - 1 - i)) & 1U) s[i] = '1';
  return s;
}

struct SimonInstance {
  unsigned n = 1;
  std::uint64_t s = 0;
  std::vector<std::int64_t> labels;  // f(x) for x in 0 .. 2^n - 1

  static constexpr unsigned kMaxBits = 16;

  /// f(x) = f(x xor s) with labels otherwise distinct. The label of a pair
  /// is a seeded random relabelling of its smaller member.
  static SimonInstance make(unsigned n, std::uint64_t s, std::uint64_t seed) {
    if (n < 1 || n > kMaxBits) throw CapabilityError("SimonInstance: n must be 1..16");
    if (s >> n) throw DomainError("SimonInstance: s has more than n bits");
    SimonInstance inst;
    inst.n = n;
    inst.s = s;
    const std::uint64_t size = std::uint64_t{1} << n;
    std::vector<std::int64_t> relabel(size);
    std::iota(relabel.begin(), relabel.end(), 0);
    Rng rng(seed);
    std::shuffle(relabel.begin(), relabel.end(), rng);
    inst.labels.resize(size);
    for (std::uint64_t x = 0; x < size; ++x) inst.labels[x] = relabel[std::min(x, x ^ s)];
    return inst;
  }

  AbelianGroup group() const { return AbelianGroup(std::vector<std::int64_t>(n, 2)); }
};

inline int parity(std::uint64_t v) { return std::popcount(v) & 1; }

/// Basis of { s : y . s = 0 for every y in ys } over GF(2), n bits.
inline std::vector<std::uint64_t> gf2_nullspace(const std::vector<std::uint64_t>& ys, unsigned n) {
  // Reduced row echelon form; pivot columns keyed by bit position.
  std::vector<std::uint64_t> rows;
  std::vector<int> pivots;
  for (std::uint64_t y : ys) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      if ((y >> pivots[i]) & 1U) y ^= rows[i];
    if (y == 0) continue;
    const int p = 63 - std::countl_zero(y);
    for (auto& r : rows)
      if ((r >> p) & 1U) r ^= y;
    rows.push_back(y);
    pivots.push_back(p);
  }
  std::vector<std::uint64_t> basis;
  for (unsigned f = 0; f < n; ++f) {
    if (std::find(pivots.begin(), pivots.end(), static_cast<int>(f)) != pivots.end()) continue;
    std::uint64_t v = std::uint64_t{1} << f;
    for (std::size_t i = 0; i < rows.size(); ++i)
      if ((rows[i] >> f) & 1U) v |= std::uint64_t{1} << pivots[i];
    basis.push_back(v);
  }
  return basis;
}

struct SimonResult {
  std::uint64_t s = 0;
  bool resolved = false;  // nullspace had dimension <= 1
  std::vector<std::uint64_t> samples;
};

/// Collects 2n + 1 samples y with y . s = 0 and returns the nonzero
/// nullspace vector, or 0 when the samples span Z_2^n.
inline SimonResult simon_solve(const HspSampler& sampler, unsigned n, std::uint64_t seed) {
  SimonResult r;
  for (unsigned j = 0; j < 2 * n + 1; ++j) {
    r.samples.push_back(static_cast<std::uint64_t>(sampler.sample_index(derive_seed(seed, j))));
  }
  const auto basis = gf2_nullspace(r.samples, n);
  r.resolved = basis.size() <= 1;
  r.s = basis.empty() ? 0 : basis.front();
  return r;
}

inline SimonResult simon_solve(const SimonInstance& inst, std::uint64_t seed) {
  return simon_solve(HspSampler(inst.group(), inst.labels), inst.n, seed);
}

inline nlohmann::json to_json(const SimonResult& r, unsigned n) {
  std::vector<std::string> ys;
  for (auto y : r.samples) ys.push_back(to_bitstring(y, n));
  return {{"n", n}, {"s", to_bitstring(r.s, n)}, {"resolved", r.resolved}, {"samples", ys}};
}

// ---------------------------------------------------------------------------
// Order finding and factoring

/// Order of x modulo N by repeated multiplication.
inline std::int64_t classical_order(std::int64_t x, std::int64_t N) {
  if (N < 2) return 1;
  if (std::gcd(mod(x, N), N) != 1) throw DomainError("classical_order: gcd(x, N) != 1");
  std::int64_t r = 1;
  std::int64_t y = mod(x, N);
  while (y != 1) {
    y = static_cast<std::int64_t>((static_cast<__int128>(y) * mod(x, N)) % N);
    ++r;
  }
  return r;
}

struct OrderFindingInstance {
  std::int64_t N = 2;
  std::int64_t x = 1;
  std::int64_t r = 1;
  std::int64_t N_amb = 1;  // ambient Z_{N_amb} with r | N_amb

  static constexpr std::int64_t kMaxAmbient = std::int64_t{1} << 16;

  /// N_amb = r * ceil(N / r), the least multiple of r that is >= N.
  static OrderFindingInstance make(std::int64_t N, std::int64_t x) {
    if (N < 2) throw DomainError("OrderFindingInstance: N must be >= 2");
    if (std::gcd(mod(x, N), N) != 1) {
      throw DomainError("OrderFindingInstance: gcd(x, N) != 1; the gcd is already a factor");
    }
    OrderFindingInstance inst;
    inst.N = N;
    inst.x = mod(x, N);
    inst.r = classical_order(inst.x, N);
    inst.N_amb = inst.r * ceil_div(N, inst.r);
    if (inst.N_amb > kMaxAmbient) throw CapabilityError("OrderFindingInstance: N too large");
    return inst;
  }

  /// f(a) = x^a mod N on Z_{N_amb}; constant exactly on cosets of <r>.
  std::vector<std::int64_t> labels() const {
    std::vector<std::int64_t> f(static_cast<std::size_t>(N_amb));
    std::int64_t v = 1 % N;
    for (std::int64_t a = 0; a < N_amb; ++a) {
      f[a] = v;
      v = static_cast<std::int64_t>((static_cast<__int128>(v) * x) % N);
    }
    return f;
  }
};

/// x^r = 1 (mod N) and x^(r/p) != 1 for every prime p dividing r.
inline bool is_order_of(std::int64_t r, std::int64_t x, std::int64_t N) {
  if (r < 1 || pow_mod(x, r, N) != 1 % N) return false;
  std::int64_t rest = r;
  for (std::int64_t p = 2; rest > 1; ++p) {
    if (p * p > rest) p = rest;
    if (rest % p != 0) continue;
    if (pow_mod(x, r / p, N) == 1 % N) return false;
    while (rest % p == 0) rest /= p;
  }
  return true;
}

struct OrderFindingResult {
  std::int64_t r = 0;
  unsigned runs = 0;  // cyclic HSP runs until a verified order appeared
  std::vector<CyclicHspResult> trace;
};

/// Cyclic HSP over Z_{N_amb}; each output is checked classically (x^d = 1
/// and no proper divisor works) and the run repeats on failure.
inline OrderFindingResult find_order(const OrderFindingInstance& inst, std::uint64_t seed,
                                     unsigned max_runs = 32) {
  const HspSampler sampler(AbelianGroup({inst.N_amb}), inst.labels());
  OrderFindingResult out;
  for (unsigned k = 0; k < max_runs; ++k) {
    auto res = cyclic_hsp(sampler, derive_seed(seed, k));
    ++out.runs;
    const std::int64_t d = res.d;
    out.trace.push_back(std::move(res));
    if (is_order_of(d, inst.x, inst.N)) {
      out.r = d;
      return out;
    }
  }
  throw DomainError("find_order: no verified order after " + std::to_string(max_runs) + " runs");
}

/// Smallest prime factor of n >= 2 by trial division.
inline std::int64_t smallest_prime_factor(std::int64_t n) {
  if (n % 2 == 0) return 2;
  for (std::int64_t p = 3; p * p <= n; p += 2)
    if (n % p == 0) return p;
  return n;
}

struct ShorAttempt {
  std::int64_t y = 0;
  std::int64_t gcd = 1;  // gcd(y, N)
  std::int64_t r = 0;    // 0 when the gcd was already a factor
  std::string outcome;   // "gcd", "factor", "odd-order", "trivial-root"
};

struct ShorResult {
  std::int64_t N = 0;
  std::int64_t factor = 0;
  std::vector<ShorAttempt> attempts;
  unsigned order_finding_calls = 0;
};

inline constexpr unsigned kShorMaxAttempts = 50;

/// Factoring through order finding. N must be odd, composite and not a
/// prime power.
inline ShorResult shor_factor(std::int64_t N, std::uint64_t seed,
                              unsigned max_attempts = kShorMaxAttempts) {
  if (N < 3) throw DomainError("shor_factor: N must be an odd composite >= 15");
  if (N % 2 == 0) throw DomainError("shor_factor: N is even; 2 is a factor");
  const std::int64_t p = smallest_prime_factor(N);
  if (p == N) throw DomainError("shor_factor: N is prime");
  std::int64_t rest = N;
  while (rest % p == 0) rest /= p;
  if (rest == 1) throw DomainError("shor_factor: N is a prime power; take integer roots instead");

  ShorResult out;
  out.N = N;
  Rng rng(seed);
  for (unsigned k = 0; k < max_attempts; ++k) {
    ShorAttempt a;
    a.y = 2 + static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(N - 3)));
    a.gcd = std::gcd(a.y, N);
    if (a.gcd != 1) {
      a.outcome = "gcd";
      out.attempts.push_back(a);
      out.factor = a.gcd;
      return out;
    }
    const auto inst = OrderFindingInstance::make(N, a.y);
    a.r = find_order(inst, derive_seed(seed, k)).r;
    ++out.order_finding_calls;
    if (a.r % 2 != 0) {
      a.outcome = "odd-order";
      out.attempts.push_back(a);
      continue;
    }
    const std::int64_t h = pow_mod(a.y, a.r / 2, N);
    if (h == N - 1) {
      a.outcome = "trivial-root";
      out.attempts.push_back(a);
      continue;
    }
    a.outcome = "factor";
    out.attempts.push_back(a);
    out.factor = std::gcd(h - 1, N);
    return out;
  }
  throw DomainError("shor_factor: no factor within " + std::to_string(max_attempts) + " attempts");
}

inline nlohmann::json to_json(const ShorResult& r) {
  nlohmann::json att = nlohmann::json::array();
  for (const auto& a : r.attempts) {
    att.push_back({{"y", a.y}, {"gcd", a.gcd}, {"r", a.r}, {"outcome", a.outcome}});
  }
  return {{"N", r.N},
          {"factor", r.factor},
          {"cofactor", r.factor ? r.N / r.factor : 0},
          {"order_finding_calls", r.order_finding_calls},
          {"attempts", att}};
}

}  // namespace hsp
