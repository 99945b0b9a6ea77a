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

#pragma once

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsp {

using cplx = std::complex<double>;
using Amplitudes = std::vector<cplx>;

inline constexpr double kNormTolerance = 1e-9;
inline constexpr double kUnitaryTolerance = 1e-12;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Precondition or argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Instance too large for the dense/desk-scale representation requested.
class CapabilityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Counter-based seed derivation (splitmix64 finalizer). Trial `counter`
/// of a run seeded with `master` always gets the same seed, independent of
/// how many trials are run.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (counter + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

/// SplitMix64 stream. Seeding is free, so it serves single draws taken
/// under their own derived seed, where seeding Rng would dominate.
class DrawRng {
 public:
  using result_type = std::uint64_t;
  explicit DrawRng(std::uint64_t seed) : state_(seed) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Uniform double in [0, 1) with 53 random bits; platform independent.
template <class Gen>
double uniform01(Gen& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n). Rejection sampling keeps it unbiased and
/// independent of the standard library's distribution implementation.
template <class Gen>
std::uint64_t uniform_below(Gen& rng, std::uint64_t n) {
  if (n == 0) throw DomainError("uniform_below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

/// Standard normal via Box-Muller, built on uniform01 for reproducibility.
template <class Gen>
double standard_normal(Gen& rng) {
  double u1 = uniform01(rng);
  while (u1 <= 0.0) u1 = uniform01(rng);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

/// Non-negative remainder.
inline std::int64_t mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp,
                             std::uint64_t m) {
  if (m == 1) return 0;
  unsigned __int128 result = 1;
  unsigned __int128 b = base % m;
  while (exp > 0) {
    if (exp & 1U) result = (result * b) % m;
    b = (b * b) % m;
    exp >>= 1U;
  }
  return static_cast<std::uint64_t>(result);
}

/// ceil(log2(n)) for n >= 1; 0 for n == 1.
inline unsigned ceil_log2(std::uint64_t n) {
  if (n <= 1) return 0;
  return static_cast<unsigned>(std::bit_width(n - 1));
}

inline bool is_power_of_two(std::uint64_t n) { return std::has_single_bit(n); }

/// Round half up, exactly, for the rational p/q with q > 0.
inline std::int64_t round_half_up(std::int64_t p, std::int64_t q) {
  // floor((2p + q) / (2q))
  const std::int64_t num = 2 * p + q;
  const std::int64_t den = 2 * q;
  std::int64_t fl = num / den;
  if ((num % den != 0) && ((num < 0) != (den < 0))) --fl;
  return fl;
}

inline std::int64_t floor_div(std::int64_t p, std::int64_t q) {
  std::int64_t fl = p / q;
  if ((p % q != 0) && ((p < 0) != (q < 0))) --fl;
  return fl;
}

inline std::int64_t ceil_div(std::int64_t p, std::int64_t q) {
  return -floor_div(-p, q);
}

}  // namespace hsp
