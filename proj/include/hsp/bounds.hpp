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

// Monte-Carlo and exact checks of the probability bounds the algorithms
// rely on: Chernoff majority voting, coprimality of random samples, the
// totient summatory bound, and random generation of a finite group.

#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "hsp/abelian.hpp"
#include "hsp/common.hpp"
#include "hsp/ehk.hpp"
#include "json.hpp"

namespace hsp {

inline constexpr std::uint64_t kDefaultTrials = 100000;

/// Direction of a bound: the event probability is at least / at most `bound`.
enum class BoundKind { kAtLeast, kAtMost };

struct TrialReport {
  std::string check;
  BoundKind kind = BoundKind::kAtLeast;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;  // occurrences of the event being bounded
  double empirical = 0.0;
  double bound = 0.0;
  double sigma = 0.0;  // sqrt(p(1-p)/trials)
  std::uint64_t seed = 0;
  nlohmann::json params = nlohmann::json::object();

  double margin() const { return empirical - bound; }

  /// The bound with 3 sigma Monte-Carlo slack.
  bool holds() const {
    return kind == BoundKind::kAtLeast ? empirical >= bound - 3.0 * sigma : empirical <= bound + 3.0 * sigma;
  }
};

inline TrialReport make_report(std::string check, BoundKind kind, std::uint64_t trials, std::uint64_t hits,
                               double bound, std::uint64_t seed) {
  if (trials == 0) throw DomainError("bounds: trials must be positive");
  TrialReport r;
  r.check = std::move(check);
  r.kind = kind;
  r.trials = trials;
  r.successes = hits;
  r.empirical = static_cast<double>(hits) / static_cast<double>(trials);
  r.bound = bound;
  r.sigma = std::sqrt(r.empirical * (1.0 - r.empirical) / static_cast<double>(trials));
  r.seed = seed;
  return r;
}

/// P(sum of n Bernoulli(1/2 + eps) draws <= n/2) <= exp(-2 eps^2 n).
inline TrialReport chernoff_check(double eps, std::uint64_t n, std::uint64_t trials, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("chernoff_check: eps must be in (0, 1/2)");
  if (n == 0) throw DomainError("chernoff_check: n must be positive");
  Rng rng(seed);
  const double p = 0.5 + eps;
  std::uint64_t failures = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint64_t ones = 0;
    for (std::uint64_t i = 0; i < n; ++i) ones += uniform01(rng) < p;
    failures += 2 * ones <= n;
  }
  auto r = make_report("chernoff", BoundKind::kAtMost, trials, failures, std::exp(-2.0 * eps * eps * double(n)), seed);
  r.params = {{"eps", eps}, {"n", n}};
  return r;
}

struct TotientReport {
  std::uint64_t n = 0;
  std::uint64_t sum = 0;   // phi(1) + ... + phi(n)
  double deviation = 0.0;  // |sum - 3 n^2 / pi^2|
  double bound = 0.0;      // n ln n
  bool holds() const { return deviation < bound; }
};

/// phi(0..n) by the standard sieve.
inline std::vector<std::uint32_t> totient_sieve(std::uint64_t n) {
  if (n > 100000000) throw CapabilityError("totient_sieve: n too large");
  std::vector<std::uint32_t> phi(n + 1);
  std::iota(phi.begin(), phi.end(), 0U);
  for (std::uint64_t p = 2; p <= n; ++p) {
    if (phi[p] != p) continue;
    for (std::uint64_t m = p; m <= n; m += p) phi[m] -= phi[m] / static_cast<std::uint32_t>(p);
  }
  return phi;
}

inline TotientReport totient_report(std::uint64_t n, std::uint64_t sum) {
  const double x = static_cast<double>(n);
  TotientReport r;
  r.n = n;
  r.sum = sum;
  r.deviation = std::abs(static_cast<double>(sum) - 3.0 * x * x / (std::numbers::pi * std::numbers::pi));
  r.bound = x * std::log(x);
  return r;
}

/// |sum_{c<=n} phi(c) - 3n^2/pi^2| < n ln n, exact sum.
inline TotientReport totient_sum_check(std::uint64_t n) {
  if (n < 2) throw DomainError("totient_sum_check: n must be >= 2");
  const auto phi = totient_sieve(n);
  std::uint64_t sum = 0;
  for (std::uint64_t c = 1; c <= n; ++c) sum += phi[c];
  return totient_report(n, sum);
}

/// The inequality at every n in [2, n_max] from one sieve; returns the
/// first violation, or n_max's report when none.
inline TotientReport totient_sum_check_all(std::uint64_t n_max) {
  if (n_max < 2) throw DomainError("totient_sum_check_all: n must be >= 2");
  const auto phi = totient_sieve(n_max);
  std::uint64_t sum = phi[1];
  TotientReport last;
  for (std::uint64_t n = 2; n <= n_max; ++n) {
    sum += phi[n];
    last = totient_report(n, sum);
    if (!last.holds()) return last;
  }
  return last;
}

/// P(gcd(t_1..t_k) = 1), t_i uniform on {0..d-1}, is >= 1 - 2^{-k/2}.
inline TrialReport gcd_probability_check(std::uint64_t d, unsigned k, std::uint64_t trials, std::uint64_t seed) {
  if (d < 2 || k < 2) throw DomainError("gcd_probability_check: need d >= 2 and k >= 2");
  Rng rng(seed);
  std::uint64_t hits = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint64_t g = 0;
    for (unsigned i = 0; i < k; ++i) g = std::gcd(g, uniform_below(rng, d));
    hits += g == 1;
  }
  auto r = make_report("gcd", BoundKind::kAtLeast, trials, hits, 1.0 - std::pow(0.5, double(k) / 2.0), seed);
  r.params = {{"d", d}, {"k", k}};
  return r;
}

/// psi_{r+t}(Z_2^r) = prod_{a=1..r} (1 - 2^{-(t+a)}).
inline double z2r_generation_probability(unsigned r, unsigned t) {
  double p = 1.0;
  for (unsigned a = 1; a <= r; ++a) p *= 1.0 - std::ldexp(1.0, -static_cast<int>(t + a));
  return p;
}

inline constexpr std::uint64_t kGenerationMaxOrder = 4096;

/// A group given by an index-level product, for closure tests.
struct GroupOps {
  std::string name;
  std::uint64_t order = 1;
  std::uint64_t identity = 0;
  std::function<std::uint64_t(std::uint64_t, std::uint64_t)> mul;
};

/// Non-abelian bundled names (S3, S4, D4, Q8) use their tables; anything
/// else is parsed as a product of cyclic groups such as Z2xZ4xZ8.
inline GroupOps resolve_group(const std::string& descriptor) {
  if (descriptor == "S3" || descriptor == "S4" || descriptor == "D4" || descriptor == "Q8") {
    auto table = std::make_shared<FiniteGroupTable>(bundled_group(descriptor));
    return {descriptor, static_cast<std::uint64_t>(table->order()), static_cast<std::uint64_t>(table->identity()),
            [table](std::uint64_t a, std::uint64_t b) {
              return static_cast<std::uint64_t>(table->mul(static_cast<int>(a), static_cast<int>(b)));
            }};
  }
  auto g = std::make_shared<AbelianGroup>(AbelianGroup::parse(descriptor));
  if (static_cast<std::uint64_t>(g->order()) > kGenerationMaxOrder) {
    throw CapabilityError("generation check: group order exceeds 4096");
  }
  return {g->to_string(), static_cast<std::uint64_t>(g->order()), 0, [g](std::uint64_t a, std::uint64_t b) {
            return static_cast<std::uint64_t>(g->add_index(static_cast<std::int64_t>(a), static_cast<std::int64_t>(b)));
          }};
}

/// |<gens>|, closing under right multiplication by generators and stopping
/// once the whole group is reached.
inline std::uint64_t generated_order(const GroupOps& G, const std::vector<std::uint64_t>& gens,
                                     std::vector<char>& in) {
  in.assign(G.order, 0);
  std::vector<std::uint64_t> elems;
  in[G.identity] = 1;
  elems.push_back(G.identity);
  std::vector<std::uint64_t> used;
  for (auto g : gens) {
    if (elems.size() == G.order) break;
    if (in[g]) continue;
    used.push_back(g);
    for (std::size_t i = 0; i < elems.size() && elems.size() < G.order; ++i)
      for (auto s : used) {
        const auto x = G.mul(elems[i], s);
        if (!in[x]) {
          in[x] = 1;
          elems.push_back(x);
        }
      }
  }
  return elems.size();
}

/// P(t + ceil(log|G|) uniform elements generate G) >= 1 - 2^{-t}.
inline TrialReport generation_probability_check(const std::string& descriptor, unsigned t, std::uint64_t trials,
                                                std::uint64_t seed) {
  const GroupOps G = resolve_group(descriptor);
  const unsigned k = t + ceil_log2(G.order);
  Rng rng(seed);
  std::vector<std::uint64_t> gens(k);
  std::vector<char> scratch;
  std::uint64_t hits = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    for (auto& g : gens) g = uniform_below(rng, G.order);
    hits += generated_order(G, gens, scratch) == G.order;
  }
  auto r = make_report("generation", BoundKind::kAtLeast, trials, hits, 1.0 - std::ldexp(1.0, -static_cast<int>(t)),
                       seed);
  r.params = {{"group", G.name}, {"t", t}, {"samples", k}};
  return r;
}

inline nlohmann::json to_json(const TrialReport& r) {
  return {{"check", r.check},
          {"kind", r.kind == BoundKind::kAtLeast ? "at_least" : "at_most"},
          {"params", r.params},
          {"trials", r.trials},
          {"successes", r.successes},
          {"empirical", r.empirical},
          {"bound", r.bound},
          {"margin", r.margin()},
          {"sigma", r.sigma},
          {"seed", r.seed},
          {"holds", r.holds()}};
}

inline nlohmann::json to_json(const TotientReport& r) {
  return {{"check", "totient"}, {"n", r.n},         {"sum", r.sum},
          {"deviation", r.deviation}, {"bound", r.bound}, {"holds", r.holds()}};
}

}  // namespace hsp
