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

// Finite abelian groups Z_{N_1} x ... x Z_{N_k} and the hidden subgroup
// algorithm over them.
//
// Elements are coordinate tuples; they are also addressed by a mixed-radix
// index with the first coordinate most significant, so index order is
// lexicographic order. Characters are evaluated through the integer
// exponent sum_l alpha_l g_l h_l mod d (d = lcm N_l, alpha_l = d / N_l),
// which keeps every orthogonality test exact.

#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hsp/common.hpp"
#include "hsp/qft.hpp"
#include "hsp/statevec.hpp"
#include "json.hpp"

namespace hsp {

using GroupElement = std::vector<std::int64_t>;

class AbelianGroup {
 public:
  AbelianGroup() : AbelianGroup(std::vector<std::int64_t>{1}) {}

  explicit AbelianGroup(std::vector<std::int64_t> moduli) : moduli_(std::move(moduli)) {
    if (moduli_.empty()) throw DomainError("AbelianGroup: need at least one modulus");
    order_ = 1;
    lcm_ = 1;
    for (std::int64_t n : moduli_) {
      if (n < 1) throw DomainError("AbelianGroup: moduli must be >= 1");
      if (order_ > (std::int64_t{1} << 40) / n) throw CapabilityError("AbelianGroup: order too large");
      order_ *= n;
      lcm_ = std::lcm(lcm_, n);
    }
    for (std::int64_t n : moduli_) alphas_.push_back(lcm_ / n);
  }

  /// Parses "Z4xZ2xZ5" (also accepts "Z4 x Z2" and "Z_4").
  static AbelianGroup parse(const std::string& text) {
    std::vector<std::int64_t> mods;
    std::string cleaned;
    for (char c : text)
      if (!std::isspace(static_cast<unsigned char>(c)) && c != '_') cleaned += c;
    std::size_t pos = 0;
    while (pos < cleaned.size()) {
      if (cleaned[pos] != 'Z' && cleaned[pos] != 'z') {
        throw DomainError("AbelianGroup::parse: expected 'Z' in \"" + text + "\"");
      }
      ++pos;
      std::size_t end = pos;
      while (end < cleaned.size() && std::isdigit(static_cast<unsigned char>(cleaned[end]))) ++end;
      if (end == pos) throw DomainError("AbelianGroup::parse: missing modulus in \"" + text + "\"");
      mods.push_back(std::stoll(cleaned.substr(pos, end - pos)));
      pos = end;
      if (pos < cleaned.size()) {
        if (cleaned[pos] != 'x' && cleaned[pos] != 'X' && cleaned[pos] != '*') {
          throw DomainError("AbelianGroup::parse: expected 'x' in \"" + text + "\"");
        }
        ++pos;
        if (pos == cleaned.size()) throw DomainError("AbelianGroup::parse: trailing 'x'");
      }
    }
    if (mods.empty()) throw DomainError("AbelianGroup::parse: empty descriptor");
    return AbelianGroup(std::move(mods));
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t l = 0; l < moduli_.size(); ++l) {
      if (l) s += "x";
      s += "Z" + std::to_string(moduli_[l]);
    }
    return s;
  }

  const std::vector<std::int64_t>& moduli() const { return moduli_; }
  std::size_t rank() const { return moduli_.size(); }
  std::int64_t order() const { return order_; }
  std::int64_t lcm() const { return lcm_; }
  const std::vector<std::int64_t>& alphas() const { return alphas_; }

  bool contains(const GroupElement& g) const {
    if (g.size() != moduli_.size()) return false;
    for (std::size_t l = 0; l < g.size(); ++l)
      if (g[l] < 0 || g[l] >= moduli_[l]) return false;
    return true;
  }

  GroupElement identity() const { return GroupElement(moduli_.size(), 0); }

  GroupElement reduce(GroupElement g) const {
    if (g.size() != moduli_.size()) throw DomainError("AbelianGroup: element rank mismatch");
    for (std::size_t l = 0; l < g.size(); ++l) g[l] = mod(g[l], moduli_[l]);
    return g;
  }

  std::int64_t index(const GroupElement& g) const {
    std::int64_t idx = 0;
    for (std::size_t l = 0; l < moduli_.size(); ++l) idx = idx * moduli_[l] + g[l];
    return idx;
  }

  GroupElement element(std::int64_t idx) const {
    GroupElement g(moduli_.size());
    for (std::size_t l = moduli_.size(); l-- > 0;) {
      g[l] = idx % moduli_[l];
      idx /= moduli_[l];
    }
    return g;
  }

  GroupElement add(const GroupElement& a, const GroupElement& b) const {
    GroupElement c(a.size());
    for (std::size_t l = 0; l < a.size(); ++l) c[l] = (a[l] + b[l]) % moduli_[l];
    return c;
  }

  GroupElement negate(const GroupElement& a) const {
    GroupElement c(a.size());
    for (std::size_t l = 0; l < a.size(); ++l) c[l] = (moduli_[l] - a[l]) % moduli_[l];
    return c;
  }

  std::int64_t add_index(std::int64_t a, std::int64_t b) const {
    std::int64_t out = 0, scale = 1;
    for (std::size_t l = moduli_.size(); l-- > 0;) {
      const std::int64_t n = moduli_[l];
      out += ((a % n + b % n) % n) * scale;
      a /= n;
      b /= n;
      scale *= n;
    }
    return out;
  }

  bool operator==(const AbelianGroup& o) const { return moduli_ == o.moduli_; }

 private:
  std::vector<std::int64_t> moduli_;
  std::vector<std::int64_t> alphas_;
  std::int64_t order_ = 1;
  std::int64_t lcm_ = 1;
};

inline std::string element_to_string(const GroupElement& g) {
  std::string s = "(";
  for (std::size_t l = 0; l < g.size(); ++l) {
    if (l) s += ",";
    s += std::to_string(g[l]);
  }
  return s + ")";
}

/// Parses "[(2,0,0),(0,1,0)]"; an empty list "[]" is allowed.
inline std::vector<GroupElement> parse_element_list(const std::string& text) {
  std::vector<GroupElement> out;
  GroupElement cur;
  std::string num;
  bool open = false;
  auto flush = [&] {
    if (num.empty()) throw DomainError("parse_element_list: empty coordinate in \"" + text + "\"");
    cur.push_back(std::stoll(num));
    num.clear();
  };
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '[' || c == ']') {
      if (c == ']' && open) throw DomainError("parse_element_list: unbalanced parentheses");
      continue;
    }
    if (c == '(') {
      if (open) throw DomainError("parse_element_list: nested parentheses");
      open = true;
      cur.clear();
    } else if (c == ')') {
      if (!open) throw DomainError("parse_element_list: unbalanced parentheses");
      flush();
      out.push_back(cur);
      open = false;
    } else if (c == ',') {
      if (open) flush();
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '-') {
      if (!open) throw DomainError("parse_element_list: number outside parentheses");
      num += c;
    } else {
      throw DomainError(std::string("parse_element_list: unexpected character '") + c + "'");
    }
  }
  if (open) throw DomainError("parse_element_list: unbalanced parentheses");
  return out;
}

// ---------------------------------------------------------------------------
// Subgroups

class Subgroup {
 public:
  Subgroup() = default;

  /// Closure of `generators` under addition (finite group, so negation too).
  Subgroup(const AbelianGroup& G, std::vector<GroupElement> generators)
      : generators_(std::move(generators)) {
    std::vector<std::int64_t> gens;
    for (const auto& g : generators_) {
      if (!G.contains(g)) throw DomainError("Subgroup: generator outside group");
      gens.push_back(G.index(g));
    }
    members_.assign(static_cast<std::size_t>(G.order()), 0);
    members_[0] = 1;
    elements_.push_back(0);
    for (std::size_t next = 0; next < elements_.size(); ++next) {
      for (std::int64_t gi : gens) {
        const std::int64_t e = G.add_index(elements_[next], gi);
        if (!members_[e]) {
          members_[e] = 1;
          elements_.push_back(e);
        }
      }
    }
    std::sort(elements_.begin(), elements_.end());
  }

  static Subgroup trivial(const AbelianGroup& G) { return Subgroup(G, {}); }

  static Subgroup whole(const AbelianGroup& G) {
    std::vector<GroupElement> gens;
    for (std::size_t l = 0; l < G.rank(); ++l) {
      GroupElement e = G.identity();
      if (G.moduli()[l] > 1) {
        e[l] = 1;
        gens.push_back(e);
      }
    }
    return Subgroup(G, gens);
  }

  const std::vector<GroupElement>& generators() const { return generators_; }
  /// Sorted element indices.
  const std::vector<std::int64_t>& elements() const { return elements_; }
  std::int64_t order() const { return static_cast<std::int64_t>(elements_.size()); }
  bool contains_index(std::int64_t idx) const { return members_[idx] != 0; }

  bool operator==(const Subgroup& o) const { return elements_ == o.elements_; }

 private:
  std::vector<GroupElement> generators_;
  std::vector<std::int64_t> elements_;
  std::vector<char> members_;
};

/// Every subgroup of G, by closing known subgroups under one more element.
/// Practical for |G| <= 64 or so.
inline std::vector<Subgroup> enumerate_subgroups(const AbelianGroup& G) {
  std::vector<Subgroup> out{Subgroup::trivial(G)};
  std::map<std::vector<std::int64_t>, bool> seen{{out[0].elements(), true}};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (std::int64_t g = 0; g < G.order(); ++g) {
      if (out[i].contains_index(g)) continue;
      auto gens = out[i].generators();
      gens.push_back(G.element(g));
      Subgroup S(G, gens);
      if (seen.emplace(S.elements(), true).second) out.push_back(std::move(S));
    }
  }
  return out;
}

/// All abelian groups of order n up to isomorphism, as invariant factor
/// lists n_1 | n_2 | ... | n_r with n_1 > 1 (Z1 for n = 1).
inline std::vector<AbelianGroup> abelian_groups_of_order(std::int64_t n) {
  if (n == 1) return {AbelianGroup({1})};
  std::vector<AbelianGroup> out;
  std::vector<std::int64_t> cur;
  // Choose factors from the smallest: each next factor is a multiple of the
  // previous and divides what remains.
  auto rec = [&](auto&& self, std::int64_t remaining, std::int64_t prev) -> void {
    if (remaining == 1) {
      out.emplace_back(cur);
      return;
    }
    for (std::int64_t f = prev; f <= remaining; f += prev) {
      if (f < 2 || remaining % f != 0) continue;
      // Later factors are multiples of f, so f must divide remaining / f too
      // unless f is the last factor.
      const std::int64_t rest = remaining / f;
      if (rest != 1 && rest % f != 0) continue;
      cur.push_back(f);
      self(self, rest, f);
      cur.pop_back();
    }
  };
  rec(rec, n, 1);
  return out;
}

// ---------------------------------------------------------------------------
// Characters and the G-operators

/// Exponent e with chi_g(h) = omega_d^e.
inline std::int64_t character_exponent(const AbelianGroup& G, const GroupElement& g,
                                       const GroupElement& h) {
  const std::int64_t d = G.lcm();
  std::int64_t e = 0;
  for (std::size_t l = 0; l < G.rank(); ++l) {
    e = (e + (G.alphas()[l] * ((g[l] * h[l]) % G.moduli()[l])) % d) % d;
  }
  return e;
}

/// chi_g(h) = prod_l omega_{N_l}^{g_l h_l}.
inline cplx character_eval(const AbelianGroup& G, const GroupElement& g, const GroupElement& h) {
  if (!G.contains(g) || !G.contains(h)) throw DomainError("character_eval: element outside group");
  return root_of_unity(static_cast<std::uint64_t>(G.lcm()),
                       static_cast<std::uint64_t>(character_exponent(G, g, h)));
}

/// H-perp = { g : chi_g(h) = 1 for every h in H }, tested on H's generators.
inline Subgroup orthogonal_subgroup(const AbelianGroup& G, const Subgroup& H) {
  std::vector<GroupElement> hgens = H.generators();
  if (hgens.empty() && H.order() > 1) {
    for (std::int64_t e : H.elements()) hgens.push_back(G.element(e));
  }
  std::vector<GroupElement> members;
  for (std::int64_t gi = 0; gi < G.order(); ++gi) {
    const GroupElement g = G.element(gi);
    bool ok = true;
    for (const auto& h : hgens) {
      if (character_exponent(G, g, h) != 0) {
        ok = false;
        break;
      }
    }
    if (ok) members.push_back(g);
  }
  return Subgroup(G, members);
}

inline constexpr std::int64_t kDenseGroupCap = 1024;

inline void require_dense(const AbelianGroup& G, const char* what) {
  if (G.order() > kDenseGroupCap) {
    throw CapabilityError(std::string(what) + ": |G| > 1024 too large for a dense matrix");
  }
}

/// F_G[g, h] = chi_g(h) / sqrt|G|.
inline DenseMatrix group_qft(const AbelianGroup& G) {
  require_dense(G, "group_qft");
  const std::int64_t n = G.order();
  const double s = 1.0 / std::sqrt(static_cast<double>(n));
  DenseMatrix F(n, n);
  for (std::int64_t g = 0; g < n; ++g) {
    const GroupElement eg = G.element(g);
    for (std::int64_t h = 0; h < n; ++h) F(g, h) = s * character_eval(G, eg, G.element(h));
  }
  return F;
}

/// Applies F_G = F_{N_1} (x) ... (x) F_{N_k} factor by factor, in place.
inline void apply_group_qft(const AbelianGroup& G, std::span<cplx> amps) {
  if (static_cast<std::int64_t>(amps.size()) != G.order()) {
    throw DomainError("apply_group_qft: vector length must equal |G|");
  }
  std::int64_t inner = G.order();
  for (std::size_t l = 0; l < G.rank(); ++l) {
    const std::int64_t n = G.moduli()[l];
    inner /= n;
    if (n == 1) continue;
    std::vector<cplx> roots(n);
    for (std::int64_t e = 0; e < n; ++e) roots[e] = root_of_unity(n, e) / std::sqrt(double(n));
    std::vector<cplx> in(n);
    const std::int64_t outer = G.order() / (n * inner);
    for (std::int64_t o = 0; o < outer; ++o) {
      for (std::int64_t i = 0; i < inner; ++i) {
        const std::int64_t base = o * n * inner + i;
        for (std::int64_t x = 0; x < n; ++x) in[x] = amps[base + x * inner];
        for (std::int64_t y = 0; y < n; ++y) {
          cplx acc{0.0, 0.0};
          for (std::int64_t x = 0; x < n; ++x) acc += roots[(x * y) % n] * in[x];
          amps[base + y * inner] = acc;
        }
      }
    }
  }
}

/// tau_t |g> = |t + g>.
inline DenseMatrix translation_op(const AbelianGroup& G, const GroupElement& t) {
  require_dense(G, "translation_op");
  DenseMatrix T = DenseMatrix::Zero(G.order(), G.order());
  for (std::int64_t g = 0; g < G.order(); ++g) T(G.index(G.add(t, G.element(g))), g) = 1.0;
  return T;
}

/// phi_h |g> = chi_g(h) |g>.
inline DenseMatrix phase_op(const AbelianGroup& G, const GroupElement& h) {
  require_dense(G, "phase_op");
  DenseMatrix P = DenseMatrix::Zero(G.order(), G.order());
  for (std::int64_t g = 0; g < G.order(); ++g) P(g, g) = character_eval(G, G.element(g), h);
  return P;
}

/// |H> = uniform superposition over the elements of H.
inline Amplitudes subgroup_state(const AbelianGroup& G, const Subgroup& H) {
  Amplitudes a(static_cast<std::size_t>(G.order()), cplx{0.0, 0.0});
  const double v = 1.0 / std::sqrt(static_cast<double>(H.order()));
  for (std::int64_t e : H.elements()) a[e] = v;
  return a;
}

// ---------------------------------------------------------------------------
// Oracles and sampling

/// f: G -> labels, constant exactly on the cosets of a hidden subgroup. The
/// label of g is the index of the lexicographically least element of g + H.
class CosetOracle {
 public:
  static constexpr std::int64_t kMaxOrder = std::int64_t{1} << 16;

  CosetOracle(const AbelianGroup& G, const Subgroup& H) : group_(G), hidden_(H) {
    if (G.order() > kMaxOrder) throw CapabilityError("CosetOracle: |G| > 2^16");
    labels_.assign(static_cast<std::size_t>(G.order()), -1);
    for (std::int64_t g = 0; g < G.order(); ++g) {
      if (labels_[g] != -1) continue;
      ++coset_count_;
      for (std::int64_t h : H.elements()) labels_[G.add_index(g, h)] = g;
    }
  }

  const AbelianGroup& group() const { return group_; }
  std::int64_t operator()(std::int64_t g) const {
    ++calls_;
    return labels_[g];
  }
  std::int64_t label(const GroupElement& g) const { return (*this)(group_.index(g)); }
  const std::vector<std::int64_t>& table() const { return labels_; }
  std::int64_t coset_count() const { return coset_count_; }
  std::uint64_t calls() const { return calls_; }

  /// The subgroup used to build the table. For checking results only.
  const Subgroup& hidden_for_testing() const { return hidden_; }

 private:
  AbelianGroup group_;
  Subgroup hidden_;
  std::vector<std::int64_t> labels_;
  std::int64_t coset_count_ = 0;
  mutable std::uint64_t calls_ = 0;
};

/// Simulates F_G|0>, one oracle query into a label register, and F_G on the
/// first register; then samples the first register. The final state is
/// computed once; each draw is a measurement of that state.
class HspSampler {
 public:
  static constexpr std::int64_t kMaxStateSize = std::int64_t{1} << 24;

  HspSampler(const AbelianGroup& G, const CosetOracle& f) : HspSampler(G, f.table()) {}

  /// `labels[g]` is the oracle value at element index g.
  HspSampler(const AbelianGroup& G, const std::vector<std::int64_t>& labels) : group_(G) {
    const std::int64_t n = G.order();
    if (static_cast<std::int64_t>(labels.size()) != n) {
      throw DomainError("HspSampler: label table length must equal |G|");
    }
    // Label register basis: the distinct oracle values, in first-seen order.
    std::map<std::int64_t, std::int64_t> slot;
    std::vector<std::int64_t> row_of(static_cast<std::size_t>(n));
    for (std::int64_t g = 0; g < n; ++g) {
      row_of[g] = slot.emplace(labels[g], static_cast<std::int64_t>(slot.size())).first->second;
    }
    rows_ = static_cast<std::int64_t>(slot.size());
    if (rows_ * n > kMaxStateSize) throw CapabilityError("HspSampler: state too large");
    // State layout: amplitude of |x>|label r> at r * n + x.
    state_.assign(static_cast<std::size_t>(rows_ * n), cplx{0.0, 0.0});
    // F_G|0> is uniform; the query writes f(g) into the second register.
    const double amp = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::int64_t g = 0; g < n; ++g) state_[row_of[g] * n + g] = amp;
    for (std::int64_t r = 0; r < rows_; ++r) {
      apply_group_qft(G, std::span<cplx>(state_.data() + r * n, static_cast<std::size_t>(n)));
    }
    probs_.assign(static_cast<std::size_t>(n), 0.0);
    for (std::int64_t r = 0; r < rows_; ++r)
      for (std::int64_t x = 0; x < n; ++x) probs_[x] += std::norm(state_[r * n + x]);
  }

  const AbelianGroup& group() const { return group_; }
  /// Amplitudes before measurement; |x>|label r> at r * |G| + x.
  const Amplitudes& final_state() const { return state_; }
  std::int64_t label_count() const { return rows_; }
  /// Distribution of the first-register measurement.
  const std::vector<double>& distribution() const { return probs_; }

  std::int64_t sample_index(std::uint64_t seed) const {
    DrawRng rng(seed);
    return static_cast<std::int64_t>(hsp::sample_index(probs_, uniform01(rng)));
  }
  GroupElement sample(std::uint64_t seed) const { return group_.element(sample_index(seed)); }

 private:
  AbelianGroup group_;
  std::int64_t rows_ = 0;
  Amplitudes state_;
  std::vector<double> probs_;
};

inline GroupElement hsp_sample(const AbelianGroup& G, const CosetOracle& f, std::uint64_t seed) {
  return HspSampler(G, f).sample(seed);
}

// ---------------------------------------------------------------------------
// Linear systems mod d

using IntMatrix = std::vector<std::vector<std::int64_t>>;

inline IntMatrix identity_matrix(std::size_t n) {
  IntMatrix I(n, std::vector<std::int64_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) I[i][i] = 1;
  return I;
}

inline IntMatrix mat_mul_mod(const IntMatrix& A, const IntMatrix& B, std::int64_t d) {
  const std::size_t r = A.size(), m = B.size(), c = B.empty() ? 0 : B[0].size();
  IntMatrix C(r, std::vector<std::int64_t>(c, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      if (A[i][k] == 0) continue;
      for (std::size_t j = 0; j < c; ++j) C[i][j] = (C[i][j] + A[i][k] * B[k][j]) % d;
    }
  for (auto& row : C)
    for (auto& x : row) x = mod(x, d);
  return C;
}

/// (g, x, y) with x a + y b = g = gcd(a, b), for a, b >= 0.
inline std::tuple<std::int64_t, std::int64_t, std::int64_t> extended_gcd(std::int64_t a,
                                                                         std::int64_t b) {
  std::int64_t r0 = a, r1 = b, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
  while (r1 != 0) {
    const std::int64_t q = r0 / r1;
    std::tie(r0, r1) = std::make_pair(r1, r0 - q * r1);
    std::tie(x0, x1) = std::make_pair(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_pair(y1, y0 - q * y1);
  }
  return {r0, x0, y0};
}

/// D = U A V (mod d) with D diagonal and U, V invertible mod d.
struct SmithForm {
  IntMatrix D, U, V;
};

inline SmithForm smith_normal_form(const IntMatrix& A_in, std::int64_t d) {
  if (d < 1) throw DomainError("smith_normal_form: modulus must be positive");
  const std::size_t rows = A_in.size();
  const std::size_t cols = rows ? A_in[0].size() : 0;
  IntMatrix A = A_in;
  for (auto& row : A) {
    if (row.size() != cols) throw DomainError("smith_normal_form: ragged matrix");
    for (auto& x : row) x = mod(x, d);
  }
  IntMatrix U = identity_matrix(rows), V = identity_matrix(cols);

  // Row ops act on A and U; column ops act on A and V.
  auto row_combine = [&](std::size_t p, std::size_t q, std::int64_t a, std::int64_t b,
                         std::int64_t c, std::int64_t e) {
    // [row p; row q] <- [[a, b], [c, e]] [row p; row q]
    for (IntMatrix* M : {&A, &U}) {
      auto& rp = (*M)[p];
      auto& rq = (*M)[q];
      for (std::size_t j = 0; j < rp.size(); ++j) {
        const std::int64_t x = rp[j], y = rq[j];
        rp[j] = mod((a % d) * x + (b % d) * y, d);
        rq[j] = mod((c % d) * x + (e % d) * y, d);
      }
    }
  };
  auto col_combine = [&](std::size_t p, std::size_t q, std::int64_t a, std::int64_t b,
                         std::int64_t c, std::int64_t e) {
    // [col p, col q] <- [col p, col q] [[a, c], [b, e]]
    for (IntMatrix* M : {&A, &V}) {
      for (auto& row : *M) {
        const std::int64_t x = row[p], y = row[q];
        row[p] = mod((a % d) * x + (b % d) * y, d);
        row[q] = mod((c % d) * x + (e % d) * y, d);
      }
    }
  };

  const std::size_t steps = std::min(rows, cols);
  for (std::size_t t = 0; t < steps; ++t) {
    // Pivot: the smallest nonzero entry of the remaining block.
    std::size_t pr = rows, pc = cols;
    for (std::size_t i = t; i < rows; ++i)
      for (std::size_t j = t; j < cols; ++j)
        if (A[i][j] != 0 && (pr == rows || A[i][j] < A[pr][pc])) {
          pr = i;
          pc = j;
        }
    if (pr == rows) break;
    if (pr != t) row_combine(t, pr, 0, 1, 1, 0);
    if (pc != t) col_combine(t, pc, 0, 1, 1, 0);
    // Each 2x2 step has determinant 1. When the pivot divides the entry it is
    // a plain elimination; otherwise the pivot drops to a proper divisor, so
    // the refill loop terminates.
    bool dirty = true;
    while (dirty) {
      dirty = false;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (A[i][t] == 0) continue;
        const std::int64_t a = A[t][t], b = A[i][t];
        if (b % a == 0) {
          row_combine(t, i, 1, 0, -(b / a), 1);
        } else {
          const auto [g, x, y] = extended_gcd(a, b);
          row_combine(t, i, x, y, -(b / g), a / g);
        }
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (A[t][j] == 0) continue;
        const std::int64_t a = A[t][t], b = A[t][j];
        if (b % a == 0) {
          col_combine(t, j, 1, 0, -(b / a), 1);
        } else {
          const auto [g, x, y] = extended_gcd(a, b);
          col_combine(t, j, x, y, -(b / g), a / g);
        }
      }
      for (std::size_t i = t + 1; i < rows && !dirty; ++i) dirty = A[i][t] != 0;
    }
  }
  return {A, U, V};
}

/// A X = 0 (mod d) with the Smith data used to enumerate solutions.
struct LinearSystemModD {
  IntMatrix A;
  std::int64_t d = 1;
  SmithForm snf;

  LinearSystemModD(IntMatrix a, std::int64_t modulus) : A(std::move(a)), d(modulus) {
    snf = smith_normal_form(A, d);
  }

  std::size_t unknowns() const { return snf.V.size(); }

  /// Uniform X with A X = 0 (mod d): Y_i uniform over multiples of
  /// d / gcd(D_ii, d), free where no diagonal entry exists, then X = V Y.
  template <class Gen>
  std::vector<std::int64_t> sample(Gen& rng) const {
    const std::size_t k = unknowns();
    std::vector<std::int64_t> Y(k);
    for (std::size_t i = 0; i < k; ++i) {
      const std::int64_t dii = i < snf.D.size() ? snf.D[i][i] : 0;
      const std::int64_t step = d / std::gcd(dii, d);
      Y[i] = step * static_cast<std::int64_t>(uniform_below(rng, static_cast<std::uint64_t>(d / step)));
    }
    std::vector<std::int64_t> X(k, 0);
    for (std::size_t r = 0; r < k; ++r) {
      for (std::size_t c = 0; c < k; ++c) X[r] = (X[r] + snf.V[r][c] * Y[c]) % d;
    }
    return X;
  }

  /// Number of solutions of D Y = 0, which equals that of A X = 0.
  std::int64_t solution_count() const {
    std::int64_t count = 1;
    for (std::size_t i = 0; i < unknowns(); ++i) {
      const std::int64_t dii = i < snf.D.size() ? snf.D[i][i] : 0;
      count *= std::gcd(dii, d);
    }
    return count;
  }

  bool satisfied_by(const std::vector<std::int64_t>& X) const {
    for (const auto& row : A) {
      std::int64_t s = 0;
      for (std::size_t c = 0; c < row.size(); ++c) s = (s + row[c] * X[c]) % d;
      if (mod(s, d) != 0) return false;
    }
    return true;
  }
};

/// Solutions are read as group coordinates X_l mod N_l.
inline GroupElement uniform_solution_sample(const LinearSystemModD& sys, const AbelianGroup& G,
                                            std::uint64_t seed) {
  DrawRng rng(seed);
  auto X = sys.sample(rng);
  for (std::size_t l = 0; l < G.rank(); ++l) X[l] = mod(X[l], G.moduli()[l]);
  return X;
}

// ---------------------------------------------------------------------------
// The full algorithm

struct HspResult {
  Subgroup recovered;
  std::vector<GroupElement> samples;    // draws from H-perp
  std::vector<GroupElement> solutions;  // draws from the solution space
  std::uint64_t oracle_calls = 0;
};

/// Default confidence t = ceil(log|G|) + 1, giving success >= 1 - 1/|G|.
inline unsigned default_confidence(const AbelianGroup& G) {
  return ceil_log2(static_cast<std::uint64_t>(G.order())) + 1;
}

/// Recovers H from T = t1 + ceil(log|G|) samples of H-perp and
/// S = t2 + ceil(log|G|) uniform solutions of the resulting system.
inline HspResult solve_hsp(const HspSampler& sampler, unsigned t1, unsigned t2,
                           std::uint64_t seed) {
  const AbelianGroup& G = sampler.group();
  const unsigned lg = ceil_log2(static_cast<std::uint64_t>(G.order()));
  const std::int64_t d = G.lcm();
  HspResult res;
  IntMatrix A;
  for (unsigned j = 0; j < t1 + lg; ++j) {
    const GroupElement g = sampler.sample(derive_seed(seed, j));
    std::vector<std::int64_t> row(G.rank());
    for (std::size_t l = 0; l < G.rank(); ++l) row[l] = (G.alphas()[l] * g[l]) % d;
    A.push_back(std::move(row));
    res.samples.push_back(g);
  }
  res.oracle_calls = t1 + lg;
  if (A.empty()) A.push_back(std::vector<std::int64_t>(G.rank(), 0));
  const LinearSystemModD sys(std::move(A), d);
  for (unsigned j = 0; j < t2 + lg; ++j) {
    res.solutions.push_back(uniform_solution_sample(sys, G, derive_seed(seed, 1000003 + j)));
  }
  res.recovered = Subgroup(G, res.solutions);
  return res;
}

inline HspResult solve_hsp(const AbelianGroup& G, const CosetOracle& f, unsigned t1, unsigned t2,
                           std::uint64_t seed) {
  return solve_hsp(HspSampler(G, f), t1, t2, seed);
}

inline nlohmann::json to_json(const AbelianGroup& G, const Subgroup& hidden, const HspResult& r) {
  auto list = [](const std::vector<GroupElement>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& g : v) a.push_back(g);
    return a;
  };
  std::vector<GroupElement> rec;
  for (std::int64_t e : r.recovered.elements()) rec.push_back(G.element(e));
  std::vector<GroupElement> hid;
  for (std::int64_t e : hidden.elements()) hid.push_back(G.element(e));
  return {{"group", G.to_string()},
          {"hidden", list(hid)},
          {"recovered", list(rec)},
          {"samples", list(r.samples)},
          {"solutions", list(r.solutions)},
          {"oracle_calls", r.oracle_calls},
          {"success", r.recovered == hidden}};
}

}  // namespace hsp
