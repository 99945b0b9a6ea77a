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

// Explicit Cayley tables for small groups and the Ettinger-Hoyer-Knill
// procedure: m copies of a random coset state, then sequential two-outcome
// measurements of the projectors onto span{|b_1 K> (x) ... (x) |b_m K>} for
// the cyclic subgroups K = <g>.
//
// States on (C^|G|)^{(x) m} are held as sums of product terms, so a
// projection costs O(terms * m * |G|) instead of O(|G|^m).

#pragma once

#include <algorithm>
#include <array>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hsp/abelian.hpp"
#include "hsp/common.hpp"
#include "json.hpp"

namespace hsp {

// ---------------------------------------------------------------------------
// Group tables

using Permutation = std::vector<int>;

/// (a * b)(i) = a(b(i)): apply b first.
inline Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
  return c;
}

inline Permutation inverse(const Permutation& a) {
  Permutation c(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) c[a[i]] = static_cast<int>(i);
  return c;
}

inline std::string permutation_to_string(const Permutation& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + "]";
}

class FiniteGroupTable {
 public:
  static constexpr int kMaxOrder = 4096;

  FiniteGroupTable() : FiniteGroupTable({{0}}, {"e"}) {}

  /// Validates the table: Latin square, identity, inverses, associativity.
  explicit FiniteGroupTable(std::vector<std::vector<int>> table, std::vector<std::string> names = {},
                            std::string name = "G")
      : mul_(std::move(table)), names_(std::move(names)), name_(std::move(name)) {
    n_ = static_cast<int>(mul_.size());
    if (n_ < 1 || n_ > kMaxOrder) throw CapabilityError("FiniteGroupTable: order must be 1..4096");
    for (const auto& row : mul_) {
      if (static_cast<int>(row.size()) != n_) throw DomainError("FiniteGroupTable: table not square");
      std::vector<char> seen(n_, 0);
      for (int x : row) {
        if (x < 0 || x >= n_ || seen[x]) throw DomainError("FiniteGroupTable: row is not a permutation");
        seen[x] = 1;
      }
    }
    identity_ = -1;
    for (int e = 0; e < n_ && identity_ < 0; ++e) {
      bool ok = true;
      for (int x = 0; x < n_ && ok; ++x) ok = mul_[e][x] == x && mul_[x][e] == x;
      if (ok) identity_ = e;
    }
    if (identity_ < 0) throw DomainError("FiniteGroupTable: no identity element");
    inv_.assign(n_, -1);
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        if (mul_[a][b] == identity_ && mul_[b][a] == identity_) inv_[a] = b;
    for (int a = 0; a < n_; ++a)
      if (inv_[a] < 0) throw DomainError("FiniteGroupTable: element without inverse");
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int c = 0; c < n_; ++c)
          if (mul_[mul_[a][b]][c] != mul_[a][mul_[b][c]]) {
            throw DomainError("FiniteGroupTable: multiplication is not associative");
          }
    if (names_.empty())
      for (int a = 0; a < n_; ++a) names_.push_back(std::to_string(a));
    if (static_cast<int>(names_.size()) != n_) throw DomainError("FiniteGroupTable: name count");
  }

  int order() const { return n_; }
  int identity() const { return identity_; }
  int mul(int a, int b) const { return mul_[a][b]; }
  int inv(int a) const { return inv_[a]; }
  const std::vector<std::vector<int>>& table() const { return mul_; }
  const std::vector<std::string>& names() const { return names_; }
  const std::string& name() const { return name_; }

  bool is_abelian() const {
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < a; ++b)
        if (mul_[a][b] != mul_[b][a]) return false;
    return true;
  }

  /// First line n, then n rows of n element indices.
  static FiniteGroupTable parse(std::istream& in, std::string name = "G") {
    int n = 0;
    if (!(in >> n) || n < 1) throw DomainError("FiniteGroupTable::parse: bad order line");
    if (n > kMaxOrder) throw CapabilityError("FiniteGroupTable::parse: order too large");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (auto& row : t)
      for (auto& x : row)
        if (!(in >> x)) throw DomainError("FiniteGroupTable::parse: table truncated");
    std::string extra;
    if (in >> extra) throw DomainError("FiniteGroupTable::parse: trailing data");
    return FiniteGroupTable(std::move(t), {}, std::move(name));
  }

  static FiniteGroupTable load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("FiniteGroupTable::load: cannot open " + path);
    return parse(f, path);
  }

  std::string serialize() const {
    std::ostringstream s;
    s << n_ << "\n";
    for (const auto& row : mul_) {
      for (int i = 0; i < n_; ++i) s << (i ? " " : "") << row[i];
      s << "\n";
    }
    return s.str();
  }

  /// Group generated by permutations; elements sorted so the identity is 0.
  static FiniteGroupTable from_permutations(const std::vector<Permutation>& gens, std::string name) {
    if (gens.empty()) throw DomainError("from_permutations: need a generator");
    const std::size_t deg = gens[0].size();
    Permutation id(deg);
    std::iota(id.begin(), id.end(), 0);
    std::set<Permutation> seen{id};
    std::vector<Permutation> frontier{id};
    while (!frontier.empty()) {
      std::vector<Permutation> next;
      for (const auto& p : frontier)
        for (const auto& g : gens) {
          auto q = compose(p, g);
          if (seen.insert(q).second) next.push_back(std::move(q));
        }
      if (static_cast<int>(seen.size()) > kMaxOrder) throw CapabilityError("from_permutations: too large");
      frontier = std::move(next);
    }
    const std::vector<Permutation> elems(seen.begin(), seen.end());
    std::map<Permutation, int> idx;
    for (std::size_t i = 0; i < elems.size(); ++i) idx[elems[i]] = static_cast<int>(i);
    std::vector<std::vector<int>> t(elems.size(), std::vector<int>(elems.size()));
    std::vector<std::string> names;
    for (std::size_t a = 0; a < elems.size(); ++a) {
      names.push_back(permutation_to_string(elems[a]));
      for (std::size_t b = 0; b < elems.size(); ++b) t[a][b] = idx.at(compose(elems[a], elems[b]));
    }
    return FiniteGroupTable(std::move(t), std::move(names), std::move(name));
  }

  static FiniteGroupTable from_abelian(const AbelianGroup& G) {
    if (G.order() > kMaxOrder) throw CapabilityError("from_abelian: order too large");
    const int n = static_cast<int>(G.order());
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    std::vector<std::string> names;
    for (int a = 0; a < n; ++a) {
      names.push_back(element_to_string(G.element(a)));
      for (int b = 0; b < n; ++b) t[a][b] = static_cast<int>(G.add_index(a, b));
    }
    return FiniteGroupTable(std::move(t), std::move(names), G.to_string());
  }

  Permutation permutation_of(int a) const {
    // Regular representation; lets callers check names on permutation groups.
    Permutation p(n_);
    for (int x = 0; x < n_; ++x) p[x] = mul_[a][x];
    return p;
  }

 private:
  int n_ = 1;
  int identity_ = 0;
  std::vector<std::vector<int>> mul_;
  std::vector<int> inv_;
  std::vector<std::string> names_;
  std::string name_;
};

inline FiniteGroupTable cyclic_group(int n) {
  if (n < 1) throw DomainError("cyclic_group: n must be >= 1");
  auto t = FiniteGroupTable::from_abelian(AbelianGroup({n}));
  return FiniteGroupTable(t.table(), t.names(), "Z" + std::to_string(n));
}

inline FiniteGroupTable klein_group() {
  auto t = FiniteGroupTable::from_abelian(AbelianGroup({2, 2}));
  return FiniteGroupTable(t.table(), t.names(), "Z2xZ2");
}

inline FiniteGroupTable symmetric_group(int n) {
  if (n < 1 || n > 6) throw CapabilityError("symmetric_group: n must be 1..6");
  Permutation id(n);
  std::iota(id.begin(), id.end(), 0);
  std::vector<Permutation> gens{id};
  if (n >= 2) {
    Permutation t = id;
    std::swap(t[0], t[1]);
    Permutation c(n);
    for (int i = 0; i < n; ++i) c[i] = (i + 1) % n;
    gens = {t, c};
  }
  return FiniteGroupTable::from_permutations(gens, "S" + std::to_string(n));
}

/// Symmetries of a square on vertices 0..3.
inline FiniteGroupTable dihedral_group_d4() {
  return FiniteGroupTable::from_permutations({{1, 2, 3, 0}, {0, 3, 2, 1}}, "D4");
}

/// Quaternion units; element 2*u + s is (-1)^s times unit u in {1, i, j, k}.
inline FiniteGroupTable quaternion_group() {
  // unit_mul[u][v] = (sign, unit) of u * v.
  const std::array<std::array<std::pair<int, int>, 4>, 4> unit_mul{{
      {{{0, 0}, {0, 1}, {0, 2}, {0, 3}}},
      {{{0, 1}, {1, 0}, {0, 3}, {1, 2}}},
      {{{0, 2}, {1, 3}, {1, 0}, {0, 1}}},
      {{{0, 3}, {0, 2}, {1, 1}, {1, 0}}},
  }};
  const std::array<std::string, 4> unit_name{"1", "i", "j", "k"};
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  std::vector<std::string> names(8);
  for (int a = 0; a < 8; ++a) {
    names[a] = (a % 2 ? "-" : "") + unit_name[a / 2];
    for (int b = 0; b < 8; ++b) {
      const auto [s, u] = unit_mul[a / 2][b / 2];
      t[a][b] = 2 * u + ((s + a % 2 + b % 2) % 2);
    }
  }
  return FiniteGroupTable(std::move(t), std::move(names), "Q8");
}

/// Bundled groups by name: Z1..Z8, Z2xZ2, S3, D4, Q8, S4.
inline FiniteGroupTable bundled_group(const std::string& name) {
  if (name.size() == 2 && name[0] == 'Z' && name[1] >= '1' && name[1] <= '8') {
    return cyclic_group(name[1] - '0');
  }
  if (name == "Z2xZ2") return klein_group();
  if (name == "S3") return symmetric_group(3);
  if (name == "S4") return symmetric_group(4);
  if (name == "D4") return dihedral_group_d4();
  if (name == "Q8") return quaternion_group();
  throw DomainError("bundled_group: unknown group \"" + name + "\"");
}

/// A subgroup of a table group as a sorted element list.
struct TableSubgroup {
  std::vector<int> elements;

  int order() const { return static_cast<int>(elements.size()); }
  bool contains(int g) const { return std::binary_search(elements.begin(), elements.end(), g); }
  bool operator==(const TableSubgroup& o) const { return elements == o.elements; }
  bool operator<(const TableSubgroup& o) const { return elements < o.elements; }
};

inline TableSubgroup closure(const FiniteGroupTable& G, const std::vector<int>& gens) {
  std::vector<char> in(G.order(), 0);
  std::vector<int> members{G.identity()};
  in[G.identity()] = 1;
  for (std::size_t i = 0; i < members.size(); ++i) {
    for (int g : gens) {
      if (g < 0 || g >= G.order()) throw DomainError("closure: generator out of range");
      const int x = G.mul(members[i], g);
      if (!in[x]) {
        in[x] = 1;
        members.push_back(x);
      }
    }
  }
  std::sort(members.begin(), members.end());
  return {members};
}

inline TableSubgroup cyclic_subgroup(const FiniteGroupTable& G, int g) { return closure(G, {g}); }

inline TableSubgroup intersect(const TableSubgroup& a, const TableSubgroup& b) {
  TableSubgroup c;
  std::set_intersection(a.elements.begin(), a.elements.end(), b.elements.begin(), b.elements.end(),
                        std::back_inserter(c.elements));
  return c;
}

inline bool is_subset(const TableSubgroup& a, const TableSubgroup& b) {
  return std::includes(b.elements.begin(), b.elements.end(), a.elements.begin(), a.elements.end());
}

/// Every subgroup, by closing known subgroups under one more element.
inline std::vector<TableSubgroup> subgroup_lattice(const FiniteGroupTable& G) {
  if (G.order() > 128) throw CapabilityError("subgroup_lattice: order too large");
  std::set<TableSubgroup> seen;
  std::vector<std::vector<int>> gens_of;
  std::vector<TableSubgroup> out;
  auto add = [&](std::vector<int> gens) {
    TableSubgroup S = closure(G, gens);
    if (seen.insert(S).second) {
      out.push_back(S);
      gens_of.push_back(std::move(gens));
    }
  };
  add({});
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int g = 0; g < G.order(); ++g) {
      if (out[i].contains(g)) continue;
      auto gens = gens_of[i];
      gens.push_back(g);
      add(gens);
    }
  }
  std::sort(out.begin(), out.end(), [](const TableSubgroup& a, const TableSubgroup& b) {
    return a.order() != b.order() ? a.order() < b.order() : a.elements < b.elements;
  });
  return out;
}

/// Label of g is the least element of the left coset gH.
inline std::vector<int> left_coset_labels(const FiniteGroupTable& G, const TableSubgroup& H) {
  std::vector<int> label(G.order());
  for (int g = 0; g < G.order(); ++g) {
    int best = G.order();
    for (int h : H.elements) best = std::min(best, G.mul(g, h));
    label[g] = best;
  }
  return label;
}

/// Distinct left cosets of K, each a sorted element list.
inline std::vector<std::vector<int>> left_cosets(const FiniteGroupTable& G, const TableSubgroup& K) {
  std::map<int, std::vector<int>> by_label;
  const auto label = left_coset_labels(G, K);
  for (int g = 0; g < G.order(); ++g) by_label[label[g]].push_back(g);
  std::vector<std::vector<int>> out;
  for (auto& [l, c] : by_label) out.push_back(std::move(c));
  return out;
}

// ---------------------------------------------------------------------------
// Projectors and product states

/// P = sum over distinct left cosets bK of |bK><bK|.
class CosetProjector {
 public:
  CosetProjector(const FiniteGroupTable& G, const TableSubgroup& K)
      : dim_(G.order()), subgroup_(K), cosets_(left_cosets(G, K)) {}

  Amplitudes apply(const Amplitudes& v) const {
    Amplitudes out(v.size(), cplx{0.0, 0.0});
    for (const auto& c : cosets_) {
      cplx s{0.0, 0.0};
      for (int x : c) s += v[x];
      s /= static_cast<double>(c.size());
      for (int x : c) out[x] = s;
    }
    return out;
  }

  DenseMatrix matrix() const {
    DenseMatrix P = DenseMatrix::Zero(dim_, dim_);
    for (const auto& c : cosets_)
      for (int x : c)
        for (int y : c) P(x, y) = 1.0 / static_cast<double>(c.size());
    return P;
  }

  const TableSubgroup& subgroup() const { return subgroup_; }
  int dim() const { return dim_; }

 private:
  int dim_;
  TableSubgroup subgroup_;
  std::vector<std::vector<int>> cosets_;
};

inline cplx inner(const Amplitudes& a, const Amplitudes& b) {
  cplx s{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// sum_t c_t (f_t1 (x) ... (x) f_tm).
class ProductState {
 public:
  struct Term {
    cplx coef;
    std::vector<Amplitudes> factors;
  };

  static constexpr std::size_t kMaxTerms = std::size_t{1} << 16;
  static constexpr double kPrune = 1e-14;

  ProductState() = default;
  ProductState(int dim, unsigned m) : dim_(dim), m_(m) {}

  static ProductState product(std::vector<Amplitudes> factors) {
    if (factors.empty()) throw DomainError("ProductState: need at least one factor");
    ProductState s(static_cast<int>(factors[0].size()), static_cast<unsigned>(factors.size()));
    s.terms_.push_back({cplx{1.0, 0.0}, std::move(factors)});
    return s;
  }

  int dim() const { return dim_; }
  unsigned copies() const { return m_; }
  const std::vector<Term>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  void add_term(cplx coef, std::vector<Amplitudes> factors) {
    if (factors.size() != m_) throw DomainError("ProductState: factor count mismatch");
    terms_.push_back({coef, std::move(factors)});
    if (terms_.size() > kMaxTerms) throw CapabilityError("ProductState: more than 2^16 terms");
  }

  /// <this|other> by pairwise term products.
  cplx inner(const ProductState& o) const {
    cplx s{0.0, 0.0};
    for (const auto& a : terms_)
      for (const auto& b : o.terms_) {
        cplx p = std::conj(a.coef) * b.coef;
        for (unsigned i = 0; i < m_ && p != cplx{0.0, 0.0}; ++i) p *= hsp::inner(a.factors[i], b.factors[i]);
        s += p;
      }
    return s;
  }

  double norm_squared() const { return inner(*this).real(); }

  void scale(cplx c) {
    for (auto& t : terms_) t.coef *= c;
  }

  /// P^{(x) m} applied term by term.
  ProductState project(const CosetProjector& P) const {
    ProductState out(dim_, m_);
    for (const auto& t : terms_) {
      std::vector<Amplitudes> f;
      f.reserve(m_);
      for (const auto& v : t.factors) f.push_back(P.apply(v));
      out.add_term(t.coef, std::move(f));
    }
    out.compact();
    return out;
  }

  /// (I - P^{(x) m}) applied term by term: each term becomes two.
  ProductState project_complement(const CosetProjector& P) const {
    ProductState out = *this;
    const ProductState p = project(P);
    for (const auto& t : p.terms_) out.add_term(-t.coef, t.factors);
    out.compact();
    return out;
  }

  ProductState minus(const ProductState& o) const {
    ProductState out = *this;
    for (const auto& t : o.terms_) out.add_term(-t.coef, t.factors);
    out.compact();
    return out;
  }

  /// Merges terms with identical factor lists and drops negligible ones.
  void compact() {
    std::vector<Term> kept;
    for (auto& t : terms_) {
      double mag = std::abs(t.coef);
      for (const auto& f : t.factors) mag *= std::sqrt(hsp::inner(f, f).real());
      if (mag < kPrune) continue;
      bool merged = false;
      for (auto& k : kept) {
        bool same = true;
        for (unsigned i = 0; i < m_ && same; ++i)
          for (int x = 0; x < dim_ && same; ++x)
            same = std::abs(k.factors[i][x] - t.factors[i][x]) <= kPrune;
        if (same) {
          k.coef += t.coef;
          merged = true;
          break;
        }
      }
      if (!merged) kept.push_back(std::move(t));
    }
    // Merging can cancel terms exactly.
    std::erase_if(kept, [](const Term& t) { return std::abs(t.coef) < kPrune; });
    terms_ = std::move(kept);
  }

  /// Dense vector; factor 0 is the most significant digit.
  Amplitudes to_dense() const {
    std::size_t size = 1;
    for (unsigned i = 0; i < m_; ++i) {
      size *= static_cast<std::size_t>(dim_);
      if (size > (std::size_t{1} << 24)) throw CapabilityError("ProductState::to_dense: too large");
    }
    Amplitudes out(size, cplx{0.0, 0.0});
    for (const auto& t : terms_) {
      Amplitudes cur{t.coef};
      for (const auto& f : t.factors) {
        Amplitudes next(cur.size() * f.size());
        for (std::size_t a = 0; a < cur.size(); ++a)
          for (std::size_t b = 0; b < f.size(); ++b) next[a * f.size() + b] = cur[a] * f[b];
        cur = std::move(next);
      }
      for (std::size_t i = 0; i < size; ++i) out[i] += cur[i];
    }
    return out;
  }

 private:
  int dim_ = 1;
  unsigned m_ = 0;
  std::vector<Term> terms_;
};

/// Applies P on every copy of a dense vector in (C^dim)^{(x) m}.
inline Amplitudes dense_project(const Amplitudes& v, const CosetProjector& P, unsigned m) {
  Amplitudes cur = v;
  const std::size_t dim = static_cast<std::size_t>(P.dim());
  std::size_t inner_stride = 1;
  for (unsigned axis = 0; axis < m; ++axis) {
    // Axis `axis` counted from the least significant digit.
    const std::size_t outer = cur.size() / (dim * inner_stride);
    Amplitudes fiber(dim);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t i = 0; i < inner_stride; ++i) {
        const std::size_t base = o * dim * inner_stride + i;
        for (std::size_t x = 0; x < dim; ++x) fiber[x] = cur[base + x * inner_stride];
        const Amplitudes p = P.apply(fiber);
        for (std::size_t x = 0; x < dim; ++x) cur[base + x * inner_stride] = p[x];
      }
    inner_stride *= dim;
  }
  return cur;
}

inline Amplitudes uniform_on(int dim, const std::vector<int>& support) {
  Amplitudes v(dim, cplx{0.0, 0.0});
  const double a = 1.0 / std::sqrt(static_cast<double>(support.size()));
  for (int x : support) v[x] = a;
  return v;
}

/// Prepares m coset states from an oracle f (labels[g] = f(g)): for each
/// copy a uniformly random g is drawn, which is what observing the label
/// register of sum_g |g>|f(g)> produces, and the copy collapses to the
/// uniform superposition over {x : f(x) = f(g)}.
inline ProductState coset_state_from_oracle(const FiniteGroupTable& G, const std::vector<int>& labels,
                                            unsigned m, std::uint64_t seed,
                                            std::vector<int>* reps = nullptr) {
  if (static_cast<int>(labels.size()) != G.order()) throw DomainError("coset_state: label count");
  if (m < 1) throw DomainError("coset_state: m must be >= 1");
  Rng rng(seed);
  std::vector<Amplitudes> factors;
  for (unsigned i = 0; i < m; ++i) {
    const int g = static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(G.order())));
    if (reps) reps->push_back(g);
    std::vector<int> support;
    for (int x = 0; x < G.order(); ++x)
      if (labels[x] == labels[g]) support.push_back(x);
    factors.push_back(uniform_on(G.order(), support));
  }
  return ProductState::product(std::move(factors));
}

inline ProductState coset_state(const FiniteGroupTable& G, const TableSubgroup& H, unsigned m,
                                std::uint64_t seed) {
  return coset_state_from_oracle(G, left_coset_labels(G, H), m, seed);
}

/// <psi|P_K^{(x) m}|psi>.
inline double overlap_pk(const FiniteGroupTable& G, const ProductState& psi, const TableSubgroup& K) {
  const CosetProjector P(G, K);
  return psi.inner(psi.project(P)).real();
}

/// (|H n K| / |K|)^m.
inline double overlap_formula(const TableSubgroup& H, const TableSubgroup& K, unsigned m) {
  return std::pow(static_cast<double>(intersect(H, K).order()) / K.order(), static_cast<double>(m));
}

/// Dense <psi|P_K|psi> for |G|^m <= 2^20.
inline double overlap_pk_dense(const FiniteGroupTable& G, const ProductState& psi,
                               const TableSubgroup& K) {
  const Amplitudes v = psi.to_dense();
  const Amplitudes p = dense_project(v, CosetProjector(G, K), psi.copies());
  return inner(v, p).real();
}

inline bool dense_feasible(int order, unsigned m) {
  double size = std::pow(static_cast<double>(order), static_cast<double>(m));
  return size <= static_cast<double>(1 << 20);
}

// ---------------------------------------------------------------------------
// The procedure

struct EhkMeasurement {
  int element = 0;
  bool outcome = false;      // +1
  double probability = 0.0;  // probability of +1 given the state before
  std::size_t terms = 0;     // term count after the measurement
};

struct EhkResult {
  std::vector<int> found;  // elements judged to be in H, sorted
  std::vector<EhkMeasurement> measurements;
  std::vector<int> skipped;   // implied by confirmed members
  unsigned oracle_calls = 0;  // m
};

/// Sequential measurements of A_<g> for g in table order. An element in the
/// subgroup generated by confirmed members is recorded without measuring.
/// Largest group the product-state simulation handles in reasonable time.
inline constexpr int kEhkMaxSimulatedOrder = 24;

inline EhkResult ehk_run(const FiniteGroupTable& G, const std::vector<int>& labels, unsigned m,
                         std::uint64_t seed) {
  if (G.order() > kEhkMaxSimulatedOrder) throw CapabilityError("ehk_run: group order exceeds 24");
  EhkResult res;
  res.oracle_calls = m;
  ProductState psi = coset_state_from_oracle(G, labels, m, derive_seed(seed, 0));
  Rng rng(derive_seed(seed, 1));
  std::vector<int> confirmed;
  TableSubgroup implied = closure(G, {});
  for (int g = 0; g < G.order(); ++g) {
    if (implied.contains(g)) {
      res.skipped.push_back(g);
      continue;
    }
    const CosetProjector P(G, cyclic_subgroup(G, g));
    ProductState plus = psi.project(P);
    const double total = psi.norm_squared();
    const double p_plus = std::clamp(psi.inner(plus).real() / total, 0.0, 1.0);
    EhkMeasurement meas{g, uniform01(rng) < p_plus, p_plus, 0};
    if (meas.outcome) {
      psi = std::move(plus);
      confirmed.push_back(g);
      implied = closure(G, confirmed);
    } else {
      psi = psi.minus(plus);
    }
    const double nn = psi.norm_squared();
    if (nn <= 0.0) throw DomainError("ehk_run: measured a zero-probability branch");
    psi.scale(1.0 / std::sqrt(nn));
    meas.terms = psi.term_count();
    res.measurements.push_back(meas);
  }
  res.found = implied.elements;
  return res;
}

inline EhkResult ehk_run(const FiniteGroupTable& G, const TableSubgroup& H, unsigned m,
                         std::uint64_t seed) {
  return ehk_run(G, left_coset_labels(G, H), m, seed);
}

/// ceil(4 log|G| + 2).
inline unsigned ehk_copies(int order) {
  return static_cast<unsigned>(std::ceil(4.0 * std::log2(static_cast<double>(order)) + 2.0 - 1e-12));
}

/// 1 - 2|G| / 2^{m/2}.
inline double ehk_success_bound(int order, unsigned m) {
  return 1.0 - 2.0 * order / std::pow(2.0, m / 2.0);
}

struct ErrorCascade {
  std::vector<double> error_norms;  // <E_i|E_i>, i = 0..|G|
  std::vector<double> bounds;       // i^2 / 2^m
  double final_fidelity = 0.0;      // <Psi_|G| | Psi_|G|>
  std::size_t max_terms = 0;

  bool within_bounds() const {
    for (std::size_t i = 0; i < error_norms.size(); ++i)
      if (error_norms[i] > bounds[i] + 1e-12) return false;
    return true;
  }
};

/// Psi_i = P_<g_i> Psi_{i-1} if g_i in H, else the complement projection,
/// over every element in table order; E_i = Psi - Psi_i.
inline ErrorCascade error_accumulation_check(const FiniteGroupTable& G, const TableSubgroup& H,
                                             unsigned m, std::uint64_t seed) {
  const ProductState psi = coset_state(G, H, m, seed);
  ErrorCascade out;
  ProductState cur = psi;
  const double scale = std::pow(2.0, -static_cast<double>(m));
  out.error_norms.push_back(0.0);
  out.bounds.push_back(0.0);
  for (int i = 1; i <= G.order(); ++i) {
    const int g = i - 1;
    const CosetProjector P(G, cyclic_subgroup(G, g));
    cur = H.contains(g) ? cur.project(P) : cur.project_complement(P);
    out.max_terms = std::max(out.max_terms, cur.term_count());
    out.error_norms.push_back(std::max(0.0, psi.minus(cur).norm_squared()));
    out.bounds.push_back(static_cast<double>(i) * i * scale);
  }
  out.final_fidelity = cur.norm_squared();
  return out;
}

inline nlohmann::json to_json(const FiniteGroupTable& G, const EhkResult& r) {
  nlohmann::json meas = nlohmann::json::array();
  for (const auto& x : r.measurements) {
    meas.push_back({{"element", G.names()[x.element]},
                    {"outcome", x.outcome ? 1 : -1},
                    {"p_plus", x.probability},
                    {"terms", x.terms}});
  }
  std::vector<std::string> found;
  for (int e : r.found) found.push_back(G.names()[e]);
  return {{"group", G.name()}, {"found", found}, {"oracle_calls", r.oracle_calls}, {"measurements", meas}};
}

}  // namespace hsp
