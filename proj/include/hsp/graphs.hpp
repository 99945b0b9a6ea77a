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

// Graph isomorphism problems and their polynomial equivalences: the vertex
// labelling gadget, IMAP / ACOUNT / ICOUNT / APART / AGEN driven by a
// pluggable ISO decision oracle with a call counter, the reverse criteria
// deciding ISO from ACOUNT, AGEN or APART on a disjoint union, and the
// coset-separating function on S_n.

#pragma once

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "hsp/common.hpp"
#include "hsp/ehk.hpp"
#include "json.hpp"

namespace hsp {

using Edge = std::pair<int, int>;

/// Simple undirected graph with a sorted edge list of sorted pairs.
class Graph {
 public:
  Graph() = default;

  explicit Graph(int n, std::vector<Edge> edges = {}) : n_(n), nbrs_(n) {
    if (n < 0) throw DomainError("Graph: negative vertex count");
    for (auto& [u, v] : edges) {
      if (u < 0 || v < 0 || u >= n || v >= n) throw DomainError("Graph: edge endpoint out of range");
      if (u == v) throw DomainError("Graph: self-loops are not allowed");
      if (u > v) std::swap(u, v);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
      throw DomainError("Graph: duplicate edge");
    }
    edges_ = std::move(edges);
    for (const auto& [u, v] : edges_) {
      nbrs_[u].push_back(v);
      nbrs_[v].push_back(u);
    }
    for (auto& l : nbrs_) std::sort(l.begin(), l.end());
  }

  int n() const { return n_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<int>& neighbors(int v) const { return nbrs_[v]; }
  int degree(int v) const { return static_cast<int>(nbrs_[v].size()); }
  bool adjacent(int u, int v) const { return std::binary_search(nbrs_[u].begin(), nbrs_[u].end(), v); }

  bool operator==(const Graph& o) const { return n_ == o.n_ && edges_ == o.edges_; }

  /// Vertex v becomes perm[v].
  Graph relabel(const std::vector<int>& perm) const {
    if (static_cast<int>(perm.size()) != n_) throw DomainError("Graph::relabel: size mismatch");
    std::vector<Edge> e;
    e.reserve(edges_.size());
    for (const auto& [u, v] : edges_) e.emplace_back(perm[u], perm[v]);
    return Graph(n_, std::move(e));
  }

  Graph complement() const {
    std::vector<Edge> e;
    for (int u = 0; u < n_; ++u)
      for (int v = u + 1; v < n_; ++v)
        if (!adjacent(u, v)) e.emplace_back(u, v);
    return Graph(n_, std::move(e));
  }

  bool connected() const {
    if (n_ <= 1) return true;
    std::vector<char> seen(n_, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : nbrs_[v])
        if (!seen[w]) {
          seen[w] = 1;
          ++count;
          stack.push_back(w);
        }
    }
    return count == n_;
  }

  /// First line "n m", then m lines "u v", 0-based.
  static Graph parse(std::istream& in) {
    long long n = 0, m = 0;
    if (!(in >> n >> m) || n < 0 || m < 0) throw DomainError("Graph::parse: bad header line");
    if (n > 100000) throw CapabilityError("Graph::parse: too many vertices");
    std::vector<Edge> e;
    for (long long i = 0; i < m; ++i) {
      int u = 0, v = 0;
      if (!(in >> u >> v)) throw DomainError("Graph::parse: edge list truncated");
      e.emplace_back(u, v);
    }
    std::string extra;
    if (in >> extra) throw DomainError("Graph::parse: trailing data");
    return Graph(static_cast<int>(n), std::move(e));
  }

  static Graph load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("Graph::load: cannot open " + path);
    return parse(f);
  }

  std::string serialize() const {
    std::ostringstream s;
    s << n_ << " " << edges_.size() << "\n";
    for (const auto& [u, v] : edges_) s << u << " " << v << "\n";
    return s.str();
  }

 private:
  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> nbrs_;
};

inline Graph complete_graph(int n) {
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) e.emplace_back(u, v);
  return Graph(n, e);
}

inline Graph path_graph(int n) {
  std::vector<Edge> e;
  for (int v = 0; v + 1 < n; ++v) e.emplace_back(v, v + 1);
  return Graph(n, e);
}

inline Graph cycle_graph(int n) {
  if (n < 3) throw DomainError("cycle_graph: n must be >= 3");
  std::vector<Edge> e;
  for (int v = 0; v < n; ++v) e.emplace_back(v, (v + 1) % n);
  return Graph(n, e);
}

/// G1's vertices keep their numbers; G2's are shifted by n1.
inline Graph disjoint_union(const Graph& a, const Graph& b) {
  std::vector<Edge> e = a.edges();
  for (const auto& [u, v] : b.edges()) e.emplace_back(u + a.n(), v + a.n());
  return Graph(a.n() + b.n(), std::move(e));
}

inline bool is_isomorphism(const Graph& a, const Graph& b, const std::vector<int>& map) {
  if (a.n() != b.n() || a.edge_count() != b.edge_count()) return false;
  if (static_cast<int>(map.size()) != a.n()) return false;
  std::vector<char> used(b.n(), 0);
  for (int x : map) {
    if (x < 0 || x >= b.n() || used[x]) return false;
    used[x] = 1;
  }
  for (const auto& [u, v] : a.edges())
    if (!b.adjacent(map[u], map[v])) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Exhaustive permutation search (reference)

inline constexpr int kBruteForceMaxVertices = 9;

namespace detail {

/// Extends partial maps vertex by vertex, pruning on degree and adjacency to
/// already-mapped vertices. Calls `leaf` for each full isomorphism; stops
/// when it returns false.
inline void enumerate_isomorphisms(const Graph& a, const Graph& b,
                                   const std::function<bool(const std::vector<int>&)>& leaf) {
  const int n = a.n();
  std::vector<int> map(n, -1);
  std::vector<char> used(n, 0);
  bool stop = false;
  std::function<void(int)> rec = [&](int i) {
    if (stop) return;
    if (i == n) {
      stop = !leaf(map);
      return;
    }
    for (int x = 0; x < n && !stop; ++x) {
      if (used[x] || a.degree(i) != b.degree(x)) continue;
      bool ok = true;
      for (int j = 0; j < i && ok; ++j) ok = a.adjacent(i, j) == b.adjacent(x, map[j]);
      if (!ok) continue;
      map[i] = x;
      used[x] = 1;
      rec(i + 1);
      used[x] = 0;
      map[i] = -1;
    }
  };
  rec(0);
}

inline void require_brute_force_size(const Graph& g) {
  if (g.n() > kBruteForceMaxVertices) {
    throw CapabilityError("brute force graph search is limited to 9 vertices");
  }
}

}  // namespace detail

inline std::optional<std::vector<int>> brute_force_iso(const Graph& a, const Graph& b) {
  detail::require_brute_force_size(a);
  detail::require_brute_force_size(b);
  if (a.n() != b.n() || a.edge_count() != b.edge_count()) return std::nullopt;
  std::optional<std::vector<int>> found;
  detail::enumerate_isomorphisms(a, b, [&](const std::vector<int>& m) {
    found = m;
    return false;
  });
  return found;
}

inline std::vector<std::vector<int>> brute_force_automorphisms(const Graph& g) {
  detail::require_brute_force_size(g);
  std::vector<std::vector<int>> out;
  detail::enumerate_isomorphisms(g, g, [&](const std::vector<int>& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

inline std::uint64_t brute_force_iso_count(const Graph& a, const Graph& b) {
  detail::require_brute_force_size(a);
  detail::require_brute_force_size(b);
  if (a.n() != b.n() || a.edge_count() != b.edge_count()) return 0;
  std::uint64_t c = 0;
  detail::enumerate_isomorphisms(a, b, [&](const std::vector<int>&) {
    ++c;
    return true;
  });
  return c;
}

/// Orbits of aut G as sorted cells, ordered by least member.
inline std::vector<std::vector<int>> brute_force_orbits(const Graph& g) {
  const auto auts = brute_force_automorphisms(g);
  std::vector<int> cell(g.n(), -1);
  std::vector<std::vector<int>> out;
  for (int v = 0; v < g.n(); ++v) {
    if (cell[v] >= 0) continue;
    std::set<int> orb;
    for (const auto& a : auts) orb.insert(a[v]);
    for (int w : orb) cell[w] = static_cast<int>(out.size());
    out.emplace_back(orb.begin(), orb.end());
  }
  return out;
}

// ---------------------------------------------------------------------------
// Refinement search: exact isomorphism for larger graphs

namespace detail {

/// Partition of the disjoint union a + b (b's vertices offset by a.n()).
struct Partition {
  std::vector<int> cell_of;
  std::vector<std::vector<int>> cells;
};

/// Refines to the coarsest equitable partition with a splitter queue.
/// Returns false as soon as a cell holds different numbers of a- and
/// b-vertices; every refinement of such a cell stays unbalanced.
inline bool refine_pair(const Graph& a, const Graph& b, Partition& p, std::vector<int> queue) {
  const int na = a.n(), total = na + b.n();
  auto for_nbrs = [&](int v, auto&& f) {
    if (v < na) {
      for (int w : a.neighbors(v)) f(w);
    } else {
      for (int w : b.neighbors(v - na)) f(w + na);
    }
  };
  auto balanced = [&](const std::vector<int>& c) {
    int d = 0;
    for (int v : c) d += v < na ? 1 : -1;
    return d == 0;
  };
  std::vector<char> queued(p.cells.size(), 0);
  for (int c : queue) queued[c] = 1;
  std::vector<int> count(total, 0);
  std::vector<int> touched, touched_cells;
  std::vector<char> cell_touched;
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    const int s = queue[qi];
    queued[s] = 0;
    touched.clear();
    for (int v : p.cells[s])
      for_nbrs(v, [&](int w) {
        if (count[w]++ == 0) touched.push_back(w);
      });
    touched_cells.clear();
    cell_touched.assign(p.cells.size(), 0);
    for (int w : touched)
      if (!cell_touched[p.cell_of[w]]) {
        cell_touched[p.cell_of[w]] = 1;
        touched_cells.push_back(p.cell_of[w]);
      }
    std::sort(touched_cells.begin(), touched_cells.end());
    for (int c : touched_cells) {
      auto& members = p.cells[c];
      std::stable_sort(members.begin(), members.end(), [&](int x, int y) { return count[x] < count[y]; });
      if (count[members.front()] == count[members.back()]) continue;
      std::vector<std::vector<int>> parts{{}};
      for (std::size_t k = 0; k < members.size(); ++k) {
        if (k > 0 && count[members[k]] != count[members[k - 1]]) parts.emplace_back();
        parts.back().push_back(members[k]);
      }
      members = std::move(parts[0]);
      std::vector<int> ids{c};
      for (std::size_t k = 1; k < parts.size(); ++k) {
        const int id = static_cast<int>(p.cells.size());
        for (int v : parts[k]) p.cell_of[v] = id;
        p.cells.push_back(std::move(parts[k]));
        queued.push_back(0);
        ids.push_back(id);
      }
      for (int id : ids) {
        if (!balanced(p.cells[id])) {
          for (int w : touched) count[w] = 0;
          return false;
        }
        if (!queued[id]) {
          queued[id] = 1;
          queue.push_back(id);
        }
      }
    }
    for (int w : touched) count[w] = 0;
  }
  return true;
}

/// Individualize-and-refine search over cell-compatible assignments.
/// Exact: every isomorphism respects the equitable partition, so no branch
/// that could contain one is dropped. `all` collects every isomorphism.
inline bool refine_search(const Graph& a, const Graph& b, Partition p, std::vector<int> queue,
                          std::vector<std::vector<int>>* all, std::vector<int>* first) {
  if (!refine_pair(a, b, p, std::move(queue))) return false;
  const int na = a.n();
  int target = -1;
  std::size_t best = SIZE_MAX;
  for (std::size_t c = 0; c < p.cells.size(); ++c)
    if (p.cells[c].size() > 2 && p.cells[c].size() < best) {
      best = p.cells[c].size();
      target = static_cast<int>(c);
    }
  if (target < 0) {
    std::vector<int> map(na);
    for (const auto& c : p.cells) {
      const int x = std::min(c[0], c[1]), y = std::max(c[0], c[1]);
      map[x] = y - na;
    }
    if (!is_isomorphism(a, b, map)) return false;
    if (all) all->push_back(map);
    if (first) *first = map;
    return true;
  }
  const auto members = p.cells[target];
  const int v = *std::min_element(members.begin(), members.end());
  bool any = false;
  for (int u : members) {
    if (u < na) continue;
    Partition q = p;
    const int id = static_cast<int>(q.cells.size());
    auto& old = q.cells[target];
    old.erase(std::remove_if(old.begin(), old.end(), [&](int x) { return x == v || x == u; }), old.end());
    q.cells.push_back({v, u});
    q.cell_of[v] = q.cell_of[u] = id;
    if (refine_search(a, b, std::move(q), {id, target}, all, first)) {
      any = true;
      if (!all) return true;
    }
  }
  return any;
}

inline Partition unit_partition(int total) {
  Partition p;
  p.cell_of.assign(total, 0);
  p.cells.emplace_back(total);
  std::iota(p.cells[0].begin(), p.cells[0].end(), 0);
  return p;
}

}  // namespace detail

inline std::optional<std::vector<int>> search_iso(const Graph& a, const Graph& b) {
  if (a.n() != b.n() || a.edge_count() != b.edge_count()) return std::nullopt;
  if (a.n() == 0) return std::vector<int>{};
  std::vector<int> map;
  if (!detail::refine_search(a, b, detail::unit_partition(2 * a.n()), {0}, nullptr, &map)) return std::nullopt;
  return map;
}

/// Every automorphism, by exhaustive refinement search.
inline std::vector<std::vector<int>> search_automorphisms(const Graph& g) {
  std::vector<std::vector<int>> all;
  if (g.n() == 0) return {{}};
  detail::refine_search(g, g, detail::unit_partition(2 * g.n()), {0}, &all, nullptr);
  return all;
}

// ---------------------------------------------------------------------------
// ISO oracle and labelled graphs

/// Decision procedure for ISO with a call counter.
class IsoOracle {
 public:
  using Fn = std::function<bool(const Graph&, const Graph&)>;

  IsoOracle() : fn_([](const Graph& a, const Graph& b) { return search_iso(a, b).has_value(); }) {}
  explicit IsoOracle(Fn fn) : fn_(std::move(fn)) {}

  static IsoOracle brute_force() {
    return IsoOracle([](const Graph& a, const Graph& b) { return brute_force_iso(a, b).has_value(); });
  }

  bool operator()(const Graph& a, const Graph& b) const {
    ++calls_;
    return fn_(a, b);
  }

  std::uint64_t calls() const { return calls_; }
  void reset() const { calls_ = 0; }

 private:
  Fn fn_;
  mutable std::uint64_t calls_ = 0;
};

struct LabelledGraph {
  Graph graph;
  int base_n = 0;
  std::vector<int> labelled;  // labelled[m - 1] carries label m
};

/// Label m (m = 1, 2, ...) on vertex labelled[m-1]: a path of n+1 new
/// vertices from it, then a branch vertex carrying a path of n+1 and a path
/// of m, for 2n + m + 3 new vertices.
inline LabelledGraph attach_labels(const Graph& g, const std::vector<int>& labelled) {
  const int n = g.n();
  std::set<int> distinct(labelled.begin(), labelled.end());
  if (distinct.size() != labelled.size()) throw DomainError("attach_labels: vertices must be distinct");
  for (int v : labelled)
    if (v < 0 || v >= n) throw DomainError("attach_labels: vertex out of range");
  std::vector<Edge> e = g.edges();
  int next = n;
  auto chain = [&](int from, int len) {
    int prev = from;
    for (int i = 0; i < len; ++i) {
      e.emplace_back(prev, next);
      prev = next++;
    }
    return prev;
  };
  for (std::size_t i = 0; i < labelled.size(); ++i) {
    const int m = static_cast<int>(i) + 1;
    const int tail = chain(labelled[i], n + 1);
    const int branch = next++;
    e.emplace_back(tail, branch);
    chain(branch, n + 1);
    chain(branch, m);
  }
  return {Graph(next, std::move(e)), n, labelled};
}

inline Graph labelled(const Graph& g, const std::vector<int>& vertices) {
  return attach_labels(g, vertices).graph;
}

// ---------------------------------------------------------------------------
// Reductions to ISO

/// Extends v_i -> u_i pairs (pre1[i] -> pre2[i], assumed label-consistent)
/// one vertex at a time: the next unmapped vertex of G1 is labelled together
/// with each candidate of G2 until ISO says yes.
inline std::optional<std::vector<int>> imap_via_iso(const Graph& g1, const Graph& g2, const IsoOracle& iso,
                                                    std::vector<int> pre1 = {}, std::vector<int> pre2 = {}) {
  if (g1.n() != g2.n()) return std::nullopt;
  if (pre1.size() != pre2.size()) throw DomainError("imap_via_iso: prefix length mismatch");
  const int n = g1.n();
  std::vector<char> used1(n, 0), used2(n, 0);
  for (int v : pre1) used1[v] = 1;
  for (int u : pre2) used2[u] = 1;
  for (int v = 0; v < n; ++v) {
    if (used1[v]) continue;
    pre1.push_back(v);
    const Graph a = labelled(g1, pre1);
    bool found = false;
    for (int u = 0; u < n && !found; ++u) {
      if (used2[u]) continue;
      pre2.push_back(u);
      if (iso(a, labelled(g2, pre2))) {
        found = true;
        used2[u] = 1;
      } else {
        pre2.pop_back();
      }
    }
    if (!found) return std::nullopt;
    used1[v] = 1;
  }
  std::vector<int> map(n);
  for (std::size_t i = 0; i < pre1.size(); ++i) map[pre1[i]] = pre2[i];
  return map;
}

struct AcountResult {
  std::uint64_t count = 1;
  std::vector<int> orbit_sizes;  // d_1 .. d_n
};

/// |aut G| = d_1 ... d_n, where d_k counts u with
/// G_{v_1..v_{k-1}, v_k} = G_{v_1..v_{k-1}, u} (same labels).
inline AcountResult acount_via_iso(const Graph& g, const IsoOracle& iso) {
  AcountResult r;
  const int n = g.n();
  std::vector<int> prefix;
  for (int k = 0; k < n; ++k) {
    prefix.push_back(k);
    int d = 1;
    if (k + 1 < n) {
      const Graph a = labelled(g, prefix);
      for (int u = k + 1; u < n; ++u) {
        prefix.back() = u;
        d += iso(a, labelled(g, prefix));
      }
      prefix.back() = k;
    }
    r.orbit_sizes.push_back(d);
    r.count *= static_cast<std::uint64_t>(d);
  }
  return r;
}

/// 0 if G1 and G2 are not isomorphic, else |aut G1|.
inline std::uint64_t icount_via_iso(const Graph& g1, const Graph& g2, const IsoOracle& iso) {
  if (!iso(g1, g2)) return 0;
  return acount_via_iso(g1, iso).count;
}

/// u and v share a cell iff G_u = G_v with identical labels.
inline std::vector<std::vector<int>> apart_via_iso(const Graph& g, const IsoOracle& iso) {
  std::vector<std::vector<int>> cells;
  std::vector<Graph> reps;
  for (int v = 0; v < g.n(); ++v) {
    const Graph gv = labelled(g, {v});
    bool placed = false;
    for (std::size_t c = 0; c < cells.size() && !placed; ++c) {
      if (iso(reps[c], gv)) {
        cells[c].push_back(v);
        placed = true;
      }
    }
    if (!placed) {
      cells.push_back({v});
      reps.push_back(gv);
    }
  }
  return cells;
}

inline std::vector<int> orbit_of(int v, const std::vector<std::vector<int>>& gens, int n) {
  std::vector<char> seen(n, 0);
  std::vector<int> orb{v};
  seen[v] = 1;
  for (std::size_t i = 0; i < orb.size(); ++i)
    for (const auto& g : gens)
      if (!seen[g[orb[i]]]) {
        seen[g[orb[i]]] = 1;
        orb.push_back(g[orb[i]]);
      }
  return orb;
}

/// Generators of aut G. Levels are processed from the deepest stabilizer
/// up; at level k an IMAP call is made only for a vertex u that ISO places
/// in the orbit of v_k but the generators found so far do not reach.
inline std::vector<std::vector<int>> agen_via_iso(const Graph& g, const IsoOracle& iso) {
  const int n = g.n();
  std::vector<std::vector<int>> gens;
  for (int k = n - 1; k >= 0; --k) {
    std::vector<int> prefix(static_cast<std::size_t>(k) + 1);
    std::iota(prefix.begin(), prefix.end(), 0);
    std::vector<int> orb = orbit_of(k, gens, n);
    std::optional<Graph> a;
    for (int u = k + 1; u < n; ++u) {
      if (std::find(orb.begin(), orb.end(), u) != orb.end()) continue;
      if (!a) a = labelled(g, prefix);
      prefix.back() = u;
      const bool same = iso(*a, labelled(g, prefix));
      std::vector<int> image = prefix;
      prefix.back() = k;
      if (!same) continue;
      std::vector<int> from = prefix;
      auto phi = imap_via_iso(g, g, iso, from, image);
      if (!phi) throw DomainError("agen_via_iso: ISO and IMAP disagree");
      gens.push_back(std::move(*phi));
      orb = orbit_of(k, gens, n);
    }
  }
  return gens;
}

/// Closure of permutation generators by breadth-first multiplication.
inline std::set<std::vector<int>> permutation_closure(const std::vector<std::vector<int>>& gens, int n,
                                                      std::size_t cap = 1000000) {
  std::vector<int> id(n);
  std::iota(id.begin(), id.end(), 0);
  std::set<std::vector<int>> seen{id};
  std::vector<std::vector<int>> frontier{id};
  while (!frontier.empty()) {
    std::vector<std::vector<int>> next;
    for (const auto& p : frontier)
      for (const auto& g : gens) {
        auto q = compose(g, p);
        if (seen.insert(q).second) next.push_back(std::move(q));
      }
    if (seen.size() > cap) throw CapabilityError("permutation_closure: group too large");
    frontier = std::move(next);
  }
  return seen;
}

// ---------------------------------------------------------------------------
// ISO from the other problems

namespace detail {

/// Both graphs connected, complementing when either is disconnected.
/// Returns nullopt when connectivity still differs (then not isomorphic).
/// Callers handle the empty graph first.
inline std::optional<std::pair<Graph, Graph>> connected_pair(const Graph& a, const Graph& b) {
  if (a.connected() && b.connected()) return std::make_pair(a, b);
  Graph ca = a.complement(), cb = b.complement();
  if (ca.connected() && cb.connected()) return std::make_pair(std::move(ca), std::move(cb));
  return std::nullopt;
}

}  // namespace detail

/// Isomorphic iff |aut G1| = |aut G2| and |aut G1| |aut G2| != |aut (G1 + G2)|.
inline bool iso_via_acount(const Graph& g1, const Graph& g2, const IsoOracle& iso) {
  if (g1.n() != g2.n()) return false;
  if (g1.n() == 0) return true;
  const auto p = detail::connected_pair(g1, g2);
  if (!p) return false;
  const auto a1 = acount_via_iso(p->first, iso).count;
  const auto a2 = acount_via_iso(p->second, iso).count;
  const auto a3 = acount_via_iso(disjoint_union(p->first, p->second), iso).count;
  return a1 == a2 && a1 * a2 != a3;
}

/// Isomorphic iff some generator of aut (G1 + G2) moves a vertex of G1 into G2.
inline bool iso_via_agen(const Graph& g1, const Graph& g2, const IsoOracle& iso) {
  if (g1.n() != g2.n()) return false;
  if (g1.n() == 0) return true;
  const auto p = detail::connected_pair(g1, g2);
  if (!p) return false;
  const int n1 = p->first.n();
  for (const auto& s : agen_via_iso(disjoint_union(p->first, p->second), iso))
    for (int v = 0; v < n1; ++v)
      if (s[v] >= n1) return true;
  return false;
}

/// Isomorphic iff some cell of the automorphism partition of G1 + G2 meets both.
inline bool iso_via_apart(const Graph& g1, const Graph& g2, const IsoOracle& iso) {
  if (g1.n() != g2.n()) return false;
  if (g1.n() == 0) return true;
  const auto p = detail::connected_pair(g1, g2);
  if (!p) return false;
  const int n1 = p->first.n();
  for (const auto& cell : apart_via_iso(disjoint_union(p->first, p->second), iso)) {
    bool left = false, right = false;
    for (int v : cell) (v < n1 ? left : right) = true;
    if (left && right) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Graph corpora

/// One representative of every isomorphism class on n vertices, by marking
/// the orbit of each unseen edge mask under S_n. n <= 7.
inline std::vector<Graph> all_graphs(int n) {
  if (n < 0 || n > 7) throw CapabilityError("all_graphs: n must be 0..7");
  std::vector<Edge> slots;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) slots.emplace_back(u, v);
  const std::size_t e = slots.size();
  std::vector<std::vector<int>> slot_of(n, std::vector<int>(n, -1));
  for (std::size_t i = 0; i < e; ++i) {
    slot_of[slots[i].first][slots[i].second] = static_cast<int>(i);
    slot_of[slots[i].second][slots[i].first] = static_cast<int>(i);
  }
  std::vector<std::vector<int>> slot_perm;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  do {
    std::vector<int> sp(e);
    for (std::size_t i = 0; i < e; ++i) sp[i] = slot_of[p[slots[i].first]][p[slots[i].second]];
    slot_perm.push_back(std::move(sp));
  } while (std::next_permutation(p.begin(), p.end()));
  std::vector<char> seen(std::size_t{1} << e, 0);
  std::vector<Graph> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << e); ++mask) {
    if (seen[mask]) continue;
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < e; ++i)
      if ((mask >> i) & 1U) edges.push_back(slots[i]);
    out.emplace_back(n, edges);
    for (const auto& sp : slot_perm) {
      std::uint64_t img = 0;
      for (std::size_t i = 0; i < e; ++i)
        if ((mask >> i) & 1U) img |= std::uint64_t{1} << sp[i];
      seen[img] = 1;
    }
  }
  return out;
}

/// G(n, p) with a seeded generator.
inline Graph random_graph(int n, double p, Rng& rng) {
  std::vector<Edge> e;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      if (uniform01(rng) < p) e.emplace_back(u, v);
  return Graph(n, e);
}

inline std::vector<int> random_permutation(int n, Rng& rng) {
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Uniform graph on n vertices with exactly m edges.
inline Graph random_graph_with_edges(int n, std::size_t m, Rng& rng) {
  std::vector<Edge> slots;
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v) slots.emplace_back(u, v);
  std::shuffle(slots.begin(), slots.end(), rng);
  slots.resize(std::min(m, slots.size()));
  return Graph(n, slots);
}

/// Seeded pairs on 1..max_n vertices: even indices are relabelled copies,
/// odd indices are independent graphs with the same vertex and edge counts.
inline std::vector<std::pair<Graph, Graph>> random_graph_pairs(std::size_t count, int max_n, std::uint64_t seed) {
  std::vector<std::pair<Graph, Graph>> out;
  Rng rng(seed);
  for (std::size_t i = 0; i < count; ++i) {
    const int n = 1 + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(max_n)));
    const double p = 0.2 + 0.6 * uniform01(rng);
    Graph a = random_graph(n, p, rng);
    Graph b = i % 2 == 0 ? a.relabel(random_permutation(n, rng)) : random_graph_with_edges(n, a.edge_count(), rng);
    out.emplace_back(std::move(a), std::move(b));
  }
  return out;
}

// ---------------------------------------------------------------------------
// The S_n oracle

struct PermOracle {
  FiniteGroupTable group;   // S_n, elements as permutations
  std::vector<int> labels;  // f(pi) as an index into `images`
  std::vector<std::vector<Edge>> images;
};

inline constexpr int kPermOracleMaxVertices = 6;

/// Inverse of permutation_to_string: "[2,0,1]" -> {2, 0, 1}.
inline std::vector<int> permutation_from_name(std::string name) {
  if (name.size() < 2 || name.front() != '[' || name.back() != ']') {
    throw DomainError("permutation_from_name: expected [a,b,...]");
  }
  std::replace(name.begin(), name.end(), ',', ' ');
  std::istringstream in(name.substr(1, name.size() - 2));
  std::vector<int> pi;
  for (int x; in >> x;) pi.push_back(x);
  return pi;
}

/// The subgroup of the perm_oracle table formed by automorphisms of g.
inline TableSubgroup automorphism_subgroup(const FiniteGroupTable& sn, const Graph& g) {
  std::vector<int> els;
  for (int e = 0; e < sn.order(); ++e)
    if (g.relabel(permutation_from_name(sn.names()[e])) == g) els.push_back(e);
  return TableSubgroup{els};
}

/// f(pi) = pi(G) as a sorted edge list of sorted pairs; f(pi1) = f(pi2)
/// exactly when pi1 aut G = pi2 aut G.
inline PermOracle perm_oracle(const Graph& g) {
  if (g.n() < 1 || g.n() > kPermOracleMaxVertices) throw CapabilityError("perm_oracle: n must be 1..6");
  PermOracle o{symmetric_group(g.n()), {}, {}};
  std::map<std::vector<Edge>, int> id;
  for (int e = 0; e < o.group.order(); ++e) {
    const std::vector<int> pi = permutation_from_name(o.group.names()[e]);
    const Graph img = g.relabel(pi);
    const auto [it, fresh] = id.emplace(img.edges(), static_cast<int>(o.images.size()));
    if (fresh) o.images.push_back(img.edges());
    o.labels.push_back(it->second);
  }
  return o;
}

inline nlohmann::json cells_to_json(const std::vector<std::vector<int>>& cells) {
  nlohmann::json a = nlohmann::json::array();
  for (const auto& c : cells) a.push_back(c);
  return a;
}

}  // namespace hsp
