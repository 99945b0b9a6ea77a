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

// Command-line front end: subcommand dispatch, seeded repetitions, JSON run
// reports and CSV parameter sweeps. Exit codes: 0 success, 1 usage or input
// error, 2 an asserted bound was violated.

#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hsp/abelian.hpp"
#include "hsp/bounds.hpp"
#include "hsp/common.hpp"
#include "hsp/ehk.hpp"
#include "hsp/graphs.hpp"
#include "hsp/odd_qft.hpp"
#include "hsp/problems.hpp"
#include "hsp/qft.hpp"
#include "json.hpp"

#ifndef HSP_VERSION
#define HSP_VERSION "0.0.0"
#endif

namespace hsp::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitBoundViolated = 2;
inline constexpr const char* kReportDirEnv = "HSP_REPORT_DIR";

/// Outcome of one repetition: its JSON record and whether every asserted
/// bound held.
struct RepResult {
  nlohmann::json record;
  bool bounds_hold = true;
};

// ---------------------------------------------------------------------------
// Single-run operations shared by subcommands and sweeps

inline RepResult qft_verify(unsigned n) {
  if (n < 1 || n > 12) throw DomainError("qft verify: n must be 1..12");
  const auto c = exact_qft_circuit(n);
  const DenseMatrix F = dense_qft(std::uint64_t{1} << n);
  const DenseMatrix C = circuit_matrix(c);
  const double err = (C - F).cwiseAbs().maxCoeff();
  const std::size_t expected = n * (n + 1) / 2 + n / 2;
  RepResult r;
  r.record = {{"n", n},
              {"max_error", err},
              {"gates", c.size()},
              {"expected_gates", expected},
              {"hadamard", c.counts().hadamard},
              {"controlled_phase", c.counts().controlled_phase},
              {"swap", c.counts().swap},
              {"depth", c.depth()}};
  r.bounds_hold = err < 1e-9 && c.size() == expected;
  return r;
}

inline RepResult qft_afft(unsigned n, unsigned m, unsigned states, std::uint64_t seed) {
  if (n < 1 || n > 14) throw DomainError("qft afft: n must be 1..14");
  const ApproxQftParams p{n, m};
  const auto c = afft_circuit(p);
  const DenseMatrix F = dense_qft(std::uint64_t{1} << n);
  Rng rng(seed);
  double worst = 0.0;
  for (unsigned i = 0; i < states; ++i) {
    const auto s = random_state(std::size_t{1} << n, rng);
    const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(s.amplitudes().data(), static_cast<Eigen::Index>(s.dim()));
    const Eigen::VectorXcd want = F * v;
    worst = std::max(worst, state_distance(apply_circuit(s, c).span(), std::span<const cplx>(want.data(), s.dim())));
  }
  RepResult r;
  r.record = {{"n", n},
              {"m", m},
              {"gates", c.size()},
              {"states", states},
              {"measured_error", worst},
              {"predicted_error", p.predicted_error()}};
  r.bounds_hold = worst <= p.predicted_error() && (m != n || worst < 1e-9);
  return r;
}

/// basis<k>, uniform, or random (seeded).
inline StateVector parse_input_state(const std::string& spec, std::int64_t N, std::uint64_t seed) {
  const auto dim = static_cast<std::size_t>(N);
  if (spec == "random") {
    Rng rng(seed);
    return random_state(dim, rng);
  }
  if (spec == "uniform") {
    Amplitudes a(dim, cplx{1.0 / std::sqrt(static_cast<double>(dim)), 0.0});
    return StateVector(std::move(a));
  }
  if (spec.rfind("basis", 0) == 0 && spec.size() > 5) {
    std::size_t used = 0;
    const long long k = std::stoll(spec.substr(5), &used);
    if (used != spec.size() - 5 || k < 0 || k >= N) throw DomainError("odd-qft: basis index out of range");
    return basis_state(dim, static_cast<std::size_t>(k));
  }
  throw DomainError("odd-qft: --u must be basis<k>, uniform or random");
}

inline RepResult odd_qft_run(const OddQftPlan& plan, const std::string& u_spec, std::uint64_t seed) {
  const StateVector u = parse_input_state(u_spec, plan.N, seed);
  const StateVector v = run_odd_qft(u, plan);
  const auto res = odd_qft_residuals(v, u, plan);
  const double eps = plan.epsilon;
  RepResult r;
  r.record = to_json(plan);
  r.record["u"] = u_spec;
  r.record["residual"] = res.best();
  r.record["residual_optimal"] = res.optimal;
  r.record["residual_lambda"] = res.lambda;
  r.record["tv_distance"] = res.tv;
  r.record["distance_bound"] = plan.distance_bound();
  if (plan.auto_planned) {
    r.record["tv_bound"] = 2 * eps + eps * eps;
    r.bounds_hold = res.best() <= eps && res.tv <= 2 * eps + eps * eps && plan.qubits <= plan.qubit_bound();
  }
  return r;
}

inline RepResult bound_result(const TrialReport& t) { return {to_json(t), t.holds()}; }

// ---------------------------------------------------------------------------
// Reports

inline nlohmann::json make_report(const std::string& command, const nlohmann::json& config) {
  return {{"tool", "hsp"}, {"version", HSP_VERSION}, {"command", command}, {"config", config}};
}

/// Path for the report: --out if given, else $HSP_REPORT_DIR/<stem>, else none.
inline std::optional<std::filesystem::path> report_path(const std::string& out, const std::string& stem) {
  if (!out.empty()) return std::filesystem::path(out);
  if (const char* dir = std::getenv(kReportDirEnv); dir && *dir) return std::filesystem::path(dir) / stem;
  return std::nullopt;
}

inline void write_text(const std::filesystem::path& p, const std::string& text) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw DomainError("cannot write report " + p.string());
  f << text;
}

/// Assembles the run report, prints it, writes it to the report path and
/// returns 0, or 2 when any repetition violated an asserted bound.
inline int emit_report(const std::string& command, const nlohmann::json& cfg, const std::vector<RepResult>& results,
                       std::optional<std::uint64_t> seed, std::optional<double> seconds, const std::string& out_path,
                       std::ostream& out) {
  nlohmann::json report = make_report(command, cfg);
  if (seed) {
    report["seed"] = *seed;
    report["repetitions"] = results.size();
  }
  nlohmann::json recs = nlohmann::json::array();
  bool ok = true;
  std::size_t successes = 0;
  bool has_success = false;
  for (const auto& r : results) {
    recs.push_back(r.record);
    ok = ok && r.bounds_hold;
    if (r.record.is_object() && r.record.contains("success")) {
      has_success = true;
      successes += r.record["success"].get<bool>();
    }
  }
  report["results"] = recs;
  nlohmann::json summary = {{"bounds_hold", ok}};
  if (has_success) {
    summary["successes"] = successes;
    summary["success_rate"] = static_cast<double>(successes) / static_cast<double>(results.size());
  }
  report["summary"] = summary;
  if (seconds) report["wall_clock_seconds"] = *seconds;
  const std::string text = report.dump(2) + "\n";
  out << text;
  const std::string stem = command + (seed ? "-seed" + std::to_string(*seed) : "") + ".json";
  if (auto p = report_path(out_path, stem)) write_text(*p, text);
  return ok ? kExitOk : kExitBoundViolated;
}

// ---------------------------------------------------------------------------
// Sweeps

/// key=value lines under [section] headers; '#' and ';' start comments.
using IniFile = std::map<std::string, std::vector<std::pair<std::string, std::string>>>;

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline IniFile parse_ini(std::istream& in) {
  IniFile ini;
  std::string section, line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find_first_of("#;");
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw DomainError("config line " + std::to_string(lineno) + ": bad section header");
      section = trim(line.substr(1, line.size() - 2));
      ini[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || section.empty()) {
      throw DomainError("config line " + std::to_string(lineno) + ": expected key = value inside a section");
    }
    ini[section].emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return ini;
}

/// "a..b" (b may name an earlier parameter), "x,y,z", a single value, or
/// empty for no values.
inline std::vector<double> expand_values(const std::string& text, const std::map<std::string, double>& bound) {
  std::vector<double> out;
  if (text.empty()) return out;
  auto number = [&](const std::string& s) -> double {
    const std::string t = trim(s);
    if (auto it = bound.find(t); it != bound.end()) return it->second;
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      throw DomainError("config: bad value \"" + t + "\"");
    }
    if (used != t.size()) throw DomainError("config: bad value \"" + t + "\"");
    return v;
  };
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const double a = number(text.substr(0, dots)), b = number(text.substr(dots + 2));
    for (double x = a; x <= b; x += 1.0) out.push_back(x);
    return out;
  }
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) out.push_back(number(item));
  return out;
}

struct SweepSpec {
  std::string experiment;
  std::uint64_t seed = 0;
  unsigned repetitions = 1;
  std::vector<std::pair<std::string, std::string>> params;
};

inline const std::map<std::string, std::vector<std::string>>& sweep_parameters() {
  static const std::map<std::string, std::vector<std::string>> p{{"afft", {"n", "m"}}, {"odd-qft", {"N", "eps"}}};
  return p;
}

inline const std::map<std::string, std::vector<std::string>>& sweep_columns() {
  static const std::map<std::string, std::vector<std::string>> c{
      {"afft", {"n", "m", "gates", "measured_error", "predicted_error", "ok"}},
      {"odd-qft",
       {"N", "eps", "L", "M", "c1", "c2", "qubits", "qubit_bound", "residual", "residual_lambda", "tv_distance",
        "tv_bound", "ok"}}};
  return c;
}

inline SweepSpec parse_sweep(const IniFile& ini) {
  for (const auto& [section, kv] : ini)
    if (section != "sweep" && section != "params") throw DomainError("config: unknown section [" + section + "]");
  SweepSpec s;
  if (auto it = ini.find("sweep"); it != ini.end()) {
    for (const auto& [k, v] : it->second) {
      if (k == "experiment") {
        s.experiment = v;
      } else if (k == "seed") {
        s.seed = std::stoull(v);
      } else if (k == "repetitions") {
        s.repetitions = static_cast<unsigned>(std::stoul(v));
      } else {
        throw DomainError("config: unknown key \"" + k + "\" in [sweep]");
      }
    }
  }
  const auto& known = sweep_parameters();
  const auto exp = known.find(s.experiment);
  if (exp == known.end()) throw DomainError("config: experiment must be afft or odd-qft");
  if (auto it = ini.find("params"); it != ini.end()) s.params = it->second;
  for (const auto& [k, v] : s.params)
    if (std::find(exp->second.begin(), exp->second.end(), k) == exp->second.end()) {
      throw DomainError("config: parameter \"" + k + "\" is not accepted by " + s.experiment);
    }
  for (const auto& name : exp->second) {
    const bool present = std::any_of(s.params.begin(), s.params.end(), [&](const auto& kv) { return kv.first == name; });
    if (!present) throw DomainError("config: missing parameter \"" + name + "\"");
  }
  if (s.repetitions == 0) throw DomainError("config: repetitions must be positive");
  return s;
}

/// Cartesian product in parameter order; later ranges may refer to earlier values.
inline void expand_grid(const SweepSpec& s, std::size_t i, std::map<std::string, double>& cur,
                        std::vector<std::map<std::string, double>>& rows) {
  if (i == s.params.size()) {
    rows.push_back(cur);
    return;
  }
  for (double v : expand_values(s.params[i].second, cur)) {
    cur[s.params[i].first] = v;
    expand_grid(s, i + 1, cur, rows);
  }
  cur.erase(s.params[i].first);
}

inline std::string csv_cell(const nlohmann::json& v) {
  if (v.is_null()) return "";
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

/// One CSV row per grid point with a fixed column order. Returns the CSV
/// text and whether every row's bound held.
inline std::pair<std::string, bool> run_sweep(const SweepSpec& s) {
  std::vector<std::map<std::string, double>> rows;
  std::map<std::string, double> cur;
  expand_grid(s, 0, cur, rows);
  const auto& cols = sweep_columns().at(s.experiment);
  std::ostringstream csv;
  for (std::size_t i = 0; i < cols.size(); ++i) csv << (i ? "," : "") << cols[i];
  csv << "\n";
  bool all_ok = true;
  for (std::size_t row = 0; row < rows.size(); ++row) {
    const auto& p = rows[row];
    const std::uint64_t seed = derive_seed(s.seed, row);
    nlohmann::json rec;
    bool ok = true;
    if (s.experiment == "afft") {
      const auto r = qft_afft(static_cast<unsigned>(p.at("n")), static_cast<unsigned>(p.at("m")), s.repetitions, seed);
      rec = r.record;
      ok = r.bounds_hold;
    } else {
      const auto plan = plan_odd_qft(static_cast<std::int64_t>(p.at("N")), p.at("eps"));
      double worst_res = 0.0, worst_lam = 0.0, worst_tv = 0.0;
      for (unsigned k = 0; k < s.repetitions; ++k) {
        const auto r = odd_qft_run(plan, "random", derive_seed(seed, k));
        worst_res = std::max(worst_res, r.record["residual"].get<double>());
        worst_lam = std::max(worst_lam, r.record["residual_lambda"].get<double>());
        worst_tv = std::max(worst_tv, r.record["tv_distance"].get<double>());
        ok = ok && r.bounds_hold;
        rec = r.record;
      }
      rec["eps"] = p.at("eps");
      rec["residual"] = worst_res;
      rec["residual_lambda"] = worst_lam;
      rec["tv_distance"] = worst_tv;
    }
    rec["ok"] = ok ? "true" : "false";
    all_ok = all_ok && ok;
    for (std::size_t i = 0; i < cols.size(); ++i) csv << (i ? "," : "") << csv_cell(rec.value(cols[i], nlohmann::json()));
    csv << "\n";
  }
  return {csv.str(), all_ok};
}

// ---------------------------------------------------------------------------
// Dispatch

namespace detail {

inline std::vector<std::int64_t> parse_index_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    item = trim(item);
    if (item.empty()) continue;
    std::size_t used = 0;
    out.push_back(std::stoll(item, &used));
    if (used != item.size()) throw DomainError("bad element index \"" + item + "\"");
  }
  return out;
}

}  // namespace detail

/// Parses and executes one command line (without the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hidden subgroup problem toolkit: simulations, reductions and bound checks", "hsp"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(HSP_VERSION));
  std::string out_path;
  bool timing = false;
  unsigned reps = 1;
  app.add_option("--out", out_path, "Report file (default: $HSP_REPORT_DIR/<command>[-seed<seed>].json when set)");
  app.add_flag("--timing", timing, "Include wall-clock time in the report");
  app.fallthrough();

  std::uint64_t seed = 0;
  auto add_seed = [&](CLI::App* sub) { return sub->add_option("--seed", seed, "Master seed")->required(); };
  auto add_reps = [&](CLI::App* sub) {
    sub->add_option("--reps", reps, "Repetitions; repetition r uses a seed derived from (seed, r)")
        ->check(CLI::Range(1U, 1000000U));
  };

  // qft
  auto* qft = app.add_subcommand("qft", "Power-of-two QFT circuits");
  qft->require_subcommand(1);
  unsigned qn = 0, qm = 0, qstates = 100;
  auto* qverify = qft->add_subcommand("verify", "Exact circuit against the dense matrix");
  qverify->add_option("--n", qn, "Qubits")->required();
  auto* qafft = qft->add_subcommand("afft", "Approximate circuit error on random states");
  qafft->add_option("--n", qn, "Qubits")->required();
  qafft->add_option("--m", qm, "Rotation cutoff")->required();
  qafft->add_option("--states", qstates, "Random input states");
  add_seed(qafft);

  // odd-qft
  auto* oq = app.add_subcommand("odd-qft", "QFT over Z_N for odd N by embedding in a power of two");
  std::int64_t oN = 0, oL = 0, oM = 0;
  double oeps = 0.0;
  std::string ou = "random";
  oq->add_option("--N", oN, "Odd modulus")->required();
  oq->add_option("--eps", oeps, "Target accuracy")->required();
  oq->add_option("--u", ou, "Input: basis<k>, uniform or random");
  oq->add_option("--L", oL, "Manual L (with --M)");
  oq->add_option("--M", oM, "Manual M (with --L)");
  add_seed(oq);
  add_reps(oq);

  // hsp
  auto* hs = app.add_subcommand("hsp", "Finite abelian hidden subgroup problem");
  std::string group, hidden;
  unsigned t1 = 0, t2 = 0;
  hs->add_option("--group", group, "Group such as Z4xZ2")->required();
  hs->add_option("--hidden", hidden, "Generators of H such as \"[(2,0),(0,1)]\"")->required();
  hs->add_option("--t1", t1, "Extra samples (default ceil(log|G|)+1)");
  hs->add_option("--t2", t2, "Extra solutions (default ceil(log|G|)+1)");
  add_seed(hs);
  add_reps(hs);

  // cyclic-hsp
  auto* cy = app.add_subcommand("cyclic-hsp", "Hidden subgroup <d> of Z_N");
  std::int64_t cN = 0, cd = 0;
  cy->add_option("--N", cN, "Group order")->required();
  cy->add_option("--d", cd, "Generator of H, dividing N")->required();
  add_seed(cy);
  add_reps(cy);

  // simon
  auto* si = app.add_subcommand("simon", "Simon's problem over Z_2^n");
  unsigned sn = 0;
  std::string ss;
  si->add_option("--n", sn, "Bits")->required();
  si->add_option("--s", ss, "Hidden string (default: random from the seed)");
  add_seed(si);
  add_reps(si);

  // shor
  auto* sh = app.add_subcommand("shor", "Factor N through order finding");
  std::int64_t shN = 0;
  sh->add_option("--N", shN, "Odd composite, not a prime power")->required();
  add_seed(sh);
  add_reps(sh);

  // ehk
  auto* eh = app.add_subcommand("ehk", "Coset-state subgroup identification on a finite group table");
  std::string egroup, ehidden, egraph;
  unsigned em = 0;
  eh->add_option("--group", egroup, "Bundled group: Z1..Z8, Z2xZ2, S3, S4, D4, Q8");
  eh->add_option("--hidden", ehidden, "Comma-separated element indices generating H");
  eh->add_option("--graph", egraph, "Hide aut G inside S_n for a graph file (n <= 6)");
  eh->add_option("--m", em, "Copies (default ceil(4 log|G| + 2))");
  add_seed(eh);
  add_reps(eh);

  // graph
  auto* gr = app.add_subcommand("graph", "Graph isomorphism problems reduced to an ISO oracle");
  gr->require_subcommand(1);
  std::string gin, ga, gb, via = "direct";
  auto* g_acount = gr->add_subcommand("acount", "|aut G|");
  auto* g_apart = gr->add_subcommand("apart", "Orbit partition of aut G");
  auto* g_agen = gr->add_subcommand("agen", "Generators of aut G");
  for (auto* s : {g_acount, g_apart, g_agen}) s->add_option("--in", gin, "Graph file")->required();
  auto* g_iso = gr->add_subcommand("iso", "Decide isomorphism");
  auto* g_imap = gr->add_subcommand("imap", "Find an isomorphism");
  auto* g_icount = gr->add_subcommand("icount", "Count isomorphisms");
  for (auto* s : {g_iso, g_imap, g_icount}) {
    s->add_option("--a", ga, "First graph file")->required();
    s->add_option("--b", gb, "Second graph file")->required();
  }
  g_iso->add_option("--via", via, "direct, acount, agen or apart")
      ->check(CLI::IsMember({"direct", "acount", "agen", "apart"}));

  // bounds
  auto* bo = app.add_subcommand("bounds", "Probability bound checks");
  bo->require_subcommand(1);
  double beps = 0.25;
  std::uint64_t bn = 400, bd = 1000000, trials = kDefaultTrials;
  unsigned bk = 8, bt = 1;
  std::string bgroup = "Z2xZ2";
  auto* b_ch = bo->add_subcommand("chernoff", "Majority of n biased coins");
  b_ch->add_option("--eps", beps, "Bias above 1/2");
  b_ch->add_option("--n", bn, "Coins per trial");
  auto* b_gcd = bo->add_subcommand("gcd", "gcd of k samples from {0..d-1}");
  b_gcd->add_option("--k", bk, "Samples");
  b_gcd->add_option("--d", bd, "Range");
  auto* b_gen = bo->add_subcommand("gen", "Random generation of a group");
  b_gen->add_option("--group", bgroup, "Group descriptor");
  b_gen->add_option("--t", bt, "Extra elements");
  for (auto* s : {b_ch, b_gcd, b_gen}) {
    s->add_option("--trials", trials, "Monte-Carlo trials");
    add_seed(s);
  }
  auto* b_tot = bo->add_subcommand("totient", "Totient summatory bound at every n up to --n");
  std::uint64_t tn = 1000000;
  b_tot->add_option("--n", tn, "Upper limit");

  // sweep
  auto* sw = app.add_subcommand("sweep", "Parameter sweep from a key=value config, CSV output");
  std::string config;
  sw->add_option("--config", config, "Config file")->required()->check(CLI::ExistingFile);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  try {
    // Sweep writes CSV rather than a JSON report.
    if (sw->parsed()) {
      std::ifstream f(config);
      const auto spec = parse_sweep(parse_ini(f));
      const auto [csv, ok] = run_sweep(spec);
      out << csv;
      if (auto p = report_path(out_path, "sweep-" + spec.experiment + ".csv")) write_text(*p, csv);
      return ok ? kExitOk : kExitBoundViolated;
    }

    std::string command;
    nlohmann::json cfg = nlohmann::json::object();
    std::vector<RepResult> results;
    bool stochastic = true;
    auto repeat = [&](auto&& once) {
      for (unsigned r = 0; r < reps; ++r) results.push_back(once(derive_seed(seed, r)));
    };

    if (qverify->parsed()) {
      command = "qft-verify";
      stochastic = false;
      cfg = {{"n", qn}};
      results.push_back(qft_verify(qn));
    } else if (qafft->parsed()) {
      command = "qft-afft";
      cfg = {{"n", qn}, {"m", qm}, {"states", qstates}};
      results.push_back(qft_afft(qn, qm, qstates, seed));
    } else if (oq->parsed()) {
      command = "odd-qft";
      const bool manual = oL != 0 || oM != 0;
      if (manual && (oL == 0 || oM == 0)) throw DomainError("odd-qft: give both --L and --M");
      const OddQftPlan plan = manual ? plan_manual(oN, oL, oM, oeps) : plan_odd_qft(oN, oeps);
      cfg = {{"N", oN}, {"eps", oeps}, {"u", ou}, {"L", plan.L}, {"M", plan.M}};
      repeat([&](std::uint64_t s) { return odd_qft_run(plan, ou, s); });
    } else if (hs->parsed()) {
      command = "hsp";
      const AbelianGroup G = AbelianGroup::parse(group);
      const Subgroup H(G, parse_element_list(hidden));
      const unsigned a = t1 ? t1 : default_confidence(G), b = t2 ? t2 : default_confidence(G);
      cfg = {{"group", G.to_string()}, {"hidden", hidden}, {"t1", a}, {"t2", b}};
      const HspSampler sampler(G, CosetOracle(G, H));
      repeat([&](std::uint64_t s) {
        const auto r = solve_hsp(sampler, a, b, s);
        auto j = to_json(G, H, r);
        j["recovered_indices"] = r.recovered.elements();
        return RepResult{j, true};
      });
    } else if (cy->parsed()) {
      command = "cyclic-hsp";
      cfg = {{"N", cN}, {"d", cd}};
      const HspSampler sampler(AbelianGroup({cN}), cyclic_oracle(cN, cd));
      repeat([&](std::uint64_t s) {
        const auto r = cyclic_hsp(sampler, s);
        auto j = to_json(r);
        j["success"] = r.d == cd;
        return RepResult{j, true};
      });
    } else if (si->parsed()) {
      command = "simon";
      cfg = {{"n", sn}, {"s", ss}};
      repeat([&](std::uint64_t s) {
        Rng rng(derive_seed(s, 1));
        const std::uint64_t secret = ss.empty() ? uniform_below(rng, std::uint64_t{1} << sn) : parse_bitstring(ss);
        if (!ss.empty() && ss.size() != sn) throw DomainError("simon: --s must have n bits");
        const auto inst = SimonInstance::make(sn, secret, derive_seed(s, 2));
        const auto r = simon_solve(inst, derive_seed(s, 3));
        auto j = to_json(r, sn);
        j["hidden_s"] = to_bitstring(secret, sn);
        j["success"] = r.s == secret;
        return RepResult{j, true};
      });
    } else if (sh->parsed()) {
      command = "shor";
      cfg = {{"N", shN}};
      repeat([&](std::uint64_t s) {
        const auto r = shor_factor(shN, s);
        auto j = to_json(r);
        j["success"] = r.factor > 1 && r.factor < shN && shN % r.factor == 0;
        return RepResult{j, true};
      });
    } else if (eh->parsed()) {
      command = "ehk";
      if (egraph.empty() == egroup.empty()) throw DomainError("ehk: give exactly one of --group and --graph");
      std::optional<FiniteGroupTable> table;
      std::vector<int> labels;
      TableSubgroup H;
      if (!egraph.empty()) {
        const Graph g = Graph::load(egraph);
        auto o = perm_oracle(g);
        H = automorphism_subgroup(o.group, g);
        labels = o.labels;
        table.emplace(std::move(o.group));
        cfg = {{"graph", egraph}};
      } else {
        table.emplace(bundled_group(egroup));
        std::vector<int> gens;
        for (auto x : detail::parse_index_list(ehidden)) {
          if (x < 0 || x >= table->order()) throw DomainError("ehk: element index out of range");
          gens.push_back(static_cast<int>(x));
        }
        H = closure(*table, gens);
        labels = left_coset_labels(*table, H);
        cfg = {{"group", egroup}, {"hidden", ehidden}};
      }
      const unsigned m = em ? em : ehk_copies(table->order());
      cfg["m"] = m;
      repeat([&](std::uint64_t s) {
        const auto r = ehk_run(*table, labels, m, s);
        auto j = to_json(*table, r);
        std::vector<std::string> hid;
        for (int e : H.elements) hid.push_back(table->names()[e]);
        j["hidden"] = hid;
        j["success"] = r.found == H.elements;
        j["success_bound"] = ehk_success_bound(table->order(), m);
        return RepResult{j, true};
      });
    } else if (gr->parsed()) {
      stochastic = false;
      const IsoOracle iso;
      nlohmann::json j;
      bool ok = true;
      if (g_acount->parsed() || g_apart->parsed() || g_agen->parsed()) {
        const Graph g = Graph::load(gin);
        const auto n = static_cast<std::uint64_t>(g.n());
        cfg = {{"in", gin}, {"n", g.n()}, {"edges", g.edge_count()}};
        if (g_acount->parsed()) {
          command = "graph-acount";
          const auto r = acount_via_iso(g, iso);
          j = {{"aut_order", r.count}, {"orbit_sizes", r.orbit_sizes}, {"call_budget", n * n}};
          ok = iso.calls() <= n * n;
        } else if (g_apart->parsed()) {
          command = "graph-apart";
          j = {{"cells", cells_to_json(apart_via_iso(g, iso))}, {"call_budget", n * n}};
          ok = iso.calls() <= n * n;
        } else {
          command = "graph-agen";
          const auto gens = agen_via_iso(g, iso);
          j = {{"generators", gens}, {"generator_budget", n * n}};
          ok = gens.size() <= n * n;
        }
      } else {
        const Graph a = Graph::load(ga), b = Graph::load(gb);
        const auto n = static_cast<std::uint64_t>(a.n());
        cfg = {{"a", ga}, {"b", gb}};
        if (g_iso->parsed()) {
          command = "graph-iso";
          cfg["via"] = via;
          bool yes = false;
          if (via == "direct") yes = iso(a, b);
          if (via == "acount") yes = iso_via_acount(a, b, iso);
          if (via == "agen") yes = iso_via_agen(a, b, iso);
          if (via == "apart") yes = iso_via_apart(a, b, iso);
          j = {{"isomorphic", yes}};
        } else if (g_imap->parsed()) {
          command = "graph-imap";
          const auto m = imap_via_iso(a, b, iso);
          j = {{"isomorphic", m.has_value()}, {"map", m ? nlohmann::json(*m) : nlohmann::json()},
               {"call_budget", n * (n + 1)}};
          ok = iso.calls() <= n * (n + 1);
        } else {
          command = "graph-icount";
          j = {{"count", icount_via_iso(a, b, iso)}};
        }
      }
      j["oracle_calls"] = iso.calls();
      results.push_back({j, ok});
    } else if (bo->parsed()) {
      if (b_ch->parsed()) {
        command = "bounds-chernoff";
        cfg = {{"eps", beps}, {"n", bn}, {"trials", trials}};
        results.push_back(bound_result(chernoff_check(beps, bn, trials, seed)));
      } else if (b_gcd->parsed()) {
        command = "bounds-gcd";
        cfg = {{"k", bk}, {"d", bd}, {"trials", trials}};
        results.push_back(bound_result(gcd_probability_check(bd, bk, trials, seed)));
      } else if (b_gen->parsed()) {
        command = "bounds-gen";
        cfg = {{"group", bgroup}, {"t", bt}, {"trials", trials}};
        results.push_back(bound_result(generation_probability_check(bgroup, bt, trials, seed)));
      } else {
        command = "bounds-totient";
        stochastic = false;
        cfg = {{"n", tn}};
        const auto t = totient_sum_check_all(tn);
        results.push_back({to_json(t), t.holds()});
      }
    }

    std::optional<double> seconds;
    if (timing) seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return emit_report(command, cfg, results, stochastic ? std::optional<std::uint64_t>(seed) : std::nullopt, seconds,
                       out_path, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace hsp::cli
