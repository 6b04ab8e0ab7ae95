/*
 * Copyright 2026 The pfsop Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// The pfsop command line: gen, verify, simulate. Kept in a header so tests
// can drive it in-process; tools/pfsop_cli.cpp is a two-line main.
//
// Exit codes: 0 everything checked vanished (or met tolerance), 1 some
// residual or deviation failed, 2 the configuration or I/O was unusable.

#include <cstdio>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "pfsop/dynamics.hpp"
#include "pfsop/verify.hpp"

namespace pfsop {

enum ExitCode : int { exit_pass = 0, exit_fail = 1, exit_config = 2 };

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

namespace cli {

// "3", "1,2,5", "1-20" (items may be mixed; CLI11 splits on commas).
inline std::vector<std::uint64_t> parse_seeds(const std::vector<std::string>& items) {
  std::vector<std::uint64_t> out;
  for (const auto& it : items) {
    unsigned long long a = 0, b = 0;
    char tail = 0;
    if (std::sscanf(it.c_str(), "%llu-%llu%c", &a, &b, &tail) == 2) {
      if (b < a) throw ConfigError("empty seed range " + it);
      for (auto s = a; s <= b; ++s) out.push_back(s);
    } else if (std::sscanf(it.c_str(), "%llu%c", &a, &tail) == 1) {
      out.push_back(a);
    } else {
      throw ConfigError("bad seed '" + it + "'");
    }
  }
  if (out.empty()) throw ConfigError("no seeds given");
  return out;
}

inline const std::vector<Constraint>& all_kinds() {
  static const std::vector<Constraint> k = {Constraint::none, Constraint::laurent, Constraint::rank2,
                                            Constraint::rank1skew, Constraint::rank1skew_multi,
                                            Constraint::rank1skew_complex};
  return k;
}

inline std::vector<Constraint> parse_kinds(const std::vector<std::string>& items) {
  std::vector<Constraint> out;
  for (const auto& s : items) {
    if (s == "all") {
      for (auto k : all_kinds())
        if (std::find(out.begin(), out.end(), k) == out.end()) out.push_back(k);
      continue;
    }
    try {
      Constraint c = parse_constraint(s);
      if (std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
    } catch (const std::invalid_argument&) {
      throw ConfigError("unknown kind '" + s + "'");
    }
  }
  return out;
}

// Multi-component kinds default to two components, the rest to one. An
// explicit --components only binds a single requested kind, or the
// multi-component kinds within a list.
inline int components_for(Constraint k, std::optional<int> requested, bool single_kind) {
  const bool multi = k == Constraint::rank1skew_multi || k == Constraint::rank1skew_complex;
  if (requested && (single_kind || multi)) return *requested;
  return k == Constraint::rank1skew_multi ? 2 : 1;
}

struct Budget {
  int n_max = 3;
  int m_max = 2;
};

inline void check_budget(const Budget& b) {
  if (b.n_max < 0 || b.n_max > 6) throw ConfigError("--n-max must lie in 0..6");
  if (b.m_max < 0 || b.m_max > 4) throw ConfigError("--m-max must lie in 0..4");
}

// Generator argument errors surface as config errors.
template <typename Fn>
auto sampled(Fn fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

template <typename F>
json system_file_json(const MomentSystem<F>& sys, std::uint64_t seed, int resampled, const Budget& b) {
  json j = system_json(sys);
  j["seed"] = seed;
  j["resampled"] = resampled;
  j["n_max"] = b.n_max;
  j["m_max"] = b.m_max;
  return j;
}

template <typename F>
std::string validator_line(const MomentSystem<F>& sys) {
  auto rep = validate(sys);
  std::ostringstream os;
  os << "validator (" << constraint_name(sys.constraint()) << "): ";
  if (rep.ok()) {
    os << "all residuals 0";
  } else {
    os << rep.violations.size() << " violations, first " << rep.violations[0].what << " at (" << rep.violations[0].i
       << "," << rep.violations[0].j << ")";
  }
  return os.str();
}

inline void emit(const json& j, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") out << j.dump(2) << '\n';
  else write_json_file(path, j);
}

// ---------------------------------------------------------------------------
// gen

struct GenConfig {
  std::string kind = "none";
  std::vector<std::string> seeds = {"1"};
  Budget budget;
  std::optional<int> components;
  std::string out;
};

inline int cmd_gen(const GenConfig& c, std::ostream& out, std::ostream& err) {
  check_budget(c.budget);
  const auto kinds = parse_kinds({c.kind});
  if (kinds.size() != 1) throw ConfigError("gen writes one system; pick a single --kind");
  const auto seeds = parse_seeds(c.seeds);
  if (seeds.size() != 1) throw ConfigError("gen takes exactly one --seed");
  const Constraint k = kinds.front();
  const int comps = components_for(k, c.components, true);
  std::string line;
  json j;
  if (k == Constraint::rank1skew_complex) {
    auto s = sampled([&] { return sample_complex(seeds[0], comps, c.budget.n_max, c.budget.m_max); });
    j = system_file_json(s.system, s.seed, s.rejected, c.budget);
    line = validator_line(s.system);
  } else {
    auto s = sampled([&] { return sample_rational(k, seeds[0], comps, c.budget.n_max, c.budget.m_max); });
    j = system_file_json(s.system, s.seed, s.rejected, c.budget);
    line = validator_line(s.system);
  }
  emit(j, c.out, out);
  (c.out.empty() || c.out == "-" ? err : out) << line << '\n';
  return line.find("all residuals 0") != std::string::npos ? exit_pass : exit_fail;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyConfig {
  std::vector<std::string> kinds;  // empty: all (or the input file's)
  std::vector<std::string> seeds = {"1"};
  std::optional<int> n_max, m_max;
  std::optional<int> components;
  std::vector<std::string> identities;
  std::string mode = "exact";
  std::string out;
  std::string corrupt;
  std::string input;
  std::optional<int> n, m, l;
  unsigned threads = 0;
};

// Subjects for one field, built from the input file or by sampling.
struct Subjects {
  std::vector<Subject<Rational>> rational;
  std::vector<Subject<GaussianRational>> complex;
};

inline Subjects load_input(const VerifyConfig& c, Budget& budget) {
  json j;
  try {
    j = read_json_file(c.input);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("cannot read input: ") + e.what());
  }
  if (!c.n_max) budget.n_max = j.value("n_max", budget.n_max);
  if (!c.m_max) budget.m_max = j.value("m_max", budget.m_max);
  const auto seed = j.value("seed", std::uint64_t{0});
  const int resampled = j.value("resampled", 0);
  Subjects s;
  try {
    if (j.value("field", std::string("rational")) == field_traits<GaussianRational>::name)
      s.complex.push_back({system_from_json<GaussianRational>(j), seed, resampled});
    else
      s.rational.push_back({system_from_json<Rational>(j), seed, resampled});
  } catch (const std::exception& e) {
    throw ConfigError(std::string("malformed system file: ") + e.what());
  }
  return s;
}

inline Subjects sample_subjects(const VerifyConfig& c, const Budget& budget) {
  const auto kinds = parse_kinds(c.kinds.empty() ? std::vector<std::string>{"all"} : c.kinds);
  const auto seeds = parse_seeds(c.seeds);
  const bool single = kinds.size() == 1;
  if (!single && c.components && *c.components < 1) throw ConfigError("--components must be positive");
  Subjects s;
  for (auto k : kinds)
    for (auto seed : seeds) {
      const int comps = components_for(k, c.components, single);
      if (k == Constraint::rank1skew_complex) {
        auto r = sampled([&] { return sample_complex(seed, comps, budget.n_max, budget.m_max); });
        s.complex.push_back({std::move(r.system), seed, r.rejected});
      } else {
        auto r = sampled([&] { return sample_rational(k, seed, comps, budget.n_max, budget.m_max); });
        s.rational.push_back({std::move(r.system), seed, r.rejected});
      }
    }
  return s;
}

template <typename F>
void apply_corruption(std::vector<Subject<F>>& subs, const std::optional<Corruption>& c) {
  if (!c) return;
  for (auto& s : subs) {
    try {
      corrupt(s.sys, *c);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
}

// Builds the report JSON and returns it with the exit code.
inline std::pair<json, int> run_verify(const VerifyConfig& c) {
  if (c.mode != "exact" && c.mode != "float") throw ConfigError("--mode is exact or float");
  if (!c.input.empty() && !c.kinds.empty()) throw ConfigError("--input fixes the kind; drop --kind");
  if (c.mode == "float") {
    if (!c.input.empty()) throw ConfigError("float mode samples its own soliton systems; drop --input");
    if (!c.corrupt.empty()) throw ConfigError("--corrupt applies to exact runs");
    for (const auto& k : c.kinds)
      if (k != "none") throw ConfigError("float mode covers the unconstrained kind only");
  }
  Budget budget;
  if (c.n_max) budget.n_max = *c.n_max;
  if (c.m_max) budget.m_max = *c.m_max;
  Subjects subs = c.input.empty() ? Subjects{} : load_input(c, budget);
  check_budget(budget);
  if (c.input.empty() && c.mode == "exact") subs = sample_subjects(c, budget);

  std::optional<Corruption> corr;
  if (!c.corrupt.empty()) {
    try {
      corr = parse_corruption(c.corrupt);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  apply_corruption(subs.rational, corr);
  apply_corruption(subs.complex, corr);

  VerifyOptions opt;
  opt.grid = {budget.n_max, budget.m_max, 1};
  opt.filter = {c.n, c.m, c.l};
  opt.identities = c.identities;
  opt.threads = c.threads;

  std::vector<EntryResult> results;
  auto collect = [&](auto&& subjects) {
    try {
      auto r = verify_subjects(subjects, opt);
      results.insert(results.end(), std::make_move_iterator(r.begin()), std::make_move_iterator(r.end()));
    } catch (const ConstraintMismatch&) {
      throw;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  };
  if (c.mode == "exact") {
    collect(subs.rational);
    collect(subs.complex);
  } else {
    // Floating checks run on seeded soliton systems (generic kind) rather
    // than on the rational samples.
    std::vector<Subject<FloatScalar>> fl;
    for (auto seed : parse_seeds(c.seeds)) {
      auto r = sample_soliton(seed, budget.n_max, budget.m_max);
      fl.push_back({std::move(r.system), seed, r.rejected});
    }
    collect(fl);
  }
  if (results.empty()) throw ConfigError("the selection matches no identity instance");
  json rep = report_json(results, opt, c.mode);
  return {rep, rep["failed"].get<std::size_t>() ? exit_fail : exit_pass};
}

inline int cmd_verify(const VerifyConfig& c, std::ostream& out, std::ostream& err) {
  auto [rep, code] = run_verify(c);
  emit(rep, c.out, out);
  std::ostream& log = (c.out.empty() || c.out == "-") ? err : out;
  log << "verify: " << rep["passed"].get<std::size_t>() << " passed, " << rep["failed"].get<std::size_t>()
      << " failed\n";
  for (const auto& e : rep["entries"])
    if (e["status"] != "pass")
      log << (e["status"] == "fail" ? "FAIL " : "DEGENERATE ") << e["identity"].get<std::string>() << " kind "
          << e["kind"].get<std::string>() << " seed " << e["seed"] << " at " << e["failing_params"][0].dump() << '\n';
  return code;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateConfig {
  std::vector<double> dts = {1e-3};
  double t_end = 1.0;
  std::string window = "1:4";
  std::vector<double> nodes, amplitudes;
  std::string closure = "frozen";
  std::string out = "trajectory";
  double tolerance = 1e-8;
};

inline std::pair<int, int> parse_window(const std::string& w) {
  int lo = 0, hi = 0;
  char tail = 0;
  if (std::sscanf(w.c_str(), "%d:%d%c", &lo, &hi, &tail) != 2) throw ConfigError("--window expects lo:hi, got '" + w + "'");
  if (hi < lo) throw ConfigError("empty window " + w);
  if (lo < 1) throw ConfigError("window must start at site 1 or later");
  if (hi - lo + 1 < 3) throw ConfigError("window needs at least 3 sites");
  return {lo, hi};
}

// 1e-8 rather than printf's 1e-08.
inline std::string short_exp(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  std::string s = buf;
  const auto e = s.find('e');
  if (e == std::string::npos) return s;
  std::size_t d = e + 1;
  if (d < s.size() && (s[d] == '-' || s[d] == '+')) ++d;
  while (d + 1 < s.size() && s[d] == '0') s.erase(d, 1);
  return s;
}

inline int cmd_simulate(const SimulateConfig& c, std::ostream& out, std::ostream& err) {
  const auto [lo, hi] = parse_window(c.window);
  const int width = hi - lo + 1;
  if (c.dts.empty()) throw ConfigError("--dt needs a value");
  for (double dt : c.dts)
    if (!(dt > 0) || !std::isfinite(dt)) throw ConfigError("--dt values must be positive");
  if (!(c.t_end > 0) || !std::isfinite(c.t_end)) throw ConfigError("--t-end must be positive");
  if (c.closure != "frozen" && c.closure != "extrapolated") throw ConfigError("--closure is frozen or extrapolated");
  const EdgeClosure closure = c.closure == "frozen" ? EdgeClosure::frozen : EdgeClosure::extrapolated;

  SolitonSpec<double> spec = default_soliton();
  if (!c.nodes.empty() || !c.amplitudes.empty()) {
    std::vector<double> amps = c.amplitudes;
    if (amps.empty()) amps.assign(c.nodes.size(), 1.0);
    try {
      spec = reciprocal_soliton(c.nodes, amps);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  const double dt = *std::min_element(c.dts.begin(), c.dts.end());
  const auto steps = static_cast<std::size_t>(std::llround(c.t_end / dt));
  if (std::fabs(static_cast<double>(steps) * dt - c.t_end) > 1e-9 * c.t_end)
    throw ConfigError("--t-end must be a whole number of steps");
  std::vector<double> sweep = c.dts;
  if (sweep.size() == 1) sweep = {4 * dt, 2 * dt, dt};
  for (double h : sweep) {
    const double k = c.t_end / h;
    if (std::fabs(k - std::round(k)) > 1e-9 * k) throw ConfigError("every --dt must divide --t-end");
  }

  try {
    const auto ref = tau_trajectory(spec, lo, width, 0.0, dt, steps);
    const auto num = rk4_toda(spec, lo, width, 0.0, dt, steps, closure);
    const auto dev = compare(ref, num);
    const auto conv = convergence(spec, lo, width, c.t_end, sweep, closure);

    for (const auto& [suffix, tr] : {std::pair<const char*, const Trajectory*>{"_tau.csv", &ref}, {"_rk4.csv", &num}}) {
      const std::string path = c.out + suffix;
      std::ofstream f(path);
      if (!f) throw ConfigError("cannot write " + path);
      write_csv(f, *tr);
      if (!f) throw ConfigError("write failed for " + path);
    }

    const bool dev_ok = dev.max_abs <= c.tolerance;
    const bool order_ok = std::fabs(conv.order - 4.0) <= 0.3;
    char buf[160];
    out << "window " << lo << ".." << hi << ", t in [0, " << c.t_end << "], dt " << dt << ", closure " << c.closure
        << '\n';
    std::snprintf(buf, sizeof buf, "max_dev = %.3e\n", dev.max_abs);
    out << buf;
    out << "max_dev <= " << short_exp(c.tolerance) << ": " << (dev_ok ? "PASS" : "FAIL") << '\n';
    out << "convergence dt:";
    for (double h : conv.dts) out << ' ' << h;
    out << " errors:";
    for (double e : conv.errors) {
      std::snprintf(buf, sizeof buf, " %.3e", e);
      out << buf;
    }
    std::snprintf(buf, sizeof buf, "\nconvergence_order = %.3f (4 +- 0.3: %s)\n", conv.order, order_ok ? "PASS" : "FAIL");
    out << buf;
    return dev_ok && order_ok ? exit_pass : exit_fail;
  } catch (const TauCollision& e) {
    err << "tau collision: " << e.what() << '\n';
    return exit_fail;
  }
}

}  // namespace cli

// Parses argv and dispatches. Never throws; errors map to exit codes.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Pfaffian skew-orthogonal polynomial toolkit"};
  app.require_subcommand(1);

  cli::GenConfig g;
  auto* gen = app.add_subcommand("gen", "sample a moment system and write it as JSON");
  gen->add_option("--kind", g.kind, "none, laurent, rank2, rank1skew, rank1skew-multi, rank1skew-complex");
  gen->add_option("--seed", g.seeds, "seed")->delimiter(',');
  gen->add_option("--n-max", g.budget.n_max, "tau order ceiling (2 n_max + 1)");
  gen->add_option("--m-max", g.budget.m_max, "shift ceiling");
  gen->add_option("--components", g.components, "single-moment components");
  gen->add_option("--out", g.out, "output file (default stdout)");

  cli::VerifyConfig v;
  auto* ver = app.add_subcommand("verify", "evaluate identity residuals and report");
  ver->add_option("--kind", v.kinds, "kinds to sample, or all (default)")->delimiter(',');
  ver->add_option("--seed", v.seeds, "seeds: 3, 1,2,5 or 1-20")->delimiter(',');
  ver->add_option("--n-max", v.n_max, "n ceiling");
  ver->add_option("--m-max", v.m_max, "m ceiling");
  ver->add_option("--components", v.components, "components for multi-component kinds");
  ver->add_option("--identities", v.identities, "comma-separated identity names")->delimiter(',');
  ver->add_option("--mode", v.mode, "exact or float");
  ver->add_option("--out", v.out, "report file (default stdout)");
  ver->add_option("--corrupt", v.corrupt, "add 1 to a bi-moment, mu:i,j");
  ver->add_option("--input", v.input, "system JSON from gen");
  ver->add_option("--n", v.n, "only instances with this n");
  ver->add_option("--m", v.m, "only instances with this m");
  ver->add_option("--l", v.l, "only instances with this l (truncation size for Lax suites)");
  ver->add_option("--threads", v.threads, "worker threads (default: all cores)");

  cli::SimulateConfig s;
  auto* sim = app.add_subcommand("simulate", "integrate the Toda flow and compare with tau functions");
  sim->add_option("--dt", s.dts, "step size; several values give the convergence sweep")->delimiter(',');
  sim->add_option("--t-end", s.t_end, "final time");
  sim->add_option("--window", s.window, "sites lo:hi");
  sim->add_option("--nodes", s.nodes, "positive nodes x (paired with 1/x)")->delimiter(',');
  sim->add_option("--amplitudes", s.amplitudes, "one amplitude per node")->delimiter(',');
  sim->add_option("--closure", s.closure, "frozen or extrapolated");
  sim->add_option("--out", s.out, "CSV path prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return exit_pass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  }

  try {
    if (*gen) return cli::cmd_gen(g, out, err);
    if (*ver) return cli::cmd_verify(v, out, err);
    return cli::cmd_simulate(s, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const ConstraintMismatch& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_config;
  }
}

}  // namespace pfsop
