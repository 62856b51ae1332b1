// coadapt: command-line front end for the coupling library.
//
// Exit status: 0 success, 1 a verification finding, 2 invalid configuration,
// 3 internal error.

#include "coadapt/io.hpp"
#include "coadapt/laplace.hpp"
#include "coadapt/marginals.hpp"
#include "coadapt/optimality.hpp"
#include "coadapt/simulator.hpp"
#include "coadapt/tail_engine.hpp"
#include "coadapt/tv.hpp"

#include "CLI11.hpp"

#include <climits>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <string>
#include <vector>

using namespace coadapt;
using io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFinding = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInternal = 3;

struct GridSpec {
  std::vector<double> list;
  double start = 0.0;
  double stop = 10.0;
  int points = 50;
  std::string spacing = "linear";
};

struct Output {
  std::string path;
  std::string format = "csv";
  bool plot = false;
};

std::vector<double> make_grid(const GridSpec& g) {
  if (!g.list.empty()) {
    for (std::size_t i = 0; i < g.list.size(); ++i) {
      if (!(g.list[i] >= 0.0) || !std::isfinite(g.list[i])) throw UsageError("--t values must be finite and >= 0");
      if (i > 0 && g.list[i] <= g.list[i - 1]) throw UsageError("--t values must be strictly increasing");
    }
    return g.list;
  }
  if (!(g.start >= 0.0) || !(g.stop >= g.start)) throw UsageError("time grid needs 0 <= start <= stop");
  if (g.points < 1) throw UsageError("time grid needs at least one point");
  if (g.points > 1 && g.stop == g.start) throw UsageError("time grid with several points needs start < stop");
  std::vector<double> t(static_cast<std::size_t>(g.points));
  if (g.points == 1) {
    t[0] = g.start;
    return t;
  }
  const double last = g.points - 1.0;
  if (g.spacing == "log") {
    if (g.start <= 0.0) throw UsageError("log spacing needs start > 0");
    const double a = std::log(g.start), b = std::log(g.stop);
    for (int i = 0; i < g.points; ++i) t[static_cast<std::size_t>(i)] = std::exp(a + (b - a) * i / last);
  } else {
    for (int i = 0; i < g.points; ++i) t[static_cast<std::size_t>(i)] = g.start + (g.stop - g.start) * i / last;
  }
  t.front() = g.start;
  t.back() = g.stop;
  return t;
}

void add_grid(CLI::App* sub, GridSpec& g) {
  sub->add_option("--t", g.list, "Explicit time points (overrides the range options)")->delimiter(',');
  sub->add_option("--t-start", g.start, "First grid time")->capture_default_str();
  sub->add_option("--t-stop", g.stop, "Last grid time")->capture_default_str();
  sub->add_option("--t-points", g.points, "Number of grid points")->capture_default_str();
  sub->add_option("--t-spacing", g.spacing, "Grid spacing")
      ->check(CLI::IsMember({"linear", "log"}))
      ->capture_default_str();
}

void add_output(CLI::App* sub, Output& o, bool tabular) {
  sub->add_option("--out", o.path, "Output file (stdout when omitted); a .meta.json record is written beside it");
  if (tabular) {
    sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_flag("--plot", o.plot, "Also write a gnuplot script next to a CSV output");
  } else {
    o.format = "json";
  }
}

const auto kEps = CLI::Validator(
    [](std::string& s) -> std::string {
      const double e = std::stod(s);
      return e > 0.0 && e <= 1e-2 ? std::string() : "eps must lie in (0, 1e-2]";
    },
    "(0, 1e-2]");

void gnuplot_script(const std::string& data, const std::string& kind) {
  std::string s = "set datafile separator ','\nset key autotitle columnhead\nset grid\n";
  if (kind == "survival") {
    s += "set xlabel 't'\nset ylabel 'P(tau > t)'\n";
    s += "plot '" + data + "' using 1:2:3 with yerrorbars, '' using 1:2 with lines notitle\n";
  } else if (kind == "tail") {
    s += "set xlabel 't'\nset ylabel 'P(tau > t)'\nset key autotitle\n";
    s += "stats '" + data + "' skip 1 nooutput\n";
    s += "plot for [r=2:STATS_records+1] '" + data + "' matrix every ::1:r-1::r-1 using 1:3 with lines title sprintf('row %d', r-1)\n";
  } else if (kind == "cutoff") {
    s += "set xlabel 'theta'\nset ylabel 'TV'\nplot '" + data + "' using 1:4 with linespoints, '' using 1:5 with lines\n";
  } else if (kind == "dinfty") {
    s += "set logscale x\nset xlabel 'd'\nset ylabel 'sup gap'\nplot '" + data + "' using 1:2 with linespoints\n";
  } else {
    s += "set xlabel 't'\nplot '" + data + "' using 1:2 with lines\n";
  }
  io::write_text(data + ".gp", s);
}

void emit(const Output& o, const std::string& command, const json& params, const std::string& text,
          const std::string& plot_kind = {}) {
  if (o.path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  io::write_text(o.path, text);
  io::write_text(o.path + ".meta.json", io::run_metadata(command, params).dump(2) + "\n");
  if (o.plot && o.format == "csv" && !plot_kind.empty()) gnuplot_script(o.path, plot_kind);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json grid_params(const std::vector<double>& t) {
  return json{{"t_points", t.size()}, {"t_first", t.front()}, {"t_last", t.back()}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal co-adapted coupling of random walks on products of complete graphs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from a TOML/INI file; command-line flags take precedence");

  int workers = 0;
  app.add_option("--workers", workers, "Worker threads (default: COADAPT_WORKERS or hardware concurrency)")
      ->check(CLI::NonNegativeNumber);

  std::map<CLI::App*, std::function<int()>> handlers;

  // simulate
  {
    auto* sub = app.add_subcommand("simulate", "Monte Carlo survival curve P(tau > t)");
    static struct {
      std::string strategy = "optimal";
      int d = 2, m0 = 1;
      std::vector<int> y0;
      long replicates = 10000;
      std::uint64_t seed = 1;
      GridSpec grid;
      Output out;
    } a;
    sub->add_option("--strategy", a.strategy, "optimal | independent | synchronous | pairwise-classic")
        ->capture_default_str();
    sub->add_option("--d", a.d, "Vertices per coordinate")->check(CLI::Range(2, INT_MAX))->capture_default_str();
    sub->add_option("--m0,--m", a.m0, "Initial unmatched count (lumped run)")
        ->check(CLI::Range(0, INT_MAX))
        ->capture_default_str();
    sub->add_option("--y0", a.y0, "Full-coordinate run from X = 0 and this Y (comma separated)")->delimiter(',');
    sub->add_option("--replicates", a.replicates, "Independent replicates")
        ->check(CLI::Range(100L, LONG_MAX))
        ->capture_default_str();
    sub->add_option("--seed", a.seed, "Master seed")->capture_default_str();
    add_grid(sub, a.grid);
    add_output(sub, a.out, true);
    handlers[sub] = [&] {
      const StrategyId id = parse_strategy(a.strategy);
      const auto t = make_grid(a.grid);
      SurvivalCurve c;
      json p = grid_params(t);
      p.update({{"strategy", a.strategy}, {"d", a.d}, {"replicates", a.replicates}, {"seed", a.seed}});
      if (!a.y0.empty()) {
        const WalkParams wp(a.d, static_cast<int>(a.y0.size()));
        c = estimate_survival(id, State(wp), State(wp, a.y0), t, a.replicates, a.seed, workers);
        p["y0"] = a.y0;
      } else {
        c = estimate_survival(id, a.d, a.m0, t, a.replicates, a.seed, workers);
        p["m0"] = a.m0;
      }
      emit(a.out, "simulate", p, a.out.format == "csv" ? io::survival_csv(c) : dump(io::survival_json(c)), "survival");
      return kExitOk;
    };
  }

  // exact
  {
    auto* sub = app.add_subcommand("exact", "Certified tail probabilities of the optimal coupling");
    static struct {
      int d = 2, m = 1, m_max = -1;
      double eps = 1e-12;
      bool rdiff = false;
      GridSpec grid;
      Output out;
    } a;
    sub->add_option("--d", a.d, "Vertices per coordinate")->check(CLI::Range(2, INT_MAX))->capture_default_str();
    sub->add_option("--m,--m0", a.m, "Single level to report")->check(CLI::Range(0, INT_MAX))->capture_default_str();
    sub->add_option("--mmax", a.m_max, "Report every level 0..mmax instead")->check(CLI::Range(0, INT_MAX));
    sub->add_option("--eps", a.eps, "Certified error bound")->check(kEps)->capture_default_str();
    sub->add_flag("--rdiff", a.rdiff, "Emit increments r and their differences with certified signs (JSON)");
    add_grid(sub, a.grid);
    add_output(sub, a.out, true);
    handlers[sub] = [&] {
      const auto t = make_grid(a.grid);
      const bool all = a.m_max >= 0;
      const int top = all ? a.m_max : a.m;
      json p = grid_params(t);
      p.update({{"d", a.d}, {"eps", a.eps}, {"method", "uniformization"}});
      p[all ? "mmax" : "m"] = top;
      const TailTable tab = survival_exact(a.d, top, t, a.eps);
      if (a.rdiff) {
        Output o = a.out;
        o.format = "json";
        emit(o, "exact", p, dump(io::rdiff_json(r_diff_table(tab))));
      } else if (a.out.format == "csv") {
        emit(a.out, "exact", p, io::tail_table_csv(io::tail_grid(tab, all ? 0 : a.m)), "tail");
      } else {
        emit(a.out, "exact", p, dump(io::tail_table_json(tab, all ? 0 : a.m)));
      }
      return kExitOk;
    };
  }

  // laplace
  {
    auto* sub = app.add_subcommand("laplace", "Exact Laplace transforms V(m), R(m) and their recursions");
    static struct {
      int d = 4, m_max = 4;
      bool symbolic = false;
      Output out;
    } a;
    sub->add_option("--d", a.d, "Vertices per coordinate")->check(CLI::Range(2, INT_MAX))->capture_default_str();
    sub->add_option("--mmax,--m", a.m_max, "Highest level")->check(CLI::Range(1, 200))->capture_default_str();
    sub->add_flag("--symbolic", a.symbolic, "Keep d symbolic (valid for every d >= 4)");
    add_output(sub, a.out, false);
    handlers[sub] = [&] {
      json levels = json::array();
      bool ok = true;
      json checks = json::array();
      auto record = [&](const char* name, int m, bool holds) {
        checks.push_back({{"identity", name}, {"m", m}, {"holds", holds}});
        ok = ok && holds;
      };
      json p{{"mmax", a.m_max}, {"symbolic", a.symbolic}};
      json j;
      if (a.symbolic) {
        const auto V = laplace_V_symbolic_table(a.m_max + 1);
        for (int m = 1; m <= a.m_max; ++m) {
          const auto mi = static_cast<std::size_t>(m);
          levels.push_back({{"m", m}, {"V", to_string(V[mi])}, {"R", to_string(V[mi] - V[mi - 1])}});
        }
        for (int m = 2; m <= a.m_max; ++m) record("c2", m, c2_recursion_holds_symbolic(V, m));
        for (int m = 2; m <= a.m_max; ++m) record("r-three-term", m, r_three_term_holds_symbolic(V, m));
        j = {{"d", "symbolic"}};
      } else {
        p["d"] = a.d;
        const auto V = laplace_V_table(a.d, a.m_max + 1);
        const auto z = laplace_zero_pattern(a.d, a.m_max);
        for (int m = 1; m <= a.m_max; ++m) {
          const auto mi = static_cast<std::size_t>(m);
          json row{{"m", m},
                   {"regime", regime_name(regime(m, a.d))},
                   {"V", to_string(V[mi])},
                   {"R", to_string(V[mi] - V[mi - 1])},
                   {"R_zero", static_cast<bool>(z.r_zero[mi])},
                   {"expected_tau", expected_tau(a.d, m).get_str()}};
          if (m >= 2) row["diff_zero"] = static_cast<bool>(z.diff_zero[mi]);
          levels.push_back(row);
        }
        for (int m = 1; m <= a.m_max; ++m) {
          if (regime(m, a.d) == Regime::C3)
            record("c3", m, c3_recursion_holds(V, a.d, m));
          else
            record("c2", m, c2_recursion_holds(V, a.d, m));
        }
        for (int m = 1; m <= a.m_max; ++m)
          if (regime(m, a.d) == Regime::C2 && regime(m + 1, a.d) == Regime::C2)
            record("r-three-term", m, r_three_term_holds(V, a.d, m));
        j = {{"d", a.d}};
      }
      j.update({{"levels", levels}, {"identities", checks}, {"passed", ok}});
      emit(a.out, "laplace", p, dump(j));
      return ok ? kExitOk : kExitFinding;
    };
  }

  // mean-tau
  {
    auto* sub = app.add_subcommand("mean-tau", "Expected coupling times and the logarithmic bounds");
    static struct {
      int d = 2;
      long n = 0;
      int m = -1;
      Output out;
    } a;
    sub->add_option("--d", a.d, "Vertices per coordinate")->check(CLI::Range(2, INT_MAX))->capture_default_str();
    sub->add_option("--n", a.n, "Dimension; reports E[tau] from X = 0 and Y uniform")->check(CLI::Range(1L, long{INT_MAX}));
    sub->add_option("--m,--m0", a.m, "Report E[tau | N = m] exactly with its sandwich bounds")
        ->check(CLI::Range(0, 100000));
    add_output(sub, a.out, false);
    handlers[sub] = [&] {
      if (a.n == 0 && a.m < 0) throw UsageError("mean-tau needs --n or --m");
      json j{{"d", a.d}};
      json p{{"d", a.d}};
      bool ok = true;
      if (a.m >= 0) {
        const mpq_class e = expected_tau(a.d, a.m);
        json row{{"m", a.m}, {"exact", e.get_str()}, {"value", e.get_d()}};
        if (a.m % 2 == 0) {
          const mpq_class lo = mk_bound_mean(2, a.m / 2), hi = mk_bound_mean(1, a.m);
          const bool inside = lo <= e && e <= hi;
          row.update({{"lower", lo.get_str()}, {"upper", hi.get_str()}, {"within_bounds", inside}});
          ok = ok && inside;
        }
        j["conditional"] = row;
        p["m"] = a.m;
      }
      if (a.n > 0) {
        const MeanTau mt = mean_tau_stationary(a.d, a.n);
        j["stationary"] = io::mean_tau_json(mt);
        if (a.n > 1) ok = ok && mt.within_bounds;
        p["n"] = a.n;
      }
      j["passed"] = ok;
      emit(a.out, "mean-tau", p, dump(j));
      return ok ? kExitOk : kExitFinding;
    };
  }

  // tv
  {
    auto* sub = app.add_subcommand("tv", "Exact total variation distance to uniform from X = 0");
    static struct {
      int d = 2;
      long n = 1;
      GridSpec grid;
      Output out;
    } a;
    sub->add_option("--d", a.d, "Vertices per coordinate")->check(CLI::Range(2, INT_MAX))->capture_default_str();
    sub->add_option("--n", a.n, "Dimension")->check(CLI::Range(1L, LONG_MAX))->capture_default_str();
    add_grid(sub, a.grid);
    add_output(sub, a.out, true);
    handlers[sub] = [&] {
      const auto t = make_grid(a.grid);
      std::vector<double> tv;
      for (double x : t) tv.push_back(tv_exact(a.d, a.n, x));
      json p = grid_params(t);
      p.update({{"d", a.d}, {"n", a.n}});
      if (a.out.format == "csv") {
        emit(a.out, "tv", p, io::tv_csv(t, tv), "tv");
      } else {
        emit(a.out, "tv", p, dump(json{{"d", a.d}, {"n", a.n}, {"t", t}, {"tv_exact", tv}}));
      }
      return kExitOk;
    };
  }

  // cutoff
  {
    auto* sub = app.add_subcommand("cutoff", "TV profile around the cutoff time against its limit");
    static struct {
      int d = 2;
      long n = 1000;
      std::vector<double> theta{-1.0, 0.0, 1.0};
      Output out;
    } a;
    sub->add_option("--d", a.d, "Vertices per coordinate")->check(CLI::Range(2, INT_MAX))->capture_default_str();
    sub->add_option("--n", a.n, "Dimension")->check(CLI::Range(2L, LONG_MAX))->capture_default_str();
    sub->add_option("--theta", a.theta, "Window offsets")->delimiter(',')->capture_default_str();
    add_output(sub, a.out, true);
    handlers[sub] = [&] {
      const auto pts = cutoff_profile(a.d, a.n, a.theta);
      const json p{{"d", a.d}, {"n", a.n}, {"theta", a.theta}, {"formula", "2*Phi(sqrt(d-1)/2*exp(-d*theta/(d-1)))-1"}};
      emit(a.out, "cutoff", p, a.out.format == "csv" ? io::cutoff_csv(pts) : dump(io::cutoff_json(pts)), "cutoff");
      return kExitOk;
    };
  }

  // limit
  {
    auto* sub = app.add_subcommand("limit", "Large-d limit of the optimal coupling's tail");
    static struct {
      long n = 5;
      std::vector<int> d_list;
      double eps = 1e-12;
      GridSpec grid;
      Output out;
    } a;
    sub->add_option("--n", a.n, "Dimension")->check(CLI::Range(1L, long{INT_MAX}))->capture_default_str();
    sub->add_option("--d", a.d_list, "Increasing d values for the sup-gap table")
        ->delimiter(',')
        ->check(CLI::Range(2, INT_MAX));
    sub->add_option("--eps", a.eps, "Certified error bound")->check(kEps)->capture_default_str();
    add_grid(sub, a.grid);
    add_output(sub, a.out, true);
    handlers[sub] = [&] {
      const auto t = make_grid(a.grid);
      json p = grid_params(t);
      p.update({{"n", a.n}, {"eps", a.eps}});
      if (a.d_list.empty()) {
        std::vector<double> v;
        for (double x : t) v.push_back(limit_tail(a.n, x));
        if (a.out.format == "csv") {
          std::string s = "t,limit_tail\n";
          for (std::size_t j = 0; j < t.size(); ++j) s += io::format_double(t[j]) + "," + io::format_double(v[j]) + "\n";
          emit(a.out, "limit", p, s, "tv");
        } else {
          emit(a.out, "limit", p, dump(json{{"n", a.n}, {"t", t}, {"limit_tail", v}}));
        }
        return kExitOk;
      }
      p["d"] = a.d_list;
      const auto rows = dinfty_convergence(a.n, a.d_list, t, a.eps);
      if (a.out.format == "csv") {
        emit(a.out, "limit", p, io::dinfty_csv(rows), "dinfty");
      } else {
        json arr = json::array();
        for (const auto& r : rows) arr.push_back({{"d", r.d}, {"sup_gap", r.sup_gap}, {"t_at_sup", r.t_at_sup}, {"gap", r.gap}});
        emit(a.out, "limit", p, dump(json{{"n", a.n}, {"t", t}, {"rows", arr}}));
      }
      return kExitOk;
    };
  }

  // verify
  {
    auto* sub = app.add_subcommand("verify", "Pointwise optimality grid, Bellman gaps and dominance tests");
    static struct {
      VerifyOptions opt;
      GridSpec grid{{}, 0.01, 10.0, 40, "log"};
      Output out;
    } a;
    sub->add_option("--d", a.opt.d, "Vertices per coordinate")->check(CLI::Range(2, INT_MAX))->capture_default_str();
    sub->add_option("--mmax", a.opt.m_max, "Highest level")->check(CLI::Range(1, 2000))->capture_default_str();
    sub->add_option("--eps", a.opt.eps, "Certified error bound")->check(kEps)->capture_default_str();
    sub->add_option("--samples", a.opt.samples_per_cell, "Random feasible schedules per cell")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    sub->add_option("--seed", a.opt.seed, "Master seed")->capture_default_str();
    sub->add_option("--replicates", a.opt.dominance_replicates, "Dominance replicates (0 skips the dominance tests)")
        ->check(CLI::Validator(
            [](std::string& s) -> std::string {
              const long r = std::stol(s);
              return r == 0 || r >= 100 ? std::string() : "replicates must be 0 or >= 100";
            },
            "0 or >= 100"))
        ->capture_default_str();
    sub->add_option("--dominance-mmax", a.opt.dominance_m0_max, "Highest start level for dominance tests")
        ->check(CLI::Range(2, 2000))
        ->capture_default_str();
    add_grid(sub, a.grid);
    add_output(sub, a.out, false);
    handlers[sub] = [&] {
      a.opt.t_grid = make_grid(a.grid);
      a.opt.workers = workers;
      const VerifyReport r = verify(a.opt);
      json p = grid_params(a.opt.t_grid);
      p.update({{"d", a.opt.d}, {"mmax", a.opt.m_max}, {"eps", a.opt.eps}, {"seed", a.opt.seed}});
      emit(a.out, "verify", p, dump(io::verify_json(r)));
      return r.passed() ? kExitOk : kExitFinding;
    };
  }

  // validate-marginals
  {
    auto* sub = app.add_subcommand("validate-marginals", "Chi-square checks that both coordinates are unit-rate walks");
    static struct {
      std::vector<std::string> strategies;
      int d = 2, n = 5;
      double horizon = 10.0, alpha = 1e-3;
      long replicates = 10000;
      std::uint64_t seed = 1;
      Output out;
    } a;
    sub->add_option("--strategy", a.strategies, "Strategies to test (default: all)")->delimiter(',');
    sub->add_option("--d", a.d, "Vertices per coordinate")->check(CLI::Range(2, INT_MAX))->capture_default_str();
    sub->add_option("--n", a.n, "Dimension")->check(CLI::Range(1, INT_MAX))->capture_default_str();
    sub->add_option("--horizon,-T", a.horizon, "Time horizon")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--alpha", a.alpha, "Family-wise level")->check(CLI::Range(1e-12, 0.5))->capture_default_str();
    sub->add_option("--replicates", a.replicates, "Independent replicates")
        ->check(CLI::Range(100L, LONG_MAX))
        ->capture_default_str();
    sub->add_option("--seed", a.seed, "Master seed")->capture_default_str();
    add_output(sub, a.out, false);
    handlers[sub] = [&] {
      std::vector<StrategyId> ids;
      if (a.strategies.empty()) ids.assign(kAllStrategies.begin(), kAllStrategies.end());
      for (const auto& s : a.strategies) ids.push_back(parse_strategy(s));
      json reports = json::array();
      bool ok = true;
      for (StrategyId id : ids) {
        const MarginalReport r =
            validate_marginals(id, WalkParams(a.d, a.n), a.horizon, a.replicates, a.seed, a.alpha, workers);
        reports.push_back(io::marginal_json(r));
        ok = ok && r.passed;
      }
      const json p{{"d", a.d}, {"n", a.n}, {"horizon", a.horizon}, {"replicates", a.replicates}, {"seed", a.seed}};
      emit(a.out, "validate-marginals", p, dump(json{{"reports", reports}, {"passed", ok}}));
      return ok ? kExitOk : kExitFinding;
    };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    for (auto& [sub, run] : handlers)
      if (sub->parsed()) return run();
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}
