#include "coadapt/io.hpp"

#include "coadapt/rational.hpp"
#include "coadapt/simd.hpp"

#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace coadapt::io {

namespace {

constexpr const char* kVersion = "1.0.0";

void expect_header(const std::vector<std::vector<std::string>>& rows, const std::vector<std::string>& header,
                   std::string_view what) {
  if (rows.empty() || rows.front() != header) throw UsageError(std::string(what) + ": unexpected CSV header");
}

json doubles(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(x);
  return a;
}

std::string join_row(std::initializer_list<std::string> fields) {
  std::string out;
  for (const auto& f : fields) {
    if (!out.empty()) out += ',';
    out += f;
  }
  return out + '\n';
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("format_double failed");
  return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size()) throw UsageError("not a number: '" + std::string(s) + "'");
  return x;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) {
      std::vector<std::string> fields;
      std::size_t f = 0;
      for (;;) {
        const std::size_t c = line.find(',', f);
        fields.emplace_back(line.substr(f, c == std::string_view::npos ? std::string_view::npos : c - f));
        if (c == std::string_view::npos) break;
        f = c + 1;
      }
      rows.push_back(std::move(fields));
    }
    pos = end + 1;
  }
  return rows;
}

std::string survival_csv(const SurvivalCurve& c) {
  std::string out = "t,value,half_width_95,half_width_3sigma,replicates\n";
  for (std::size_t j = 0; j < c.t_grid.size(); ++j)
    out += join_row({format_double(c.t_grid[j]), format_double(c.value[j]), format_double(c.half_width_95[j]),
                     format_double(c.half_width_3sigma[j]), std::to_string(c.replicates)});
  return out;
}

SurvivalCurve parse_survival_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  expect_header(rows, {"t", "value", "half_width_95", "half_width_3sigma", "replicates"}, "survival");
  SurvivalCurve c;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 5) throw UsageError("survival: row with wrong field count");
    c.t_grid.push_back(parse_double(r[0]));
    c.value.push_back(parse_double(r[1]));
    c.half_width_95.push_back(parse_double(r[2]));
    c.half_width_3sigma.push_back(parse_double(r[3]));
    c.replicates = std::stol(r[4]);
  }
  c.kind = c.replicates == 0 ? CurveKind::Exact : CurveKind::Empirical;
  return c;
}

json survival_json(const SurvivalCurve& c) {
  return json{{"kind", curve_kind_name(c.kind)},
              {"replicates", c.replicates},
              {"error", c.error},
              {"t", doubles(c.t_grid)},
              {"value", doubles(c.value)},
              {"half_width_95", doubles(c.half_width_95)},
              {"half_width_3sigma", doubles(c.half_width_3sigma)}};
}

SurvivalCurve survival_from_json(const json& j) {
  SurvivalCurve c;
  c.kind = j.at("kind").get<std::string>() == "exact" ? CurveKind::Exact : CurveKind::Empirical;
  c.replicates = j.at("replicates").get<long>();
  c.error = j.at("error").get<double>();
  c.t_grid = j.at("t").get<std::vector<double>>();
  c.value = j.at("value").get<std::vector<double>>();
  c.half_width_95 = j.at("half_width_95").get<std::vector<double>>();
  c.half_width_3sigma = j.at("half_width_3sigma").get<std::vector<double>>();
  return c;
}

TailGrid tail_grid(const TailTable& tab, int m_lo) {
  TailGrid g;
  g.t_grid = tab.t_grid;
  for (int m = std::max(0, m_lo); m <= tab.m_max; ++m) {
    g.levels.push_back(m);
    g.values.push_back(tab.value[static_cast<std::size_t>(m)]);
  }
  return g;
}

std::string tail_table_csv(const TailGrid& g) {
  std::string out = "m";
  for (double t : g.t_grid) out += "," + format_double(t);
  out += '\n';
  for (std::size_t r = 0; r < g.levels.size(); ++r) {
    out += std::to_string(g.levels[r]);
    for (double v : g.values[r]) out += "," + format_double(v);
    out += '\n';
  }
  return out;
}

TailGrid parse_tail_table_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  if (rows.empty() || rows.front().empty() || rows.front().front() != "m")
    throw UsageError("tail table: unexpected CSV header");
  TailGrid g;
  for (std::size_t i = 1; i < rows.front().size(); ++i) g.t_grid.push_back(parse_double(rows.front()[i]));
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].size() != g.t_grid.size() + 1) throw UsageError("tail table: row with wrong field count");
    g.levels.push_back(std::stoi(rows[r][0]));
    std::vector<double> vals;
    for (std::size_t i = 1; i < rows[r].size(); ++i) vals.push_back(parse_double(rows[r][i]));
    g.values.push_back(std::move(vals));
  }
  return g;
}

json tail_table_json(const TailTable& tab, int m_lo) {
  json rows = json::array();
  for (int m = std::max(0, m_lo); m <= tab.m_max; ++m)
    rows.push_back({{"m", m}, {"values", doubles(tab.value[static_cast<std::size_t>(m)])}});
  return json{{"d", tab.d},
              {"m_max", tab.m_max},
              {"strategy", strategy_name(tab.strategy)},
              {"method", "uniformization"},
              {"eps", tab.eps},
              {"max_error", tab.max_error()},
              {"t", doubles(tab.t_grid)},
              {"rows", rows}};
}

std::string cutoff_csv(const std::vector<CutoffPoint>& pts) {
  std::string out = "theta,T_d,t,tv_exact,tv_asymptotic\n";
  for (const auto& p : pts)
    out += join_row({format_double(p.theta), format_double(p.T_d), format_double(p.t), format_double(p.tv_exact),
                     format_double(p.tv_asymptotic)});
  return out;
}

std::vector<CutoffPoint> parse_cutoff_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  expect_header(rows, {"theta", "T_d", "t", "tv_exact", "tv_asymptotic"}, "cutoff");
  std::vector<CutoffPoint> pts;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& r = rows[i];
    if (r.size() != 5) throw UsageError("cutoff: row with wrong field count");
    CutoffPoint p;
    p.theta = parse_double(r[0]);
    p.T_d = parse_double(r[1]);
    p.t = parse_double(r[2]);
    p.tv_exact = parse_double(r[3]);
    p.tv_asymptotic = parse_double(r[4]);
    p.clamped = p.T_d + p.theta < 0.0;
    pts.push_back(p);
  }
  return pts;
}

json cutoff_json(const std::vector<CutoffPoint>& pts) {
  json a = json::array();
  for (const auto& p : pts)
    a.push_back({{"d", p.d},
                 {"n", p.n},
                 {"theta", p.theta},
                 {"T_d", p.T_d},
                 {"t", p.t},
                 {"tv_exact", p.tv_exact},
                 {"tv_asymptotic", p.tv_asymptotic},
                 {"clamped", p.clamped}});
  return a;
}

std::string dinfty_csv(const std::vector<DinftyRow>& rows) {
  std::string out = "d,sup_gap,t_at_sup\n";
  for (const auto& r : rows)
    out += join_row({std::to_string(r.d), format_double(r.sup_gap), format_double(r.t_at_sup)});
  return out;
}

std::vector<DinftyRow> parse_dinfty_csv(std::string_view text) {
  const auto rows = parse_csv(text);
  expect_header(rows, {"d", "sup_gap", "t_at_sup"}, "dinfty");
  std::vector<DinftyRow> out;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].size() != 3) throw UsageError("dinfty: row with wrong field count");
    DinftyRow r;
    r.d = std::stoi(rows[i][0]);
    r.sup_gap = parse_double(rows[i][1]);
    r.t_at_sup = parse_double(rows[i][2]);
    out.push_back(r);
  }
  return out;
}

std::string tv_csv(const std::vector<double>& t, const std::vector<double>& tv) {
  std::string out = "t,tv_exact\n";
  for (std::size_t j = 0; j < t.size(); ++j) out += join_row({format_double(t[j]), format_double(tv[j])});
  return out;
}

json verify_json(const VerifyReport& r) {
  const auto& o = r.options;
  json cells = json::array();
  for (const auto& c : r.cells)
    cells.push_back({{"m", c.m},
                     {"t", c.t},
                     {"status", status_name(c.status)},
                     {"tied", c.tied},
                     {"vertex", vertex_name(c.vertex)},
                     {"objective", c.objective},
                     {"r_m", c.r_m},
                     {"r_m_minus_1", c.r_m_minus_1},
                     {"diff_sign", sign_name(c.diff_sign)},
                     {"max_gap", c.max_gap},
                     {"gap_slack", c.gap_slack}});
  json dom = json::array();
  for (const auto& dr : r.dominance) {
    json dc = json::array();
    for (const auto& c : dr.cells)
      dc.push_back({{"t", c.t},
                    {"empirical", c.empirical},
                    {"half_width_3sigma", c.half_width_3sigma},
                    {"exact", c.exact},
                    {"margin", c.margin},
                    {"violation", c.violation}});
    dom.push_back({{"competitor", strategy_name(dr.competitor)},
                   {"m0", dr.m0},
                   {"replicates", dr.replicates},
                   {"seed", dr.seed},
                   {"violations", dr.violations},
                   {"cells", dc}});
  }
  return json{{"d", o.d},
              {"m_max", o.m_max},
              {"eps", o.eps},
              {"t", doubles(o.t_grid)},
              {"samples_per_cell", o.samples_per_cell},
              {"seed", o.seed},
              {"summary",
               {{"match", r.matches},
                {"tie", r.ties},
                {"violation", r.violations},
                {"bellman_failures", r.bellman_failures},
                {"max_abs_gap_optimal", r.max_abs_gap_optimal},
                {"dominance_violations", r.dominance_violations},
                {"passed", r.passed()}}},
              {"cells", cells},
              {"dominance", dom}};
}

json marginal_json(const MarginalReport& r) {
  json tests = json::array();
  for (const auto& t : r.tests)
    tests.push_back({{"name", t.name},
                     {"statistic", t.statistic},
                     {"dof", t.dof},
                     {"p_value", t.p_value},
                     {"p_adjusted", t.p_adjusted}});
  return json{{"strategy", strategy_name(r.strategy)},
              {"d", r.params.d},
              {"n", r.params.n},
              {"horizon", r.horizon},
              {"replicates", r.replicates},
              {"seed", r.seed},
              {"alpha", r.alpha},
              {"mean_changes_x", doubles(r.mean_changes_x)},
              {"mean_changes_y", doubles(r.mean_changes_y)},
              {"jump_times_identical", r.jump_times_identical},
              {"passed", r.passed},
              {"tests", tests}};
}

json mean_tau_json(const MeanTau& r) {
  json j{{"d", r.d},
         {"n", r.n},
         {"value", r.value},
         {"within_bounds", r.within_bounds},
         {"exact", r.exact ? json(r.exact->get_str()) : json(nullptr)}};
  j["ratio_to_log_n"] = r.n > 1 ? json(r.ratio_to_log_n) : json(nullptr);
  return j;
}

json rdiff_json(const RDiffTable& r) {
  auto rows = [&](const std::vector<std::vector<CertifiedValue>>& tab, int first) {
    json a = json::array();
    for (int m = first; m <= r.m_max; ++m) {
      json cells = json::array();
      for (const auto& c : tab[static_cast<std::size_t>(m)])
        cells.push_back({{"value", c.value}, {"error", c.error}, {"sign", sign_name(c.sign)}});
      a.push_back({{"m", m}, {"cells", cells}});
    }
    return a;
  };
  return json{{"d", r.d}, {"m_max", r.m_max}, {"t", doubles(r.t_grid)}, {"r", rows(r.r, 1)}, {"diff", rows(r.diff, 2)}};
}

json run_metadata(std::string_view command, const json& parameters) {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return json{{"command", command},
              {"parameters", parameters},
              {"version", kVersion},
              {"simd", simd::isa_name(simd::active_isa())},
              {"timestamp", stamp}};
}

void write_text(const std::string& path, std::string_view text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("write to '" + path + "' failed");
}

std::string read_text(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace coadapt::io
