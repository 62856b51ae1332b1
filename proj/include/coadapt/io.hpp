#pragma once

// Tabular and JSON emitters with matching parsers. Doubles are written in
// shortest round-trip form, so parse followed by emit reproduces a file byte
// for byte.

#include "coadapt/marginals.hpp"
#include "coadapt/optimality.hpp"
#include "coadapt/survival_curve.hpp"
#include "coadapt/tail_engine.hpp"
#include "coadapt/tv.hpp"

#include "json.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace coadapt::io {

using nlohmann::json;

std::string format_double(double x);
double parse_double(std::string_view s);

/// Split CSV text into rows of fields (no quoting: fields never contain commas).
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// survival: t,value,half_width_95,half_width_3sigma,replicates
std::string survival_csv(const SurvivalCurve& c);
SurvivalCurve parse_survival_csv(std::string_view text);
json survival_json(const SurvivalCurve& c);
SurvivalCurve survival_from_json(const json& j);

// tail table: m, then one column per t (header holds the t values)
struct TailGrid {
  std::vector<double> t_grid;
  std::vector<int> levels;
  std::vector<std::vector<double>> values;  // [row][t]
};
TailGrid tail_grid(const TailTable& tab, int m_lo = 0);
std::string tail_table_csv(const TailGrid& g);
TailGrid parse_tail_table_csv(std::string_view text);
json tail_table_json(const TailTable& tab, int m_lo = 0);

// cutoff: theta,T_d,t,tv_exact,tv_asymptotic
std::string cutoff_csv(const std::vector<CutoffPoint>& pts);
std::vector<CutoffPoint> parse_cutoff_csv(std::string_view text);
json cutoff_json(const std::vector<CutoffPoint>& pts);

// d-to-infinity gap table: d,sup_gap,t_at_sup
std::string dinfty_csv(const std::vector<DinftyRow>& rows);
std::vector<DinftyRow> parse_dinfty_csv(std::string_view text);

// tv: t,tv_exact
std::string tv_csv(const std::vector<double>& t, const std::vector<double>& tv);

json verify_json(const VerifyReport& r);
json marginal_json(const MarginalReport& r);
json mean_tau_json(const MeanTau& r);
json rdiff_json(const RDiffTable& r);

/// Run-metadata record; the timestamp is the only nondeterministic field.
json run_metadata(std::string_view command, const json& parameters);

void write_text(const std::string& path, std::string_view text);
std::string read_text(const std::string& path);

}  // namespace coadapt::io
