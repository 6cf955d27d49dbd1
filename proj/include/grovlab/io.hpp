#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "grovlab/conjlab.hpp"
#include "grovlab/groverian.hpp"

namespace grovlab {

// 17 significant digits: lossless double round-trip in text form.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline nlohmann::json scan_record_json(const ScanRecord& rec) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [name, value] : rec.params) params[name] = value;
  nlohmann::json j{
      {"family", rec.family},
      {"params", params},
      {"pmax_numeric", rec.pmax_numeric},
      {"pmax_analytic",
       rec.pmax_analytic ? nlohmann::json(*rec.pmax_analytic)
                         : nlohmann::json(nullptr)},
      {"branch", rec.branch ? nlohmann::json(gw_branch_name(*rec.branch))
                            : nlohmann::json(nullptr)},
      {"teleport_bob",
       {rec.teleport_bob[0], rec.teleport_bob[1], rec.teleport_bob[2]}},
      {"dense_alice",
       {rec.dense_alice[0], rec.dense_alice[1], rec.dense_alice[2]}},
      {"necessary_ok", rec.necessary_ok},
      {"sufficient_ok", rec.sufficient_ok},
  };
  return j;
}

inline nlohmann::json scan_records_json(const std::vector<ScanRecord>& recs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : recs) arr.push_back(scan_record_json(r));
  return arr;
}

// CSV with one row per record: family, the per-family parameter columns,
// then the fixed numeric/flag columns. All records must share one parameter
// layout (one scan = one family).
inline std::string scan_records_csv(const std::vector<ScanRecord>& recs) {
  if (recs.empty()) return "";
  std::string out = "family";
  for (const auto& [name, _] : recs.front().params) out += "," + name;
  out +=
      ",pmax_numeric,pmax_analytic,branch,teleport_bob0,teleport_bob1,"
      "teleport_bob2,dense_alice0,dense_alice1,dense_alice2,necessary_ok,"
      "sufficient_ok\n";
  for (const auto& r : recs) {
    if (r.params.size() != recs.front().params.size())
      throw std::invalid_argument("scan_records_csv: mixed record layouts");
    out += r.family;
    for (const auto& [_, value] : r.params) out += "," + format_double(value);
    out += "," + format_double(r.pmax_numeric);
    out += ",";
    if (r.pmax_analytic) out += format_double(*r.pmax_analytic);
    out += ",";
    if (r.branch) out += gw_branch_name(*r.branch);
    for (bool b : r.teleport_bob) out += b ? ",1" : ",0";
    for (bool b : r.dense_alice) out += b ? ",1" : ",0";
    out += r.necessary_ok ? ",1" : ",0";
    out += r.sufficient_ok ? ",1" : ",0";
    out += "\n";
  }
  return out;
}

inline nlohmann::json conjecture_report_json(const ConjectureReport& rep) {
  return nlohmann::json{
      {"records", rep.total},
      {"feasible_records", rep.feasible_count},
      {"pmax_half_records", rep.pmax_half_count},
      {"necessary_violations", scan_records_json(rep.necessary_violations)},
      {"sufficient_violations", scan_records_json(rep.sufficient_violations)},
      {"necessary_violation_count", rep.necessary_violations.size()},
      {"sufficient_violation_count", rep.sufficient_violations.size()},
  };
}

inline nlohmann::json kappa_sweep_json(const KappaSweep& sweep) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : sweep.points)
    pts.push_back({{"kappa", p.kappa},
                   {"pmax", p.p_max},
                   {"dpdk", p.dpdk},
                   {"branch", gw_branch_name(p.branch)},
                   {"at_crossing", p.at_crossing}});
  nlohmann::json crs = nlohmann::json::array();
  for (const auto& c : sweep.crossings)
    crs.push_back({{"kappa_left", c.kappa_left},
                   {"kappa_right", c.kappa_right},
                   {"slope_left", c.slope_left},
                   {"slope_right", c.slope_right},
                   {"gap", c.gap},
                   {"gap_over_noise",
                    sweep.slope_noise_floor > 0.0
                        ? c.gap / sweep.slope_noise_floor
                        : 0.0}});
  return nlohmann::json{{"points", pts},
                        {"crossings", crs},
                        {"slope_noise_floor", sweep.slope_noise_floor}};
}

inline std::string kappa_sweep_csv(const KappaSweep& sweep) {
  std::string out = "kappa,pmax,dpdk,branch,at_crossing\n";
  for (const auto& p : sweep.points) {
    out += format_double(p.kappa) + "," + format_double(p.p_max) + "," +
           format_double(p.dpdk) + "," + gw_branch_name(p.branch) +
           (p.at_crossing ? ",1" : ",0") + "\n";
  }
  return out;
}

}  // namespace grovlab
