// grovlab: Groverian entanglement measure, perfect-teleportation and
// superdense-coding protocols, and conjecture scans for 3-qubit resources.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <complex>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "grovlab/conjlab.hpp"
#include "grovlab/groverian.hpp"
#include "grovlab/io.hpp"
#include "grovlab/protocols.hpp"
#include "grovlab/qcore.hpp"

using nlohmann::json;
using namespace grovlab;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitNoConverge = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitIo = 5;

struct ParseFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::complex<double> parse_complex(std::string s) {
  std::erase(s, ' ');
  if (s.empty()) throw ParseFailure("empty complex literal");
  const bool imaginary = s.back() == 'j' || s.back() == 'i';
  if (!imaginary) {
    std::size_t used = 0;
    const double re = std::stod(s, &used);
    if (used != s.size()) throw ParseFailure("bad complex literal: " + s);
    return {re, 0.0};
  }
  s.pop_back();
  // find the split between the real and imaginary terms
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto parse_signed = [](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    std::size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw ParseFailure("bad complex literal part: " + t);
    return v;
  };
  if (split == std::string::npos) return {0.0, parse_signed(s)};
  return {parse_signed(s.substr(0, split)), parse_signed(s.substr(split))};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

json complex_json(const std::complex<double>& z) {
  return json::array({z.real(), z.imag()});
}

json vector_json(const Vector& v) {
  json arr = json::array();
  for (std::int64_t i = 0; i < v.size(); ++i) arr.push_back(complex_json(v(i)));
  return arr;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::int64_t r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (std::int64_t c = 0; c < m.cols(); ++c)
      row.push_back(complex_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

json tolerances_json() {
  const Tolerances& t = default_tolerances();
  return json{{"algebra", t.algebra},
              {"psd", t.psd},
              {"feasibility", t.feasibility},
              {"gram", t.gram},
              {"method_agreement", t.method_agreement},
              {"stationarity", t.stationarity},
              {"conjecture", t.conjecture},
              {"singular_band", t.singular_band}};
}

json envelope(const std::string& command, std::uint64_t seed, json input,
              json results, bool reproducible) {
  json env{{"command", command}, {"version", version()},
           {"seed", seed},       {"tolerances", tolerances_json()},
           {"input", std::move(input)}, {"results", std::move(results)}};
  if (!reproducible) {
    env["timestamp"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count();
  }
  return env;
}

int emit(const json& env, const std::string& out_path) {
  const std::string text = env.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return 0;
  }
  std::ofstream f(out_path);
  f << text;
  f.close();
  if (!f.good()) {
    std::cerr << "error: cannot write " << out_path << "\n";
    return kExitIo;
  }
  return 0;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GROVLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring unparsable GROVLAB_SEED\n";
    }
  }
  return 1;
}

// ---- state input (family spec or raw amplitudes) ----

struct StateArgs {
  std::string family;
  double a = 0.0, b = 0.0, c = 0.0;
  std::string q1, q2;  // "theta,phi" Bloch angles
  std::string amplitudes;

  void attach(CLI::App* cmd) {
    cmd->add_option("--family", family,
                    "state family: ghz|w|w1|gw|phi|four-term|ghz-like");
    cmd->add_option("--a", a, "family parameter a");
    cmd->add_option("--b", b, "family parameter b");
    cmd->add_option("--c", c, "family parameter c");
    cmd->add_option("--q1", q1, "Bloch angles theta,phi for q1 (phi family)");
    cmd->add_option("--q2", q2, "Bloch angles theta,phi for q2 (phi family)");
    cmd->add_option("--amplitudes", amplitudes,
                    "comma-separated complex amplitudes (re+imj), length 2^n");
  }

  static Qubit1 parse_bloch(const std::string& s, const char* name) {
    const auto parts = split(s, ',');
    if (parts.size() != 2)
      throw ParseFailure(std::string(name) + " needs theta,phi");
    return bloch_state(std::stod(parts[0]), std::stod(parts[1]));
  }

  PureState state(json* input_echo) const {
    if (!family.empty() && !amplitudes.empty())
      throw ParseFailure("give either --family or --amplitudes, not both");
    if (!family.empty()) {
      const auto fam = family_from_name(family);
      if (!fam) throw ParseFailure("unknown family: " + family);
      FamilySpec spec;
      spec.family = *fam;
      spec.a = a;
      spec.b = b;
      spec.c = c;
      json in{{"family", family}};
      if (*fam == Family::Gw) in.update(json{{"a", a}, {"b", b}, {"c", c}});
      if (*fam == Family::FourTerm || *fam == Family::GhzLike)
        in.update(json{{"a", a}, {"b", b}});
      if (*fam == Family::Phi) {
        spec.q1 = parse_bloch(q1.empty() ? "0,0" : q1, "--q1");
        spec.q2 = parse_bloch(q2.empty() ? "0,0" : q2, "--q2");
        in.update(json{{"q1", vector_json(Vector(spec.q1))},
                       {"q2", vector_json(Vector(spec.q2))}});
      }
      if (input_echo) *input_echo = in;
      return family_state(spec);
    }
    if (amplitudes.empty())
      throw ParseFailure("state required: --family or --amplitudes");
    const auto parts = split(amplitudes, ',');
    Vector v(static_cast<std::int64_t>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i)
      v(static_cast<std::int64_t>(i)) = parse_complex(parts[i]);
    int n = 0;
    while ((std::int64_t{1} << n) < v.size()) ++n;
    if ((std::int64_t{1} << n) != v.size())
      throw ParseFailure("amplitude count must be a power of two");
    double deviation = 0.0;
    PureState state = PureState::normalized(n, std::move(v), &deviation);
    if (deviation > 1e-6)
      std::cerr << "warning: input norm deviates by " << deviation
                << "; normalized\n";
    if (input_echo)
      *input_echo = json{{"amplitudes", vector_json(state.amplitudes())}};
    return state;
  }
};

json maximizer_json(const ProductState& prod) {
  json arr = json::array();
  for (const auto& f : prod.factors()) {
    const Eigen::Vector3d s = bloch_of(f);
    const double theta = std::acos(std::clamp(s(2), -1.0, 1.0));
    const double phi = std::atan2(s(1), s(0));
    arr.push_back({{"theta", theta}, {"phi", phi}});
  }
  return arr;
}

json groverian_json(const GroverianResult& r) {
  return json{{"p_max", r.p_max},
              {"g_measure", r.g_measure},
              {"method", method_name(r.method)},
              {"restarts_used", r.restarts_used},
              {"converged", r.converged},
              {"maximizer_bloch", maximizer_json(r.maximizer)}};
}

// ---- subcommand drivers ----

int run_pmax(const StateArgs& sargs, const std::string& method, int restarts,
             std::uint64_t seed, bool reproducible,
             const std::string& out_path) {
  json input;
  const PureState state = sargs.state(&input);
  input["method"] = method;
  input["restarts"] = restarts;

  IterateOptions opts;
  opts.restarts = restarts;
  opts.seed = seed;

  json methods = json::object();
  bool all_converged = true;
  std::optional<double> primary;

  auto record = [&](const GroverianResult& r) {
    methods[method_name(r.method)] = groverian_json(r);
    all_converged = all_converged && r.converged;
    if (!primary) primary = r.p_max;
  };

  if (method == "alternating" || method == "auto")
    record(pmax_alternating(state, opts));
  if ((method == "reduced" || method == "auto") && state.n_qubits() >= 2)
    record(pmax_reduced(state, opts));
  if ((method == "bloch" || method == "auto") && state.n_qubits() == 3) {
    auto [r, sp] = pmax_bloch(state, opts);
    record(r);
    methods["bloch"]["stationary_point"] =
        json{{"s2", {sp.s2(0), sp.s2(1), sp.s2(2)}},
             {"s3", {sp.s3(0), sp.s3(1), sp.s3(2)}},
             {"lambda1", sp.lambda1},
             {"lambda2", sp.lambda2},
             {"value", sp.value}};
  }
  if (methods.empty())
    throw ParseFailure("method '" + method + "' not applicable to this state");

  json results{{"p_max", *primary},
               {"g_measure", std::sqrt(std::max(0.0, 1.0 - *primary))},
               {"methods", methods}};
  if (method == "auto") {
    json deltas = json::object();
    for (auto& [na, ja] : methods.items())
      for (auto& [nb, jb] : methods.items())
        if (na < nb)
          deltas[na + "_vs_" + nb] = std::abs(
              ja["p_max"].get<double>() - jb["p_max"].get<double>());
    results["deltas"] = deltas;
  }

  const int rc =
      emit(envelope("pmax", seed, input, results, reproducible), out_path);
  if (rc != 0) return rc;
  return all_converged ? 0 : kExitNoConverge;
}

int run_teleport(const StateArgs& sargs, int bob, const std::string& input_str,
                 bool random_input, int trials, bool require_feasible,
                 std::uint64_t seed, bool reproducible,
                 const std::string& out_path) {
  json input;
  const PureState resource = sargs.state(&input);
  input["bob"] = bob;
  input["trials"] = trials;
  const Assignment assign(bob);

  const bool feasible = teleport_feasible(resource, assign);
  json results{{"feasible", feasible}};

  if (feasible) {
    const TeleportProtocol proto = build_protocol(resource, assign);
    json basis = json::array();
    for (const auto& b : proto.basis) basis.push_back(vector_json(b.amplitudes()));
    json corrections = json::array();
    for (const auto& c : proto.corrections)
      corrections.push_back(matrix_json(Matrix(c)));
    results["basis"] = basis;
    results["corrections"] = corrections;
    results["probabilities"] = proto.probabilities;
    results["outcome_labels"] = {"I", "Z", "X", "ZX"};

    Qubit1 in_state(1.0, 0.0);
    bool have_fixed_input = false;
    if (!input_str.empty()) {
      const auto parts = split(input_str, ',');
      if (parts.size() != 2)
        throw ParseFailure("--input needs two comma-separated amplitudes");
      Eigen::Vector2cd v(parse_complex(parts[0]), parse_complex(parts[1]));
      if (v.norm() <= 0.0) throw ParseFailure("--input must be nonzero");
      in_state = v.normalized();
      have_fixed_input = true;
      input["input"] = vector_json(Vector(in_state));
    }

    Rng rng(seed);
    json trials_json = json::array();
    std::array<int, 4> histogram{};
    double min_fid = 1.0, sum_fid = 0.0;
    for (int t = 0; t < trials; ++t) {
      const Qubit1 in = (random_input || !have_fixed_input)
                            ? rng.bloch_uniform()
                            : in_state;
      const auto out =
          simulate_teleport(proto, resource, assign, in, rng.raw());
      histogram[static_cast<std::size_t>(out.outcome)]++;
      min_fid = std::min(min_fid, out.fidelity);
      sum_fid += out.fidelity;
      trials_json.push_back(
          {{"outcome", out.outcome}, {"fidelity", out.fidelity}});
    }
    results["trials"] = trials_json;
    results["outcome_histogram"] = histogram;
    results["fidelity_min"] = min_fid;
    results["fidelity_mean"] = trials > 0 ? sum_fid / trials : 1.0;
  }

  const int rc =
      emit(envelope("teleport", seed, input, results, reproducible), out_path);
  if (rc != 0) return rc;
  if (!feasible && require_feasible) return kExitInfeasible;
  return 0;
}

int run_dense(const StateArgs& sargs, int alice, bool require_feasible,
              std::uint64_t seed, bool reproducible,
              const std::string& out_path) {
  json input;
  const PureState resource = sargs.state(&input);
  input["alice"] = alice;

  const SuperdenseReport rep = superdense_check(resource, alice);
  double max_off = 0.0;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      if (p != q) max_off = std::max(max_off, std::abs(rep.gram(p, q)));

  json encoded = json::array();
  for (const auto& e : rep.encoded) encoded.push_back(vector_json(e.amplitudes()));
  json results{{"feasible", rep.feasible},
               {"gram", matrix_json(Matrix(rep.gram))},
               {"max_offdiagonal", max_off},
               {"encoded", encoded},
               {"operations", {"I", "Z", "X", "-iY"}}};

  const int rc =
      emit(envelope("dense", seed, input, results, reproducible), out_path);
  if (rc != 0) return rc;
  if (!rep.feasible && require_feasible) return kExitInfeasible;
  return 0;
}

int run_scan(const std::string& family, int grid, const std::string& format,
             std::uint64_t seed, bool reproducible,
             const std::string& out_path) {
  const auto fam = family_from_name(family);
  if (!fam) throw ParseFailure("unknown family: " + family);

  ScanOptions opts;
  opts.grid = grid;
  opts.seed = seed;
  const auto records = scan_family(*fam, opts);
  const auto report = conjecture_report(records);

  const json input{{"family", family}, {"grid", grid}, {"format", format}};
  json summary = conjecture_report_json(report);

  if (format == "csv") {
    const std::string csv = scan_records_csv(records);
    if (out_path.empty()) {
      std::cout << csv;
      return 0;
    }
    std::ofstream f(out_path);
    f << csv;
    f.close();
    if (!f.good()) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitIo;
    }
    json results{{"summary", std::move(summary)}, {"records_file", out_path}};
    return emit(envelope("scan", seed, input, results, reproducible), "");
  }
  if (format != "json") throw ParseFailure("format must be json or csv");
  json results{{"summary", std::move(summary)},
               {"records", scan_records_json(records)}};
  return emit(envelope("scan", seed, input, results, reproducible), out_path);
}

int run_sweep(const std::string& kappa_spec, const std::string& format,
              std::uint64_t seed, bool reproducible,
              const std::string& out_path) {
  const auto parts = split(kappa_spec, ':');
  if (parts.size() != 3)
    throw ParseFailure("--kappa needs min:max:steps, e.g. 0.5:1.3:161");
  const double kmin = std::stod(parts[0]);
  const double kmax = std::stod(parts[1]);
  const int steps = std::stoi(parts[2]);
  const KappaSweep sweep = kappa_sweep(kmin, kmax, steps);

  const json input{
      {"kappa_min", kmin}, {"kappa_max", kmax}, {"steps", steps}};
  if (format == "csv") {
    const std::string csv = kappa_sweep_csv(sweep);
    if (out_path.empty()) {
      std::cout << csv;
      return 0;
    }
    std::ofstream f(out_path);
    f << csv;
    f.close();
    if (!f.good()) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return kExitIo;
    }
    json sweep_json = kappa_sweep_json(sweep);
    sweep_json.erase("points");
    json results{{"summary", std::move(sweep_json)}, {"points_file", out_path}};
    return emit(envelope("sweep", seed, input, results, reproducible), "");
  }
  if (format != "json") throw ParseFailure("format must be json or csv");
  return emit(envelope("sweep", seed, input, {{"sweep", kappa_sweep_json(sweep)}},
                       reproducible),
              out_path);
}

int run_report(int grid, int random_count, std::uint64_t seed,
               bool reproducible, const std::string& out_path) {
  const json input{{"grid", grid}, {"random", random_count}};

  json families = json::object();
  std::vector<ScanRecord> all;
  for (Family f : {Family::Ghz, Family::W, Family::W1, Family::Gw, Family::Phi,
                   Family::FourTerm, Family::GhzLike}) {
    ScanOptions opts;
    opts.grid = grid;
    opts.seed = detail::mix_seed(seed, static_cast<std::uint64_t>(f));
    auto records = scan_family(f, opts);
    families[family_name(f)] = conjecture_report_json(
        conjecture_report(records));
    all.insert(all.end(), records.begin(), records.end());
  }
  json combined = conjecture_report_json(conjecture_report(all));

  json random_part = json(nullptr);
  if (random_count > 0) {
    ScanOptions opts;
    opts.seed = detail::mix_seed(seed, 0xfeedull);
    auto records = random_scan(random_count, opts);
    random_part = conjecture_report_json(conjecture_report(records));
  }

  // evidence summary, never a verdict: the sufficiency direction of the
  // criterion is an open question this tool only gathers data for
  json results{{"families", families},
               {"families_combined", combined},
               {"random_search", random_part},
               {"interpretation",
                "empty necessary_violations lists are evidence that perfect "
                "teleportation requires P_max = 1/2; sufficiency findings "
                "are descriptive only"}};
  return emit(envelope("report", seed, input, results, reproducible),
              out_path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Groverian entanglement measure and perfect-protocol toolkit"};
  app.require_subcommand(1);

  std::uint64_t seed = default_seed();
  bool reproducible = false;
  std::string out_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "random seed (default: GROVLAB_SEED or 1)");
    cmd->add_flag("--reproducible", reproducible,
                  "omit the timestamp so identical runs emit identical bytes");
    cmd->add_option("--out", out_path, "write the report to this file");
  };

  // pmax
  auto* pmax_cmd = app.add_subcommand("pmax", "compute P_max and G(psi)");
  StateArgs pmax_state;
  pmax_state.attach(pmax_cmd);
  std::string method = "auto";
  int restarts = 32;
  pmax_cmd->add_option("--method", method,
                       "alternating|reduced|bloch|auto (default auto)");
  pmax_cmd->add_option("--restarts", restarts, "multistart count (default 32)");
  add_common(pmax_cmd);

  // teleport
  auto* tele_cmd =
      app.add_subcommand("teleport", "build and simulate perfect teleportation");
  StateArgs tele_state;
  tele_state.attach(tele_cmd);
  int bob = 2;
  std::string tele_input;
  bool tele_random = false;
  int trials = 1;
  bool require_feasible = false;
  tele_cmd->add_option("--bob", bob, "Bob's resource qubit (0..2)")->required();
  tele_cmd->add_option("--input", tele_input,
                       "input qubit amplitudes alpha,beta (re+imj)");
  tele_cmd->add_flag("--random", tele_random, "draw a random input per trial");
  tele_cmd->add_option("--trials", trials, "number of simulated trials");
  tele_cmd->add_flag("--require-feasible", require_feasible,
                     "exit with status 4 when infeasible");
  add_common(tele_cmd);

  // dense
  auto* dense_cmd =
      app.add_subcommand("dense", "superdense-coding feasibility check");
  StateArgs dense_state;
  dense_state.attach(dense_cmd);
  int alice = 0;
  bool dense_require = false;
  dense_cmd->add_option("--alice", alice, "Alice's resource qubit (0..2)")
      ->required();
  dense_cmd->add_flag("--require-feasible", dense_require,
                      "exit with status 4 when infeasible");
  add_common(dense_cmd);

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "sweep a state family");
  std::string scan_family_name;
  int grid = 21;
  std::string format = "json";
  scan_cmd->add_option("--family", scan_family_name, "family to scan")
      ->required();
  scan_cmd->add_option("--grid", grid, "grid points per parameter");
  scan_cmd->add_option("--format", format, "json|csv");
  add_common(scan_cmd);

  // sweep
  auto* sweep_cmd =
      app.add_subcommand("sweep", "kappa sweep of the generalized W family");
  std::string kappa_spec = "0.5:1.3:161";
  std::string sweep_format = "json";
  sweep_cmd->add_option("--kappa", kappa_spec, "min:max:steps");
  sweep_cmd->add_option("--format", sweep_format, "json|csv");
  add_common(sweep_cmd);

  // report
  auto* report_cmd = app.add_subcommand(
      "report", "joint conjecture-evidence report over all families");
  int report_grid = 21;
  int report_random = 10000;
  report_cmd->add_option("--grid", report_grid, "grid points per parameter");
  report_cmd->add_option("--random", report_random,
                         "random 3-qubit states to search");
  add_common(report_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParse;
  }

  try {
    if (pmax_cmd->parsed())
      return run_pmax(pmax_state, method, restarts, seed, reproducible,
                      out_path);
    if (tele_cmd->parsed())
      return run_teleport(tele_state, bob, tele_input, tele_random, trials,
                          require_feasible, seed, reproducible, out_path);
    if (dense_cmd->parsed())
      return run_dense(dense_state, alice, dense_require, seed, reproducible,
                       out_path);
    if (scan_cmd->parsed())
      return run_scan(scan_family_name, grid, format, seed, reproducible,
                      out_path);
    if (sweep_cmd->parsed())
      return run_sweep(kappa_spec, sweep_format, seed, reproducible, out_path);
    if (report_cmd->parsed())
      return run_report(report_grid, report_random, seed, reproducible,
                        out_path);
  } catch (const ParseFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
