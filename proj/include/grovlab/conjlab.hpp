#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grovlab/config.hpp"
#include "grovlab/groverian.hpp"
#include "grovlab/protocols.hpp"
#include "grovlab/qcore.hpp"
#include "grovlab/random.hpp"

namespace grovlab {

enum class Family { Ghz, W, W1, Gw, Phi, FourTerm, GhzLike };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Ghz: return "ghz";
    case Family::W: return "w";
    case Family::W1: return "w1";
    case Family::Gw: return "gw";
    case Family::Phi: return "phi";
    case Family::FourTerm: return "four-term";
    case Family::GhzLike: return "ghz-like";
  }
  return "?";
}

inline std::optional<Family> family_from_name(std::string_view name) {
  for (Family f : {Family::Ghz, Family::W, Family::W1, Family::Gw, Family::Phi,
                   Family::FourTerm, Family::GhzLike})
    if (name == family_name(f)) return f;
  return std::nullopt;
}

// One point of a state family: which family plus its parameters (only the
// relevant ones are read).
struct FamilySpec {
  Family family = Family::Ghz;
  double a = 0.0, b = 0.0, c = 0.0;
  Qubit1 q1 = Qubit1(1.0, 0.0);
  Qubit1 q2 = Qubit1(1.0, 0.0);

  static FamilySpec ghz() { return {Family::Ghz}; }
  static FamilySpec w() { return {Family::W}; }
  static FamilySpec w1() { return {Family::W1}; }
  static FamilySpec gw(double a, double b, double c) {
    FamilySpec s{Family::Gw};
    s.a = a; s.b = b; s.c = c;
    return s;
  }
  static FamilySpec phi(const Qubit1& q1, const Qubit1& q2) {
    FamilySpec s{Family::Phi};
    s.q1 = q1; s.q2 = q2;
    return s;
  }
  static FamilySpec four_term(double a, double b) {
    FamilySpec s{Family::FourTerm};
    s.a = a; s.b = b;
    return s;
  }
  static FamilySpec ghz_like(double a, double b) {
    FamilySpec s{Family::GhzLike};
    s.a = a; s.b = b;
    return s;
  }
};

inline constexpr double kInvSqrt2 = 0.70710678118654752440;

// The literal 3-qubit state of the given family point.
inline PureState family_state(const FamilySpec& spec) {
  Vector v = Vector::Zero(8);
  const double eps = 1e-12;
  switch (spec.family) {
    case Family::Ghz:
      v(0) = v(7) = kInvSqrt2;
      break;
    case Family::W:
      v(1) = v(2) = v(4) = 1.0 / std::sqrt(3.0);
      break;
    case Family::W1:
      v(1) = kInvSqrt2;
      v(2) = 0.5;
      v(4) = 0.5;
      break;
    case Family::Gw: {
      if (spec.a < 0.0 || spec.b < 0.0 || spec.c < 0.0 ||
          std::abs(spec.a * spec.a + spec.b * spec.b + spec.c * spec.c - 1.0) >
              eps)
        throw std::domain_error("family_state: gw parameters out of domain");
      v(1) = spec.a;
      v(2) = spec.b;
      v(4) = spec.c;
      break;
    }
    case Family::Phi: {
      if (std::abs(spec.q1.squaredNorm() - 1.0) > eps ||
          std::abs(spec.q2.squaredNorm() - 1.0) > eps)
        throw std::domain_error("family_state: phi factors must be unit norm");
      v(0) = spec.q1(0) * kInvSqrt2;
      v(1) = spec.q1(1) * kInvSqrt2;
      v(6) = spec.q2(0) * kInvSqrt2;
      v(7) = spec.q2(1) * kInvSqrt2;
      break;
    }
    case Family::FourTerm: {
      if (spec.a < -eps || spec.a > kInvSqrt2 + eps || spec.b < -eps ||
          spec.b > kInvSqrt2 + eps)
        throw std::domain_error(
            "family_state: four-term parameters must lie in [0, 1/sqrt2]");
      const double a = std::clamp(spec.a, 0.0, kInvSqrt2);
      const double b = std::clamp(spec.b, 0.0, kInvSqrt2);
      v(4) = std::sqrt(std::max(0.0, 0.5 - b * b));
      v(2) = b;
      v(1) = a;
      v(7) = std::sqrt(std::max(0.0, 0.5 - a * a));
      break;
    }
    case Family::GhzLike: {
      const double s = spec.a * spec.a + spec.b * spec.b;
      if (s > 0.5 + eps)
        throw std::domain_error(
            "family_state: ghz-like parameters must satisfy a^2 + b^2 <= 1/2");
      v(0) = spec.a;
      v(2) = spec.b;
      v(4) = std::sqrt(std::max(0.0, 0.5 - s));
      v(7) = kInvSqrt2;
      break;
    }
  }
  return PureState::normalized(3, std::move(v));
}

// Per-point bundle of everything the conjecture experiment needs.
struct ScanRecord {
  std::string family;
  std::vector<std::pair<std::string, double>> params;
  double pmax_numeric = 0.0;
  std::optional<double> pmax_analytic;
  std::optional<GwBranch> branch;
  std::array<bool, 3> teleport_bob{};
  std::array<bool, 3> dense_alice{};
  bool necessary_ok = true;   // feasible somewhere => pmax == 1/2
  bool sufficient_ok = true;  // pmax == 1/2 => feasible somewhere
};

struct ScanOptions {
  int grid = 21;               // points per parameter, inclusive endpoints
  double tol = 1e-6;           // |pmax - 1/2| window counting as "equals 1/2"
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
  IterateOptions iterate{};    // numeric P_max knobs
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

inline ScanRecord make_record(std::string family_tag,
                              std::vector<std::pair<std::string, double>> params,
                              const PureState& state,
                              std::optional<double> analytic,
                              std::optional<GwBranch> branch,
                              const ScanOptions& opts, std::uint64_t index) {
  ScanRecord rec;
  rec.family = std::move(family_tag);
  rec.params = std::move(params);
  IterateOptions it = opts.iterate;
  it.seed = mix_seed(opts.seed, index);
  rec.pmax_numeric = pmax_alternating(state, it).p_max;
  rec.pmax_analytic = analytic;
  rec.branch = branch;
  for (int q = 0; q < 3; ++q) {
    rec.teleport_bob[static_cast<std::size_t>(q)] =
        teleport_feasible(state, Assignment(q));
    rec.dense_alice[static_cast<std::size_t>(q)] =
        superdense_check(state, q).feasible;
  }
  const bool any_feasible = rec.teleport_bob[0] || rec.teleport_bob[1] ||
                            rec.teleport_bob[2];
  const bool near_half = std::abs(rec.pmax_numeric - 0.5) < opts.tol;
  rec.necessary_ok = !any_feasible || near_half;
  rec.sufficient_ok = !near_half || any_feasible;
  return rec;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    v[static_cast<std::size_t>(i)] =
        n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace detail

// Sweeps one family over its natural parameter grid. Grids are inclusive of
// endpoints; parameterizations keep every grid point inside the family
// domain (polar coordinates for the ghz-like disk, octant angles for gw).
inline std::vector<ScanRecord> scan_family(Family family,
                                           const ScanOptions& opts = {}) {
  const int n = opts.grid;
  if (n < 1) throw std::invalid_argument("scan_family: empty grid");
  const long long points =
      (family == Family::Ghz || family == Family::W || family == Family::W1)
          ? 1
          : static_cast<long long>(n) * n;
  if (points > 100000)
    throw std::invalid_argument("scan_family: grid larger than 10^5 points");

  std::vector<ScanRecord> records;
  std::uint64_t index = 0;
  const double pi = std::numbers::pi;

  switch (family) {
    case Family::Ghz:
    case Family::W:
    case Family::W1: {
      const FamilySpec spec = family == Family::Ghz ? FamilySpec::ghz()
                              : family == Family::W ? FamilySpec::w()
                                                    : FamilySpec::w1();
      std::optional<double> analytic;
      std::optional<GwBranch> branch;
      if (family == Family::Ghz) {
        analytic = 0.5;
      } else if (family == Family::W) {
        const double s = 1.0 / std::sqrt(3.0);
        const auto gw = pmax_generalized_w(s, s, s);
        analytic = gw.p_max;
        branch = gw.branch;
      } else {
        const auto gw = pmax_generalized_w(kInvSqrt2, 0.5, 0.5);
        analytic = gw.p_max;
        branch = gw.branch;
      }
      records.push_back(detail::make_record(family_name(family), {},
                                            family_state(spec), analytic,
                                            branch, opts, index++));
      break;
    }
    case Family::Gw: {
      for (double theta : detail::linspace(0.0, 0.5 * pi, n)) {
        for (double phi : detail::linspace(0.0, 0.5 * pi, n)) {
          const double a = std::sin(theta) * std::cos(phi);
          const double b = std::sin(theta) * std::sin(phi);
          const double c = std::cos(theta);
          const auto gw = pmax_generalized_w(a, b, c);
          records.push_back(detail::make_record(
              "gw", {{"a", a}, {"b", b}, {"c", c}},
              family_state(FamilySpec::gw(a, b, c)), gw.p_max, gw.branch, opts,
              index++));
        }
      }
      break;
    }
    case Family::Phi: {
      // q1 fixed at |0>, q2 swept over the Bloch sphere; the case split of
      // the protocol analysis hinges only on <q1|q2>
      for (double theta : detail::linspace(0.0, pi, n)) {
        for (double phi : detail::linspace(0.0, 2.0 * pi, n)) {
          const Qubit1 q1(1.0, 0.0);
          const Qubit1 q2 = bloch_state(theta, phi);
          const double overlap = std::abs(q1.dot(q2));
          records.push_back(detail::make_record(
              "phi",
              {{"theta1", 0.0}, {"phi1", 0.0}, {"theta2", theta},
               {"phi2", phi}, {"overlap_abs", overlap}},
              family_state(FamilySpec::phi(q1, q2)), 0.5, std::nullopt, opts,
              index++));
        }
      }
      break;
    }
    case Family::FourTerm: {
      for (double a : detail::linspace(0.0, kInvSqrt2, n)) {
        for (double b : detail::linspace(0.0, kInvSqrt2, n)) {
          // the quadrangle formula degenerates at the four grid corners
          // (two coefficients vanish); the state there is a single qubit
          // against a Bell pair, so the family value 1/2 applies directly
          const double a1 = std::sqrt(std::max(0.0, 0.5 - b * b)), a2 = b,
                       a3 = a, a4 = std::sqrt(std::max(0.0, 0.5 - a * a));
          const double omega = a1 * a2 + a3 * a4;
          const double r3q = a1 * a1 + a2 * a2 - a3 * a3 - a4 * a4;
          const double analytic =
              std::abs(4.0 * omega * omega - r3q * r3q) < 1e-14
                  ? 0.5
                  : pmax_quadrangle(a1, a2, a3, a4);
          records.push_back(detail::make_record(
              "four-term", {{"a", a}, {"b", b}},
              family_state(FamilySpec::four_term(a, b)), analytic,
              std::nullopt, opts, index++));
        }
      }
      break;
    }
    case Family::GhzLike: {
      for (double r : detail::linspace(0.0, kInvSqrt2, n)) {
        for (double t : detail::linspace(0.0, 0.5 * pi, n)) {
          const double a = r * std::cos(t);
          const double b = r * std::sin(t);
          records.push_back(detail::make_record(
              "ghz-like", {{"a", a}, {"b", b}},
              family_state(FamilySpec::ghz_like(a, b)), 0.5, std::nullopt,
              opts, index++));
        }
      }
      break;
    }
  }
  return records;
}

// Haar-uniform pure state via normalized complex Gaussian amplitudes.
inline PureState haar_random_state(int n, Rng& rng) {
  Vector v(std::int64_t{1} << n);
  for (std::int64_t i = 0; i < v.size(); ++i) v(i) = rng.normal_complex();
  return PureState::normalized(n, std::move(v));
}

// Counterexample search over Haar-random 3-qubit states.
inline std::vector<ScanRecord> random_scan(int count,
                                           const ScanOptions& opts = {}) {
  if (count < 1) throw std::invalid_argument("random_scan: empty sample");
  Rng rng(opts.seed);
  std::vector<ScanRecord> records;
  records.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    const PureState state = haar_random_state(3, rng);
    records.push_back(detail::make_record(
        "random", {{"index", static_cast<double>(i)}}, state, std::nullopt,
        std::nullopt, opts, static_cast<std::uint64_t>(i)));
  }
  return records;
}

// ---- singular-state classification and the kappa sweep ----

enum class SingularClass { Inside, OnCircle, Outside };

inline const char* singular_class_name(SingularClass c) {
  switch (c) {
    case SingularClass::Inside: return "inside";
    case SingularClass::OnCircle: return "on-circle";
    case SingularClass::Outside: return "outside";
  }
  return "?";
}

struct SingularClassification {
  SingularClass cls;
  double p_max;
  GwBranch branch;
};

// Position of a generalized-W triple relative to the right-triangle circle
// alpha^2 = beta^2 + gamma^2 on the coefficient sphere.
inline SingularClassification classify_singular(double a, double b, double c) {
  const auto gw = pmax_generalized_w(a, b, c);
  const double aa = a * a, bb = b * b, cc = c * c;
  const double alpha2 = std::max({aa, bb, cc});
  const double rest = aa + bb + cc - alpha2;
  const double band = default_tolerances().singular_band;
  SingularClass cls;
  if (std::abs(alpha2 - rest) <= band)
    cls = SingularClass::OnCircle;
  else if (alpha2 < rest)
    cls = SingularClass::Inside;
  else
    cls = SingularClass::Outside;
  return {cls, gw.p_max, gw.branch};
}

struct KappaPoint {
  double kappa;
  double p_max;
  double dpdk;  // centered finite difference (one-sided at the ends)
  GwBranch branch;
  bool at_crossing;  // adjacent to a branch change
};

struct KappaCrossing {
  std::size_t interval_left;  // crossing lies between points i and i+1
  double kappa_left, kappa_right;
  double slope_left, slope_right;
  double gap;  // |slope_right - slope_left|
};

struct KappaSweep {
  std::vector<KappaPoint> points;
  std::vector<KappaCrossing> crossings;
  // largest forward/backward slope mismatch away from crossings; the
  // discretization noise the crossing gap competes against
  double slope_noise_floor = 0.0;
};

// One-parameter cut b = kappa a, c = kappa^2 a through the generalized-W
// sphere. P_max is continuous across the right-triangle crossings but its
// derivative jumps there.
inline KappaSweep kappa_sweep(double kappa_min, double kappa_max, int steps) {
  if (!(kappa_min > 0.0) || !(kappa_max > kappa_min))
    throw std::invalid_argument("kappa_sweep: need 0 < kappa_min < kappa_max");
  if (steps < 3) throw std::invalid_argument("kappa_sweep: steps must be >= 3");

  KappaSweep sweep;
  const auto kappas = detail::linspace(kappa_min, kappa_max, steps);

  for (double k : kappas) {
    const double a = 1.0 / std::sqrt(1.0 + k * k + k * k * k * k);
    const auto gw = pmax_generalized_w(a, k * a, k * k * a);
    sweep.points.push_back({k, gw.p_max, 0.0, gw.branch, false});
  }
  const std::size_t m = sweep.points.size();
  const double h = (kappa_max - kappa_min) / (steps - 1);
  auto p = [&](std::size_t i) { return sweep.points[i].p_max; };
  auto slope = [&](std::size_t i, std::size_t j) {
    return (p(j) - p(i)) / (sweep.points[j].kappa - sweep.points[i].kappa);
  };
  // second-order one-sided stencils; the O(h) curvature bias of plain
  // two-point slopes would swamp the jump we are after
  auto fwd2 = [&](std::size_t j) {
    return (-3.0 * p(j) + 4.0 * p(j + 1) - p(j + 2)) / (2.0 * h);
  };
  auto bwd2 = [&](std::size_t j) {
    return (3.0 * p(j) - 4.0 * p(j - 1) + p(j - 2)) / (2.0 * h);
  };

  for (std::size_t i = 0; i < m; ++i) {
    if (i == 0)
      sweep.points[i].dpdk = slope(0, 1);
    else if (i + 1 == m)
      sweep.points[i].dpdk = slope(m - 2, m - 1);
    else
      sweep.points[i].dpdk = slope(i - 1, i + 1);
  }

  for (std::size_t i = 0; i + 1 < m; ++i) {
    if (sweep.points[i].branch == sweep.points[i + 1].branch) continue;
    KappaCrossing cr;
    cr.interval_left = i;
    cr.kappa_left = sweep.points[i].kappa;
    cr.kappa_right = sweep.points[i + 1].kappa;
    cr.slope_left = i >= 2 ? bwd2(i) : slope(i, i + 1);
    cr.slope_right = i + 3 < m ? fwd2(i + 1) : slope(i, i + 1);
    cr.gap = std::abs(cr.slope_right - cr.slope_left);
    sweep.points[i].at_crossing = true;
    sweep.points[i + 1].at_crossing = true;
    sweep.crossings.push_back(cr);
  }

  // noise floor: the same estimator pair disagreeing where P_max is smooth,
  // i.e. at points whose stencils do not straddle any branch change
  for (std::size_t j = 2; j + 2 < m; ++j) {
    bool near_crossing = false;
    for (const auto& cr : sweep.crossings)
      if (cr.interval_left + 2 >= j && cr.interval_left <= j + 2)
        near_crossing = true;
    if (near_crossing) continue;
    sweep.slope_noise_floor =
        std::max(sweep.slope_noise_floor, std::abs(fwd2(j) - bwd2(j)));
  }
  return sweep;
}

// ---- conjecture bookkeeping ----

struct ConjectureReport {
  std::size_t total = 0;
  std::size_t feasible_count = 0;   // some teleport assignment works
  std::size_t pmax_half_count = 0;  // |pmax - 1/2| inside the scan window
  std::vector<ScanRecord> necessary_violations;
  std::vector<ScanRecord> sufficient_violations;
};

// Tallies both directions of the "perfect teleportation <=> P_max = 1/2"
// criterion over a record set. Empty violation lists are evidence for the
// conjecture, never a proof; the sufficiency direction in particular is
// only ever reported.
inline ConjectureReport conjecture_report(
    const std::vector<ScanRecord>& records) {
  if (records.empty())
    throw std::invalid_argument("conjecture_report: no records");
  ConjectureReport rep;
  rep.total = records.size();
  for (const auto& r : records) {
    const bool feasible =
        r.teleport_bob[0] || r.teleport_bob[1] || r.teleport_bob[2];
    if (feasible) ++rep.feasible_count;
    if (!r.necessary_ok) rep.necessary_violations.push_back(r);
    if (!r.sufficient_ok) rep.sufficient_violations.push_back(r);
    // closeness to 1/2 is recoverable from the recorded flags
    const bool near_half = feasible ? r.necessary_ok : !r.sufficient_ok;
    if (near_half) ++rep.pmax_half_count;
  }
  return rep;
}

}  // namespace grovlab
