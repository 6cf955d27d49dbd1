#include <catch2/catch.hpp>

#include "grovlab/conjlab.hpp"
#include "test_helpers.hpp"

using namespace grovlab;
using namespace grovlab_test;

TEST_CASE("family states match their defining amplitudes") {
  const auto ghz = family_state(FamilySpec::ghz());
  CHECK((ghz.amplitudes() - ghz3().amplitudes()).norm() < 1e-15);

  const auto w1 = family_state(FamilySpec::w1());
  CHECK((w1.amplitudes() - w1_state().amplitudes()).norm() < 1e-15);

  const auto ft = family_state(FamilySpec::four_term(kInvSqrt2, 0.5));
  CHECK((ft.amplitudes() - w1.amplitudes()).cwiseAbs().maxCoeff() < 1e-15);

  const auto gl = family_state(FamilySpec::ghz_like(kInvSqrt2, 0.0));
  CHECK((gl.amplitudes() - ghz.amplitudes()).cwiseAbs().maxCoeff() < 1e-15);

  Rng rng(12);
  const Qubit1 q1 = rng.bloch_uniform(), q2 = rng.bloch_uniform();
  const auto phi = family_state(FamilySpec::phi(q1, q2));
  CHECK((phi.amplitudes() - phi_state(q1, q2).amplitudes()).norm() < 1e-14);

  CHECK_THROWS_AS(family_state(FamilySpec::gw(0.5, 0.5, 0.5)),
                  std::domain_error);
  CHECK_THROWS_AS(family_state(FamilySpec::four_term(0.9, 0.0)),
                  std::domain_error);
  CHECK_THROWS_AS(family_state(FamilySpec::ghz_like(0.7, 0.7)),
                  std::domain_error);
  CHECK_THROWS_AS(family_state(FamilySpec::phi(Qubit1(1.0, 1.0), q2)),
                  std::domain_error);
}

TEST_CASE("four-term and ghz-like scans sit on P_max = 1/2 with feasible teleport") {
  ScanOptions opts;
  opts.grid = 7;
  opts.seed = 2024;
  for (Family fam : {Family::FourTerm, Family::GhzLike}) {
    const auto records = scan_family(fam, opts);
    REQUIRE(records.size() == 49);
    for (const auto& r : records) {
      REQUIRE(std::abs(r.pmax_numeric - 0.5) < 1e-7);
      const bool any_feasible =
          r.teleport_bob[0] || r.teleport_bob[1] || r.teleport_bob[2];
      REQUIRE(any_feasible);
      REQUIRE(r.necessary_ok);
      REQUIRE(r.sufficient_ok);
      if (r.pmax_analytic)
        REQUIRE(std::abs(*r.pmax_analytic - r.pmax_numeric) < 1e-7);
    }
  }
}

TEST_CASE("gw scan: away from 1/2 nothing is feasible (necessary direction)") {
  ScanOptions opts;
  opts.grid = 6;
  opts.seed = 7;
  const auto records = scan_family(Family::Gw, opts);
  REQUIRE(records.size() == 36);
  for (const auto& r : records) {
    REQUIRE(r.pmax_analytic.has_value());
    REQUIRE(std::abs(*r.pmax_analytic - r.pmax_numeric) < 1e-7);
    REQUIRE(r.necessary_ok);
    const bool any_feasible =
        r.teleport_bob[0] || r.teleport_bob[1] || r.teleport_bob[2];
    if (std::abs(r.pmax_numeric - 0.5) > 1e-6) CHECK_FALSE(any_feasible);
  }
  CHECK_THROWS_AS(scan_family(Family::Gw, ScanOptions{.grid = 0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(scan_family(Family::Gw, ScanOptions{.grid = 400}),
                  std::invalid_argument);
}

TEST_CASE("phi scan records the overlap and obeys the case split") {
  ScanOptions opts;
  opts.grid = 5;
  opts.seed = 77;
  const auto records = scan_family(Family::Phi, opts);
  REQUIRE(records.size() == 25);
  for (const auto& r : records) {
    REQUIRE(std::abs(r.pmax_numeric - 0.5) < 1e-7);
    // bob on the first two resource qubits always works
    CHECK(r.teleport_bob[0]);
    CHECK(r.teleport_bob[1]);
    double overlap = -1.0;
    for (const auto& [name, value] : r.params)
      if (name == "overlap_abs") overlap = value;
    REQUIRE(overlap >= 0.0);
    CHECK(r.teleport_bob[2] == (overlap < 1e-7));
  }
}

TEST_CASE("singular classification splits the coefficient sphere") {
  const double s = 1.0 / std::sqrt(3.0);
  const auto inside = classify_singular(s, s, s);
  CHECK(inside.cls == SingularClass::Inside);
  CHECK(inside.p_max == Approx(4.0 / 9.0).margin(1e-12));
  CHECK(inside.branch == GwBranch::Circumradius);

  const auto on = classify_singular(1.0 / std::sqrt(2.0), 0.5, 0.5);
  CHECK(on.cls == SingularClass::OnCircle);
  CHECK(on.p_max == Approx(0.5).margin(1e-12));

  const double big = 0.9;
  const double small = std::sqrt((1.0 - big * big) / 2.0);
  const auto outside = classify_singular(big, small, small);
  CHECK(outside.cls == SingularClass::Outside);
  CHECK(outside.p_max == Approx(big * big).margin(1e-12));
  CHECK(outside.branch == GwBranch::Vertex);
}

TEST_CASE("classification and closed-form branch flip together on a kappa path") {
  const auto sweep = kappa_sweep(0.5, 1.3, 81);
  for (const auto& pt : sweep.points) {
    const double a = 1.0 / std::sqrt(1.0 + pt.kappa * pt.kappa +
                                     std::pow(pt.kappa, 4));
    const auto cls = classify_singular(a, pt.kappa * a,
                                       pt.kappa * pt.kappa * a);
    if (cls.cls == SingularClass::Inside)
      CHECK(pt.branch == GwBranch::Circumradius);
    if (cls.cls == SingularClass::Outside)
      CHECK(pt.branch == GwBranch::Vertex);
  }
}

TEST_CASE("kappa sweep finds the singular crossing") {
  // independent root-find for the crossing kappa^2 + kappa^4 = 1
  double lo = 0.5, hi = 1.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid * mid + std::pow(mid, 4) < 1.0 ? lo : hi) = mid;
  }
  const double kstar = 0.5 * (lo + hi);
  CHECK(kstar == Approx(std::sqrt((std::sqrt(5.0) - 1.0) / 2.0))
                     .margin(1e-12));

  const auto sweep = kappa_sweep(0.5, 1.3, 161);
  REQUIRE(sweep.points.size() == 161);

  // continuity at the crossing: both closed-form branches give 1/2 there
  const double a = 1.0 / std::sqrt(1.0 + kstar * kstar + std::pow(kstar, 4));
  CHECK(a * a == Approx(0.5).margin(1e-8));  // vertex branch value
  const auto gw = pmax_generalized_w(a, kstar * a, kstar * kstar * a);
  CHECK(gw.p_max == Approx(0.5).margin(1e-8));

  // the first crossing interval brackets kstar and its derivative jump
  // dominates the smooth-region noise floor
  REQUIRE_FALSE(sweep.crossings.empty());
  const auto& cr = sweep.crossings.front();
  CHECK(cr.kappa_left <= kstar);
  CHECK(kstar <= cr.kappa_right);
  REQUIRE(sweep.slope_noise_floor > 0.0);
  CHECK(cr.gap > 10.0 * sweep.slope_noise_floor);

  // P_max is continuous across the crossing
  const auto& pl = sweep.points[cr.interval_left];
  const auto& pr = sweep.points[cr.interval_left + 1];
  CHECK(std::abs(pl.p_max - pr.p_max) < 2.0 * std::abs(cr.slope_left) *
                                            (pr.kappa - pl.kappa));

  CHECK_THROWS_AS(kappa_sweep(0.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(kappa_sweep(0.5, 1.0, 2), std::invalid_argument);
}

TEST_CASE("conjecture report tallies violations") {
  ScanOptions opts;
  opts.grid = 1;
  const auto ghz_records = scan_family(Family::Ghz, opts);
  REQUIRE(ghz_records.size() == 1);
  const auto rep = conjecture_report(ghz_records);
  CHECK(rep.total == 1);
  CHECK(rep.feasible_count == 1);
  CHECK(rep.necessary_violations.empty());
  CHECK(rep.sufficient_violations.empty());

  CHECK_THROWS_AS(conjecture_report({}), std::invalid_argument);

  // a hand-built violating record is counted and carried through
  ScanRecord bad;
  bad.family = "synthetic";
  bad.pmax_numeric = 0.7;
  bad.teleport_bob = {true, false, false};
  bad.necessary_ok = false;
  bad.sufficient_ok = true;
  const auto rep2 = conjecture_report({bad});
  CHECK(rep2.necessary_violations.size() == 1);
  CHECK(rep2.necessary_violations.front().family == "synthetic");
}

TEST_CASE("random scan is deterministic under its seed") {
  ScanOptions opts;
  opts.seed = 31415;
  const auto a = random_scan(5, opts);
  const auto b = random_scan(5, opts);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].pmax_numeric == b[i].pmax_numeric);
    CHECK(a[i].teleport_bob == b[i].teleport_bob);
  }
}
