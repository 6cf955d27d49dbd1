#include <catch2/catch.hpp>

#include <algorithm>
#include <array>
#include <numeric>

#include "grovlab/conjlab.hpp"
#include "grovlab/protocols.hpp"
#include "test_helpers.hpp"

using namespace grovlab;
using namespace grovlab_test;

namespace {

// best bijective matching overlap moduli between two 4-element bases
std::array<double, 4> matched_overlaps(const std::array<PureState, 4>& got,
                                       const std::array<PureState, 4>& want) {
  std::array<int, 4> perm{0, 1, 2, 3};
  std::array<double, 4> best{};
  double best_total = -1.0;
  do {
    std::array<double, 4> cur{};
    double total = 0.0;
    for (int i = 0; i < 4; ++i) {
      cur[static_cast<std::size_t>(i)] = std::abs(
          inner(got[static_cast<std::size_t>(i)],
                want[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])]));
      total += cur[static_cast<std::size_t>(i)];
    }
    if (total > best_total) {
      best_total = total;
      best = cur;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

TEST_CASE("feasibility verdicts for the named resources") {
  for (int bob = 0; bob < 3; ++bob)
    CHECK(teleport_feasible(ghz3(), Assignment(bob)));

  CHECK(teleport_feasible(w1_state(), Assignment(2)));
  CHECK_FALSE(teleport_feasible(w1_state(), Assignment(0)));
  CHECK_FALSE(teleport_feasible(w1_state(), Assignment(1)));

  Rng rng(8);
  const Qubit1 q1 = rng.bloch_uniform();
  const Qubit1 q2 = rng.bloch_uniform();  // generically non-orthogonal
  REQUIRE(std::abs(q1.dot(q2)) > 1e-3);
  const auto phi = phi_state(q1, q2);
  CHECK(teleport_feasible(phi, Assignment(0)));
  CHECK(teleport_feasible(phi, Assignment(1)));
  CHECK_FALSE(teleport_feasible(phi, Assignment(2)));

  const auto phi_orth = phi_state(q1, orthogonal_partner(q1));
  CHECK(teleport_feasible(phi_orth, Assignment(2)));

  CHECK_THROWS_AS(Assignment(3), std::out_of_range);
}

TEST_CASE("GHZ protocol is the textbook one, labels included") {
  const auto proto = build_protocol(ghz3(), Assignment(2));
  const double s = 1.0 / std::sqrt(2.0);
  const std::array<PureState, 4> reference = {
      make_state(3, {{0, s}, {7, s}}),    // phi1+
      make_state(3, {{0, s}, {7, -s}}),   // phi1-
      make_state(3, {{4, s}, {3, s}}),    // phi2+
      make_state(3, {{4, s}, {3, -s}})};  // phi2-
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(inner(proto.basis[static_cast<std::size_t>(i)],
                         reference[static_cast<std::size_t>(i)])) ==
          Approx(1.0).margin(1e-12));

  const Eigen::Matrix2cd I2 = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd X = Operator1Q::pauli_x().matrix();
  const Eigen::Matrix2cd Z = Operator1Q::pauli_z().matrix();
  const std::array<Eigen::Matrix2cd, 4> want = {I2, Z, X, Z * X};
  for (int i = 0; i < 4; ++i) {
    const double phase_match =
        std::abs((want[static_cast<std::size_t>(i)].adjoint() *
                  proto.corrections[static_cast<std::size_t>(i)])
                     .trace()) /
        2.0;
    CHECK(phase_match == Approx(1.0).margin(1e-12));
  }
  for (double p : proto.probabilities)
    CHECK(p == Approx(0.25).margin(1e-12));
}

TEST_CASE("W1 protocol measures in the reference basis set") {
  const auto proto = build_protocol(w1_state(), Assignment(2));
  const double s = 1.0 / std::sqrt(2.0);
  const std::array<PureState, 4> reference = {
      make_state(3, {{2, 0.5}, {1, 0.5}, {4, s}}),     // eta1+
      make_state(3, {{2, 0.5}, {1, 0.5}, {4, -s}}),    // eta1-
      make_state(3, {{6, 0.5}, {5, 0.5}, {0, s}}),     // xi1+
      make_state(3, {{6, 0.5}, {5, 0.5}, {0, -s}})};   // xi1-
  const auto overlaps = matched_overlaps(proto.basis, reference);
  for (double o : overlaps) CHECK(o == Approx(1.0).margin(1e-10));
}

TEST_CASE("rotated-GHZ protocol corrects through the local unitary") {
  Rng rng(9);
  const auto u = random_unitary(rng);
  const Qubit1 q1 = u.col(0), q2 = u.col(1);
  const auto proto = build_protocol(phi_state(q1, q2), Assignment(2));

  // measurement basis is the GHZ basis
  const double s = 1.0 / std::sqrt(2.0);
  const std::array<PureState, 4> ghz_basis = {
      make_state(3, {{0, s}, {7, s}}), make_state(3, {{0, s}, {7, -s}}),
      make_state(3, {{4, s}, {3, s}}), make_state(3, {{4, s}, {3, -s}})};
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(inner(proto.basis[static_cast<std::size_t>(i)],
                         ghz_basis[static_cast<std::size_t>(i)])) ==
          Approx(1.0).margin(1e-10));

  // corrections are u^dag, Z u^dag, X u^dag, XZ u^dag up to a global phase
  const Eigen::Matrix2cd X = Operator1Q::pauli_x().matrix();
  const Eigen::Matrix2cd Z = Operator1Q::pauli_z().matrix();
  const std::array<Eigen::Matrix2cd, 4> want = {
      u.adjoint(), Z * u.adjoint(), X * u.adjoint(), X * Z * u.adjoint()};
  for (int i = 0; i < 4; ++i) {
    const double phase_match =
        std::abs((want[static_cast<std::size_t>(i)].adjoint() *
                  proto.corrections[static_cast<std::size_t>(i)])
                     .trace()) /
        2.0;
    CHECK(phase_match == Approx(1.0).margin(1e-10));
  }
}

TEST_CASE("phi protocol with Bob on the first qubit uses the psi basis") {
  Rng rng(10);
  const Qubit1 q1 = rng.bloch_uniform();
  const Qubit1 q2 = rng.bloch_uniform();
  const auto proto = build_protocol(phi_state(q1, q2), Assignment(0));
  const double s = 1.0 / std::sqrt(2.0);
  const std::array<PureState, 4> reference = {
      make_state(3, {{0, s * q1(0)}, {1, s * q1(1)},
                     {6, s * q2(0)}, {7, s * q2(1)}}),   // psi1+
      make_state(3, {{0, s * q1(0)}, {1, s * q1(1)},
                     {6, -s * q2(0)}, {7, -s * q2(1)}}), // psi1-
      make_state(3, {{4, s * q1(0)}, {5, s * q1(1)},
                     {2, s * q2(0)}, {3, s * q2(1)}}),   // psi2+
      make_state(3, {{4, s * q1(0)}, {5, s * q1(1)},
                     {2, -s * q2(0)}, {3, -s * q2(1)}})};// psi2-
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(inner(proto.basis[static_cast<std::size_t>(i)],
                         reference[static_cast<std::size_t>(i)])) ==
          Approx(1.0).margin(1e-10));
}

TEST_CASE("build_protocol rejects infeasible instances") {
  CHECK_THROWS_AS(build_protocol(w1_state(), Assignment(0)),
                  std::domain_error);
  CHECK_THROWS_AS(build_protocol(PureState::basis_state(3, 0), Assignment(2)),
                  std::domain_error);
}

TEST_CASE("feasibility and protocol construction agree everywhere") {
  Rng rng(44);
  std::vector<PureState> states;
  states.push_back(ghz3());
  states.push_back(w3());
  states.push_back(w1_state());
  for (int i = 0; i <= 4; ++i)
    for (int j = 0; j <= 4; ++j) {
      const double a = kInvSqrt2 * i / 4, b = kInvSqrt2 * j / 4;
      states.push_back(family_state(FamilySpec::four_term(a, b)));
      const double r = kInvSqrt2 * i / 4, t = 1.5707963267948966 * j / 4;
      states.push_back(family_state(
          FamilySpec::ghz_like(r * std::cos(t), r * std::sin(t))));
      const double theta = 3.141592653589793 * i / 4;
      states.push_back(family_state(FamilySpec::phi(
          Qubit1(1.0, 0.0), bloch_state(theta, 2.0 * t))));
    }
  for (int t = 0; t < 200; ++t) states.push_back(haar_random_state(3, rng));
  for (const auto& st : states) {
    for (int bob = 0; bob < 3; ++bob) {
      const bool feasible = teleport_feasible(st, Assignment(bob));
      bool built = true;
      try {
        (void)build_protocol(st, Assignment(bob));
      } catch (const std::domain_error&) {
        built = false;
      }
      REQUIRE(feasible == built);
    }
  }
}

TEST_CASE("outcome probabilities are uniform and complete for any input") {
  Rng rng(45);
  const auto u = random_unitary(rng);
  const auto resource = phi_state(u.col(0), u.col(1));
  const auto proto = build_protocol(resource, Assignment(2));
  for (int t = 0; t < 50; ++t) {
    const Qubit1 input = rng.bloch_uniform();
    const auto amps =
        detail::outcome_vectors(resource, 2, proto.basis, input);
    double total = 0.0;
    for (const auto& a : amps) {
      const double p = a.squaredNorm();
      CHECK(p == Approx(0.25).margin(1e-10));
      total += p;
    }
    REQUIRE(total == Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("simulated teleportation is perfect on the feasible resources") {
  SECTION("GHZ with a basis input") {
    const auto proto = build_protocol(ghz3(), Assignment(2));
    std::array<bool, 4> seen{};
    for (int t = 0; t < 64; ++t) {
      const auto out = simulate_teleport(proto, ghz3(), Assignment(2),
                                         Qubit1(1.0, 0.0), 7000 + t);
      REQUIRE(out.fidelity >= 1.0 - 1e-10);
      seen[static_cast<std::size_t>(out.outcome)] = true;
    }
    CHECK((seen[0] && seen[1] && seen[2] && seen[3]));
  }

  SECTION("W1 with the fixed complex input") {
    const auto proto = build_protocol(w1_state(), Assignment(2));
    const Qubit1 input(0.6, Amplitude(0.0, 0.8));
    for (int t = 0; t < 16; ++t) {
      const auto out = simulate_teleport(proto, w1_state(), Assignment(2),
                                         input, 100 + t);
      REQUIRE(out.fidelity >= 1.0 - 1e-10);
      CHECK(std::abs(std::abs(inner(
                out.bob_state, PureState(1, Vector(input)))) -
            1.0) < 1e-10);
    }
  }

  SECTION("random orthogonal phi resource, 1000 trials") {
    Rng rng(46);
    const auto u = random_unitary(rng);
    const auto resource = phi_state(u.col(0), u.col(1));
    const auto proto = build_protocol(resource, Assignment(2));
    std::array<int, 4> hist{};
    double min_fid = 1.0;
    for (int t = 0; t < 1000; ++t) {
      const auto out = simulate_teleport(proto, resource, Assignment(2),
                                         rng.bloch_uniform(), rng.raw());
      min_fid = std::min(min_fid, out.fidelity);
      hist[static_cast<std::size_t>(out.outcome)]++;
    }
    REQUIRE(min_fid > 1.0 - 1e-10);
    // chi^2 against uniform: 3 dof, 16.27 is the 0.1% tail
    double chi2 = 0.0;
    for (int c : hist) chi2 += (c - 250.0) * (c - 250.0) / 250.0;
    CHECK(chi2 < 16.27);
  }

  SECTION("unnormalized input is rejected") {
    const auto proto = build_protocol(ghz3(), Assignment(2));
    CHECK_THROWS_AS(simulate_teleport(proto, ghz3(), Assignment(2),
                                      Qubit1(1.0, 1.0), 1),
                    std::invalid_argument);
  }
}

TEST_CASE("superdense coding feasibility and encoded states") {
  Rng rng(47);
  const Qubit1 q1 = rng.bloch_uniform();
  const Qubit1 q2 = rng.bloch_uniform();
  const auto phi = phi_state(q1, q2);

  const auto rep = superdense_check(phi, 0);
  REQUIRE(rep.feasible);
  const double s = 1.0 / std::sqrt(2.0);
  const std::array<PureState, 4> reference = {
      make_state(3, {{0, s * q1(0)}, {1, s * q1(1)},
                     {6, s * q2(0)}, {7, s * q2(1)}}),
      make_state(3, {{0, s * q1(0)}, {1, s * q1(1)},
                     {6, -s * q2(0)}, {7, -s * q2(1)}}),
      make_state(3, {{4, s * q1(0)}, {5, s * q1(1)},
                     {2, s * q2(0)}, {3, s * q2(1)}}),
      make_state(3, {{4, s * q1(0)}, {5, s * q1(1)},
                     {2, -s * q2(0)}, {3, -s * q2(1)}})};
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(inner(rep.encoded[static_cast<std::size_t>(i)],
                         reference[static_cast<std::size_t>(i)])) ==
          Approx(1.0).margin(1e-12));
  for (int i = 0; i < 4; ++i)
    CHECK(std::abs(rep.gram(i, i) - Amplitude(1.0)) < 1e-12);

  REQUIRE(std::abs(q1.dot(q2)) > 1e-3);
  CHECK_FALSE(superdense_check(phi, 2).feasible);
  CHECK_FALSE(superdense_check(PureState::basis_state(3, 0), 0).feasible);
}

TEST_CASE("superdense and teleport feasibility coincide per qubit") {
  Rng rng(48);
  std::vector<PureState> states;
  const auto u = random_unitary(rng);
  states.push_back(phi_state(u.col(0), u.col(1)));
  states.push_back(phi_state(rng.bloch_uniform(), rng.bloch_uniform()));
  states.push_back(w1_state());
  states.push_back(ghz3());
  for (int t = 0; t < 25; ++t) states.push_back(haar_random_state(3, rng));
  for (const auto& st : states)
    for (int k = 0; k < 3; ++k)
      REQUIRE(superdense_check(st, k).feasible ==
              teleport_feasible(st, Assignment(k)));
}
