#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "grovlab/config.hpp"
#include "grovlab/qcore.hpp"
#include "grovlab/random.hpp"

namespace grovlab {

// Which of the three resource qubits Bob holds (teleportation) or Alice
// holds (superdense coding); the remaining two belong to the other party.
struct Assignment {
  int qubit = 2;
  Assignment() = default;
  explicit Assignment(int q) : qubit(q) {
    if (q < 0 || q > 2)
      throw std::out_of_range("Assignment: resource qubit index must be 0..2");
  }
};

// Perfect teleportation needs the Alice-pair/Bob bipartition maximally
// entangled, i.e. Bob's single-qubit reduction equal to I/2.
inline bool teleport_feasible(const PureState& resource,
                              const Assignment& assign) {
  if (resource.n_qubits() != 3)
    throw std::invalid_argument("teleport_feasible: resource must be 3 qubits");
  const DensityMatrix rho_b = partial_trace(resource, {assign.qubit});
  const Eigen::Matrix2cd dev =
      rho_b.matrix() - 0.5 * Eigen::Matrix2cd::Identity();
  return dev.cwiseAbs().maxCoeff() < default_tolerances().feasibility;
}

// Four orthonormal measurement states for Alice (input qubit + her two
// resource qubits, outcome order I, Z, X, ZX), the matching Bob-side
// correction unitaries, and the outcome probabilities (1/4 each for every
// input; that input-independence is part of the perfect-teleportation
// contract).
struct TeleportProtocol {
  int bob_qubit;
  std::array<int, 2> alice_qubits;
  std::array<PureState, 4> basis;
  std::array<Eigen::Matrix2cd, 4> corrections;
  std::array<double, 4> probabilities;
};

namespace detail {

inline std::array<int, 2> alice_pair(int bob) {
  std::array<int, 2> out{};
  int k = 0;
  for (int q = 0; q < 3; ++q)
    if (q != bob) out[k++] = q;
  return out;
}

// Unnormalized Bob-side vectors per outcome when the joint state
// input (x) resource is measured in `basis` on (input, alice_lo, alice_hi).
inline std::array<Eigen::Vector2cd, 4> outcome_vectors(
    const PureState& resource, int bob, const std::array<PureState, 4>& basis,
    const Qubit1& input) {
  const auto alice = alice_pair(bob);
  std::array<Eigen::Vector2cd, 4> amp;
  amp.fill(Eigen::Vector2cd::Zero());
  // joint = input qubit (position 0) then the three resource qubits
  for (std::size_t x = 0; x < 16; ++x) {
    const int in_bit = qubit_bit(x, 0, 4);
    const Amplitude joint =
        input(in_bit) * resource.amplitude(x & 0x7u);
    if (joint == Amplitude(0.0)) continue;
    const std::size_t meas = static_cast<std::size_t>(
        (in_bit << 2) | (qubit_bit(x, 1 + alice[0], 4) << 1) |
        qubit_bit(x, 1 + alice[1], 4));
    const int t = qubit_bit(x, 1 + bob, 4);
    for (int mu = 0; mu < 4; ++mu)
      amp[static_cast<std::size_t>(mu)](t) +=
          std::conj(basis[static_cast<std::size_t>(mu)].amplitude(meas)) *
          joint;
  }
  return amp;
}

}  // namespace detail

// Builds the explicit protocol for a feasible resource/assignment. The
// Schmidt pair {|b0>, |b1>} on Bob's side is fixed deterministically by
// Gram-Schmidt over Bob's conditional vectors <x|_Alice |resource> in
// lexicographic Alice-basis order, phases taken as they come. The basis
// state for outcome mu is (sigma_mu^T x I)(|0>|A0> + |1>|A1>)/sqrt(2) and
// the correction is sigma_mu^{-1} V^dagger with V = [b0 b1].
inline TeleportProtocol build_protocol(const PureState& resource,
                                       const Assignment& assign) {
  if (!teleport_feasible(resource, assign))
    throw std::domain_error(
        "build_protocol: resource/assignment does not admit perfect "
        "teleportation (Bob's reduction is not maximally mixed)");

  const int bob = assign.qubit;
  const auto alice = detail::alice_pair(bob);
  const int n = 3;

  // Bob-side conditional vectors, indexed by the Alice-pair basis
  std::array<Eigen::Vector2cd, 4> cond;
  for (auto& v : cond) v.setZero();
  for (std::size_t idx = 0; idx < 8; ++idx) {
    const std::size_t x = (static_cast<std::size_t>(qubit_bit(idx, alice[0], n)) << 1) |
                          static_cast<std::size_t>(qubit_bit(idx, alice[1], n));
    cond[x](qubit_bit(idx, bob, n)) += resource.amplitude(idx);
  }

  // deterministic Schmidt pair: Gram-Schmidt in lex order, no re-phasing
  Eigen::Vector2cd b0 = Eigen::Vector2cd::Zero(),
                   b1 = Eigen::Vector2cd::Zero();
  bool have0 = false, have1 = false;
  for (const auto& v : cond) {
    if (!have0) {
      if (v.norm() > 1e-9) {
        b0 = v.normalized();
        have0 = true;
      }
      continue;
    }
    const Eigen::Vector2cd res = v - b0 * (b0.dot(v));
    if (res.norm() > 1e-9) {
      b1 = res.normalized();
      have1 = true;
      break;
    }
  }
  if (!have0 || !have1)
    throw std::logic_error("build_protocol: rank-deficient feasible resource");

  // Alice-side Schmidt vectors A_k = sqrt(2) <b_k|resource>
  const double sqrt2 = std::sqrt(2.0);
  Eigen::Vector4cd a0 = Eigen::Vector4cd::Zero(), a1 = Eigen::Vector4cd::Zero();
  for (std::size_t x = 0; x < 4; ++x) {
    a0(static_cast<std::int64_t>(x)) = sqrt2 * b0.dot(cond[x]);
    a1(static_cast<std::int64_t>(x)) = sqrt2 * b1.dot(cond[x]);
  }

  // |J> = (|0>|A0> + |1>|A1>)/sqrt(2) on (input, alice_lo, alice_hi)
  Vector j(8);
  j.segment(0, 4) = a0 / sqrt2;
  j.segment(4, 4) = a1 / sqrt2;
  const PureState joint(3, std::move(j));

  const Eigen::Matrix2cd I2 = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd X = Operator1Q::pauli_x().matrix();
  const Eigen::Matrix2cd Z = Operator1Q::pauli_z().matrix();
  const std::array<Eigen::Matrix2cd, 4> sigma = {I2, Z, X, Z * X};

  auto measure_state = [&](const Eigen::Matrix2cd& s) {
    return apply_1q(joint, Operator1Q(s.transpose()), 0);
  };
  std::array<PureState, 4> basis = {measure_state(sigma[0]),
                                    measure_state(sigma[1]),
                                    measure_state(sigma[2]),
                                    measure_state(sigma[3])};

  Eigen::Matrix2cd v;
  v.col(0) = b0;
  v.col(1) = b1;
  const Eigen::Matrix2cd vdag = v.adjoint();
  std::array<Eigen::Matrix2cd, 4> corrections = {vdag, Z * vdag, X * vdag,
                                                 X * Z * vdag};

  TeleportProtocol proto{bob, alice, std::move(basis), std::move(corrections),
                         {0.0, 0.0, 0.0, 0.0}};

  // validate the protocol invariants: orthonormal basis, unitary
  // corrections, input-independent uniform outcome probabilities
  const double tol = default_tolerances().algebra;
  for (int p = 0; p < 4; ++p)
    for (int q = p + 1; q < 4; ++q)
      if (std::abs(inner(proto.basis[static_cast<std::size_t>(p)],
                         proto.basis[static_cast<std::size_t>(q)])) > tol)
        throw std::logic_error("build_protocol: basis not orthogonal");
  for (const auto& c : proto.corrections)
    if ((c.adjoint() * c - I2).cwiseAbs().maxCoeff() > tol)
      throw std::logic_error("build_protocol: correction not unitary");

  const std::array<Qubit1, 4> probes = {
      Qubit1(1.0, 0.0), Qubit1(0.0, 1.0),
      Qubit1(1.0 / sqrt2, 1.0 / sqrt2),
      Qubit1(1.0 / sqrt2, Amplitude(0.0, 1.0 / sqrt2))};
  for (const auto& probe : probes) {
    const auto amps = detail::outcome_vectors(resource, bob, proto.basis, probe);
    for (int mu = 0; mu < 4; ++mu) {
      const double p = amps[static_cast<std::size_t>(mu)].squaredNorm();
      if (std::abs(p - 0.25) > default_tolerances().feasibility)
        throw std::logic_error(
            "build_protocol: outcome probabilities are not uniform");
      proto.probabilities[static_cast<std::size_t>(mu)] = p;
    }
  }
  return proto;
}

struct TeleportOutcome {
  int outcome;          // 0..3 in the (I, Z, X, ZX) labeling
  PureState bob_state;  // Bob's qubit after the correction
  double fidelity;      // against the input qubit
};

// Monte-Carlo run of the protocol: sample an outcome from the Born rule,
// collapse Bob's qubit, apply the paired correction.
inline TeleportOutcome simulate_teleport(const TeleportProtocol& protocol,
                                         const PureState& resource,
                                         const Assignment& assign,
                                         const Qubit1& input,
                                         std::uint64_t seed) {
  if (assign.qubit != protocol.bob_qubit)
    throw std::invalid_argument("simulate_teleport: assignment mismatch");
  if (std::abs(input.squaredNorm() - 1.0) > default_tolerances().algebra)
    throw std::invalid_argument("simulate_teleport: input not normalized");

  const auto amps = detail::outcome_vectors(resource, protocol.bob_qubit,
                                            protocol.basis, input);
  std::array<double, 4> p{};
  for (std::size_t mu = 0; mu < 4; ++mu) p[mu] = amps[mu].squaredNorm();

  Rng rng(seed);
  const double u = rng.uniform() * (p[0] + p[1] + p[2] + p[3]);
  int outcome = 3;
  double acc = 0.0;
  for (int mu = 0; mu < 4; ++mu) {
    acc += p[static_cast<std::size_t>(mu)];
    if (u < acc) {
      outcome = mu;
      break;
    }
  }

  const Eigen::Vector2cd collapsed =
      amps[static_cast<std::size_t>(outcome)].normalized();
  const Eigen::Vector2cd corrected =
      protocol.corrections[static_cast<std::size_t>(outcome)] * collapsed;
  Vector out(2);
  out << corrected(0), corrected(1);
  PureState bob_state(1, std::move(out));
  const double fid = std::norm(input.dot(corrected));
  return {outcome, std::move(bob_state), fid};
}

// Gram matrix of the four encoded resource states under {I, Z, X, -iY} on
// Alice's qubit; the scenario works exactly when they are orthonormal.
struct SuperdenseReport {
  Eigen::Matrix4cd gram;
  bool feasible;
  std::array<PureState, 4> encoded;
};

inline SuperdenseReport superdense_check(const PureState& resource,
                                         int alice_qubit) {
  if (resource.n_qubits() != 3)
    throw std::invalid_argument("superdense_check: resource must be 3 qubits");
  if (alice_qubit < 0 || alice_qubit > 2)
    throw std::out_of_range("superdense_check: alice qubit index must be 0..2");

  Eigen::Matrix2cd minus_i_y;
  minus_i_y << 0, -1, 1, 0;
  const std::array<Operator1Q, 4> ops = {
      Operator1Q::identity(), Operator1Q::pauli_z(), Operator1Q::pauli_x(),
      Operator1Q(minus_i_y)};

  std::array<PureState, 4> encoded = {
      apply_1q(resource, ops[0], alice_qubit),
      apply_1q(resource, ops[1], alice_qubit),
      apply_1q(resource, ops[2], alice_qubit),
      apply_1q(resource, ops[3], alice_qubit)};

  Eigen::Matrix4cd gram;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      gram(p, q) = inner(encoded[static_cast<std::size_t>(p)],
                         encoded[static_cast<std::size_t>(q)]);

  double max_offdiag = 0.0;
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      if (p != q) max_offdiag = std::max(max_offdiag, std::abs(gram(p, q)));

  return {gram, max_offdiag < default_tolerances().gram, std::move(encoded)};
}

}  // namespace grovlab
