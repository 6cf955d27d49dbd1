#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "grovlab/config.hpp"
#include "grovlab/qcore.hpp"
#include "grovlab/random.hpp"

namespace grovlab {

enum class Method { Alternating, Reduced, Bloch, ClosedForm };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::Alternating: return "alternating";
    case Method::Reduced: return "reduced";
    case Method::Bloch: return "bloch";
    case Method::ClosedForm: return "closed-form";
  }
  return "?";
}

// Multistart iteration knobs. Ascent stops once the per-sweep gain in the
// overlap squared drops below `tol` AND the geometric-ratio extrapolation of
// the remaining gap falls below `value_tol`; near-degenerate maximizers make
// the plain gain test stop orders of magnitude short, which is why the
// extrapolated estimate and the large sweep cap are needed.
struct IterateOptions {
  int restarts = 32;
  double tol = 1e-12;        // per-sweep overlap-squared gain
  double value_tol = 1e-10;  // extrapolated remaining gap
  int max_sweeps = 50000;
  std::uint64_t seed = 0x9e3779b97f4a7c15ull;
};

// P_max and G(psi) = sqrt(1 - P_max) together with the product state that
// attains them.
struct GroverianResult {
  double p_max = 0.0;
  double g_measure = 0.0;
  ProductState maximizer;
  Method method = Method::Alternating;
  int restarts_used = 0;
  bool converged = false;
};

namespace detail {

inline double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }

inline GroverianResult make_result(double p, ProductState maximizer, Method m,
                                   int restarts, bool converged) {
  GroverianResult r{clamp01(p), std::sqrt(std::max(0.0, 1.0 - clamp01(p))),
                    std::move(maximizer), m, restarts, converged};
  return r;
}

// Contract the conjugated single-qubit factor on position `pos` of the
// m-qubit prefix of `buf`, halving the active length. Writing in place is
// safe because every write lands at or below the positions it reads.
inline void contract_at_inplace(Vector& buf, int m, int pos, const Qubit1& f) {
  const int lo_bits = m - 1 - pos;
  const std::int64_t lo_dim = std::int64_t{1} << lo_bits;
  const std::int64_t hi_dim = std::int64_t{1} << pos;
  const Amplitude c0 = std::conj(f(0)), c1 = std::conj(f(1));
  for (std::int64_t hi = 0; hi < hi_dim; ++hi)
    for (std::int64_t lo = 0; lo < lo_dim; ++lo)
      buf((hi << lo_bits) | lo) = c0 * buf((hi << (lo_bits + 1)) | lo) +
                                  c1 * buf((hi << (lo_bits + 1)) | lo_dim | lo);
}

// Contract every factor except those in `skip`. Qubits are contracted from
// the highest index down, so the position of original qubit j inside the
// shrinking prefix is always j. The result occupies the leading
// 2^|skip| entries of `buf`.
inline void environment_into(const Vector& amps, int n,
                             const std::vector<Qubit1>& factors,
                             const std::vector<int>& skip, Vector& buf) {
  buf = amps;
  int m = n;
  for (int j = n - 1; j >= 0; --j) {
    if (std::find(skip.begin(), skip.end(), j) != skip.end()) continue;
    contract_at_inplace(buf, m, j, factors[static_cast<std::size_t>(j)]);
    --m;
  }
}

inline Vector environment(const Vector& amps, int n,
                          const std::vector<Qubit1>& factors,
                          const std::vector<int>& skip) {
  Vector buf;
  environment_into(amps, n, factors, skip, buf);
  buf.conservativeResize(std::int64_t{1} << skip.size());
  return buf;
}

// Extrapolated remaining ascent, assuming an asymptotically geometric gain
// sequence; conservative (equal to the last gain) before that regime.
inline double remaining_gap(double gain, double prev_gain) {
  if (gain <= 0.0) return 0.0;
  if (prev_gain > gain) {
    const double rho = gain / prev_gain;
    return gain * rho / (1.0 - rho);
  }
  return gain;
}

struct SingleRunResult {
  std::vector<Qubit1> factors;
  double p = 0.0;
  int sweeps = 0;
  bool converged = false;
  double worst_drop = 0.0;  // largest overlap^2 decrease seen (monotone ascent check)
};

// One multistart instance of the alternating product-state ascent: per sweep
// each factor is replaced by its normalized environment, which can only
// increase the overlap.
inline SingleRunResult hopm_single(const PureState& state,
                                   std::vector<Qubit1> factors,
                                   const IterateOptions& opts) {
  const int n = state.n_qubits();
  const Vector& amps = state.amplitudes();
  SingleRunResult run;
  Vector buf;
  std::vector<int> skip(1);
  double p = std::norm(overlap_product(state, ProductState(factors)));
  double prev_gain = -1.0;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    const double p_start = p;
    for (int i = 0; i < n; ++i) {
      skip[0] = i;
      environment_into(amps, n, factors, skip, buf);
      const double nv = std::sqrt(std::norm(buf(0)) + std::norm(buf(1)));
      if (nv > 1e-300) {
        factors[static_cast<std::size_t>(i)] = Qubit1(buf(0), buf(1)) / nv;
        const double p_new = nv * nv;
        run.worst_drop = std::max(run.worst_drop, p - p_new);
        p = p_new;
      }
    }
    run.sweeps = sweep + 1;
    const double gain = p - p_start;
    if (gain < opts.tol && remaining_gap(gain, prev_gain) < opts.value_tol) {
      run.converged = true;
      break;
    }
    prev_gain = gain;
  }
  run.factors = std::move(factors);
  run.p = p;
  return run;
}

inline std::vector<Qubit1> random_factors(int n, Rng& rng) {
  std::vector<Qubit1> f(static_cast<std::size_t>(n));
  for (auto& q : f) q = rng.bloch_uniform();
  return f;
}

}  // namespace detail

// Alternating (higher-order power method) maximization of
// |<e_1|x...x<e_n|psi>|^2 over product states, best of `restarts` starts.
inline GroverianResult pmax_alternating(const PureState& state,
                                        const IterateOptions& opts = {}) {
  if (opts.restarts < 1)
    throw std::invalid_argument("pmax_alternating: restarts must be >= 1");
  Rng rng(opts.seed);
  std::optional<detail::SingleRunResult> best;
  for (int r = 0; r < opts.restarts; ++r) {
    auto run = detail::hopm_single(
        state, detail::random_factors(state.n_qubits(), rng), opts);
    if (!best || run.p > best->p) best = std::move(run);
  }
  return detail::make_result(best->p, ProductState(best->factors),
                             Method::Alternating, opts.restarts,
                             best->converged);
}

namespace detail {

// One run of the reduced iteration: factors on qubits 0..n-2 only, identity
// on the last qubit. Each update takes the top eigenvector of the 2x2
// environment Gram matrix; the objective is the squared norm of the
// conditioned single-qubit remainder.
inline SingleRunResult reduced_single(const PureState& state,
                                      std::vector<Qubit1> factors,
                                      const IterateOptions& opts) {
  const int n = state.n_qubits();
  const Vector& amps = state.amplitudes();
  SingleRunResult run;
  Vector buf;
  std::vector<Qubit1> full = factors;
  full.emplace_back(Qubit1(1.0, 0.0));  // placeholder, never contracted

  auto remainder_norm2 = [&]() {
    environment_into(amps, n, full, {n - 1}, buf);
    return std::norm(buf(0)) + std::norm(buf(1));
  };

  double p = remainder_norm2();
  double prev_gain = -1.0;
  std::vector<int> skip = {0, n - 1};
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    const double p_start = p;
    for (int i = 0; i < n - 1; ++i) {
      skip[0] = i;
      environment_into(amps, n, full, skip, buf);
      // prefix index = 2*bit(qubit i) + bit(qubit n-1)
      Eigen::Matrix2cd m;
      m << buf(0), buf(1), buf(2), buf(3);
      const Eigen::Matrix2cd gram = m * m.adjoint();
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(gram);
      full[static_cast<std::size_t>(i)] = es.eigenvectors().col(1);
      const double p_new = es.eigenvalues()(1);
      run.worst_drop = std::max(run.worst_drop, p - p_new);
      p = p_new;
    }
    run.sweeps = sweep + 1;
    const double gain = p - p_start;
    if (gain < opts.tol && remaining_gap(gain, prev_gain) < opts.value_tol) {
      run.converged = true;
      break;
    }
    prev_gain = gain;
  }
  run.p = remainder_norm2();
  const Amplitude w0 = buf(0), w1 = buf(1);
  const double nw = std::sqrt(run.p);
  full[static_cast<std::size_t>(n - 1)] =
      nw > 1e-300 ? Qubit1(Qubit1(w0, w1) / nw) : Qubit1(1.0, 0.0);
  run.factors = std::move(full);
  return run;
}

}  // namespace detail

// Reduced-optimization variant: optimizes only the first n-1 factors with
// the identity on the last qubit. By the reduction theorem the optimum
// equals pmax_alternating; the returned maximizer is completed with the
// normalized remainder so its product overlap reproduces p_max.
inline GroverianResult pmax_reduced(const PureState& state,
                                    const IterateOptions& opts = {}) {
  if (state.n_qubits() < 2)
    throw std::invalid_argument("pmax_reduced needs at least 2 qubits");
  if (opts.restarts < 1)
    throw std::invalid_argument("pmax_reduced: restarts must be >= 1");
  Rng rng(opts.seed);
  std::optional<detail::SingleRunResult> best;
  for (int r = 0; r < opts.restarts; ++r) {
    auto run = detail::reduced_single(
        state, detail::random_factors(state.n_qubits() - 1, rng), opts);
    if (!best || run.p > best->p) best = std::move(run);
  }
  return detail::make_result(best->p, ProductState(best->factors),
                             Method::Reduced, opts.restarts, best->converged);
}

// Bloch vectors of the two kept single-qubit reductions (ascending qubit
// order) and the correlation tensor g_ij = Tr[rho sigma_i x sigma_j] of the
// kept two-qubit reduction of a 3-qubit state.
struct BlochData {
  Eigen::Vector3d r2;
  Eigen::Vector3d r3;
  Eigen::Matrix3d g;
};

inline BlochData bloch_data(const PureState& state, int traced) {
  if (state.n_qubits() != 3)
    throw std::invalid_argument("bloch_data needs exactly 3 qubits");
  if (traced < 0 || traced > 2)
    throw std::out_of_range("bloch_data: traced qubit out of range");
  std::vector<int> kept;
  for (int q = 0; q < 3; ++q)
    if (q != traced) kept.push_back(q);

  const DensityMatrix rho_pair = partial_trace(state, kept);
  BlochData bd;
  bd.r2 = bloch_vector(partial_trace(rho_pair, {0}));
  bd.r3 = bloch_vector(partial_trace(rho_pair, {1}));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      bd.g(i, j) = std::real(
          (rho_pair.matrix() * tensor(Matrix(pauli_matrix(i)),
                                      Matrix(pauli_matrix(j))))
              .trace());
  return bd;
}

// A solution of the Lagrange conditions r2 + g s3 = L1 s2,
// r3 + g^T s2 = L2 s3 on unit Bloch vectors, with the objective value
// (1/4)[1 + s2.r2 + s3.r3 + s2^T g s3].
struct StationaryPoint {
  Eigen::Vector3d s2;
  Eigen::Vector3d s3;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double value = 0.0;
};

namespace detail {

inline double bloch_value(const BlochData& bd, const Eigen::Vector3d& s2,
                          const Eigen::Vector3d& s3) {
  return 0.25 * (1.0 + s2.dot(bd.r2) + s3.dot(bd.r3) + s2.dot(bd.g * s3));
}

inline double stationarity_residual(const BlochData& bd,
                                    const StationaryPoint& pt) {
  const Eigen::Vector3d res2 = bd.r2 + bd.g * pt.s3 - pt.lambda1 * pt.s2;
  const Eigen::Vector3d res3 =
      bd.r3 + bd.g.transpose() * pt.s2 - pt.lambda2 * pt.s3;
  return std::max(res2.norm(), res3.norm());
}

// Newton on the full Lagrange system from an approximate fixed point. The
// alternating map converges only sublinearly on singular states (flat
// maximizer directions), where this lands on an exact stationary point in a
// handful of steps. Minimum-norm steps keep it stable when the Jacobian is
// singular along a stationary manifold.
inline StationaryPoint newton_polish(const BlochData& bd,
                                     const StationaryPoint& start) {
  Eigen::VectorXd x(8);
  x << start.s2, start.s3, start.lambda1, start.lambda2;
  auto residual = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd f(8);
    const Eigen::Vector3d s2 = v.segment<3>(0), s3 = v.segment<3>(3);
    f.segment<3>(0) = bd.r2 + bd.g * s3 - v(6) * s2;
    f.segment<3>(3) = bd.r3 + bd.g.transpose() * s2 - v(7) * s3;
    f(6) = s2.squaredNorm() - 1.0;
    f(7) = s3.squaredNorm() - 1.0;
    return f;
  };
  for (int it = 0; it < 60; ++it) {
    const Eigen::VectorXd f = residual(x);
    if (f.norm() < 1e-14) break;
    Eigen::MatrixXd j = Eigen::MatrixXd::Zero(8, 8);
    j.block<3, 3>(0, 0) = -x(6) * Eigen::Matrix3d::Identity();
    j.block<3, 3>(0, 3) = bd.g;
    j.block<3, 1>(0, 6) = -x.segment<3>(0);
    j.block<3, 3>(3, 0) = bd.g.transpose();
    j.block<3, 3>(3, 3) = -x(7) * Eigen::Matrix3d::Identity();
    j.block<3, 1>(3, 7) = -x.segment<3>(3);
    j.block<1, 3>(6, 0) = 2.0 * x.segment<3>(0).transpose();
    j.block<1, 3>(7, 3) = 2.0 * x.segment<3>(3).transpose();
    const Eigen::VectorXd dx =
        j.completeOrthogonalDecomposition().solve(-f);
    x += dx;
    if (!x.allFinite()) return start;
  }
  StationaryPoint out;
  out.s2 = x.segment<3>(0);
  out.s3 = x.segment<3>(3);
  if (out.s2.norm() < 0.5 || out.s3.norm() < 0.5) return start;
  out.s2.normalize();
  out.s3.normalize();
  out.lambda1 = x(6);
  out.lambda2 = x(7);
  out.value = bloch_value(bd, out.s2, out.s3);
  return out;
}

}  // namespace detail

// P_max of a 3-qubit state through the two-qubit Bloch parameterization:
// trace out one qubit (the reduction theorem makes the choice immaterial)
// and alternate s2 <- normalize(r2 + g s3), s3 <- normalize(r3 + g^T s2).
// The returned multipliers are the pre-normalization norms at the fixed
// point.
inline std::pair<GroverianResult, StationaryPoint> pmax_bloch(
    const PureState& state, const IterateOptions& opts = {}, int traced = 0) {
  if (state.n_qubits() != 3)
    throw std::invalid_argument("pmax_bloch needs exactly 3 qubits");
  if (opts.restarts < 1)
    throw std::invalid_argument("pmax_bloch: restarts must be >= 1");
  const BlochData bd = bloch_data(state, traced);
  const double res_tol = default_tolerances().stationarity;

  Rng rng(opts.seed);
  bool have_best = false;
  StationaryPoint best;
  bool best_converged = false;
  int degenerate_restarts = 0;

  for (int r = 0; r < opts.restarts; ++r) {
    Eigen::Vector3d s2 = rng.sphere_uniform();
    Eigen::Vector3d s3 = rng.sphere_uniform();
    double value = detail::bloch_value(bd, s2, s3);
    bool degenerate = false;
    bool converged = false;
    StationaryPoint pt;
    for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
      const Eigen::Vector3d u2 = bd.r2 + bd.g * s3;
      const double l1 = u2.norm();
      if (l1 < 1e-14) { degenerate = true; break; }
      s2 = u2 / l1;
      const Eigen::Vector3d u3 = bd.r3 + bd.g.transpose() * s2;
      const double l2 = u3.norm();
      if (l2 < 1e-14) { degenerate = true; break; }
      s3 = u3 / l2;

      const double next = detail::bloch_value(bd, s2, s3);
      pt = {s2, s3, (bd.r2 + bd.g * s3).norm(), l2, next};
      if (next - value < opts.tol &&
          detail::stationarity_residual(bd, pt) < res_tol) {
        converged = true;
        value = next;
        break;
      }
      value = next;
    }
    if (degenerate) { ++degenerate_restarts; continue; }
    pt.value = value;
    if (!have_best || pt.value > best.value) {
      best = pt;
      best_converged = converged;
      have_best = true;
    }
  }
  if (!have_best)
    throw std::runtime_error("pmax_bloch: every restart hit a degenerate update");

  // polish the winning restart to an exact stationary point
  const StationaryPoint polished = detail::newton_polish(bd, best);
  if (polished.lambda1 > 0.0 && polished.lambda2 > 0.0 &&
      polished.value >= best.value - 1e-9 &&
      detail::stationarity_residual(bd, polished) < res_tol) {
    best = polished;
    best_converged = true;
  }

  // complete the maximizer: kept-qubit factors from the Bloch vectors, the
  // traced factor from the normalized remainder
  std::vector<int> kept;
  for (int q = 0; q < 3; ++q)
    if (q != traced) kept.push_back(q);
  std::vector<Qubit1> factors(3, Qubit1(1.0, 0.0));
  factors[static_cast<std::size_t>(kept[0])] = qubit_from_bloch(best.s2);
  factors[static_cast<std::size_t>(kept[1])] = qubit_from_bloch(best.s3);
  const Vector w =
      detail::environment(state.amplitudes(), 3, factors, {traced});
  if (w.norm() > 1e-300)
    factors[static_cast<std::size_t>(traced)] = Qubit1(w(0), w(1)) / w.norm();

  auto result =
      detail::make_result(best.value, ProductState(factors), Method::Bloch,
                          opts.restarts - degenerate_restarts, best_converged);
  return {std::move(result), best};
}

// Analytic stationary points of the GHZ-like two-parameter family
// a|000> + b|010> + sqrt(1/2-(a^2+b^2))|100> + (1/sqrt 2)|111>.
struct StationaryBranches {
  std::vector<StationaryPoint> branch1;  // value 1/2, the global optimum
  std::vector<StationaryPoint> branch2;  // values (1 + lambda1)/4 < 1/2
  std::vector<StationaryPoint> all() const {
    std::vector<StationaryPoint> out = branch1;
    out.insert(out.end(), branch2.begin(), branch2.end());
    return out;
  }
};

inline StationaryBranches stationary_second1(double a, double b) {
  const double S = a * a + b * b;
  if (S > 0.5 + 1e-12)
    throw std::domain_error("stationary_second1: a^2 + b^2 must be <= 1/2");

  const double P = a * a - b * b;
  const double G = std::sqrt(std::max(0.0, 1.0 - 2.0 * S));
  const double D = 1.0 - 2.0 * b * b;

  // reconstruct the Bloch data of the family directly (traced qubit 0)
  BlochData bd;
  bd.r2 = {2.0 * a * b, 0.0, -2.0 * b * b};
  bd.r3 = {0.0, 0.0, 0.0};
  bd.g << G, 0.0, 2.0 * a * b, 0.0, -G, 0.0, 0.0, 0.0, D;

  StationaryBranches out;
  constexpr double kTiny = 1e-14;

  if (S > kTiny && std::abs(D) > kTiny) {
    StationaryPoint p1;
    p1.s2 = {2.0 * a * b / S, 0.0, P / S};
    p1.s3 = {2.0 * a * b * G / (S * D), 0.0, (P + 2.0 * b * b * S) / (S * D)};
    p1.lambda1 = 1.0;
    p1.lambda2 = D;
    p1.value = detail::bloch_value(bd, p1.s2, p1.s3);
    if (detail::stationarity_residual(bd, p1) <
        default_tolerances().stationarity)
      out.branch1.push_back(p1);
  }

  // second branch: s3z = +/- b sqrt((1-2S)/(S (1-2b^2))) with companions
  //   s2 = +/- (a, 0, -b)/sqrt(S),  s3 = +/- (a, 0, -bG)/sqrt(S D),
  //   L2 = G sqrt(D),               L1 = G sqrt(D) +/- 2 b sqrt(S).
  // Both sign patterns solve the Lagrange system exactly; only those with
  // positive multipliers are kept. Values are (1 + L1)/4, both below 1/2 in
  // the interior of the domain.
  if (G > kTiny && S > kTiny && std::abs(D) > kTiny) {
    const double sqrtS = std::sqrt(S);
    const double sqrtSD = std::sqrt(S * D);
    for (const double sign : {+1.0, -1.0}) {
      StationaryPoint p2;
      p2.s2 = sign * Eigen::Vector3d(a / sqrtS, 0.0, -b / sqrtS);
      p2.s3 = sign * Eigen::Vector3d(a / sqrtSD, 0.0, -b * G / sqrtSD);
      p2.lambda2 = G * std::sqrt(D);
      p2.lambda1 = p2.lambda2 + sign * 2.0 * b * sqrtS;
      p2.value = detail::bloch_value(bd, p2.s2, p2.s3);
      const bool keep = p2.lambda1 > 0.0 && p2.lambda2 > 0.0 &&
                        detail::stationarity_residual(bd, p2) <
                            default_tolerances().stationarity;
      if (keep) out.branch2.push_back(p2);
    }
  }
  return out;
}

// ---- closed forms for the generalized W family ----

enum class GwBranch { Vertex, Circumradius };

inline const char* gw_branch_name(GwBranch b) {
  return b == GwBranch::Vertex ? "vertex" : "circumradius";
}

struct GwResult {
  double p_max;
  GwBranch branch;
};

// Sides must form a strictly valid triangle; R = abc / (4 Area) with the
// area from Heron's formula.
inline double circumradius(double a, double b, double c) {
  if (!(a < b + c && b < a + c && c < a + b))
    throw std::domain_error("circumradius: degenerate triangle");
  const double s = 0.5 * (a + b + c);
  const double area2 = s * (s - a) * (s - b) * (s - c);
  if (area2 <= 0.0)
    throw std::domain_error("circumradius: degenerate triangle");
  return a * b * c / (4.0 * std::sqrt(area2));
}

// Normalized nonnegative triangle coefficients for the generalized W state
// a|001> + b|010> + c|100>.
struct TriangleSpec {
  double a, b, c;
  TriangleSpec(double a_, double b_, double c_) : a(a_), b(b_), c(c_) {
    if (a < 0.0 || b < 0.0 || c < 0.0)
      throw std::invalid_argument("TriangleSpec: coefficients must be >= 0");
    if (std::abs(a * a + b * b + c * c - 1.0) > default_tolerances().algebra)
      throw std::invalid_argument("TriangleSpec: coefficients not normalized");
  }
};

// P_max of the generalized W state: the squared largest coefficient when it
// dominates the other two (vertex branch), otherwise 4R^2 with R the
// circumradius of the coefficient triangle. Ties return the circumradius
// branch; the two values agree there.
inline GwResult pmax_generalized_w(double a, double b, double c) {
  TriangleSpec t(a, b, c);
  const double aa = t.a * t.a, bb = t.b * t.b, cc = t.c * t.c;
  const double alpha2 = std::max({aa, bb, cc});
  const double rest = aa + bb + cc - alpha2;
  if (alpha2 <= rest) {
    // 16 Area^2 by Heron; vanishes only on the collinear boundary where the
    // branches agree at alpha^2
    const double q = 2.0 * (aa * bb + bb * cc + cc * aa) -
                     (aa * aa + bb * bb + cc * cc);
    if (q < 1e-14) return {alpha2, GwBranch::Circumradius};
    return {4.0 * aa * bb * cc / q, GwBranch::Circumradius};
  }
  return {alpha2, GwBranch::Vertex};
}

// Ordered coefficients and the applicability condition for the cyclic
// quadrangle closed form.
struct QuadrangleSpec {
  std::array<double, 4> coeffs;
  double alpha, beta, gamma, delta;
  bool applicable;

  QuadrangleSpec(double a1, double a2, double a3, double a4)
      : coeffs{a1, a2, a3, a4} {
    for (double v : coeffs)
      if (v < 0.0)
        throw std::invalid_argument("QuadrangleSpec: coefficients must be >= 0");
    const double norm2 = a1 * a1 + a2 * a2 + a3 * a3 + a4 * a4;
    if (std::abs(norm2 - 1.0) > default_tolerances().algebra)
      throw std::invalid_argument("QuadrangleSpec: coefficients not normalized");
    std::array<double, 4> s = coeffs;
    std::sort(s.begin(), s.end(), std::greater<double>());
    alpha = s[0]; beta = s[1]; gamma = s[2]; delta = s[3];
    applicable =
        alpha > 0.0 &&
        alpha * alpha <= beta * beta + gamma * gamma + delta * delta +
                             2.0 * beta * gamma * delta / alpha + 1e-12;
  }
};

// 4R^2 with R the circumradius of the convex quadrangle with the given
// coefficients.
inline double pmax_quadrangle(double a1, double a2, double a3, double a4) {
  QuadrangleSpec q(a1, a2, a3, a4);
  if (!q.applicable)
    throw std::domain_error("pmax_quadrangle: formula branch not applicable");
  const double omega = a1 * a2 + a3 * a4;
  const double r3 = a1 * a1 + a2 * a2 - a3 * a3 - a4 * a4;
  const double denom = 4.0 * omega * omega - r3 * r3;
  if (std::abs(denom) < 1e-14)
    throw std::domain_error("pmax_quadrangle: degenerate quadrangle");
  const double r_sq = (a1 * a2 + a3 * a4) * (a1 * a3 + a2 * a4) *
                      (a1 * a4 + a2 * a3) / denom;
  return 4.0 * r_sq;
}

}  // namespace grovlab
