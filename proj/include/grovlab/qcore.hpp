#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "grovlab/config.hpp"

namespace grovlab {

using Amplitude = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;
using Qubit1 = Eigen::Vector2cd;

// Dense storage only; states beyond this are out of scope.
inline constexpr int kMaxQubits = 10;

namespace detail {

inline void check_qubit_count(int n) {
  if (n < 1 || n > kMaxQubits)
    throw std::invalid_argument("qubit count must be in [1, " +
                                std::to_string(kMaxQubits) + "], got " +
                                std::to_string(n));
}

}  // namespace detail

// Basis convention: qubit 0 is the leftmost ket symbol, so the amplitude
// index is the big-endian reading of |q0 q1 ... q_{n-1}>. Qubit i therefore
// owns bit (n-1-i) of the index.
inline int qubit_bit(std::size_t index, int qubit, int n_qubits) {
  return static_cast<int>((index >> (n_qubits - 1 - qubit)) & 1u);
}

inline std::size_t flip_qubit(std::size_t index, int qubit, int n_qubits) {
  return index ^ (std::size_t{1} << (n_qubits - 1 - qubit));
}

// n-qubit pure state. Immutable after construction; the constructor rejects
// vectors that are not unit-norm within the algebraic tolerance.
class PureState {
 public:
  PureState(int n_qubits, Vector amplitudes)
      : n_(n_qubits), amps_(std::move(amplitudes)) {
    detail::check_qubit_count(n_);
    if (amps_.size() != dim())
      throw std::invalid_argument("amplitude vector has length " +
                                  std::to_string(amps_.size()) +
                                  ", expected 2^" + std::to_string(n_));
    const double norm_err = std::abs(amps_.squaredNorm() - 1.0);
    if (norm_err > default_tolerances().algebra)
      throw std::invalid_argument("state is not normalized (|1 - norm^2| = " +
                                  std::to_string(norm_err) + ")");
  }

  // normalizes the input instead of rejecting it; reports the deviation
  static PureState normalized(int n_qubits, Vector raw,
                              double* norm_deviation = nullptr) {
    const double nrm = raw.norm();
    if (nrm <= 0.0) throw std::invalid_argument("cannot normalize zero vector");
    if (norm_deviation) *norm_deviation = std::abs(nrm - 1.0);
    return PureState(n_qubits, raw / nrm);
  }

  static PureState basis_state(int n_qubits, std::size_t index) {
    detail::check_qubit_count(n_qubits);
    Vector v = Vector::Zero(std::int64_t{1} << n_qubits);
    v(static_cast<std::int64_t>(index)) = 1.0;
    return PureState(n_qubits, std::move(v));
  }

  int n_qubits() const { return n_; }
  std::int64_t dim() const { return std::int64_t{1} << n_; }
  const Vector& amplitudes() const { return amps_; }
  Amplitude amplitude(std::size_t index) const {
    return amps_(static_cast<std::int64_t>(index));
  }

 private:
  int n_;
  Vector amps_;
};

enum class PauliLabel { I, X, Y, Z, Custom };

// Single-qubit operator; unitarity is validated for every label except a
// custom non-unitary (which apply_1q refuses anyway).
class Operator1Q {
 public:
  Operator1Q(Eigen::Matrix2cd m, PauliLabel label = PauliLabel::Custom)
      : m_(std::move(m)), label_(label) {}

  static Operator1Q identity() {
    return {Eigen::Matrix2cd::Identity(), PauliLabel::I};
  }
  static Operator1Q pauli_x() {
    Eigen::Matrix2cd m;
    m << 0, 1, 1, 0;
    return {m, PauliLabel::X};
  }
  static Operator1Q pauli_y() {
    Eigen::Matrix2cd m;
    m << Amplitude(0, 0), Amplitude(0, -1), Amplitude(0, 1), Amplitude(0, 0);
    return {m, PauliLabel::Y};
  }
  static Operator1Q pauli_z() {
    Eigen::Matrix2cd m;
    m << 1, 0, 0, -1;
    return {m, PauliLabel::Z};
  }

  const Eigen::Matrix2cd& matrix() const { return m_; }
  PauliLabel label() const { return label_; }

  bool is_unitary(double tol = default_tolerances().algebra) const {
    return (m_.adjoint() * m_ - Eigen::Matrix2cd::Identity())
               .cwiseAbs()
               .maxCoeff() <= tol;
  }

 private:
  Eigen::Matrix2cd m_;
  PauliLabel label_;
};

inline const Eigen::Matrix2cd& pauli_matrix(int i) {
  static const Eigen::Matrix2cd sigma[3] = {
      Operator1Q::pauli_x().matrix(), Operator1Q::pauli_y().matrix(),
      Operator1Q::pauli_z().matrix()};
  return sigma[i];
}

// n-qubit density matrix. Hermiticity and unit trace are enforced on
// construction; positivity is a property checked on demand (partial traces
// of valid states cannot violate it).
class DensityMatrix {
 public:
  DensityMatrix(int n_qubits, Matrix m) : n_(n_qubits), m_(std::move(m)) {
    detail::check_qubit_count(n_);
    if (m_.rows() != dim() || m_.cols() != dim())
      throw std::invalid_argument("density matrix dimension mismatch");
    const double tol = default_tolerances().algebra;
    if ((m_ - m_.adjoint()).cwiseAbs().maxCoeff() > tol)
      throw std::invalid_argument("density matrix is not Hermitian");
    if (std::abs(m_.trace() - Amplitude(1.0)) > tol)
      throw std::invalid_argument("density matrix trace is not 1");
  }

  static DensityMatrix from_pure(const PureState& psi) {
    return {psi.n_qubits(),
            psi.amplitudes() * psi.amplitudes().adjoint()};
  }

  int n_qubits() const { return n_; }
  std::int64_t dim() const { return std::int64_t{1} << n_; }
  const Matrix& matrix() const { return m_; }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
  }

 private:
  int n_;
  Matrix m_;
};

// Kronecker product with the qubit-0-leftmost convention: qubits of `a`
// precede qubits of `b`.
inline PureState tensor(const PureState& a, const PureState& b) {
  const std::int64_t da = a.dim(), db = b.dim();
  Vector out(da * db);
  for (std::int64_t i = 0; i < da; ++i)
    out.segment(i * db, db) = a.amplitude(i) * b.amplitudes();
  return PureState(a.n_qubits() + b.n_qubits(), std::move(out));
}

inline Matrix tensor(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::int64_t i = 0; i < a.rows(); ++i)
    for (std::int64_t j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

// (I x ... x op x ... x I)|state>, op acting on `target`. Restricted to
// unitary operators so the result is again a valid PureState.
inline PureState apply_1q(const PureState& state, const Operator1Q& op,
                          int target) {
  if (target < 0 || target >= state.n_qubits())
    throw std::out_of_range("apply_1q: target qubit out of range");
  if (!op.is_unitary())
    throw std::invalid_argument("apply_1q: operator is not unitary");
  const auto& m = op.matrix();
  const int n = state.n_qubits();
  Vector out(state.dim());
  for (std::int64_t i = 0; i < state.dim(); ++i) {
    const std::size_t idx = static_cast<std::size_t>(i);
    if (qubit_bit(idx, target, n) == 0) {
      const std::int64_t j =
          static_cast<std::int64_t>(flip_qubit(idx, target, n));
      out(i) = m(0, 0) * state.amplitude(idx) + m(0, 1) * state.amplitude(j);
      out(j) = m(1, 0) * state.amplitude(idx) + m(1, 1) * state.amplitude(j);
    }
  }
  return PureState(n, std::move(out));
}

// Reduced density matrix on `keep` (strictly increasing qubit indices).
inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   const std::vector<int>& keep) {
  const int n = rho.n_qubits();
  if (keep.empty()) throw std::invalid_argument("partial_trace: empty keep set");
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] < 0 || keep[k] >= n)
      throw std::invalid_argument("partial_trace: qubit index out of range");
    if (k > 0 && keep[k] <= keep[k - 1])
      throw std::invalid_argument(
          "partial_trace: keep set must be strictly increasing");
  }

  const int m = static_cast<int>(keep.size());
  std::vector<int> traced;
  for (int q = 0; q < n; ++q)
    if (std::find(keep.begin(), keep.end(), q) == keep.end())
      traced.push_back(q);

  // full index from the kept-qubit index, the traced-qubit index and the
  // bit maps established above
  auto embed = [&](std::size_t kept_idx, std::size_t traced_idx) {
    std::size_t full = 0;
    for (int k = 0; k < m; ++k)
      if ((kept_idx >> (m - 1 - k)) & 1u)
        full |= std::size_t{1} << (n - 1 - keep[k]);
    for (std::size_t t = 0; t < traced.size(); ++t)
      if ((traced_idx >> (traced.size() - 1 - t)) & 1u)
        full |= std::size_t{1} << (n - 1 - traced[t]);
    return full;
  };

  const std::int64_t dk = std::int64_t{1} << m;
  const std::int64_t dt = std::int64_t{1} << traced.size();
  Matrix out = Matrix::Zero(dk, dk);
  for (std::int64_t i = 0; i < dk; ++i)
    for (std::int64_t j = 0; j < dk; ++j) {
      Amplitude sum = 0.0;
      for (std::int64_t t = 0; t < dt; ++t)
        sum += rho.matrix()(
            static_cast<std::int64_t>(embed(static_cast<std::size_t>(i),
                                            static_cast<std::size_t>(t))),
            static_cast<std::int64_t>(embed(static_cast<std::size_t>(j),
                                            static_cast<std::size_t>(t))));
      out(i, j) = sum;
    }
  // clean up the tiny anti-Hermitian noise so the constructor invariant holds
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(m, std::move(out));
}

inline DensityMatrix partial_trace(const PureState& psi,
                                   const std::vector<int>& keep) {
  return partial_trace(DensityMatrix::from_pure(psi), keep);
}

inline Amplitude inner(const PureState& a, const PureState& b) {
  if (a.n_qubits() != b.n_qubits())
    throw std::invalid_argument("inner: qubit count mismatch");
  return a.amplitudes().dot(b.amplitudes());  // Eigen dot conjugates the left
}

// |<a|b>|^2
inline double fidelity(const PureState& a, const PureState& b) {
  return std::norm(inner(a, b));
}

// List of n single-qubit unit vectors |e_1>...|e_n>; the candidate
// maximizer in the product-overlap problem.
class ProductState {
 public:
  explicit ProductState(std::vector<Qubit1> factors)
      : factors_(std::move(factors)) {
    for (const auto& f : factors_)
      if (std::abs(f.squaredNorm() - 1.0) > default_tolerances().algebra)
        throw std::invalid_argument("product factor is not unit-norm");
  }

  int n_qubits() const { return static_cast<int>(factors_.size()); }
  const std::vector<Qubit1>& factors() const { return factors_; }
  const Qubit1& factor(int i) const { return factors_.at(i); }

  PureState to_pure() const {
    Vector v = Vector::Ones(1);
    for (const auto& f : factors_) {
      Vector next(v.size() * 2);
      for (std::int64_t i = 0; i < v.size(); ++i) {
        next(2 * i) = v(i) * f(0);
        next(2 * i + 1) = v(i) * f(1);
      }
      v.swap(next);
    }
    return PureState(n_qubits(), std::move(v));
  }

 private:
  std::vector<Qubit1> factors_;
};

// <e_1| x ... x <e_n| psi> -- |result|^2 is a candidate P_max value.
inline Amplitude overlap_product(const PureState& state,
                                 const ProductState& factors) {
  if (factors.n_qubits() != state.n_qubits())
    throw std::invalid_argument("overlap_product: qubit count mismatch");
  Amplitude acc = 0.0;
  const int n = state.n_qubits();
  for (std::int64_t i = 0; i < state.dim(); ++i) {
    Amplitude coeff = state.amplitude(static_cast<std::size_t>(i));
    if (coeff == Amplitude(0.0)) continue;
    for (int q = 0; q < n; ++q)
      coeff *= std::conj(
          factors.factor(q)(qubit_bit(static_cast<std::size_t>(i), q, n)));
    acc += coeff;
  }
  return acc;
}

// Tr[rho P_1 x ... x P_n] with P_i the projector onto factor i; equals
// |overlap_product|^2 for pure rho.
inline double product_projector_expectation(const DensityMatrix& rho,
                                            const ProductState& factors) {
  if (factors.n_qubits() != rho.n_qubits())
    throw std::invalid_argument("projector expectation: qubit count mismatch");
  const Vector w = factors.to_pure().amplitudes();
  return std::real(Amplitude(w.adjoint() * rho.matrix() * w));
}

// Bloch vector of a one-qubit density matrix.
inline Eigen::Vector3d bloch_vector(const DensityMatrix& rho1q) {
  if (rho1q.n_qubits() != 1)
    throw std::invalid_argument("bloch_vector needs a 1-qubit state");
  Eigen::Vector3d r;
  for (int i = 0; i < 3; ++i)
    r(i) = std::real((rho1q.matrix() * pauli_matrix(i)).trace());
  return r;
}

// |s> with Bloch angles (theta, phi): cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>
inline Qubit1 bloch_state(double theta, double phi) {
  return {std::cos(0.5 * theta),
          std::exp(Amplitude(0.0, phi)) * std::sin(0.5 * theta)};
}

// Bloch vector of a pure single-qubit state.
inline Eigen::Vector3d bloch_of(const Qubit1& q) {
  const Amplitude a = q(0), b = q(1);
  return {2.0 * std::real(std::conj(a) * b), 2.0 * std::imag(std::conj(a) * b),
          std::norm(a) - std::norm(b)};
}

// Inverse of bloch_of for unit vectors.
inline Qubit1 qubit_from_bloch(const Eigen::Vector3d& s) {
  const double theta = std::acos(std::clamp(s(2), -1.0, 1.0));
  const double phi = std::atan2(s(1), s(0));
  return bloch_state(theta, phi);
}

}  // namespace grovlab
