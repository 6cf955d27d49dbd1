#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace grovlab {

// Seeded random source for all stochastic pieces (multistart inits, Haar
// sampling, measurement outcomes). Uniform/normal variates are generated
// from raw mt19937_64 words rather than std distributions so a given seed
// yields the same stream under any standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // uniform on [0, 1)
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  std::complex<double> normal_complex() { return {normal(), normal()}; }

  // single-qubit state drawn uniformly on the Bloch sphere
  Eigen::Vector2cd bloch_uniform() {
    const double cos_theta = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * std::numbers::pi);
    const double half = 0.5 * std::acos(cos_theta);
    return {std::cos(half),
            std::exp(std::complex<double>(0.0, phi)) * std::sin(half)};
  }

  // unit 3-vector, uniform on the sphere
  Eigen::Vector3d sphere_uniform() {
    const double z = uniform(-1.0, 1.0);
    const double phi = uniform(0.0, 2.0 * std::numbers::pi);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {r * std::cos(phi), r * std::sin(phi), z};
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace grovlab
