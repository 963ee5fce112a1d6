#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "densbound/drbm.hpp"

// Oracles and estimators: adaptive quadrature, the Gaussian-expectation
// closed forms with their overflow-safe rearrangements, the empirical
// infinity-ball density quotient, and histogram-vs-density comparisons.

namespace densbound::probe {

struct DensityEstimate {
  double value;      // hits / (n (2 eps)^d)
  double std_error;  // sqrt(p(1-p)/n) / (2 eps)^d
  double epsilon;
  std::int64_t n;
  std::int64_t hits;
};

// Empirical density at x from terminal samples (row-major, n x d).
// Ball membership is strict: ||s - x||_inf < epsilon.
DensityEstimate empirical_density_at(std::span<const double> samples, std::int64_t d,
                                     std::span<const double> x, double epsilon);

// Adaptive Gauss-Kronrod quadrature of f on [a,b] to absolute tolerance tol.
double quadrature(const std::function<double(double)>& f, double a, double b, double tol);

// Quadrature on [a, +inf) via the substitution z = a + u/(1-u).
double quadrature_to_inf(const std::function<double(double)>& f, double a, double tol);

// E[a^2 cos(bZ)/(a^2+Z^2)] for standard normal Z, via the closed form
// a sqrt(2 pi) e^{-b^2/2} (T(a-b) + T(a+b)) / 2 with T the scaled Gaussian
// tail. Requires a > 0, b >= 0.
double normal_expectation_cos(double a, double b);

// E[Z sin(bZ)/(a^2+Z^2)]: -sqrt(2 pi) e^{-b^2/2} (T(a+b) - T(a-b)) / 2.
double normal_expectation_sin(double a, double b);

// | 2 int_0^inf [f - g] dz  -  closed form | for the DRBM summands;
// the closed form is sqrt(2 pi / t) e^{-x^2/2t}
// + 2 pi C e^{-Cx + tC^2/2}(Phi(sqrt(t)C - x/sqrt(t)) - 1).
double verify_integral_identity(const drbm::DrbmParams& p, double tol);

// Standardized deviation of the zero-boundary histogram bin (out of n_bins
// over [0,l]) against the series density at 0, spread over the bin with the
// reflecting-boundary profile e^{-2Cy}.
double zero_bin_deviation(std::span<const double> samples, const drbm::DrbmParams& p,
                          int n_bins);

// Max standardized bin deviation of samples in [0,l] against the stationary
// law 2C e^{-2Cy}/(1 - e^{-2Cl}), with exact per-bin probabilities.
double stationary_histogram_deviation(std::span<const double> samples, double C,
                                      double l, int n_bins);

}  // namespace densbound::probe
