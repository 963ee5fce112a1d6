#include "densbound/drbm.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "densbound/normal.hpp"

namespace densbound::drbm {

namespace {
constexpr double kPi = std::numbers::pi;

void require_positive_drift(double C) {
  if (!(C > 0.0)) throw std::invalid_argument("drift bound zero");
}
}  // namespace

void DrbmParams::validate() const {
  if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("invalid params: C must be > 0");
  if (!(l > 0.0) || !std::isfinite(l)) throw std::invalid_argument("invalid params: l must be > 0");
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("invalid params: t must be > 0");
  if (!(x >= 0.0 && x <= l)) throw std::invalid_argument("invalid params: x must lie in [0,l]");
}

double summand_f(double z, double t, double x, double C) {
  return z * z * std::cos(z * x) / (C * C + z * z) * std::exp(-0.5 * t * z * z);
}

double summand_g(double z, double t, double x, double C) {
  return C * z * std::sin(z * x) / (C * C + z * z) * std::exp(-0.5 * t * z * z);
}

double series_tail_bound(std::int64_t N, const DrbmParams& p) {
  // |f - g| <= (3/2) e^{-t z^2/2}: |cos| <= 1 and Cz/(C^2+z^2) <= 1/2. The
  // envelope decreases in z, so the tail sum is at most (l/pi) times the
  // integral of the envelope from N pi / l.
  const double arg = static_cast<double>(N) * kPi * std::sqrt(p.t) / p.l;
  const double deficit = 0.5 * normal::erfc(arg / std::numbers::sqrt2);  // 1 - Phi(arg)
  return 1.5 * (p.l / kPi) * std::sqrt(2.0 * kPi / p.t) * deficit;
}

SeriesResult transition_density_at_zero(const DrbmParams& p, const SeriesOptions& opts) {
  p.validate();
  if (!(opts.tail_tol > 0.0) || opts.n_max < 1)
    throw std::invalid_argument("invalid params: tail_tol > 0 and n_max >= 1 required");

  const double prefactor = std::exp(p.C * p.x - 0.5 * p.C * p.C * p.t);
  const double scale = prefactor * 2.0 / p.l;  // maps raw sum to density units
  const double constant = 2.0 * p.C / (1.0 - std::exp(-2.0 * p.C * p.l));

  // Terms oscillate in sign; Neumaier-compensated accumulation keeps the
  // rounding error below the certified tail.
  double sum = 0.0, comp = 0.0;
  std::int64_t n = 0;
  double tail = series_tail_bound(0, p);
  while (scale * tail > opts.tail_tol) {
    if (n >= opts.n_max) throw std::runtime_error("no convergence: series cap reached");
    ++n;
    const double z = static_cast<double>(n) * kPi / p.l;
    const double term = summand_f(z, p.t, p.x, p.C) - summand_g(z, p.t, p.x, p.C);
    const double s = sum + term;
    comp += (std::abs(sum) >= std::abs(term)) ? (sum - s) + term : (term - s) + sum;
    sum = s;
    tail = series_tail_bound(n, p);
  }
  return SeriesResult{constant + scale * (sum + comp), n, scale * tail};
}

double integral_I(const DrbmParams& p) {
  const double gauss = 2.0 / std::sqrt(2.0 * kPi * p.t) * std::exp(-p.x * p.x / (2.0 * p.t));
  const double deficit = normal::stable_exp_times_cdf_deficit(
      -p.C * p.x + 0.5 * p.t * p.C * p.C, std::sqrt(p.t) * p.C - p.x / std::sqrt(p.t));
  return gauss + 2.0 * p.C * deficit;
}

double euler_maclaurin_error_F(const DrbmParams& p) {
  require_positive_drift(p.C);
  const double s = 3.0 + p.x * p.C;
  return 2.0 * s * s / (p.l * p.t * p.C * p.C);
}

double derivative_envelope(double z, const DrbmParams& p) {
  require_positive_drift(p.C);
  const double z3 = z * z * z;
  const double poly = 4.0 * z + p.x * p.x * z * p.C * p.C + p.t * z3 +
                      3.0 * p.C * p.x * z + p.t * p.C * p.x * z3;
  return poly * std::exp(-0.5 * p.t * z * z) / (p.C * p.C);
}

double density_upper_bound(const DrbmParams& p) {
  require_positive_drift(p.C);
  const double e2cl = std::exp(-2.0 * p.C * p.l);
  const double z = std::sqrt(p.t) * p.C - p.x / std::sqrt(p.t);
  return 2.0 * p.C * e2cl / (1.0 - e2cl) +
         2.0 / std::sqrt(p.t) * normal::std_normal_pdf(z) +
         2.0 * p.C * normal::std_normal_cdf(z) +
         std::exp(p.C * p.x - 0.5 * p.C * p.C * p.t) * euler_maclaurin_error_F(p);
}

double density_upper_bound_simple(const DrbmParams& p) {
  require_positive_drift(p.C);
  const double z = std::sqrt(p.t) * p.C - p.x / std::sqrt(p.t);
  return 1.0 / p.l + 2.0 / std::sqrt(p.t) * normal::std_normal_pdf(z) +
         2.0 * p.C * normal::std_normal_cdf(z) +
         std::exp(p.C * p.x - 0.5 * p.C * p.C * p.t) * euler_maclaurin_error_F(p);
}

}  // namespace densbound::drbm
