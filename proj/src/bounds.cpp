#include "densbound/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "densbound/normal.hpp"
#include "densbound/probe.hpp"

namespace densbound::bounds {

void LocalBoundInput::validate() const {
  if (d < 1) throw std::invalid_argument("invalid params: d must be >= 1");
  if (x0.size() != static_cast<std::size_t>(d) || x.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("invalid params: x0 and x must have length d");
  if (!(t > 0.0)) throw std::invalid_argument("invalid params: t must be > 0");
  if (!(l > 0.0)) throw std::invalid_argument("invalid params: l must be > 0");
  if (!(C > 0.0)) throw std::invalid_argument("drift bound zero");
}

BoundReport local_density_bound(const LocalBoundInput& in) {
  in.validate();
  BoundReport r;
  r.a.reserve(in.d);
  r.z.reserve(in.d);
  r.factor.reserve(in.d);
  r.product = 1.0;
  const double sqt = std::sqrt(in.t);
  for (int j = 0; j < in.d; ++j) {
    const double a = std::min(in.l, std::abs(in.x0[j] - in.x[j]));
    // Same code path as the kernel bound so the identity factor_j ==
    // density_upper_bound(x = a_j) / 2 holds bit-for-bit.
    const double factor = 0.5 * drbm::density_upper_bound({in.C, in.l, in.t, a});
    r.a.push_back(a);
    r.z.push_back(sqt * in.C - a / sqt);
    r.factor.push_back(factor);
    r.product *= factor;
  }
  return r;
}

SharpBound sharp_local_bound(const LocalBoundInput& in, const drbm::SeriesOptions& opts) {
  in.validate();
  double prod = 1.0;
  double prod_hi = 1.0;  // product of (value + tail) upper envelopes
  for (int j = 0; j < in.d; ++j) {
    const double a = std::min(in.l, std::abs(in.x0[j] - in.x[j]));
    const drbm::SeriesResult s = drbm::transition_density_at_zero({in.C, in.l, in.t, a}, opts);
    prod *= s.value;
    prod_hi *= s.value + s.tail_bound;
  }
  const double scale = std::ldexp(1.0, -in.d);  // 1 / 2^d
  return SharpBound{scale * prod, scale * (prod_hi - prod)};
}

GlobalBound global_density_bound(const std::vector<double>& x0, const std::vector<double>& x,
                                 double t, double C, int d) {
  if (d < 1) throw std::invalid_argument("invalid params: d must be >= 1");
  if (x0.size() != static_cast<std::size_t>(d) || x.size() != static_cast<std::size_t>(d))
    throw std::invalid_argument("invalid params: x0 and x must have length d");
  if (!(t > 0.0)) throw std::invalid_argument("invalid params: t must be > 0");
  if (!(C >= 0.0)) throw std::invalid_argument("invalid params: C must be >= 0");
  const double sqt = std::sqrt(t);
  double value = 1.0;
  for (int j = 0; j < d; ++j) {
    const double z = sqt * C - std::abs(x0[j] - x[j]) / sqt;
    value *= normal::std_normal_pdf(z) / sqt + C * normal::std_normal_cdf(z);
  }
  const double crude = std::pow(1.0 / std::sqrt(2.0 * std::numbers::pi * t) + C, d);
  return GlobalBound{value, crude};
}

double lamperti_transform(const ScalarFieldSpec& spec, double y, double quad_tol) {
  auto inv_sigma = [&spec](double u) {
    const double s = spec.sigma(u);
    if (!(s > 0.0)) throw std::domain_error("nonpositive sigma");
    return 1.0 / s;
  };
  if (y == 0.0) return 0.0;
  if (y > 0.0) return probe::quadrature(inv_sigma, 0.0, y, quad_tol);
  return -probe::quadrature(inv_sigma, y, 0.0, quad_tol);
}

double state_dependent_bound_1d(const ScalarFieldSpec& spec, double y0, double y, double t,
                                const Interval& region, double quad_tol) {
  if (!(region.lo <= y && y <= region.hi) || !(region.lo <= y0 && y0 <= region.hi))
    throw std::invalid_argument("invalid params: y and y0 must lie in the region");
  if (!(spec.sigma_min > 0.0) || !(spec.lipschitz >= 0.0) || !(spec.drift_bound >= 0.0))
    throw std::invalid_argument("invalid params: sigma_min > 0, lipschitz >= 0, drift_bound >= 0");

  const double fy = lamperti_transform(spec, y, quad_tol);
  const double fy0 = lamperti_transform(spec, y0, quad_tol);
  const double flo = lamperti_transform(spec, region.lo, quad_tol);
  const double fhi = lamperti_transform(spec, region.hi, quad_tol);

  // Transformed half-width: largest box around F(y) inside the transformed
  // region (F is increasing, so the image of the region is [F(lo), F(hi)]).
  const double l_tilde = std::min(fy - flo, fhi - fy);
  if (!(l_tilde > 0.0)) throw std::invalid_argument("region too small");

  // The transformed drift is b/sigma - sigma'/2 composed with F^{-1};
  // |sigma'| <= lipschitz a.e. gives the bound below. F^{-1} has Lipschitz
  // constant sigma_max, which scales the transformed density back.
  const double c_a = spec.drift_bound / spec.sigma_min + 0.5 * spec.lipschitz;
  if (c_a == 0.0) {
    // Brownian motion with constant sigma: use the drift-free global bound.
    return spec.sigma_max * global_density_bound({fy0}, {fy}, t, 0.0, 1).value;
  }
  const LocalBoundInput in{{fy0}, {fy}, t, c_a, l_tilde, 1};
  return spec.sigma_max * local_density_bound(in).product;
}

}  // namespace densbound::bounds
