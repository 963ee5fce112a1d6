#pragma once

#include <functional>
#include <vector>

#include "densbound/drbm.hpp"

// Density upper bounds for d-dimensional Ito processes with locally bounded
// drift and identity diffusion, composed from the reflected-kernel bounds,
// plus the 1-D state-dependent-diffusion extension via the Lamperti
// transform.

namespace densbound::bounds {

struct LocalBoundInput {
  std::vector<double> x0;  // initial state, length d
  std::vector<double> x;   // evaluation point, length d
  double t;                // time > 0
  double C;                // drift bound > 0, valid on a region containing B_{l,inf}(x)
  double l;                // half-width > 0
  int d;

  void validate() const;
};

struct BoundReport {
  std::vector<double> a;       // clipped distances min{l, |x0_j - x_j|}
  std::vector<double> z;       // sqrt(t) C - a_j / sqrt(t)
  std::vector<double> factor;  // per-dimension bound factors
  double product;
};

struct SharpBound {
  double value;            // (1/2^d) prod of series densities
  double certified_error;  // propagated series tail error
};

struct GlobalBound {
  double value;  // prod_j (phi(z_j)/sqrt(t) + C Phi(z_j))
  double crude;  // (1/sqrt(2 pi t) + C)^d, always >= value
};

// Closed-form product bound; factor_j = (1/2) density_upper_bound at x = a_j.
BoundReport local_density_bound(const LocalBoundInput& in);

// Series-based bound (1/2^d) prod_j p_{l,t}(a_j, 0).
SharpBound sharp_local_bound(const LocalBoundInput& in, const drbm::SeriesOptions& opts = {});

// Globally bounded drift (C >= 0 allowed, no geometry needed).
GlobalBound global_density_bound(const std::vector<double>& x0, const std::vector<double>& x,
                                 double t, double C, int d);

// A scalar diffusion coefficient with its declared bounds on a region:
// sigma_min <= sigma <= sigma_max and |sigma'| <= lipschitz a.e. there;
// drift_bound bounds |b|. The declarations are trusted, not introspected.
struct ScalarFieldSpec {
  std::function<double(double)> sigma;
  double sigma_min;
  double sigma_max;
  double lipschitz;
  double drift_bound;
};

struct Interval {
  double lo;
  double hi;
};

// Lamperti transform F(y) = int_0^y du / sigma(u), by adaptive quadrature.
// Throws std::domain_error ("nonpositive sigma") if sigma <= 0 is sampled.
double lamperti_transform(const ScalarFieldSpec& spec, double y, double quad_tol = 1e-12);

// Density bound for dY = b(Y)dt + sigma(Y)dW at point y, time t, valid while
// the declared bounds hold on `region`. Transforms to unit diffusion, bounds
// the transformed drift by drift_bound/sigma_min + lipschitz/2, applies the
// local product bound (or the global Gaussian bound when that constant is
// zero), and scales back by sigma_max.
double state_dependent_bound_1d(const ScalarFieldSpec& spec, double y0, double y, double t,
                                const Interval& region, double quad_tol = 1e-12);

}  // namespace densbound::bounds
