#pragma once

#include <cstdint>

// Transition density of a doubly reflected Brownian motion with drift -C
// on [0,l], evaluated at the lower boundary, together with the closed-form
// upper bounds and error terms derived from the series representation.

namespace densbound::drbm {

struct DrbmParams {
  double C;  // drift magnitude, > 0
  double l;  // interval length, > 0
  double t;  // elapsed time, > 0
  double x;  // starting point, in [0,l]

  void validate() const;  // throws std::invalid_argument on violation
};

struct SeriesOptions {
  double tail_tol = 1e-10;     // certified absolute error on the density
  std::int64_t n_max = 1000000;  // hard cap on series terms
};

struct SeriesResult {
  double value;       // density estimate p_{l,t}(x,0)
  std::int64_t n_terms;
  double tail_bound;  // rigorous bound on the discarded remainder
};

// Series summands: f(z) = z^2 cos(zx)/(C^2+z^2) e^{-t z^2/2},
//                  g(z) = C z sin(zx)/(C^2+z^2) e^{-t z^2/2}.
double summand_f(double z, double t, double x, double C);
double summand_g(double z, double t, double x, double C);

// Bound on |sum_{n>N} [f-g](n pi / l)| (raw, before the 2/l exp(Cx-C^2 t/2)
// prefactor): (3/2)(l/pi) sqrt(2 pi / t) (1 - Phi(N pi sqrt(t) / l)).
double series_tail_bound(std::int64_t N, const DrbmParams& p);

// p_{l,t}(x,0) = 2C/(1-e^{-2Cl}) + e^{Cx - C^2 t/2} (2/l) sum_{n>=1}
// [f - g](n pi / l), truncated once the certified tail is below tail_tol.
// Throws std::runtime_error if n_max terms do not suffice.
SeriesResult transition_density_at_zero(const DrbmParams& p,
                                        const SeriesOptions& opts = {});

// I = 2/sqrt(2 pi t) e^{-x^2/2t} + 2C e^{-Cx + tC^2/2}(Phi(sqrt(t)C - x/sqrt(t)) - 1),
// the exact value of (2/l) int_0^inf [f - g](z pi / l) dz.
double integral_I(const DrbmParams& p);

// F = 2 (3 + xC)^2 / (l t C^2), the sum-vs-integral error allowance.
double euler_maclaurin_error_F(const DrbmParams& p);

// Pointwise bound on |f'(z)| + |g'(z)|:
// (4z + x^2 z C^2 + t z^3 + 3 C x z + t C x z^3) e^{-t z^2/2} / C^2.
double derivative_envelope(double z, const DrbmParams& p);

// Closed-form bound on p_{l,t}(x,0):
//   2C e^{-2Cl}/(1-e^{-2Cl}) + (2/sqrt(t)) phi(z) + 2C Phi(z)
//   + 2 e^{Cx - C^2 t/2} (3 + xC)^2/(l t C^2),  z = sqrt(t) C - x/sqrt(t).
double density_upper_bound(const DrbmParams& p);

// Cruder variant with 1/l in place of the first term; always >= the above.
double density_upper_bound_simple(const DrbmParams& p);

}  // namespace densbound::drbm
