#pragma once

// Scalar normal-law building blocks. Self-contained: the complementary
// error function is implemented in-repo (Cody-style rational
// approximations), so nothing here depends on libm's erf family.

namespace densbound::normal {

// erf(x), erfc(x) and the scaled complement erfcx(x) = exp(x^2) erfc(x).
double erf(double x);
double erfc(double x);
double erfcx(double x);

// phi(z) = exp(-z^2/2) / sqrt(2 pi)
double std_normal_pdf(double z);

// Phi(z). Saturates to exactly 0 / 1 for |z| > 40.
double std_normal_cdf(double z);

// exp(a^2/2) * (1 - Phi(a)), stable for large positive a (Mills ratio
// times sqrt(2 pi) scaling). Defined for negative a as well; throws
// std::overflow_error once exp(a^2/2) itself is not representable.
double scaled_gaussian_tail(double a);

// exp(c) * (Phi(z) - 1) = -exp(c - z^2/2) * scaled_gaussian_tail(z).
// Stable whenever c - z^2/2 stays in the representable exponent range;
// throws std::overflow_error otherwise. Always <= 0.
double stable_exp_times_cdf_deficit(double c, double z);

}  // namespace densbound::normal
