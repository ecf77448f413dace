#pragma once

#include <cstddef>
#include <utility>

namespace famscan::stats {

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal quantile (Wichura's PPND16 rational approximation,
// accurate to ~1e-15 over (0,1)).
double normal_quantile(double p);

// Two-sided p-value for an asymptotic Z statistic.
double two_sided_p(double z);

// Upper-tail p-value for a 1-df chi-square statistic.
double chisq1_upper_p(double x);

// log of the binomial coefficient.
double log_choose(std::size_t n, std::size_t k);

// Binomial pmf and upper tail P(X >= k), X ~ Bin(n, p). Direct lgamma sums,
// adequate for the n used in the Monte Carlo bands.
double binom_pmf(std::size_t k, std::size_t n, double p);
double binom_upper_tail(std::size_t k, std::size_t n, double p);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);

// Clopper-Pearson exact binomial confidence interval for x successes of n.
std::pair<double, double> clopper_pearson(std::size_t x, std::size_t n, double conf);

// Symmetric "exact binomial" acceptance band around rate p0 at confidence
// conf: the narrowest [lo, hi] on counts k with central coverage >= conf,
// returned as rates k/n. Matches the bands quoted for the calibration gates.
std::pair<double, double> binomial_band(double p0, std::size_t n, double conf);

// Pearson correlation.
double correlation(const double* x, const double* y, std::size_t n);

}  // namespace famscan::stats
