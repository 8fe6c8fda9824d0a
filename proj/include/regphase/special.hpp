#pragma once

// Scalar special functions used across the library.

#include <cmath>
#include <cstddef>

#include "regphase/errors.hpp"

namespace regphase {

// log Gamma(x) for x > 0. glibc's lgamma_r avoids the global signgam write.
inline double log_gamma(double x) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

inline double beta_function(double x, double y) {
  return std::exp(log_gamma(x) + log_gamma(y) - log_gamma(x + y));
}

// H_n = 1 + 1/2 + ... + 1/n, H_0 = 0.
inline double harmonic_number(std::size_t n) {
  double h = 0.0;
  for (std::size_t j = n; j >= 1; --j) h += 1.0 / double(j);
  return h;
}

// Riemann zeta for s > 1: direct sum to N-1 plus Euler-Maclaurin tail from N.
inline double riemann_zeta(double s) {
  if (!(s > 1.0)) throw DomainError("riemann_zeta: requires s > 1");
  constexpr int kN = 64;
  double sum = 0.0;
  for (int k = kN - 1; k >= 1; --k) sum += std::pow(double(k), -s);
  const double n = kN;
  sum += std::pow(n, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(n, -s) + s * std::pow(n, -s - 1.0) / 12.0 -
         s * (s + 1.0) * (s + 2.0) * std::pow(n, -s - 3.0) / 720.0;
  return sum;
}

}  // namespace regphase
