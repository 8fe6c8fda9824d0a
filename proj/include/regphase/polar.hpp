#pragma once

// The nu-polar decomposition A = F sqrt(N + nu), the weight function f_k(n)
// that relates F^k to E^k, and the norm bounds that certify every series
// truncation built on F.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "regphase/errors.hpp"
#include "regphase/fock.hpp"
#include "regphase/special.hpp"

namespace regphase {

class PhaseParams {
 public:
  PhaseParams(double nu, double phi0) : nu_(nu), phi0_(phi0) {
    if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("PhaseParams: nu must be > 0");
    if (!std::isfinite(phi0)) throw DomainError("PhaseParams: phi0 must be finite");
  }

  double nu() const noexcept { return nu_; }
  double phi0() const noexcept { return phi0_; }
  // Bargmann index.
  double kappa() const noexcept { return 0.5 * (nu_ + 1.0); }

  PhaseParams with_phi0(double phi0) const { return {nu_, phi0}; }

 private:
  double nu_;
  double phi0_;
};

// f_k(n) = Gamma(n+1+k) Gamma(n+1+nu) / (Gamma(n+1+nu+k) Gamma(n+1)), in (0, 1].
inline double f_weight(std::size_t n, std::size_t k, double nu) {
  if (k == 0) return 1.0;
  const double x = double(n) + 1.0;
  const double kk = double(k);
  return std::exp(log_gamma(x + kk) - log_gamma(x + nu + kk) + log_gamma(x + nu) - log_gamma(x));
}

// F = E diag(sqrt(n / (n + nu))), so <n|F|n+1> = sqrt((n+1) / (n+1+nu)).
inline std::pair<FockOperator, FockOperator> make_F(TruncatedSpace space, const PhaseParams& params) {
  Matrix f = Matrix::Zero(space.size(), space.size());
  for (Eigen::Index n = 0; n + 1 < space.size(); ++n) {
    const double m = double(n + 1);
    f(n, n + 1) = std::sqrt(m / (m + params.nu()));
  }
  FockOperator F{space, f, OperatorRole::ExpPhase};
  return {F, F.adjoint()};
}

// F^k = diag(f_k^{1/2}(n)) E^k and (F^+)^k = (E^+)^k diag(f_k^{1/2}(n)).
inline std::pair<FockOperator, FockOperator> F_power(TruncatedSpace space, const PhaseParams& params,
                                                     std::size_t k) {
  if (k >= space.dim()) {
    throw DimensionError("F_power: k = " + std::to_string(k) + " must be < dim = " + std::to_string(space.dim()));
  }
  const auto kk = static_cast<Eigen::Index>(k);
  Matrix fk = Matrix::Zero(space.size(), space.size());
  for (Eigen::Index n = 0; n + kk < space.size(); ++n) {
    fk(n, n + kk) = std::sqrt(f_weight(static_cast<std::size_t>(n), k, params.nu()));
  }
  FockOperator Fk{space, fk, OperatorRole::ExpPhase};
  return {Fk, Fk.adjoint()};
}

// Signed power F_k: F^k for k >= 0, (F^+)^{|k|} for k < 0.
inline FockOperator F_signed(TruncatedSpace space, const PhaseParams& params, long k) {
  auto [fk, fkp] = F_power(space, params, static_cast<std::size_t>(k >= 0 ? k : -k));
  return k >= 0 ? fk : fkp;
}

// F^1 ... F^K as dense matrices; entry k-1 holds F^k.
inline std::vector<Matrix> F_power_table(TruncatedSpace space, const PhaseParams& params, std::size_t K) {
  std::vector<Matrix> table;
  table.reserve(K);
  for (std::size_t k = 1; k <= K; ++k) table.push_back(F_power(space, params, k).first.matrix());
  return table;
}

// Uniform norm bounds ||F^k psi||^2, ||(F^+)^k psi||^2 < b_bar / (k + nu)^nu,
// and the certified tail of the phase-operator series they imply.
struct BoundReport {
  double nu = 0.0;
  double moment = 0.0;  // <(N + nu)^nu>_psi
  double b_bar = 0.0;
  double zeta_factor = 0.0;  // zeta(1 + nu/2)

  // sqrt(b_bar) * sum_{k > K} 1 / (k (k + nu)^{nu/2})
  double series_tail(std::size_t K) const { return std::sqrt(b_bar) * tail_sum(K, nu); }

  // Whole-series bound sqrt(b_bar) * zeta(1 + nu/2).
  double series_bound() const { return std::sqrt(b_bar) * zeta_factor; }

  static double tail_sum(std::size_t K, double nu) {
    const double a = 0.5 * nu;
    auto g = [&](double x) { return 1.0 / (x * std::pow(x + nu, a)); };
    auto dg = [&](double x) { return -g(x) / x - a * g(x) / (x + nu); };
    const std::size_t n_switch = std::max<std::size_t>({K + 1, 1000, static_cast<std::size_t>(20.0 * nu) + 1});
    double direct = 0.0;
    for (std::size_t k = n_switch - 1; k > K; --k) direct += g(double(k));
    // Euler-Maclaurin from n_switch; the integral of g on [N, inf) is
    // sum_j binom(-a, j) nu^j N^{-(a+j)} / (a+j), convergent for N > nu.
    const double N = double(n_switch);
    double integral = 0.0;
    double coeff = 1.0;
    for (int j = 0; j < 60; ++j) {
      const double term = coeff * std::pow(nu / N, j) * std::pow(N, -a) / (a + j);
      integral += term;
      if (std::abs(term) < 1e-18 * std::abs(integral)) break;
      coeff *= (-a - j) / double(j + 1);
    }
    return direct + integral + 0.5 * g(N) - dg(N) / 12.0;
  }
};

inline BoundReport norm_bound_report(const FockState& psi, const PhaseParams& params) {
  const double nu = params.nu();
  BoundReport r;
  r.nu = nu;
  for (Eigen::Index n = 0; n < psi.coeffs().size(); ++n) {
    r.moment += std::pow(double(n) + nu, nu) * std::norm(psi[n]);
  }
  r.b_bar = std::exp(nu + 1.0 / 6.0 + log_gamma(1.0 + nu)) + std::exp(0.25) * std::sqrt(1.0 + nu) * r.moment;
  r.zeta_factor = riemann_zeta(1.0 + 0.5 * nu);
  return r;
}

struct PointwiseBoundReport {
  double max_ratio_vacuum = 0.0;   // f_k(0) / [Gamma(1+nu) e^{nu+1/6} / (k+nu)^nu]
  double max_ratio_excited = 0.0;  // f_k(n) / [e^{1/4} sqrt(1+nu) (n+nu)^nu / (k+nu)^nu], n >= 1
  double max_ratio_single = 0.0;   // f_k(n) / [b_nu (n+nu)^nu / (k+nu)^nu], only for nu >= 1
  bool single_formula_checked = false;
  std::size_t points = 0;

  double max_ratio() const { return std::max({max_ratio_vacuum, max_ratio_excited, max_ratio_single}); }
};

// Pointwise f_k(n) bounds on 0 <= n <= nmax, 1 <= k <= kmax. A ratio >= 1
// means f_weight is wrong, so it throws BoundViolation.
inline PointwiseBoundReport check_pointwise_bounds(std::size_t nmax, std::size_t kmax, double nu) {
  if (!(nu > 0.0)) throw DomainError("check_pointwise_bounds: nu must be > 0");
  PointwiseBoundReport rep;
  rep.single_formula_checked = nu >= 1.0;
  const double log_vac = log_gamma(1.0 + nu) + nu + 1.0 / 6.0;
  const double log_exc = 0.25 + 0.5 * std::log1p(nu);
  const double log_b_nu = 0.25 + 0.5 * std::log(kTwoPi * nu);
  for (std::size_t k = 1; k <= kmax; ++k) {
    const double log_kden = nu * std::log(double(k) + nu);
    for (std::size_t n = 0; n <= nmax; ++n) {
      const double log_f = std::log(f_weight(n, k, nu));
      const double log_num = nu * std::log(double(n) + nu);
      if (n == 0) {
        rep.max_ratio_vacuum = std::max(rep.max_ratio_vacuum, std::exp(log_f - log_vac + log_kden));
      } else {
        rep.max_ratio_excited = std::max(rep.max_ratio_excited, std::exp(log_f - log_exc - log_num + log_kden));
      }
      if (rep.single_formula_checked) {
        rep.max_ratio_single = std::max(rep.max_ratio_single, std::exp(log_f - log_b_nu - log_num + log_kden));
      }
      ++rep.points;
    }
  }
  if (rep.max_ratio() >= 1.0) {
    throw BoundViolation("check_pointwise_bounds: f_k(n) bound violated, max ratio " +
                         std::to_string(rep.max_ratio()));
  }
  return rep;
}

}  // namespace regphase
