#pragma once

// The regular phase operator Phi as a truncated operator Fourier series in
// F, its closed-form Fock matrix elements, the number-phase commutator, and
// the Garrison-Wong / classical saw-tooth baselines it generalizes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "regphase/errors.hpp"
#include "regphase/fock.hpp"
#include "regphase/polar.hpp"

namespace regphase {

// Truncation index of an operator series plus its certified residual.
//
// tail_bound is always BoundReport::series_tail(K). When K = dim - 1 every
// further power of F vanishes on the truncated space, so the truncated
// series is complete there; `complete_on_space` records that.
struct SeriesBudget {
  std::size_t K = 1;
  double tail_bound = std::numeric_limits<double>::infinity();
  bool complete_on_space = false;

  static SeriesBudget fixed(std::size_t K, const BoundReport& report, TruncatedSpace space) {
    if (K == 0) throw DomainError("SeriesBudget: K must be >= 1");
    if (K > space.dim() - 1) throw DimensionError("SeriesBudget: K must be <= dim - 1");
    return {K, report.series_tail(K), K == space.dim() - 1};
  }

  // Smallest K with series_tail(K) < target; the tail is strictly decreasing
  // so bisection applies. If no K < dim qualifies, K = dim - 1.
  static SeriesBudget for_target(double target, const BoundReport& report, TruncatedSpace space) {
    if (!(target > 0.0)) throw DomainError("SeriesBudget: target tail must be > 0");
    const std::size_t k_max = space.dim() - 1;
    if (report.series_tail(k_max) >= target) return fixed(k_max, report, space);
    std::size_t lo = 1;
    std::size_t hi = k_max;
    if (report.series_tail(lo) < target) return fixed(lo, report, space);
    while (hi - lo > 1) {
      const std::size_t mid = lo + (hi - lo) / 2;
      (report.series_tail(mid) < target ? hi : lo) = mid;
    }
    return fixed(hi, report, space);
  }
};

// Phi_K = (phi0 + pi) 1 + sum_{k=1}^{K} (i/k) [F^k e^{-ik phi0} - (F^+)^k e^{ik phi0}]
inline FockOperator make_Phi_series(TruncatedSpace space, const PhaseParams& params, const SeriesBudget& budget) {
  if (budget.K == 0 || budget.K > space.dim() - 1) throw DimensionError("make_Phi_series: K out of range");
  const double phi0 = params.phi0();
  Matrix phi = (phi0 + kPi) * Matrix::Identity(space.size(), space.size());
  for (std::size_t k = 1; k <= budget.K; ++k) {
    const auto [fk, fkp] = F_power(space, params, k);
    const Complex c = kI / double(k) * std::polar(1.0, -double(k) * phi0);
    phi += c * fk.matrix() + std::conj(c) * fkp.matrix();
  }
  return {space, phi, OperatorRole::PhaseOp};
}

inline Complex phi_matrix_element(std::size_t r, std::size_t s, const PhaseParams& params) {
  if (r == s) return params.phi0() + kPi;
  const std::size_t k = r > s ? r - s : s - r;
  const double diff = double(s) - double(r);
  return kI / diff * std::sqrt(f_weight(std::min(r, s), k, params.nu())) *
         std::polar(1.0, (double(r) - double(s)) * params.phi0());
}

inline FockOperator phi_closed_form(TruncatedSpace space, const PhaseParams& params) {
  Matrix m(space.size(), space.size());
  for (Eigen::Index r = 0; r < space.size(); ++r) {
    for (Eigen::Index s = 0; s < space.size(); ++s) {
      m(r, s) = phi_matrix_element(std::size_t(r), std::size_t(s), params);
    }
  }
  return {space, m, OperatorRole::PhaseOp};
}

// <r|P_phi|s> = f_{|r-s|}^{1/2}(min(r,s)) e^{i(r-s) phi} / 2pi
inline Complex povm_matrix_element(std::size_t r, std::size_t s, double nu, double phi) {
  const std::size_t k = r > s ? r - s : s - r;
  return std::sqrt(f_weight(std::min(r, s), k, nu)) * std::polar(1.0, (double(r) - double(s)) * phi) / kTwoPi;
}

// (1/2pi) sum_{|k| <= K} F_k e^{-ik phi}
inline FockOperator povm_series(TruncatedSpace space, const PhaseParams& params, std::size_t K, double phi) {
  Matrix p = Matrix::Identity(space.size(), space.size());
  for (std::size_t k = 1; k <= K; ++k) {
    const auto [fk, fkp] = F_power(space, params, k);
    const Complex c = std::polar(1.0, -double(k) * phi);
    p += c * fk.matrix() + std::conj(c) * fkp.matrix();
  }
  return {space, p / kTwoPi, OperatorRole::PovmElement};
}

struct NumberPhaseCommutator {
  FockOperator commutator;  // [N, Phi_K]
  FockOperator P_phi0;      // (1/2pi) sum_{|k| <= K} F_k e^{-ik phi0}
  double identity_residual = 0.0;  // max |[N, Phi_K] - (i - 2 pi i P_phi0)| on the interior block
  // Strong convergence of the infinite series needs nu > 2; at finite dim
  // the identity holds for every nu, so this is informational only.
  bool strong_convergence_regime = false;
};

inline NumberPhaseCommutator make_number_phase_commutator(TruncatedSpace space, const PhaseParams& params,
                                                          const SeriesBudget& budget) {
  const FockOperator phi = make_Phi_series(space, params, budget);
  const FockOperator comm = commutator(make_number(space), phi);
  const FockOperator p0 = povm_series(space, params, budget.K, params.phi0());
  const Matrix expected = kI * Matrix::Identity(space.size(), space.size()) - kTwoPi * kI * p0.matrix();
  const auto interior = static_cast<Eigen::Index>(space.dim() - budget.K);
  return {comm, p0, max_abs_diff(comm.matrix(), expected, interior), params.nu() > 2.0};
}

enum class GwBase { Symmetric, Shifted };

// Symmetric: base interval (-pi, pi); Shifted: (0, 2pi).
inline Complex gw_matrix_element(std::size_t r, std::size_t s, GwBase base) {
  if (base == GwBase::Symmetric) {
    if (r == s) return 0.0;
    const long d = long(r) - long(s);
    const double sign = (d % 2 == 0) ? 1.0 : -1.0;
    return kI * sign / double(d);
  }
  if (r == s) return kPi;
  return kI / (double(s) - double(r));
}

struct HilbertCheck {
  double max_abs_T = 0.0;   // max over r of |T_r|
  double bound = 0.0;       // pi ||chi|| ||psi||
  double max_ratio = 0.0;   // max over r of |T_r| / (pi ||chi_{<r}|| ||psi_{<r}||)
  bool holds = true;
};

// Symmetric partial double sums T_r = sum_{n != m < r} conj(chi_n) i/(m-n) psi_m
// of <chi|(Phi_GW - pi)|psi>, for r = 1..r_max.
inline HilbertCheck hilbert_bilinear_check(const Vector& chi, const Vector& psi, std::size_t r_max) {
  const auto rmax = std::min<Eigen::Index>(static_cast<Eigen::Index>(r_max), std::min(chi.size(), psi.size()));
  HilbertCheck out;
  out.bound = kPi * chi.norm() * psi.norm();
  Complex t = 0.0;
  double nchi = 0.0;
  double npsi = 0.0;
  for (Eigen::Index r = 0; r < rmax; ++r) {
    // grow the square [0, r] by its new row and column
    for (Eigen::Index m = 0; m < r; ++m) {
      t += std::conj(chi(r)) * kI / double(m - r) * psi(m);
      t += std::conj(chi(m)) * kI / double(r - m) * psi(r);
    }
    nchi += std::norm(chi(r));
    npsi += std::norm(psi(r));
    const double abs_t = std::abs(t);
    out.max_abs_T = std::max(out.max_abs_T, abs_t);
    const double local = kPi * std::sqrt(nchi * npsi);
    if (local > 0.0) out.max_ratio = std::max(out.max_ratio, abs_t / local);
    if (abs_t > local * (1.0 + 1e-12) + 1e-300) out.holds = false;
  }
  return out;
}

enum class ClassicalMode { PartialSum, FejerMean };

struct ClassicalPhaseSeries {
  std::size_t n_terms = 1;
  ClassicalMode mode = ClassicalMode::PartialSum;
};

// s_n(phi) = pi - 2 sum_{k<=n} sin(k phi)/k, or its Fejer mean
// sigma_n = (1/n) sum_{m<=n} s_m = pi - 2 sum_{k<=n} (n-k+1)/n sin(k phi)/k.
inline double classical_phase(const ClassicalPhaseSeries& series, double phi) {
  if (series.n_terms == 0) throw DomainError("classical_phase: n_terms must be >= 1");
  const double n = double(series.n_terms);
  double sum = 0.0;
  for (std::size_t k = series.n_terms; k >= 1; --k) {
    const double w = series.mode == ClassicalMode::FejerMean ? (n - double(k) + 1.0) / n : 1.0;
    sum += w * std::sin(double(k) * phi) / double(k);
  }
  return kPi - 2.0 * sum;
}

// The ideal saw-tooth, phi reduced into (0, 2pi]; pi at the jumps.
inline double sawtooth(double phi) {
  double r = std::fmod(phi, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r == 0.0) return kPi;
  return r;
}

// max over a uniform grid on (0, 2pi) of s_n - 2pi.
inline double gibbs_overshoot(std::size_t n_terms, std::size_t grid_points = 100000) {
  const ClassicalPhaseSeries s{n_terms, ClassicalMode::PartialSum};
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 1; j < grid_points; ++j) {
    best = std::max(best, classical_phase(s, kTwoPi * double(j) / double(grid_points)));
  }
  return best - kTwoPi;
}

}  // namespace regphase
