#pragma once

// The phase POVM P_phi, the projector family E_psi, the generalized spectral
// resolution of Phi, and the phase distributions G(phi), g(phi) of a density
// operator, including the nu -> 0 (Loudon) limit.

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "regphase/errors.hpp"
#include "regphase/fock.hpp"
#include "regphase/phase_operator.hpp"
#include "regphase/polar.hpp"
#include "regphase/su11.hpp"

namespace regphase {

// Points in (phi0, phi0 + 2pi], strictly increasing.
class PhaseGrid {
 public:
  PhaseGrid(double phi0, std::vector<double> points) : phi0_(phi0), points_(std::move(points)) {
    if (points_.empty()) throw DomainError("PhaseGrid: no points");
    const double hi = phi0 + kTwoPi;
    for (std::size_t j = 0; j < points_.size(); ++j) {
      if (!(points_[j] > phi0) || points_[j] > hi * (1.0 + 1e-15) + 1e-15) {
        throw DomainError("PhaseGrid: point outside (phi0, phi0 + 2pi]");
      }
      if (j > 0 && !(points_[j] > points_[j - 1])) throw DomainError("PhaseGrid: points must increase");
    }
  }

  // phi0 + 2pi j / n for j = 1..n.
  static PhaseGrid uniform(double phi0, std::size_t n) {
    if (n == 0) throw DomainError("PhaseGrid::uniform: n must be > 0");
    std::vector<double> pts(n);
    for (std::size_t j = 0; j < n; ++j) pts[j] = phi0 + kTwoPi * double(j + 1) / double(n);
    return {phi0, std::move(pts)};
  }

  double phi0() const noexcept { return phi0_; }
  const std::vector<double>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }

  bool is_uniform() const {
    const double h = kTwoPi / double(points_.size());
    for (std::size_t j = 0; j < points_.size(); ++j) {
      if (std::abs(points_[j] - (phi0_ + h * double(j + 1))) > 1e-12 * (1.0 + std::abs(phi0_))) return false;
    }
    return true;
  }

 private:
  double phi0_;
  std::vector<double> points_;
};

class DensityOperator {
 public:
  static constexpr double kTolerance = 1e-12;
  static constexpr double kPsdTolerance = 1e-10;

  DensityOperator(TruncatedSpace space, Matrix entries) : space_(space), entries_(std::move(entries)) {
    if (entries_.rows() != space.size() || entries_.cols() != space.size()) {
      throw InvalidDensity("DensityOperator: shape does not match space");
    }
    if (hermiticity_defect(entries_) > kTolerance) throw InvalidDensity("DensityOperator: not Hermitian");
    const Complex tr = entries_.trace();
    if (std::abs(tr - 1.0) > kTolerance) throw InvalidDensity("DensityOperator: trace != 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kPsdTolerance) {
      throw InvalidDensity("DensityOperator: not positive semidefinite");
    }
  }

  static DensityOperator pure(const FockState& psi) {
    return {psi.space(), psi.coeffs() * psi.coeffs().adjoint()};
  }

  // |v><v| / <v|v> for any nonzero vector, e.g. a truncated phase state.
  static DensityOperator pure(TruncatedSpace space, const Vector& v) { return pure(FockState(space, v)); }

  const TruncatedSpace& space() const noexcept { return space_; }
  const Matrix& matrix() const noexcept { return entries_; }
  double trace() const { return entries_.trace().real(); }

  // e^{iN chi} rho e^{-iN chi}
  DensityOperator rotated(double chi) const {
    Matrix m = entries_;
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index s = 0; s < m.cols(); ++s) m(r, s) *= std::polar(1.0, (double(r) - double(s)) * chi);
    }
    return {space_, m};
  }

 private:
  TruncatedSpace space_;
  Matrix entries_;
};

// Tr[A B] without forming the product.
inline Complex trace_product(const Matrix& a, const Matrix& b) { return a.transpose().cwiseProduct(b).sum(); }

// P_phi = (1/2pi) {1 + sum_{k=1}^{K} [F^k e^{-ik phi} + (F^+)^k e^{ik phi}]}
inline FockOperator make_P_phi(TruncatedSpace space, const PhaseParams& params, const SeriesBudget& budget,
                               double phi) {
  if (budget.K == 0 || budget.K > space.dim() - 1) throw DimensionError("make_P_phi: K out of range");
  return povm_series(space, params, budget.K, phi);
}

inline double poisson_kernel(const DiskPoint& p, double phi0, double phi_prime) {
  const double r = p.rho();
  return (1.0 - r * r) / (1.0 - 2.0 * r * std::cos(p.theta() - phi0 - phi_prime) + r * r) / kTwoPi;
}

// (1/2pi) [1 + 2 sum_{k<=K} rho^k cos(k(theta - phi0 - phi'))]
inline double poisson_kernel_series(const DiskPoint& p, double phi0, double phi_prime, std::size_t K) {
  const double d = p.theta() - phi0 - phi_prime;
  double sum = 0.0;
  double rk = 1.0;
  for (std::size_t k = 1; k <= K; ++k) {
    rk *= p.rho();
    sum += rk * std::cos(double(k) * d);
  }
  return (1.0 + 2.0 * sum) / kTwoPi;
}

// (phi - phi0) reduced into (0, 2pi].
inline double relative_phase(double phi, double phi0) {
  double r = std::fmod(phi - phi0, kTwoPi);
  if (r <= 0.0) r += kTwoPi;
  return r;
}

// 1 on (phi0, psi_cut] (mod 2pi), 0 on (psi_cut, phi0 + 2pi].
inline int classical_projector(double psi_cut, double phi, double phi0) {
  if (!(psi_cut > phi0) || psi_cut > phi0 + kTwoPi) {
    throw DomainError("classical_projector: psi_cut must lie in (phi0, phi0 + 2pi]");
  }
  return relative_phase(phi, phi0) <= psi_cut - phi0 ? 1 : 0;
}

// Both K-truncated series of the quantum projector function, summed as
// written; the imaginary part is roundoff.
inline Complex quantum_projector_kernel_complex(const DiskPoint& p, double psi_cut, double phi0, std::size_t K) {
  const double delta = psi_cut - phi0;
  const Complex w = p.z() * std::polar(1.0, -phi0);
  Complex first = 0.0;
  Complex second = 0.0;
  Complex wk = 1.0;
  for (std::size_t k = 1; k <= K; ++k) {
    wk *= w;
    const double kk = double(k);
    first += kI / kk * (std::polar(1.0, -kk * delta) - 1.0) * wk;
    second += kI / kk * (std::polar(1.0, kk * delta) - 1.0) * std::conj(wk);
  }
  return (delta + first - second) / kTwoPi;
}

inline double quantum_projector_kernel(const DiskPoint& p, double psi_cut, double phi0, std::size_t K) {
  const Complex v = quantum_projector_kernel_complex(p, psi_cut, phi0, K);
  if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v.real()))) {
    throw BoundViolation("quantum_projector_kernel: imaginary part " + std::to_string(v.imag()));
  }
  return v.real();
}

// Summed form: sum w^k/k = -log(1-w) turns both series into arguments,
// e = (1/2pi) {delta - 2 [arg(1 - w) - arg(1 - w e^{-i delta})]}, w = z e^{-i phi0}.
inline double quantum_projector_function(const DiskPoint& p, double psi_cut, double phi0) {
  const double delta = psi_cut - phi0;
  const Complex w = p.z() * std::polar(1.0, -phi0);
  return (delta - 2.0 * (std::arg(1.0 - w) - std::arg(1.0 - w * std::polar(1.0, -delta)))) / kTwoPi;
}

// E_psi = ((psi - phi0)/2pi) 1 + (1/2pi) sum_{0<|k|<=K} (i/k)(e^{-ik(psi-phi0)} - 1) F_k e^{-ik phi0}
inline FockOperator make_E_psi(TruncatedSpace space, const PhaseParams& params, const SeriesBudget& budget,
                               double psi_cut) {
  if (budget.K == 0 || budget.K > space.dim() - 1) throw DimensionError("make_E_psi: K out of range");
  const double phi0 = params.phi0();
  if (psi_cut < phi0 || psi_cut > phi0 + kTwoPi) throw DomainError("make_E_psi: psi must lie in [phi0, phi0 + 2pi]");
  const double delta = psi_cut - phi0;
  Matrix e = delta * Matrix::Identity(space.size(), space.size());
  for (std::size_t k = 1; k <= budget.K; ++k) {
    const auto [fk, fkp] = F_power(space, params, k);
    const double kk = double(k);
    const Complex c = kI / kk * (std::polar(1.0, -kk * delta) - 1.0) * std::polar(1.0, -kk * phi0);
    e += c * fk.matrix() + std::conj(c) * fkp.matrix();
  }
  return {space, e / kTwoPi, OperatorRole::ProjectorFn};
}

struct SpectralResolutionReport {
  double identity_residual = 0.0;  // max |sum P_phi dphi - 1|
  double max_Fk_residual = 0.0;    // max over |k| <= K of max |int e^{ik phi} P_phi dphi - F_k|
  double phi_residual = 0.0;       // max |int psi dE_psi - Phi_K|
};

// Integrals over the base interval on a uniform grid. The P-moments use the
// rectangle rule on the circle; Phi uses the Stieltjes form
// int psi dE_psi = (phi0 + 2pi) E_{phi0+2pi} - int E_psi dpsi with the trapezoid
// rule, exact because E_psi is linear plus a trigonometric polynomial of degree K.
inline SpectralResolutionReport spectral_resolution_check(TruncatedSpace space, const PhaseParams& params,
                                                          const SeriesBudget& budget, const PhaseGrid& grid) {
  if (!grid.is_uniform()) throw DomainError("spectral_resolution_check: grid must be uniform");
  const std::size_t n = grid.size();
  if (n <= 2 * budget.K) throw GridUnderResolved("spectral_resolution_check: need N_phi > 2K");
  const std::vector<Matrix> fk = F_power_table(space, params, budget.K);
  const auto dim = space.size();
  const double h = kTwoPi / double(n);
  const long K = static_cast<long>(budget.K);

  std::vector<Matrix> moments(static_cast<std::size_t>(2 * K + 1), Matrix::Zero(dim, dim));
  Matrix e_integral = Matrix::Zero(dim, dim);
  for (std::size_t j = 0; j < n; ++j) {
    const double phi = grid.points()[j];
    const Matrix p = make_P_phi(space, params, budget, phi).matrix();
    for (long k = -K; k <= K; ++k) moments[std::size_t(k + K)] += h * std::polar(1.0, double(k) * phi) * p;
    // E at phi0 vanishes, so the left trapezoid endpoint drops out.
    const double w = (j + 1 == n) ? 0.5 * h : h;
    e_integral += w * make_E_psi(space, params, budget, phi).matrix();
  }

  SpectralResolutionReport rep;
  const Matrix id = Matrix::Identity(dim, dim);
  rep.identity_residual = (moments[std::size_t(K)] - id).cwiseAbs().maxCoeff();
  for (long k = -K; k <= K; ++k) {
    const Matrix target = k == 0 ? id : k > 0 ? fk[std::size_t(k - 1)] : Matrix(fk[std::size_t(-k - 1)].adjoint());
    rep.max_Fk_residual = std::max(rep.max_Fk_residual, (moments[std::size_t(k + K)] - target).cwiseAbs().maxCoeff());
  }
  const Matrix phi_stieltjes = (grid.phi0() + kTwoPi) * id - e_integral;
  rep.phi_residual = (phi_stieltjes - make_Phi_series(space, params, budget).matrix()).cwiseAbs().maxCoeff();
  return rep;
}

// Tr[rho F^k] for k = 1..K.
inline std::vector<Complex> f_moments(const DensityOperator& rho, const PhaseParams& params, std::size_t K) {
  std::vector<Complex> t(K);
  for (std::size_t k = 1; k <= K; ++k) {
    t[k - 1] = trace_product(rho.matrix(), F_power(rho.space(), params, k).first.matrix());
  }
  return t;
}

// g(phi) = Tr[rho P_phi] from precomputed F-moments.
inline double density_from_moments(const std::vector<Complex>& t, double trace, double phi) {
  Complex s = 0.0;
  for (std::size_t k = 1; k <= t.size(); ++k) s += t[k - 1] * std::polar(1.0, -double(k) * phi);
  return (trace + 2.0 * s.real()) / kTwoPi;
}

// G(phi) = Tr[rho E_phi] from precomputed F-moments.
inline double distribution_from_moments(const std::vector<Complex>& t, double trace, double phi0, double phi) {
  const double delta = phi - phi0;
  Complex s = 0.0;
  for (std::size_t k = 1; k <= t.size(); ++k) {
    const double kk = double(k);
    s += kI / kk * (std::polar(1.0, -kk * delta) - 1.0) * std::polar(1.0, -kk * phi0) * t[k - 1];
  }
  return (delta * trace + 2.0 * s.real()) / kTwoPi;
}

struct PhaseDistribution {
  std::vector<double> phi;
  std::vector<double> G;
  std::vector<double> g;
  double normalization = 0.0;  // rectangle-rule integral of g over the base interval
  double min_g = 0.0;
  double max_G_drop = 0.0;     // largest G(phi_j) - G(phi_{j+1}), > 0 only if G decreases
};

inline PhaseDistribution phase_distribution(const DensityOperator& rho, const PhaseParams& params,
                                            const SeriesBudget& budget, const PhaseGrid& grid) {
  if (!(rho.space().dim() > budget.K)) throw DimensionError("phase_distribution: K out of range");
  const std::vector<Complex> t = f_moments(rho, params, budget.K);
  const double tr = rho.trace();
  PhaseDistribution d;
  d.phi = grid.points();
  d.G.reserve(grid.size());
  d.g.reserve(grid.size());
  for (double phi : grid.points()) {
    d.G.push_back(distribution_from_moments(t, tr, params.phi0(), phi));
    d.g.push_back(density_from_moments(t, tr, phi));
  }
  double prev = grid.phi0();
  d.min_g = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < grid.size(); ++j) {
    d.normalization += d.g[j] * (grid.points()[j] - prev);
    prev = grid.points()[j];
    d.min_g = std::min(d.min_g, d.g[j]);
    if (j > 0) d.max_G_drop = std::max(d.max_G_drop, d.G[j - 1] - d.G[j]);
  }
  return d;
}

// <z|rho|z> with the truncated phase state.
inline double r_function(const DensityOperator& rho, const PhaseParams& params, const DiskPoint& point) {
  const PhaseState z(rho.space(), params, point);
  return z.coeffs().dot(rho.matrix() * z.coeffs()).real();
}

// Angular node count that makes the uniform rule on ring rho exact to eps
// for (Poisson kernel) x (trigonometric polynomial of degree `degree`).
inline std::size_t poisson_ring_nodes(double rho, std::size_t degree, double eps = 1e-15) {
  std::size_t extra = 2;
  if (rho > 0.0) extra += static_cast<std::size_t>(std::ceil(std::log(eps) / std::log(rho)));
  std::size_t n = 2 * degree + 2 + extra;
  return n + (n % 2);
}

// g(phi) through the disk integral
// (nu/2pi) int_0^1 dt int dtheta p_phi(z) (1-t)^{-2} <z|rho|z>.
// The two |z> normalizations contribute (1-t)^{nu+1}, leaving the
// Gauss-Jacobi weight (1-t)^{nu-1}. Rings near the boundary get more angular
// nodes because the Poisson kernel sharpens there.
inline std::vector<double> phase_density_disk(const DensityOperator& rho, const PhaseParams& params,
                                              const DiskQuadrature& quad, const std::vector<double>& phis) {
  if (std::abs(quad.nu() - params.nu()) > 0.0) throw DomainError("phase_density_disk: quadrature nu mismatch");
  const std::size_t dim = rho.space().dim();
  if (quad.radial_exactness() < dim - 1) {
    throw QuadratureUnderResolved("phase_density_disk: need 2 N_r - 1 >= dim - 1");
  }
  std::vector<double> g(phis.size(), 0.0);
  const Matrix& m = rho.matrix();
  for (Eigen::Index i = 0; i < quad.t_nodes().size(); ++i) {
    const double rho_i = std::sqrt(quad.t_nodes()(i));
    const std::size_t nth = poisson_ring_nodes(rho_i, dim - 1);
    // <u|rho|u> on the ring as a trigonometric polynomial sum_d h_d e^{i d theta}
    std::vector<Complex> h(2 * dim - 1, 0.0);
    const Vector u = unnormalized_amplitudes(dim, params.nu(), DiskPoint(rho_i, 0.0));
    for (std::size_t r = 0; r < dim; ++r) {
      for (std::size_t s = 0; s < dim; ++s) {
        h[s - r + dim - 1] += u(Eigen::Index(r)).real() * m(Eigen::Index(r), Eigen::Index(s)) * u(Eigen::Index(s)).real();
      }
    }
    std::vector<double> ring(nth);
    for (std::size_t j = 0; j < nth; ++j) {
      const double th = kTwoPi * double(j) / double(nth);
      Complex v = 0.0;
      for (std::size_t d = 0; d < h.size(); ++d) v += h[d] * std::polar(1.0, (double(d) - double(dim - 1)) * th);
      ring[j] = v.real();
    }
    for (std::size_t q = 0; q < phis.size(); ++q) {
      double acc = 0.0;
      for (std::size_t j = 0; j < nth; ++j) {
        acc += poisson_kernel(DiskPoint(rho_i, kTwoPi * double(j) / double(nth)), 0.0, phis[q]) * ring[j];
      }
      g[q] += quad.t_weights()(i) * acc / double(nth);
    }
  }
  for (double& v : g) v *= quad.nu();
  return g;
}

// Tr[rho |phi><phi|] / 2pi with |phi> = sum_n e^{in phi} |n>.
inline double loudon_density(const DensityOperator& rho, double phi) {
  const Eigen::Index dim = rho.matrix().rows();
  Vector v(dim);
  for (Eigen::Index n = 0; n < dim; ++n) v(n) = std::polar(1.0, double(n) * phi);
  return v.dot(rho.matrix() * v).real() / kTwoPi;
}

struct LoudonLimitReport {
  std::vector<double> nu;
  std::vector<double> max_deviation;  // max over the grid of |g_nu - g_0|
  bool monotone = true;
};

// g_nu with the complete truncated series (K = dim - 1) against the nu = 0
// dyad density, for a decreasing nu sequence.
inline LoudonLimitReport loudon_limit_check(const DensityOperator& rho, const PhaseGrid& grid,
                                            const std::vector<double>& nu_sequence) {
  LoudonLimitReport rep;
  const std::size_t K = rho.space().dim() - 1;
  for (double nu : nu_sequence) {
    const PhaseParams params(nu, grid.phi0());
    const std::vector<Complex> t = f_moments(rho, params, K);
    double worst = 0.0;
    for (double phi : grid.points()) {
      worst = std::max(worst, std::abs(density_from_moments(t, rho.trace(), phi) - loudon_density(rho, phi)));
    }
    if (!rep.max_deviation.empty() && worst > rep.max_deviation.back()) rep.monotone = false;
    rep.nu.push_back(nu);
    rep.max_deviation.push_back(worst);
  }
  return rep;
}

}  // namespace regphase
