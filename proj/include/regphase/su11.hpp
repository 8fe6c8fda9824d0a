#pragma once

// Regular phase states |z> (eigenstates of F, SU(1,1) coherent states in the
// Holstein-Primakoff realization), their number statistics, the su(1,1)
// generators, a Gauss-Jacobi x uniform-angle quadrature on the unit disk, and
// the nu-independent quantum phase function.

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>

#include "regphase/errors.hpp"
#include "regphase/fock.hpp"
#include "regphase/polar.hpp"
#include "regphase/special.hpp"

namespace regphase {

class DiskPoint {
 public:
  DiskPoint(double rho, double theta) : rho_(rho) {
    if (!(rho >= 0.0) || !(rho < 1.0)) throw DomainError("DiskPoint: rho must lie in [0, 1)");
    if (!std::isfinite(theta)) throw DomainError("DiskPoint: theta must be finite");
    theta_ = std::fmod(theta, kTwoPi);
    if (theta_ < 0.0) theta_ += kTwoPi;
    if (theta_ >= kTwoPi) theta_ = 0.0;
  }

  static DiskPoint from_complex(Complex z) { return {std::abs(z), std::arg(z)}; }

  double rho() const noexcept { return rho_; }
  double theta() const noexcept { return theta_; }
  Complex z() const { return std::polar(rho_, theta_); }

 private:
  double rho_;
  double theta_ = 0.0;
};

// log c_n^2 with c_n^2 = Gamma(nu+1+n) / (Gamma(nu+1) n!) = (nu+1)_n / n!
inline double log_cn_squared(std::size_t n, double nu) {
  return log_gamma(nu + 1.0 + double(n)) - log_gamma(nu + 1.0) - log_gamma(double(n) + 1.0);
}

// sum_{n >= first} (1 - t)^{nu+1} (nu+1)_n / n! t^n, summed directly.
inline double negative_binomial_tail(std::size_t first, double t, double nu) {
  if (t <= 0.0) return first == 0 ? 1.0 : 0.0;
  const double log_t = std::log(t);
  double term = std::exp((nu + 1.0) * std::log1p(-t) + log_cn_squared(first, nu) + double(first) * log_t);
  double sum = 0.0;
  for (std::size_t n = first; n < first + 50'000'000; ++n) {
    sum += term;
    const double ratio = t * (nu + 1.0 + double(n)) / (double(n) + 1.0);
    if (ratio < 1.0 && term < 1e-18 * sum) break;
    if (ratio < 1.0 && sum == 0.0 && term < 1e-300) break;
    term *= ratio;
  }
  return sum;
}

class PhaseState {
 public:
  static constexpr double kTailWarning = 1e-10;

  PhaseState(TruncatedSpace space, PhaseParams params, DiskPoint point)
      : space_(space), params_(params), point_(point), coeffs_(space.size()) {
    const double nu = params.nu();
    const double rho = point.rho();
    const double t = rho * rho;
    const double log_norm = 0.5 * (nu + 1.0) * std::log1p(-t);
    for (Eigen::Index n = 0; n < space.size(); ++n) {
      double mag = 0.0;
      if (n == 0) {
        mag = std::exp(log_norm);
      } else if (rho > 0.0) {
        mag = std::exp(log_norm + 0.5 * log_cn_squared(std::size_t(n), nu) + double(n) * std::log(rho));
      }
      coeffs_(n) = std::polar(mag, double(n) * point.theta());
    }
    tail_mass_ = negative_binomial_tail(space.dim(), t, nu);
  }

  const TruncatedSpace& space() const noexcept { return space_; }
  const PhaseParams& params() const noexcept { return params_; }
  const DiskPoint& point() const noexcept { return point_; }
  // w_n for n < dim; not renormalized, so ||coeffs||^2 = 1 - tail_mass.
  const Vector& coeffs() const noexcept { return coeffs_; }
  double tail_mass() const noexcept { return tail_mass_; }
  bool tail_warning() const noexcept { return tail_mass_ > kTailWarning; }

  // ||F|z> - z|z>|| on the truncated space; only the top level contributes.
  double eigen_residual() const {
    const auto [F, Fp] = make_F(space_, params_);
    return (F.apply(coeffs_) - point_.z() * coeffs_).norm();
  }

 private:
  TruncatedSpace space_;
  PhaseParams params_;
  DiskPoint point_;
  Vector coeffs_;
  double tail_mass_ = 0.0;
};

inline PhaseState make_phase_state(TruncatedSpace space, const PhaseParams& params, const DiskPoint& point) {
  return {space, params, point};
}

struct NumberStats {
  double mean = 0.0;
  double variance = 0.0;
  double mandel_q = 0.0;
  // Same moments from sum n |w_n|^2, sum n^2 |w_n|^2 over the stored levels.
  double direct_mean = 0.0;
  double direct_variance = 0.0;
  double max_relative_discrepancy = 0.0;
};

inline NumberStats number_stats(const PhaseState& state) {
  if (state.tail_mass() >= PhaseState::kTailWarning) {
    throw TailMassError("number_stats: tail mass " + std::to_string(state.tail_mass()) + " too large for dim " +
                        std::to_string(state.space().dim()));
  }
  const double nu = state.params().nu();
  const double t = state.point().rho() * state.point().rho();
  NumberStats s;
  s.mean = (1.0 + nu) * t / (1.0 - t);
  s.variance = (1.0 + nu) * t / ((1.0 - t) * (1.0 - t));
  s.mandel_q = t / (1.0 - t);
  double m1 = 0.0;
  double m2 = 0.0;
  for (Eigen::Index n = state.coeffs().size() - 1; n >= 0; --n) {
    const double p = std::norm(state.coeffs()(n));
    m1 += double(n) * p;
    m2 += double(n) * double(n) * p;
  }
  s.direct_mean = m1;
  s.direct_variance = m2 - m1 * m1;
  auto rel = [](double a, double b) { return b == 0.0 ? std::abs(a) : std::abs(a - b) / std::abs(b); };
  s.max_relative_discrepancy = std::max(rel(s.direct_mean, s.mean), rel(s.direct_variance, s.variance));
  return s;
}

struct Su11Generators {
  FockOperator Kminus;  // F (N + nu) = A sqrt(N + nu)
  FockOperator Kplus;   // (N + nu) F^+
  FockOperator K0;      // N + kappa

  FockOperator K1() const { return Complex(0.5) * (Kplus + Kminus); }
  FockOperator K2() const { return Complex(0.0, -0.5) * (Kplus - Kminus); }
  FockOperator casimir() const {
    const FockOperator k1 = K1();
    const FockOperator k2 = K2();
    return K0 * K0 - k1 * k1 - k2 * k2;
  }
};

inline Su11Generators make_su11_generators(TruncatedSpace space, const PhaseParams& params) {
  const auto [F, Fp] = make_F(space, params);
  const RealVector n = RealVector::LinSpaced(space.size(), 0.0, double(space.size() - 1));
  const FockOperator shifted = FockOperator::diagonal(space, n.array() + params.nu());
  const FockOperator kminus = (F * shifted).with_role(OperatorRole::Ladder);
  return {kminus, kminus.adjoint(), FockOperator::diagonal(space, n.array() + params.kappa())};
}

// exp(xi e^{i theta} K+ - xi e^{-i theta} K-) |0> with rho = tanh(xi),
// evaluated by scaling-and-squaring on the truncated generators.
inline Vector displacement_state(TruncatedSpace space, const PhaseParams& params, const DiskPoint& point) {
  const Su11Generators g = make_su11_generators(space, params);
  const double xi = std::atanh(point.rho());
  const Complex c = std::polar(xi, point.theta());
  const Matrix gen = c * g.Kplus.matrix() - std::conj(c) * g.Kminus.matrix();
  const Matrix u = gen.exp();
  return u.col(0);
}

// Nodes and weights for nu * int_0^1 dt (1-t)^{nu-1} (1/2pi) int dtheta g,
// which is (nu/pi) int_D d^2mu(z) (1-|z|^2)^{nu+1} g with t = |z|^2.
class DiskQuadrature {
 public:
  DiskQuadrature(double nu, std::size_t n_radial, std::size_t n_theta) : nu_(nu), n_theta_(n_theta) {
    if (!(nu > 0.0)) throw DomainError("disk_quadrature: nu must be > 0 (the nu = 0 measure diverges)");
    if (n_radial == 0) throw DomainError("disk_quadrature: need at least one radial node");
    if (n_theta == 0 || n_theta % 2 != 0) throw DomainError("disk_quadrature: n_theta must be even and positive");
    build_gauss_jacobi(n_radial);
  }

  double nu() const noexcept { return nu_; }
  std::size_t n_radial() const noexcept { return static_cast<std::size_t>(t_nodes_.size()); }
  std::size_t n_theta() const noexcept { return n_theta_; }
  // Radial rule for int_0^1 (1-t)^{nu-1} h(t) dt.
  const RealVector& t_nodes() const noexcept { return t_nodes_; }
  const RealVector& t_weights() const noexcept { return t_weights_; }
  double theta(std::size_t j) const { return kTwoPi * double(j) / double(n_theta_); }

  // Polynomial degree in t integrated exactly.
  std::size_t radial_exactness() const { return 2 * n_radial() - 1; }

  // nu * sum_i W_i (1/N_theta) sum_j h(t_i, theta_j); h receives the disk point.
  template <class Fn>
  auto integrate(Fn&& h) const {
    // Dynamic-size results (matrices) cannot be value-initialized to zero,
    // so every sum is seeded with its first term.
    using R = std::decay_t<decltype(h(DiskPoint(0.0, 0.0)))>;
    std::optional<R> total;
    for (Eigen::Index i = 0; i < t_nodes_.size(); ++i) {
      const double rho = std::sqrt(t_nodes_(i));
      R ring = h(DiskPoint(rho, theta(0)));
      for (std::size_t j = 1; j < n_theta_; ++j) ring += h(DiskPoint(rho, theta(j)));
      R term = (t_weights_(i) / double(n_theta_)) * ring;
      if (total) {
        *total += term;
      } else {
        total.emplace(std::move(term));
      }
    }
    return R(nu_ * *total);
  }

 private:
  // Golub-Welsch on the Jacobi matrix of P^{(alpha, 0)}, alpha = nu - 1,
  // mapped from [-1, 1] to t = (1 + x)/2; total mass int_0^1 (1-t)^{nu-1} = 1/nu.
  void build_gauss_jacobi(std::size_t n) {
    const double a = nu_ - 1.0;
    const double b = 0.0;
    const auto nn = static_cast<Eigen::Index>(n);
    RealVector diag(nn);
    RealVector off(std::max<Eigen::Index>(nn - 1, 0));
    for (Eigen::Index k = 0; k < nn; ++k) {
      const double s = 2.0 * double(k) + a + b;
      diag(k) = (k == 0) ? (b - a) / (a + b + 2.0) : (b * b - a * a) / (s * (s + 2.0));
    }
    for (Eigen::Index k = 1; k < nn; ++k) {
      const double kk = double(k);
      const double s = 2.0 * kk + a + b;
      const double b2 = (k == 1) ? 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + a + b) * (2.0 + a + b) * (3.0 + a + b))
                                 : 4.0 * kk * (kk + a) * (kk + b) * (kk + a + b) / (s * s * (s + 1.0) * (s - 1.0));
      off(k - 1) = std::sqrt(b2);
    }
    t_nodes_.resize(nn);
    t_weights_.resize(nn);
    if (nn == 1) {
      t_nodes_(0) = 0.5 * (1.0 + diag(0));
      t_weights_(0) = 1.0 / nu_;
      return;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    for (Eigen::Index k = 0; k < nn; ++k) {
      t_nodes_(k) = 0.5 * (1.0 + es.eigenvalues()(k));
      const double v0 = es.eigenvectors()(0, k);
      t_weights_(k) = v0 * v0 / nu_;
    }
  }

  double nu_;
  std::size_t n_theta_;
  RealVector t_nodes_;
  RealVector t_weights_;
};

inline DiskQuadrature disk_quadrature(const PhaseParams& params, std::size_t n_radial, std::size_t n_theta) {
  return {params.nu(), n_radial, n_theta};
}

// Unnormalized coherent-state amplitudes u_n = c_n z^n, so that
// w_n = (1 - |z|^2)^{(nu+1)/2} u_n.
inline Vector unnormalized_amplitudes(std::size_t count, double nu, const DiskPoint& p) {
  Vector u(static_cast<Eigen::Index>(count));
  for (Eigen::Index n = 0; n < u.size(); ++n) {
    const double mag = (n == 0) ? 1.0
                       : p.rho() > 0.0
                           ? std::exp(0.5 * log_cn_squared(std::size_t(n), nu) + double(n) * std::log(p.rho()))
                           : 0.0;
    u(n) = std::polar(mag, double(n) * p.theta());
  }
  return u;
}

// max |R - 1| over the (n_max+1) x (n_max+1) block of
// R = (nu/pi) int_D d^2mu(z) |z><z|, assembled by quadrature.
inline double completeness_residual(TruncatedSpace space, const PhaseParams& params, const DiskQuadrature& quad,
                                    std::size_t n_max) {
  if (n_max > space.dim() - 1) throw DimensionError("completeness_residual: n_max must be <= dim - 1");
  if (quad.radial_exactness() < n_max) {
    throw QuadratureUnderResolved("completeness_residual: need 2 N_r - 1 >= n_max");
  }
  if (quad.n_theta() <= 2 * n_max) throw QuadratureUnderResolved("completeness_residual: need N_theta > 2 n_max");
  const auto block = static_cast<Eigen::Index>(n_max + 1);
  const Matrix r = quad.integrate([&](const DiskPoint& p) -> Matrix {
    const Vector u = unnormalized_amplitudes(n_max + 1, params.nu(), p);
    return u * u.adjoint();
  });
  return (r - Matrix::Identity(block, block)).cwiseAbs().maxCoeff();
}

// phi(z) = phi0 + pi - 2 arctan[rho sin(theta - phi0) / (1 - rho cos(theta - phi0))],
// in (phi0, phi0 + 2pi). Independent of nu, so it never sees PhaseParams.
inline double quantum_phase_function(double phi0, const DiskPoint& p) {
  const double d = p.theta() - phi0;
  return phi0 + kPi - 2.0 * std::atan(p.rho() * std::sin(d) / (1.0 - p.rho() * std::cos(d)));
}

inline double quantum_phase_function(const PhaseParams& params, const DiskPoint& p) {
  return quantum_phase_function(params.phi0(), p);
}

// phi0 + pi - 2 sum_{k<=K} rho^k sin(k(theta - phi0))/k
inline double quantum_phase_series(double phi0, const DiskPoint& p, std::size_t K) {
  const double d = p.theta() - phi0;
  double sum = 0.0;
  double rk = 1.0;
  for (std::size_t k = 1; k <= K; ++k) {
    rk *= p.rho();
    sum += rk * std::sin(double(k) * d) / double(k);
  }
  return phi0 + kPi - 2.0 * sum;
}

struct PhaseExpectation {
  double value = 0.0;  // Re <w|Phi|w> over the stored levels
  double slack = 0.0;  // bound on the contribution of the levels >= dim
};

inline PhaseExpectation diagonal_phase_expectation(const PhaseState& state, const FockOperator& phi) {
  if (!(phi.space() == state.space())) throw DimensionError("diagonal_phase_expectation: mismatched spaces");
  const Vector& w = state.coeffs();
  const Complex v = w.dot(phi.apply(w));
  const double phi0 = state.params().phi0();
  const double op_norm = std::max(std::abs(phi0), std::abs(phi0 + kTwoPi));
  const double tail = std::sqrt(state.tail_mass());
  return {v.real(), op_norm * (2.0 * tail + tail * tail) + 1e-12};
}

struct AharonovPoint {
  DiskPoint point;
  PhaseParams params;
};

// |alpha, k> = |z = alpha / sqrt(k+1)> with nu = k.
inline AharonovPoint aharonov_map(Complex alpha, double k) {
  if (!(k > 0.0)) throw DomainError("aharonov_map: k must be > 0");
  if (!(std::abs(alpha) < std::sqrt(k + 1.0))) throw DomainError("aharonov_map: need |alpha| < sqrt(k+1)");
  return {DiskPoint::from_complex(alpha / std::sqrt(k + 1.0)), PhaseParams(k, 0.0)};
}

// Glauber coherent state e^{-|alpha|^2/2} sum alpha^n / sqrt(n!) |n>, truncated.
inline Vector glauber_coherent(TruncatedSpace space, Complex alpha) {
  Vector v(space.size());
  const double r = std::abs(alpha);
  for (Eigen::Index n = 0; n < v.size(); ++n) {
    const double mag = (n == 0) ? std::exp(-0.5 * r * r)
                       : r > 0.0 ? std::exp(-0.5 * r * r + double(n) * std::log(r) - 0.5 * log_gamma(double(n) + 1.0))
                                 : 0.0;
    v(n) = std::polar(mag, double(n) * std::arg(alpha));
  }
  return v;
}

}  // namespace regphase
